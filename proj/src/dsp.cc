// Copyright 2026 The aedloc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "aedloc/dsp.h"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <utility>

#include "aedloc/error.h"

namespace aedloc {

namespace {
// FFTW's planner is not thread safe.
std::mutex& PlannerMutex() {
  static std::mutex m;
  return m;
}
}  // namespace

RealFft::RealFft(int size) : size_(size) {
  if (size < 2) throw DomainError("FFT size must be at least 2");
  std::lock_guard<std::mutex> lock(PlannerMutex());
  real_ = fftw_alloc_real(size);
  auto* spec = fftw_alloc_complex(size / 2 + 1);
  spectrum_ = spec;
  forward_ = fftw_plan_dft_r2c_1d(size, real_, spec, FFTW_ESTIMATE);
  inverse_ = fftw_plan_dft_c2r_1d(size, spec, real_, FFTW_ESTIMATE);
}

RealFft::~RealFft() { Release(); }

RealFft::RealFft(RealFft&& other) noexcept
    : size_(std::exchange(other.size_, 0)),
      real_(std::exchange(other.real_, nullptr)),
      spectrum_(std::exchange(other.spectrum_, nullptr)),
      forward_(std::exchange(other.forward_, nullptr)),
      inverse_(std::exchange(other.inverse_, nullptr)) {}

RealFft& RealFft::operator=(RealFft&& other) noexcept {
  if (this != &other) {
    Release();
    size_ = std::exchange(other.size_, 0);
    real_ = std::exchange(other.real_, nullptr);
    spectrum_ = std::exchange(other.spectrum_, nullptr);
    forward_ = std::exchange(other.forward_, nullptr);
    inverse_ = std::exchange(other.inverse_, nullptr);
  }
  return *this;
}

void RealFft::Release() {
  if (!real_) return;
  std::lock_guard<std::mutex> lock(PlannerMutex());
  fftw_destroy_plan(static_cast<fftw_plan>(forward_));
  fftw_destroy_plan(static_cast<fftw_plan>(inverse_));
  fftw_free(real_);
  fftw_free(spectrum_);
  real_ = nullptr;
  spectrum_ = nullptr;
}

void RealFft::Forward(std::span<const double> in,
                      std::span<std::complex<double>> out) {
  const size_t n = std::min<size_t>(in.size(), size_);
  std::copy_n(in.begin(), n, real_);
  std::fill(real_ + n, real_ + size_, 0.0);
  fftw_execute(static_cast<fftw_plan>(forward_));
  const auto* spec = static_cast<const fftw_complex*>(spectrum_);
  for (int b = 0; b < num_bins(); ++b) out[b] = {spec[b][0], spec[b][1]};
}

void RealFft::Inverse(std::span<const std::complex<double>> in,
                      std::span<double> out) {
  auto* spec = static_cast<fftw_complex*>(spectrum_);
  for (int b = 0; b < num_bins(); ++b) {
    spec[b][0] = in[b].real();
    spec[b][1] = in[b].imag();
  }
  fftw_execute(static_cast<fftw_plan>(inverse_));
  const double scale = 1.0 / size_;
  for (int i = 0; i < size_; ++i) out[i] = real_[i] * scale;
}

std::vector<double> HammingWindow(int n) {
  std::vector<double> w(n, 1.0);
  if (n == 1) return w;
  for (int i = 0; i < n; ++i) {
    w[i] = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * i / (n - 1));
  }
  return w;
}

std::vector<double> HannWindow(int n) {
  std::vector<double> w(n, 1.0);
  if (n == 1) return w;
  for (int i = 0; i < n; ++i) {
    w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / (n - 1));
  }
  return w;
}

int NextPowerOfTwo(int n) {
  int p = 1;
  while (p < n) p <<= 1;
  return p;
}

std::vector<double> FractionalDelayTaps(double frac, int taps) {
  if (taps < 2 || taps % 2 != 0) {
    throw DomainError("fractional delay needs an even tap count >= 2");
  }
  const int half = taps / 2;
  std::vector<double> h(taps);
  double sum = 0.0;
  for (int i = 0; i < taps; ++i) {
    const double v = (i - half + 1) - frac;
    const double sinc =
        v == 0.0 ? 1.0
                 : std::sin(std::numbers::pi * v) / (std::numbers::pi * v);
    const double w = 0.5 * (1.0 + std::cos(2.0 * std::numbers::pi * v / taps));
    h[i] = sinc * w;
    sum += h[i];
  }
  for (double& x : h) x /= sum;
  return h;
}

void AddDelayed(std::span<const double> x, double delay, double gain, int taps,
                std::span<double> out) {
  const double whole = std::floor(delay);
  const long shift = static_cast<long>(whole);
  const auto h = FractionalDelayTaps(delay - whole, taps);
  const long half = taps / 2;
  const long n_in = static_cast<long>(x.size());
  const long n_out = static_cast<long>(out.size());
  for (long i = 0; i < taps; ++i) {
    const long q = i - half + 1;
    const double c = gain * h[i];
    // t - shift - q = k in [0, n_in)
    const long offset = shift + q;
    const long t0 = std::max(0L, offset);
    const long t1 = std::min(n_out, n_in + offset);
    for (long t = t0; t < t1; ++t) out[t] += c * x[t - offset];
  }
}

double MeanPower(std::span<const double> x) {
  if (x.empty()) return 0.0;
  double s = 0.0;
  for (double v : x) s += v * v;
  return s / static_cast<double>(x.size());
}

}  // namespace aedloc
