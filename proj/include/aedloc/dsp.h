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

#ifndef AEDLOC_DSP_H_
#define AEDLOC_DSP_H_

#include <complex>
#include <span>
#include <vector>

namespace aedloc {

// Real-input FFT of fixed size backed by FFTW. Each instance owns its plans and
// buffers, so one instance must not be used from two threads at once.
class RealFft {
 public:
  explicit RealFft(int size);
  ~RealFft();
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;
  RealFft(RealFft&& other) noexcept;
  RealFft& operator=(RealFft&& other) noexcept;

  int size() const { return size_; }
  int num_bins() const { return size_ / 2 + 1; }

  // `in` shorter than size() is zero padded. `out` must hold num_bins().
  void Forward(std::span<const double> in, std::span<std::complex<double>> out);
  // Inverse including the 1/size normalization. `out` must hold size().
  void Inverse(std::span<const std::complex<double>> in, std::span<double> out);

 private:
  void Release();

  int size_ = 0;
  double* real_ = nullptr;
  void* spectrum_ = nullptr;
  void* forward_ = nullptr;
  void* inverse_ = nullptr;
};

std::vector<double> HammingWindow(int n);
std::vector<double> HannWindow(int n);

int NextPowerOfTwo(int n);

// Hann-windowed sinc interpolator taps for a fractional delay `frac` in [0, 1),
// indexed q = -taps/2 + 1 .. taps/2, normalized to unit DC gain.
std::vector<double> FractionalDelayTaps(double frac, int taps);

// out[t] += gain * x(t - delay) for every t in out, with x band-limited
// interpolated and zero outside its support. delay may be any real number.
void AddDelayed(std::span<const double> x, double delay, double gain, int taps,
                std::span<double> out);

double MeanPower(std::span<const double> x);

}  // namespace aedloc

#endif  // AEDLOC_DSP_H_
