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


#include <cmath>
#include <filesystem>
#include <numbers>
#include <random>
#include <vector>

#include "aedloc/dsp.h"
#include "aedloc/error.h"
#include "aedloc/features.h"
#include "doctest.h"

namespace aedloc {
namespace {

std::vector<double> Noise(int n, std::uint64_t seed, double scale = 1.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, scale);
  std::vector<double> x(n);
  for (double& v : x) v = g(rng);
  return x;
}

TEST_CASE("fft round trip") {
  RealFft fft(64);
  const auto x = Noise(64, 1);
  std::vector<std::complex<double>> spec(fft.num_bins());
  std::vector<double> back(64);
  fft.Forward(x, spec);
  fft.Inverse(spec, back);
  for (int i = 0; i < 64; ++i) CHECK(back[i] == doctest::Approx(x[i]).epsilon(1e-12));
  // Bin 0 is the plain sum.
  double sum = 0.0;
  for (double v : x) sum += v;
  CHECK(spec[0].real() == doctest::Approx(sum).epsilon(1e-12));
}

TEST_CASE("fractional delay taps") {
  for (double frac : {0.0, 0.25, 0.5, 0.9}) {
    const auto h = FractionalDelayTaps(frac, 64);
    double dc = 0.0;
    for (double v : h) dc += v;
    CHECK(dc == doctest::Approx(1.0).epsilon(1e-12));
  }
  // Integer delays copy samples.
  const auto x = Noise(100, 2);
  std::vector<double> y(120, 0.0);
  AddDelayed(x, 7.0, 0.5, 64, y);
  for (int i = 0; i < 100; ++i) CHECK(y[i + 7] == doctest::Approx(0.5 * x[i]).epsilon(1e-12));
  CHECK(std::abs(y[3]) < 1e-12);
}

TEST_CASE("frequency filter on constant, ramp and random input") {
  const std::vector<double> c(16, 2.5);
  const auto oc = FrequencyFilter(c);
  CHECK(oc[0] == doctest::Approx(2.5));
  CHECK(oc[15] == doctest::Approx(-2.5));
  for (int m = 1; m < 15; ++m) CHECK(oc[m] == 0.0);
  std::vector<double> r(16);
  for (int m = 0; m < 16; ++m) r[m] = 0.5 * m + 1.0;
  const auto orr = FrequencyFilter(r);
  for (int m = 1; m < 15; ++m) CHECK(orr[m] == doctest::Approx(1.0));
  // Convolution with {1, 0, -1} over the zero padded sequence.
  const auto x = Noise(16, 3);
  const double h[3] = {1.0, 0.0, -1.0};
  const auto o = FrequencyFilter(x);
  for (int m = 0; m < 16; ++m) {
    double want = 0.0;
    for (int k = 0; k < 3; ++k) {
      const int i = m + 1 - k;
      if (i >= 0 && i < 16) want += h[k] * x[i];
    }
    CHECK(o[m] == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("temporal derivative") {
  const int w = 3, t_max = 10;
  std::vector<double> rows(w * t_max);
  for (int t = 0; t < t_max; ++t) {
    for (int d = 0; d < w; ++d) rows[t * w + d] = 7.0 + (d + 1) * 0.4 * t;
  }
  const auto delta = TemporalDerivative(rows, w);
  for (int t = 2; t < t_max - 2; ++t) {
    for (int d = 0; d < w; ++d) {
      CHECK(delta[t * w + d] == doctest::Approx((d + 1) * 0.4).epsilon(1e-12));
    }
  }
  const std::vector<double> flat(w * t_max, 3.0);
  for (double v : TemporalDerivative(flat, w)) CHECK(v == 0.0);
  for (double v : TemporalDerivative(std::vector<double>{1.0, 2.0, 3.0}, 3)) CHECK(v == 0.0);
  CHECK_THROWS_AS(TemporalDerivative(std::vector<double>{}, 3), DomainError);
}

TEST_CASE("filter bank basics") {
  FilterBank bank(16000.0, 480);
  const std::vector<double> zero(480, 0.0);
  for (double v : bank.LogEnergies(zero)) CHECK(v == doctest::Approx(std::log(1e-10)));
  CHECK_THROWS_AS(bank.LogEnergies(std::vector<double>(479, 0.0)), DomainError);
  // A tone at the center of band 5 peaks there.
  const double f = bank.centers()[5];
  std::vector<double> tone(480);
  for (int i = 0; i < 480; ++i) tone[i] = std::sin(2.0 * std::numbers::pi * f * i / 16000.0);
  const auto e = bank.LogEnergies(tone);
  int best = 0;
  for (int b = 1; b < 16; ++b) {
    if (e[b] > e[best]) best = b;
  }
  CHECK(best == 5);
  for (size_t b = 1; b < bank.centers().size(); ++b) {
    CHECK(bank.centers()[b] > bank.centers()[b - 1]);
  }
}

TEST_CASE("log energies scale with the square of the gain") {
  FilterBank bank(16000.0, 480);
  auto x = Noise(480, 4);
  const auto a = bank.LogEnergies(x);
  for (double& v : x) v *= 2.0;
  const auto b = bank.LogEnergies(x);
  for (int i = 0; i < 16; ++i) CHECK(b[i] - a[i] == doctest::Approx(std::log(4.0)).epsilon(1e-9));
}

TEST_CASE("feature layout and gain covariance") {
  const int n = 16000;
  CHECK(NumFrames(n, 480, 320) == (n - 480) / 320 + 1);
  CHECK(NumFrames(479, 480, 320) == 0);
  auto x = Noise(n, 5, 0.1);
  const auto f = ExtractFeatures(x, 16000.0);
  CHECK(f.dim == 32);
  CHECK(f.num_frames == NumFrames(n, 480, 320));
  for (double& v : x) v *= 10.0;
  const auto g = ExtractFeatures(x, 16000.0);
  const double shift = 2.0 * std::log(10.0);
  for (int t = 0; t < f.num_frames; ++t) {
    const auto a = f.Row(t), b = g.Row(t);
    CHECK(b[0] - a[0] == doctest::Approx(shift).epsilon(1e-9));
    CHECK(b[15] - a[15] == doctest::Approx(-shift).epsilon(1e-9));
    for (int d = 1; d < 15; ++d) CHECK(b[d] == doctest::Approx(a[d]).epsilon(1e-9));
    for (int d = 16; d < 32; ++d) CHECK(b[d] == doctest::Approx(a[d]).epsilon(1e-9).scale(1.0));
  }
  const auto short_sig = ExtractFeatures(std::vector<double>(100, 0.0), 16000.0);
  CHECK(short_sig.num_frames == 0);
}

TEST_CASE("feature file round trip") {
  const auto f = ExtractFeatures(Noise(4000, 6, 0.1), 16000.0);
  const auto path = (std::filesystem::temp_directory_path() / "aedloc_feat_test.bin").string();
  WriteFeatures(path, f);
  const auto back = ReadFeatures(path);
  REQUIRE(back.num_frames == f.num_frames);
  REQUIRE(back.dim == f.dim);
  for (size_t i = 0; i < f.data.size(); ++i) {
    CHECK(back.data[i] == static_cast<double>(static_cast<float>(f.data[i])));
  }
  std::filesystem::resize_file(path, 12);
  CHECK_THROWS_AS(ReadFeatures(path), DataError);
  std::filesystem::remove(path);
}

TEST_CASE("slice bounds") {
  const auto f = ExtractFeatures(Noise(4000, 7, 0.1), 16000.0);
  const auto s = f.Slice(2, 5);
  CHECK(s.num_frames == 3);
  CHECK(s.Row(0)[3] == f.Row(2)[3]);
  CHECK_THROWS_AS(f.Slice(3, 2), DomainError);
  CHECK_THROWS_AS(f.Slice(0, f.num_frames + 1), DomainError);
}

}  // namespace
}  // namespace aedloc
