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

#include "aedloc/features.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "aedloc/error.h"
#include "aedloc/util.h"

namespace aedloc {

namespace {
double HzToMel(double f) { return 2595.0 * std::log10(1.0 + f / 700.0); }
double MelToHz(double m) { return 700.0 * (std::pow(10.0, m / 2595.0) - 1.0); }
}  // namespace

FeatureSequence FeatureSequence::Slice(int begin, int end) const {
  if (begin < 0 || end > num_frames || begin > end) {
    throw DomainError("feature slice out of range");
  }
  FeatureSequence out;
  out.num_frames = end - begin;
  out.dim = dim;
  out.array_id = array_id;
  out.cell = cell;
  out.data.assign(data.begin() + static_cast<long>(begin) * dim,
                  data.begin() + static_cast<long>(end) * dim);
  return out;
}

FilterBank::FilterBank(double sample_rate, int frame_length, int bands,
                       double energy_floor)
    : frame_length_(frame_length),
      bands_(bands),
      floor_(energy_floor),
      fft_(NextPowerOfTwo(frame_length)),
      window_(HammingWindow(frame_length)),
      buffer_(frame_length),
      spectrum_(fft_.num_bins()) {
  if (bands < 1) throw DomainError("filter bank needs at least one band");
  const double top = HzToMel(0.5 * sample_rate);
  std::vector<double> edges(bands + 2);
  for (int i = 0; i < bands + 2; ++i) edges[i] = MelToHz(top * i / (bands + 1));
  const double bin_hz = sample_rate / fft_.size();
  for (int b = 0; b < bands; ++b) {
    const double lo = edges[b], mid = edges[b + 1], hi = edges[b + 2];
    centers_.push_back(mid);
    std::vector<double> w;
    int first = -1;
    for (int k = 0; k < fft_.num_bins(); ++k) {
      const double f = k * bin_hz;
      double v = 0.0;
      if (f > lo && f <= mid) v = (f - lo) / (mid - lo);
      else if (f > mid && f < hi) v = (hi - f) / (hi - mid);
      if (v > 0.0) {
        if (first < 0) first = k;
        w.resize(k - first + 1, 0.0);
        w[k - first] = v;
      }
    }
    // Bands narrower than a bin fall back to their nearest bin.
    if (first < 0) {
      first = std::min(fft_.num_bins() - 1, static_cast<int>(std::lround(mid / bin_hz)));
      w = {1.0};
    }
    first_bin_.push_back(first);
    weights_.push_back(std::move(w));
  }
}

std::vector<double> FilterBank::LogEnergies(std::span<const double> frame) {
  if (static_cast<int>(frame.size()) != frame_length_) {
    throw DomainError("frame has " + std::to_string(frame.size()) +
                      " samples, filter bank expects " +
                      std::to_string(frame_length_));
  }
  for (int i = 0; i < frame_length_; ++i) buffer_[i] = frame[i] * window_[i];
  fft_.Forward(buffer_, spectrum_);
  std::vector<double> out(bands_);
  for (int b = 0; b < bands_; ++b) {
    double e = 0.0;
    const auto& w = weights_[b];
    for (size_t i = 0; i < w.size(); ++i) e += w[i] * std::norm(spectrum_[first_bin_[b] + i]);
    out[b] = std::log(std::max(e, floor_));
  }
  return out;
}

std::vector<double> LogFilterbank(std::span<const double> frame,
                                  double sample_rate) {
  FilterBank bank(sample_rate, static_cast<int>(std::lround(0.030 * sample_rate)));
  return bank.LogEnergies(frame);
}

std::vector<double> FrequencyFilter(std::span<const double> e) {
  const int n = static_cast<int>(e.size());
  std::vector<double> o(n);
  for (int m = 0; m < n; ++m) {
    const double next = m + 1 < n ? e[m + 1] : 0.0;
    const double prev = m > 0 ? e[m - 1] : 0.0;
    o[m] = next - prev;
  }
  return o;
}

std::vector<double> TemporalDerivative(std::span<const double> rows, int width,
                                       int window) {
  if (width <= 0 || rows.empty() || rows.size() % width != 0) {
    throw DomainError("temporal derivative needs at least one whole frame");
  }
  const int t_max = static_cast<int>(rows.size() / width);
  double norm = 0.0;
  for (int n = 1; n <= window; ++n) norm += 2.0 * n * n;
  std::vector<double> out(rows.size(), 0.0);
  for (int t = 0; t < t_max; ++t) {
    for (int n = 1; n <= window; ++n) {
      const int ahead = std::min(t + n, t_max - 1);
      const int behind = std::max(t - n, 0);
      for (int d = 0; d < width; ++d) {
        out[t * width + d] += n * (rows[ahead * width + d] - rows[behind * width + d]);
      }
    }
    for (int d = 0; d < width; ++d) out[t * width + d] /= norm;
  }
  return out;
}

int NumFrames(long num_samples, int frame_length, int frame_shift) {
  if (num_samples < frame_length) return 0;
  return static_cast<int>((num_samples - frame_length) / frame_shift) + 1;
}

FeatureSequence ExtractFeatures(std::span<const double> signal,
                                double sample_rate,
                                const FeatureConfig& config) {
  const int length = static_cast<int>(std::lround(config.frame_seconds * sample_rate));
  const int shift = static_cast<int>(std::lround(config.shift_seconds * sample_rate));
  FilterBank bank(sample_rate, length, config.bands, config.energy_floor);
  const int t_max = NumFrames(static_cast<long>(signal.size()), length, shift);
  const int b = config.bands;
  FeatureSequence out;
  out.num_frames = t_max;
  out.dim = 2 * b;
  out.data.assign(static_cast<size_t>(t_max) * out.dim, 0.0);
  if (t_max == 0) return out;
  std::vector<double> ff(static_cast<size_t>(t_max) * b);
  for (int t = 0; t < t_max; ++t) {
    const auto e = bank.LogEnergies(signal.subspan(static_cast<size_t>(t) * shift, length));
    const auto o = FrequencyFilter(e);
    std::copy(o.begin(), o.end(), ff.begin() + static_cast<long>(t) * b);
  }
  const auto delta = TemporalDerivative(ff, b, config.delta_window);
  for (int t = 0; t < t_max; ++t) {
    auto row = out.Row(t);
    std::copy_n(ff.begin() + static_cast<long>(t) * b, b, row.begin());
    std::copy_n(delta.begin() + static_cast<long>(t) * b, b, row.begin() + b);
  }
  return out;
}

void WriteFeatures(const std::string& path, const FeatureSequence& f) {
  static_assert(std::endian::native == std::endian::little);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path + "'");
  const std::uint32_t header[2] = {static_cast<std::uint32_t>(f.num_frames),
                                   static_cast<std::uint32_t>(f.dim)};
  out.write(reinterpret_cast<const char*>(header), sizeof(header));
  std::vector<float> data(f.data.begin(), f.data.end());
  out.write(reinterpret_cast<const char*>(data.data()),
            static_cast<std::streamsize>(data.size() * sizeof(float)));
}

FeatureSequence ReadFeatures(const std::string& path) {
  const std::string bytes = ReadFileBytes(path);
  std::uint32_t header[2];
  if (bytes.size() < sizeof(header)) throw DataError("'" + path + "' is truncated");
  std::memcpy(header, bytes.data(), sizeof(header));
  const size_t count = static_cast<size_t>(header[0]) * header[1];
  if (bytes.size() != sizeof(header) + count * sizeof(float)) {
    throw DataError("'" + path + "' size does not match its header");
  }
  std::vector<float> data(count);
  std::memcpy(data.data(), bytes.data() + sizeof(header), count * sizeof(float));
  FeatureSequence f;
  f.num_frames = static_cast<int>(header[0]);
  f.dim = static_cast<int>(header[1]);
  f.data.assign(data.begin(), data.end());
  return f;
}

}  // namespace aedloc
