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

#ifndef AEDLOC_FEATURES_H_
#define AEDLOC_FEATURES_H_

#include <span>
#include <string>
#include <vector>

#include "aedloc/dsp.h"

namespace aedloc {

struct FeatureConfig {
  double frame_seconds = 0.030;
  double shift_seconds = 0.020;
  int bands = 16;
  double energy_floor = 1e-10;
  int delta_window = 2;
};

// T x dim matrix, row-major. Columns [0, bands) hold frequency-filtered log
// energies, [bands, 2 * bands) their temporal derivatives.
struct FeatureSequence {
  int num_frames = 0;
  int dim = 0;
  int array_id = -1;
  int cell = -1;
  std::vector<double> data;

  std::span<const double> Row(int t) const {
    return {data.data() + static_cast<size_t>(t) * dim, static_cast<size_t>(dim)};
  }
  std::span<double> Row(int t) {
    return {data.data() + static_cast<size_t>(t) * dim, static_cast<size_t>(dim)};
  }
  // Frames [begin, end) as a new sequence.
  FeatureSequence Slice(int begin, int end) const;
};

// Mel-spaced triangular filters over [0, fs/2] applied to the power spectrum
// of a Hamming-windowed frame.
class FilterBank {
 public:
  FilterBank(double sample_rate, int frame_length, int bands = 16,
             double energy_floor = 1e-10);

  int frame_length() const { return frame_length_; }
  int bands() const { return bands_; }
  // Center frequency (Hz) of each band.
  const std::vector<double>& centers() const { return centers_; }

  // Throws DomainError when frame.size() != frame_length().
  std::vector<double> LogEnergies(std::span<const double> frame);

 private:
  int frame_length_;
  int bands_;
  double floor_;
  RealFft fft_;
  std::vector<double> window_;
  std::vector<double> centers_;
  // Per band: first bin and weights.
  std::vector<int> first_bin_;
  std::vector<std::vector<double>> weights_;
  std::vector<double> buffer_;
  std::vector<std::complex<double>> spectrum_;
};

// 30 ms of samples at `sample_rate` through a 16-band bank.
std::vector<double> LogFilterbank(std::span<const double> frame,
                                  double sample_rate);

// o[m] = e[m + 1] - e[m - 1] with zeros beyond both ends.
std::vector<double> FrequencyFilter(std::span<const double> log_energies);

// Regression deltas over +-window frames with edge replication. Input rows are
// `width` values each; output is aligned frame for frame.
std::vector<double> TemporalDerivative(std::span<const double> rows, int width,
                                       int window = 2);

int NumFrames(long num_samples, int frame_length, int frame_shift);

FeatureSequence ExtractFeatures(std::span<const double> signal,
                                double sample_rate,
                                const FeatureConfig& config = {});

// Binary dump: uint32 T, uint32 dim, then T * dim little-endian float32.
void WriteFeatures(const std::string& path, const FeatureSequence& f);
FeatureSequence ReadFeatures(const std::string& path);

}  // namespace aedloc

#endif  // AEDLOC_FEATURES_H_
