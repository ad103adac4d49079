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

#ifndef AEDLOC_BASELINES_H_
#define AEDLOC_BASELINES_H_

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "aedloc/dsp.h"
#include "aedloc/features.h"
#include "aedloc/hmm.h"
#include "aedloc/scene.h"
#include "aedloc/synth.h"

namespace aedloc {

// Circular cross-correlation of a and b with PHAT weighting, indexed by lag
// modulo fft_size. A peak at lag d means b lags a by d samples. Throws
// DomainError on unequal lengths or an all-zero input.
std::vector<double> GccPhat(std::span<const double> a, std::span<const double> b,
                            int fft_size);

enum class SrpSearch { kExhaustive, kRegionContraction };

struct SrpConfig {
  int frame_length = 512;
  int fft_size = 1024;
  int frame_shift = 320;
  // Flat microphone index pairs; empty means every pair of the scene.
  std::vector<std::pair<int, int>> pairs;
  SrpSearch search = SrpSearch::kExhaustive;
  int src_samples = 200;
  double src_contraction = 0.7;
  int src_iterations = 8;
  std::uint64_t src_seed = 1;

  void Validate(const SceneConfig& scene) const;
};

class SrpLocalizer {
 public:
  SrpLocalizer(const SceneConfig& scene, SrpConfig config);

  const SrpConfig& config() const { return config_; }
  int num_pairs() const { return static_cast<int>(config_.pairs.size()); }

  // GCC-PHAT of every pair on the Hann-windowed frame at `start`.
  std::vector<std::vector<double>> FrameCorrelations(
      std::span<const std::vector<double>> channels, long start);

  // Steered response at a point: sum over pairs of the correlation at the
  // pair's geometric lag, linearly interpolated.
  double Power(const std::vector<std::vector<double>>& gcc, Point2 x) const;
  // One value per cell centroid.
  std::vector<double> Map(const std::vector<std::vector<double>>& gcc) const;
  // Continuous maximum over the room by stochastic region contraction.
  Point2 RegionContraction(const std::vector<std::vector<double>>& gcc,
                           std::mt19937_64& rng) const;

  // Frame starts covering [start, end) seconds with whole frames. Throws
  // DomainError when no frame fits.
  std::vector<long> FrameStarts(double start, double end, long num_samples) const;

  // Event-level cells: per-frame estimates averaged over the interval and
  // mapped to a cell. With two sources the second cell comes from the
  // per-frame second-highest cells; a duplicate falls back to the next best
  // cell of the accumulated map.
  std::vector<int> LocalizeEvent(std::span<const std::vector<double>> channels,
                                 double start, double end, int n_sources);

 private:
  double Lag(int pair, Point2 x) const;

  SceneConfig scene_;
  SrpConfig config_;
  std::vector<Point2> mics_;
  std::vector<std::vector<double>> cell_lags_;  // [pair][cell]
  std::vector<double> window_;
  RealFft fft_;
};

// Channels of a recording as doubles.
std::vector<std::vector<double>> RecordingChannels(const MultichannelRecording& rec);

// All-combinations recognizer on one microphone channel: a model for every
// isolated event class and one for every event class overlapped with speech.
struct CombinationModel {
  std::vector<int> classes;  // the overlapped classes, speech last
  std::string label;
  HmmModel model;
};

struct CombinationInventory {
  int channel = 0;
  std::vector<CombinationModel> models;
};

struct LabeledSegment {
  int class_id = 0;
  FeatureSequence features;
};

// `isolated` holds single-source segments; `mixed` holds segments of event
// class_id overlapped with speech. Throws DataError when an event class lacks
// either kind, or speech segments are missing while speech_alone is set.
CombinationInventory TrainAllCombinations(const SceneConfig& scene,
                                          std::span<const LabeledSegment> isolated,
                                          std::span<const LabeledSegment> mixed,
                                          const TrainingConfig& config,
                                          bool speech_alone, int channel,
                                          int jobs = 1);

// Index of the best scoring model; ties go to the lowest index.
int ClassifyCombination(const CombinationInventory& inventory,
                        const FeatureSequence& segment);

// Stored as a one-array model inventory whose labels name the overlapped
// classes joined by '+'; the channel goes in the array id.
void SaveCombinations(const std::string& path, const CombinationInventory& inv);
CombinationInventory LoadCombinations(const std::string& path,
                                      const SceneConfig& scene);

// Models under speech-only pairing: each event class alone and with speech.
int RestrictedCombinationCount(int event_classes, bool speech_alone);
// Every ordered assignment of S simultaneous sources over C classes.
long UnrestrictedCombinationCount(int classes, int sources);

}  // namespace aedloc

#endif  // AEDLOC_BASELINES_H_
