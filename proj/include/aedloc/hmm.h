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

#ifndef AEDLOC_HMM_H_
#define AEDLOC_HMM_H_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "aedloc/features.h"

namespace aedloc {

// Diagonal-covariance Gaussian mixture. Call Finalize() after editing the
// parameters; it refreshes the cached log normalizers.
struct DiagGmm {
  int dim = 0;
  std::vector<double> weights;
  std::vector<double> means;      // components x dim
  std::vector<double> variances;  // components x dim

  int num_components() const { return static_cast<int>(weights.size()); }
  void Finalize();
  // log sum_m w_m N(x; mu_m, diag(var_m))
  double LogLikelihood(std::span<const double> x) const;
  // Per-component log(w_m) + log N(x; ...).
  void ComponentLogLikelihoods(std::span<const double> x,
                               std::span<double> out) const;

 private:
  std::vector<double> log_const_;  // log w_m - 0.5 * (D log 2pi + sum log var)
  std::vector<double> inv_var_;
};

// Left-to-right HMM: a non-emitting entry goes to state 0 with probability 1,
// state s loops with self_loop[s] or advances to s + 1; the last state
// advances to the non-emitting exit.
struct HmmModel {
  int class_id = 0;
  int array_id = 0;
  std::string label;
  std::vector<DiagGmm> states;
  std::vector<double> self_loop;

  int num_states() const { return static_cast<int>(states.size()); }
  int dim() const { return states.empty() ? 0 : states[0].dim; }
  // (N + 2) x (N + 2) row-stochastic matrix, entry = 0, exit = N + 1.
  std::vector<std::vector<double>> TransitionMatrix() const;
  // Throws DomainError when weights, transitions or variances are invalid.
  void Validate(double variance_floor = 0.0) const;
};

// Log emission scores laid out frame-major: at(t, s) for the states of a set
// of models concatenated in order.
struct EmissionTable {
  int num_frames = 0;
  int width = 0;
  std::vector<int> offsets;  // first column of each model
  std::vector<double> data;

  double at(int t, int column) const {
    return data[static_cast<size_t>(t) * width + column];
  }
};

EmissionTable ComputeEmissions(std::span<const HmmModel> models,
                               const FeatureSequence& features);

// log p(X | model) summed over all state paths, including the exit
// transition. Throws DomainError when the segment is shorter than the model.
double ForwardLogLikelihood(const HmmModel& model,
                            const FeatureSequence& features);
// Same, over frames [begin, end) of a precomputed table column block.
double ForwardLogLikelihood(const HmmModel& model, const EmissionTable& table,
                            int model_index, int begin, int end);

struct TrainingConfig {
  int num_states = 3;
  int num_components = 4;
  int max_iterations = 20;
  // Stop when the relative log-likelihood gain falls below this.
  double tolerance = 1e-4;
  // Variance floor as a fraction of the global per-dimension variance.
  double variance_floor_scale = 1e-3;
  double min_variance = 1e-6;
  int kmeans_iterations = 10;
  std::uint64_t seed = 1;
};

struct TrainingResult {
  HmmModel model;
  // Total log-likelihood of the training data under the parameters of each
  // iteration; the last entry belongs to the returned model.
  std::vector<double> log_likelihood;
  std::vector<double> variance_floor;
  std::vector<std::string> warnings;
};

// Baum-Welch over isolated segments. Every segment must have at least
// num_states frames. Initialization splits each segment uniformly across the
// states and seeds the mixtures with k-means.
TrainingResult TrainBaumWelch(std::span<const FeatureSequence> segments,
                              int class_id, int array_id,
                              const TrainingConfig& config = {});

struct DecodedSegment {
  int label = 0;
  int start = 0;  // frames, inclusive
  int end = 0;    // frames, exclusive
};

struct DecodedSequence {
  std::vector<DecodedSegment> segments;
  double log_likelihood = 0.0;
  int array_id = -1;
  int cell = -1;
};

struct DecoderConfig {
  // Added once per model entered; zero leaves all label sequences equally
  // likely.
  double insertion_penalty = 0.0;
  // When false the loop grammar alternates silence and events.
  bool allow_event_to_event = false;
};

// Continuous decoding with a loop grammar over `models`, where models[i] has
// label i. silence_label < 0 disables the silence/event alternation.
DecodedSequence ViterbiDecode(std::span<const HmmModel> models,
                              int silence_label,
                              const FeatureSequence& features,
                              const DecoderConfig& config = {});
DecodedSequence ViterbiDecode(std::span<const HmmModel> models,
                              int silence_label, const EmissionTable& table,
                              const DecoderConfig& config = {});

// Models of every class (including speech and silence) for every array; the
// class set is the same for all arrays.
struct ModelInventory {
  std::vector<std::vector<HmmModel>> arrays;  // [k][class]
  int silence_class = -1;
  int speech_class = -1;

  int num_arrays() const { return static_cast<int>(arrays.size()); }
  int num_classes() const { return arrays.empty() ? 0 : static_cast<int>(arrays[0].size()); }
  const HmmModel& at(int k, int c) const { return arrays.at(k).at(c); }
  void Validate() const;
};

void WriteInventory(std::ostream& out, const ModelInventory& inv);
ModelInventory ReadInventory(std::istream& in);
void SaveInventory(const std::string& path, const ModelInventory& inv);
ModelInventory LoadInventory(const std::string& path);

}  // namespace aedloc

#endif  // AEDLOC_HMM_H_
