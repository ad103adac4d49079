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

#ifndef AEDLOC_EVAL_H_
#define AEDLOC_EVAL_H_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "aedloc/baselines.h"
#include "aedloc/features.h"
#include "aedloc/hmm.h"
#include "aedloc/joint.h"
#include "aedloc/scene.h"
#include "aedloc/synth.h"

namespace aedloc {

struct MatchCriteria {
  bool require_class = true;
  bool require_cell = false;
  // Minimum overlap as a fraction of the truth event's duration; any
  // positive overlap counts at zero.
  double min_overlap_fraction = 0.0;
};

struct DetectionScore {
  long matched = 0;
  long hypotheses = 0;
  long truths = 0;

  long insertions() const { return hypotheses - matched; }
  long deletions() const { return truths - matched; }
  double precision() const;
  double recall() const;
  double f() const;
  void Add(const DetectionScore& o);
};

double FScore(double precision, double recall);

struct Matching {
  // (hypothesis index, truth index)
  std::vector<std::pair<int, int>> pairs;
  DetectionScore score;
};

// One-to-one greedy matching, longest overlap first. Ties are broken by the
// hypotheses' content, so the counts do not depend on the list order.
Matching MatchEvents(std::span<const GroundTruthEvent> hypotheses,
                     std::span<const GroundTruthEvent> truth,
                     const MatchCriteria& criteria = {});

struct RateCount {
  long correct = 0;
  long total = 0;

  double rate() const { return total ? static_cast<double>(correct) / total : 0.0; }
  void Add(const RateCount& o) {
    correct += o.correct;
    total += o.total;
  }
};

RateCount ClassificationAccuracy(std::span<const int> decided,
                                 std::span<const int> truth);

struct LocalizationScore {
  std::vector<RateCount> per_class;  // indexed by class id

  // Mean of the per-class rates over classes with at least one event.
  double average() const;
  RateCount overall() const;
  void Add(const LocalizationScore& o);
};

LocalizationScore LocalizationAccuracy(std::span<const int> decided_cells,
                                       std::span<const int> truth_cells,
                                       std::span<const int> truth_classes,
                                       int num_classes);

enum class Variant {
  kStep1Only,
  kProposedFlat,
  kProposedPriors,
  kKnownEndpoints,
  kKnownPosition,
  kSrpPhat,
  kAllCombinations,
};

Variant ParseVariant(const std::string& name);
std::string VariantName(Variant v);
std::vector<std::string> VariantNames();
bool UsesKnownEndpoints(Variant v);

struct MetricReport {
  std::string suite;
  std::string variant;
  std::string priors;  // "flat", "estimated" or "-"
  std::optional<RateCount> classification;
  std::optional<DetectionScore> detection;
  std::optional<LocalizationScore> localization;
  std::optional<DetectionScore> localization_f;

  void Add(const MetricReport& o);
};

std::vector<GroundTruthEvent> EventsOnly(std::span<const GroundTruthEvent> truth,
                                         const SceneConfig& scene);
std::vector<GroundTruthEvent> AsEvents(std::span<const EventHypothesis> hyps);

// Scores one recording's hypotheses for a variant. Estimated end-point
// variants get detection and localization F-scores; known end-point variants
// take, for each event, the first non-speech hypothesis of largest overlap as
// the decision; SRP-PHAT counts a localization as correct when any of the
// largest-overlap hypotheses has the right cell. Speech truth is ignored.
MetricReport EvaluateVariant(Variant variant, const SceneConfig& scene,
                             std::span<const EventHypothesis> hypotheses,
                             std::span<const GroundTruthEvent> truth,
                             const MatchCriteria& criteria = {});

struct ExperimentConfig {
  FeatureConfig features;
  TrainingConfig training;
  DecoderConfig decoder;
  bool prior_smoothing = true;
  // Event models see every beamformer of the array instead of only the one
  // steered at the event's cell.
  bool train_all_beams = false;
  bool second_interval_from_rank2 = false;
  SrpConfig srp;
  int baseline_channel = 0;
  bool speech_alone_model = false;
  bool run_srp = true;
  bool run_all_combinations = true;
  double min_overlap_fraction = 0.0;
  int jobs = 1;
};

struct TrainingRecording {
  const ChannelFeatures* features = nullptr;
  const std::vector<GroundTruthEvent>* truth = nullptr;
};

// Trains one model per class and array. Event segments come from the
// beamformer steered at the event's cell; silence segments from the gaps,
// spread over the beamformers of each array in turn.
ModelInventory TrainInventory(const SceneConfig& scene,
                              std::span<const TrainingRecording> recordings,
                              const ExperimentConfig& config,
                              std::vector<TrainingResult>* results = nullptr);

PriorTable EstimatePriors(const SceneConfig& scene,
                          std::span<const std::vector<GroundTruthEvent>> truths,
                          bool smoothing);

// Everything a trained system needs to produce hypotheses.
struct SystemModels {
  ModelInventory inventory;
  PriorTable priors;
  std::optional<CombinationInventory> combinations;
};

// Per recording caches shared across variants.
struct RecordingCache {
  const MultichannelRecording* recording = nullptr;
  ChannelFeatures features;
  FeatureSequence baseline_features;
};

RecordingCache PrepareRecording(const SceneConfig& scene,
                                std::span<const SteeringBeamformer> beamformers,
                                const MultichannelRecording& recording,
                                const ExperimentConfig& config);

// Labeled baseline-channel segments of a recording's truth events (silence
// excluded; speech too when events_only).
std::vector<LabeledSegment> BaselineSegments(const SceneConfig& scene,
                                             const RecordingCache& cache,
                                             const FrameTiming& timing,
                                             bool events_only);

// Hypotheses of one variant on one recording. `priors_flat` selects flat
// priors for the known end-point variants.
std::vector<EventHypothesis> RunVariant(Variant variant, const SceneConfig& scene,
                                        const RecordingCache& cache,
                                        const ChannelScores* scores,
                                        const SystemModels& models, int n_sources,
                                        const ExperimentConfig& config,
                                        bool priors_flat = false);

struct ExperimentReport {
  std::vector<MetricReport> rows;
  std::vector<std::string> warnings;
  // Largest relative log-likelihood drop seen across all EM runs.
  double worst_em_drop = 0.0;
  // Position priors used by each fold, in session order.
  std::vector<PriorTable> fold_priors;

  const MetricReport* Find(const std::string& suite, const std::string& variant,
                           const std::string& priors) const;
};

// Leave-one-session-out over the sessions; models and priors are re-estimated
// on the training sessions of every fold. Throws DomainError with fewer than
// two sessions.
ExperimentReport RunLeaveOneOut(const SceneConfig& scene,
                                std::span<const Session> sessions,
                                const ExperimentConfig& config);

std::string FormatReportTable(std::span<const MetricReport> rows);
// Long format: suite, variant, priors, metric, value.
std::string FormatReportTsv(std::span<const MetricReport> rows);

// nx values per line, ny lines, cell row 0 first.
std::string FormatGrid(const CellGrid& grid, std::span<const double> values);

}  // namespace aedloc

#endif  // AEDLOC_EVAL_H_
