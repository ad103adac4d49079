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

#ifndef AEDLOC_JOINT_H_
#define AEDLOC_JOINT_H_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "aedloc/beamform.h"
#include "aedloc/features.h"
#include "aedloc/hmm.h"
#include "aedloc/scene.h"
#include "aedloc/synth.h"

namespace aedloc {

// Features of every beamformer output of a recording, index k * P + j.
struct ChannelFeatures {
  int num_arrays = 0;
  int num_cells = 0;
  std::vector<FeatureSequence> channels;

  const FeatureSequence& at(int k, int j) const {
    return channels[static_cast<size_t>(k) * num_cells + j];
  }
  int num_frames() const { return channels.empty() ? 0 : channels[0].num_frames; }
};

ChannelFeatures ComputeChannelFeatures(
    const SceneConfig& scene, std::span<const SteeringBeamformer> beamformers,
    const MultichannelRecording& recording, const FeatureConfig& config = {},
    int jobs = 1);

// Log emission tables of every channel against its array's models, shared by
// both steps.
struct ChannelScores {
  int num_arrays = 0;
  int num_cells = 0;
  std::vector<EmissionTable> tables;

  const EmissionTable& at(int k, int j) const {
    return tables[static_cast<size_t>(k) * num_cells + j];
  }
};

ChannelScores ScoreChannels(const ModelInventory& inventory,
                            const ChannelFeatures& features, int jobs = 1);

struct Step1Result {
  // Decodings of every channel, index k * P + j.
  std::vector<DecodedSequence> channels;
  // Channel indices sorted by decreasing Viterbi score, ties by index.
  std::vector<int> ranking;

  const DecodedSequence& best() const { return channels[ranking[0]]; }
};

Step1Result Step1Detect(const ModelInventory& inventory,
                        const ChannelScores& scores,
                        const DecoderConfig& decoder = {}, int jobs = 1);

struct FrameInterval {
  int start = 0;  // inclusive
  int end = 0;    // exclusive
};

// Non-silence segments of a decoding.
std::vector<FrameInterval> EventIntervals(const DecodedSequence& decoded,
                                          int silence_class);

// log p(X_k | class i, cell j) over one interval, shape K x P x C.
struct LikelihoodTensor {
  FrameInterval interval;
  int num_arrays = 0;
  int num_cells = 0;
  int num_classes = 0;
  std::vector<double> values;

  double at(int k, int j, int i) const {
    return values[(static_cast<size_t>(k) * num_cells + j) * num_classes + i];
  }
  double& at(int k, int j, int i) {
    return values[(static_cast<size_t>(k) * num_cells + j) * num_classes + i];
  }
};

LikelihoodTensor BuildLikelihoodTensor(FrameInterval interval,
                                       const ModelInventory& inventory,
                                       const ChannelScores& scores);
// Direct path from features; used where no emission tables are cached.
LikelihoodTensor BuildLikelihoodTensor(FrameInterval interval,
                                       const ModelInventory& inventory,
                                       const ChannelFeatures& features);

struct EventHypothesis {
  int class_id = 0;
  int cell = 0;
  FrameInterval frames;
  double start = 0.0;  // seconds
  double end = 0.0;
  double score = 0.0;  // fused log posterior up to a constant
  bool is_speech = false;
};

// Restricts the argmax domain; empty vectors allow everything.
struct DecisionMask {
  std::vector<bool> classes;
  std::vector<bool> cells;
};

// argmax over (class, cell) of sum_k log p(X_k | c, s) + log p(c) + log p(s).
// Ties go to the lowest class, then the lowest cell. Throws DomainError when
// no allowed candidate has a nonzero prior.
EventHypothesis MapDecide(const LikelihoodTensor& tensor,
                          const PriorTable& priors,
                          const DecisionMask& mask = {});

struct FrameTiming {
  double frame_seconds = 0.030;
  double shift_seconds = 0.020;

  double StartTime(int frame) const { return frame * shift_seconds; }
  double EndTime(int end_frame) const {
    return (end_frame - 1) * shift_seconds + frame_seconds;
  }
  FrameInterval ToFrames(double start, double end) const;
};

// One or two MAP passes over an interval. The second pass drops the first
// winner's class and cell. Silence is never a candidate.
std::vector<EventHypothesis> DecideInterval(const LikelihoodTensor& tensor,
                                            const PriorTable& priors,
                                            int n_sources, int silence_class,
                                            int speech_class,
                                            const FrameTiming& timing,
                                            const DecisionMask& mask = {});

struct JointConfig {
  FeatureConfig features;
  DecoderConfig decoder;
  int n_sources = 1;
  // Second-source intervals taken from the second best Step-1 channel.
  bool second_interval_from_rank2 = false;
  int jobs = 1;
};

struct JointOutput {
  Step1Result step1;
  std::vector<EventHypothesis> hypotheses;
};

// Step 1 on the scores, then MAP decisions on every detected interval.
JointOutput RecognizeLocalize(const ModelInventory& inventory,
                              const ChannelScores& scores,
                              const PriorTable& priors, const JointConfig& config,
                              const FrameTiming& timing, int silence_class,
                              int speech_class);

// End to end from a recording.
std::vector<EventHypothesis> RecognizeLocalize(
    const SceneConfig& scene, const MultichannelRecording& recording,
    const ModelInventory& inventory, const PriorTable& priors,
    const JointConfig& config);

// MAP decisions on given intervals (known end-points).
std::vector<EventHypothesis> ClassifyIntervals(
    std::span<const FrameInterval> intervals, const ModelInventory& inventory,
    const ChannelScores& scores, const PriorTable& priors, int n_sources,
    const FrameTiming& timing, int silence_class, int speech_class,
    std::span<const DecisionMask> masks = {});

// One line per event: class label, cell, centroid x y, start s, end s, score.
// Unknown class or cell fields are written as "-".
void WriteHypotheses(const std::string& path, const SceneConfig& scene,
                     std::span<const EventHypothesis> hypotheses);
std::vector<EventHypothesis> ReadHypotheses(const std::string& path,
                                            const SceneConfig& scene);

}  // namespace aedloc

#endif  // AEDLOC_JOINT_H_
