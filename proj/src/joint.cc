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

#include "aedloc/joint.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include "aedloc/error.h"
#include "aedloc/util.h"

namespace aedloc {

ChannelFeatures ComputeChannelFeatures(
    const SceneConfig& scene, std::span<const SteeringBeamformer> beamformers,
    const MultichannelRecording& recording, const FeatureConfig& config,
    int jobs) {
  if (recording.num_channels() != scene.num_channels()) {
    throw DataError("recording has " + std::to_string(recording.num_channels()) +
                    " channels, scene expects " + std::to_string(scene.num_channels()));
  }
  const int k_count = scene.num_arrays();
  const int p = scene.num_cells();
  if (static_cast<int>(beamformers.size()) != k_count * p) {
    throw DomainError("beamformer count does not match K * P");
  }
  std::vector<std::vector<std::vector<double>>> per_array(k_count);
  for (int k = 0; k < k_count; ++k) {
    for (int m = 0; m < scene.arrays[k].num_mics(); ++m) {
      per_array[k].push_back(recording.Channel(scene.ChannelOf(k, m)));
    }
  }
  ChannelFeatures out;
  out.num_arrays = k_count;
  out.num_cells = p;
  out.channels.resize(beamformers.size());
  ParallelFor(static_cast<int>(beamformers.size()), jobs, [&](int idx) {
    const auto& bf = beamformers[idx];
    const auto y = Apply(bf, per_array[bf.array_id]);
    FeatureSequence f = ExtractFeatures(y, scene.sample_rate, config);
    f.array_id = bf.array_id;
    f.cell = bf.cell;
    out.channels[idx] = std::move(f);
  });
  return out;
}

ChannelScores ScoreChannels(const ModelInventory& inventory,
                            const ChannelFeatures& features, int jobs) {
  if (inventory.num_arrays() != features.num_arrays) {
    throw DomainError("inventory and features disagree on the number of arrays");
  }
  ChannelScores out;
  out.num_arrays = features.num_arrays;
  out.num_cells = features.num_cells;
  out.tables.resize(features.channels.size());
  ParallelFor(static_cast<int>(features.channels.size()), jobs, [&](int idx) {
    const int k = idx / features.num_cells;
    out.tables[idx] = ComputeEmissions(inventory.arrays[k], features.channels[idx]);
  });
  return out;
}

Step1Result Step1Detect(const ModelInventory& inventory,
                        const ChannelScores& scores,
                        const DecoderConfig& decoder, int jobs) {
  const int n = static_cast<int>(scores.tables.size());
  if (n == 0) throw DomainError("no channels to decode");
  Step1Result r;
  r.channels.resize(n);
  ParallelFor(n, jobs, [&](int idx) {
    const int k = idx / scores.num_cells;
    auto d = ViterbiDecode(inventory.arrays[k], inventory.silence_class,
                           scores.tables[idx], decoder);
    d.array_id = k;
    d.cell = idx % scores.num_cells;
    r.channels[idx] = std::move(d);
  });
  r.ranking.resize(n);
  std::iota(r.ranking.begin(), r.ranking.end(), 0);
  std::stable_sort(r.ranking.begin(), r.ranking.end(), [&](int a, int b) {
    return r.channels[a].log_likelihood > r.channels[b].log_likelihood;
  });
  return r;
}

std::vector<FrameInterval> EventIntervals(const DecodedSequence& decoded,
                                          int silence_class) {
  std::vector<FrameInterval> out;
  for (const auto& s : decoded.segments) {
    if (s.label != silence_class) out.push_back({s.start, s.end});
  }
  return out;
}

namespace {

void CheckInterval(FrameInterval iv, int num_frames) {
  if (iv.start < 0 || iv.end > num_frames || iv.end <= iv.start) {
    throw DomainError("interval [" + std::to_string(iv.start) + ", " +
                      std::to_string(iv.end) + ") outside " +
                      std::to_string(num_frames) + " frames");
  }
}

LikelihoodTensor EmptyTensor(FrameInterval interval, const ModelInventory& inv,
                             int num_cells) {
  LikelihoodTensor t;
  t.interval = interval;
  t.num_arrays = inv.num_arrays();
  t.num_cells = num_cells;
  t.num_classes = inv.num_classes();
  t.values.assign(static_cast<size_t>(t.num_arrays) * num_cells * t.num_classes, 0.0);
  return t;
}

}  // namespace

LikelihoodTensor BuildLikelihoodTensor(FrameInterval interval,
                                       const ModelInventory& inventory,
                                       const ChannelScores& scores) {
  if (scores.tables.empty()) throw DomainError("no channel scores");
  CheckInterval(interval, scores.tables[0].num_frames);
  auto t = EmptyTensor(interval, inventory, scores.num_cells);
  for (int k = 0; k < t.num_arrays; ++k) {
    for (int j = 0; j < t.num_cells; ++j) {
      const auto& table = scores.at(k, j);
      for (int i = 0; i < t.num_classes; ++i) {
        t.at(k, j, i) = ForwardLogLikelihood(inventory.at(k, i), table, i,
                                             interval.start, interval.end);
      }
    }
  }
  return t;
}

LikelihoodTensor BuildLikelihoodTensor(FrameInterval interval,
                                       const ModelInventory& inventory,
                                       const ChannelFeatures& features) {
  if (features.channels.empty()) throw DomainError("no channel features");
  CheckInterval(interval, features.num_frames());
  auto t = EmptyTensor(interval, inventory, features.num_cells);
  for (int k = 0; k < t.num_arrays; ++k) {
    for (int j = 0; j < t.num_cells; ++j) {
      const auto seg = features.at(k, j).Slice(interval.start, interval.end);
      for (int i = 0; i < t.num_classes; ++i) {
        t.at(k, j, i) = ForwardLogLikelihood(inventory.at(k, i), seg);
      }
    }
  }
  return t;
}

EventHypothesis MapDecide(const LikelihoodTensor& tensor,
                          const PriorTable& priors, const DecisionMask& mask) {
  const int c = tensor.num_classes;
  const int p = tensor.num_cells;
  if (static_cast<int>(priors.class_priors.size()) != c ||
      static_cast<int>(priors.position_priors.size()) != p) {
    throw DomainError("prior table shape does not match the tensor");
  }
  if ((!mask.classes.empty() && static_cast<int>(mask.classes.size()) != c) ||
      (!mask.cells.empty() && static_cast<int>(mask.cells.size()) != p)) {
    throw DomainError("decision mask shape does not match the tensor");
  }
  for (double v : tensor.values) {
    if (!std::isfinite(v)) throw DomainError("likelihood tensor has a non-finite entry");
  }
  EventHypothesis best;
  bool found = false;
  best.score = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < c; ++i) {
    if (!mask.classes.empty() && !mask.classes[i]) continue;
    if (priors.class_priors[i] <= 0.0) continue;
    for (int j = 0; j < p; ++j) {
      if (!mask.cells.empty() && !mask.cells[j]) continue;
      if (priors.position_priors[j] <= 0.0) continue;
      double s = std::log(priors.class_priors[i]) + std::log(priors.position_priors[j]);
      for (int k = 0; k < tensor.num_arrays; ++k) s += tensor.at(k, j, i);
      if (!found || s > best.score) {
        found = true;
        best.class_id = i;
        best.cell = j;
        best.score = s;
      }
    }
  }
  if (!found) throw DomainError("no (class, cell) candidate with nonzero prior");
  best.frames = tensor.interval;
  return best;
}

FrameInterval FrameTiming::ToFrames(double start, double end) const {
  FrameInterval iv;
  iv.start = std::max(0, static_cast<int>(std::lround(start / shift_seconds)));
  iv.end = static_cast<int>(std::lround((end - frame_seconds) / shift_seconds)) + 1;
  iv.end = std::max(iv.end, iv.start + 1);
  return iv;
}

std::vector<EventHypothesis> DecideInterval(const LikelihoodTensor& tensor,
                                            const PriorTable& priors,
                                            int n_sources, int silence_class,
                                            int speech_class,
                                            const FrameTiming& timing,
                                            const DecisionMask& mask) {
  if (n_sources != 1 && n_sources != 2) throw DomainError("n_sources must be 1 or 2");
  DecisionMask m = mask;
  if (m.classes.empty()) m.classes.assign(tensor.num_classes, true);
  if (m.cells.empty()) m.cells.assign(tensor.num_cells, true);
  if (silence_class >= 0 && silence_class < tensor.num_classes) {
    m.classes[silence_class] = false;
  }
  std::vector<EventHypothesis> out;
  for (int pass = 0; pass < n_sources; ++pass) {
    EventHypothesis h = MapDecide(tensor, priors, m);
    h.start = timing.StartTime(h.frames.start);
    h.end = timing.EndTime(h.frames.end);
    h.is_speech = h.class_id == speech_class;
    m.classes[h.class_id] = false;
    m.cells[h.cell] = false;
    out.push_back(h);
  }
  return out;
}

namespace {

// Rank-2 channel segment overlapping `iv` the most, or `iv` itself.
FrameInterval SecondInterval(const DecodedSequence& rank2, int silence_class,
                             FrameInterval iv) {
  FrameInterval best = iv;
  int best_overlap = 0;
  for (const auto& s : rank2.segments) {
    if (s.label == silence_class) continue;
    const int ov = std::min(s.end, iv.end) - std::max(s.start, iv.start);
    if (ov > best_overlap) {
      best_overlap = ov;
      best = {s.start, s.end};
    }
  }
  return best;
}

}  // namespace

JointOutput RecognizeLocalize(const ModelInventory& inventory,
                              const ChannelScores& scores,
                              const PriorTable& priors, const JointConfig& config,
                              const FrameTiming& timing, int silence_class,
                              int speech_class) {
  if (config.n_sources != 1 && config.n_sources != 2) {
    throw DomainError("n_sources must be 1 or 2");
  }
  JointOutput out;
  out.step1 = Step1Detect(inventory, scores, config.decoder, config.jobs);
  const auto intervals = EventIntervals(out.step1.best(), silence_class);
  std::vector<std::vector<EventHypothesis>> per(intervals.size());
  ParallelFor(static_cast<int>(intervals.size()), config.jobs, [&](int n) {
    const auto iv = intervals[n];
    const auto tensor = BuildLikelihoodTensor(iv, inventory, scores);
    if (config.n_sources == 2 && config.second_interval_from_rank2 &&
        out.step1.ranking.size() > 1) {
      auto first = DecideInterval(tensor, priors, 1, silence_class, speech_class, timing);
      const auto iv2 = SecondInterval(out.step1.channels[out.step1.ranking[1]],
                                      silence_class, iv);
      DecisionMask m;
      m.classes.assign(tensor.num_classes, true);
      m.cells.assign(tensor.num_cells, true);
      m.classes[first[0].class_id] = false;
      m.cells[first[0].cell] = false;
      const auto t2 = BuildLikelihoodTensor(iv2, inventory, scores);
      auto second = DecideInterval(t2, priors, 1, silence_class, speech_class, timing, m);
      per[n] = {first[0], second[0]};
    } else {
      per[n] = DecideInterval(tensor, priors, config.n_sources, silence_class,
                              speech_class, timing);
    }
  });
  for (auto& v : per) {
    for (auto& h : v) out.hypotheses.push_back(h);
  }
  return out;
}

std::vector<EventHypothesis> RecognizeLocalize(
    const SceneConfig& scene, const MultichannelRecording& recording,
    const ModelInventory& inventory, const PriorTable& priors,
    const JointConfig& config) {
  const auto bfs = DesignBeamformers(scene);
  const auto feats =
      ComputeChannelFeatures(scene, bfs, recording, config.features, config.jobs);
  const auto scores = ScoreChannels(inventory, feats, config.jobs);
  FrameTiming timing{config.features.frame_seconds, config.features.shift_seconds};
  return RecognizeLocalize(inventory, scores, priors, config, timing,
                           inventory.silence_class, inventory.speech_class)
      .hypotheses;
}

std::vector<EventHypothesis> ClassifyIntervals(
    std::span<const FrameInterval> intervals, const ModelInventory& inventory,
    const ChannelScores& scores, const PriorTable& priors, int n_sources,
    const FrameTiming& timing, int silence_class, int speech_class,
    std::span<const DecisionMask> masks) {
  if (!masks.empty() && masks.size() != intervals.size()) {
    throw DomainError("one mask per interval required");
  }
  std::vector<EventHypothesis> out;
  for (size_t n = 0; n < intervals.size(); ++n) {
    const auto tensor = BuildLikelihoodTensor(intervals[n], inventory, scores);
    const DecisionMask mask = masks.empty() ? DecisionMask{} : masks[n];
    for (auto& h : DecideInterval(tensor, priors, n_sources, silence_class,
                                  speech_class, timing, mask)) {
      out.push_back(h);
    }
  }
  return out;
}

void WriteHypotheses(const std::string& path, const SceneConfig& scene,
                     std::span<const EventHypothesis> hypotheses) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path + "'");
  for (const auto& h : hypotheses) {
    const std::string label =
        h.class_id < 0 ? "-" : scene.classes.at(h.class_id);
    out << label << ' ';
    if (h.cell < 0) {
      out << "- - - ";
    } else {
      const Point2 c = scene.grid.Centroid(h.cell);
      out << h.cell << ' ' << FormatDouble(c.x) << ' ' << FormatDouble(c.y) << ' ';
    }
    out << FormatDouble(h.start) << ' '
        << FormatDouble(h.end) << ' ' << FormatDouble(h.score) << '\n';
  }
  if (!out) throw DataError("write to '" + path + "' failed");
}

std::vector<EventHypothesis> ReadHypotheses(const std::string& path,
                                            const SceneConfig& scene) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read hypothesis file '" + path + "'");
  std::vector<EventHypothesis> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string label, cell, cx, cy;
    EventHypothesis h;
    if (!(ss >> label >> cell >> cx >> cy >> h.start >> h.end >> h.score)) {
      throw DataError(path + ":" + std::to_string(lineno) + ": malformed hypothesis");
    }
    h.class_id = label == "-" ? -1 : scene.ClassIndex(label);
    try {
      h.cell = cell == "-" ? -1 : std::stoi(cell);
    } catch (const std::exception&) {
      throw DataError(path + ":" + std::to_string(lineno) + ": bad cell '" + cell + "'");
    }
    if (h.cell < -1 || h.cell >= scene.num_cells() || h.end <= h.start) {
      throw DataError(path + ":" + std::to_string(lineno) + ": invalid cell or times");
    }
    h.is_speech = h.class_id >= 0 && h.class_id == scene.speech_class;
    out.push_back(h);
  }
  return out;
}

}  // namespace aedloc
