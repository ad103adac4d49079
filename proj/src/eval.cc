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

#include "aedloc/eval.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <tuple>

#include "aedloc/error.h"
#include "aedloc/util.h"

namespace aedloc {

double FScore(double precision, double recall) {
  return precision + recall > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
}

double DetectionScore::precision() const {
  return hypotheses ? static_cast<double>(matched) / hypotheses : 0.0;
}
double DetectionScore::recall() const {
  return truths ? static_cast<double>(matched) / truths : 0.0;
}
double DetectionScore::f() const { return FScore(precision(), recall()); }

void DetectionScore::Add(const DetectionScore& o) {
  matched += o.matched;
  hypotheses += o.hypotheses;
  truths += o.truths;
}

namespace {

double Overlap(const GroundTruthEvent& a, const GroundTruthEvent& b) {
  return std::min(a.end, b.end) - std::max(a.start, b.start);
}

}  // namespace

Matching MatchEvents(std::span<const GroundTruthEvent> hypotheses,
                     std::span<const GroundTruthEvent> truth,
                     const MatchCriteria& criteria) {
  struct Candidate {
    double overlap;
    int h;
    int t;
  };
  std::vector<Candidate> cands;
  for (int h = 0; h < static_cast<int>(hypotheses.size()); ++h) {
    const auto& hy = hypotheses[h];
    for (int t = 0; t < static_cast<int>(truth.size()); ++t) {
      const auto& tr = truth[t];
      const double ov = Overlap(hy, tr);
      if (ov <= 0.0) continue;
      if (ov < criteria.min_overlap_fraction * (tr.end - tr.start)) continue;
      if (criteria.require_class && hy.class_id != tr.class_id) continue;
      if (criteria.require_cell && hy.cell != tr.cell) continue;
      cands.push_back({ov, h, t});
    }
  }
  std::sort(cands.begin(), cands.end(), [&](const Candidate& a, const Candidate& b) {
    if (a.overlap != b.overlap) return a.overlap > b.overlap;
    const auto& ha = hypotheses[a.h];
    const auto& hb = hypotheses[b.h];
    const auto ka = std::tie(ha.start, ha.end, ha.class_id, ha.cell);
    const auto kb = std::tie(hb.start, hb.end, hb.class_id, hb.cell);
    if (ka != kb) return ka < kb;
    if (a.t != b.t) return a.t < b.t;
    return a.h < b.h;
  });
  Matching m;
  std::vector<bool> used_h(hypotheses.size(), false), used_t(truth.size(), false);
  for (const auto& c : cands) {
    if (used_h[c.h] || used_t[c.t]) continue;
    used_h[c.h] = used_t[c.t] = true;
    m.pairs.emplace_back(c.h, c.t);
  }
  m.score.matched = static_cast<long>(m.pairs.size());
  m.score.hypotheses = static_cast<long>(hypotheses.size());
  m.score.truths = static_cast<long>(truth.size());
  return m;
}

RateCount ClassificationAccuracy(std::span<const int> decided,
                                 std::span<const int> truth) {
  if (decided.size() != truth.size()) throw DomainError("decision and truth counts differ");
  RateCount r;
  r.total = static_cast<long>(truth.size());
  for (size_t i = 0; i < truth.size(); ++i) r.correct += decided[i] == truth[i];
  return r;
}

double LocalizationScore::average() const {
  double sum = 0.0;
  int n = 0;
  for (const auto& c : per_class) {
    if (c.total == 0) continue;
    sum += c.rate();
    ++n;
  }
  return n ? sum / n : 0.0;
}

RateCount LocalizationScore::overall() const {
  RateCount r;
  for (const auto& c : per_class) r.Add(c);
  return r;
}

void LocalizationScore::Add(const LocalizationScore& o) {
  if (per_class.size() < o.per_class.size()) per_class.resize(o.per_class.size());
  for (size_t i = 0; i < o.per_class.size(); ++i) per_class[i].Add(o.per_class[i]);
}

LocalizationScore LocalizationAccuracy(std::span<const int> decided_cells,
                                       std::span<const int> truth_cells,
                                       std::span<const int> truth_classes,
                                       int num_classes) {
  if (decided_cells.size() != truth_cells.size() ||
      truth_cells.size() != truth_classes.size()) {
    throw DomainError("localization inputs differ in length");
  }
  LocalizationScore s;
  s.per_class.resize(num_classes);
  for (size_t i = 0; i < truth_cells.size(); ++i) {
    auto& c = s.per_class.at(truth_classes[i]);
    ++c.total;
    c.correct += decided_cells[i] == truth_cells[i];
  }
  return s;
}

namespace {

const std::vector<std::pair<Variant, std::string>>& VariantTable() {
  static const std::vector<std::pair<Variant, std::string>> t = {
      {Variant::kStep1Only, "step1-only"},
      {Variant::kProposedFlat, "proposed-flat"},
      {Variant::kProposedPriors, "proposed-priors"},
      {Variant::kKnownEndpoints, "known-endpoints"},
      {Variant::kKnownPosition, "known-position"},
      {Variant::kSrpPhat, "srp-phat"},
      {Variant::kAllCombinations, "all-combinations"},
  };
  return t;
}

}  // namespace

Variant ParseVariant(const std::string& name) {
  for (const auto& [v, n] : VariantTable()) {
    if (n == name) return v;
  }
  throw DomainError("unknown variant '" + name + "'");
}

std::string VariantName(Variant v) {
  for (const auto& [x, n] : VariantTable()) {
    if (x == v) return n;
  }
  return "?";
}

std::vector<std::string> VariantNames() {
  std::vector<std::string> out;
  for (const auto& [v, n] : VariantTable()) out.push_back(n);
  return out;
}

bool UsesKnownEndpoints(Variant v) {
  return v == Variant::kKnownEndpoints || v == Variant::kKnownPosition ||
         v == Variant::kSrpPhat || v == Variant::kAllCombinations;
}

void MetricReport::Add(const MetricReport& o) {
  auto merge = [](auto& a, const auto& b) {
    if (!b) return;
    if (!a) {
      a = b;
    } else {
      a->Add(*b);
    }
  };
  merge(classification, o.classification);
  merge(detection, o.detection);
  merge(localization, o.localization);
  merge(localization_f, o.localization_f);
}

std::vector<GroundTruthEvent> EventsOnly(std::span<const GroundTruthEvent> truth,
                                         const SceneConfig& scene) {
  std::vector<GroundTruthEvent> out;
  for (const auto& t : truth) {
    if (scene.IsEventClass(t.class_id)) out.push_back(t);
  }
  return out;
}

std::vector<GroundTruthEvent> AsEvents(std::span<const EventHypothesis> hyps) {
  std::vector<GroundTruthEvent> out;
  for (const auto& h : hyps) out.push_back({h.class_id, h.cell, h.start, h.end});
  return out;
}

namespace {

// Hypotheses of largest positive overlap with `t`, in list order.
std::vector<int> BestOverlapping(std::span<const EventHypothesis> hyps,
                                 const GroundTruthEvent& t, bool skip_speech) {
  std::vector<int> out;
  double best = 0.0;
  for (int i = 0; i < static_cast<int>(hyps.size()); ++i) {
    if (skip_speech && hyps[i].is_speech) continue;
    const double ov = std::min(hyps[i].end, t.end) - std::max(hyps[i].start, t.start);
    if (ov <= 0.0) continue;
    if (ov > best) {
      best = ov;
      out.clear();
    }
    if (ov == best) out.push_back(i);
  }
  return out;
}

}  // namespace

MetricReport EvaluateVariant(Variant variant, const SceneConfig& scene,
                             std::span<const EventHypothesis> hypotheses,
                             std::span<const GroundTruthEvent> truth,
                             const MatchCriteria& criteria) {
  MetricReport r;
  r.variant = VariantName(variant);
  const auto events = EventsOnly(truth, scene);
  std::vector<EventHypothesis> non_speech;
  for (const auto& h : hypotheses) {
    if (!h.is_speech) non_speech.push_back(h);
  }
  const auto hyp_events = AsEvents(non_speech);
  std::vector<int> truth_classes, truth_cells;
  for (const auto& e : events) {
    truth_classes.push_back(e.class_id);
    truth_cells.push_back(e.cell);
  }

  switch (variant) {
    case Variant::kStep1Only:
    case Variant::kProposedFlat:
    case Variant::kProposedPriors: {
      MatchCriteria c = criteria;
      c.require_class = true;
      c.require_cell = false;
      r.detection = MatchEvents(hyp_events, events, c).score;
      if (variant != Variant::kStep1Only) {
        c.require_class = false;
        c.require_cell = true;
        r.localization_f = MatchEvents(hyp_events, events, c).score;
      }
      break;
    }
    case Variant::kKnownEndpoints:
    case Variant::kKnownPosition:
    case Variant::kAllCombinations: {
      std::vector<int> classes, cells;
      for (const auto& e : events) {
        const auto best = BestOverlapping(hypotheses, e, true);
        classes.push_back(best.empty() ? -1 : hypotheses[best[0]].class_id);
        cells.push_back(best.empty() ? -1 : hypotheses[best[0]].cell);
      }
      r.classification = ClassificationAccuracy(classes, truth_classes);
      if (variant == Variant::kKnownEndpoints) {
        r.localization = LocalizationAccuracy(cells, truth_cells, truth_classes,
                                              scene.num_classes());
        MatchCriteria c = criteria;
        c.require_class = false;
        c.require_cell = true;
        r.localization_f = MatchEvents(hyp_events, events, c).score;
      }
      break;
    }
    case Variant::kSrpPhat: {
      std::vector<int> cells;
      for (const auto& e : events) {
        const auto best = BestOverlapping(hypotheses, e, false);
        int cell = best.empty() ? -1 : hypotheses[best[0]].cell;
        for (int i : best) {
          if (hypotheses[i].cell == e.cell) cell = e.cell;
        }
        cells.push_back(cell);
      }
      r.localization = LocalizationAccuracy(cells, truth_cells, truth_classes,
                                            scene.num_classes());
      break;
    }
  }
  return r;
}

ModelInventory TrainInventory(const SceneConfig& scene,
                              std::span<const TrainingRecording> recordings,
                              const ExperimentConfig& config,
                              std::vector<TrainingResult>* results) {
  const int k_count = scene.num_arrays();
  const int c_count = scene.num_classes();
  const int p = scene.num_cells();
  const int min_len = std::max(config.training.num_states, 3);
  const FrameTiming timing{config.features.frame_seconds, config.features.shift_seconds};
  std::vector<std::vector<FeatureSequence>> segs(static_cast<size_t>(k_count) * c_count);
  auto seg = [&](int k, int c) -> std::vector<FeatureSequence>& {
    return segs[static_cast<size_t>(k) * c_count + c];
  };
  long gap_count = 0;
  for (const auto& rec : recordings) {
    const auto& feats = *rec.features;
    const int t_count = feats.num_frames();
    auto truth = *rec.truth;
    std::stable_sort(truth.begin(), truth.end(),
                     [](const auto& a, const auto& b) { return a.start < b.start; });
    std::vector<FrameInterval> busy;
    for (const auto& e : truth) {
      FrameInterval iv = timing.ToFrames(e.start, e.end);
      iv.end = std::min(iv.end, t_count);
      if (iv.end - iv.start < config.training.num_states) continue;
      busy.push_back(iv);
      if (e.class_id < 0 || e.class_id >= c_count || e.class_id == scene.silence_class) continue;
      for (int k = 0; k < k_count; ++k) {
        for (int j = 0; j < p; ++j) {
          if (!config.train_all_beams && j != e.cell) continue;
          seg(k, e.class_id).push_back(feats.at(k, j).Slice(iv.start, iv.end));
        }
      }
    }
    if (scene.silence_class < 0) continue;
    int prev = 0;
    busy.push_back({t_count, t_count});
    for (const auto& iv : busy) {
      const int a = prev + 1;
      const int b = iv.start - 1;
      if (b - a >= min_len) {
        const int j = static_cast<int>(gap_count++ % p);
        for (int k = 0; k < k_count; ++k) {
          seg(k, scene.silence_class).push_back(feats.at(k, j).Slice(a, b));
        }
      }
      prev = std::max(prev, iv.end);
    }
  }
  for (int c = 0; c < c_count; ++c) {
    if (seg(0, c).empty()) {
      throw DataError("no training data for class '" + scene.classes[c] + "'");
    }
  }
  std::vector<TrainingResult> trained(segs.size());
  ParallelFor(static_cast<int>(segs.size()), config.jobs, [&](int n) {
    TrainingConfig cfg = config.training;
    cfg.seed = config.training.seed + static_cast<std::uint64_t>(n);
    trained[n] = TrainBaumWelch(segs[n], n % c_count, n / c_count, cfg);
  });
  ModelInventory inv;
  inv.silence_class = scene.silence_class;
  inv.speech_class = scene.speech_class;
  inv.arrays.assign(k_count, {});
  for (int k = 0; k < k_count; ++k) {
    for (int c = 0; c < c_count; ++c) {
      HmmModel m = trained[static_cast<size_t>(k) * c_count + c].model;
      m.label = scene.classes[c];
      inv.arrays[k].push_back(std::move(m));
    }
  }
  if (results) *results = std::move(trained);
  return inv;
}

PriorTable EstimatePriors(const SceneConfig& scene,
                          std::span<const std::vector<GroundTruthEvent>> truths,
                          bool smoothing) {
  std::vector<PositionObservation> obs;
  for (const auto& truth : truths) {
    for (const auto& e : truth) {
      if (e.class_id == scene.silence_class) continue;
      obs.push_back({e.class_id, e.cell});
    }
  }
  return EstimatePositionPriors(obs, scene.grid, scene.num_classes(), smoothing);
}

RecordingCache PrepareRecording(const SceneConfig& scene,
                                std::span<const SteeringBeamformer> beamformers,
                                const MultichannelRecording& recording,
                                const ExperimentConfig& config) {
  RecordingCache cache;
  cache.recording = &recording;
  cache.features = ComputeChannelFeatures(scene, beamformers, recording,
                                          config.features, config.jobs);
  if (config.baseline_channel < 0 || config.baseline_channel >= recording.num_channels()) {
    throw DomainError("baseline channel out of range");
  }
  cache.baseline_features = ExtractFeatures(recording.Channel(config.baseline_channel),
                                            scene.sample_rate, config.features);
  return cache;
}

namespace {

FrameInterval ClampedFrames(const FrameTiming& timing, const GroundTruthEvent& e,
                            int num_frames) {
  FrameInterval iv = timing.ToFrames(e.start, e.end);
  iv.end = std::min(iv.end, num_frames);
  iv.start = std::min(iv.start, iv.end - 1);
  if (iv.start < 0) throw DataError("event lies outside the recording");
  return iv;
}

}  // namespace

std::vector<EventHypothesis> RunVariant(Variant variant, const SceneConfig& scene,
                                        const RecordingCache& cache,
                                        const ChannelScores* scores,
                                        const SystemModels& models, int n_sources,
                                        const ExperimentConfig& config,
                                        bool priors_flat) {
  const FrameTiming timing{config.features.frame_seconds, config.features.shift_seconds};
  const auto& rec = *cache.recording;
  const auto events = EventsOnly(rec.truth, scene);
  const auto& inv = models.inventory;
  const PriorTable flat = PriorTable::Flat(scene.num_classes(), scene.num_cells());
  const PriorTable& priors = priors_flat ? flat : models.priors;
  auto need_scores = [&] {
    if (!scores) throw DomainError("variant '" + VariantName(variant) + "' needs channel scores");
  };
  std::vector<EventHypothesis> out;
  switch (variant) {
    case Variant::kStep1Only: {
      need_scores();
      const auto s1 = Step1Detect(inv, *scores, config.decoder, config.jobs);
      const auto& best = s1.best();
      for (const auto& seg : best.segments) {
        if (seg.label == inv.silence_class) continue;
        EventHypothesis h;
        h.class_id = seg.label;
        h.cell = best.cell;
        h.frames = {seg.start, seg.end};
        h.start = timing.StartTime(seg.start);
        h.end = timing.EndTime(seg.end);
        h.score = best.log_likelihood;
        h.is_speech = seg.label == inv.speech_class;
        out.push_back(h);
      }
      break;
    }
    case Variant::kProposedFlat:
    case Variant::kProposedPriors: {
      need_scores();
      JointConfig jc;
      jc.features = config.features;
      jc.decoder = config.decoder;
      jc.n_sources = n_sources;
      jc.second_interval_from_rank2 = config.second_interval_from_rank2;
      jc.jobs = config.jobs;
      out = RecognizeLocalize(inv, *scores,
                              variant == Variant::kProposedFlat ? flat : models.priors,
                              jc, timing, inv.silence_class, inv.speech_class)
                .hypotheses;
      break;
    }
    case Variant::kKnownEndpoints:
    case Variant::kKnownPosition: {
      need_scores();
      const int t_count = scores->tables.at(0).num_frames;
      for (const auto& e : events) {
        const FrameInterval iv = ClampedFrames(timing, e, t_count);
        DecisionMask mask;
        int n = n_sources;
        if (variant == Variant::kKnownPosition) {
          mask.cells.assign(scene.num_cells(), false);
          int allowed = 0;
          for (const auto& o : rec.truth) {
            if (o.class_id == scene.silence_class) continue;
            if (std::min(o.end, e.end) - std::max(o.start, e.start) <= 0.0) continue;
            if (!mask.cells[o.cell]) ++allowed;
            mask.cells[o.cell] = true;
          }
          n = std::min(n, allowed);
        }
        const std::vector<FrameInterval> ivs{iv};
        const std::vector<DecisionMask> masks{mask};
        for (auto& h : ClassifyIntervals(ivs, inv, *scores, priors, n, timing,
                                         inv.silence_class, inv.speech_class, masks)) {
          out.push_back(h);
        }
      }
      break;
    }
    case Variant::kSrpPhat: {
      SrpLocalizer srp(scene, config.srp);
      const auto channels = RecordingChannels(rec);
      for (const auto& e : events) {
        for (int cell : srp.LocalizeEvent(channels, e.start, e.end, n_sources)) {
          EventHypothesis h;
          h.class_id = -1;
          h.cell = cell;
          h.start = e.start;
          h.end = e.end;
          h.frames = timing.ToFrames(e.start, e.end);
          out.push_back(h);
        }
      }
      break;
    }
    case Variant::kAllCombinations: {
      if (!models.combinations) throw DomainError("no all-combinations models");
      const auto& feats = cache.baseline_features;
      for (const auto& e : events) {
        const FrameInterval iv = ClampedFrames(timing, e, feats.num_frames);
        const int best =
            ClassifyCombination(*models.combinations, feats.Slice(iv.start, iv.end));
        const auto& m = models.combinations->models[best];
        EventHypothesis h;
        h.class_id = m.classes[0];
        h.cell = -1;
        h.frames = iv;
        h.start = e.start;
        h.end = e.end;
        h.score = ForwardLogLikelihood(m.model, feats.Slice(iv.start, iv.end));
        h.is_speech = h.class_id == scene.speech_class;
        out.push_back(h);
      }
      break;
    }
  }
  return out;
}

const MetricReport* ExperimentReport::Find(const std::string& suite,
                                           const std::string& variant,
                                           const std::string& priors) const {
  for (const auto& r : rows) {
    if (r.suite == suite && r.variant == variant && r.priors == priors) return &r;
  }
  return nullptr;
}

namespace {

double WorstDrop(const std::vector<double>& trace) {
  double worst = 0.0;
  for (size_t i = 1; i < trace.size(); ++i) {
    const double drop = (trace[i - 1] - trace[i]) / std::max(1.0, std::abs(trace[i - 1]));
    worst = std::max(worst, drop);
  }
  return worst;
}

struct RowSpec {
  Variant variant;
  std::string priors;
};

}  // namespace

std::vector<LabeledSegment> BaselineSegments(const SceneConfig& scene,
                                             const RecordingCache& c,
                                             const FrameTiming& timing,
                                             bool events_only) {
  std::vector<LabeledSegment> out;
  const auto& f = c.baseline_features;
  for (const auto& e : c.recording->truth) {
    if (e.class_id == scene.silence_class) continue;
    if (events_only && !scene.IsEventClass(e.class_id)) continue;
    FrameInterval iv = timing.ToFrames(e.start, e.end);
    iv.end = std::min(iv.end, f.num_frames);
    if (iv.end - iv.start < 3) continue;
    out.push_back({e.class_id, f.Slice(iv.start, iv.end)});
  }
  return out;
}

ExperimentReport RunLeaveOneOut(const SceneConfig& scene,
                                std::span<const Session> sessions,
                                const ExperimentConfig& config) {
  const int r_count = static_cast<int>(sessions.size());
  if (r_count < 2) throw DomainError("leave-one-out needs at least two sessions");
  const FrameTiming timing{config.features.frame_seconds, config.features.shift_seconds};
  const auto bfs = DesignBeamformers(scene);

  std::vector<RecordingCache> one(r_count), two(r_count);
  for (int s = 0; s < r_count; ++s) {
    one[s] = PrepareRecording(scene, bfs, sessions[s].one_source, config);
    two[s] = PrepareRecording(scene, bfs, sessions[s].two_source, config);
  }

  std::vector<RowSpec> specs = {
      {Variant::kStep1Only, "-"},
      {Variant::kProposedFlat, "flat"},
      {Variant::kProposedPriors, "estimated"},
      {Variant::kKnownEndpoints, "flat"},
      {Variant::kKnownEndpoints, "estimated"},
      {Variant::kKnownPosition, "estimated"},
  };
  if (config.run_srp) specs.push_back({Variant::kSrpPhat, "-"});
  if (config.run_all_combinations) specs.push_back({Variant::kAllCombinations, "-"});

  const std::vector<std::pair<std::string, int>> suites = {{"one-source", 1},
                                                           {"two-source", 2}};
  ExperimentReport report;
  for (const auto& [suite, n] : suites) {
    for (const auto& spec : specs) {
      MetricReport r;
      r.suite = suite;
      r.variant = VariantName(spec.variant);
      r.priors = spec.priors;
      report.rows.push_back(r);
    }
  }

  for (int fold = 0; fold < r_count; ++fold) {
    std::vector<TrainingRecording> train;
    std::vector<std::vector<GroundTruthEvent>> train_truth;
    for (int s = 0; s < r_count; ++s) {
      if (s == fold) continue;
      train.push_back({&one[s].features, &sessions[s].one_source.truth});
      train_truth.push_back(sessions[s].one_source.truth);
    }
    std::vector<TrainingResult> results;
    SystemModels models;
    models.inventory = TrainInventory(scene, train, config, &results);
    for (const auto& res : results) {
      report.worst_em_drop = std::max(report.worst_em_drop, WorstDrop(res.log_likelihood));
      for (const auto& w : res.warnings) {
        report.warnings.push_back(sessions[fold].name + ": " + w);
      }
    }
    models.priors = EstimatePriors(scene, train_truth, config.prior_smoothing);
    report.fold_priors.push_back(models.priors);
    if (config.run_all_combinations) {
      std::vector<LabeledSegment> isolated, mixed;
      for (int s = 0; s < r_count; ++s) {
        if (s == fold) continue;
        for (auto& x : BaselineSegments(scene, one[s], timing, false)) {
          isolated.push_back(std::move(x));
        }
        for (auto& x : BaselineSegments(scene, two[s], timing, true)) {
          mixed.push_back(std::move(x));
        }
      }
      models.combinations =
          TrainAllCombinations(scene, isolated, mixed, config.training,
                               config.speech_alone_model, config.baseline_channel,
                               config.jobs);
    }

    size_t row = 0;
    for (const auto& [suite, n] : suites) {
      const RecordingCache& cache = n == 1 ? one[fold] : two[fold];
      const ChannelScores scores = ScoreChannels(models.inventory, cache.features, config.jobs);
      MatchCriteria crit;
      crit.min_overlap_fraction = config.min_overlap_fraction;
      for (const auto& spec : specs) {
        const auto hyps = RunVariant(spec.variant, scene, cache, &scores, models, n,
                                     config, spec.priors == "flat");
        report.rows[row++].Add(
            EvaluateVariant(spec.variant, scene, hyps, cache.recording->truth, crit));
      }
    }
  }
  return report;
}

namespace {

std::string Pct(double v) { return FormatFixed(100.0 * v, 1); }

std::string Pad(const std::string& s, size_t w) {
  return s.size() >= w ? s + " " : s + std::string(w - s.size(), ' ');
}

}  // namespace

std::string FormatReportTable(std::span<const MetricReport> rows) {
  std::ostringstream out;
  const std::vector<std::pair<std::string, size_t>> cols = {
      {"suite", 12},  {"variant", 18}, {"priors", 11}, {"class%", 8},
      {"aedP%", 7},   {"aedR%", 7},    {"aedF%", 7},   {"loc%", 7},
      {"locF%", 7}};
  for (const auto& [name, w] : cols) out << Pad(name, w);
  out << '\n';
  for (const auto& r : rows) {
    std::vector<std::string> v = {r.suite, r.variant, r.priors};
    v.push_back(r.classification ? Pct(r.classification->rate()) : "-");
    v.push_back(r.detection ? Pct(r.detection->precision()) : "-");
    v.push_back(r.detection ? Pct(r.detection->recall()) : "-");
    v.push_back(r.detection ? Pct(r.detection->f()) : "-");
    v.push_back(r.localization ? Pct(r.localization->average()) : "-");
    v.push_back(r.localization_f ? Pct(r.localization_f->f()) : "-");
    for (size_t i = 0; i < v.size(); ++i) out << Pad(v[i], cols[i].second);
    out << '\n';
  }
  return out.str();
}

std::string FormatReportTsv(std::span<const MetricReport> rows) {
  std::ostringstream out;
  out << "suite\tvariant\tpriors\tmetric\tvalue\n";
  for (const auto& r : rows) {
    auto put = [&](const std::string& metric, const std::string& value) {
      out << r.suite << '\t' << r.variant << '\t' << r.priors << '\t' << metric << '\t'
          << value << '\n';
    };
    auto det = [&](const std::string& prefix, const DetectionScore& d) {
      put(prefix + "precision", FormatDouble(d.precision()));
      put(prefix + "recall", FormatDouble(d.recall()));
      put(prefix + "f", FormatDouble(d.f()));
      put(prefix + "matched", std::to_string(d.matched));
      put(prefix + "insertions", std::to_string(d.insertions()));
      put(prefix + "deletions", std::to_string(d.deletions()));
    };
    if (r.classification) {
      put("class-acc", FormatDouble(r.classification->rate()));
      put("class-correct", std::to_string(r.classification->correct));
      put("class-total", std::to_string(r.classification->total));
    }
    if (r.detection) det("aed-", *r.detection);
    if (r.localization) {
      put("loc-acc", FormatDouble(r.localization->average()));
      for (size_t c = 0; c < r.localization->per_class.size(); ++c) {
        const auto& pc = r.localization->per_class[c];
        if (pc.total == 0) continue;
        put("loc-acc:" + std::to_string(c), FormatDouble(pc.rate()));
      }
      put("loc-correct", std::to_string(r.localization->overall().correct));
      put("loc-total", std::to_string(r.localization->overall().total));
    }
    if (r.localization_f) det("locf-", *r.localization_f);
  }
  return out.str();
}

std::string FormatGrid(const CellGrid& grid, std::span<const double> values) {
  if (static_cast<int>(values.size()) != grid.size()) {
    throw DomainError("grid data size does not match the grid");
  }
  std::ostringstream out;
  for (int iy = 0; iy < grid.ny(); ++iy) {
    for (int ix = 0; ix < grid.nx(); ++ix) {
      if (ix) out << ' ';
      out << FormatDouble(values[static_cast<size_t>(iy) * grid.nx() + ix]);
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace aedloc
