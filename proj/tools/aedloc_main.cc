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

// aedloc: generate / train / run / eval / report.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>

#include "CLI11.hpp"
#include "aedloc/baselines.h"
#include "aedloc/beamform.h"
#include "aedloc/error.h"
#include "aedloc/eval.h"
#include "aedloc/joint.h"
#include "aedloc/util.h"
#include "cli_support.h"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace aedloc;
using namespace aedloc::cli;

namespace {

struct Options {
  std::string config;
  std::uint64_t seed = 0;
  int jobs = 0;
  std::string variant;
  int sources = 0;
  std::string out;
  std::string data;
  std::string models;
  std::string hyp;
  std::string holdout;
  std::string session;
  std::string priors;
};

bool Given(const CLI::App& sub, const std::string& name) {
  const CLI::Option* opt = sub.get_option_no_throw(name);
  return opt && opt->count() > 0;
}

RunConfig Resolve(const Options& o, const CLI::App& sub) {
  RunConfig c = LoadRunConfig(o.config);
  if (Given(sub, "--seed")) c.seed = o.seed;
  if (Given(sub, "--jobs")) c.system.jobs = o.jobs;
  if (Given(sub, "--variant")) c.variant = o.variant;
  if (Given(sub, "--sources")) c.sources = o.sources;
  if (Given(sub, "--priors")) c.priors = o.priors;
  if (c.system.jobs < 1) throw DomainError("--jobs must be at least 1");
  if (c.sources != 1 && c.sources != 2) throw DomainError("--sources must be 1 or 2");
  if (c.priors != "flat" && c.priors != "estimated") {
    throw DomainError("priors must be 'flat' or 'estimated'");
  }
  ParseVariant(c.variant);
  return c;
}

void WriteText(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw DataError("cannot write '" + path.string() + "'");
}

json PriorsToJson(const PriorTable& p, const std::vector<std::string>& sessions) {
  json j;
  j["training_sessions"] = sessions;
  j["class_priors"] = p.class_priors;
  j["position_priors"] = p.position_priors;
  return j;
}

PriorTable LoadPriors(const fs::path& path, const SceneConfig& scene) {
  std::ifstream in(path);
  if (!in) throw DataError("missing '" + path.string() + "'; run 'aedloc train' first");
  try {
    const json j = json::parse(in);
    PriorTable p;
    p.class_priors = j.at("class_priors").get<std::vector<double>>();
    p.position_priors = j.at("position_priors").get<std::vector<double>>();
    if (static_cast<int>(p.class_priors.size()) != scene.num_classes() ||
        static_cast<int>(p.position_priors.size()) != scene.num_cells()) {
      throw DataError("'" + path.string() + "' does not match the scene");
    }
    return p;
  } catch (const json::exception& e) {
    throw DataError("malformed '" + path.string() + "': " + e.what());
  }
}

fs::path Need(const fs::path& p, const std::string& hint) {
  if (!fs::exists(p)) throw DataError("missing '" + p.string() + "'; " + hint);
  return p;
}

int CmdGenerate(const RunConfig& c, const Options& o) {
  if (o.out.empty()) throw DomainError("generate needs --out");
  const auto sessions = GenerateDataset(c.scene, c.dataset, c.seed, c.system.jobs);
  WriteDataset(o.out, c.scene, sessions, c.seed);
  std::cout << "wrote " << sessions.size() << " sessions to " << o.out << '\n';
  return 0;
}

int CmdTrain(const RunConfig& c, const Options& o) {
  if (o.data.empty() || o.out.empty()) throw DomainError("train needs --data and --out");
  const Dataset d = LoadDataset(o.data);
  const auto bfs = DesignBeamformers(d.scene);
  const FrameTiming timing{c.system.features.frame_seconds, c.system.features.shift_seconds};
  std::vector<RecordingCache> one, two;
  std::vector<std::string> names;
  std::vector<std::vector<GroundTruthEvent>> truths;
  bool found_holdout = o.holdout.empty();
  for (const auto& s : d.sessions) {
    if (s.name == o.holdout) {
      found_holdout = true;
      continue;
    }
    names.push_back(s.name);
    truths.push_back(s.one_source.truth);
  }
  if (!found_holdout) throw DataError("no session named '" + o.holdout + "'");
  if (names.empty()) throw DataError("no training sessions left");
  one.reserve(names.size());
  two.reserve(names.size());
  for (const auto& s : d.sessions) {
    if (s.name == o.holdout) continue;
    one.push_back(PrepareRecording(d.scene, bfs, s.one_source, c.system));
    two.push_back(PrepareRecording(d.scene, bfs, s.two_source, c.system));
  }
  std::vector<TrainingRecording> train;
  for (const auto& r : one) train.push_back({&r.features, &r.recording->truth});
  std::vector<TrainingResult> results;
  const ModelInventory inv = TrainInventory(d.scene, train, c.system, &results);
  const PriorTable priors = EstimatePriors(d.scene, truths, c.system.prior_smoothing);

  fs::create_directories(o.out);
  SaveInventory((fs::path(o.out) / "inventory.txt").string(), inv);
  WriteText(fs::path(o.out) / "priors.json", PriorsToJson(priors, names).dump(2) + "\n");
  WriteText(fs::path(o.out) / "priors.grid", FormatGrid(d.scene.grid, priors.position_priors));
  if (c.system.run_all_combinations) {
    std::vector<LabeledSegment> isolated, mixed;
    for (const auto& r : one) {
      for (auto& x : BaselineSegments(d.scene, r, timing, false)) isolated.push_back(std::move(x));
    }
    for (const auto& r : two) {
      for (auto& x : BaselineSegments(d.scene, r, timing, true)) mixed.push_back(std::move(x));
    }
    const auto combos = TrainAllCombinations(d.scene, isolated, mixed, c.system.training,
                                             c.system.speech_alone_model,
                                             c.system.baseline_channel, c.system.jobs);
    SaveCombinations((fs::path(o.out) / "combinations.txt").string(), combos);
  }
  json log;
  log["training_sessions"] = names;
  log["models"] = json::array();
  for (const auto& r : results) {
    json m;
    m["label"] = r.model.label.empty() ? d.scene.classes[r.model.class_id] : r.model.label;
    m["array"] = r.model.array_id;
    m["log_likelihood"] = r.log_likelihood;
    m["warnings"] = r.warnings;
    log["models"].push_back(m);
  }
  WriteText(fs::path(o.out) / "training.json", log.dump(2) + "\n");
  std::cout << "trained " << inv.num_arrays() * inv.num_classes() << " models on "
            << names.size() << " sessions into " << o.out << '\n';
  return 0;
}

int CmdRun(const RunConfig& c, const Options& o) {
  if (o.data.empty() || o.models.empty() || o.out.empty()) {
    throw DomainError("run needs --data, --models and --out");
  }
  const Variant variant = ParseVariant(c.variant);
  const Dataset d = LoadDataset(o.data);
  const fs::path mdir(o.models);
  SystemModels models;
  models.inventory = LoadInventory(
      Need(mdir / "inventory.txt", "run 'aedloc train' first").string());
  models.priors = LoadPriors(mdir / "priors.json", d.scene);
  if (variant == Variant::kAllCombinations) {
    models.combinations = LoadCombinations(
        Need(mdir / "combinations.txt", "train with baselines.run_all_combinations").string(),
        d.scene);
  }
  const auto bfs = DesignBeamformers(d.scene);
  const bool needs_scores = variant != Variant::kSrpPhat && variant != Variant::kAllCombinations;
  fs::create_directories(o.out);
  json run;
  run["variant"] = c.variant;
  run["sources"] = c.sources;
  run["priors"] = c.priors;
  run["data"] = fs::absolute(o.data).lexically_normal().string();
  run["models"] = fs::absolute(o.models).lexically_normal().string();
  run["sessions"] = json::array();
  bool any = false;
  for (const auto& s : d.sessions) {
    if (!o.session.empty() && s.name != o.session) continue;
    any = true;
    const auto& rec = SuiteRecording(s, c.sources);
    RecordingCache cache;
    cache.recording = &rec;
    std::optional<ChannelScores> scores;
    if (needs_scores) {
      cache.features = ComputeChannelFeatures(d.scene, bfs, rec, c.system.features,
                                              c.system.jobs);
      scores = ScoreChannels(models.inventory, cache.features, c.system.jobs);
    }
    if (variant == Variant::kAllCombinations) {
      cache.baseline_features =
          ExtractFeatures(rec.Channel(models.combinations->channel), d.scene.sample_rate,
                          c.system.features);
    }
    const auto hyps = RunVariant(variant, d.scene, cache, scores ? &*scores : nullptr,
                                 models, c.sources, c.system, c.priors == "flat");
    WriteHypotheses((fs::path(o.out) / (s.name + ".hyp")).string(), d.scene, hyps);
    run["sessions"].push_back(s.name);
  }
  if (!any) throw DataError("no session named '" + o.session + "'");
  WriteText(fs::path(o.out) / "run.json", run.dump(2) + "\n");
  std::cout << "wrote hypotheses for " << run["sessions"].size() << " sessions to " << o.out
            << '\n';
  return 0;
}

int CmdEval(const RunConfig& c, const Options& o) {
  if (o.data.empty() || o.hyp.empty()) throw DomainError("eval needs --data and --hyp");
  const Dataset d = LoadDataset(o.data);
  const fs::path hdir(o.hyp);
  std::ifstream in(Need(hdir / "run.json", "run 'aedloc run' first"));
  json run;
  try {
    run = json::parse(in);
  } catch (const json::exception& e) {
    throw DataError("malformed run.json: " + std::string(e.what()));
  }
  const std::string vname = run.value("variant", std::string());
  const int sources = run.value("sources", 0);
  const Variant variant = ParseVariant(vname);
  MatchCriteria crit;
  crit.min_overlap_fraction = c.system.min_overlap_fraction;
  MetricReport total;
  total.suite = SuiteName(sources);
  total.variant = vname;
  total.priors = UsesKnownEndpoints(variant) && variant != Variant::kSrpPhat &&
                         variant != Variant::kAllCombinations
                     ? run.value("priors", std::string("estimated"))
                 : variant == Variant::kProposedFlat   ? "flat"
                 : variant == Variant::kProposedPriors ? "estimated"
                                                       : "-";
  // Score the sessions the run covered.
  std::set<std::string> listed;
  for (const auto& n : run.at("sessions")) listed.insert(n.get<std::string>());
  for (const auto& s : d.sessions) {
    if (!listed.erase(s.name)) continue;
    const fs::path f = Need(hdir / (s.name + ".hyp"), "rerun 'aedloc run'");
    const auto hyps = ReadHypotheses(f.string(), d.scene);
    total.Add(EvaluateVariant(variant, d.scene, hyps, SuiteRecording(s, sources).truth, crit));
  }
  if (!listed.empty()) {
    throw DataError("session '" + *listed.begin() + "' from " + (hdir / "run.json").string() +
                    " is not in the dataset");
  }
  const fs::path out = o.out.empty() ? hdir : fs::path(o.out);
  fs::create_directories(out);
  const std::vector<MetricReport> rows{total};
  WriteText(out / "report.txt", FormatReportTable(rows));
  WriteText(out / "report.tsv", FormatReportTsv(rows));
  std::cout << FormatReportTable(rows);
  return 0;
}

int CmdReport(const RunConfig& c, const Options& o) {
  if (o.out.empty()) throw DomainError("report needs --out");
  SceneConfig scene = c.scene;
  std::vector<Session> sessions;
  if (!o.data.empty()) {
    Dataset d = LoadDataset(o.data);
    scene = d.scene;
    sessions = std::move(d.sessions);
  } else {
    sessions = GenerateDataset(scene, c.dataset, c.seed, c.system.jobs);
  }
  const ExperimentReport rep = RunLeaveOneOut(scene, sessions, c.system);
  fs::create_directories(o.out);
  const fs::path out(o.out);
  WriteText(out / "report.txt", FormatReportTable(rep.rows));
  WriteText(out / "report.tsv", FormatReportTsv(rep.rows));

  std::vector<std::vector<GroundTruthEvent>> truths;
  for (const auto& s : sessions) truths.push_back(s.one_source.truth);
  const PriorTable priors = EstimatePriors(scene, truths, c.system.prior_smoothing);
  WriteText(out / "priors.grid", FormatGrid(scene.grid, priors.position_priors));

  // Steered response map summed over the first event of the first session.
  const auto& rec = sessions.front().one_source;
  const auto events = EventsOnly(rec.truth, scene);
  if (!events.empty()) {
    SrpLocalizer srp(scene, c.system.srp);
    const auto channels = RecordingChannels(rec);
    std::vector<double> sum(scene.num_cells(), 0.0);
    for (long st : srp.FrameStarts(events[0].start, events[0].end, rec.num_samples())) {
      const auto m = srp.Map(srp.FrameCorrelations(channels, st));
      for (int j = 0; j < scene.num_cells(); ++j) sum[j] += m[j];
    }
    WriteText(out / "srp.grid", FormatGrid(scene.grid, sum));
  }
  std::cout << FormatReportTable(rep.rows);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Joint acoustic event detection, recognition and localization"};
  app.require_subcommand(1);
  Options o;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "JSON run configuration")->envname("AEDLOC_CONFIG");
    sub->add_option("--seed", o.seed, "random seed")->envname("AEDLOC_SEED");
    sub->add_option("--jobs", o.jobs, "worker threads")->envname("AEDLOC_JOBS");
    sub->add_option("--out", o.out, "output directory")->envname("AEDLOC_OUT");
  };
  auto* gen = app.add_subcommand("generate", "write a synthetic dataset");
  common(gen);
  auto* train = app.add_subcommand("train", "train models and priors");
  common(train);
  train->add_option("--data", o.data, "dataset directory")->envname("AEDLOC_DATA");
  train->add_option("--holdout", o.holdout, "session left out of training");
  auto* run = app.add_subcommand("run", "write hypotheses for one variant");
  common(run);
  run->add_option("--data", o.data, "dataset directory")->envname("AEDLOC_DATA");
  run->add_option("--models", o.models, "model directory")->envname("AEDLOC_MODELS");
  run->add_option("--variant", o.variant, "system variant")
      ->envname("AEDLOC_VARIANT")
      ->check(CLI::IsMember(VariantNames()));
  run->add_option("--sources", o.sources, "simultaneous sources (1 or 2)")
      ->envname("AEDLOC_SOURCES")
      ->check(CLI::Range(1, 2));
  run->add_option("--session", o.session, "only this session");
  run->add_option("--priors", o.priors, "priors of known end-point variants")
      ->check(CLI::IsMember({"flat", "estimated"}));
  auto* ev = app.add_subcommand("eval", "score hypotheses against the truth");
  common(ev);
  ev->add_option("--data", o.data, "dataset directory")->envname("AEDLOC_DATA");
  ev->add_option("--hyp", o.hyp, "hypothesis directory");
  auto* rep = app.add_subcommand("report", "leave-one-out experiment over all variants");
  common(rep);
  rep->add_option("--data", o.data, "dataset directory (default: generate in memory)")
      ->envname("AEDLOC_DATA");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }
  try {
    CLI::App* sub = app.get_subcommands().front();
    const RunConfig c = Resolve(o, *sub);
    if (sub == gen) return CmdGenerate(c, o);
    if (sub == train) return CmdTrain(c, o);
    if (sub == run) return CmdRun(c, o);
    if (sub == ev) return CmdEval(c, o);
    return CmdReport(c, o);
  } catch (const DomainError& e) {
    std::cerr << "aedloc: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "aedloc: " << e.what() << '\n';
    return 2;
  }
}
