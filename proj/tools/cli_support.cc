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

#include "cli_support.h"

#include <filesystem>
#include <fstream>
#include <set>

#include "aedloc/error.h"
#include "aedloc/util.h"

namespace aedloc::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void CheckKeys(const json& j, const std::string& where,
               std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw DataError("config: '" + where + "' must be an object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : j.items()) {
    if (!ok.count(key)) throw DataError("config: unknown key '" + where + "." + key + "'");
  }
}

template <typename T>
void Get(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

json ReadJson(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw DataError("'" + path + "' is not valid JSON: " + e.what());
  }
}

}  // namespace

RunConfig RunConfigFromJson(const json& j, const std::string& base_dir) {
  RunConfig c;
  try {
    CheckKeys(j, "config", {"scene", "seed", "jobs", "dataset", "features", "training",
                            "decoder", "priors", "srp", "baselines", "run"});
    if (j.contains("scene")) {
      const auto& s = j["scene"];
      if (s.is_string()) {
        fs::path p = s.get<std::string>();
        if (p.is_relative()) p = fs::path(base_dir) / p;
        c.scene = LoadScene(p.string());
      } else {
        c.scene = SceneFromJson(s);
      }
    }
    Get(j, "seed", c.seed);
    Get(j, "jobs", c.system.jobs);
    if (j.contains("dataset")) {
      const auto& d = j["dataset"];
      CheckKeys(d, "dataset", {"sessions", "instances_per_class", "speech_instances",
                               "min_duration", "max_duration", "min_gap", "max_gap",
                               "snr_one_source_db", "snr_two_source_db", "speaker_cell",
                               "home_probability", "home_cells", "speech_pool_seconds",
                               "wall_reflection"});
      auto& ds = c.dataset;
      Get(d, "sessions", ds.sessions);
      Get(d, "instances_per_class", ds.instances_per_class);
      Get(d, "speech_instances", ds.speech_instances);
      Get(d, "min_duration", ds.min_duration);
      Get(d, "max_duration", ds.max_duration);
      Get(d, "min_gap", ds.min_gap);
      Get(d, "max_gap", ds.max_gap);
      Get(d, "snr_one_source_db", ds.snr_one_source_db);
      Get(d, "snr_two_source_db", ds.snr_two_source_db);
      Get(d, "speaker_cell", ds.speaker_cell);
      Get(d, "home_probability", ds.home_probability);
      Get(d, "home_cells", ds.home_cells);
      Get(d, "speech_pool_seconds", ds.speech_pool_seconds);
      Get(d, "wall_reflection", ds.propagation.wall_reflection);
    }
    auto& sys = c.system;
    if (j.contains("features")) {
      const auto& f = j["features"];
      CheckKeys(f, "features", {"frame_seconds", "shift_seconds", "bands", "delta_window"});
      Get(f, "frame_seconds", sys.features.frame_seconds);
      Get(f, "shift_seconds", sys.features.shift_seconds);
      Get(f, "bands", sys.features.bands);
      Get(f, "delta_window", sys.features.delta_window);
    }
    if (j.contains("training")) {
      const auto& t = j["training"];
      CheckKeys(t, "training", {"states", "components", "max_iterations", "tolerance",
                                "variance_floor_scale", "seed", "all_beams"});
      Get(t, "states", sys.training.num_states);
      Get(t, "components", sys.training.num_components);
      Get(t, "max_iterations", sys.training.max_iterations);
      Get(t, "tolerance", sys.training.tolerance);
      Get(t, "variance_floor_scale", sys.training.variance_floor_scale);
      Get(t, "seed", sys.training.seed);
      Get(t, "all_beams", sys.train_all_beams);
    }
    if (j.contains("decoder")) {
      const auto& d = j["decoder"];
      CheckKeys(d, "decoder", {"insertion_penalty", "allow_event_to_event",
                               "second_interval_from_rank2"});
      Get(d, "insertion_penalty", sys.decoder.insertion_penalty);
      Get(d, "allow_event_to_event", sys.decoder.allow_event_to_event);
      Get(d, "second_interval_from_rank2", sys.second_interval_from_rank2);
    }
    if (j.contains("priors")) {
      const auto& p = j["priors"];
      CheckKeys(p, "priors", {"smoothing", "known_endpoints"});
      Get(p, "smoothing", sys.prior_smoothing);
      Get(p, "known_endpoints", c.priors);
    }
    if (j.contains("srp")) {
      const auto& s = j["srp"];
      CheckKeys(s, "srp", {"frame_length", "fft_size", "frame_shift", "search",
                           "src_samples", "src_contraction", "src_iterations", "src_seed"});
      Get(s, "frame_length", sys.srp.frame_length);
      Get(s, "fft_size", sys.srp.fft_size);
      Get(s, "frame_shift", sys.srp.frame_shift);
      if (s.contains("search")) {
        const auto m = s["search"].get<std::string>();
        if (m == "exhaustive") {
          sys.srp.search = SrpSearch::kExhaustive;
        } else if (m == "src") {
          sys.srp.search = SrpSearch::kRegionContraction;
        } else {
          throw DataError("config: srp.search must be 'exhaustive' or 'src'");
        }
      }
      Get(s, "src_samples", sys.srp.src_samples);
      Get(s, "src_contraction", sys.srp.src_contraction);
      Get(s, "src_iterations", sys.srp.src_iterations);
      Get(s, "src_seed", sys.srp.src_seed);
    }
    if (j.contains("baselines")) {
      const auto& b = j["baselines"];
      CheckKeys(b, "baselines", {"channel", "speech_alone_model", "run_srp",
                                 "run_all_combinations"});
      Get(b, "channel", sys.baseline_channel);
      Get(b, "speech_alone_model", sys.speech_alone_model);
      Get(b, "run_srp", sys.run_srp);
      Get(b, "run_all_combinations", sys.run_all_combinations);
    }
    if (j.contains("run")) {
      const auto& r = j["run"];
      CheckKeys(r, "run", {"variant", "sources"});
      Get(r, "variant", c.variant);
      Get(r, "sources", c.sources);
    }
  } catch (const json::exception& e) {
    throw DataError(std::string("config: ") + e.what());
  }
  return c;
}

RunConfig LoadRunConfig(const std::string& path) {
  if (path.empty()) return RunConfig{};
  return RunConfigFromJson(ReadJson(path), fs::path(path).parent_path().string());
}

std::string Hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, v >>= 4) s[i] = digits[v & 0xf];
  return s;
}

std::string SuiteName(int sources) { return sources == 1 ? "one-source" : "two-source"; }

const MultichannelRecording& SuiteRecording(const Session& s, int sources) {
  if (sources == 1) return s.one_source;
  if (sources == 2) return s.two_source;
  throw DomainError("sources must be 1 or 2");
}

namespace {

const char* kFormat = "aedloc-dataset 1";

std::string FileName(int sources) { return sources == 1 ? "one_source" : "two_source"; }

}  // namespace

void WriteDataset(const std::string& dir, const SceneConfig& scene,
                  const std::vector<Session>& sessions, std::uint64_t seed) {
  fs::create_directories(dir);
  {
    std::ofstream out(fs::path(dir) / "scene.json");
    out << SceneToJson(scene).dump(2) << '\n';
  }
  json manifest;
  manifest["format"] = kFormat;
  manifest["seed"] = seed;
  manifest["sample_rate"] = scene.sample_rate;
  manifest["channels"] = scene.num_channels();
  manifest["scene"] = "scene.json";
  manifest["sessions"] = json::array();
  for (const auto& s : sessions) {
    fs::create_directories(fs::path(dir) / s.name);
    json entry;
    entry["name"] = s.name;
    for (int n : {1, 2}) {
      const auto& rec = SuiteRecording(s, n);
      const std::string audio = s.name + "/" + FileName(n) + ".raw";
      const std::string truth = s.name + "/" + FileName(n) + ".truth";
      WriteRawPlanar((fs::path(dir) / audio).string(), rec);
      WriteTruth((fs::path(dir) / truth).string(), scene, rec.truth);
      json r;
      r["audio"] = audio;
      r["truth"] = truth;
      r["samples"] = rec.num_samples();
      r["snr_db"] = FormatDouble(rec.realized_snr_db);
      r["checksum"] = Hex64(Fnv1a64(ReadFileBytes((fs::path(dir) / audio).string())));
      r["truth_checksum"] = Hex64(Fnv1a64(ReadFileBytes((fs::path(dir) / truth).string())));
      entry["recordings"][SuiteName(n)] = r;
    }
    manifest["sessions"].push_back(entry);
  }
  std::ofstream out(fs::path(dir) / "manifest.json");
  out << manifest.dump(2) << '\n';
  if (!out) throw DataError("cannot write manifest in '" + dir + "'");
}

Dataset LoadDataset(const std::string& dir) {
  const fs::path root(dir);
  const std::string manifest_path = (root / "manifest.json").string();
  if (!fs::exists(manifest_path)) {
    throw DataError("missing '" + manifest_path + "'; run 'aedloc generate' first");
  }
  const json m = ReadJson(manifest_path);
  Dataset d;
  try {
    if (m.at("format").get<std::string>() != kFormat) {
      throw DataError("'" + manifest_path + "' has an unsupported format");
    }
    d.seed = m.at("seed").get<std::uint64_t>();
    d.scene = LoadScene((root / m.at("scene").get<std::string>()).string());
    const int channels = m.at("channels").get<int>();
    if (channels != d.scene.num_channels()) throw DataError("manifest channel count differs from scene");
    for (const auto& e : m.at("sessions")) {
      Session s;
      s.name = e.at("name").get<std::string>();
      for (int n : {1, 2}) {
        const auto& r = e.at("recordings").at(SuiteName(n));
        const std::string audio = (root / r.at("audio").get<std::string>()).string();
        const std::string truth = (root / r.at("truth").get<std::string>()).string();
        for (const auto& f : {audio, truth}) {
          if (!fs::exists(f)) throw DataError("missing dataset file '" + f + "'");
        }
        if (Hex64(Fnv1a64(ReadFileBytes(audio))) != r.at("checksum").get<std::string>() ||
            Hex64(Fnv1a64(ReadFileBytes(truth))) != r.at("truth_checksum").get<std::string>()) {
          throw DataError("checksum mismatch for '" + audio + "' or its truth file");
        }
        auto rec = ReadRawPlanar(audio, channels, d.scene.sample_rate);
        if (rec.num_samples() != r.at("samples").get<long>()) {
          throw DataError("'" + audio + "' length differs from the manifest");
        }
        rec.truth = ReadTruth(truth, d.scene);
        (n == 1 ? s.one_source : s.two_source) = std::move(rec);
      }
      d.sessions.push_back(std::move(s));
    }
  } catch (const json::exception& e) {
    throw DataError("malformed manifest '" + manifest_path + "': " + e.what());
  }
  return d;
}

}  // namespace aedloc::cli
