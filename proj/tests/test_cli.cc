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


#include <filesystem>
#include <fstream>
#include <string>

#include "aedloc/error.h"
#include "cli_support.h"
#include "doctest.h"

namespace aedloc::cli {
namespace {

namespace fs = std::filesystem;

fs::path TempDir(const std::string& name) {
  const auto p = fs::temp_directory_path() / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

TEST_CASE("config defaults and overrides") {
  const auto d = RunConfigFromJson(nlohmann::json::object(), ".");
  CHECK(d.seed == 1);
  CHECK(d.scene.num_cells() == 16);
  CHECK(d.variant == "proposed-priors");
  const auto j = nlohmann::json::parse(R"({
    "seed": 9, "jobs": 2,
    "dataset": {"sessions": 4, "speaker_cell": 7},
    "training": {"states": 2, "components": 1, "all_beams": true},
    "decoder": {"insertion_penalty": -3.5},
    "priors": {"smoothing": false, "known_endpoints": "flat"},
    "srp": {"search": "src", "src_contraction": 0.5},
    "baselines": {"run_srp": false},
    "run": {"variant": "known-endpoints", "sources": 2}
  })");
  const auto c = RunConfigFromJson(j, ".");
  CHECK(c.seed == 9);
  CHECK(c.system.jobs == 2);
  CHECK(c.dataset.sessions == 4);
  CHECK(c.dataset.speaker_cell == 7);
  CHECK(c.system.training.num_states == 2);
  CHECK(c.system.train_all_beams);
  CHECK(c.system.decoder.insertion_penalty == -3.5);
  CHECK_FALSE(c.system.prior_smoothing);
  CHECK(c.priors == "flat");
  CHECK(c.system.srp.search == SrpSearch::kRegionContraction);
  CHECK(c.system.srp.src_contraction == 0.5);
  CHECK_FALSE(c.system.run_srp);
  CHECK(c.variant == "known-endpoints");
  CHECK(c.sources == 2);
}

TEST_CASE("config errors") {
  CHECK_THROWS_AS(RunConfigFromJson(nlohmann::json::parse(R"({"sed": 1})"), "."), DataError);
  CHECK_THROWS_AS(RunConfigFromJson(nlohmann::json::parse(R"({"training": {"state": 1}})"), "."),
                  DataError);
  CHECK_THROWS_AS(RunConfigFromJson(nlohmann::json::parse(R"({"seed": "x"})"), "."), DataError);
  CHECK_THROWS_AS(RunConfigFromJson(nlohmann::json::parse(R"({"srp": {"search": "grid"}})"), "."),
                  DataError);
  CHECK_THROWS_AS(LoadRunConfig("/nonexistent/config.json"), DataError);
}

TEST_CASE("scene given by relative path") {
  const auto dir = TempDir("aedloc_cli_scene");
  {
    std::ofstream out(dir / "room.json");
    out << SceneToJson(ReferenceScene6x6()).dump(2);
  }
  {
    std::ofstream out(dir / "cfg.json");
    out << R"({"scene": "room.json"})";
  }
  CHECK(LoadRunConfig((dir / "cfg.json").string()).scene.num_cells() == 36);
  fs::remove_all(dir);
}

TEST_CASE("dataset round trip and checksum") {
  const auto scene = ReferenceScene();
  DatasetConfig cfg;
  cfg.sessions = 2;
  cfg.instances_per_class = 1;
  cfg.speech_instances = 1;
  const auto sessions = GenerateDataset(scene, cfg, 4);
  const auto dir = TempDir("aedloc_cli_data");
  WriteDataset(dir.string(), scene, sessions, 4);
  const auto back = LoadDataset(dir.string());
  CHECK(back.seed == 4);
  REQUIRE(back.sessions.size() == 2);
  CHECK(back.sessions[1].two_source.channels == sessions[1].two_source.channels);
  REQUIRE(back.sessions[0].one_source.truth.size() == sessions[0].one_source.truth.size());
  for (size_t n = 0; n < sessions[0].one_source.truth.size(); ++n) {
    CHECK(back.sessions[0].one_source.truth[n].cell == sessions[0].one_source.truth[n].cell);
    CHECK(back.sessions[0].one_source.truth[n].start ==
          doctest::Approx(sessions[0].one_source.truth[n].start));
  }
  // Flip one byte of the audio.
  const auto audio = dir / back.sessions[0].name / "one_source.raw";
  REQUIRE(fs::exists(audio));
  {
    std::fstream f(audio, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(100);
    f.put('\x7f');
  }
  CHECK_THROWS_AS(LoadDataset(dir.string()), DataError);
  fs::remove(audio);
  CHECK_THROWS_AS(LoadDataset(dir.string()), DataError);
  fs::remove_all(dir);
  CHECK_THROWS_AS(LoadDataset(dir.string()), DataError);
}

TEST_CASE("suite helpers") {
  CHECK(SuiteName(1) == "one-source");
  CHECK(SuiteName(2) == "two-source");
  CHECK_THROWS_AS(SuiteRecording(Session{}, 3), DomainError);
  CHECK(Hex64(0xabcULL) == "0000000000000abc");
}

}  // namespace
}  // namespace aedloc::cli
