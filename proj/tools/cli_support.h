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

#ifndef AEDLOC_TOOLS_CLI_SUPPORT_H_
#define AEDLOC_TOOLS_CLI_SUPPORT_H_

#include <cstdint>
#include <string>
#include <vector>

#include "aedloc/eval.h"
#include "aedloc/scene.h"
#include "aedloc/synth.h"
#include "json.hpp"

namespace aedloc::cli {

struct RunConfig {
  SceneConfig scene = ReferenceScene();
  DatasetConfig dataset;
  ExperimentConfig system;
  std::uint64_t seed = 1;
  std::string variant = "proposed-priors";
  int sources = 1;
  // Priors for the known end-point variants: "estimated" or "flat".
  std::string priors = "estimated";
};

// Missing file path gives the defaults. Unknown keys are rejected.
RunConfig RunConfigFromJson(const nlohmann::json& j, const std::string& base_dir);
RunConfig LoadRunConfig(const std::string& path);

// Dataset directory: manifest.json, scene.json and one directory per session
// holding raw planar audio and truth sidecars of both recordings.
void WriteDataset(const std::string& dir, const SceneConfig& scene,
                  const std::vector<Session>& sessions, std::uint64_t seed);

struct Dataset {
  SceneConfig scene;
  std::uint64_t seed = 0;
  std::vector<Session> sessions;
};

// Verifies every file named in the manifest and its checksum.
Dataset LoadDataset(const std::string& dir);

std::string SuiteName(int sources);
const MultichannelRecording& SuiteRecording(const Session& s, int sources);

std::string Hex64(std::uint64_t v);

}  // namespace aedloc::cli

#endif  // AEDLOC_TOOLS_CLI_SUPPORT_H_
