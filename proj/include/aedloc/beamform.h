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

#ifndef AEDLOC_BEAMFORM_H_
#define AEDLOC_BEAMFORM_H_

#include <span>
#include <string>
#include <vector>

#include "aedloc/scene.h"

namespace aedloc {

// Delay-and-sum beamformer focused on one cell centroid (near-field steering).
// Delays line up the centroid's wavefront on the farthest microphone, so all
// of them are non-negative; gains are uniform and sum to one.
struct SteeringBeamformer {
  int array_id = 0;
  int cell = 0;
  std::vector<double> delays;  // samples
  std::vector<double> gains;
};

inline constexpr int kBeamformerTaps = 16;

// K * P beamformers ordered array-major: index k * P + j.
std::vector<SteeringBeamformer> DesignBeamformers(const SceneConfig& scene);

SteeringBeamformer DesignBeamformer(const SceneConfig& scene, int array,
                                    int cell);

// Output has the input length; samples shifted in from outside are zero.
// Throws DomainError on a channel count or length mismatch.
std::vector<double> Apply(const SteeringBeamformer& bf,
                          std::span<const std::vector<double>> channels,
                          int taps = kBeamformerTaps);

// Text dump: one line per beamformer with array, cell and delay/gain pairs.
void WriteBeamformerTable(const std::string& path,
                          std::span<const SteeringBeamformer> beamformers);

}  // namespace aedloc

#endif  // AEDLOC_BEAMFORM_H_
