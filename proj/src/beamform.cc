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

#include "aedloc/beamform.h"

#include <algorithm>
#include <fstream>

#include "aedloc/dsp.h"
#include "aedloc/error.h"
#include "aedloc/util.h"

namespace aedloc {

SteeringBeamformer DesignBeamformer(const SceneConfig& scene, int array,
                                    int cell) {
  const auto& geom = scene.arrays.at(array);
  const Point2 target = scene.grid.Centroid(cell);
  SteeringBeamformer bf;
  bf.array_id = array;
  bf.cell = cell;
  std::vector<double> dist;
  for (const auto& m : geom.mics) dist.push_back(Distance(target, m));
  const double far = *std::max_element(dist.begin(), dist.end());
  for (double d : dist) {
    bf.delays.push_back((far - d) / scene.speed_of_sound * scene.sample_rate);
    bf.gains.push_back(1.0 / geom.num_mics());
  }
  return bf;
}

std::vector<SteeringBeamformer> DesignBeamformers(const SceneConfig& scene) {
  std::vector<SteeringBeamformer> out;
  out.reserve(scene.num_arrays() * scene.num_cells());
  for (int k = 0; k < scene.num_arrays(); ++k) {
    for (int j = 0; j < scene.num_cells(); ++j) {
      out.push_back(DesignBeamformer(scene, k, j));
    }
  }
  return out;
}

std::vector<double> Apply(const SteeringBeamformer& bf,
                          std::span<const std::vector<double>> channels,
                          int taps) {
  if (channels.size() != bf.delays.size()) {
    throw DomainError("beamformer expects " + std::to_string(bf.delays.size()) +
                      " channels, got " + std::to_string(channels.size()));
  }
  const size_t n = channels.empty() ? 0 : channels[0].size();
  for (const auto& ch : channels) {
    if (ch.size() != n) throw DomainError("beamformer input lengths differ");
  }
  std::vector<double> out(n, 0.0);
  for (size_t m = 0; m < channels.size(); ++m) {
    AddDelayed(channels[m], bf.delays[m], bf.gains[m], taps, out);
  }
  return out;
}

void WriteBeamformerTable(const std::string& path,
                          std::span<const SteeringBeamformer> beamformers) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path + "'");
  out << "# array cell [delay_samples gain]...\n";
  for (const auto& bf : beamformers) {
    out << bf.array_id << ' ' << bf.cell;
    for (size_t m = 0; m < bf.delays.size(); ++m) {
      out << ' ' << FormatDouble(bf.delays[m]) << ' ' << FormatDouble(bf.gains[m]);
    }
    out << '\n';
  }
}

}  // namespace aedloc
