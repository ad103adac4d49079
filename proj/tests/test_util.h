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


#ifndef AEDLOC_TESTS_TEST_UTIL_H_
#define AEDLOC_TESTS_TEST_UTIL_H_

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "aedloc/features.h"
#include "aedloc/hmm.h"
#include "aedloc/scene.h"

namespace aedloc::testing {

// Independent diagonal Gaussian mixture density, straight from the formula.
inline double GmmLogPdf(const DiagGmm& g, std::span<const double> x) {
  double sum = 0.0;
  for (int m = 0; m < g.num_components(); ++m) {
    double e = 0.0, logdet = 0.0;
    for (int d = 0; d < g.dim; ++d) {
      const double v = g.variances[m * g.dim + d];
      const double r = x[d] - g.means[m * g.dim + d];
      e += r * r / v;
      logdet += std::log(2.0 * std::numbers::pi * v);
    }
    sum += g.weights[m] * std::exp(-0.5 * (e + logdet));
  }
  return std::log(sum);
}

inline DiagGmm RandomGmm(int dim, int comps, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.2, 1.0), c(-2.0, 2.0);
  DiagGmm g;
  g.dim = dim;
  double total = 0.0;
  for (int m = 0; m < comps; ++m) {
    g.weights.push_back(u(rng));
    total += g.weights.back();
    for (int d = 0; d < dim; ++d) {
      g.means.push_back(c(rng));
      g.variances.push_back(u(rng));
    }
  }
  for (double& w : g.weights) w /= total;
  g.Finalize();
  return g;
}

inline HmmModel RandomModel(int states, int dim, int comps, int class_id,
                            std::mt19937_64& rng) {
  std::uniform_real_distribution<double> loop(0.3, 0.9);
  HmmModel m;
  m.class_id = class_id;
  for (int s = 0; s < states; ++s) {
    m.states.push_back(RandomGmm(dim, comps, rng));
    m.self_loop.push_back(loop(rng));
  }
  return m;
}

inline FeatureSequence RandomFeatures(int frames, int dim, std::mt19937_64& rng,
                                      double scale = 1.5) {
  std::normal_distribution<double> n(0.0, scale);
  FeatureSequence f;
  f.num_frames = frames;
  f.dim = dim;
  for (int i = 0; i < frames * dim; ++i) f.data.push_back(n(rng));
  return f;
}

// Draws a feature sequence from a model by walking its states.
inline FeatureSequence SampleModel(const HmmModel& m, int frames_per_state,
                                   std::mt19937_64& rng) {
  FeatureSequence f;
  f.dim = m.dim();
  std::normal_distribution<double> n;
  for (const auto& g : m.states) {
    for (int t = 0; t < frames_per_state; ++t) {
      std::discrete_distribution<int> pick(g.weights.begin(), g.weights.end());
      const int c = pick(rng);
      for (int d = 0; d < g.dim; ++d) {
        f.data.push_back(g.means[c * g.dim + d] +
                         std::sqrt(g.variances[c * g.dim + d]) * n(rng));
      }
      ++f.num_frames;
    }
  }
  return f;
}

inline FeatureSequence Concat(const std::vector<FeatureSequence>& parts) {
  FeatureSequence f;
  f.dim = parts.at(0).dim;
  for (const auto& p : parts) {
    f.data.insert(f.data.end(), p.data.begin(), p.data.end());
    f.num_frames += p.num_frames;
  }
  return f;
}

// Small scene with one array holding the given microphones; the 2 x 2 grid
// covers a 4 x 4 m room.
inline SceneConfig TinyScene(std::vector<Point2> mics, double c = 343.0) {
  SceneConfig s;
  s.room_width = 4.0;
  s.room_height = 4.0;
  s.grid = CellGrid(2, 2, 2.0, 2.0);
  s.arrays.push_back({0, std::move(mics)});
  s.classes = {"knock", "ring", "keys", "paper", "speech", "silence"};
  s.speech_class = 4;
  s.silence_class = 5;
  s.speed_of_sound = c;
  s.Validate();
  return s;
}

// Band-limited delay by a full-length sinc sum: y[n] = sum_k x[k] sinc(n - k - d).
inline std::vector<double> IdealDelay(const std::vector<double>& x, double d,
                                      long length) {
  std::vector<double> y(length, 0.0);
  for (long n = 0; n < length; ++n) {
    double acc = 0.0;
    for (long k = 0; k < static_cast<long>(x.size()); ++k) {
      const double u = n - k - d;
      acc += x[k] * (u == 0.0 ? 1.0 : std::sin(std::numbers::pi * u) / (std::numbers::pi * u));
    }
    y[n] = acc;
  }
  return y;
}

inline double Power(const std::vector<double>& x, long begin = 0, long end = -1) {
  if (end < 0) end = static_cast<long>(x.size());
  double s = 0.0;
  for (long i = begin; i < end; ++i) s += x[i] * x[i];
  return s / std::max(1L, end - begin);
}

}  // namespace aedloc::testing

#endif  // AEDLOC_TESTS_TEST_UTIL_H_
