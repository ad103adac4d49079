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


#ifndef AEDLOC_TESTS_ORACLES_H_
#define AEDLOC_TESTS_ORACLES_H_

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

#include "aedloc/hmm.h"
#include "test_util.h"

namespace aedloc::testing {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

inline double LogAddExp(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double m = std::max(a, b);
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

// Sum over every left-to-right state path, one path at a time.
inline double BruteForward(const HmmModel& m, const FeatureSequence& f) {
  const int n = m.num_states();
  double total = kNegInf;
  std::vector<int> path(f.num_frames, 0);
  std::function<void(int, double)> walk = [&](int t, double score) {
    const int s = path[t];
    score += GmmLogPdf(m.states[s], f.Row(t));
    if (t + 1 == f.num_frames) {
      if (s == n - 1) total = LogAddExp(total, score + std::log(1.0 - m.self_loop[s]));
      return;
    }
    path[t + 1] = s;
    walk(t + 1, score + std::log(m.self_loop[s]));
    if (s + 1 < n) {
      path[t + 1] = s + 1;
      walk(t + 1, score + std::log(1.0 - m.self_loop[s]));
    }
  };
  walk(0, 0.0);
  return total;
}

struct BruteResult {
  double score = kNegInf;
  std::vector<DecodedSegment> segments;
};

// Best path through the looped grammar by enumerating every sequence of
// (model, state) pairs.
inline BruteResult BruteViterbi(const std::vector<HmmModel>& models, int silence,
                         const FeatureSequence& f, const DecoderConfig& cfg) {
  std::vector<std::pair<int, int>> nodes;
  for (int m = 0; m < static_cast<int>(models.size()); ++m) {
    for (int s = 0; s < models[m].num_states(); ++s) nodes.push_back({m, s});
  }
  auto allowed = [&](int from, int to) {
    if (cfg.allow_event_to_event || silence < 0) return true;
    return (from == silence) != (to == silence);
  };
  // Score of moving between nodes plus whether a new model is entered.
  auto step = [&](std::pair<int, int> a, std::pair<int, int> b, bool* entry) {
    const auto& ma = models[a.first];
    double best = kNegInf;
    *entry = false;
    if (a.first == b.first && a.second == b.second) {
      best = std::log(ma.self_loop[a.second]);
    } else if (a.first == b.first && b.second == a.second + 1) {
      best = std::log(1.0 - ma.self_loop[a.second]);
    }
    if (a.second == ma.num_states() - 1 && b.second == 0 &&
        allowed(a.first, b.first)) {
      const double v = std::log(1.0 - ma.self_loop[a.second]) + cfg.insertion_penalty;
      if (v > best) {
        best = v;
        *entry = true;
      }
    }
    return best;
  };
  BruteResult out;
  const int t_max = f.num_frames;
  std::vector<int> seq(t_max);
  std::function<void(int)> rec = [&](int t) {
    if (t == t_max) {
      const auto first = nodes[seq[0]];
      if (first.second != 0) return;
      double score = cfg.insertion_penalty;
      std::vector<DecodedSegment> segs{{first.first, 0, 0}};
      for (int i = 0; i < t_max; ++i) {
        const auto node = nodes[seq[i]];
        score += GmmLogPdf(models[node.first].states[node.second], f.Row(i));
        if (i + 1 < t_max) {
          bool entry = false;
          const double tr = step(node, nodes[seq[i + 1]], &entry);
          if (tr == kNegInf) return;
          score += tr;
          if (entry) {
            segs.back().end = i + 1;
            segs.push_back({nodes[seq[i + 1]].first, i + 1, 0});
          }
        }
      }
      const auto last = nodes[seq[t_max - 1]];
      const auto& ml = models[last.first];
      if (last.second != ml.num_states() - 1) return;
      score += std::log(1.0 - ml.self_loop[last.second]);
      segs.back().end = t_max;
      if (score > out.score) {
        out.score = score;
        out.segments = segs;
      }
      return;
    }
    for (int k = 0; k < static_cast<int>(nodes.size()); ++k) {
      seq[t] = k;
      rec(t + 1);
    }
  };
  rec(0);
  return out;
}

}  // namespace aedloc::testing

#endif  // AEDLOC_TESTS_ORACLES_H_
