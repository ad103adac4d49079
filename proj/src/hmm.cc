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

#include "aedloc/hmm.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "aedloc/error.h"
#include "aedloc/util.h"

namespace aedloc {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kDeadComponent = 1e-10;

double LogAdd(double a, double b) {
  if (a < b) std::swap(a, b);
  if (b == kNegInf) return a;
  return a + std::log1p(std::exp(b - a));
}

double SafeLog(double p) { return p > 0.0 ? std::log(p) : kNegInf; }

struct StateLogs {
  std::vector<double> self;
  std::vector<double> advance;
};

StateLogs TransitionLogs(const HmmModel& m) {
  StateLogs l;
  for (double a : m.self_loop) {
    l.self.push_back(SafeLog(a));
    l.advance.push_back(SafeLog(1.0 - a));
  }
  return l;
}

EmissionTable SingleModelTable(const HmmModel& model, const FeatureSequence& f) {
  return ComputeEmissions(std::span<const HmmModel>(&model, 1), f);
}

// Forward and backward lattices (log domain) over one segment.
struct Lattice {
  int frames = 0;
  int states = 0;
  std::vector<double> alpha;
  std::vector<double> beta;
  double log_likelihood = kNegInf;
};

Lattice ForwardBackward(const HmmModel& model, const EmissionTable& table) {
  const int n = model.num_states();
  const int t_max = table.num_frames;
  const auto logs = TransitionLogs(model);
  Lattice lat;
  lat.frames = t_max;
  lat.states = n;
  lat.alpha.assign(static_cast<size_t>(t_max) * n, kNegInf);
  lat.beta.assign(static_cast<size_t>(t_max) * n, kNegInf);
  auto a = [&](int t, int s) -> double& { return lat.alpha[static_cast<size_t>(t) * n + s]; };
  auto b = [&](int t, int s) -> double& { return lat.beta[static_cast<size_t>(t) * n + s]; };
  a(0, 0) = table.at(0, 0);
  for (int t = 1; t < t_max; ++t) {
    for (int s = 0; s < n; ++s) {
      double v = a(t - 1, s) + logs.self[s];
      if (s > 0) v = LogAdd(v, a(t - 1, s - 1) + logs.advance[s - 1]);
      a(t, s) = v + table.at(t, s);
    }
  }
  b(t_max - 1, n - 1) = logs.advance[n - 1];
  for (int t = t_max - 2; t >= 0; --t) {
    for (int s = 0; s < n; ++s) {
      double v = logs.self[s] + table.at(t + 1, s) + b(t + 1, s);
      if (s + 1 < n) {
        v = LogAdd(v, logs.advance[s] + table.at(t + 1, s + 1) + b(t + 1, s + 1));
      }
      b(t, s) = v;
    }
  }
  lat.log_likelihood = a(t_max - 1, n - 1) + logs.advance[n - 1];
  return lat;
}

struct Accumulator {
  std::vector<double> occupancy;       // per state
  std::vector<double> self;            // per state
  std::vector<std::vector<double>> comp_occ;  // [s][m]
  std::vector<std::vector<double>> sum;       // [s][m * D + d]
  std::vector<std::vector<double>> sum_sq;

  Accumulator(int n, int m, int d)
      : occupancy(n, 0.0), self(n, 0.0),
        comp_occ(n, std::vector<double>(m, 0.0)),
        sum(n, std::vector<double>(static_cast<size_t>(m) * d, 0.0)),
        sum_sq(n, std::vector<double>(static_cast<size_t>(m) * d, 0.0)) {}
};

double Accumulate(const HmmModel& model, const FeatureSequence& seg,
                  Accumulator& acc) {
  const auto table = SingleModelTable(model, seg);
  const auto lat = ForwardBackward(model, table);
  const double ll = lat.log_likelihood;
  if (!std::isfinite(ll)) return ll;
  const int n = model.num_states();
  const int d_max = seg.dim;
  const auto logs = TransitionLogs(model);
  std::vector<double> comp;
  for (int t = 0; t < seg.num_frames; ++t) {
    const auto x = seg.Row(t);
    for (int s = 0; s < n; ++s) {
      const size_t idx = static_cast<size_t>(t) * n + s;
      const double gamma = std::exp(lat.alpha[idx] + lat.beta[idx] - ll);
      if (gamma <= 0.0) continue;
      acc.occupancy[s] += gamma;
      if (t + 1 < seg.num_frames) {
        acc.self[s] += std::exp(lat.alpha[idx] + logs.self[s] +
                                table.at(t + 1, s) +
                                lat.beta[idx + n] - ll);
      }
      const auto& gmm = model.states[s];
      comp.resize(gmm.num_components());
      gmm.ComponentLogLikelihoods(x, comp);
      const double total = table.at(t, s);
      for (int m = 0; m < gmm.num_components(); ++m) {
        const double post = gamma * std::exp(comp[m] - total);
        if (post <= 0.0) continue;
        acc.comp_occ[s][m] += post;
        double* sum = acc.sum[s].data() + static_cast<size_t>(m) * d_max;
        double* sq = acc.sum_sq[s].data() + static_cast<size_t>(m) * d_max;
        for (int d = 0; d < d_max; ++d) {
          sum[d] += post * x[d];
          sq[d] += post * x[d] * x[d];
        }
      }
    }
  }
  return ll;
}

void Maximize(const Accumulator& acc, const std::vector<double>& floor,
              HmmModel& model) {
  const int n = model.num_states();
  for (int s = 0; s < n; ++s) {
    if (acc.occupancy[s] > 0) {
      model.self_loop[s] = std::clamp(acc.self[s] / acc.occupancy[s], 0.0, 1.0);
    }
    auto& gmm = model.states[s];
    const int d_max = gmm.dim;
    double total = 0.0;
    for (double o : acc.comp_occ[s]) total += o;
    if (total <= 0) continue;
    for (int m = 0; m < gmm.num_components(); ++m) {
      const double occ = acc.comp_occ[s][m];
      if (occ < kDeadComponent * total) {
        gmm.weights[m] = 0.0;
        continue;
      }
      gmm.weights[m] = occ / total;
      for (int d = 0; d < d_max; ++d) {
        const size_t i = static_cast<size_t>(m) * d_max + d;
        const double mean = acc.sum[s][i] / occ;
        const double var = acc.sum_sq[s][i] / occ - mean * mean;
        gmm.means[i] = mean;
        gmm.variances[i] = std::max(var, floor[d]);
      }
    }
    gmm.Finalize();
  }
}

HmmModel Initialize(std::span<const FeatureSequence> segments,
                    const std::vector<double>& floor,
                    const std::vector<double>& scale, const TrainingConfig& cfg) {
  const int n = cfg.num_states;
  const int d_max = segments[0].dim;
  HmmModel model;
  model.states.resize(n);
  std::vector<std::vector<std::span<const double>>> frames(n);
  long total_frames = 0;
  for (const auto& seg : segments) {
    total_frames += seg.num_frames;
    for (int t = 0; t < seg.num_frames; ++t) {
      frames[static_cast<long>(t) * n / seg.num_frames].push_back(seg.Row(t));
    }
  }
  const double per_state =
      static_cast<double>(total_frames) / (static_cast<double>(n) * segments.size());
  model.self_loop.assign(n, std::clamp(1.0 - 1.0 / per_state, 0.0, 0.99));

  auto rng = MakeRng(cfg.seed, 0x4B4Du);
  auto distance = [&](std::span<const double> x, const double* c) {
    double acc = 0.0;
    for (int d = 0; d < d_max; ++d) {
      const double diff = x[d] - c[d];
      acc += diff * diff / scale[d];
    }
    return acc;
  };
  for (int s = 0; s < n; ++s) {
    const auto& pts = frames[s];
    const int count = static_cast<int>(pts.size());
    const int k_max = cfg.num_components;
    std::vector<int> pick(count);
    for (int i = 0; i < count; ++i) pick[i] = i;
    for (int i = 0; i < std::min(k_max, count); ++i) {
      std::uniform_int_distribution<int> u(i, count - 1);
      std::swap(pick[i], pick[u(rng)]);
    }
    std::vector<double> centers(static_cast<size_t>(k_max) * d_max);
    for (int m = 0; m < k_max; ++m) {
      const auto& p = pts[pick[m % count]];
      std::copy(p.begin(), p.end(), centers.begin() + static_cast<long>(m) * d_max);
    }
    std::vector<int> assign(count, 0);
    for (int it = 0; it <= cfg.kmeans_iterations; ++it) {
      for (int i = 0; i < count; ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (int m = 0; m < k_max; ++m) {
          const double dist = distance(pts[i], centers.data() + static_cast<long>(m) * d_max);
          if (dist < best) {
            best = dist;
            assign[i] = m;
          }
        }
      }
      if (it == cfg.kmeans_iterations) break;
      std::vector<double> sums(centers.size(), 0.0);
      std::vector<int> counts(k_max, 0);
      for (int i = 0; i < count; ++i) {
        ++counts[assign[i]];
        for (int d = 0; d < d_max; ++d) sums[static_cast<size_t>(assign[i]) * d_max + d] += pts[i][d];
      }
      for (int m = 0; m < k_max; ++m) {
        if (counts[m] == 0) continue;
        for (int d = 0; d < d_max; ++d) {
          centers[static_cast<size_t>(m) * d_max + d] =
              sums[static_cast<size_t>(m) * d_max + d] / counts[m];
        }
      }
    }
    DiagGmm& g = model.states[s];
    g.dim = d_max;
    g.weights.assign(k_max, 0.0);
    g.means = centers;
    g.variances.assign(centers.size(), 0.0);
    std::vector<double> sq(centers.size(), 0.0);
    std::vector<int> counts(k_max, 0);
    for (int i = 0; i < count; ++i) {
      const int m = assign[i];
      ++counts[m];
      for (int d = 0; d < d_max; ++d) {
        const double diff = pts[i][d] - centers[static_cast<size_t>(m) * d_max + d];
        sq[static_cast<size_t>(m) * d_max + d] += diff * diff;
      }
    }
    for (int m = 0; m < k_max; ++m) {
      g.weights[m] = static_cast<double>(counts[m]) / count;
      for (int d = 0; d < d_max; ++d) {
        const size_t i = static_cast<size_t>(m) * d_max + d;
        g.variances[i] = std::max(counts[m] > 0 ? sq[i] / counts[m] : scale[d], floor[d]);
      }
    }
    g.Finalize();
  }
  return model;
}

}  // namespace

void DiagGmm::Finalize() {
  const int m_max = num_components();
  log_const_.assign(m_max, 0.0);
  inv_var_.assign(variances.size(), 0.0);
  const double log2pi = std::log(2.0 * std::numbers::pi);
  for (int m = 0; m < m_max; ++m) {
    double c = SafeLog(weights[m]) - 0.5 * dim * log2pi;
    for (int d = 0; d < dim; ++d) {
      const size_t i = static_cast<size_t>(m) * dim + d;
      c -= 0.5 * std::log(variances[i]);
      inv_var_[i] = 1.0 / variances[i];
    }
    log_const_[m] = c;
  }
}

void DiagGmm::ComponentLogLikelihoods(std::span<const double> x,
                                      std::span<double> out) const {
  const int m_max = num_components();
  for (int m = 0; m < m_max; ++m) {
    if (log_const_[m] == kNegInf) {
      out[m] = kNegInf;
      continue;
    }
    const double* mu = means.data() + static_cast<size_t>(m) * dim;
    const double* iv = inv_var_.data() + static_cast<size_t>(m) * dim;
    double q = 0.0;
    for (int d = 0; d < dim; ++d) {
      const double diff = x[d] - mu[d];
      q += diff * diff * iv[d];
    }
    out[m] = log_const_[m] - 0.5 * q;
  }
}

double DiagGmm::LogLikelihood(std::span<const double> x) const {
  double buf[64];
  std::vector<double> heap;
  double* comp = buf;
  if (num_components() > 64) {
    heap.resize(num_components());
    comp = heap.data();
  }
  ComponentLogLikelihoods(x, std::span<double>(comp, num_components()));
  double best = kNegInf;
  for (int m = 0; m < num_components(); ++m) best = std::max(best, comp[m]);
  if (best == kNegInf) return kNegInf;
  double s = 0.0;
  for (int m = 0; m < num_components(); ++m) s += std::exp(comp[m] - best);
  return best + std::log(s);
}

std::vector<std::vector<double>> HmmModel::TransitionMatrix() const {
  const int n = num_states();
  std::vector<std::vector<double>> a(n + 2, std::vector<double>(n + 2, 0.0));
  a[0][1] = 1.0;
  for (int s = 0; s < n; ++s) {
    a[s + 1][s + 1] = self_loop[s];
    a[s + 1][s + 2] = 1.0 - self_loop[s];
  }
  return a;
}

void HmmModel::Validate(double variance_floor) const {
  if (states.empty()) throw DomainError("model has no emitting states");
  if (self_loop.size() != states.size()) {
    throw DomainError("model transition count does not match its states");
  }
  for (double a : self_loop) {
    if (!(a >= 0.0 && a <= 1.0)) throw DomainError("self-loop outside [0, 1]");
  }
  for (const auto& g : states) {
    if (g.dim != states[0].dim) throw DomainError("state dimensions differ");
    double w = 0.0;
    for (double v : g.weights) {
      if (!(v >= 0.0)) throw DomainError("negative mixture weight");
      w += v;
    }
    if (std::abs(w - 1.0) > 1e-9) throw DomainError("mixture weights do not sum to 1");
    if (g.means.size() != g.weights.size() * g.dim ||
        g.variances.size() != g.means.size()) {
      throw DomainError("mixture parameter sizes are inconsistent");
    }
    for (double v : g.means) {
      if (!std::isfinite(v)) throw DomainError("non-finite mean");
    }
    for (double v : g.variances) {
      if (!std::isfinite(v) || !(v > 0.0) || v < variance_floor) {
        throw DomainError("variance below floor");
      }
    }
  }
}

EmissionTable ComputeEmissions(std::span<const HmmModel> models,
                               const FeatureSequence& features) {
  EmissionTable table;
  table.num_frames = features.num_frames;
  for (const auto& m : models) {
    if (m.dim() != features.dim) {
      throw DomainError("model dimension " + std::to_string(m.dim()) +
                        " does not match features of dimension " +
                        std::to_string(features.dim));
    }
    table.offsets.push_back(table.width);
    table.width += m.num_states();
  }
  table.data.resize(static_cast<size_t>(table.num_frames) * table.width);
  for (int t = 0; t < table.num_frames; ++t) {
    const auto x = features.Row(t);
    double* row = table.data.data() + static_cast<size_t>(t) * table.width;
    for (size_t i = 0; i < models.size(); ++i) {
      for (int s = 0; s < models[i].num_states(); ++s) {
        row[table.offsets[i] + s] = models[i].states[s].LogLikelihood(x);
      }
    }
  }
  return table;
}

double ForwardLogLikelihood(const HmmModel& model, const EmissionTable& table,
                            int model_index, int begin, int end) {
  const int n = model.num_states();
  if (begin < 0 || end > table.num_frames || end - begin < n) {
    throw DomainError("segment of " + std::to_string(end - begin) +
                      " frames is too short for a " + std::to_string(n) +
                      "-state model");
  }
  const auto logs = TransitionLogs(model);
  const int off = table.offsets[model_index];
  std::vector<double> alpha(n, kNegInf), next(n);
  alpha[0] = table.at(begin, off);
  for (int t = begin + 1; t < end; ++t) {
    for (int s = 0; s < n; ++s) {
      double v = alpha[s] + logs.self[s];
      if (s > 0) v = LogAdd(v, alpha[s - 1] + logs.advance[s - 1]);
      next[s] = v + table.at(t, off + s);
    }
    alpha.swap(next);
  }
  return alpha[n - 1] + logs.advance[n - 1];
}

double ForwardLogLikelihood(const HmmModel& model,
                            const FeatureSequence& features) {
  if (features.num_frames < model.num_states()) {
    throw DomainError("segment of " + std::to_string(features.num_frames) +
                      " frames is too short for a " +
                      std::to_string(model.num_states()) + "-state model");
  }
  const auto table = SingleModelTable(model, features);
  return ForwardLogLikelihood(model, table, 0, 0, features.num_frames);
}

TrainingResult TrainBaumWelch(std::span<const FeatureSequence> segments,
                              int class_id, int array_id,
                              const TrainingConfig& cfg) {
  if (segments.empty()) throw DomainError("no training segments");
  if (cfg.num_states < 1 || cfg.num_components < 1) {
    throw DomainError("model needs at least one state and one component");
  }
  const int d_max = segments[0].dim;
  long total = 0;
  for (const auto& s : segments) {
    if (s.dim != d_max) throw DomainError("training segments differ in dimension");
    if (s.num_frames < cfg.num_states) {
      throw DomainError("training segment shorter than the number of states");
    }
    total += s.num_frames;
  }
  TrainingResult result;
  std::vector<double> mean(d_max, 0.0), var(d_max, 0.0);
  for (const auto& s : segments) {
    for (int t = 0; t < s.num_frames; ++t) {
      for (int d = 0; d < d_max; ++d) mean[d] += s.Row(t)[d];
    }
  }
  for (double& m : mean) m /= total;
  for (const auto& s : segments) {
    for (int t = 0; t < s.num_frames; ++t) {
      for (int d = 0; d < d_max; ++d) {
        const double diff = s.Row(t)[d] - mean[d];
        var[d] += diff * diff;
      }
    }
  }
  bool degenerate = false;
  std::vector<double> floor(d_max), scale(d_max);
  for (int d = 0; d < d_max; ++d) {
    var[d] /= total;
    if (var[d] < cfg.min_variance) degenerate = true;
    floor[d] = std::max(cfg.variance_floor_scale * var[d], cfg.min_variance);
    scale[d] = std::max(var[d], cfg.min_variance);
  }
  if (degenerate) {
    result.warnings.push_back(
        "training data has (near) zero variance in some dimension; variances "
        "are held at the floor");
  }
  HmmModel model = Initialize(segments, floor, scale, cfg);
  model.class_id = class_id;
  model.array_id = array_id;
  for (int it = 0;; ++it) {
    Accumulator acc(cfg.num_states, cfg.num_components, d_max);
    double ll = 0.0;
    for (const auto& seg : segments) ll += Accumulate(model, seg, acc);
    if (!std::isfinite(ll)) {
      throw DomainError("training data has zero likelihood under the model");
    }
    result.log_likelihood.push_back(ll);
    if (it > 0) {
      const double prev = result.log_likelihood[it - 1];
      if (ll - prev < cfg.tolerance * std::abs(prev)) break;
    }
    if (it >= cfg.max_iterations) break;
    Maximize(acc, floor, model);
  }
  result.model = std::move(model);
  result.variance_floor = std::move(floor);
  return result;
}

DecodedSequence ViterbiDecode(std::span<const HmmModel> models,
                              int silence_label, const EmissionTable& table,
                              const DecoderConfig& cfg) {
  const int m_max = static_cast<int>(models.size());
  const int t_max = table.num_frames;
  if (m_max == 0) throw DomainError("decoder needs at least one model");
  if (t_max == 0) throw DomainError("decoder needs at least one frame");
  std::vector<StateLogs> logs;
  for (const auto& m : models) logs.push_back(TransitionLogs(m));
  const int width = table.width;
  auto allowed = [&](int from, int to) {
    if (cfg.allow_event_to_event || silence_label < 0) return true;
    return (from == silence_label) != (to == silence_label);
  };
  constexpr int kStart = -1, kSelf = -2, kAdvance = -3;
  std::vector<int> back(static_cast<size_t>(t_max) * width, kStart);
  std::vector<double> prev(width, kNegInf), cur(width, kNegInf);
  for (int m = 0; m < m_max; ++m) {
    prev[table.offsets[m]] = cfg.insertion_penalty + table.at(0, table.offsets[m]);
  }
  std::vector<double> exits(m_max);
  for (int t = 1; t < t_max; ++t) {
    for (int m = 0; m < m_max; ++m) {
      const int last = table.offsets[m] + models[m].num_states() - 1;
      exits[m] = prev[last] + logs[m].advance.back();
    }
    int* bp = back.data() + static_cast<size_t>(t) * width;
    for (int m = 0; m < m_max; ++m) {
      const int off = table.offsets[m];
      const int n = models[m].num_states();
      for (int s = 0; s < n; ++s) {
        double best = prev[off + s] + logs[m].self[s];
        int from = kSelf;
        if (s > 0) {
          const double v = prev[off + s - 1] + logs[m].advance[s - 1];
          if (v > best) {
            best = v;
            from = kAdvance;
          }
        } else {
          for (int q = 0; q < m_max; ++q) {
            if (!allowed(q, m)) continue;
            const double v = exits[q] + cfg.insertion_penalty;
            if (v > best) {
              best = v;
              from = q;
            }
          }
        }
        cur[off + s] = best + table.at(t, off + s);
        bp[off + s] = from;
      }
    }
    prev.swap(cur);
  }
  double best = kNegInf;
  int state = -1;
  int model = -1;
  for (int m = 0; m < m_max; ++m) {
    const int last = table.offsets[m] + models[m].num_states() - 1;
    const double v = prev[last] + logs[m].advance.back();
    if (v > best) {
      best = v;
      state = last;
      model = m;
    }
  }
  if (model < 0) {
    throw DomainError("no model fits " + std::to_string(t_max) + " frames");
  }
  DecodedSequence out;
  out.log_likelihood = best;
  int end = t_max;
  for (int t = t_max - 1; t >= 0; --t) {
    const int from = back[static_cast<size_t>(t) * width + state];
    if (from == kSelf) continue;
    if (from == kAdvance) {
      --state;
      continue;
    }
    out.segments.push_back({model, t, end});
    end = t;
    if (from == kStart) break;
    model = from;
    state = table.offsets[model] + models[model].num_states() - 1;
  }
  std::reverse(out.segments.begin(), out.segments.end());
  return out;
}

DecodedSequence ViterbiDecode(std::span<const HmmModel> models,
                              int silence_label,
                              const FeatureSequence& features,
                              const DecoderConfig& config) {
  const auto table = ComputeEmissions(models, features);
  auto out = ViterbiDecode(models, silence_label, table, config);
  out.array_id = features.array_id;
  out.cell = features.cell;
  return out;
}

void ModelInventory::Validate() const {
  if (arrays.empty()) throw DomainError("inventory has no arrays");
  for (const auto& models : arrays) {
    if (models.size() != arrays[0].size()) {
      throw DomainError("inventory arrays hold different class sets");
    }
    for (size_t c = 0; c < models.size(); ++c) {
      models[c].Validate();
      if (models[c].class_id != static_cast<int>(c)) {
        throw DomainError("inventory model order does not follow class ids");
      }
    }
  }
}

void WriteInventory(std::ostream& out, const ModelInventory& inv) {
  out << "aedloc-inventory 1\n";
  out << "arrays " << inv.num_arrays() << " classes " << inv.num_classes()
      << " silence " << inv.silence_class << " speech " << inv.speech_class << '\n';
  for (const auto& models : inv.arrays) {
    for (const auto& m : models) {
      out << "model " << m.class_id << ' ' << m.array_id << ' '
          << (m.label.empty() ? "-" : m.label) << " states " << m.num_states()
          << " components " << (m.states.empty() ? 0 : m.states[0].num_components())
          << " dim " << m.dim() << '\n';
      for (int s = 0; s < m.num_states(); ++s) {
        const auto& g = m.states[s];
        out << "state " << s << " self " << FormatDouble(m.self_loop[s]) << '\n';
        out << "weights";
        for (double w : g.weights) out << ' ' << FormatDouble(w);
        out << '\n';
        for (int c = 0; c < g.num_components(); ++c) {
          out << "mean";
          for (int d = 0; d < g.dim; ++d) out << ' ' << FormatDouble(g.means[c * g.dim + d]);
          out << "\nvar";
          for (int d = 0; d < g.dim; ++d) out << ' ' << FormatDouble(g.variances[c * g.dim + d]);
          out << '\n';
        }
      }
    }
  }
}

namespace {
void Expect(std::istream& in, const std::string& word) {
  std::string got;
  if (!(in >> got) || got != word) {
    throw DataError("model file: expected '" + word + "', found '" + got + "'");
  }
}

template <typename T>
T ReadValue(std::istream& in, const char* what) {
  T v{};
  if (!(in >> v)) throw DataError(std::string("model file: cannot read ") + what);
  return v;
}
}  // namespace

ModelInventory ReadInventory(std::istream& in) {
  Expect(in, "aedloc-inventory");
  if (ReadValue<int>(in, "version") != 1) throw DataError("unsupported model file version");
  ModelInventory inv;
  Expect(in, "arrays");
  const int k_max = ReadValue<int>(in, "array count");
  Expect(in, "classes");
  const int c_max = ReadValue<int>(in, "class count");
  Expect(in, "silence");
  inv.silence_class = ReadValue<int>(in, "silence class");
  Expect(in, "speech");
  inv.speech_class = ReadValue<int>(in, "speech class");
  if (k_max < 0 || c_max < 0) throw DataError("model file: negative counts");
  inv.arrays.resize(k_max);
  for (int k = 0; k < k_max; ++k) {
    for (int c = 0; c < c_max; ++c) {
      HmmModel m;
      Expect(in, "model");
      m.class_id = ReadValue<int>(in, "class id");
      m.array_id = ReadValue<int>(in, "array id");
      m.label = ReadValue<std::string>(in, "label");
      if (m.label == "-") m.label.clear();
      Expect(in, "states");
      const int n = ReadValue<int>(in, "state count");
      Expect(in, "components");
      const int comps = ReadValue<int>(in, "component count");
      Expect(in, "dim");
      const int dim = ReadValue<int>(in, "dimension");
      for (int s = 0; s < n; ++s) {
        Expect(in, "state");
        ReadValue<int>(in, "state index");
        Expect(in, "self");
        m.self_loop.push_back(ReadValue<double>(in, "self loop"));
        DiagGmm g;
        g.dim = dim;
        Expect(in, "weights");
        for (int i = 0; i < comps; ++i) g.weights.push_back(ReadValue<double>(in, "weight"));
        for (int i = 0; i < comps; ++i) {
          Expect(in, "mean");
          for (int d = 0; d < dim; ++d) g.means.push_back(ReadValue<double>(in, "mean"));
          Expect(in, "var");
          for (int d = 0; d < dim; ++d) g.variances.push_back(ReadValue<double>(in, "variance"));
        }
        g.Finalize();
        m.states.push_back(std::move(g));
      }
      inv.arrays[k].push_back(std::move(m));
    }
  }
  return inv;
}

void SaveInventory(const std::string& path, const ModelInventory& inv) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path + "'");
  WriteInventory(out, inv);
}

ModelInventory LoadInventory(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open model file '" + path + "'");
  return ReadInventory(in);
}

}  // namespace aedloc
