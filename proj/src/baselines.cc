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

#include "aedloc/baselines.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include "aedloc/error.h"
#include "aedloc/util.h"

namespace aedloc {

std::vector<double> GccPhat(std::span<const double> a, std::span<const double> b,
                            int fft_size) {
  if (a.size() != b.size()) throw DomainError("gcc-phat inputs differ in length");
  if (static_cast<int>(a.size()) > fft_size) throw DomainError("fft size below input length");
  auto energy = [](std::span<const double> x) {
    double e = 0.0;
    for (double v : x) e += v * v;
    return e;
  };
  if (energy(a) == 0.0 || energy(b) == 0.0) {
    throw DomainError("gcc-phat of a zero-energy signal");
  }
  RealFft fft(fft_size);
  std::vector<std::complex<double>> fa(fft.num_bins()), fb(fft.num_bins());
  fft.Forward(a, fa);
  fft.Forward(b, fb);
  double peak = 0.0;
  for (int i = 0; i < fft.num_bins(); ++i) {
    fa[i] = std::conj(fa[i]) * fb[i];
    peak = std::max(peak, std::abs(fa[i]));
  }
  const double eps = 1e-12 * peak;
  for (auto& g : fa) g /= std::abs(g) + eps;
  std::vector<double> r(fft_size);
  fft.Inverse(fa, r);
  return r;
}

void SrpConfig::Validate(const SceneConfig& scene) const {
  if (frame_length <= 0 || frame_shift <= 0) throw DomainError("srp frame sizes must be positive");
  if (fft_size < frame_length) throw DomainError("srp fft size below frame length");
  if (!(src_contraction > 0.0 && src_contraction < 1.0)) {
    throw DomainError("contraction factor must lie in (0, 1)");
  }
  if (src_samples < 1 || src_iterations < 1) throw DomainError("src needs samples and iterations");
  const auto mics = scene.AllMics();
  double max_d = 0.0;
  for (const auto& [a, b] : pairs) {
    if (a < 0 || b < 0 || a >= static_cast<int>(mics.size()) ||
        b >= static_cast<int>(mics.size()) || a == b) {
      throw DomainError("invalid microphone pair");
    }
    max_d = std::max(max_d, Distance(mics[a], mics[b]));
  }
  if (fft_size < 2.0 * max_d / scene.speed_of_sound * scene.sample_rate) {
    throw DomainError("srp fft size below twice the largest inter-mic delay");
  }
}

namespace {

SrpConfig WithPairs(const SceneConfig& scene, SrpConfig cfg) {
  if (cfg.pairs.empty()) {
    const int m = scene.num_channels();
    for (int a = 0; a < m; ++a) {
      for (int b = a + 1; b < m; ++b) cfg.pairs.emplace_back(a, b);
    }
  }
  cfg.Validate(scene);
  return cfg;
}

}  // namespace

SrpLocalizer::SrpLocalizer(const SceneConfig& scene, SrpConfig config)
    : scene_(scene),
      config_(WithPairs(scene, std::move(config))),
      mics_(scene.AllMics()),
      window_(HannWindow(config_.frame_length)),
      fft_(config_.fft_size) {
  cell_lags_.resize(config_.pairs.size());
  for (int q = 0; q < num_pairs(); ++q) {
    for (int j = 0; j < scene_.num_cells(); ++j) {
      cell_lags_[q].push_back(Lag(q, scene_.grid.Centroid(j)));
    }
  }
}

double SrpLocalizer::Lag(int pair, Point2 x) const {
  const auto [a, b] = config_.pairs[pair];
  return (Distance(x, mics_[b]) - Distance(x, mics_[a])) / scene_.speed_of_sound *
         scene_.sample_rate;
}

std::vector<std::vector<double>> SrpLocalizer::FrameCorrelations(
    std::span<const std::vector<double>> channels, long start) {
  const int l = config_.frame_length;
  std::vector<std::vector<std::complex<double>>> spectra(channels.size());
  std::vector<double> frame(l);
  std::vector<bool> silent(channels.size(), false);
  for (size_t c = 0; c < channels.size(); ++c) {
    if (start < 0 || start + l > static_cast<long>(channels[c].size())) {
      throw DomainError("srp frame outside the signal");
    }
    double e = 0.0;
    for (int t = 0; t < l; ++t) {
      frame[t] = channels[c][start + t] * window_[t];
      e += frame[t] * frame[t];
    }
    silent[c] = e == 0.0;
    spectra[c].resize(fft_.num_bins());
    fft_.Forward(frame, spectra[c]);
  }
  std::vector<std::vector<double>> out(config_.pairs.size());
  std::vector<std::complex<double>> g(fft_.num_bins());
  for (int q = 0; q < num_pairs(); ++q) {
    const auto [a, b] = config_.pairs[q];
    out[q].assign(config_.fft_size, 0.0);
    // A digitally silent channel contributes nothing.
    if (silent[a] || silent[b]) continue;
    double peak = 0.0;
    for (int i = 0; i < fft_.num_bins(); ++i) {
      g[i] = std::conj(spectra[a][i]) * spectra[b][i];
      peak = std::max(peak, std::abs(g[i]));
    }
    const double eps = 1e-12 * peak;
    for (auto& v : g) v /= std::abs(v) + eps;
    fft_.Inverse(g, out[q]);
  }
  return out;
}

namespace {

double Interp(const std::vector<double>& r, double lag) {
  const long n = static_cast<long>(r.size());
  const double f = std::floor(lag);
  const double w = lag - f;
  long i0 = static_cast<long>(f) % n;
  if (i0 < 0) i0 += n;
  const long i1 = (i0 + 1) % n;
  return (1.0 - w) * r[i0] + w * r[i1];
}

}  // namespace

double SrpLocalizer::Power(const std::vector<std::vector<double>>& gcc,
                           Point2 x) const {
  double s = 0.0;
  for (int q = 0; q < num_pairs(); ++q) s += Interp(gcc[q], Lag(q, x));
  return s;
}

std::vector<double> SrpLocalizer::Map(const std::vector<std::vector<double>>& gcc) const {
  std::vector<double> m(scene_.num_cells(), 0.0);
  for (int q = 0; q < num_pairs(); ++q) {
    for (int j = 0; j < scene_.num_cells(); ++j) m[j] += Interp(gcc[q], cell_lags_[q][j]);
  }
  return m;
}

Point2 SrpLocalizer::RegionContraction(const std::vector<std::vector<double>>& gcc,
                                       std::mt19937_64& rng) const {
  const Point2 lo = scene_.grid.origin();
  const Point2 hi{lo.x + scene_.grid.width(), lo.y + scene_.grid.height()};
  Point2 center{(lo.x + hi.x) / 2, (lo.y + hi.y) / 2};
  double hx = (hi.x - lo.x) / 2, hy = (hi.y - lo.y) / 2;
  Point2 best = center;
  double best_v = Power(gcc, center);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int it = 0; it < config_.src_iterations; ++it) {
    const double x0 = std::max(lo.x, center.x - hx), x1 = std::min(hi.x, center.x + hx);
    const double y0 = std::max(lo.y, center.y - hy), y1 = std::min(hi.y, center.y + hy);
    for (int s = 0; s < config_.src_samples; ++s) {
      const Point2 p{x0 + (x1 - x0) * u(rng), y0 + (y1 - y0) * u(rng)};
      const double v = Power(gcc, p);
      if (v > best_v) {
        best_v = v;
        best = p;
      }
    }
    center = best;
    hx *= config_.src_contraction;
    hy *= config_.src_contraction;
  }
  return best;
}

std::vector<long> SrpLocalizer::FrameStarts(double start, double end,
                                            long num_samples) const {
  const long s0 = std::max(0L, std::lround(start * scene_.sample_rate));
  const long s1 = std::min(num_samples, std::lround(end * scene_.sample_rate));
  std::vector<long> out;
  for (long s = s0; s + config_.frame_length <= s1; s += config_.frame_shift) {
    out.push_back(s);
  }
  if (out.empty()) throw DomainError("event interval shorter than one srp frame");
  return out;
}

std::vector<int> SrpLocalizer::LocalizeEvent(
    std::span<const std::vector<double>> channels, double start, double end,
    int n_sources) {
  if (n_sources != 1 && n_sources != 2) throw DomainError("n_sources must be 1 or 2");
  if (static_cast<int>(channels.size()) != scene_.num_channels()) {
    throw DomainError("channel count does not match the scene");
  }
  const auto starts = FrameStarts(start, end, static_cast<long>(channels[0].size()));
  const int p = scene_.num_cells();
  auto rng = MakeRng(config_.src_seed, static_cast<std::uint64_t>(starts[0]));
  Point2 sum1{}, sum2{};
  std::vector<double> total(p, 0.0);
  for (long s : starts) {
    const auto gcc = FrameCorrelations(channels, s);
    const auto m = Map(gcc);
    int j1 = 0;
    for (int j = 1; j < p; ++j) {
      if (m[j] > m[j1]) j1 = j;
    }
    Point2 x1 = scene_.grid.Centroid(j1);
    if (n_sources == 1 && config_.search == SrpSearch::kRegionContraction) {
      x1 = RegionContraction(gcc, rng);
    }
    sum1.x += x1.x;
    sum1.y += x1.y;
    if (n_sources == 2 && p > 1) {
      int j2 = j1 == 0 ? 1 : 0;
      for (int j = 0; j < p; ++j) {
        if (j != j1 && m[j] > m[j2]) j2 = j;
      }
      const Point2 x2 = scene_.grid.Centroid(j2);
      sum2.x += x2.x;
      sum2.y += x2.y;
    }
    for (int j = 0; j < p; ++j) total[j] += m[j];
  }
  const double n = static_cast<double>(starts.size());
  std::vector<int> cells{scene_.grid.CellOf({sum1.x / n, sum1.y / n})};
  if (n_sources == 2 && p > 1) {
    int c2 = scene_.grid.CellOf({sum2.x / n, sum2.y / n});
    if (c2 == cells[0]) {
      c2 = -1;
      for (int j = 0; j < p; ++j) {
        if (j != cells[0] && (c2 < 0 || total[j] > total[c2])) c2 = j;
      }
    }
    cells.push_back(c2);
  }
  return cells;
}

std::vector<std::vector<double>> RecordingChannels(const MultichannelRecording& rec) {
  std::vector<std::vector<double>> out;
  out.reserve(rec.channels.size());
  for (int c = 0; c < rec.num_channels(); ++c) out.push_back(rec.Channel(c));
  return out;
}

CombinationInventory TrainAllCombinations(const SceneConfig& scene,
                                          std::span<const LabeledSegment> isolated,
                                          std::span<const LabeledSegment> mixed,
                                          const TrainingConfig& config,
                                          bool speech_alone, int channel,
                                          int jobs) {
  struct Job {
    std::vector<int> classes;
    std::vector<FeatureSequence> segments;
  };
  std::vector<Job> work;
  auto collect = [](std::span<const LabeledSegment> from, int c) {
    std::vector<FeatureSequence> out;
    for (const auto& s : from) {
      if (s.class_id == c) out.push_back(s.features);
    }
    return out;
  };
  for (int c = 0; c < scene.num_classes(); ++c) {
    if (!scene.IsEventClass(c)) continue;
    auto iso = collect(isolated, c);
    if (iso.empty()) throw DataError("no isolated training data for class '" + scene.classes[c] + "'");
    work.push_back({{c}, std::move(iso)});
  }
  for (int c = 0; c < scene.num_classes(); ++c) {
    if (!scene.IsEventClass(c)) continue;
    auto mix = collect(mixed, c);
    if (mix.empty()) throw DataError("no overlapped training data for class '" + scene.classes[c] + "'");
    work.push_back({{c, scene.speech_class}, std::move(mix)});
  }
  if (speech_alone) {
    auto sp = collect(isolated, scene.speech_class);
    if (sp.empty()) throw DataError("no speech training data");
    work.push_back({{scene.speech_class}, std::move(sp)});
  }
  CombinationInventory inv;
  inv.channel = channel;
  inv.models.resize(work.size());
  ParallelFor(static_cast<int>(work.size()), jobs, [&](int n) {
    auto& m = inv.models[n];
    m.classes = work[n].classes;
    for (size_t i = 0; i < m.classes.size(); ++i) {
      m.label += (i ? "+" : "") + scene.classes[m.classes[i]];
    }
    TrainingConfig cfg = config;
    cfg.seed = config.seed + static_cast<std::uint64_t>(n);
    m.model = TrainBaumWelch(work[n].segments, n, 0, cfg).model;
    m.model.label = m.label;
  });
  return inv;
}

int ClassifyCombination(const CombinationInventory& inventory,
                        const FeatureSequence& segment) {
  if (inventory.models.empty()) throw DomainError("empty combination inventory");
  int best = -1;
  double best_v = -std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < inventory.models.size(); ++i) {
    const double v = ForwardLogLikelihood(inventory.models[i].model, segment);
    if (best < 0 || v > best_v) {
      best = static_cast<int>(i);
      best_v = v;
    }
  }
  return best;
}

void SaveCombinations(const std::string& path, const CombinationInventory& inv) {
  ModelInventory m;
  m.arrays.resize(1);
  for (const auto& c : inv.models) {
    HmmModel h = c.model;
    h.array_id = inv.channel;
    h.label = c.label;
    m.arrays[0].push_back(std::move(h));
  }
  SaveInventory(path, m);
}

CombinationInventory LoadCombinations(const std::string& path,
                                      const SceneConfig& scene) {
  const ModelInventory m = LoadInventory(path);
  if (m.num_arrays() != 1) throw DataError("'" + path + "' is not a combination model file");
  CombinationInventory inv;
  for (const auto& h : m.arrays[0]) {
    CombinationModel c;
    c.label = h.label;
    size_t pos = 0;
    while (pos <= h.label.size()) {
      const size_t next = std::min(h.label.find('+', pos), h.label.size());
      c.classes.push_back(scene.ClassIndex(h.label.substr(pos, next - pos)));
      pos = next + 1;
    }
    c.model = h;
    inv.channel = h.array_id;
    inv.models.push_back(std::move(c));
  }
  return inv;
}

int RestrictedCombinationCount(int event_classes, bool speech_alone) {
  return 2 * event_classes + (speech_alone ? 1 : 0);
}

long UnrestrictedCombinationCount(int classes, int sources) {
  long n = 1;
  for (int s = 0; s < sources; ++s) n *= classes;
  return n;
}

}  // namespace aedloc
