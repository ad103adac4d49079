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


#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>
#include <vector>

#include "aedloc/baselines.h"
#include "aedloc/error.h"
#include "doctest.h"
#include "test_fixture.h"
#include "test_util.h"

namespace aedloc {
namespace {

std::vector<double> White(long n, std::uint64_t seed, double scale = 0.05) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, scale);
  std::vector<double> x(n);
  for (double& v : x) v = g(rng);
  return x;
}

SourceEvent NoiseEvent(const SceneConfig& s, int cell, double start,
                       double duration, std::uint64_t seed) {
  SourceEvent e;
  e.class_id = 0;
  e.cell = cell;
  e.start = start;
  e.duration = duration;
  e.sample_rate = s.sample_rate;
  e.waveform = White(std::lround(duration * s.sample_rate), seed);
  return e;
}

int Peak(const std::vector<double>& r) {
  return static_cast<int>(std::max_element(r.begin(), r.end()) - r.begin());
}

TEST_CASE("gcc-phat peaks at the constructed delay") {
  const auto x = White(2000, 1);
  const int n = 512;
  for (int d : {-7, 0, 5, 20}) {
    std::vector<double> a(x.begin() + 100, x.begin() + 100 + n);
    std::vector<double> b(x.begin() + 100 - d, x.begin() + 100 - d + n);
    const auto r = GccPhat(a, b, 1024);
    CHECK(Peak(r) == (d + 1024) % 1024);
  }
  // Fractional delay lands within a sample of the true lag.
  std::vector<double> y(2000, 0.0);
  AddDelayed(x, 3.4, 1.0, 64, y);
  std::vector<double> a(x.begin() + 200, x.begin() + 200 + n);
  std::vector<double> b(y.begin() + 200, y.begin() + 200 + n);
  CHECK(std::abs(Peak(GccPhat(a, b, 1024)) - 3.4) <= 1.0);
  CHECK(Peak(GccPhat(a, a, 1024)) == 0);
}

TEST_CASE("gcc-phat ignores scale and rejects bad input") {
  const auto a = White(512, 2), b = White(512, 3);
  auto b2 = b;
  for (double& v : b2) v *= 100.0;
  const auto r1 = GccPhat(a, b, 1024), r2 = GccPhat(a, b2, 1024);
  for (size_t i = 0; i < r1.size(); ++i) CHECK(std::abs(r1[i] - r2[i]) < 1e-6);
  CHECK_THROWS_AS(GccPhat(a, std::vector<double>(512, 0.0), 1024), DomainError);
  CHECK_THROWS_AS(GccPhat(a, White(500, 4), 1024), DomainError);
  CHECK_THROWS_AS(GccPhat(a, b, 256), DomainError);
}

TEST_CASE("srp config validation") {
  const auto s = ReferenceScene();
  SrpConfig c;
  c.Validate(s);
  c.src_contraction = 1.0;
  CHECK_THROWS_AS(c.Validate(s), DomainError);
  c = {};
  c.fft_size = 256;
  CHECK_THROWS_AS(c.Validate(s), DomainError);
  c = {};
  c.pairs = {{0, 0}};
  CHECK_THROWS_AS(c.Validate(s), DomainError);
  CHECK(SrpLocalizer(s, {}).num_pairs() == 36);
}

TEST_CASE("srp finds a single source in every cell") {
  const auto s = ReferenceScene();
  SrpLocalizer srp(s, {});
  RenderOptions opt;
  opt.snr_db = 30.0;
  for (int cell = 0; cell < s.num_cells(); ++cell) {
    const std::vector<SourceEvent> ev{NoiseEvent(s, cell, 0.1, 0.3, 10 + cell)};
    const auto rec = Render(s, ev, 0.5, opt, cell);
    const auto ch = RecordingChannels(rec);
    const auto m = srp.Map(srp.FrameCorrelations(ch, 2400));
    CHECK(std::max_element(m.begin(), m.end()) - m.begin() == cell);
    CHECK(srp.LocalizeEvent(ch, 0.1, 0.4, 1) == std::vector<int>{cell});
  }
}

TEST_CASE("a source lifts the map above a noise-only frame") {
  const auto s = ReferenceScene();
  SrpLocalizer srp(s, {});
  const std::vector<SourceEvent> ev{NoiseEvent(s, 6, 0.3, 0.3, 3)};
  const auto rec = Render(s, ev, 0.8, {}, 4);
  const auto ch = RecordingChannels(rec);
  const auto quiet = srp.Map(srp.FrameCorrelations(ch, 100));
  const auto loud = srp.Map(srp.FrameCorrelations(ch, 6400));
  CHECK(*std::max_element(loud.begin(), loud.end()) >
        *std::max_element(quiet.begin(), quiet.end()));
  const std::vector<std::vector<double>> zero(9, std::vector<double>(1000, 0.0));
  for (double v : srp.Map(srp.FrameCorrelations(zero, 0))) CHECK(v == 0.0);
}

TEST_CASE("mirror-symmetric geometry gives a mirrored map") {
  SceneConfig s = testing::TinyScene({{1.7, 0.1}, {2.3, 0.1}});
  s.arrays.push_back({1, {{1.0, 3.9}, {3.0, 3.9}}});
  s.Validate();
  SrpLocalizer srp(s, {});
  const auto wave = White(4800, 5);
  auto render = [&](int cell) {
    SourceEvent e = NoiseEvent(s, cell, 0.0, 0.3, 5);
    e.waveform = wave;
    const std::vector<SourceEvent> ev{e};
    RenderOptions opt;
    opt.snr_db = std::numeric_limits<double>::infinity();
    return RecordingChannels(Render(s, ev, 0.4, opt, 1));
  };
  const auto left = srp.Map(srp.FrameCorrelations(render(0), 1600));
  const auto right = srp.Map(srp.FrameCorrelations(render(1), 1600));
  // Cells 0 <-> 1 and 2 <-> 3 swap under x -> 4 - x.
  for (int j = 0; j < 4; ++j) CHECK(left[j] == doctest::Approx(right[j ^ 1]).epsilon(1e-6));
}

TEST_CASE("event localization edge cases") {
  const auto s = ReferenceScene();
  SrpLocalizer srp(s, {});
  const std::vector<SourceEvent> ev{NoiseEvent(s, 0, 0.1, 0.3, 6), NoiseEvent(s, 15, 0.1, 0.3, 7)};
  const auto rec = Render(s, ev, 0.5, {}, 2);
  const auto ch = RecordingChannels(rec);
  CHECK_THROWS_AS(srp.LocalizeEvent(ch, 0.1, 0.12, 1), DomainError);
  CHECK_THROWS_AS(srp.LocalizeEvent(ch, 0.1, 0.4, 3), DomainError);
  const auto two = srp.LocalizeEvent(ch, 0.1, 0.4, 2);
  REQUIRE(two.size() == 2);
  CHECK(two[0] != two[1]);
  CHECK((two[0] == 0 || two[0] == 15 || two[1] == 0 || two[1] == 15));
}

TEST_CASE("region contraction agrees with the grid search") {
  const auto& fx = testing::Fixture();
  SrpConfig grid_cfg, src_cfg;
  src_cfg.search = SrpSearch::kRegionContraction;
  SrpLocalizer grid(fx.scene, grid_cfg), src(fx.scene, src_cfg);
  int agree = 0, total = 0;
  for (const auto& session : fx.sessions) {
    const auto ch = RecordingChannels(session.one_source);
    for (const auto& t : session.one_source.truth) {
      if (!fx.scene.IsEventClass(t.class_id)) continue;
      agree += grid.LocalizeEvent(ch, t.start, t.end, 1) == src.LocalizeEvent(ch, t.start, t.end, 1);
      ++total;
    }
  }
  INFO(agree, " of ", total);
  CHECK(agree >= 0.95 * total);
}

TEST_CASE("combination counts") {
  CHECK(RestrictedCombinationCount(4, false) == 8);
  CHECK(RestrictedCombinationCount(4, true) == 9);
  CHECK(UnrestrictedCombinationCount(4, 2) == 16);
  CHECK(UnrestrictedCombinationCount(6, 1) == 6);
}

TEST_CASE("all-combinations models") {
  const auto& fx = testing::Fixture();
  const FrameTiming timing;
  std::vector<LabeledSegment> iso, mixed;
  for (int n = 0; n < 2; ++n) {
    for (auto& x : BaselineSegments(fx.scene, fx.one_source[n], timing, false)) iso.push_back(x);
    for (auto& x : BaselineSegments(fx.scene, fx.two_source[n], timing, true)) mixed.push_back(x);
  }
  TrainingConfig cfg;
  const auto inv = TrainAllCombinations(fx.scene, iso, mixed, cfg, false, 0);
  REQUIRE(inv.models.size() == 8);
  CHECK(inv.models[0].label == "knock");
  CHECK(inv.models[4].label == "knock+speech");
  CHECK(inv.models[7].classes == std::vector<int>{3, 4});
  int correct = 0, total = 0;
  for (const auto& seg : BaselineSegments(fx.scene, fx.two_source[2], timing, true)) {
    const int m = ClassifyCombination(inv, seg.features);
    correct += inv.models[m].classes[0] == seg.class_id;
    ++total;
  }
  CHECK(correct > total / 4);
  const auto path = (std::filesystem::temp_directory_path() / "aedloc_comb_test.txt").string();
  SaveCombinations(path, inv);
  const auto back = LoadCombinations(path, fx.scene);
  REQUIRE(back.models.size() == 8);
  CHECK(back.models[5].classes == inv.models[5].classes);
  const auto& seg = iso.front().features;
  CHECK(ClassifyCombination(back, seg) == ClassifyCombination(inv, seg));
  std::filesystem::remove(path);
  CHECK(TrainAllCombinations(fx.scene, iso, mixed, cfg, true, 0).models.size() == 9);
  std::vector<LabeledSegment> no_keys;
  for (const auto& x : mixed) {
    if (x.class_id != 2) no_keys.push_back(x);
  }
  CHECK_THROWS_AS(TrainAllCombinations(fx.scene, iso, no_keys, cfg, false, 0), DataError);
}

}  // namespace
}  // namespace aedloc
