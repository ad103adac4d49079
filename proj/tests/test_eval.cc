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
#include <random>
#include <vector>

#include "aedloc/error.h"
#include "aedloc/eval.h"
#include "doctest.h"
#include "test_fixture.h"

namespace aedloc {
namespace {

using Events = std::vector<GroundTruthEvent>;

Events RandomEvents(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> start(0.0, 20.0), len(0.2, 1.0);
  std::uniform_int_distribution<int> cls(0, 3), cell(0, 15);
  Events out;
  for (int i = 0; i < n; ++i) {
    const double s = start(rng);
    out.push_back({cls(rng), cell(rng), s, s + len(rng)});
  }
  return out;
}

TEST_CASE("identical lists score perfectly") {
  std::mt19937_64 rng(1);
  const auto t = RandomEvents(12, rng);
  const auto m = MatchEvents(t, t);
  CHECK(m.score.precision() == 1.0);
  CHECK(m.score.recall() == 1.0);
  CHECK(m.score.f() == 1.0);
}

TEST_CASE("empty hypothesis list") {
  std::mt19937_64 rng(2);
  const auto t = RandomEvents(5, rng);
  const auto m = MatchEvents({}, t);
  CHECK(m.score.recall() == 0.0);
  CHECK(m.score.f() == 0.0);
  CHECK(m.score.deletions() == 5);
  CHECK(MatchEvents(t, {}).score.insertions() == 5);
}

TEST_CASE("hand counted three-event case") {
  const Events truth = {{0, 1, 0.0, 1.0}, {1, 2, 2.0, 3.0}, {2, 3, 4.0, 5.0}};
  const Events hyp = {{0, 1, 0.5, 1.5},    // hit
                      {1, 9, 2.9, 3.5},    // hit, wrong cell
                      {3, 3, 4.0, 5.0},    // class wrong
                      {0, 1, 6.0, 7.0}};   // no overlap
  const auto m = MatchEvents(hyp, truth);
  CHECK(m.score.matched == 2);
  CHECK(m.score.precision() == doctest::Approx(0.5));
  CHECK(m.score.recall() == doctest::Approx(2.0 / 3.0));
  CHECK(m.score.f() == doctest::Approx(2 * 0.5 * (2.0 / 3.0) / (0.5 + 2.0 / 3.0)));
  MatchCriteria loc;
  loc.require_class = false;
  loc.require_cell = true;
  CHECK(MatchEvents(hyp, truth, loc).score.matched == 2);
  MatchCriteria strict;
  strict.min_overlap_fraction = 0.6;
  CHECK(MatchEvents(hyp, truth, strict).score.matched == 0);
  strict.min_overlap_fraction = 0.5;
  CHECK(MatchEvents(hyp, truth, strict).score.matched == 1);
}

TEST_CASE("one hypothesis matches at most one truth") {
  const Events truth = {{0, 0, 0.0, 1.0}, {0, 0, 0.5, 1.5}};
  const Events hyp = {{0, 0, 0.0, 1.5}};
  const auto m = MatchEvents(hyp, truth);
  CHECK(m.score.matched == 1);
  REQUIRE(m.pairs.size() == 1);
  CHECK(m.pairs[0].second == 0);
}

TEST_CASE("scores are bounded and order independent") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    auto t = RandomEvents(1 + trial % 9, rng);
    auto h = RandomEvents(trial % 11, rng);
    if (trial % 3 == 0 && !h.empty()) h.push_back(h.front());
    const auto a = MatchEvents(h, t).score;
    std::shuffle(t.begin(), t.end(), rng);
    std::shuffle(h.begin(), h.end(), rng);
    const auto b = MatchEvents(h, t).score;
    CHECK(a.matched == b.matched);
    for (double v : {a.precision(), a.recall(), a.f()}) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
    const double p = a.precision(), r = a.recall();
    CHECK(a.f() == doctest::Approx(p + r > 0 ? 2 * p * r / (p + r) : 0.0));
    CHECK(a.matched <= std::min(a.hypotheses, a.truths));
  }
}

TEST_CASE("classification and localization rates") {
  const std::vector<int> truth = {0, 1, 2, 3, 0, 1, 2, 3, 0, 1};
  auto decided = truth;
  CHECK(ClassificationAccuracy(decided, truth).rate() == 1.0);
  decided[0] = 3;
  decided[5] = 0;
  CHECK(ClassificationAccuracy(decided, truth).rate() == doctest::Approx(0.8));
  CHECK_THROWS_AS(ClassificationAccuracy(std::vector<int>{1}, truth), DomainError);

  // Class 0: 2 of 3 right; class 1: 1 of 1; class 2: 0 of 1; class 3 absent.
  const std::vector<int> classes = {0, 0, 0, 1, 2};
  const std::vector<int> cells = {4, 5, 6, 7, 8};
  const std::vector<int> got = {4, 5, 0, 7, 1};
  const auto loc = LocalizationAccuracy(got, cells, classes, 6);
  CHECK(loc.per_class[0].rate() == doctest::Approx(2.0 / 3.0));
  CHECK(loc.per_class[3].total == 0);
  CHECK(loc.average() == doctest::Approx((2.0 / 3.0 + 1.0 + 0.0) / 3.0));
  CHECK(loc.overall().rate() == doctest::Approx(3.0 / 5.0));
  CHECK(LocalizationAccuracy(cells, cells, classes, 6).average() == 1.0);
}

TEST_CASE("variant names round trip") {
  for (const auto& n : VariantNames()) CHECK(VariantName(ParseVariant(n)) == n);
  CHECK_THROWS_AS(ParseVariant("nope"), DomainError);
  CHECK(UsesKnownEndpoints(Variant::kKnownEndpoints));
  CHECK_FALSE(UsesKnownEndpoints(Variant::kProposedPriors));
}

TEST_CASE("known-endpoint scoring uses the best overlapping event hypothesis") {
  const auto scene = ReferenceScene();
  const Events truth = {{0, 2, 0.0, 1.0}, {4, 4, 0.0, 1.0}, {3, 9, 2.0, 3.0}};
  std::vector<EventHypothesis> hyps(4);
  hyps[0] = {4, 4, {}, 0.0, 1.0, 0.0, true};
  hyps[1] = {0, 2, {}, 0.0, 1.0, 0.0, false};
  hyps[2] = {3, 1, {}, 2.0, 3.0, 0.0, false};
  hyps[3] = {1, 9, {}, 2.5, 3.0, 0.0, false};
  const auto r = EvaluateVariant(Variant::kKnownEndpoints, scene, hyps, truth);
  REQUIRE(r.classification);
  CHECK(r.classification->total == 2);
  CHECK(r.classification->correct == 2);
  REQUIRE(r.localization);
  CHECK(r.localization->overall().correct == 1);
  CHECK_FALSE(r.detection);
  const auto srp = EvaluateVariant(Variant::kSrpPhat, scene, hyps, truth);
  CHECK_FALSE(srp.classification);
  REQUIRE(srp.localization);
  const auto prop = EvaluateVariant(Variant::kProposedPriors, scene, hyps, truth);
  REQUIRE(prop.detection);
  CHECK(prop.detection->truths == 2);
  CHECK(prop.detection->hypotheses == 3);
  CHECK(prop.detection->matched == 2);
  REQUIRE(prop.localization_f);
  CHECK(prop.localization_f->matched == 2);
}

TEST_CASE("report formatting") {
  MetricReport srp;
  srp.suite = "two-source";
  srp.variant = "srp-phat";
  srp.priors = "-";
  srp.localization = LocalizationScore{{{3, 4}, {1, 1}}};
  const std::vector<MetricReport> rows{srp};
  const auto table = FormatReportTable(rows);
  CHECK(table.find("srp-phat") != std::string::npos);
  const auto tsv = FormatReportTsv(rows);
  CHECK(tsv.find("class-acc") == std::string::npos);
  CHECK(tsv.find("two-source\tsrp-phat\t-\t") != std::string::npos);
  const CellGrid g(3, 2, 1.0, 1.0);
  const std::vector<double> v = {1, 2, 3, 4, 5, 6};
  const auto grid = FormatGrid(g, v);
  CHECK(std::count(grid.begin(), grid.end(), '\n') == 2);
}

TEST_CASE("priors estimation counts every event") {
  const auto scene = ReferenceScene();
  const std::vector<Events> truths = {{{0, 3, 0, 1}, {4, 4, 1, 2}}, {{1, 3, 0, 1}}};
  const auto p = EstimatePriors(scene, truths, false);
  CHECK(p.position_priors[3] == doctest::Approx(2.0 / 3.0));
  CHECK(p.position_priors[4] == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("leave-one-out needs two sessions") {
  const auto& fx = testing::Fixture();
  CHECK_THROWS_AS(RunLeaveOneOut(fx.scene, std::span(fx.sessions).first(1), fx.config),
                  DomainError);
}

TEST_CASE("held-out truth never reaches the priors") {
  const auto& fx = testing::Fixture();
  ExperimentConfig cfg = fx.config;
  cfg.run_srp = false;
  cfg.run_all_combinations = false;
  std::vector<Session> sessions(fx.sessions.begin(), fx.sessions.begin() + 2);
  const auto a = RunLeaveOneOut(fx.scene, sessions, cfg);
  std::mt19937_64 rng(4);
  for (auto* rec : {&sessions[0].one_source, &sessions[0].two_source}) {
    for (auto& t : rec->truth) t.cell = static_cast<int>(rng() % 4);
  }
  const auto b = RunLeaveOneOut(fx.scene, sessions, cfg);
  REQUIRE(a.fold_priors.size() == 2);
  CHECK(a.fold_priors[0].position_priors == b.fold_priors[0].position_priors);
  CHECK(a.fold_priors[1].position_priors != b.fold_priors[1].position_priors);
  CHECK(a.worst_em_drop <= 1e-6);

  // Knowing the positions can only help classification overall.
  const auto* kp = a.Find("two-source", "known-position", "estimated");
  const auto* ke = a.Find("two-source", "known-endpoints", "estimated");
  REQUIRE(kp);
  REQUIRE(ke);
  CHECK(kp->classification->rate() >= ke->classification->rate());
  CHECK(a.Find("one-source", "srp-phat", "-") == nullptr);
}

}  // namespace
}  // namespace aedloc
