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


#include <cmath>
#include <random>
#include <vector>

#include "aedloc/error.h"
#include "aedloc/scene.h"
#include "doctest.h"

namespace aedloc {
namespace {

// Lowest-index closed rectangle that contains the point.
int BruteCell(const CellGrid& g, Point2 p) {
  for (int j = 0; j < g.size(); ++j) {
    const Point2 lo = g.Lower(j), hi = g.Upper(j);
    if (p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y) return j;
  }
  return -1;
}

TEST_CASE("reference scene shape") {
  const auto s = ReferenceScene();
  s.Validate();
  CHECK(s.num_arrays() == 3);
  CHECK(s.num_channels() == 9);
  CHECK(s.num_cells() == 16);
  CHECK(s.num_classes() == 6);
  CHECK(s.classes[s.speech_class] == "speech");
  CHECK(s.classes[s.silence_class] == "silence");
  CHECK(Distance(s.arrays[0].mics[0], s.arrays[0].mics[1]) == doctest::Approx(0.3));
  CHECK(ReferenceScene6x6().num_cells() == 36);
}

TEST_CASE("centroids map back to their own cell") {
  for (const auto& s : {ReferenceScene(), ReferenceScene6x6()}) {
    for (int j = 0; j < s.num_cells(); ++j) CHECK(s.grid.CellOf(s.grid.Centroid(j)) == j);
  }
}

TEST_CASE("shared edge goes to the lower index") {
  const auto g = ReferenceScene6x6().grid;
  const double edge = 3.966 * 4.0 / 6.0;
  CHECK(g.CellOf({edge, 0.5}) == 3);
  CHECK(g.CellOf({std::nextafter(edge, 10.0), 0.5}) == 4);
  // Corner shared by four cells.
  CHECK(g.CellOf({g.Upper(0).x, g.Upper(0).y}) == 0);
}

TEST_CASE("cell lookup agrees with a rectangle scan") {
  std::mt19937_64 rng(5);
  for (const auto& s : {ReferenceScene(), ReferenceScene6x6()}) {
    std::uniform_real_distribution<double> ux(0.0, s.room_width), uy(0.0, s.room_height);
    for (int i = 0; i < 2000; ++i) {
      const Point2 p{ux(rng), uy(rng)};
      CHECK(s.grid.CellOf(p) == BruteCell(s.grid, p));
    }
    // Points exactly on grid lines.
    for (int ix = 0; ix <= s.grid.nx(); ++ix) {
      for (int iy = 0; iy <= s.grid.ny(); ++iy) {
        const Point2 p{ix * s.grid.cell_width(), iy * s.grid.cell_height()};
        CHECK(s.grid.CellOf(p) == BruteCell(s.grid, p));
      }
    }
  }
}

TEST_CASE("points outside the grid are rejected") {
  const auto g = ReferenceScene().grid;
  CHECK_THROWS_AS(g.CellOf({-0.01, 1.0}), DomainError);
  CHECK_THROWS_AS(g.CellOf({1.0, 5.3}), DomainError);
  CHECK_THROWS_AS(g.Centroid(16), DomainError);
}

TEST_CASE("position priors without smoothing") {
  const auto g = ReferenceScene6x6().grid;
  std::vector<PositionObservation> ev(10, {0, 5});
  auto t = EstimatePositionPriors(ev, g, 6, false);
  CHECK(t.position_priors[5] == 1.0);
  CHECK(t.position_priors[4] == 0.0);
  for (int i = 0; i < 7; ++i) ev[i].cell = 7;
  t = EstimatePositionPriors(ev, g, 6, false);
  CHECK(t.position_priors[5] == doctest::Approx(0.3));
  CHECK(t.position_priors[7] == doctest::Approx(0.7));
}

TEST_CASE("laplace smoothing on a small grid") {
  const CellGrid g(2, 2, 1.0, 1.0);
  const std::vector<PositionObservation> ev{{0, 0}, {1, 0}};
  const auto t = EstimatePositionPriors(ev, g, 3, true);
  CHECK(t.position_priors[0] == doctest::Approx(3.0 / 6.0));
  for (int j = 1; j < 4; ++j) CHECK(t.position_priors[j] == doctest::Approx(1.0 / 6.0));
  CHECK(t.class_priors.size() == 3);
}

TEST_CASE("priors sum to one and follow the events") {
  std::mt19937_64 rng(6);
  const auto g = ReferenceScene().grid;
  std::uniform_int_distribution<int> cell(0, 15);
  for (bool smooth : {false, true}) {
    std::vector<PositionObservation> ev;
    for (int i = 0; i < 37; ++i) ev.push_back({0, cell(rng)});
    const auto t = EstimatePositionPriors(ev, g, 6, smooth);
    double sum = 0.0;
    for (double p : t.position_priors) {
      CHECK(p >= 0.0);
      sum += p;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    // Relabel cells by j -> 15 - j and the table follows.
    auto mirrored = ev;
    for (auto& e : mirrored) e.cell = 15 - e.cell;
    const auto m = EstimatePositionPriors(mirrored, g, 6, smooth);
    for (int j = 0; j < 16; ++j) CHECK(m.position_priors[15 - j] == t.position_priors[j]);
  }
  CHECK_THROWS_AS(EstimatePositionPriors({}, g, 6, true), DomainError);
}

TEST_CASE("flat priors") {
  const auto t = PriorTable::Flat(4, 8);
  for (double p : t.class_priors) CHECK(p == doctest::Approx(0.25));
  for (double p : t.position_priors) CHECK(p == doctest::Approx(0.125));
}

TEST_CASE("scene json round trip") {
  const auto s = ReferenceScene();
  const auto back = SceneFromJson(SceneToJson(s));
  CHECK(SceneToJson(back) == SceneToJson(s));
  CHECK(back.num_cells() == 16);
  CHECK(back.arrays[2].mics[1].x == s.arrays[2].mics[1].x);
}

TEST_CASE("invalid scenes are rejected") {
  auto j = SceneToJson(ReferenceScene());
  auto bad = j;
  bad["arrays"][0]["mics"][0] = {9.0, 1.0};
  CHECK_THROWS_AS(SceneFromJson(bad), DomainError);
  bad = j;
  bad["arrays"][0]["mics"][1] = bad["arrays"][0]["mics"][0];
  CHECK_THROWS_AS(SceneFromJson(bad), DomainError);
  bad = j;
  bad["arrays"][0]["mics"] = nlohmann::json::array({{1.0, 1.0}});
  CHECK_THROWS_AS(SceneFromJson(bad), DomainError);
  bad = j;
  bad["grid"]["nx"] = 2;
  CHECK_THROWS_AS(SceneFromJson(bad), DomainError);
  bad = j;
  bad.erase("room");
  CHECK_THROWS_AS(SceneFromJson(bad), DataError);
}

}  // namespace
}  // namespace aedloc
