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

#include "aedloc/scene.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "aedloc/error.h"

namespace aedloc {

namespace {

ArrayGeometry LinearArray(int id, Point2 center, Point2 axis, double spacing,
                          int count) {
  ArrayGeometry a;
  a.array_id = id;
  const double half = 0.5 * (count - 1);
  for (int m = 0; m < count; ++m) {
    const double u = (m - half) * spacing;
    a.mics.push_back({center.x + u * axis.x, center.y + u * axis.y});
  }
  return a;
}

SceneConfig ReferenceRoom(int nx, int ny) {
  SceneConfig s;
  s.room_width = 3.966;
  s.room_height = 5.244;
  s.grid = CellGrid(nx, ny, s.room_width / nx, s.room_height / ny);
  // Mics run parallel to the wall they hang on.
  s.arrays.push_back(LinearArray(0, {1.90, 0.10}, {1, 0}, 0.3, 3));
  s.arrays.push_back(LinearArray(1, {0.10, 3.70}, {0, 1}, 0.3, 3));
  s.arrays.push_back(LinearArray(2, {3.866, 1.80}, {0, 1}, 0.3, 3));
  s.classes = {"knock", "ring", "keys", "paper", "speech", "silence"};
  s.speech_class = 4;
  s.silence_class = 5;
  s.max_simultaneous = 2;
  s.sample_rate = 16000.0;
  return s;
}

Point2 PointFromJson(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 2) {
    throw DataError("expected a 2-element [x, y] array");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

double Distance(Point2 a, Point2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

void ArrayGeometry::Validate() const {
  if (mics.size() < 2) {
    throw DomainError("array " + std::to_string(array_id) +
                      " needs at least two microphones");
  }
  for (size_t a = 0; a < mics.size(); ++a) {
    for (size_t b = a + 1; b < mics.size(); ++b) {
      if (mics[a].x == mics[b].x && mics[a].y == mics[b].y) {
        throw DomainError("array " + std::to_string(array_id) +
                          " has coincident microphones");
      }
    }
  }
}

CellGrid::CellGrid(int nx, int ny, double cell_width, double cell_height,
                   Point2 origin)
    : nx_(nx), ny_(ny), cell_width_(cell_width), cell_height_(cell_height),
      origin_(origin) {
  if (nx <= 0 || ny <= 0 || !(cell_width > 0) || !(cell_height > 0)) {
    throw DomainError("cell grid needs positive counts and cell sizes");
  }
}

Point2 CellGrid::Lower(int cell) const {
  return {origin_.x + Column(cell) * cell_width_,
          origin_.y + Row(cell) * cell_height_};
}

Point2 CellGrid::Upper(int cell) const {
  return {origin_.x + (Column(cell) + 1) * cell_width_,
          origin_.y + (Row(cell) + 1) * cell_height_};
}

Point2 CellGrid::Centroid(int cell) const {
  if (cell < 0 || cell >= size()) throw DomainError("cell index out of range");
  return {origin_.x + (Column(cell) + 0.5) * cell_width_,
          origin_.y + (Row(cell) + 0.5) * cell_height_};
}

int CellGrid::Axis(double offset, double size, int count,
                   const char* name) const {
  // Edges are computed as i * size exactly like Lower()/Upper() so that a
  // point placed on an edge compares equal to it.
  if (!(offset >= 0.0) || offset > count * size) {
    throw DomainError(std::string("point outside grid along ") + name);
  }
  int i = static_cast<int>(std::floor(offset / size));
  i = std::clamp(i, 0, count - 1);
  while (i > 0 && offset <= i * size) --i;
  while (i < count - 1 && offset > (i + 1) * size) ++i;
  return i;
}

int CellGrid::CellOf(Point2 p) const {
  const int ix = Axis(p.x - origin_.x, cell_width_, nx_, "x");
  const int iy = Axis(p.y - origin_.y, cell_height_, ny_, "y");
  return iy * nx_ + ix;
}

int SceneConfig::num_channels() const {
  int n = 0;
  for (const auto& a : arrays) n += a.num_mics();
  return n;
}

int SceneConfig::ChannelOf(int array, int mic) const {
  int base = 0;
  for (int k = 0; k < array; ++k) base += arrays[k].num_mics();
  return base + mic;
}

std::vector<Point2> SceneConfig::AllMics() const {
  std::vector<Point2> out;
  for (const auto& a : arrays) out.insert(out.end(), a.mics.begin(), a.mics.end());
  return out;
}

int SceneConfig::ClassIndex(const std::string& label) const {
  for (int c = 0; c < num_classes(); ++c) {
    if (classes[c] == label) return c;
  }
  throw DataError("unknown class label '" + label + "'");
}

void SceneConfig::Validate() const {
  if (arrays.empty()) throw DomainError("scene needs at least one array");
  if (num_classes() < 2) throw DomainError("scene needs at least two classes");
  if (!(sample_rate > 0)) throw DomainError("sample rate must be positive");
  if (!(room_width > 0) || !(room_height > 0)) {
    throw DomainError("room dimensions must be positive");
  }
  if (max_simultaneous < 1 || max_simultaneous > 2) {
    throw DomainError("max_simultaneous must be 1 or 2");
  }
  if (speech_class < 0 || speech_class >= num_classes() || silence_class < 0 ||
      silence_class >= num_classes() || speech_class == silence_class) {
    throw DomainError("scene needs distinct speech and silence classes");
  }
  if (grid.size() == 0) throw DomainError("scene grid is empty");
  const double tol = 1e-6;
  if (grid.origin().x > tol || grid.origin().y > tol ||
      grid.origin().x + grid.width() < room_width - tol ||
      grid.origin().y + grid.height() < room_height - tol) {
    throw DomainError("cell grid does not cover the room");
  }
  for (size_t k = 0; k < arrays.size(); ++k) {
    arrays[k].Validate();
    for (const auto& m : arrays[k].mics) {
      if (m.x < 0 || m.y < 0 || m.x > room_width || m.y > room_height) {
        throw DomainError("array " + std::to_string(k) +
                          " has a microphone outside the room");
      }
    }
  }
}

SceneConfig ReferenceScene() { return ReferenceRoom(4, 4); }
SceneConfig ReferenceScene6x6() { return ReferenceRoom(6, 6); }

SceneConfig SceneFromJson(const nlohmann::json& j) {
  try {
    SceneConfig s;
    const auto& room = j.at("room");
    s.room_width = room.at(0).get<double>();
    s.room_height = room.at(1).get<double>();
    int id = 0;
    for (const auto& a : j.at("arrays")) {
      ArrayGeometry g;
      g.array_id = id++;
      for (const auto& m : a.at("mics")) g.mics.push_back(PointFromJson(m));
      s.arrays.push_back(std::move(g));
    }
    const auto& grid = j.at("grid");
    const Point2 cell = PointFromJson(grid.at("cell"));
    const Point2 origin =
        grid.contains("origin") ? PointFromJson(grid["origin"]) : Point2{};
    s.grid = CellGrid(grid.at("nx").get<int>(), grid.at("ny").get<int>(),
                      cell.x, cell.y, origin);
    s.classes = j.at("classes").get<std::vector<std::string>>();
    s.speech_class = s.ClassIndex(j.value("speech_class", std::string("speech")));
    s.silence_class =
        s.ClassIndex(j.value("silence_class", std::string("silence")));
    s.max_simultaneous = j.value("max_simultaneous", 2);
    s.sample_rate = j.at("sample_rate").get<double>();
    s.speed_of_sound = j.value("speed_of_sound", 343.0);
    s.Validate();
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed scene description: ") + e.what());
  }
}

nlohmann::json SceneToJson(const SceneConfig& s) {
  nlohmann::json j;
  j["room"] = {s.room_width, s.room_height};
  j["arrays"] = nlohmann::json::array();
  for (const auto& a : s.arrays) {
    nlohmann::json mics = nlohmann::json::array();
    for (const auto& m : a.mics) mics.push_back({m.x, m.y});
    j["arrays"].push_back({{"mics", mics}});
  }
  j["grid"] = {{"nx", s.grid.nx()},
               {"ny", s.grid.ny()},
               {"cell", {s.grid.cell_width(), s.grid.cell_height()}},
               {"origin", {s.grid.origin().x, s.grid.origin().y}}};
  j["classes"] = s.classes;
  j["speech_class"] = s.classes[s.speech_class];
  j["silence_class"] = s.classes[s.silence_class];
  j["max_simultaneous"] = s.max_simultaneous;
  j["sample_rate"] = s.sample_rate;
  j["speed_of_sound"] = s.speed_of_sound;
  return j;
}

SceneConfig LoadScene(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open scene file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DataError("cannot parse scene file '" + path + "': " + e.what());
  }
  return SceneFromJson(j);
}

PriorTable PriorTable::Flat(int num_classes, int num_cells) {
  PriorTable t;
  t.class_priors.assign(num_classes, 1.0 / num_classes);
  t.position_priors.assign(num_cells, 1.0 / num_cells);
  return t;
}

PriorTable EstimatePositionPriors(std::span<const PositionObservation> events,
                                  const CellGrid& grid, int num_classes,
                                  bool smoothing) {
  if (events.empty()) throw DomainError("cannot estimate priors from no events");
  std::vector<double> counts(grid.size(), smoothing ? 1.0 : 0.0);
  for (const auto& e : events) {
    if (e.cell < 0 || e.cell >= grid.size()) {
      throw DomainError("event cell out of range");
    }
    counts[e.cell] += 1.0;
  }
  const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
  PriorTable t = PriorTable::Flat(num_classes, grid.size());
  for (int j = 0; j < grid.size(); ++j) t.position_priors[j] = counts[j] / total;
  return t;
}

}  // namespace aedloc
