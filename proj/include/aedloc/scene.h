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

#ifndef AEDLOC_SCENE_H_
#define AEDLOC_SCENE_H_

#include <span>
#include <string>
#include <vector>

#include "json.hpp"

namespace aedloc {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

double Distance(Point2 a, Point2 b);

// A small linear (or arbitrary planar) microphone array.
struct ArrayGeometry {
  int array_id = 0;
  std::vector<Point2> mics;

  int num_mics() const { return static_cast<int>(mics.size()); }
  // Throws DomainError unless there are >= 2 pairwise distinct microphones.
  void Validate() const;
};

// Rectangular partition of the room floor into nx * ny cells, indexed
// row-major from the origin: j = iy * nx + ix.
class CellGrid {
 public:
  CellGrid() = default;
  CellGrid(int nx, int ny, double cell_width, double cell_height,
           Point2 origin = {});

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  int size() const { return nx_ * ny_; }
  double cell_width() const { return cell_width_; }
  double cell_height() const { return cell_height_; }
  Point2 origin() const { return origin_; }
  double width() const { return nx_ * cell_width_; }
  double height() const { return ny_ * cell_height_; }

  Point2 Centroid(int cell) const;
  int Column(int cell) const { return cell % nx_; }
  int Row(int cell) const { return cell / nx_; }

  // Lower-left and upper-right corners of the closed cell rectangle.
  Point2 Lower(int cell) const;
  Point2 Upper(int cell) const;

  // Points on a shared edge go to the lower-index cell. Throws DomainError for
  // points outside the grid.
  int CellOf(Point2 p) const;

 private:
  int Axis(double offset, double size, int count, const char* name) const;

  int nx_ = 0;
  int ny_ = 0;
  double cell_width_ = 0.0;
  double cell_height_ = 0.0;
  Point2 origin_;
};

struct SceneConfig {
  double room_width = 0.0;
  double room_height = 0.0;
  std::vector<ArrayGeometry> arrays;
  CellGrid grid;
  std::vector<std::string> classes;
  int speech_class = -1;
  int silence_class = -1;
  int max_simultaneous = 2;
  double sample_rate = 16000.0;
  double speed_of_sound = 343.0;

  int num_arrays() const { return static_cast<int>(arrays.size()); }
  int num_cells() const { return grid.size(); }
  int num_classes() const { return static_cast<int>(classes.size()); }
  int num_channels() const;
  // Flat channel index of microphone `mic` of array `array`.
  int ChannelOf(int array, int mic) const;
  std::vector<Point2> AllMics() const;
  bool IsEventClass(int c) const { return c != silence_class && c != speech_class; }
  int ClassIndex(const std::string& label) const;

  // Throws DomainError when an invariant is violated.
  void Validate() const;
};

// Three arrays of three microphones on the walls of a 3.966 m x 5.244 m room,
// a 4 x 4 grid, four event classes plus speech and silence, 16 kHz.
SceneConfig ReferenceScene();

// Same room with the 6 x 6 grid of 0.661 m x 0.874 m cells.
SceneConfig ReferenceScene6x6();

SceneConfig SceneFromJson(const nlohmann::json& j);
nlohmann::json SceneToJson(const SceneConfig& scene);
SceneConfig LoadScene(const std::string& path);

struct PriorTable {
  std::vector<double> class_priors;
  std::vector<double> position_priors;

  static PriorTable Flat(int num_classes, int num_cells);
};

struct PositionObservation {
  int class_id = 0;
  int cell = 0;
};

// Relative frequency of each cell among the observations. With `smoothing`
// every cell count is incremented by one first so no cell gets zero prior.
// Class priors are flat.
PriorTable EstimatePositionPriors(std::span<const PositionObservation> events,
                                  const CellGrid& grid, int num_classes,
                                  bool smoothing = true);

}  // namespace aedloc

#endif  // AEDLOC_SCENE_H_
