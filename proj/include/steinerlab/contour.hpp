#pragma once

#include <array>
#include <vector>

#include "steinerlab/grid.hpp"

namespace steinerlab {

struct Polyline {
  std::vector<std::array<double, 2>> points;
  bool closed = false;
};

/// Level set {f = c} as marching-squares polylines with vertices on grid-cell
/// edges; saddle cells are disambiguated by the cell-center mean.
struct ContourSet {
  double level = 0.0;
  std::vector<Polyline> polylines;
  int connected_component_count = 0;

  bool all_closed() const;
};

ContourSet extract_contours(const GridField& f, double level);

}  // namespace steinerlab
