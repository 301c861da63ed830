#pragma once

#include <vector>

#include "steinerlab/grid.hpp"
#include "steinerlab/interval.hpp"

namespace steinerlab {

/// Open intervals {x : u(x, y_j) > c} per grid row, with crossing points
/// located by linear interpolation between adjacent samples.  Rows whose
/// section reaches the grid edge are clipped at +-L.
std::vector<IntervalSet> superlevel_rows(const GridField& u, double c);

/// Total measure of {u > c} from the row sections (row sum times h).
double superlevel_measure(const GridField& u, double c);

/// Superlevel sections for a stack of levels over one field.
struct LevelStack {
  std::vector<double> levels;
  // per_row[k][j] is the section of {u > levels[k]} on row j.
  std::vector<std::vector<IntervalSet>> per_row;
};

LevelStack build_level_stack(const GridField& u, const std::vector<double>& levels);

struct SymmetrizationOptions {
  int levels = 256;
  /// Run the level/reconstruction path even at t = 0.  Verifiers use this to
  /// compare symmetrized fields against an identically discretized baseline.
  bool force_level_path = false;
};

struct SymmetrizationResult {
  GridField field;
  double t = 0.0;
  double dir_x = 1.0;
  double dir_y = 0.0;
  int levels_used = 0;
  double max_level_gap = 0.0;
};

/// Continuous Steiner symmetrization u^t along `direction`, built row-wise
/// from the interval flow through a stack of uniformly spaced superlevels.
/// Levels run from the boundary-ring mean (the finite-grid floor) up to
/// max u; values below the floor do not participate.  Directions other than
/// +x are handled by rotate / symmetrize / rotate back.
///
/// Throws if the lowest superlevel touches the grid boundary (the section is
/// not compactly contained, so the row flow is meaningless).
SymmetrizationResult symmetrize_function(const GridField& u, double t,
                                         double dir_x = 1.0, double dir_y = 0.0,
                                         const SymmetrizationOptions& opts = {});

/// Pointwise split u = G_m(u) + H_m(u) with G_m(s) = max(s - m, 0) and
/// H_m(s) = min(s, m); the sum identity is exact in floating point.
struct TruncationPair {
  double m = 0.0;
  GridField g_part;
  GridField h_part;
};

TruncationPair truncate_field(const GridField& u, double m);

}  // namespace steinerlab
