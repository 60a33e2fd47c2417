#pragma once

#include <vector>

#include "sulfation/discretization.hpp"

namespace sulfation {

struct Polyline {
  std::vector<Vec2> points;
  bool closed = false;
};

/// Full-lattice copy of a row field; inactive nodes hold NaN.
std::vector<double> to_lattice(const Domain& domain, const std::vector<double>& rows);

/// Marching-squares level curves of lattice values, joined into polylines.
/// Cells with a non-finite corner are skipped. Saddle cells are resolved by
/// the cell-centre average.
std::vector<Polyline> contour_lines(const CartesianGrid& grid, const std::vector<double>& values, double level);

}  // namespace sulfation
