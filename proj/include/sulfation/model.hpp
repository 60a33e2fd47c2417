#pragma once

#include <functional>

#include "sulfation/geometry.hpp"

namespace sulfation {

/// Coefficients of the sulfation system
///   (phi(c) s)_t = d div(phi(c) grad s) - (a/m_c) phi(c) s c
///   c_t          = -(a/m_s) phi(c) s c
/// with linear porosity phi(c) = alpha c + beta.
struct ModelParams {
  double a = 1e4;
  double d = 0.1;
  double m_s = 64.06;
  double m_c = 100.09;
  double alpha = 0.01;
  double beta = 0.1;

  double porosity(double c) const { return alpha * c + beta; }
  double porosity_slope(double) const { return alpha; }

  void validate() const {
    if (!(a >= 0.0 && d > 0.0 && m_s > 0.0 && m_c > 0.0 && beta > 0.0)) {
      throw SolverError(ErrorCode::InvalidArgument, "model needs a >= 0, d, m_s, m_c, beta > 0");
    }
  }
};

using SpaceTimeField = std::function<double(double x, double y, double t)>;

/// Boundary datum for s at a boundary point; `normal` is the interpolated
/// outward normal there (needed by manufactured Neumann data).
using BoundaryDatum = std::function<double(double x, double y, double t, Vec2 normal)>;

struct Problem {
  ModelParams params;
  BoundaryKind boundary = BoundaryKind::Dirichlet;
  BoundaryDatum s_boundary = [](double, double, double, Vec2) { return 1.0; };
  SpaceTimeField source_s;  // empty means zero
  SpaceTimeField source_c;
};

}  // namespace sulfation
