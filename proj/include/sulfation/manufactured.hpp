#pragma once

#include <string>
#include <string_view>

#include "sulfation/model.hpp"

namespace sulfation {

/// Circle of radius 1.486 centred at (sqrt(2)/30, sqrt(3)/40).
double circle_levelset(double x, double y);
/// Square of half-side 0.9567 united with discs of radius 0.3 on its corners.
double square_discs_levelset(double x, double y);

/// Smooth exact pair used for convergence studies:
///   s = 2 + sin x cos y sin(t + sqrt 2),  c = 3 + sin(x/2) cos(3y) sin(2t + sqrt 3).
struct ExactPair {
  static double s(double x, double y, double t);
  static double c(double x, double y, double t);
  static Vec2 grad_s(double x, double y, double t);
  static Vec2 grad_c(double x, double y, double t);
  static double s_t(double x, double y, double t);
  static double c_t(double x, double y, double t);
  static double laplacian_s(double x, double y, double t);

  /// Sources that make the pair an exact solution of the forced system.
  static double source_s(const ModelParams& p, double x, double y, double t);
  static double source_c(const ModelParams& p, double x, double y, double t);
};

struct ManufacturedCase {
  std::string name;
  double (*levelset)(double, double);
  BoundaryKind boundary;
  double half_width = 2.0;
  double final_time = 1.0;

  /// Model with sources and boundary data taken from the exact pair.
  Problem problem(const ModelParams& params = {}) const;
};

/// "1", "2", "1n" or "2n".
ManufacturedCase manufactured_case(std::string_view id);

/// Unforced problem with s0 = 0, c0 = 10 and s = 1 on the boundary on the
/// circle ("3") or the square with discs ("4").
struct ReactionCase {
  std::string name;
  double (*levelset)(double, double);
  double half_width = 2.0;
  double final_time = 1.0;
  double s0 = 0.0;
  double c0 = 10.0;
  double s_boundary = 1.0;

  Problem problem(const ModelParams& params = {}) const;
};

ReactionCase reaction_case(std::string_view id);

}  // namespace sulfation
