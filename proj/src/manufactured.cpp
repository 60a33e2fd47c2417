#include "sulfation/manufactured.hpp"

#include <algorithm>
#include <cmath>

namespace sulfation {

namespace {
const double kSqrt2 = std::sqrt(2.0);
const double kSqrt3 = std::sqrt(3.0);
}  // namespace

double circle_levelset(double x, double y) {
  const double x0 = kSqrt2 / 30.0, y0 = kSqrt3 / 40.0;
  return std::hypot(x - x0, y - y0) - 1.486;
}

double square_discs_levelset(double x, double y) {
  const double L = 0.9567, D = 0.3;
  const double square = std::max(std::abs(x), std::abs(y)) - L;
  const double discs = std::hypot(std::abs(x) - L, std::abs(y) - L) - D;
  return std::min(square, discs);
}

double ExactPair::s(double x, double y, double t) { return 2.0 + std::sin(x) * std::cos(y) * std::sin(t + kSqrt2); }

double ExactPair::c(double x, double y, double t) {
  return 3.0 + std::sin(0.5 * x) * std::cos(3.0 * y) * std::sin(2.0 * t + kSqrt3);
}

Vec2 ExactPair::grad_s(double x, double y, double t) {
  const double A = std::sin(t + kSqrt2);
  return {std::cos(x) * std::cos(y) * A, -std::sin(x) * std::sin(y) * A};
}

Vec2 ExactPair::grad_c(double x, double y, double t) {
  const double B = std::sin(2.0 * t + kSqrt3);
  return {0.5 * std::cos(0.5 * x) * std::cos(3.0 * y) * B, -3.0 * std::sin(0.5 * x) * std::sin(3.0 * y) * B};
}

double ExactPair::s_t(double x, double y, double t) { return std::sin(x) * std::cos(y) * std::cos(t + kSqrt2); }

double ExactPair::c_t(double x, double y, double t) {
  return 2.0 * std::sin(0.5 * x) * std::cos(3.0 * y) * std::cos(2.0 * t + kSqrt3);
}

double ExactPair::laplacian_s(double x, double y, double t) {
  return -2.0 * std::sin(x) * std::cos(y) * std::sin(t + kSqrt2);
}

double ExactPair::source_s(const ModelParams& p, double x, double y, double t) {
  const double sv = s(x, y, t), cv = c(x, y, t);
  const double ph = p.porosity(cv), dph = p.porosity_slope(cv);
  const Vec2 gs = grad_s(x, y, t), gc = grad_c(x, y, t);
  const double time = dph * c_t(x, y, t) * sv + ph * s_t(x, y, t);
  const double div = ph * laplacian_s(x, y, t) + dph * (gc.x * gs.x + gc.y * gs.y);
  return time - p.d * div + p.a / p.m_c * ph * sv * cv;
}

double ExactPair::source_c(const ModelParams& p, double x, double y, double t) {
  const double sv = s(x, y, t), cv = c(x, y, t);
  return c_t(x, y, t) + p.a / p.m_s * p.porosity(cv) * sv * cv;
}

Problem ManufacturedCase::problem(const ModelParams& params) const {
  Problem pr;
  pr.params = params;
  pr.boundary = boundary;
  if (boundary == BoundaryKind::Dirichlet) {
    pr.s_boundary = [](double x, double y, double t, Vec2) { return ExactPair::s(x, y, t); };
  } else {
    pr.s_boundary = [](double x, double y, double t, Vec2 n) {
      const Vec2 g = ExactPair::grad_s(x, y, t);
      return g.x * n.x + g.y * n.y;
    };
  }
  pr.source_s = [params](double x, double y, double t) { return ExactPair::source_s(params, x, y, t); };
  pr.source_c = [params](double x, double y, double t) { return ExactPair::source_c(params, x, y, t); };
  return pr;
}

ManufacturedCase manufactured_case(std::string_view id) {
  if (id == "1") return {"test1", circle_levelset, BoundaryKind::Dirichlet};
  if (id == "2") return {"test2", square_discs_levelset, BoundaryKind::Dirichlet};
  if (id == "1n" || id == "1N") return {"test1n", circle_levelset, BoundaryKind::Neumann};
  if (id == "2n" || id == "2N") return {"test2n", square_discs_levelset, BoundaryKind::Neumann};
  throw SolverError(ErrorCode::InvalidArgument, "unknown accuracy test '" + std::string(id) + "'");
}

Problem ReactionCase::problem(const ModelParams& params) const {
  Problem pr;
  pr.params = params;
  pr.boundary = BoundaryKind::Dirichlet;
  const double sb = s_boundary;
  pr.s_boundary = [sb](double, double, double, Vec2) { return sb; };
  return pr;
}

ReactionCase reaction_case(std::string_view id) {
  if (id == "3") return {"test3", circle_levelset};
  if (id == "4") return {"test4", square_discs_levelset};
  throw SolverError(ErrorCode::InvalidArgument, "unknown efficiency test '" + std::string(id) + "'");
}

}  // namespace sulfation
