#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "sulfation/error.hpp"

namespace sulfation {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline double norm(Vec2 v) { return std::hypot(v.x, v.y); }

struct NodeIndex {
  int i = 0;
  int j = 0;
  friend bool operator==(NodeIndex, NodeIndex) = default;
};

/// Uniform node lattice on the square [-L, L]^2 with N intervals per axis.
/// Node (i, j) sits at (-L + i h, -L + j h); linear storage is j-major.
class CartesianGrid {
 public:
  CartesianGrid(double half_width, int intervals) : L_(half_width), N_(intervals) {
    if (!(half_width > 0.0) || intervals < 1) {
      throw SolverError(ErrorCode::InvalidArgument, "grid needs L > 0 and N >= 1");
    }
    h_ = 2.0 * L_ / N_;
  }

  double half_width() const { return L_; }
  int intervals() const { return N_; }
  double spacing() const { return h_; }
  int nodes_per_axis() const { return N_ + 1; }
  std::size_t node_count() const { return std::size_t(N_ + 1) * std::size_t(N_ + 1); }

  double x(int i) const { return -L_ + i * h_; }
  double y(int j) const { return -L_ + j * h_; }
  Vec2 coordinate(NodeIndex n) const { return {x(n.i), y(n.j)}; }

  /// Nearest node to a physical point (inverse of `coordinate` on lattice points).
  NodeIndex nearest(Vec2 p) const {
    return {int(std::lround((p.x + L_) / h_)), int(std::lround((p.y + L_) / h_))};
  }

  bool contains(int i, int j) const { return i >= 0 && j >= 0 && i <= N_ && j <= N_; }
  std::size_t linear(int i, int j) const { return std::size_t(j) * std::size_t(N_ + 1) + std::size_t(i); }
  NodeIndex unlinear(std::size_t k) const {
    return {int(k % std::size_t(N_ + 1)), int(k / std::size_t(N_ + 1))};
  }

  /// Grid with twice the spacing over the same box; requires even N.
  CartesianGrid coarsened() const { return CartesianGrid(L_, N_ / 2); }

 private:
  double L_;
  int N_;
  double h_;
};

/// Nodal values of the level-set function; the domain is {phi < 0}.
class LevelSetField {
 public:
  LevelSetField(CartesianGrid grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.node_count()) {
      throw SolverError(ErrorCode::DimensionMismatch, "level-set size does not match grid");
    }
  }

  static LevelSetField sample(const CartesianGrid& grid, const std::function<double(double, double)>& f) {
    std::vector<double> v(grid.node_count());
    for (int j = 0; j <= grid.intervals(); ++j) {
      for (int i = 0; i <= grid.intervals(); ++i) v[grid.linear(i, j)] = f(grid.x(i), grid.y(j));
    }
    return LevelSetField(grid, std::move(v));
  }

  const CartesianGrid& grid() const { return grid_; }
  double operator()(int i, int j) const { return values_[grid_.linear(i, j)]; }
  const std::vector<double>& values() const { return values_; }

  /// Values at the even-indexed nodes, i.e. the same function on the 2h lattice.
  LevelSetField injected() const {
    CartesianGrid coarse = grid_.coarsened();
    std::vector<double> v(coarse.node_count());
    for (int j = 0; j <= coarse.intervals(); ++j) {
      for (int i = 0; i <= coarse.intervals(); ++i) v[coarse.linear(i, j)] = (*this)(2 * i, 2 * j);
    }
    return LevelSetField(coarse, std::move(v));
  }

 private:
  CartesianGrid grid_;
  std::vector<double> values_;
};

}  // namespace sulfation
