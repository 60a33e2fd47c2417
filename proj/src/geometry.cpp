#include "sulfation/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace sulfation {

DomainClassification::DomainClassification(CartesianGrid grid, std::vector<NodeClass> classes)
    : grid_(grid), classes_(std::move(classes)), row_of_node_(grid.node_count(), -1) {
  if (classes_.size() != grid_.node_count()) {
    throw SolverError(ErrorCode::DimensionMismatch, "classification size does not match grid");
  }
  for (std::size_t k = 0; k < classes_.size(); ++k) {
    if (classes_[k] == NodeClass::Inside) {
      row_of_node_[k] = int(node_of_row_.size());
      node_of_row_.push_back(k);
    }
  }
  n_inside_ = int(node_of_row_.size());
  for (std::size_t k = 0; k < classes_.size(); ++k) {
    if (classes_[k] == NodeClass::Ghost) {
      row_of_node_[k] = int(node_of_row_.size());
      node_of_row_.push_back(k);
    }
  }
  n_ghost_ = int(node_of_row_.size()) - n_inside_;

  neighbours_.resize(std::size_t(n_inside_));
  for (int r = 0; r < n_inside_; ++r) {
    NodeIndex n = node_of(r);
    std::array<int, 4> nb{row_of(n.i + 1, n.j), row_of(n.i - 1, n.j), row_of(n.i, n.j + 1), row_of(n.i, n.j - 1)};
    for (int q : nb) {
      if (q < 0) {
        throw SolverError(ErrorCode::StencilEscape, "inside node touches an inactive node or the box edge");
      }
    }
    neighbours_[std::size_t(r)] = nb;
  }
}

DomainClassification classify(const LevelSetField& phi) {
  const CartesianGrid& g = phi.grid();
  const int N = g.intervals();
  std::vector<NodeClass> cls(g.node_count(), NodeClass::Inactive);
  bool any_inside = false;
  for (int j = 0; j <= N; ++j) {
    for (int i = 0; i <= N; ++i) {
      if (phi(i, j) < 0.0) {
        cls[g.linear(i, j)] = NodeClass::Inside;
        any_inside = true;
      }
    }
  }
  if (!any_inside) throw SolverError(ErrorCode::AllOutside, "no node has phi < 0");

  bool any_ghost = false;
  auto inside = [&](int i, int j) { return g.contains(i, j) && cls[g.linear(i, j)] == NodeClass::Inside; };
  for (int j = 0; j <= N; ++j) {
    for (int i = 0; i <= N; ++i) {
      if (cls[g.linear(i, j)] == NodeClass::Inside) continue;
      if (inside(i + 1, j) || inside(i - 1, j) || inside(i, j + 1) || inside(i, j - 1)) {
        cls[g.linear(i, j)] = NodeClass::Ghost;
        any_ghost = true;
      }
    }
  }
  if (!any_ghost) throw SolverError(ErrorCode::AllInside, "no ghost nodes: the domain has no boundary on the grid");
  return DomainClassification(g, std::move(cls));
}

Vec2 node_normal(const LevelSetField& phi, int i, int j) {
  const CartesianGrid& g = phi.grid();
  if (i < 1 || j < 1 || i > g.intervals() - 1 || j > g.intervals() - 1) {
    throw SolverError(ErrorCode::StencilEscape, "central normal needs an interior node");
  }
  const double h = g.spacing();
  const double nx = (phi(i + 1, j) - phi(i - 1, j)) / (2.0 * h);
  const double ny = (phi(i, j + 1) - phi(i, j - 1)) / (2.0 * h);
  const double len = std::hypot(nx, ny);
  if (len == 0.0) throw SolverError(ErrorCode::DegenerateGradient, "zero level-set gradient");
  return {nx / len, ny / len};
}

Vec2 node_normal_or_zero(const LevelSetField& phi, int i, int j) {
  const CartesianGrid& g = phi.grid();
  const int N = g.intervals();
  const int il = std::max(i - 1, 0), ir = std::min(i + 1, N);
  const int jl = std::max(j - 1, 0), jr = std::min(j + 1, N);
  const double nx = (phi(ir, j) - phi(il, j)) / double(ir - il);
  const double ny = (phi(i, jr) - phi(i, jl)) / double(jr - jl);
  const double len = std::hypot(nx, ny);
  if (len == 0.0 || !std::isfinite(len)) return {0.0, 0.0};
  return {nx / len, ny / len};
}

double relaxation_bracket(const GhostClosure& g, BoundaryKind kind, double tau, double h) {
  const bool dirichlet = kind == BoundaryKind::Dirichlet;
  if (g.ghost_slot != 0 || g.order != ClosureOrder::Biquadratic) {
    return std::abs(1.0 - tau * (dirichlet ? g.dirichlet_diagonal() : g.neumann_diagonal()));
  }
  const double tx = g.theta_x, ty = g.theta_y;
  if (dirichlet) return std::abs(1.0 - tau * tx * (1.0 + tx) * ty * (1.0 + ty) / 4.0);
  // The same theta product on both normal components, as the bound is usually stated.
  const double prod = ty * (1.0 + ty) / 2.0 * (tx + 0.5);
  const Vec2 n = g.interpolated_normal;
  return std::abs(1.0 - tau * (std::abs(n.x) / h * prod + std::abs(n.y) / h * prod));
}

LevelSetField image_to_levelset(const GrayImage& image, const CartesianGrid& grid, int smoothing_steps) {
  if (image.width <= 0 || image.height <= 0) throw SolverError(ErrorCode::EmptyImage, "image has no pixels");
  bool dark = false, light = false;
  for (std::uint8_t p : image.pixels) (p < 128 ? dark : light) = true;
  if (!dark || !light) throw SolverError(ErrorCode::EmptyImage, "image is a single colour");

  const int M = grid.nodes_per_axis();
  std::vector<double> v(grid.node_count());
  // Pixel footprint of node i along an axis of `extent` pixels: [lo, hi).
  auto footprint = [M](int i, int extent) {
    const double scale = double(extent) / double(M);
    int lo = int(std::floor(i * scale));
    int hi = int(std::floor((i + 1) * scale));
    lo = std::clamp(lo, 0, extent - 1);
    hi = std::clamp(std::max(hi, lo + 1), lo + 1, extent);
    return std::pair{lo, hi};
  };
  for (int j = 0; j < M; ++j) {
    // Image rows run top to bottom, y runs bottom to top.
    auto [r0, r1] = footprint(M - 1 - j, image.height);
    for (int i = 0; i < M; ++i) {
      auto [c0, c1] = footprint(i, image.width);
      double sum = 0.0;
      for (int r = r0; r < r1; ++r) {
        for (int c = c0; c < c1; ++c) sum += image.at(c, r) < 128 ? -1.0 : 1.0;
      }
      v[grid.linear(i, j)] = sum / double((r1 - r0) * (c1 - c0));
    }
  }

  // Explicit heat steps, dt = h^2/8 => phi += (sum of neighbours - 4 phi) / 8.
  // Box edges are mirrored (zero flux).
  const int N = grid.intervals();
  std::vector<double> next(v.size());
  for (int step = 0; step < smoothing_steps; ++step) {
    for (int j = 0; j <= N; ++j) {
      for (int i = 0; i <= N; ++i) {
        auto at = [&](int a, int b) {
          a = a < 0 ? 1 : (a > N ? N - 1 : a);
          b = b < 0 ? 1 : (b > N ? N - 1 : b);
          return v[grid.linear(a, b)];
        };
        const double c = v[grid.linear(i, j)];
        next[grid.linear(i, j)] = c + (at(i + 1, j) + at(i - 1, j) + at(i, j + 1) + at(i, j - 1) - 4.0 * c) / 8.0;
      }
    }
    v.swap(next);
  }
  return LevelSetField(grid, std::move(v));
}

LevelSetField reinitialize(const LevelSetField& phi, int steps) {
  const CartesianGrid& g = phi.grid();
  const int N = g.intervals();
  const double h = g.spacing();
  const double dtau = 0.5 * h;
  std::vector<double> cur = phi.values();
  std::vector<double> next(cur.size());
  const std::vector<double>& phi0 = phi.values();

  for (int step = 0; step < steps; ++step) {
    for (int j = 0; j <= N; ++j) {
      for (int i = 0; i <= N; ++i) {
        const std::size_t k = g.linear(i, j);
        const double s = phi0[k] > 0.0 ? 1.0 : (phi0[k] < 0.0 ? -1.0 : 0.0);
        if (s == 0.0) {
          next[k] = cur[k];
          continue;
        }
        const double c = cur[k];
        // Missing neighbours at the box edge contribute no slope.
        const double dxm = i > 0 ? (c - cur[g.linear(i - 1, j)]) / h : 0.0;
        const double dxp = i < N ? (cur[g.linear(i + 1, j)] - c) / h : 0.0;
        const double dym = j > 0 ? (c - cur[g.linear(i, j - 1)]) / h : 0.0;
        const double dyp = j < N ? (cur[g.linear(i, j + 1)] - c) / h : 0.0;
        double gx2, gy2;
        if (s > 0.0) {
          gx2 = std::max(std::pow(std::max(dxm, 0.0), 2), std::pow(std::min(dxp, 0.0), 2));
          gy2 = std::max(std::pow(std::max(dym, 0.0), 2), std::pow(std::min(dyp, 0.0), 2));
        } else {
          gx2 = std::max(std::pow(std::min(dxm, 0.0), 2), std::pow(std::max(dxp, 0.0), 2));
          gy2 = std::max(std::pow(std::min(dym, 0.0), 2), std::pow(std::max(dyp, 0.0), 2));
        }
        next[k] = c - dtau * s * (std::sqrt(gx2 + gy2) - 1.0);
      }
    }
    cur.swap(next);
  }
  return LevelSetField(g, std::move(cur));
}

}  // namespace sulfation
