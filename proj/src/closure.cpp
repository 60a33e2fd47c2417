#include <algorithm>
#include <cmath>
#include <optional>

#include "sulfation/geometry.hpp"

namespace sulfation {

std::array<double, 3> quadratic_weights(double t) {
  return {t * (1.0 + t) / 2.0, (1.0 - t) * (1.0 + t), t * (t - 1.0) / 2.0};
}

std::array<double, 3> quadratic_slopes(double t) { return {t + 0.5, -2.0 * t, t - 0.5}; }

namespace {

using Row9 = std::array<double, 9>;

// One axis of a stencil: nodes base, base - m, base - 2m.
struct Axis {
  int base;
  int m;
};

// Solves the 6x6 system M z = b in place by Gaussian elimination with partial
// pivoting; returns false when M is numerically singular.
bool solve6(std::array<double, 36> M, std::array<double, 6>& b) {
  double scale = 0.0;
  for (double v : M) scale = std::max(scale, std::abs(v));
  for (int k = 0; k < 6; ++k) {
    int p = k;
    for (int i = k + 1; i < 6; ++i) {
      if (std::abs(M[std::size_t(6 * i + k)]) > std::abs(M[std::size_t(6 * p + k)])) p = i;
    }
    if (std::abs(M[std::size_t(6 * p + k)]) <= 1e-10 * scale) return false;
    if (p != k) {
      for (int j = 0; j < 6; ++j) std::swap(M[std::size_t(6 * k + j)], M[std::size_t(6 * p + j)]);
      std::swap(b[std::size_t(k)], b[std::size_t(p)]);
    }
    for (int i = k + 1; i < 6; ++i) {
      const double f = M[std::size_t(6 * i + k)] / M[std::size_t(6 * k + k)];
      for (int j = k; j < 6; ++j) M[std::size_t(6 * i + j)] -= f * M[std::size_t(6 * k + j)];
      b[std::size_t(i)] -= f * b[std::size_t(k)];
    }
  }
  for (int i = 5; i >= 0; --i) {
    double v = b[std::size_t(i)];
    for (int j = i + 1; j < 6; ++j) v -= M[std::size_t(6 * i + j)] * b[std::size_t(j)];
    b[std::size_t(i)] = v / M[std::size_t(6 * i + i)];
  }
  return true;
}

struct Stencil {
  const LevelSetField* field;
  Axis ax, ay;
  ClosureOrder order;
  std::array<bool, 9> mask{};
  std::array<double, 36> gram{};  // quadratic fit only

  double h() const { return field->grid().spacing(); }
  int extent() const { return order == ClosureOrder::Biquadratic || order == ClosureOrder::QuadraticFit ? 3 : 2; }
  NodeIndex node(int k) const { return {ax.base - ax.m * (k % 3), ay.base - ay.m * (k / 3)}; }
  double theta_x(Vec2 p) const { return ax.m * (p.x - field->grid().x(ax.base - ax.m)) / h(); }
  double theta_y(Vec2 p) const { return ay.m * (p.y - field->grid().y(ay.base - ay.m)) / h(); }

  // Quadratic basis in coordinates scaled by h about the base node.
  std::array<double, 6> basis(double u, double v) const { return {1.0, u, v, u * v, u * u, v * v}; }
  Vec2 local(Vec2 p) const {
    return {(p.x - field->grid().x(ax.base)) / h(), (p.y - field->grid().y(ay.base)) / h()};
  }

  // Prepares mask and, for the fit, the Gram matrix; false if unusable.
  bool prepare(const DomainClassification& cls) {
    int count = 0;
    for (int k = 0; k < 9; ++k) {
      const NodeIndex n = node(k);
      const bool in_block = k % 3 < extent() && k / 3 < extent();
      mask[std::size_t(k)] = in_block && cls.active(n.i, n.j);
      count += mask[std::size_t(k)];
      if (in_block && !mask[std::size_t(k)] && order != ClosureOrder::QuadraticFit) return false;
    }
    if (order != ClosureOrder::QuadraticFit) return true;
    if (count < 7) return false;
    gram.fill(0.0);
    for (int k = 0; k < 9; ++k) {
      if (!mask[std::size_t(k)]) continue;
      const auto e = basis(-ax.m * (k % 3), -ay.m * (k / 3));
      for (int a = 0; a < 6; ++a) {
        for (int b = 0; b < 6; ++b) gram[std::size_t(6 * a + b)] += e[std::size_t(a)] * e[std::size_t(b)];
      }
    }
    std::array<double, 6> probe{1, 0, 0, 0, 0, 0};
    return solve6(gram, probe);
  }

  // Interpolation weights at p and weights of the x and y derivatives there.
  void weights(Vec2 p, Row9& w, Row9& wx, Row9& wy) const {
    w.fill(0.0);
    wx.fill(0.0);
    wy.fill(0.0);
    if (order == ClosureOrder::QuadraticFit) {
      const Vec2 q = local(p);
      std::array<double, 6> z = basis(q.x, q.y);
      std::array<double, 6> zx{0.0, 1.0, 0.0, q.y, 2.0 * q.x, 0.0};
      std::array<double, 6> zy{0.0, 0.0, 1.0, q.x, 0.0, 2.0 * q.y};
      solve6(gram, z);
      solve6(gram, zx);
      solve6(gram, zy);
      for (int k = 0; k < 9; ++k) {
        if (!mask[std::size_t(k)]) continue;
        const auto e = basis(-ax.m * (k % 3), -ay.m * (k / 3));
        double a = 0.0, b = 0.0, c = 0.0;
        for (int m = 0; m < 6; ++m) {
          a += e[std::size_t(m)] * z[std::size_t(m)];
          b += e[std::size_t(m)] * zx[std::size_t(m)];
          c += e[std::size_t(m)] * zy[std::size_t(m)];
        }
        w[std::size_t(k)] = a;
        wx[std::size_t(k)] = b / h();
        wy[std::size_t(k)] = c / h();
      }
      return;
    }
    std::array<double, 3> lx, ly, dx, dy;
    axis_weights(theta_x(p), lx, dx);
    axis_weights(theta_y(p), ly, dy);
    for (int ky = 0; ky < extent(); ++ky) {
      for (int kx = 0; kx < extent(); ++kx) {
        const std::size_t k = std::size_t(3 * ky + kx);
        w[k] = ly[std::size_t(ky)] * lx[std::size_t(kx)];
        wx[k] = ax.m / h() * dx[std::size_t(kx)] * ly[std::size_t(ky)];
        wy[k] = ay.m / h() * lx[std::size_t(kx)] * dy[std::size_t(ky)];
      }
    }
  }

  void axis_weights(double t, std::array<double, 3>& w, std::array<double, 3>& dw) const {
    if (order == ClosureOrder::Biquadratic) {
      w = quadratic_weights(t);
      dw = quadratic_slopes(t);
    } else {
      w = {t, 1.0 - t, 0.0};
      dw = {1.0, -1.0, 0.0};
    }
  }

  double value(Vec2 p) const {
    Row9 w, wx, wy;
    weights(p, w, wx, wy);
    double v = 0.0;
    for (int k = 0; k < 9; ++k) {
      if (mask[std::size_t(k)]) v += w[std::size_t(k)] * (*field)(node(k).i, node(k).j);
    }
    return v;
  }
};

void fill_stencil(GhostClosure& c) {
  for (int ky = 0; ky < 3; ++ky) {
    for (int kx = 0; kx < 3; ++kx) {
      const NodeIndex n{c.base.i - c.mx * kx, c.base.j - c.my * ky};
      c.stencil[std::size_t(3 * ky + kx)] = n;
      if (n == c.ghost) c.ghost_slot = 3 * ky + kx;
    }
  }
}

// Identity Dirichlet row and first-order one-sided Neumann row towards inside neighbours.
void nearest_closure(GhostClosure& c, const DomainClassification& cls, const LevelSetField& phi) {
  const double h = phi.grid().spacing();
  const NodeIndex g = c.ghost;
  c.order = ClosureOrder::Nearest;
  c.base = g;
  c.ghost_slot = 0;
  c.boundary_point = phi.grid().coordinate(g);
  c.alpha = 1.0;
  c.theta_x = c.theta_y = 1.0;
  c.phi_at_boundary = phi(g.i, g.j);
  c.interpolated_normal = c.normal;

  const bool ux = cls.at_or_inactive(g.i - c.mx, g.j) == NodeClass::Inside;
  const bool uy = cls.at_or_inactive(g.i, g.j - c.my) == NodeClass::Inside;
  if (!ux && !uy) {
    // Point the stencil at whichever axis neighbour is inside.
    if (cls.at_or_inactive(g.i + c.mx, g.j) == NodeClass::Inside) {
      c.mx = -c.mx;
    } else {
      c.my = -c.my;
    }
  }
  fill_stencil(c);
  c.used.fill(false);
  c.dirichlet.fill(0.0);
  c.neumann.fill(0.0);
  c.used[0] = true;
  c.dirichlet[0] = 1.0;
  double wx = cls.at_or_inactive(g.i - c.mx, g.j) == NodeClass::Inside ? std::abs(c.normal.x) : 0.0;
  double wy = cls.at_or_inactive(g.i, g.j - c.my) == NodeClass::Inside ? std::abs(c.normal.y) : 0.0;
  if (wx + wy == 0.0) {
    wx = cls.at_or_inactive(g.i - c.mx, g.j) == NodeClass::Inside ? 1.0 : 0.0;
    wy = wx == 0.0 ? 1.0 : 0.0;
  }
  const double sum = wx + wy;
  wx /= sum;
  wy /= sum;
  c.neumann[0] = 1.0 / h;
  if (wx > 0.0) {
    c.used[1] = true;
    c.neumann[1] = -wx / h;
  }
  if (wy > 0.0) {
    c.used[3] = true;
    c.neumann[3] = -wy / h;
  }
}

// Candidate stencil axes in order of preference: upwind, centred on the ghost, downwind.
std::array<Axis, 3> axis_options(int ghost, int m) { return {Axis{ghost, m}, Axis{ghost + m, m}, Axis{ghost, -m}}; }

}  // namespace

GhostClosure project_to_boundary(const LevelSetField& phi, const DomainClassification& cls, NodeIndex ghost,
                                 ClosurePolicy policy) {
  if (cls.at_or_inactive(ghost.i, ghost.j) != NodeClass::Ghost) {
    throw SolverError(ErrorCode::InvalidArgument, "projection requested for a non-ghost node");
  }
  const bool strict = policy == ClosurePolicy::Strict;
  const CartesianGrid& grid = phi.grid();
  const double h = grid.spacing();

  GhostClosure c;
  c.ghost = ghost;
  c.base = ghost;
  c.normal = strict ? node_normal(phi, ghost.i, ghost.j) : node_normal_or_zero(phi, ghost.i, ghost.j);
  c.mx = c.normal.x >= 0.0 ? 1 : -1;
  c.my = c.normal.y >= 0.0 ? 1 : -1;
  const int mx0 = c.mx, my0 = c.my;

  const Vec2 G = grid.coordinate(ghost);
  c.inner_point = {G.x - 2.0 * h * c.normal.x, G.y - 2.0 * h * c.normal.y};

  // Near-axis normals can push the tangential arm of the upwind block out of
  // the active set. Candidate blocks are ranked by how far they depart from
  // the upwind one; departures along the axis of the smaller normal component
  // rank first.
  const auto xs = axis_options(ghost.i, mx0);
  const auto ys = axis_options(ghost.j, my0);
  const bool y_tangential = std::abs(c.normal.y) <= std::abs(c.normal.x);
  std::array<std::pair<int, int>, 9> ranked;
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) ranked[std::size_t(3 * a + b)] = {a, b};
  }
  auto cost = [&](std::pair<int, int> p) { return y_tangential ? 3 * p.first + p.second : p.first + 3 * p.second; };
  std::stable_sort(ranked.begin(), ranked.end(), [&](auto l, auto r) { return cost(l) < cost(r); });

  std::optional<Stencil> chosen;
  std::vector<ClosureOrder> orders{ClosureOrder::Biquadratic, ClosureOrder::QuadraticFit};
  if (!strict) orders.push_back(ClosureOrder::Bilinear);
  for (ClosureOrder want : orders) {
    for (auto [a, b] : ranked) {
      Stencil trial{&phi, xs[std::size_t(a)], ys[std::size_t(b)], want};
      if (trial.prepare(cls)) {
        chosen = trial;
        break;
      }
    }
    if (chosen) break;
  }
  if (!chosen && strict) throw SolverError(ErrorCode::StencilEscape, "no usable stencil around the ghost is active");
  if (!chosen || norm(c.normal) == 0.0) {
    nearest_closure(c, cls, phi);
    return c;
  }
  const Stencil& st = *chosen;
  c.base = {st.ax.base, st.ay.base};
  c.mx = st.ax.m;
  c.my = st.ay.m;
  fill_stencil(c);

  auto along = [&](double a) {
    return Vec2{c.inner_point.x + a * (G.x - c.inner_point.x), c.inner_point.y + a * (G.y - c.inner_point.y)};
  };

  double alpha = 1.0;
  double f_at = phi(ghost.i, ghost.j);
  if (f_at != 0.0) {
    double lo = 0.0, hi = 1.0;
    const double f_lo = st.value(along(lo));
    if (!(f_lo < 0.0)) {
      if (strict) throw SolverError(ErrorCode::NoBracket, "interpolant does not change sign along the normal");
      c.mx = mx0;
      c.my = my0;
      nearest_closure(c, cls, phi);
      return c;
    }
    double prev = lo;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double f = st.value(along(mid));
      alpha = mid;
      f_at = f;
      if (std::min(std::abs(f), std::abs(mid - prev)) < kBisectionTolerance) break;
      prev = mid;
      (f < 0.0 ? lo : hi) = mid;
    }
  }
  c.alpha = alpha;
  c.boundary_point = along(alpha);
  c.phi_at_boundary = f_at;
  c.order = st.order;
  c.theta_x = st.theta_x(c.boundary_point);
  c.theta_y = st.theta_y(c.boundary_point);

  Row9 w, wx, wy;
  st.weights(c.boundary_point, w, wx, wy);
  Vec2 gn;
  for (int k = 0; k < 9; ++k) {
    if (!st.mask[std::size_t(k)]) continue;
    const double v = phi(st.node(k).i, st.node(k).j);
    gn.x += wx[std::size_t(k)] * v;
    gn.y += wy[std::size_t(k)] * v;
  }
  const double len = norm(gn);
  c.interpolated_normal = len > 0.0 ? Vec2{gn.x / len, gn.y / len} : c.normal;
  const Vec2 nt = c.interpolated_normal;

  for (int k = 0; k < 9; ++k) {
    const std::size_t u = std::size_t(k);
    c.used[u] = st.mask[u];
    c.dirichlet[u] = st.mask[u] ? w[u] : 0.0;
    c.neumann[u] = st.mask[u] ? nt.x * wx[u] + nt.y * wy[u] : 0.0;
  }
  return c;
}

std::vector<GhostClosure> build_closures(const LevelSetField& phi, const DomainClassification& cls,
                                         ClosurePolicy policy) {
  std::vector<GhostClosure> out;
  out.reserve(std::size_t(cls.ghost_count()));
  for (int r = cls.inside_count(); r < cls.row_count(); ++r) {
    out.push_back(project_to_boundary(phi, cls, cls.node_of(r), policy));
  }
  return out;
}

}  // namespace sulfation
