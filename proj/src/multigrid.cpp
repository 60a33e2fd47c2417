#include "sulfation/multigrid.hpp"

#include <algorithm>
#include <cmath>

#include "sulfation/simd.hpp"

namespace sulfation {

double ghost_relaxation(BoundaryKind kind, const CycleConfig& cfg, double h) {
  return kind == BoundaryKind::Dirichlet ? cfg.tau_dirichlet : cfg.tau_neumann_factor * h;
}

std::size_t hierarchy_depth(int intervals, int coarsest) {
  if (intervals < 2 * coarsest) {
    throw SolverError(ErrorCode::HierarchyTooShallow, "need at least " + std::to_string(2 * coarsest) + " intervals");
  }
  std::size_t depth = 1;
  int n = intervals;
  while (n % 2 == 0 && n / 2 >= coarsest) {
    n /= 2;
    ++depth;
  }
  return depth;
}

std::array<std::array<double, 3>, 3> restriction_stencil(const CartesianGrid& fine, const std::vector<char>& included,
                                                         int ci, int cj) {
  const int fi = 2 * ci, fj = 2 * cj;
  auto inc = [&](int dx, int dy) {
    return fine.contains(fi + dx, fj + dy) && included[fine.linear(fi + dx, fj + dy)] != 0;
  };
  auto axis = [](bool minus, bool plus) -> std::array<double, 3> {
    if (minus && plus) return {0.25, 0.5, 0.25};
    if (minus) return {0.5, 0.5, 0.0};
    if (plus) return {0.0, 0.5, 0.5};
    return {0.0, 1.0, 0.0};
  };
  const auto wx = axis(inc(-1, 0), inc(1, 0));
  const auto wy = axis(inc(0, -1), inc(0, 1));
  std::array<std::array<double, 3>, 3> w{};
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) w[std::size_t(a)][std::size_t(b)] = wy[std::size_t(a)] * wx[std::size_t(b)];
  }
  for (int dy : {-1, 1}) {
    for (int dx : {-1, 1}) {
      double& v = w[std::size_t(dy + 1)][std::size_t(dx + 1)];
      if (v == 0.0 || inc(dx, dy)) continue;
      if (inc(-dx, dy)) {
        w[std::size_t(dy + 1)][std::size_t(-dx + 1)] += v;
      } else if (inc(dx, -dy)) {
        w[std::size_t(-dy + 1)][std::size_t(dx + 1)] += v;
      } else if (inc(-dx, -dy)) {
        w[std::size_t(-dy + 1)][std::size_t(-dx + 1)] += v;
      } else {
        w[1][1] += v;
      }
      v = 0.0;
    }
  }
  return w;
}

MgHierarchy::MgHierarchy(std::shared_ptr<const Domain> finest, BoundaryKind kind, CycleConfig cfg)
    : kind_(kind), cfg_(cfg) {
  const std::size_t depth = hierarchy_depth(finest->grid().intervals(), cfg_.coarsest_intervals);
  levels_.resize(depth);
  levels_[0].domain = std::move(finest);
  for (std::size_t l = 1; l < depth; ++l) {
    levels_[l].domain = std::make_shared<const Domain>(levels_[l - 1].domain->phi().injected(), ClosurePolicy::Degrade);
  }
  for (std::size_t l = 0; l < depth; ++l) {
    levels_[l].tau = ghost_relaxation(kind_, cfg_, levels_[l].domain->grid().spacing());
    if (l + 1 < depth) finish_level(l);
  }
}

void MgHierarchy::finish_level(std::size_t l) {
  MgLevel& lv = levels_[l];
  const Domain& fine = *lv.domain;
  const Domain& coarse = *levels_[l + 1].domain;
  const CartesianGrid& fg = fine.grid();
  const CartesianGrid& cg = coarse.grid();
  const auto& fcls = fine.classes();
  const auto& ccls = coarse.classes();

  std::vector<char> inside(fg.node_count(), 0), outside(fg.node_count(), 0), active(fg.node_count(), 0);
  for (std::size_t k = 0; k < fg.node_count(); ++k) {
    inside[k] = fcls.classes()[k] == NodeClass::Inside;
    outside[k] = !inside[k];
    active[k] = fcls.classes()[k] != NodeClass::Inactive;
  }

  std::vector<char> needed(fg.node_count(), 0);
  lv.restriction = {};
  lv.restriction.offsets.push_back(0);
  for (int r = 0; r < ccls.row_count(); ++r) {
    const NodeIndex c = ccls.node_of(r);
    const bool ghost = ccls.is_ghost_row(r);
    const auto w = restriction_stencil(fg, ghost ? outside : inside, c.i, c.j);
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        const double v = w[std::size_t(dy + 1)][std::size_t(dx + 1)];
        if (v == 0.0) continue;
        const std::size_t node = fg.linear(2 * c.i + dx, 2 * c.j + dy);
        lv.restriction.terms.push_back({node, v});
        if (!active[node]) needed[node] = 1;
      }
    }
    lv.restriction.offsets.push_back(lv.restriction.terms.size());
  }
  std::vector<std::size_t> targets;
  for (std::size_t k = 0; k < needed.size(); ++k) {
    if (needed[k]) targets.push_back(k);
  }
  lv.defect_extension = ExtensionPlan(fine.phi(), active, targets);

  // Coarse nodes read by bilinear interpolation onto fine active nodes.
  std::vector<char> cactive(cg.node_count(), 0), parent(cg.node_count(), 0), coincident(cg.node_count(), 0);
  for (std::size_t k = 0; k < cg.node_count(); ++k) cactive[k] = ccls.classes()[k] != NodeClass::Inactive;
  for (int r = 0; r < fcls.row_count(); ++r) {
    const NodeIndex f = fcls.node_of(r);
    const int i0 = f.i / 2, j0 = f.j / 2;
    const int i1 = (f.i + 1) / 2, j1 = (f.j + 1) / 2;
    for (int j : {j0, j1}) {
      for (int i : {i0, i1}) parent[cg.linear(i, j)] = 1;
    }
  }
  targets.clear();
  for (std::size_t k = 0; k < cg.node_count(); ++k) {
    if (parent[k] && !cactive[k]) targets.push_back(k);
  }
  lv.coarse_error_extension = ExtensionPlan(coarse.phi(), cactive, targets);

  std::vector<char> known(cg.node_count(), 0);
  targets.clear();
  for (int r = 0; r < ccls.row_count(); ++r) {
    const NodeIndex c = ccls.node_of(r);
    const std::size_t k = cg.linear(c.i, c.j);
    if (fcls.active(2 * c.i, 2 * c.j)) {
      known[k] = 1;
    } else {
      targets.push_back(k);
    }
  }
  lv.coarse_state_extension = ExtensionPlan(coarse.phi(), known, targets);
}

void MgHierarchy::set_operator(const State& state, const ModelParams& params, double dt) {
  set_operator(assemble_jacobian(state, params, kind_, *levels_[0].domain, dt), state, params, dt);
}

void MgHierarchy::set_operator(JacobianBlocks finest, const State& state, const ModelParams& params, double dt) {
  State cur = state;
  for (std::size_t l = 0; l < levels_.size(); ++l) {
    MgLevel& lv = levels_[l];
    const Domain& dom = *lv.domain;
    if (l == 0) {
      lv.J = std::move(finest);
    } else {
      // Inject the iterate from the finer level, extending where the fine node is inactive.
      const Domain& fine = *levels_[l - 1].domain;
      const CartesianGrid& cg = dom.grid();
      std::vector<double> fs(cg.node_count(), 0.0), fc(cg.node_count(), 0.0);
      const auto& ccls = dom.classes();
      for (int r = 0; r < ccls.row_count(); ++r) {
        const NodeIndex c = ccls.node_of(r);
        const int fr = fine.classes().row_of(2 * c.i, 2 * c.j);
        if (fr >= 0) {
          fs[cg.linear(c.i, c.j)] = cur.s[std::size_t(fr)];
          fc[cg.linear(c.i, c.j)] = cur.c[std::size_t(fr)];
        }
      }
      levels_[l - 1].coarse_state_extension.apply(fs);
      levels_[l - 1].coarse_state_extension.apply(fc);
      State next;
      next.t = cur.t;
      next.s.resize(std::size_t(ccls.row_count()));
      next.c.resize(std::size_t(ccls.row_count()));
      for (int r = 0; r < ccls.row_count(); ++r) {
        next.s[std::size_t(r)] = fs[ccls.linear_of(r)];
        next.c[std::size_t(r)] = fc[ccls.linear_of(r)];
      }
      cur = std::move(next);
      lv.J = assemble_jacobian(cur, params, kind_, dom, dt);
    }

    const JacobianBlocks& J = lv.J;
    lv.pivot_inverse.resize(std::size_t(J.inside));
    for (int r = 0; r < J.inside; ++r) {
      const std::size_t q = std::size_t(r);
      const double a = J.ss_c[q], b = J.sc_c[q], c = J.cs[q], d = J.cc[q];
      const double det = a * d - b * c;
      const double scale = std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d)});
      if (!(std::abs(det) >= 1e-14 * scale * scale)) {
        throw SolverError(ErrorCode::SingularPivot, "collective 2x2 pivot is singular on level " + std::to_string(l) +
                                                        ", row " + std::to_string(r));
      }
      lv.pivot_inverse[q] = {d / det, -b / det, -c / det, a / det};
    }
    for (int r = J.inside; r < J.rows; ++r) {
      if (J.cc[std::size_t(r)] == 0.0) throw SolverError(ErrorCode::SingularPivot, "zero c pivot on a ghost row");
    }
    set_ghost_relaxation(lv);
  }

  // Dense LU of the coarsest operator.
  const JacobianBlocks& J = levels_.back().J;
  const int n = J.rows, m = 2 * n;
  lu_.assign(std::size_t(m) * std::size_t(m), 0.0);
  piv_.resize(std::size_t(m));
  auto A = [&](int i, int j) -> double& { return lu_[std::size_t(i) * std::size_t(m) + std::size_t(j)]; };
  for (int r = 0; r < n; ++r) {
    for (const auto& e : J.row(JacobianBlocks::Block::SS, r)) A(r, e.col) += e.value;
    for (const auto& e : J.row(JacobianBlocks::Block::SC, r)) A(r, n + e.col) += e.value;
    A(n + r, r) = J.cs[std::size_t(r)];
    A(n + r, n + r) = J.cc[std::size_t(r)];
  }
  for (int k = 0; k < m; ++k) {
    int p = k;
    for (int i = k + 1; i < m; ++i) {
      if (std::abs(A(i, k)) > std::abs(A(p, k))) p = i;
    }
    if (A(p, k) == 0.0) throw SolverError(ErrorCode::LinearSolveFailure, "coarsest operator is singular");
    piv_[std::size_t(k)] = p;
    if (p != k) {
      for (int j = 0; j < m; ++j) std::swap(A(k, j), A(p, j));
    }
    for (int i = k + 1; i < m; ++i) {
      const double f = A(i, k) / A(k, k);
      A(i, k) = f;
      if (f == 0.0) continue;
      for (int j = k + 1; j < m; ++j) A(i, j) -= f * A(k, j);
    }
  }
}

// A ghost update changes the inside neighbours' next collective solve through
// their s-pivot, which feeds back into the ghost row. The effective diagonal
// adds that response; damping with it keeps every ghost update contractive
// even where the closure's own ghost coefficient is tiny.
void MgHierarchy::set_ghost_relaxation(MgLevel& lv) const {
  const JacobianBlocks& J = lv.J;
  const Connectivity& conn = *J.conn;
  lv.ghost_tau.assign(std::size_t(J.rows - J.inside), lv.tau);
  if (!cfg_.effective_ghost_diagonal) return;
  for (int r = J.inside; r < J.rows; ++r) {
    const std::size_t g = std::size_t(r - J.inside);
    const auto& coef = J.ghost_coef[g];
    const auto& col = J.ghost_col[g];
    double diag = 0.0, eff = 0.0;
    for (std::size_t k = 0; k < 9; ++k) {
      const int c = col[k];
      if (c == r) {
        diag += coef[k];
        eff += coef[k];
        continue;
      }
      if (c >= J.inside || coef[k] == 0.0) continue;
      const std::size_t u = std::size_t(c);
      double to_ghost = 0.0;
      if (conn.east[u] == r) to_ghost += J.ss_e[u];
      if (conn.west[u] == r) to_ghost += J.ss_w[u];
      if (conn.north[u] == r) to_ghost += J.ss_n[u];
      if (conn.south[u] == r) to_ghost += J.ss_s[u];
      eff -= coef[k] * to_ghost * lv.pivot_inverse[u][0];
    }
    if (std::abs(eff) < std::abs(diag)) eff = diag;
    lv.ghost_tau[g] = cfg_.ghost_damping / eff;
  }
}

void MgHierarchy::coarsest_solve(std::vector<double>& xs, std::vector<double>& xc, const std::vector<double>& bs,
                                 const std::vector<double>& bc) const {
  const int n = levels_.back().J.rows, m = 2 * n;
  std::vector<double> x(static_cast<std::size_t>(m));
  std::copy(bs.begin(), bs.end(), x.begin());
  std::copy(bc.begin(), bc.end(), x.begin() + n);
  auto A = [&](int i, int j) { return lu_[std::size_t(i) * std::size_t(m) + std::size_t(j)]; };
  for (int k = 0; k < m; ++k) std::swap(x[std::size_t(k)], x[std::size_t(piv_[std::size_t(k)])]);
  for (int i = 0; i < m; ++i) {
    double v = x[std::size_t(i)];
    for (int j = 0; j < i; ++j) v -= A(i, j) * x[std::size_t(j)];
    x[std::size_t(i)] = v;
  }
  for (int i = m - 1; i >= 0; --i) {
    double v = x[std::size_t(i)];
    for (int j = i + 1; j < m; ++j) v -= A(i, j) * x[std::size_t(j)];
    x[std::size_t(i)] = v / A(i, i);
  }
  xs.assign(x.begin(), x.begin() + n);
  xc.assign(x.begin() + n, x.end());
}

void MgHierarchy::smooth(std::size_t l, std::vector<double>& xs, std::vector<double>& xc,
                         const std::vector<double>& bs, const std::vector<double>& bc, int sweeps) const {
  const MgLevel& lv = levels_[l];
  const JacobianBlocks& J = lv.J;
  const Connectivity& conn = *J.conn;
  for (int sweep = 0; sweep < sweeps; ++sweep) {
    for (int r = 0; r < J.inside; ++r) {
      const std::size_t q = std::size_t(r);
      const std::size_t e = std::size_t(conn.east[q]), w = std::size_t(conn.west[q]);
      const std::size_t n = std::size_t(conn.north[q]), s = std::size_t(conn.south[q]);
      double rs = bs[q];
      rs -= J.ss_e[q] * xs[e] + J.ss_w[q] * xs[w] + J.ss_n[q] * xs[n] + J.ss_s[q] * xs[s];
      rs -= J.sc_e[q] * xc[e] + J.sc_w[q] * xc[w] + J.sc_n[q] * xc[n] + J.sc_s[q] * xc[s];
      const double rc = bc[q];
      const auto& P = lv.pivot_inverse[q];
      xs[q] = P[0] * rs + P[1] * rc;
      xc[q] = P[2] * rs + P[3] * rc;
    }
    for (int r = J.inside; r < J.rows; ++r) {
      const std::size_t q = std::size_t(r);
      const auto& coef = J.ghost_coef[q - std::size_t(J.inside)];
      const auto& col = J.ghost_col[q - std::size_t(J.inside)];
      double row = 0.0;
      for (int k = 0; k < 9; ++k) row += coef[std::size_t(k)] * xs[std::size_t(col[std::size_t(k)])];
      const double s_old = xs[q];
      xs[q] = s_old + lv.ghost_tau[q - std::size_t(J.inside)] * (bs[q] - row);
      xc[q] = (bc[q] - J.cs[q] * s_old) / J.cc[q];
    }
  }
}

double MgHierarchy::defect_norm(std::size_t l, const std::vector<double>& xs, const std::vector<double>& xc,
                                const std::vector<double>& bs, const std::vector<double>& bc) const {
  std::vector<double> ys, yc;
  levels_[l].J.apply(xs, xc, ys, yc);
  const simd::Kernels& k = simd::active();
  k.subtract(ys.size(), bs.data(), ys.data(), ys.data());
  k.subtract(yc.size(), bc.data(), yc.data(), yc.data());
  return std::max(k.max_abs(ys.size(), ys.data()), k.max_abs(yc.size(), yc.data()));
}

void MgHierarchy::restrict_defect(std::size_t l, const std::vector<double>& rs, const std::vector<double>& rc,
                                  std::vector<double>& coarse_rs, std::vector<double>& coarse_rc) const {
  const MgLevel& lv = levels_[l];
  const auto& fcls = lv.domain->classes();
  const std::size_t nodes = lv.domain->grid().node_count();
  std::vector<double> fs(nodes, 0.0), fc(nodes, 0.0);
  for (int r = 0; r < fcls.row_count(); ++r) {
    fs[fcls.linear_of(r)] = rs[std::size_t(r)];
    fc[fcls.linear_of(r)] = rc[std::size_t(r)];
  }
  lv.defect_extension.apply(fs);
  lv.defect_extension.apply(fc);
  const TransferWeights& T = lv.restriction;
  const std::size_t rows = T.offsets.size() - 1;
  coarse_rs.assign(rows, 0.0);
  coarse_rc.assign(rows, 0.0);
  for (std::size_t r = 0; r < rows; ++r) {
    double a = 0.0, b = 0.0;
    for (std::size_t k = T.offsets[r]; k < T.offsets[r + 1]; ++k) {
      a += T.terms[k].weight * fs[T.terms[k].node];
      b += T.terms[k].weight * fc[T.terms[k].node];
    }
    coarse_rs[r] = a;
    coarse_rc[r] = b;
  }
}

void MgHierarchy::prolong_error(std::size_t l, const std::vector<double>& coarse_es,
                                const std::vector<double>& coarse_ec, std::vector<double>& es,
                                std::vector<double>& ec) const {
  const MgLevel& lv = levels_[l];
  const Domain& coarse = *levels_[l + 1].domain;
  const CartesianGrid& cg = coarse.grid();
  const auto& ccls = coarse.classes();
  const auto& fcls = lv.domain->classes();
  std::vector<double> cs(cg.node_count(), 0.0), cc(cg.node_count(), 0.0);
  for (int r = 0; r < ccls.row_count(); ++r) {
    cs[ccls.linear_of(r)] = coarse_es[std::size_t(r)];
    cc[ccls.linear_of(r)] = coarse_ec[std::size_t(r)];
  }
  lv.coarse_error_extension.apply(cs);
  lv.coarse_error_extension.apply(cc);
  es.assign(std::size_t(fcls.row_count()), 0.0);
  ec.assign(std::size_t(fcls.row_count()), 0.0);
  for (int r = 0; r < fcls.row_count(); ++r) {
    const NodeIndex f = fcls.node_of(r);
    const int i0 = f.i / 2, j0 = f.j / 2, i1 = (f.i + 1) / 2, j1 = (f.j + 1) / 2;
    double a = 0.0, b = 0.0;
    const int ni = i0 == i1 ? 1 : 2, nj = j0 == j1 ? 1 : 2;
    for (int dj = 0; dj < nj; ++dj) {
      for (int di = 0; di < ni; ++di) {
        a += cs[cg.linear(i0 + di, j0 + dj)];
        b += cc[cg.linear(i0 + di, j0 + dj)];
      }
    }
    const double w = 1.0 / double(ni * nj);
    es[std::size_t(r)] = w * a;
    ec[std::size_t(r)] = w * b;
  }
}

void MgHierarchy::cycle(std::size_t l, std::vector<double>& xs, std::vector<double>& xc,
                        const std::vector<double>& bs, const std::vector<double>& bc) const {
  if (l + 1 == levels_.size()) {
    coarsest_solve(xs, xc, bs, bc);
    return;
  }
  smooth(l, xs, xc, bs, bc, cfg_.pre_smooth);

  std::vector<double> rs, rc;
  levels_[l].J.apply(xs, xc, rs, rc);
  const simd::Kernels& k = simd::active();
  k.subtract(rs.size(), bs.data(), rs.data(), rs.data());
  k.subtract(rc.size(), bc.data(), rc.data(), rc.data());

  std::vector<double> crs, crc;
  restrict_defect(l, rs, rc, crs, crc);
  std::vector<double> es(crs.size(), 0.0), ec(crc.size(), 0.0);
  const int visits = l + 2 == levels_.size() ? 1 : cfg_.coarse_visits;
  for (int v = 0; v < visits; ++v) cycle(l + 1, es, ec, crs, crc);

  std::vector<double> fs, fc;
  prolong_error(l, es, ec, fs, fc);
  for (std::size_t q = 0; q < xs.size(); ++q) {
    xs[q] += fs[q];
    xc[q] += fc[q];
  }
  smooth(l, xs, xc, bs, bc, cfg_.post_smooth);
}

LinearSolveReport MgHierarchy::solve(const std::vector<double>& bs, const std::vector<double>& bc,
                                     std::vector<double>& xs, std::vector<double>& xc) const {
  const std::size_t n = std::size_t(levels_[0].J.rows);
  if (bs.size() != n || bc.size() != n || xs.size() != n || xc.size() != n) {
    throw SolverError(ErrorCode::DimensionMismatch, "right-hand side length does not match the operator");
  }
  LinearSolveReport rep;
  rep.defect.push_back(defect_norm(0, xs, xc, bs, bc));
  do {
    cycle(0, xs, xc, bs, bc);
    ++rep.cycles;
    const double d = defect_norm(0, xs, xc, bs, bc);
    if (!std::isfinite(d)) throw SolverError(ErrorCode::LinearSolveFailure, "multigrid defect is not finite");
    rep.defect.push_back(d);
  } while (rep.defect.back() >= cfg_.tolerance && rep.cycles < cfg_.max_cycles);
  rep.converged = rep.defect.back() < cfg_.tolerance;
  return rep;
}

}  // namespace sulfation
