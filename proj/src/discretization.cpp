#include "sulfation/discretization.hpp"

#include <cmath>

#include "sulfation/simd.hpp"

namespace sulfation {

Domain::Domain(LevelSetField phi, ClosurePolicy policy)
    : phi_(std::move(phi)), cls_(classify(phi_)), closures_(build_closures(phi_, cls_, policy)) {
  auto conn = std::make_shared<Connectivity>();
  const auto& nb = cls_.inside_neighbours();
  const std::size_t n = nb.size();
  conn->east.resize(n);
  conn->west.resize(n);
  conn->north.resize(n);
  conn->south.resize(n);
  for (std::size_t r = 0; r < n; ++r) {
    conn->east[r] = nb[r][0];
    conn->west[r] = nb[r][1];
    conn->north[r] = nb[r][2];
    conn->south[r] = nb[r][3];
  }
  conn_ = std::move(conn);
}

std::vector<double> sample_rows(const Domain& domain, const std::function<double(double, double)>& f) {
  const auto& cls = domain.classes();
  std::vector<double> v(std::size_t(cls.row_count()));
  for (int r = 0; r < cls.row_count(); ++r) {
    const Vec2 p = domain.grid().coordinate(cls.node_of(r));
    v[std::size_t(r)] = f(p.x, p.y);
  }
  return v;
}

namespace {

simd::Stencil5 view(const std::vector<double>& c, const std::vector<double>& e, const std::vector<double>& w,
                    const std::vector<double>& n, const std::vector<double>& s, const Connectivity& conn) {
  return {c.data(), e.data(), w.data(), n.data(), s.data(),
          conn.east.data(), conn.west.data(), conn.north.data(), conn.south.data()};
}

void check_state(const State& st, const Domain& domain) {
  const std::size_t n = std::size_t(domain.rows());
  if (st.s.size() != n || st.c.size() != n) {
    throw SolverError(ErrorCode::DimensionMismatch, "state length does not match the row count");
  }
}

// Diffusion part of L^s at inside row r: d/(2h^2) sum (phi(c*) + phi(c)) (s* - s).
double diffusion(const ModelParams& p, const Connectivity& conn, const std::vector<double>& s,
                 const std::vector<double>& c, std::size_t r, double h) {
  const double pr = p.porosity(c[r]);
  const int nb[4] = {conn.east[r], conn.west[r], conn.north[r], conn.south[r]};
  double sum = 0.0;
  for (int q : nb) sum += (p.porosity(c[std::size_t(q)]) + pr) * (s[std::size_t(q)] - s[r]);
  return p.d / (2.0 * h * h) * sum;
}

double reaction(double rate, const ModelParams& p, double s, double c) { return rate * p.porosity(c) * s * c; }

}  // namespace

void JacobianBlocks::apply(const std::vector<double>& xs, const std::vector<double>& xc, std::vector<double>& ys,
                           std::vector<double>& yc) const {
  if (xs.size() != std::size_t(rows) || xc.size() != std::size_t(rows)) {
    throw SolverError(ErrorCode::DimensionMismatch, "vector length does not match the Jacobian");
  }
  const simd::Kernels& k = simd::active();
  ys.assign(std::size_t(rows), 0.0);
  yc.assign(std::size_t(rows), 0.0);
  std::vector<double> tmp(static_cast<std::size_t>(inside));
  k.stencil5(std::size_t(inside), view(ss_c, ss_e, ss_w, ss_n, ss_s, *conn), xs.data(), ys.data());
  k.stencil5(std::size_t(inside), view(sc_c, sc_e, sc_w, sc_n, sc_s, *conn), xc.data(), tmp.data());
  for (int r = 0; r < inside; ++r) ys[std::size_t(r)] += tmp[std::size_t(r)];
  for (int r = inside; r < rows; ++r) {
    const auto& coef = ghost_coef[std::size_t(r - inside)];
    const auto& col = ghost_col[std::size_t(r - inside)];
    double v = 0.0;
    for (int q = 0; q < 9; ++q) v += coef[std::size_t(q)] * xs[std::size_t(col[std::size_t(q)])];
    ys[std::size_t(r)] = v;
  }
  k.diag_accumulate(std::size_t(rows), cs.data(), xs.data(), yc.data());
  k.diag_accumulate(std::size_t(rows), cc.data(), xc.data(), yc.data());
}

std::vector<JacobianBlocks::Entry> JacobianBlocks::row(Block block, int r) const {
  std::vector<Entry> out;
  const std::size_t q = std::size_t(r);
  switch (block) {
    case Block::CS: out.push_back({r, cs[q]}); break;
    case Block::CC: out.push_back({r, cc[q]}); break;
    case Block::SS:
    case Block::SC: {
      const bool ss = block == Block::SS;
      if (r < inside) {
        const auto& c = ss ? ss_c : sc_c;
        const auto& e = ss ? ss_e : sc_e;
        const auto& w = ss ? ss_w : sc_w;
        const auto& n = ss ? ss_n : sc_n;
        const auto& s = ss ? ss_s : sc_s;
        out = {{r, c[q]}, {conn->east[q], e[q]}, {conn->west[q], w[q]}, {conn->north[q], n[q]}, {conn->south[q], s[q]}};
      } else if (ss) {
        const auto& coef = ghost_coef[q - std::size_t(inside)];
        const auto& col = ghost_col[q - std::size_t(inside)];
        for (int k = 0; k < 9; ++k) {
          if (coef[std::size_t(k)] != 0.0) out.push_back({col[std::size_t(k)], coef[std::size_t(k)]});
        }
      }
      break;
    }
  }
  return out;
}

std::vector<double> JacobianBlocks::diagonal(Block block) const {
  if (block == Block::CS) return cs;
  if (block == Block::CC) return cc;
  std::vector<double> d(std::size_t(rows), 0.0);
  const bool ss = block == Block::SS;
  for (int r = 0; r < inside; ++r) d[std::size_t(r)] = (ss ? ss_c : sc_c)[std::size_t(r)];
  if (ss) {
    for (int r = inside; r < rows; ++r) {
      const std::size_t g = std::size_t(r - inside);
      for (std::size_t k = 0; k < 9; ++k) {
        if (ghost_col[g][k] == r) d[std::size_t(r)] += ghost_coef[g][k];
      }
    }
  }
  return d;
}

StepSystem::StepSystem(const Problem& problem, std::shared_ptr<const Domain> domain, const State& prev, double dt)
    : problem_(problem), domain_(std::move(domain)), dt_(dt), t_next_(prev.t + dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw SolverError(ErrorCode::InvalidArgument, "time step must be positive");
  problem_.params.validate();
  check_state(prev, *domain_);

  const ModelParams& p = problem_.params;
  const Domain& dom = *domain_;
  const auto& cls = dom.classes();
  const Connectivity& conn = dom.connectivity();
  const double h = dom.grid().spacing();
  const int ni = cls.inside_count(), nr = cls.row_count();
  fixed_s_.assign(std::size_t(nr), 0.0);
  fixed_c_.assign(std::size_t(nr), 0.0);

  auto source = [&](const SpaceTimeField& f, Vec2 x) {
    return f ? 0.5 * (f(x.x, x.y, prev.t) + f(x.x, x.y, t_next_)) : 0.0;
  };

  for (int r = 0; r < nr; ++r) {
    const std::size_t q = std::size_t(r);
    const Vec2 x = dom.grid().coordinate(cls.node_of(r));
    const double lc = -reaction(p.a / p.m_s, p, prev.s[q], prev.c[q]);
    fixed_c_[q] = -prev.c[q] / dt - 0.5 * lc - source(problem_.source_c, x);
    if (r < ni) {
      const double ls = -reaction(p.a / p.m_c, p, prev.s[q], prev.c[q]) + diffusion(p, conn, prev.s, prev.c, q, h);
      fixed_s_[q] = -p.porosity(prev.c[q]) * prev.s[q] / dt - 0.5 * ls - source(problem_.source_s, x);
    } else {
      const GhostClosure& g = dom.closure_of_row(r);
      fixed_s_[q] = -problem_.s_boundary(g.boundary_point.x, g.boundary_point.y, t_next_, g.interpolated_normal);
    }
  }
}

std::vector<double> StepSystem::residual(const State& next) const {
  const Domain& dom = *domain_;
  check_state(next, dom);
  const ModelParams& p = problem_.params;
  const auto& cls = dom.classes();
  const Connectivity& conn = dom.connectivity();
  const double h = dom.grid().spacing();
  const int ni = cls.inside_count(), nr = cls.row_count();
  const bool dirichlet = problem_.boundary == BoundaryKind::Dirichlet;

  std::vector<double> F(2 * std::size_t(nr));
  for (int r = 0; r < nr; ++r) {
    const std::size_t q = std::size_t(r);
    const double s = next.s[q], c = next.c[q];
    F[std::size_t(nr) + q] = c / dt_ + 0.5 * reaction(p.a / p.m_s, p, s, c) + fixed_c_[q];
    if (r < ni) {
      const double ls = -reaction(p.a / p.m_c, p, s, c) + diffusion(p, conn, next.s, next.c, q, h);
      F[q] = p.porosity(c) * s / dt_ - 0.5 * ls + fixed_s_[q];
    } else {
      const GhostClosure& g = dom.closure_of_row(r);
      const auto& coef = dirichlet ? g.dirichlet : g.neumann;
      double v = 0.0;
      for (int k = 0; k < 9; ++k) {
        if (!g.used[std::size_t(k)]) continue;
        const NodeIndex n = g.stencil[std::size_t(k)];
        v += coef[std::size_t(k)] * next.s[std::size_t(cls.row_of(n.i, n.j))];
      }
      F[q] = v + fixed_s_[q];
    }
  }
  return F;
}

void StepSystem::solve_local_c(State& next) const {
  check_state(next, *domain_);
  const ModelParams& p = problem_.params;
  const double k = 0.5 * p.a / p.m_s;
  for (std::size_t q = 0; q < next.c.size(); ++q) {
    const double s = next.s[q];
    const double qa = k * s * p.alpha, qb = 1.0 / dt_ + k * s * p.beta, qc = fixed_c_[q];
    const double disc = qb * qb - 4.0 * qa * qc;
    if (!(disc >= 0.0)) continue;
    const double m = -0.5 * (qb + std::copysign(std::sqrt(disc), qb));
    if (m != 0.0) next.c[q] = qc / m;
  }
}

JacobianBlocks StepSystem::jacobian(const State& next) const {
  return assemble_jacobian(next, problem_.params, problem_.boundary, *domain_, dt_);
}

JacobianBlocks assemble_jacobian(const State& state, const ModelParams& p, BoundaryKind boundary,
                                 const Domain& domain, double dt) {
  check_state(state, domain);
  const auto& cls = domain.classes();
  const Connectivity& conn = domain.connectivity();
  const double h = domain.grid().spacing();
  const int ni = cls.inside_count(), nr = cls.row_count();
  const double rs = p.a / p.m_c, rc = p.a / p.m_s;
  const double k = p.d / (4.0 * h * h);

  JacobianBlocks J;
  J.inside = ni;
  J.rows = nr;
  J.conn = domain.connectivity_ptr();
  for (auto* v : {&J.ss_c, &J.ss_e, &J.ss_w, &J.ss_n, &J.ss_s, &J.sc_c, &J.sc_e, &J.sc_w, &J.sc_n, &J.sc_s}) {
    v->assign(std::size_t(ni), 0.0);
  }
  J.cs.assign(std::size_t(nr), 0.0);
  J.cc.assign(std::size_t(nr), 0.0);

  const auto& S = state.s;
  const auto& C = state.c;
  for (int r = 0; r < nr; ++r) {
    const std::size_t q = std::size_t(r);
    const double s = S[q], c = C[q];
    const double ph = p.porosity(c), dph = p.porosity_slope(c);
    J.cs[q] = 0.5 * rc * ph * c;
    J.cc[q] = 1.0 / dt + 0.5 * rc * (dph * s * c + ph * s);
    if (r >= ni) continue;

    const std::size_t nb[4] = {std::size_t(conn.east[q]), std::size_t(conn.west[q]), std::size_t(conn.north[q]),
                               std::size_t(conn.south[q])};
    double* ss_nb[4] = {&J.ss_e[q], &J.ss_w[q], &J.ss_n[q], &J.ss_s[q]};
    double* sc_nb[4] = {&J.sc_e[q], &J.sc_w[q], &J.sc_n[q], &J.sc_s[q]};
    double flux = 0.0, jump = 0.0;
    for (int m = 0; m < 4; ++m) {
      const std::size_t o = nb[m];
      const double po = p.porosity(C[o]);
      flux += po + ph;
      jump += s - S[o];
      *ss_nb[m] = -k * (po + ph);
      *sc_nb[m] = k * p.porosity_slope(C[o]) * (s - S[o]);
    }
    J.ss_c[q] = ph / dt + 0.5 * rs * ph * c + k * flux;
    J.sc_c[q] = dph * s / dt + 0.5 * rs * (dph * s * c + ph * s) + k * dph * jump;
  }

  const bool dirichlet = boundary == BoundaryKind::Dirichlet;
  J.ghost_coef.resize(std::size_t(nr - ni));
  J.ghost_col.resize(std::size_t(nr - ni));
  for (int r = ni; r < nr; ++r) {
    const GhostClosure& g = domain.closure_of_row(r);
    auto& coef = J.ghost_coef[std::size_t(r - ni)];
    auto& col = J.ghost_col[std::size_t(r - ni)];
    for (int m = 0; m < 9; ++m) {
      const std::size_t u = std::size_t(m);
      if (g.used[u]) {
        coef[u] = (dirichlet ? g.dirichlet : g.neumann)[u];
        col[u] = cls.row_of(g.stencil[u].i, g.stencil[u].j);
      } else {
        coef[u] = 0.0;
        col[u] = r;
      }
    }
  }
  return J;
}

}  // namespace sulfation
