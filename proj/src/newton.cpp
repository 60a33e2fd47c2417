#include "sulfation/newton.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>

#include "sulfation/simd.hpp"

namespace sulfation {

namespace {

double max_abs(const std::vector<double>& v) { return simd::active().max_abs(v.size(), v.data()); }

}  // namespace

void NewtonTrace::write_csv(std::ostream& out) const {
  out << "time_index,newton_iter,residual_inf,wcycles,rho_last\n";
  out << std::setprecision(17);
  for (const NewtonRecord& r : records) {
    out << r.time_index << ',' << r.newton_iter << ',' << r.residual_inf << ',' << r.wcycles << ',' << r.rho_last
        << '\n';
  }
}

TimeStepper::TimeStepper(Problem problem, std::shared_ptr<const Domain> domain, NewtonConfig cfg)
    : problem_(std::move(problem)),
      domain_(domain),
      cfg_(cfg),
      hierarchy_(std::move(domain), problem_.boundary, cfg.cycle) {}

State TimeStepper::step(const State& prev, double dt, int time_index, NewtonTrace& trace) {
  const StepSystem sys(problem_, domain_, prev, dt);
  const std::size_t n = std::size_t(domain_->rows());

  State w = prev;
  w.t = sys.time_next();
  for (int k = 1; k <= cfg_.max_iterations; ++k) {
    const std::vector<double> F = sys.residual(w);
    const std::vector<double> Fs(F.begin(), F.begin() + std::ptrdiff_t(n));
    const std::vector<double> Fc(F.begin() + std::ptrdiff_t(n), F.end());

    hierarchy_.set_operator(sys.jacobian(w), w, problem_.params, dt);
    std::vector<double> ds(n, 0.0), dc(n, 0.0);
    const LinearSolveReport rep = hierarchy_.solve(Fs, Fc, ds, dc);

    const double w_norm = std::max(max_abs(w.s), max_abs(w.c));
    State next = w;
    for (std::size_t q = 0; q < n; ++q) {
      next.s[q] -= ds[q];
      next.c[q] -= dc[q];
    }
    // From a state far from equilibrium (s = 0 against s_b = 1) the linearized c
    // update overshoots by a factor a*phi*c*dt/m_s and plain Newton can land near
    // the spurious negative root of the quadratic c equations. The c equations
    // have no spatial coupling, so they are solved exactly for the new s.
    if (cfg_.local_c_solve) sys.solve_local_c(next);
    double update = 0.0;
    for (std::size_t q = 0; q < n; ++q) {
      update = std::max({update, std::abs(next.s[q] - w.s[q]), std::abs(next.c[q] - w.c[q])});
    }
    w = std::move(next);
    const std::vector<double> F_new = sys.residual(w);
    const double res = max_abs(F_new);
    if (!std::isfinite(res)) {
      throw SolverError(ErrorCode::LinearSolveFailure,
                        "non-finite residual at time index " + std::to_string(time_index));
    }

    NewtonRecord rec;
    rec.time_index = time_index;
    rec.newton_iter = k;
    rec.residual_inf = res;
    rec.update_ratio = w_norm > 0.0 ? update / w_norm : update;
    rec.wcycles = rep.cycles;
    rec.rho_last = rep.cycles > 0 ? rep.rho(rep.cycles) : 0.0;
    rec.defects = rep.defect;
    trace.records.push_back(std::move(rec));

    if (std::min(res, trace.records.back().update_ratio) < cfg_.tolerance) return w;
  }
  throw SolverError(ErrorCode::MaxNewtonIterations,
                    "Newton did not converge in " + std::to_string(cfg_.max_iterations) + " iterations at time index " +
                        std::to_string(time_index));
}

State TimeStepper::march(State initial, double dt, int n_steps, NewtonTrace& trace, const Observer& observe) {
  if (n_steps < 0) throw SolverError(ErrorCode::InvalidArgument, "negative step count");
  if (observe) observe(0, initial);
  State cur = std::move(initial);
  const double t0 = cur.t;
  for (int n = 1; n <= n_steps; ++n) {
    cur = step(cur, dt, n, trace);
    cur.t = t0 + n * dt;
    if (observe) observe(n, cur);
  }
  return cur;
}

State initial_state(const Domain& domain, const std::function<double(double, double)>& s0,
                    const std::function<double(double, double)>& c0, double t0) {
  State st;
  st.t = t0;
  st.s = sample_rows(domain, s0);
  st.c = sample_rows(domain, c0);
  extrapolate_initial_data(domain, st.s);
  extrapolate_initial_data(domain, st.c);
  return st;
}

}  // namespace sulfation
