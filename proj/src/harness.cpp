#include "sulfation/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sulfation {

const std::vector<std::string>& ErrorReport::columns() {
  static const std::vector<std::string> c{"l1_s",      "linf_s",      "l1_c",      "linf_c",
                                          "l1_grad_s", "linf_grad_s", "l1_grad_c", "linf_grad_c"};
  return c;
}

std::vector<double> ErrorReport::column(const std::string& name) const {
  double ErrorRow::*field = nullptr;
  if (name == "l1_s") field = &ErrorRow::l1_s;
  if (name == "linf_s") field = &ErrorRow::linf_s;
  if (name == "l1_c") field = &ErrorRow::l1_c;
  if (name == "linf_c") field = &ErrorRow::linf_c;
  if (name == "l1_grad_s") field = &ErrorRow::l1_grad_s;
  if (name == "linf_grad_s") field = &ErrorRow::linf_grad_s;
  if (name == "l1_grad_c") field = &ErrorRow::l1_grad_c;
  if (name == "linf_grad_c") field = &ErrorRow::linf_grad_c;
  if (!field) throw SolverError(ErrorCode::InvalidArgument, "unknown error column '" + name + "'");
  std::vector<double> out;
  for (const ErrorRow& r : rows) out.push_back(r.*field);
  return out;
}

double fitted_order(std::span<const int> sizes, std::span<const double> errors) {
  if (sizes.size() != errors.size() || sizes.size() < 2) {
    throw SolverError(ErrorCode::InvalidArgument, "order fit needs at least two matching points");
  }
  const double n = double(sizes.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < sizes.size(); ++k) {
    const double x = std::log(double(sizes[k])), y = std::log(errors[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return -(n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double ErrorReport::fitted_order(const std::string& name) const {
  std::vector<int> n;
  for (const ErrorRow& r : rows) n.push_back(r.N);
  const std::vector<double> e = column(name);
  return sulfation::fitted_order(n, e);
}

std::vector<double> ErrorReport::pairwise_orders(const std::string& name) const {
  const std::vector<double> e = column(name);
  std::vector<double> out(e.size(), std::numeric_limits<double>::quiet_NaN());
  for (std::size_t k = 1; k < e.size(); ++k) {
    out[k] = std::log(e[k - 1] / e[k]) / std::log(double(rows[k].N) / double(rows[k - 1].N));
  }
  return out;
}

ErrorRow measure_errors(const Domain& domain, const State& state, double t) {
  const auto& cls = domain.classes();
  const CartesianGrid& g = domain.grid();
  const double h = g.spacing();
  ErrorRow row;
  row.N = g.intervals();
  row.h = h;

  struct Acc {
    double l1 = 0, l1_ref = 0, inf = 0, inf_ref = 0;
    void add(double num, double exact) {
      l1 += std::abs(num - exact);
      l1_ref += std::abs(exact);
      inf = std::max(inf, std::abs(num - exact));
      inf_ref = std::max(inf_ref, std::abs(exact));
    }
  } es, ec, egs, egc;

  auto value = [&](const std::vector<double>& f, int i, int j) { return f[std::size_t(cls.row_of(i, j))]; };
  for (int r = 0; r < cls.inside_count(); ++r) {
    const NodeIndex n = cls.node_of(r);
    const double x = g.x(n.i), y = g.y(n.j);
    es.add(state.s[std::size_t(r)], ExactPair::s(x, y, t));
    ec.add(state.c[std::size_t(r)], ExactPair::c(x, y, t));
    if (!(cls.active(n.i + 1, n.j) && cls.active(n.i - 1, n.j) && cls.active(n.i, n.j + 1) &&
          cls.active(n.i, n.j - 1))) {
      continue;
    }
    auto grad = [&](const std::vector<double>& f) {
      return std::hypot((value(f, n.i + 1, n.j) - value(f, n.i - 1, n.j)) / (2.0 * h),
                        (value(f, n.i, n.j + 1) - value(f, n.i, n.j - 1)) / (2.0 * h));
    };
    egs.add(grad(state.s), norm(ExactPair::grad_s(x, y, t)));
    egc.add(grad(state.c), norm(ExactPair::grad_c(x, y, t)));
  }
  // Discrete L1 is h^2 times the node sum; the factor cancels in the ratio.
  row.l1_s = es.l1 / es.l1_ref;
  row.linf_s = es.inf / es.inf_ref;
  row.l1_c = ec.l1 / ec.l1_ref;
  row.linf_c = ec.inf / ec.inf_ref;
  row.l1_grad_s = egs.l1 / egs.l1_ref;
  row.linf_grad_s = egs.inf / egs.inf_ref;
  row.l1_grad_c = egc.l1 / egc.l1_ref;
  row.linf_grad_c = egc.inf / egc.inf_ref;
  return row;
}

namespace {

int step_count(double final_time, double dt) { return int(std::lround(final_time / dt)); }

}  // namespace

ErrorReport run_accuracy(const ManufacturedCase& test, std::span<const int> sizes, const ModelParams& params,
                         const NewtonConfig& cfg) {
  ErrorReport rep;
  rep.test = test.name;
  for (int N : sizes) {
    try {
      const CartesianGrid grid(test.half_width, N);
      auto domain = std::make_shared<const Domain>(LevelSetField::sample(grid, test.levelset));
      TimeStepper stepper(test.problem(params), domain, cfg);
      State w0 = initial_state(
          *domain, [](double x, double y) { return ExactPair::s(x, y, 0.0); },
          [](double x, double y) { return ExactPair::c(x, y, 0.0); });
      const double dt = grid.spacing();
      const int steps = step_count(test.final_time, dt);
      NewtonTrace trace;
      const State w = stepper.march(std::move(w0), dt, steps, trace);
      ErrorRow row = measure_errors(*domain, w, w.t);
      row.steps = steps;
      row.newton_iterations = int(trace.records.size());
      rep.rows.push_back(row);
    } catch (const SolverError& e) {
      throw SolverError(e.code(), std::string(e.what()) + " (N = " + std::to_string(N) + ")");
    }
  }
  return rep;
}

EfficiencyReport run_efficiency(const ReactionCase& test, int N, const ModelParams& params, const NewtonConfig& cfg) {
  EfficiencyReport rep;
  rep.test = test.name;
  rep.N = N;
  const CartesianGrid grid(test.half_width, N);
  auto domain = std::make_shared<const Domain>(LevelSetField::sample(grid, test.levelset));
  TimeStepper stepper(test.problem(params), domain, cfg);
  const double s0 = test.s0, c0 = test.c0;
  State w0 = initial_state(*domain, [s0](double, double) { return s0; }, [c0](double, double) { return c0; });

  const int ni = domain->classes().inside_count();
  std::vector<double> c_prev;
  rep.s_min = rep.c_min = std::numeric_limits<double>::infinity();
  rep.s_max = rep.c_max = -std::numeric_limits<double>::infinity();
  auto scan = [&](int, const State& st) {
    for (int r = 0; r < ni; ++r) {
      const std::size_t q = std::size_t(r);
      rep.s_min = std::min(rep.s_min, st.s[q]);
      rep.s_max = std::max(rep.s_max, st.s[q]);
      rep.c_min = std::min(rep.c_min, st.c[q]);
      rep.c_max = std::max(rep.c_max, st.c[q]);
      if (!c_prev.empty()) rep.max_c_increase = std::max(rep.max_c_increase, st.c[q] - c_prev[q]);
    }
    c_prev = st.c;
  };

  const double dt = grid.spacing();
  rep.final_state = stepper.march(std::move(w0), dt, step_count(test.final_time, dt), rep.trace, scan);

  int cycle = 0;
  const auto& recs = rep.trace.records;
  for (std::size_t k = 0; k < recs.size(); ++k) {
    const NewtonRecord& r = recs[k];
    rep.max_newton_iterations = std::max(rep.max_newton_iterations, r.newton_iter);
    if (k + 1 == recs.size() || recs[k + 1].time_index != r.time_index) {
      rep.max_final_residual = std::max(rep.max_final_residual, r.residual_inf);
    }
    for (std::size_t q = 1; q < r.defects.size(); ++q) {
      RhoRecord rr;
      rr.cycle = ++cycle;
      rr.time_index = r.time_index;
      rr.newton_iter = r.newton_iter;
      rr.cycle_in_system = int(q);
      rr.defect = r.defects[q];
      rr.rho = r.defects[q - 1] > 0.0 ? r.defects[q] / r.defects[q - 1] : 0.0;
      rr.first_in_system = q == 1;
      rep.rho.push_back(rr);
    }
  }
  return rep;
}

std::vector<double> post_warmup_rho(const EfficiencyReport& rep, int warmup_systems) {
  std::vector<double> out;
  int system = 0;
  for (const RhoRecord& r : rep.rho) {
    if (r.first_in_system) ++system;
    if (system <= warmup_systems || r.first_in_system) continue;
    out.push_back(r.rho);
  }
  return out;
}

GeometryRun run_geometry(const GrayImage& image, const GeometryOptions& opt, const ModelParams& params,
                         const NewtonConfig& cfg) {
  const CartesianGrid grid(opt.half_width, opt.N);
  LevelSetField phi = image_to_levelset(image, grid, opt.smoothing_steps);
  if (opt.reinit_steps > 0) phi = reinitialize(phi, opt.reinit_steps);
  return run_levelset(std::move(phi), opt, params, cfg);
}

GeometryRun run_levelset(LevelSetField phi, const GeometryOptions& opt, const ModelParams& params,
                         const NewtonConfig& cfg) {
  const CartesianGrid grid = phi.grid();
  GeometryRun run;
  run.domain = std::make_shared<const Domain>(std::move(phi));
  Problem problem;
  problem.params = params;
  problem.boundary = opt.boundary;
  const double sb = opt.s_boundary;
  problem.s_boundary = [sb](double, double, double, Vec2) { return sb; };
  TimeStepper stepper(problem, run.domain, cfg);

  const double dt = grid.spacing();
  std::vector<int> wanted;
  for (double t : opt.snapshot_times) wanted.push_back(step_count(t, dt));
  const double s0 = opt.s0, c0 = opt.c0;
  State w0 = initial_state(*run.domain, [s0](double, double) { return s0; }, [c0](double, double) { return c0; });
  auto observe = [&](int n, const State& st) {
    if (std::find(wanted.begin(), wanted.end(), n) == wanted.end()) return;
    GeometrySnapshot snap;
    snap.time_index = n;
    snap.t = st.t;
    snap.state = st;
    snap.contours = contour_lines(grid, to_lattice(*run.domain, st.c), opt.contour_level);
    run.snapshots.push_back(std::move(snap));
  };
  stepper.march(std::move(w0), dt, step_count(opt.final_time, dt), run.trace, observe);
  return run;
}

}  // namespace sulfation
