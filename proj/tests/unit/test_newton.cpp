#include <doctest.h>

#include <cmath>

#include "dense.hpp"
#include "sulfation/harness.hpp"

using namespace sulfation;

namespace {

struct Run {
  std::shared_ptr<const Domain> domain;
  Problem problem;
  State start;
};

Run manufactured(const std::string& id, int N) {
  const ManufacturedCase tc = manufactured_case(id);
  Run r;
  r.domain = std::make_shared<const Domain>(LevelSetField::sample(CartesianGrid(tc.half_width, N), tc.levelset));
  r.problem = tc.problem();
  r.start = initial_state(
      *r.domain, [](double x, double y) { return ExactPair::s(x, y, 0.0); },
      [](double x, double y) { return ExactPair::c(x, y, 0.0); });
  return r;
}

Run reaction(const std::string& id, int N) {
  const ReactionCase tc = reaction_case(id);
  Run r;
  r.domain = std::make_shared<const Domain>(LevelSetField::sample(CartesianGrid(tc.half_width, N), tc.levelset));
  r.problem = tc.problem();
  r.start = initial_state(*r.domain, [&](double, double) { return tc.s0; }, [&](double, double) { return tc.c0; });
  return r;
}

double max_diff(const State& a, const State& b) {
  double m = 0.0;
  for (std::size_t q = 0; q < a.s.size(); ++q) m = std::max({m, std::abs(a.s[q] - b.s[q]), std::abs(a.c[q] - b.c[q])});
  return m;
}

// Plain Newton with direct linear solves, as an independent reference.
State dense_newton(const Run& r, double dt) {
  const StepSystem sys(r.problem, r.domain, r.start, dt);
  State w = r.start;
  w.t = sys.time_next();
  const std::size_t n = w.s.size();
  for (int k = 0; k < 30; ++k) {
    const auto F = sys.residual(w);
    double res = 0.0;
    for (double v : F) res = std::max(res, std::abs(v));
    if (res < 1e-11) break;
    const auto x = testing::dense_solve(sys.jacobian(w), {F.begin(), F.begin() + std::ptrdiff_t(n)},
                                        {F.begin() + std::ptrdiff_t(n), F.end()});
    for (std::size_t q = 0; q < n; ++q) {
      w.s[q] -= x[q];
      w.c[q] -= x[n + q];
    }
  }
  return w;
}

}  // namespace

TEST_CASE("a Newton step agrees with direct-solve Newton") {
  for (const char* id : {"1", "1n"}) {
    Run r = manufactured(id, 32);
    const double dt = r.domain->grid().spacing();
    TimeStepper stepper(r.problem, r.domain);
    NewtonTrace trace;
    const State w = stepper.step(r.start, dt, 1, trace);
    const State ref = dense_newton(r, dt);
    CAPTURE(id);
    CHECK(max_diff(w, ref) < 1e-8);
    CHECK(trace.records.back().residual_inf < 1e-9);
    CHECK(trace.records.size() <= 6);
  }
}

TEST_CASE("local c solve changes the path, not the solution") {
  Run r = manufactured("1", 32);
  const double dt = r.domain->grid().spacing();
  NewtonConfig plain;
  plain.local_c_solve = false;
  NewtonTrace t1, t2;
  TimeStepper a(r.problem, r.domain), b(r.problem, r.domain, plain);
  CHECK(max_diff(a.step(r.start, dt, 1, t1), b.step(r.start, dt, 1, t2)) < 1e-8);
}

TEST_CASE("reaction front steps converge from the inconsistent start") {
  // Crank-Nicolson keeps c >= 0 only while (a/m_s) phi s dt / 2 < 1, which
  // needs N >= 64 on these tests.
  Run r = reaction("3", 64);
  const double dt = r.domain->grid().spacing();
  TimeStepper stepper(r.problem, r.domain);
  NewtonTrace trace;
  State w = r.start;
  for (int n = 1; n <= 4; ++n) w = stepper.step(w, dt, n, trace);
  for (std::size_t k = 0; k < trace.records.size(); ++k) {
    const bool last = k + 1 == trace.records.size() || trace.records[k + 1].time_index != trace.records[k].time_index;
    if (last) CHECK(trace.records[k].residual_inf < 1e-9);
  }
  for (int q = 0; q < r.domain->classes().inside_count(); ++q) CHECK(w.c[std::size_t(q)] >= 0.0);
}

TEST_CASE("Newton reports non-convergence") {
  Run r = reaction("3", 32);
  NewtonConfig cfg;
  cfg.max_iterations = 1;
  TimeStepper stepper(r.problem, r.domain, cfg);
  NewtonTrace trace;
  try {
    stepper.step(r.start, r.domain->grid().spacing(), 1, trace);
    FAIL("expected MaxNewtonIterations");
  } catch (const SolverError& e) {
    CHECK(e.code() == ErrorCode::MaxNewtonIterations);
  }
}

TEST_CASE("march reports every time level") {
  Run r = manufactured("1", 16);
  const double dt = r.domain->grid().spacing();
  TimeStepper stepper(r.problem, r.domain);
  NewtonTrace trace;
  std::vector<std::pair<int, double>> seen;
  const State end = stepper.march(r.start, dt, 3, trace, [&](int n, const State& s) { seen.emplace_back(n, s.t); });
  REQUIRE(seen.size() == 4);
  for (int n = 0; n <= 3; ++n) {
    CHECK(seen[std::size_t(n)].first == n);
    CHECK(seen[std::size_t(n)].second == doctest::Approx(n * dt));
  }
  CHECK(end.t == doctest::Approx(3 * dt));
}
