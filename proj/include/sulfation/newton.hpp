#pragma once

#include <functional>
#include <iosfwd>
#include <memory>
#include <vector>

#include "sulfation/multigrid.hpp"

namespace sulfation {

struct NewtonConfig {
  double tolerance = 1e-9;
  int max_iterations = 25;
  // Re-solve the pointwise c equations after every update (see TimeStepper::step).
  bool local_c_solve = true;
  CycleConfig cycle;
};

/// One record per Newton iterate.
struct NewtonRecord {
  int time_index = 0;
  int newton_iter = 0;
  double residual_inf = 0.0;  // ||F|| after the update
  double update_ratio = 0.0;  // ||W_new - W_old|| / ||W_old||
  int wcycles = 0;
  double rho_last = 0.0;
  std::vector<double> defects;  // multigrid defect history of this linear system
};

struct NewtonTrace {
  std::vector<NewtonRecord> records;
  void write_csv(std::ostream& out) const;
};

class TimeStepper {
 public:
  TimeStepper(Problem problem, std::shared_ptr<const Domain> domain, NewtonConfig cfg = {});

  /// One Crank-Nicolson step; appends its Newton iterates to `trace`.
  State step(const State& prev, double dt, int time_index, NewtonTrace& trace);

  using Observer = std::function<void(int time_index, const State&)>;
  /// `n_steps` steps of size dt; `observe` sees the initial state and every new one.
  State march(State initial, double dt, int n_steps, NewtonTrace& trace, const Observer& observe = {});

  const Domain& domain() const { return *domain_; }
  const Problem& problem() const { return problem_; }
  const MgHierarchy& hierarchy() const { return hierarchy_; }

 private:
  Problem problem_;
  std::shared_ptr<const Domain> domain_;
  NewtonConfig cfg_;
  MgHierarchy hierarchy_;
};

/// Initial state from inside-node data, ghosts filled by extrapolation.
State initial_state(const Domain& domain, const std::function<double(double, double)>& s0,
                    const std::function<double(double, double)>& c0, double t0 = 0.0);

}  // namespace sulfation
