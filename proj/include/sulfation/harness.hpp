#pragma once

#include <span>
#include <string>
#include <vector>

#include "sulfation/contour.hpp"
#include "sulfation/manufactured.hpp"
#include "sulfation/newton.hpp"

namespace sulfation {

/// Relative errors at the final time for one grid size.
struct ErrorRow {
  int N = 0;
  double h = 0.0;
  double l1_s = 0, linf_s = 0, l1_c = 0, linf_c = 0;
  double l1_grad_s = 0, linf_grad_s = 0, l1_grad_c = 0, linf_grad_c = 0;
  int steps = 0;
  int newton_iterations = 0;
};

struct ErrorReport {
  std::string test;
  std::vector<ErrorRow> rows;

  /// Column accessor by name: l1_s, linf_s, l1_c, linf_c, l1_grad_s, ...
  std::vector<double> column(const std::string& name) const;
  /// Least-squares slope of -log(e) against log(N).
  double fitted_order(const std::string& name) const;
  /// log2(e_{k-1}/e_k) for consecutive rows; first entry is NaN.
  std::vector<double> pairwise_orders(const std::string& name) const;

  static const std::vector<std::string>& columns();
};

double fitted_order(std::span<const int> sizes, std::span<const double> errors);

/// Errors of a state against the exact pair at time t over the inside nodes.
ErrorRow measure_errors(const Domain& domain, const State& state, double t);

ErrorReport run_accuracy(const ManufacturedCase& test, std::span<const int> sizes, const ModelParams& params = {},
                         const NewtonConfig& cfg = {});

struct RhoRecord {
  int cycle = 0;  // running count over the whole run
  int time_index = 0;
  int newton_iter = 0;
  int cycle_in_system = 0;
  double defect = 0.0;
  double rho = 0.0;
  bool first_in_system = false;
};

struct EfficiencyReport {
  std::string test;
  int N = 0;
  std::vector<RhoRecord> rho;
  NewtonTrace trace;
  State final_state;
  // Invariant scan over inside nodes at every time level.
  double max_c_increase = 0.0;
  double s_min = 0.0, s_max = 0.0, c_min = 0.0, c_max = 0.0;
  int max_newton_iterations = 0;
  double max_final_residual = 0.0;
};

EfficiencyReport run_efficiency(const ReactionCase& test, int N, const ModelParams& params = {},
                                const NewtonConfig& cfg = {});

/// rho values after discarding the first `warmup_systems` linear systems and the
/// first cycle of every remaining system.
std::vector<double> post_warmup_rho(const EfficiencyReport& rep, int warmup_systems);

struct GeometrySnapshot {
  int time_index = 0;
  double t = 0.0;
  State state;
  std::vector<Polyline> contours;  // c = contour_level
};

struct GeometryRun {
  std::shared_ptr<const Domain> domain;
  std::vector<GeometrySnapshot> snapshots;
  NewtonTrace trace;
};

struct GeometryOptions {
  int N = 512;
  double half_width = 1.0;
  double final_time = 1.0;
  std::vector<double> snapshot_times{0.25, 0.5, 0.75, 1.0};
  double contour_level = 5.0;
  int smoothing_steps = kDefaultSmoothingSteps;
  int reinit_steps = 0;
  double s0 = 0.0, c0 = 10.0;
  BoundaryKind boundary = BoundaryKind::Dirichlet;
  double s_boundary = 1.0;  // value of s, or of its outward normal derivative
};

GeometryRun run_geometry(const GrayImage& image, const GeometryOptions& opt, const ModelParams& params = {},
                         const NewtonConfig& cfg = {});

/// Same march on a given level set; `opt.N` and `opt.half_width` are taken from its grid.
GeometryRun run_levelset(LevelSetField phi, const GeometryOptions& opt, const ModelParams& params = {},
                         const NewtonConfig& cfg = {});

}  // namespace sulfation
