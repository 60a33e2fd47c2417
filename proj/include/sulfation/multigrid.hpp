#pragma once

#include <memory>
#include <vector>

#include "sulfation/discretization.hpp"
#include "sulfation/extension.hpp"

namespace sulfation {

struct CycleConfig {
  int pre_smooth = 2;
  int post_smooth = 1;
  int coarse_visits = 2;  // 2 gives the W-cycle
  double tau_dirichlet = 0.9;
  double tau_neumann_factor = 0.9 * 2.0 * 1.4142135623730951 / 3.0;  // times h
  // Per-ghost tau = ghost_damping / effective diagonal instead of the uniform tau above.
  bool effective_ghost_diagonal = true;
  double ghost_damping = 0.9;
  double tolerance = 1e-11;
  int max_cycles = 40;
  int coarsest_intervals = 8;
};

/// Ghost-row relaxation parameter tau^s on a level of spacing h.
double ghost_relaxation(BoundaryKind kind, const CycleConfig& cfg, double h);

/// Sparse map from fine lattice values to coarse rows.
struct TransferWeights {
  struct Term {
    std::size_t node;  // fine lattice index
    double weight;
  };
  std::vector<std::size_t> offsets;  // terms of coarse row r are [offsets[r], offsets[r+1])
  std::vector<Term> terms;
};

/// Full-weighting restriction to a coarse node (2I, 2J) using only fine nodes
/// where `included` is set; excluded weights are folded back into the 3x3
/// stencil so the total stays 1. Result is indexed [dy+1][dx+1].
std::array<std::array<double, 3>, 3> restriction_stencil(const CartesianGrid& fine, const std::vector<char>& included,
                                                         int ci, int cj);

struct MgLevel {
  std::shared_ptr<const Domain> domain;
  JacobianBlocks J;
  std::vector<std::array<double, 4>> pivot_inverse;  // 2x2 inverse per inside row, row-major
  double tau = 0.9;                 // uniform ghost relaxation
  std::vector<double> ghost_tau;    // per ghost ordinal, used by the smoother

  // Transfers to the next coarser level (empty on the coarsest).
  ExtensionPlan defect_extension;  // fine defects into inactive nodes read by restriction
  TransferWeights restriction;
  // Transfers from the next coarser level.
  ExtensionPlan coarse_error_extension;  // acts on the coarse lattice
  ExtensionPlan coarse_state_extension;  // fills coarse rows with no coincident fine active node
};

struct LinearSolveReport {
  std::vector<double> defect;  // defect[0] is the initial defect, defect[q] after cycle q
  int cycles = 0;
  bool converged = false;

  double rho(int q) const { return defect[std::size_t(q)] / defect[std::size_t(q - 1)]; }
};

class MgHierarchy {
 public:
  MgHierarchy(std::shared_ptr<const Domain> finest, BoundaryKind kind, CycleConfig cfg = {});

  std::size_t depth() const { return levels_.size(); }
  const MgLevel& level(std::size_t l) const { return levels_[l]; }
  const CycleConfig& config() const { return cfg_; }

  /// Re-discretizes the Jacobian on every level around `state` (finest-level rows).
  void set_operator(const State& state, const ModelParams& params, double dt);
  /// Same, reusing an already assembled finest-level Jacobian.
  void set_operator(JacobianBlocks finest, const State& state, const ModelParams& params, double dt);

  /// W-cycles on J x = b from the initial guess in (xs, xc).
  LinearSolveReport solve(const std::vector<double>& bs, const std::vector<double>& bc, std::vector<double>& xs,
                          std::vector<double>& xc) const;

  void smooth(std::size_t l, std::vector<double>& xs, std::vector<double>& xc, const std::vector<double>& bs,
              const std::vector<double>& bc, int sweeps) const;
  void restrict_defect(std::size_t l, const std::vector<double>& rs, const std::vector<double>& rc,
                       std::vector<double>& coarse_rs, std::vector<double>& coarse_rc) const;
  /// Bilinear interpolation of level l+1 corrections onto the active rows of level l.
  void prolong_error(std::size_t l, const std::vector<double>& coarse_es, const std::vector<double>& coarse_ec,
                     std::vector<double>& es, std::vector<double>& ec) const;
  void cycle(std::size_t l, std::vector<double>& xs, std::vector<double>& xc, const std::vector<double>& bs,
             const std::vector<double>& bc) const;

  /// max(|b - J x|) over both species on level l.
  double defect_norm(std::size_t l, const std::vector<double>& xs, const std::vector<double>& xc,
                     const std::vector<double>& bs, const std::vector<double>& bc) const;

 private:
  void coarsest_solve(std::vector<double>& xs, std::vector<double>& xc, const std::vector<double>& bs,
                      const std::vector<double>& bc) const;
  void finish_level(std::size_t l);
  void set_ghost_relaxation(MgLevel& lv) const;

  BoundaryKind kind_;
  CycleConfig cfg_;
  std::vector<MgLevel> levels_;
  // LU factors of the coarsest operator, dense row-major with pivots.
  std::vector<double> lu_;
  std::vector<int> piv_;
};

/// Counts levels for a finest grid of N intervals; throws HierarchyTooShallow when N < 16.
std::size_t hierarchy_depth(int intervals, int coarsest = 8);

}  // namespace sulfation
