#pragma once

#include <array>
#include <memory>
#include <vector>

#include "sulfation/model.hpp"

namespace sulfation {

/// Row indices of the east, west, north and south neighbours of every inside
/// row, stored per direction so stencil kernels can stream them.
struct Connectivity {
  std::vector<int> east, west, north, south;
};

/// Everything the discretization needs to know about one lattice: level-set,
/// node classification, ghost closures and interior connectivity.
class Domain {
 public:
  Domain(LevelSetField phi, ClosurePolicy policy = ClosurePolicy::Strict);

  const LevelSetField& phi() const { return phi_; }
  const CartesianGrid& grid() const { return phi_.grid(); }
  const DomainClassification& classes() const { return cls_; }
  const std::vector<GhostClosure>& closures() const { return closures_; }
  const GhostClosure& closure_of_row(int row) const { return closures_[std::size_t(row - cls_.inside_count())]; }
  const Connectivity& connectivity() const { return *conn_; }
  std::shared_ptr<const Connectivity> connectivity_ptr() const { return conn_; }
  int rows() const { return cls_.row_count(); }

 private:
  LevelSetField phi_;
  DomainClassification cls_;
  std::vector<GhostClosure> closures_;
  std::shared_ptr<const Connectivity> conn_;
};

/// Unknowns s, c at one time level, ordered by the row mapping.
struct State {
  std::vector<double> s;
  std::vector<double> c;
  double t = 0.0;
};

/// Values of `f` at the active nodes of `domain` in row order.
std::vector<double> sample_rows(const Domain& domain, const std::function<double(double, double)>& f);

/// Fills ghost rows of `field` from its inside rows: the normal derivative is
/// extended at constant value, then the field is extended linearly along the
/// normal. Inside rows are left untouched.
void extrapolate_initial_data(const Domain& domain, std::vector<double>& field);

/// The four Jacobian blocks of one Newton iterate.
///
/// Interior (inside) rows of J^ss and J^sc are five-point stencils stored per
/// direction; J^cs and J^cc are diagonal on every row. Ghost rows of J^ss are
/// the nine closure coefficients; ghost rows of J^sc are zero.
struct JacobianBlocks {
  enum class Block { SS, SC, CS, CC };

  int inside = 0;
  int rows = 0;
  std::shared_ptr<const Connectivity> conn;

  std::vector<double> ss_c, ss_e, ss_w, ss_n, ss_s;
  std::vector<double> sc_c, sc_e, sc_w, sc_n, sc_s;
  std::vector<double> cs, cc;
  std::vector<std::array<double, 9>> ghost_coef;
  std::vector<std::array<int, 9>> ghost_col;

  /// (ys, yc) = J (xs, xc).
  void apply(const std::vector<double>& xs, const std::vector<double>& xc, std::vector<double>& ys,
             std::vector<double>& yc) const;

  struct Entry {
    int col;
    double value;
  };
  std::vector<Entry> row(Block block, int r) const;
  std::vector<double> diagonal(Block block) const;
};

/// Residual and Jacobian of one Crank-Nicolson step from `prev` to prev.t + dt.
/// Residual layout is [F^s rows, F^c rows].
class StepSystem {
 public:
  StepSystem(const Problem& problem, std::shared_ptr<const Domain> domain, const State& prev, double dt);

  std::vector<double> residual(const State& next) const;
  JacobianBlocks jacobian(const State& next) const;

  /// Solves each pointwise c equation exactly for c with s held fixed. The
  /// equation is quadratic in c; the root kept is the one that tends to the
  /// linear solution as s -> 0. Rows without a real root are left unchanged.
  void solve_local_c(State& next) const;

  double dt() const { return dt_; }
  double time_next() const { return t_next_; }
  const Domain& domain() const { return *domain_; }
  const Problem& problem() const { return problem_; }

 private:
  Problem problem_;
  std::shared_ptr<const Domain> domain_;
  double dt_;
  double t_next_;
  // Parts of the residual that do not depend on the new iterate.
  std::vector<double> fixed_s_, fixed_c_;
};

/// Jacobian of the step residual at `state`; it does not depend on the previous level.
JacobianBlocks assemble_jacobian(const State& state, const ModelParams& params, BoundaryKind boundary,
                                 const Domain& domain, double dt);

}  // namespace sulfation
