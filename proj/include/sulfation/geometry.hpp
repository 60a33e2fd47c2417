#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sulfation/grid.hpp"

namespace sulfation {

enum class NodeClass : std::uint8_t { Inactive = 0, Inside = 1, Ghost = 2 };

/// Inside / ghost / inactive partition of the nodes together with the row
/// mapping M. Rows enumerate every inside node before every ghost node; within
/// each class the order is lexicographic in (j, i).
class DomainClassification {
 public:
  DomainClassification(CartesianGrid grid, std::vector<NodeClass> classes);

  const CartesianGrid& grid() const { return grid_; }
  NodeClass at(int i, int j) const { return classes_[grid_.linear(i, j)]; }
  /// Out-of-box indices report Inactive.
  NodeClass at_or_inactive(int i, int j) const {
    return grid_.contains(i, j) ? at(i, j) : NodeClass::Inactive;
  }
  bool active(int i, int j) const { return at_or_inactive(i, j) != NodeClass::Inactive; }

  int inside_count() const { return n_inside_; }
  int ghost_count() const { return n_ghost_; }
  int row_count() const { return n_inside_ + n_ghost_; }

  /// Row of an active node, -1 for inactive or out of box.
  int row_of(int i, int j) const { return grid_.contains(i, j) ? row_of_node_[grid_.linear(i, j)] : -1; }
  NodeIndex node_of(int row) const { return grid_.unlinear(node_of_row_[std::size_t(row)]); }
  std::size_t linear_of(int row) const { return node_of_row_[std::size_t(row)]; }
  bool is_ghost_row(int row) const { return row >= n_inside_; }

  /// East, west, north, south rows of every inside row.
  const std::vector<std::array<int, 4>>& inside_neighbours() const { return neighbours_; }
  const std::vector<NodeClass>& classes() const { return classes_; }

 private:
  CartesianGrid grid_;
  std::vector<NodeClass> classes_;
  std::vector<int> row_of_node_;
  std::vector<std::size_t> node_of_row_;
  std::vector<std::array<int, 4>> neighbours_;
  int n_inside_ = 0;
  int n_ghost_ = 0;
};

DomainClassification classify(const LevelSetField& phi);

/// Unit normal from central differences of phi at an interior node.
Vec2 node_normal(const LevelSetField& phi, int i, int j);

/// Normal usable anywhere on the box: central differences where possible,
/// one-sided at the edges. Returns {0, 0} when the gradient vanishes.
Vec2 node_normal_or_zero(const LevelSetField& phi, int i, int j);

enum class BoundaryKind : std::uint8_t { Dirichlet, Neumann };

/// Interpolation actually used by a closure. Biquadratic is the tensor-product
/// rule on a full 3x3 block. When no full block around the ghost is active, a
/// least-squares quadratic on the active part of a block (at least 7 nodes)
/// keeps exactness on quadratics. Coarse multigrid levels may further fall
/// back to bilinear or to the ghost value itself.
enum class ClosureOrder : std::uint8_t { Biquadratic, QuadraticFit, Bilinear, Nearest };

enum class ClosurePolicy : std::uint8_t { Strict, Degrade };

/// Boundary closure attached to one ghost node.
///
/// Stencil slot k = 3 ky + kx holds node (base.i - mx kx, base.j - my ky).
/// Normally base is the ghost itself and (mx, my) are the signs of the normal,
/// so the stencil extends in the upwind direction. Where that block leaves the
/// active set (normal nearly parallel to an axis, boundary nearly tangent to a
/// grid line) the tangential axis is re-centred on the ghost or flipped.
/// Fractions theta are measured from node (base.i - mx, base.j - my), so
/// theta = 1 puts the boundary point on the base node.
struct GhostClosure {
  NodeIndex ghost;
  NodeIndex base;
  int ghost_slot = 0;
  Vec2 normal;
  int mx = 1;
  int my = 1;
  Vec2 inner_point;
  double alpha = 1.0;
  Vec2 boundary_point;
  double theta_x = 1.0;
  double theta_y = 1.0;
  double phi_at_boundary = 0.0;
  ClosureOrder order = ClosureOrder::Biquadratic;
  std::array<NodeIndex, 9> stencil{};
  std::array<bool, 9> used{};
  std::array<double, 9> dirichlet{};
  std::array<double, 9> neumann{};
  Vec2 interpolated_normal;

  double dirichlet_diagonal() const { return dirichlet[std::size_t(ghost_slot)]; }
  double neumann_diagonal() const { return neumann[std::size_t(ghost_slot)]; }
};

inline constexpr double kBisectionTolerance = 1e-6;

GhostClosure project_to_boundary(const LevelSetField& phi, const DomainClassification& cls, NodeIndex ghost,
                                 ClosurePolicy policy = ClosurePolicy::Strict);

/// Closures for every ghost, indexed by ghost ordinal (row - inside_count).
std::vector<GhostClosure> build_closures(const LevelSetField& phi, const DomainClassification& cls,
                                         ClosurePolicy policy = ClosurePolicy::Strict);

/// 1D quadratic weights for nodes {x_i, x_{i-m}, x_{i-2m}} at fraction theta.
std::array<double, 3> quadratic_weights(double theta);
/// Derivative of `quadratic_weights` with respect to theta.
std::array<double, 3> quadratic_slopes(double theta);

/// Coefficient of the ghost unknown in the relaxation update, |1 - tau * diag|.
/// For upwind stencils diag is the closed-form bound for each boundary kind;
/// for re-centred stencils it is the actual diagonal coefficient.
double relaxation_bracket(const GhostClosure& g, BoundaryKind kind, double tau, double h);

struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;  // row-major, row 0 at the top
  std::uint8_t at(int col, int row) const { return pixels[std::size_t(row) * std::size_t(width) + std::size_t(col)]; }
};

GrayImage read_image(const std::string& path);  // PGM (P2/P5) or 8-bit PNG
void write_pgm(const GrayImage& image, const std::string& path);

inline constexpr int kDefaultSmoothingSteps = 10;

/// Dark pixels become phi = -1, light pixels +1, then `smoothing_steps`
/// explicit heat steps with pseudo-time h^2/8. When the image is finer than
/// the node lattice each node takes the mean over its pixel footprint.
LevelSetField image_to_levelset(const GrayImage& image, const CartesianGrid& grid,
                                int smoothing_steps = kDefaultSmoothingSteps);

/// First-order Godunov iteration of phi_t = sgn(phi0) (1 - |grad phi|), step h/2.
LevelSetField reinitialize(const LevelSetField& phi, int steps);

}  // namespace sulfation
