#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "sulfation/discretization.hpp"
#include "sulfation/manufactured.hpp"

using namespace sulfation;

namespace {

double disk(double x, double y) { return std::hypot(x - 0.1, y + 0.05) - 1.2; }

// The six quadratic monomials and their gradients.
double monomial(int k, double x, double y) {
  switch (k) {
    case 0: return 1.0;
    case 1: return x;
    case 2: return y;
    case 3: return x * y;
    case 4: return x * x;
    default: return y * y;
  }
}

Vec2 monomial_grad(int k, double x, double y) {
  switch (k) {
    case 0: return {0.0, 0.0};
    case 1: return {1.0, 0.0};
    case 2: return {0.0, 1.0};
    case 3: return {y, x};
    case 4: return {2.0 * x, 0.0};
    default: return {0.0, 2.0 * y};
  }
}

double apply_row(const CartesianGrid& g, const GhostClosure& c, const std::array<double, 9>& row, int k) {
  double v = 0.0;
  for (std::size_t q = 0; q < 9; ++q) {
    if (!c.used[q]) continue;
    v += row[q] * monomial(k, g.x(c.stencil[q].i), g.y(c.stencil[q].j));
  }
  return v;
}

}  // namespace

TEST_CASE("classification puts inside rows before ghosts in lexicographic order") {
  const CartesianGrid g(2.0, 32);
  const auto phi = LevelSetField::sample(g, disk);
  const auto cls = classify(phi);
  int inside = 0, ghost = 0;
  for (int j = 0; j <= 32; ++j) {
    for (int i = 0; i <= 32; ++i) {
      const bool in = phi(i, j) < 0.0;
      bool touches = false;
      for (auto [di, dj] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}}) {
        if (g.contains(i + di, j + dj) && phi(i + di, j + dj) < 0.0) touches = true;
      }
      const NodeClass want = in ? NodeClass::Inside : touches ? NodeClass::Ghost : NodeClass::Inactive;
      CHECK(cls.at(i, j) == want);
      inside += want == NodeClass::Inside;
      ghost += want == NodeClass::Ghost;
    }
  }
  CHECK(cls.inside_count() == inside);
  CHECK(cls.ghost_count() == ghost);
  int prev = -1;
  for (int r = 0; r < cls.row_count(); ++r) {
    const NodeIndex n = cls.node_of(r);
    CHECK(cls.row_of(n.i, n.j) == r);
    CHECK(cls.is_ghost_row(r) == (cls.at(n.i, n.j) == NodeClass::Ghost));
    if (r == cls.inside_count()) prev = -1;
    const int key = int(g.linear(n.i, n.j));
    CHECK(key > prev);
    prev = key;
  }
}

TEST_CASE("classification rejects domains without a boundary on the grid") {
  const CartesianGrid g(1.0, 8);
  CHECK_THROWS_AS(classify(LevelSetField::sample(g, [](double, double) { return 1.0; })), SolverError);
  try {
    classify(LevelSetField::sample(g, [](double, double) { return -1.0; }));
    FAIL("expected AllInside");
  } catch (const SolverError& e) {
    CHECK(e.code() == ErrorCode::AllInside);
  }
}

TEST_CASE("1D quadratic weights reproduce quadratics and slopes are their derivatives") {
  for (double t : {0.05, 0.3, 0.5, 0.77, 1.0}) {
    const auto w = quadratic_weights(t);
    const auto dw = quadratic_slopes(t);
    // Nodes at offsets +1, 0, -1 from the reference; the point sits at offset t.
    const std::array<double, 3> x{1.0, 0.0, -1.0};
    for (int p = 0; p <= 2; ++p) {
      double v = 0.0, dv = 0.0;
      for (int k = 0; k < 3; ++k) {
        v += w[std::size_t(k)] * std::pow(x[std::size_t(k)], p);
        dv += dw[std::size_t(k)] * std::pow(x[std::size_t(k)], p);
      }
      CHECK(v == doctest::Approx(std::pow(t, p)).epsilon(1e-14));
      CHECK(dv == doctest::Approx(p == 0 ? 0.0 : p * std::pow(t, p - 1)).epsilon(1e-14));
    }
  }
}

TEST_CASE("ghost closures reproduce quadratics at the boundary point") {
  for (auto shape : {circle_levelset, square_discs_levelset}) {
    for (int N : {32, 64, 128}) {
      const CartesianGrid g(2.0, N);
      const auto phi = LevelSetField::sample(g, shape);
      const auto cls = classify(phi);
      for (const GhostClosure& c : build_closures(phi, cls)) {
        CHECK(c.order != ClosureOrder::Bilinear);
        CHECK(c.order != ClosureOrder::Nearest);
        const Vec2 B = c.boundary_point;
        for (int k = 0; k < 6; ++k) {
          CHECK(std::abs(apply_row(g, c, c.dirichlet, k) - monomial(k, B.x, B.y)) < 1e-12);
          const Vec2 grad = monomial_grad(k, B.x, B.y);
          const double dn = grad.x * c.interpolated_normal.x + grad.y * c.interpolated_normal.y;
          CHECK(std::abs(apply_row(g, c, c.neumann, k) - dn) < 1e-9 * std::max(1.0, 1.0 / g.spacing()));
        }
        for (std::size_t q = 0; q < 9; ++q) {
          if (c.used[q]) CHECK(cls.active(c.stencil[q].i, c.stencil[q].j));
        }
        CHECK(c.stencil[std::size_t(c.ghost_slot)] == c.ghost);
        CHECK(norm(c.interpolated_normal) == doctest::Approx(1.0).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("boundary points lie on the analytic circle") {
  const int N = 64;
  const CartesianGrid g(2.0, N);
  const double h = g.spacing();
  const auto phi = LevelSetField::sample(g, circle_levelset);
  const auto cls = classify(phi);
  double worst = 0.0;
  for (const GhostClosure& c : build_closures(phi, cls)) {
    worst = std::max(worst, std::abs(circle_levelset(c.boundary_point.x, c.boundary_point.y)));
    // B lies on the segment from the ghost to the inner point.
    const Vec2 G = g.coordinate(c.ghost);
    const Vec2 P = c.inner_point;
    const Vec2 B = c.boundary_point;
    const double cross = (B.x - G.x) * (P.y - G.y) - (B.y - G.y) * (P.x - G.x);
    CHECK(std::abs(cross) < 1e-12);
    CHECK((B.x - G.x) * (P.x - G.x) + (B.y - G.y) * (P.y - G.y) >= 0.0);
  }
  CHECK(worst < 10.0 * h * h * h);
}

TEST_CASE("strict closures refuse features smaller than a stencil, degraded ones fall back") {
  const CartesianGrid g(2.0, 16);
  const auto phi = LevelSetField::sample(g, [](double x, double y) { return std::hypot(x - 0.01, y + 0.02) - 0.1; });
  const auto cls = classify(phi);
  try {
    build_closures(phi, cls, ClosurePolicy::Strict);
    FAIL("expected StencilEscape");
  } catch (const SolverError& e) {
    CHECK(e.code() == ErrorCode::StencilEscape);
  }
  const auto loose = build_closures(phi, cls, ClosurePolicy::Degrade);
  CHECK(loose.size() == std::size_t(cls.ghost_count()));
  for (const GhostClosure& c : loose) {
    CHECK(std::abs(apply_row(g, c, c.dirichlet, 0) - 1.0) < 1e-12);
    CHECK(std::abs(apply_row(g, c, c.neumann, 0)) < 1e-9);
  }
}

TEST_CASE("ghost relaxation bracket is below one for the default parameters") {
  const CartesianGrid g(2.0, 64);
  const double h = g.spacing();
  for (auto shape : {circle_levelset, square_discs_levelset}) {
    const auto phi = LevelSetField::sample(g, shape);
    for (const GhostClosure& c : build_closures(phi, classify(phi))) {
      if (c.ghost_slot != 0 || c.order != ClosureOrder::Biquadratic) continue;
      CHECK(relaxation_bracket(c, BoundaryKind::Dirichlet, 0.9, h) < 1.0);
      CHECK(relaxation_bracket(c, BoundaryKind::Neumann, 0.9 * 2.0 * std::sqrt(2.0) / 3.0 * h, h) < 1.0);
    }
  }
}

TEST_CASE("node normals of a circle point radially") {
  const CartesianGrid g(2.0, 64);
  const auto phi = LevelSetField::sample(g, [](double x, double y) { return x * x + y * y - 1.0; });
  for (auto [i, j] : {std::pair{48, 32}, {32, 50}, {45, 45}, {20, 12}}) {
    const Vec2 n = node_normal(phi, i, j);
    const double r = std::hypot(g.x(i), g.y(j));
    CHECK(n.x == doctest::Approx(g.x(i) / r).epsilon(1e-12));
    CHECK(n.y == doctest::Approx(g.y(j) / r).epsilon(1e-12));
  }
}

TEST_CASE("image level set matches the drawn disk and PGM round-trips") {
  GrayImage img;
  img.width = img.height = 200;
  img.pixels.assign(200 * 200, 255);
  for (int r = 0; r < 200; ++r) {
    for (int c = 0; c < 200; ++c) {
      const double x = (c + 0.5) / 100.0 - 1.0, y = 1.0 - (r + 0.5) / 100.0;
      if (std::hypot(x, y) < 0.6) img.pixels[std::size_t(r * 200 + c)] = 0;
    }
  }
  const auto path = std::filesystem::temp_directory_path() / "sulfation_disk_test.pgm";
  write_pgm(img, path.string());
  const GrayImage back = read_image(path.string());
  std::filesystem::remove(path);
  CHECK(back.width == 200);
  CHECK(back.pixels == img.pixels);

  const CartesianGrid g(1.0, 64);
  const auto phi = image_to_levelset(back, g);
  int wrong = 0;
  for (int j = 0; j <= 64; ++j) {
    for (int i = 0; i <= 64; ++i) {
      const double r = std::hypot(g.x(i), g.y(j));
      if (std::abs(r - 0.6) < 2.0 * g.spacing()) continue;
      wrong += (phi(i, j) < 0.0) != (r < 0.6);
    }
  }
  CHECK(wrong == 0);

  GrayImage flat;
  flat.width = flat.height = 4;
  flat.pixels.assign(16, 0);
  CHECK_THROWS_AS(image_to_levelset(flat, g), SolverError);
}

TEST_CASE("reinitialization keeps the zero set and makes the gradient unit") {
  const CartesianGrid g(2.0, 64);
  const double h = g.spacing();
  const auto phi = LevelSetField::sample(g, [](double x, double y) { return 3.0 * (x * x + y * y - 1.0); });
  const auto re = reinitialize(phi, 80);
  for (int j = 1; j < 64; ++j) {
    for (int i = 1; i < 64; ++i) {
      const double r = std::hypot(g.x(i), g.y(j));
      if (std::abs(r - 1.0) > 3.0 * h || r < 0.5) continue;
      CHECK(std::abs(re(i, j) - (r - 1.0)) < h);
      const double gx = (re(i + 1, j) - re(i - 1, j)) / (2 * h), gy = (re(i, j + 1) - re(i, j - 1)) / (2 * h);
      CHECK(std::hypot(gx, gy) == doctest::Approx(1.0).epsilon(0.1));
    }
  }
}
