// Acceptance criteria: one PASS/FAIL line per criterion, nonzero exit if any fails.
// Usage: sulfation_acceptance [--only K]

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "sulfation/harness.hpp"
#include "sulfation/multigrid.hpp"

using namespace sulfation;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// ---- 1. Jacobian against central differences of the residual

Verdict jacobian_check() {
  const auto t0 = std::chrono::steady_clock::now();
  const ManufacturedCase tc = manufactured_case("1");
  auto dom = std::make_shared<const Domain>(LevelSetField::sample(CartesianGrid(tc.half_width, 16), tc.levelset));
  State prev;
  prev.s = sample_rows(*dom, [](double x, double y) { return ExactPair::s(x, y, 0.0); });
  prev.c = sample_rows(*dom, [](double x, double y) { return ExactPair::c(x, y, 0.0); });
  const StepSystem sys(tc.problem(), dom, prev, dom->grid().spacing());
  const std::size_t n = prev.s.size();
  const double eps = 1e-6;
  std::mt19937 rng(20);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  double worst = 0.0;
  for (int dir = 0; dir < 20; ++dir) {
    // A fresh random state per direction.
    State w = prev;
    for (auto& v : w.s) v = 0.5 + 0.5 * U(rng);
    for (auto& v : w.c) v = 5.0 + 4.0 * U(rng);
    const JacobianBlocks J = sys.jacobian(w);
    std::vector<double> vs(n), vc(n), ys, yc;
    for (auto& v : vs) v = U(rng);
    for (auto& v : vc) v = U(rng);
    State p = w, m = w;
    for (std::size_t q = 0; q < n; ++q) {
      p.s[q] += eps * vs[q];
      p.c[q] += eps * vc[q];
      m.s[q] -= eps * vs[q];
      m.c[q] -= eps * vc[q];
    }
    const auto Fp = sys.residual(p), Fm = sys.residual(m);
    J.apply(vs, vc, ys, yc);
    double num = 0.0, den = 0.0;
    for (std::size_t q = 0; q < n; ++q) {
      num = std::max({num, std::abs(ys[q] - (Fp[q] - Fm[q]) / (2 * eps)),
                      std::abs(yc[q] - (Fp[n + q] - Fm[n + q]) / (2 * eps))});
      den = std::max({den, std::abs(ys[q]), std::abs(yc[q])});
    }
    worst = std::max(worst, num / den);
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {worst < 1e-6 && secs < 10.0, fmt("worst relative mismatch %.3g over 20 directions (< 1e-6), %.2f s (< 10 s)",
                                           worst, secs)};
}

// ---- 2, 3. Accuracy sweeps against the published error tables

struct PrintedTable {
  std::vector<int> sizes;
  // Columns in ErrorReport naming order.
  std::map<std::string, std::vector<double>> values;
};

PrintedTable dirichlet_table() {
  PrintedTable t;
  t.sizes = {16, 32, 64, 128, 256};
  t.values["l1_s"] = {2.00e-6, 4.03e-7, 7.38e-8, 1.43e-8, 3.03e-9};
  t.values["linf_s"] = {1.93e-5, 4.67e-6, 8.35e-7, 1.42e-7, 1.95e-8};
  t.values["l1_grad_s"] = {1.20e-3, 2.88e-4, 7.03e-5, 1.73e-5, 4.30e-6};
  t.values["linf_grad_s"] = {1.30e-3, 3.25e-4, 8.13e-5, 2.03e-5, 5.08e-6};
  t.values["l1_c"] = {2.04e-6, 4.60e-7, 8.52e-8, 1.63e-8, 3.45e-9};
  t.values["linf_c"] = {1.92e-5, 5.10e-6, 1.12e-6, 1.98e-7, 2.80e-8};
  t.values["l1_grad_c"] = {6.36e-4, 1.60e-4, 4.06e-5, 1.02e-5, 2.57e-6};
  t.values["linf_grad_c"] = {6.89e-4, 2.08e-4, 5.74e-5, 1.52e-5, 3.92e-6};
  return t;
}

PrintedTable neumann_table() {
  PrintedTable t;
  t.sizes = {16, 32, 64, 128, 256};
  t.values["l1_s"] = {7.43e-5, 1.53e-5, 2.14e-6, 1.45e-7, 1.11e-7};
  t.values["linf_s"] = {9.10e-5, 2.41e-5, 4.79e-6, 6.37e-7, 1.59e-7};
  t.values["l1_grad_s"] = {1.19e-3, 2.89e-4, 7.01e-5, 1.73e-5, 4.31e-6};
  t.values["linf_grad_s"] = {1.29e-3, 3.26e-4, 8.11e-5, 2.03e-5, 5.44e-6};
  t.values["l1_c"] = {1.82e-5, 3.00e-6, 5.63e-7, 8.83e-8, 4.53e-8};
  t.values["linf_c"] = {5.37e-5, 1.02e-5, 5.85e-6, 1.50e-6, 4.59e-7};
  t.values["l1_grad_c"] = {6.35e-4, 1.60e-4, 4.06e-5, 1.03e-5, 2.62e-6};
  t.values["linf_grad_c"] = {6.88e-4, 2.09e-4, 5.92e-5, 1.92e-5, 6.02e-6};
  return t;
}

Verdict accuracy_check(const std::string& id, const PrintedTable& table, int magnitude_max_N) {
  const ErrorReport rep = run_accuracy(manufactured_case(id), table.sizes);
  const double os = rep.fitted_order("l1_s"), oc = rep.fitted_order("l1_c");
  const double ogs = rep.fitted_order("l1_grad_s"), ogc = rep.fitted_order("l1_grad_c");
  bool pass = os >= 2.0 && oc >= 2.0 && ogs >= 1.85 && ogs <= 2.15 && ogc >= 1.85 && ogc <= 2.15;
  int checked = 0, within = 0;
  double worst_ratio = 1.0;
  std::string worst_at;
  for (const auto& [name, printed] : table.values) {
    const auto mine = rep.column(name);
    for (std::size_t k = 0; k < table.sizes.size(); ++k) {
      if (table.sizes[k] > magnitude_max_N) continue;
      const double r = std::max(mine[k] / printed[k], printed[k] / mine[k]);
      ++checked;
      within += r <= 3.0;
      if (r > worst_ratio) {
        worst_ratio = r;
        worst_at = fmt("%s N=%d: %.3g vs %.3g", name.c_str(), table.sizes[k], mine[k], printed[k]);
      }
    }
  }
  pass = pass && within == checked;
  return {pass, fmt("L1 orders s %.3f c %.3f (>= 2.0), gradient s %.3f c %.3f (in [1.85, 2.15]); "
                    "%d/%d table values within 3x, worst %.3gx at %s",
                    os, oc, ogs, ogc, within, checked, worst_ratio, worst_at.c_str())};
}

// ---- 4, 5, 6. Reaction-front runs

const EfficiencyReport& reaction_run(const std::string& id, int N) {
  static std::map<std::pair<std::string, int>, EfficiencyReport> cache;
  auto it = cache.find({id, N});
  if (it == cache.end()) it = cache.emplace(std::pair{id, N}, run_efficiency(reaction_case(id), N)).first;
  return it->second;
}

Verdict multigrid_check() {
  bool pass = true;
  std::string detail;
  for (int N : {64, 256}) {
    std::vector<double> rho = post_warmup_rho(reaction_run("3", N), 3);
    if (rho.empty()) return {false, fmt("N=%d: no post-warm-up cycles", N)};
    std::sort(rho.begin(), rho.end());
    const double median = rho.size() % 2 ? rho[rho.size() / 2] : 0.5 * (rho[rho.size() / 2 - 1] + rho[rho.size() / 2]);
    const double band = double(std::count_if(rho.begin(), rho.end(), [](double r) { return r >= 0.06 && r <= 0.2; })) /
                        double(rho.size());
    pass = pass && median <= 0.20 && band >= 0.5;
    detail += fmt("%sN=%d median rho %.3f (<= 0.20), %.0f%% in [0.06, 0.2] (>= 50%%), %zu cycles", detail.empty() ? "" : "; ",
                  N, median, 100.0 * band, rho.size());
  }
  return {pass, detail};
}

Verdict newton_check() {
  bool pass = true;
  std::string detail;
  for (const char* id : {"3", "4"}) {
    const EfficiencyReport& r = reaction_run(id, 64);
    pass = pass && r.max_newton_iterations <= 25 && r.max_final_residual < 1e-9;
    detail += fmt("%sTest %s: max %d iterations (<= 25), final residual %.2e (< 1e-9)", detail.empty() ? "" : "; ", id,
                  r.max_newton_iterations, r.max_final_residual);
  }
  return {pass, detail};
}

Verdict invariants_check() {
  const double tol = 1e-8;
  bool pass = true;
  std::string detail;
  for (const char* id : {"3", "4"}) {
    const EfficiencyReport& r = reaction_run(id, 64);
    const bool ok = r.max_c_increase <= tol && r.s_min >= -tol && r.s_max <= 1.0 + tol && r.c_min >= -tol &&
                    r.c_max <= 10.0 + tol;
    pass = pass && ok;
    detail += fmt("%sTest %s: s in [%.3g, %.6g], c in [%.3g, %.6g], max c increase %.2e", detail.empty() ? "" : "; ", id,
                  r.s_min, r.s_max, r.c_min, r.c_max, r.max_c_increase);
  }
  return {pass, detail + " (tolerance 1e-8, s <= 1, c <= 10)"};
}

// ---- 7. Ghost closures

double monomial(int k, double x, double y) {
  const std::array<double, 6> m{1.0, x, y, x * y, x * x, y * y};
  return m[std::size_t(k)];
}

Verdict closure_check() {
  const int N = 64;
  double dirichlet_err = 0.0, neumann_const = 0.0, projection = 0.0;
  int rows = 0;
  for (auto shape : {circle_levelset, square_discs_levelset}) {
    const CartesianGrid g(2.0, N);
    const auto phi = LevelSetField::sample(g, shape);
    for (const GhostClosure& c : build_closures(phi, classify(phi))) {
      ++rows;
      double sum = 0.0;
      for (int k = 0; k < 6; ++k) {
        double v = 0.0;
        for (std::size_t q = 0; q < 9; ++q) {
          if (c.used[q]) v += c.dirichlet[q] * monomial(k, g.x(c.stencil[q].i), g.y(c.stencil[q].j));
        }
        dirichlet_err = std::max(dirichlet_err, std::abs(v - monomial(k, c.boundary_point.x, c.boundary_point.y)));
      }
      for (std::size_t q = 0; q < 9; ++q) sum += c.used[q] ? c.neumann[q] : 0.0;
      neumann_const = std::max(neumann_const, std::abs(sum));
      if (shape == circle_levelset) {
        projection = std::max(projection, std::abs(circle_levelset(c.boundary_point.x, c.boundary_point.y)));
      }
    }
  }
  const double h = 4.0 / N, bound = 10 * h * h * h;
  return {dirichlet_err < 1e-12 && neumann_const < 1e-12 && projection < bound,
          fmt("%d ghost rows: Dirichlet monomial error %.2e (< 1e-12), Neumann row sum %.2e (< 1e-12), "
              "circle projection %.2e (< 10h^3 = %.2e)",
              rows, dirichlet_err, neumann_const, projection, bound)};
}

// ---- 8. Restriction next to the boundary

Verdict restriction_check() {
  using Stencil = std::array<std::array<double, 3>, 3>;
  // Printed north row first; the stencil is indexed [dy+1][dx+1].
  auto printed = [](std::array<std::array<double, 3>, 3> rows) {
    Stencil w{};
    for (std::size_t a = 0; a < 3; ++a) {
      for (std::size_t b = 0; b < 3; ++b) w[2 - a][b] = rows[a][b] / 16.0;
    }
    return w;
  };
  const CartesianGrid fine(1.0, 16);
  auto mask = [&](bool east, bool north) {
    std::vector<char> inc(fine.node_count(), 0);
    for (int dj = -1; dj <= 1; ++dj) {
      for (int di = -1; di <= 1; ++di) {
        if ((di == 1 && !east) || (dj == 1 && !north)) continue;
        inc[fine.linear(8 + di, 8 + dj)] = 1;
      }
    }
    return inc;
  };
  const bool edge = restriction_stencil(fine, mask(false, true), 4, 4) == printed({{{2, 2, 0}, {4, 4, 0}, {2, 2, 0}}});
  const bool corner = restriction_stencil(fine, mask(false, false), 4, 4) == printed({{{0, 0, 0}, {4, 4, 0}, {4, 4, 0}}});
  const bool full = restriction_stencil(fine, mask(true, true), 4, 4) == printed({{{1, 2, 1}, {2, 4, 2}, {1, 2, 1}}});
  return {edge && corner && full, fmt("edge pattern %s, corner pattern %s, interior full weighting %s",
                                      edge ? "exact" : "differs", corner ? "exact" : "differs",
                                      full ? "exact" : "differs")};
}

// ---- 9. Image-driven domains

// Raster on the ingestion lattice: each of the N+1 node cells gets `per_node`^2
// pixels, so the image spans [-L - h/2, L + h/2].
GrayImage draw(int N, int per_node, const std::function<bool(double, double)>& dark) {
  const int pixels = (N + 1) * per_node;
  const double span = 1.0 + 1.0 / N;
  GrayImage img;
  img.width = img.height = pixels;
  img.pixels.resize(std::size_t(pixels) * std::size_t(pixels));
  for (int row = 0; row < pixels; ++row) {
    for (int col = 0; col < pixels; ++col) {
      const double x = span * (-1.0 + (col + 0.5) * 2.0 / pixels), y = span * (1.0 - (row + 0.5) * 2.0 / pixels);
      img.pixels[std::size_t(row) * std::size_t(pixels) + std::size_t(col)] = dark(x, y) ? 0 : 255;
    }
  }
  return img;
}

GeometryOptions image_options() {
  GeometryOptions opt;
  opt.N = 128;
  opt.half_width = 1.0;
  return opt;
}

// Each later {c > 5} region must lie within one cell of the earlier one.
Verdict nesting_check() {
  const GrayImage img = draw(128, 4, [](double x, double y) {
    const bool square = std::max(std::abs(x), std::abs(y)) < 0.6;
    const bool notch = std::abs(x) < 0.15 && y > 0.1;
    return square && !notch;
  });
  const GeometryRun run = run_geometry(img, image_options());
  const CartesianGrid& g = run.domain->grid();
  const int N = g.intervals();
  int violations = 0, contours = 0;
  for (std::size_t k = 0; k + 1 < run.snapshots.size(); ++k) {
    const auto before = to_lattice(*run.domain, run.snapshots[k].state.c);
    const auto after = to_lattice(*run.domain, run.snapshots[k + 1].state.c);
    for (int j = 0; j <= N; ++j) {
      for (int i = 0; i <= N; ++i) {
        if (run.domain->classes().at(i, j) != NodeClass::Inside || !(after[g.linear(i, j)] > 5.0)) continue;
        bool covered = false;
        for (int dj = -1; dj <= 1 && !covered; ++dj) {
          for (int di = -1; di <= 1 && !covered; ++di) {
            if (g.contains(i + di, j + dj) && before[g.linear(i + di, j + dj)] > 5.0) covered = true;
          }
        }
        violations += !covered;
      }
    }
  }
  for (const auto& s : run.snapshots) contours += !s.contours.empty();
  const bool pass = violations == 0 && contours == int(run.snapshots.size());
  return {pass, fmt("notched square: %d nesting violations over %zu snapshots, c=5 contour present in %d",
                    violations, run.snapshots.size(), contours)};
}

// Nodes at exactly the same distance from the centre node, (i^2 + j^2 with
// several representations, e.g. 0^2 + 5^2 = 3^2 + 4^2), compared without interpolation.
Verdict symmetry_check() {
  const double R = 0.7, c0 = 10.0;
  const GrayImage img = draw(128, 4, [&](double x, double y) { return std::hypot(x, y) < R; });
  const GeometryRun run = run_geometry(img, image_options());
  const CartesianGrid& g = run.domain->grid();
  const int mid = g.intervals() / 2;
  const double rmax = R - 3 * g.spacing();
  double worst = 0.0, worst_r = 0.0, worst_t = 0.0;
  int circles = 0;
  for (const auto& snap : run.snapshots) {
    std::map<int, std::pair<double, double>> range;  // i^2 + j^2 -> (min, max)
    std::map<int, int> count;
    for (int j = 0; j <= g.intervals(); ++j) {
      for (int i = 0; i <= g.intervals(); ++i) {
        const int k = (i - mid) * (i - mid) + (j - mid) * (j - mid);
        if (std::sqrt(double(k)) * g.spacing() >= rmax) continue;
        const int row = run.domain->classes().row_of(i, j);
        if (row < 0 || row >= run.domain->classes().inside_count()) return {false, "node inside r < R - 3h is not inside"};
        const double v = snap.state.c[std::size_t(row)];
        auto [it, fresh] = range.try_emplace(k, v, v);
        it->second = {std::min(it->second.first, v), std::max(it->second.second, v)};
        ++count[k];
      }
    }
    for (const auto& [k, mm] : range) {
      if (count[k] <= 8) continue;  // a single orbit of the lattice symmetries
      ++circles;
      if (mm.second - mm.first > worst) {
        worst = mm.second - mm.first;
        worst_r = std::sqrt(double(k)) * g.spacing();
        worst_t = snap.t;
      }
    }
  }
  return {circles > 0 && worst <= 0.01 * c0,
          fmt("disk: max spread of c over %d equal-radius node sets %.3g at r=%.3f t=%.2f (<= %.2g)", circles, worst,
              worst_r, worst_t, 0.01 * c0)};
}

Verdict geometry_check() {
  const Verdict a = nesting_check(), b = symmetry_check();
  return {a.pass && b.pass, a.detail + "; " + b.detail};
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int k = 1; k < argc; ++k) {
    if (std::strcmp(argv[k], "--only") == 0 && k + 1 < argc) {
      only = std::atoi(argv[++k]);
    } else {
      std::fprintf(stderr, "usage: %s [--only K]\n", argv[0]);
      return 2;
    }
  }
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria{
      {"Jacobian vs finite differences", jacobian_check},
      {"Dirichlet accuracy", [] { return accuracy_check("1", dirichlet_table(), 256); }},
      {"Neumann accuracy", [] { return accuracy_check("1n", neumann_table(), 128); }},
      {"multigrid convergence factor", multigrid_check},
      {"Newton robustness", newton_check},
      {"physical invariants", invariants_check},
      {"ghost closures", closure_check},
      {"restriction stencils", restriction_check},
      {"image domains", geometry_check},
  };
  if (only < 0 || only > int(criteria.size())) {
    std::fprintf(stderr, "no criterion %d\n", only);
    return 2;
  }
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    if (only != 0 && int(k) + 1 != only) continue;
    Verdict v;
    try {
      v = criteria[k].second();
    } catch (const std::exception& e) {
      v = {false, std::string("error: ") + e.what()};
    }
    failed += !v.pass;
    std::printf("%s criterion %zu (%s): %s\n", v.pass ? "PASS" : "FAIL", k + 1, criteria[k].first, v.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
