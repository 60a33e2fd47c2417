#include "sulfation/extension.hpp"

#include <algorithm>
#include <cmath>

#include "sulfation/discretization.hpp"

namespace sulfation {

ExtensionPlan::ExtensionPlan(const LevelSetField& phi, const std::vector<char>& known_in,
                             const std::vector<std::size_t>& targets) {
  const CartesianGrid& g = phi.grid();
  std::vector<char> known = known_in;
  targets_ = targets;
  std::stable_sort(targets_.begin(), targets_.end(),
                   [&](std::size_t a, std::size_t b) { return phi.values()[a] < phi.values()[b]; });
  offsets_.push_back(0);
  auto is_known = [&](int i, int j) { return g.contains(i, j) && known[g.linear(i, j)]; };

  for (std::size_t t : targets_) {
    const NodeIndex n = g.unlinear(t);
    const Vec2 nrm = node_normal_or_zero(phi, n.i, n.j);
    const int mx = nrm.x >= 0.0 ? 1 : -1;
    const int my = nrm.y >= 0.0 ? 1 : -1;
    std::vector<Source> src;
    if (std::abs(nrm.x) > 0.0 && is_known(n.i - mx, n.j)) src.push_back({g.linear(n.i - mx, n.j), std::abs(nrm.x)});
    if (std::abs(nrm.y) > 0.0 && is_known(n.i, n.j - my)) src.push_back({g.linear(n.i, n.j - my), std::abs(nrm.y)});
    if (src.empty()) {
      for (auto [di, dj] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}}) {
        if (is_known(n.i + di, n.j + dj)) src.push_back({g.linear(n.i + di, n.j + dj), 1.0});
      }
    }
    if (src.empty()) {
      for (auto [di, dj] : {std::pair{1, 1}, {-1, 1}, {1, -1}, {-1, -1}}) {
        if (is_known(n.i + di, n.j + dj)) src.push_back({g.linear(n.i + di, n.j + dj), 1.0});
      }
    }
    double sum = 0.0;
    for (const Source& s : src) sum += s.weight;
    for (Source& s : src) {
      s.weight /= sum;
      sources_.push_back(s);
    }
    offsets_.push_back(sources_.size());
    if (!src.empty()) known[t] = 1;
  }
}

void ExtensionPlan::apply(std::vector<double>& values) const {
  for (std::size_t k = 0; k < targets_.size(); ++k) {
    double v = 0.0;
    for (std::size_t q = offsets_[k]; q < offsets_[k + 1]; ++q) v += sources_[q].weight * values[sources_[q].node];
    values[targets_[k]] = v;
  }
}

std::vector<std::size_t> inactive_band(const DomainClassification& cls, int width) {
  const CartesianGrid& g = cls.grid();
  const int N = g.intervals();
  std::vector<std::size_t> out;
  for (int j = 0; j <= N; ++j) {
    for (int i = 0; i <= N; ++i) {
      if (cls.at(i, j) != NodeClass::Inactive) continue;
      bool near = false;
      for (int dj = -width; dj <= width && !near; ++dj) {
        for (int di = -width; di <= width && !near; ++di) near = cls.active(i + di, j + dj);
      }
      if (near) out.push_back(g.linear(i, j));
    }
  }
  return out;
}

void extrapolate_initial_data(const Domain& domain, std::vector<double>& field) {
  const DomainClassification& cls = domain.classes();
  const CartesianGrid& g = domain.grid();
  const LevelSetField& phi = domain.phi();
  const double h = g.spacing();
  if (field.size() != std::size_t(cls.row_count())) {
    throw SolverError(ErrorCode::DimensionMismatch, "field length does not match the row count");
  }
  auto inside = [&](int i, int j) { return cls.at_or_inactive(i, j) == NodeClass::Inside; };
  auto val = [&](int i, int j) { return field[std::size_t(cls.row_of(i, j))]; };

  // Normal derivative at inside nodes: central differences where both axis
  // neighbours are inside, one-sided otherwise.
  std::vector<double> un(g.node_count(), 0.0);
  std::vector<char> known(g.node_count(), 0);
  for (int r = 0; r < cls.inside_count(); ++r) {
    const NodeIndex n = cls.node_of(r);
    const Vec2 nrm = node_normal_or_zero(phi, n.i, n.j);
    auto partial = [&](int di, int dj) {
      const bool p = inside(n.i + di, n.j + dj), m = inside(n.i - di, n.j - dj);
      const double u0 = val(n.i, n.j);
      if (p && m) return (val(n.i + di, n.j + dj) - val(n.i - di, n.j - dj)) / (2.0 * h);
      if (p) return (val(n.i + di, n.j + dj) - u0) / h;
      if (m) return (u0 - val(n.i - di, n.j - dj)) / h;
      return 0.0;
    };
    un[g.linear(n.i, n.j)] = nrm.x * partial(1, 0) + nrm.y * partial(0, 1);
    known[g.linear(n.i, n.j)] = 1;
  }
  std::vector<std::size_t> ghosts;
  for (int r = cls.inside_count(); r < cls.row_count(); ++r) ghosts.push_back(cls.linear_of(r));
  ExtensionPlan(phi, known, ghosts).apply(un);

  // Linear extension: solve n . grad u = u_n at each ghost with upwind differences.
  std::vector<std::size_t> order = ghosts;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return phi.values()[a] < phi.values()[b]; });
  std::vector<double> u(g.node_count(), 0.0);
  for (int r = 0; r < cls.inside_count(); ++r) u[cls.linear_of(r)] = field[std::size_t(r)];
  auto have = [&](int i, int j) { return g.contains(i, j) && known[g.linear(i, j)]; };
  for (std::size_t k : order) {
    const NodeIndex n = g.unlinear(k);
    const Vec2 nrm = node_normal_or_zero(phi, n.i, n.j);
    const int mx = nrm.x >= 0.0 ? 1 : -1;
    const int my = nrm.y >= 0.0 ? 1 : -1;
    double num = 0.0, den = 0.0;
    if (nrm.x != 0.0 && have(n.i - mx, n.j)) {
      num += std::abs(nrm.x) * u[g.linear(n.i - mx, n.j)];
      den += std::abs(nrm.x);
    }
    if (nrm.y != 0.0 && have(n.i, n.j - my)) {
      num += std::abs(nrm.y) * u[g.linear(n.i, n.j - my)];
      den += std::abs(nrm.y);
    }
    if (den > 0.0) {
      u[k] = (num + h * un[k]) / den;
    } else {
      // No upwind data: step from any known axis neighbour along the normal.
      double sum = 0.0;
      int cnt = 0;
      for (auto [di, dj] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}}) {
        if (!have(n.i + di, n.j + dj)) continue;
        sum += u[g.linear(n.i + di, n.j + dj)] - h * (di * nrm.x + dj * nrm.y) * un[k];
        ++cnt;
      }
      u[k] = cnt ? sum / cnt : 0.0;
    }
    known[k] = 1;
  }
  for (int r = cls.inside_count(); r < cls.row_count(); ++r) field[std::size_t(r)] = u[cls.linear_of(r)];
}

}  // namespace sulfation
