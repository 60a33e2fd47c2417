#include "sulfation/contour.hpp"

#include <cmath>
#include <limits>
#include <map>

namespace sulfation {

std::vector<double> to_lattice(const Domain& domain, const std::vector<double>& rows) {
  const auto& cls = domain.classes();
  if (rows.size() != std::size_t(cls.row_count())) {
    throw SolverError(ErrorCode::DimensionMismatch, "field length does not match the row count");
  }
  std::vector<double> v(domain.grid().node_count(), std::numeric_limits<double>::quiet_NaN());
  for (int r = 0; r < cls.row_count(); ++r) v[cls.linear_of(r)] = rows[std::size_t(r)];
  return v;
}

namespace {

// Lattice edges get ids 2k (towards +x from node k) and 2k+1 (towards +y).
struct Segment {
  std::size_t a, b;  // edge ids
  Vec2 pa, pb;
};

}  // namespace

std::vector<Polyline> contour_lines(const CartesianGrid& g, const std::vector<double>& v, double level) {
  const int N = g.intervals();
  std::vector<Segment> segs;
  auto cross = [&](int i0, int j0, int i1, int j1) {
    const double f0 = v[g.linear(i0, j0)] - level, f1 = v[g.linear(i1, j1)] - level;
    const double t = f0 / (f0 - f1);
    return Vec2{g.x(i0) + t * (g.x(i1) - g.x(i0)), g.y(j0) + t * (g.y(j1) - g.y(j0))};
  };
  for (int j = 0; j < N; ++j) {
    for (int i = 0; i < N; ++i) {
      const double c[4] = {v[g.linear(i, j)], v[g.linear(i + 1, j)], v[g.linear(i + 1, j + 1)], v[g.linear(i, j + 1)]};
      bool finite = true;
      for (double x : c) finite = finite && std::isfinite(x);
      if (!finite) continue;
      int mask = 0;
      for (int k = 0; k < 4; ++k) mask |= (c[k] >= level ? 1 : 0) << k;
      if (mask == 0 || mask == 15) continue;
      // Edges: 0 bottom, 1 right, 2 top, 3 left.
      const std::size_t eid[4] = {2 * g.linear(i, j), 2 * g.linear(i + 1, j) + 1, 2 * g.linear(i, j + 1),
                                  2 * g.linear(i, j) + 1};
      const Vec2 ep[4] = {(mask & 1) != ((mask >> 1) & 1) ? cross(i, j, i + 1, j) : Vec2{},
                          ((mask >> 1) & 1) != ((mask >> 2) & 1) ? cross(i + 1, j, i + 1, j + 1) : Vec2{},
                          ((mask >> 3) & 1) != ((mask >> 2) & 1) ? cross(i, j + 1, i + 1, j + 1) : Vec2{},
                          (mask & 1) != ((mask >> 3) & 1) ? cross(i, j, i, j + 1) : Vec2{}};
      auto add = [&](int e0, int e1) { segs.push_back({eid[e0], eid[e1], ep[e0], ep[e1]}); };
      const bool centre_high = (c[0] + c[1] + c[2] + c[3]) / 4.0 >= level;
      switch (mask) {
        case 1: case 14: add(3, 0); break;
        case 2: case 13: add(0, 1); break;
        case 3: case 12: add(3, 1); break;
        case 4: case 11: add(1, 2); break;
        case 6: case 9: add(0, 2); break;
        case 7: case 8: add(3, 2); break;
        case 5:
          if (centre_high) { add(3, 2); add(0, 1); } else { add(3, 0); add(1, 2); }
          break;
        case 10:
          if (centre_high) { add(3, 0); add(1, 2); } else { add(3, 2); add(0, 1); }
          break;
        default: break;
      }
    }
  }

  std::multimap<std::size_t, std::size_t> at_edge;
  for (std::size_t s = 0; s < segs.size(); ++s) {
    at_edge.emplace(segs[s].a, s);
    at_edge.emplace(segs[s].b, s);
  }
  std::vector<char> used(segs.size(), 0);
  auto next_from = [&](std::size_t edge, std::size_t self) -> std::ptrdiff_t {
    auto [lo, hi] = at_edge.equal_range(edge);
    for (auto it = lo; it != hi; ++it) {
      if (it->second != self && !used[it->second]) return std::ptrdiff_t(it->second);
    }
    return -1;
  };

  std::vector<Polyline> out;
  for (std::size_t start = 0; start < segs.size(); ++start) {
    if (used[start]) continue;
    used[start] = 1;
    std::vector<Vec2> fwd{segs[start].pa, segs[start].pb};
    std::size_t tail = segs[start].b, cur = start;
    for (std::ptrdiff_t nx; (nx = next_from(tail, cur)) >= 0;) {
      const Segment& s = segs[std::size_t(nx)];
      used[std::size_t(nx)] = 1;
      const bool forward = s.a == tail;
      fwd.push_back(forward ? s.pb : s.pa);
      tail = forward ? s.b : s.a;
      cur = std::size_t(nx);
    }
    std::size_t head = segs[start].a;
    cur = start;
    std::vector<Vec2> back;
    for (std::ptrdiff_t nx; (nx = next_from(head, cur)) >= 0;) {
      const Segment& s = segs[std::size_t(nx)];
      used[std::size_t(nx)] = 1;
      const bool forward = s.b == head;
      back.push_back(forward ? s.pa : s.pb);
      head = forward ? s.a : s.b;
      cur = std::size_t(nx);
    }
    Polyline pl;
    pl.points.assign(back.rbegin(), back.rend());
    pl.points.insert(pl.points.end(), fwd.begin(), fwd.end());
    pl.closed = head == tail && pl.points.size() > 2;
    out.push_back(std::move(pl));
  }
  return out;
}

}  // namespace sulfation
