#pragma once

#include <cmath>
#include <vector>

#include "sulfation/discretization.hpp"

namespace sulfation::testing {

// Solution of J x = b by Gaussian elimination with partial pivoting, laid out
// as [s rows, c rows].
inline std::vector<double> dense_solve(const JacobianBlocks& J, const std::vector<double>& bs, const std::vector<double>& bc) {
  const int n = J.rows, m = 2 * n;
  std::vector<double> A(std::size_t(m) * std::size_t(m), 0.0), x(static_cast<std::size_t>(m), 0.0);
  auto at = [&](int i, int j) -> double& { return A[std::size_t(i) * std::size_t(m) + std::size_t(j)]; };
  for (int r = 0; r < n; ++r) {
    for (const auto& e : J.row(JacobianBlocks::Block::SS, r)) at(r, e.col) += e.value;
    for (const auto& e : J.row(JacobianBlocks::Block::SC, r)) at(r, n + e.col) += e.value;
    at(n + r, r) = J.cs[std::size_t(r)];
    at(n + r, n + r) = J.cc[std::size_t(r)];
    x[std::size_t(r)] = bs[std::size_t(r)];
    x[std::size_t(n + r)] = bc[std::size_t(r)];
  }
  for (int k = 0; k < m; ++k) {
    int p = k;
    for (int i = k + 1; i < m; ++i) {
      if (std::abs(at(i, k)) > std::abs(at(p, k))) p = i;
    }
    for (int j = 0; j < m; ++j) std::swap(at(k, j), at(p, j));
    std::swap(x[std::size_t(k)], x[std::size_t(p)]);
    for (int i = k + 1; i < m; ++i) {
      const double f = at(i, k) / at(k, k);
      if (f == 0.0) continue;
      for (int j = k; j < m; ++j) at(i, j) -= f * at(k, j);
      x[std::size_t(i)] -= f * x[std::size_t(k)];
    }
  }
  for (int i = m - 1; i >= 0; --i) {
    double v = x[std::size_t(i)];
    for (int j = i + 1; j < m; ++j) v -= at(i, j) * x[std::size_t(j)];
    x[std::size_t(i)] = v / at(i, i);
  }
  return x;
}

}  // namespace sulfation::testing
