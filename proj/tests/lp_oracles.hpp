// Copyright 2026 The scgep Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Test-only reference solvers. Nothing here touches the simplex code path:
// LPs are solved by enumerating vertices (every choice of n active
// constraints, dense Gaussian elimination), MILPs by enumerating integer
// assignments and solving the residual LP by vertex enumeration.

#ifndef SCGEP_TESTS_LP_ORACLES_HPP_
#define SCGEP_TESTS_LP_ORACLES_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <vector>

#include "scgep/milp.hpp"

namespace scgep::testing {

struct DenseLp {
  int n = 0;
  std::vector<std::vector<double>> a;
  std::vector<RowSense> sense;
  std::vector<double> b;
  std::vector<double> lower, upper, cost;
  std::vector<bool> integral;

  SparseProblem to_problem() const {
    SparseProblem p;
    for (int j = 0; j < n; ++j) {
      p.add_column("x" + std::to_string(j), lower[j], upper[j], cost[j],
                   integral.empty() ? false : bool(integral[j]));
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
      const int r = p.add_row("r" + std::to_string(i), sense[i], b[i]);
      for (int j = 0; j < n; ++j) {
        if (a[i][j] != 0.0) p.add_coefficient(r, j, a[i][j]);
      }
    }
    p.finalize();
    return p;
  }
};

// Solves the square system m x = rhs; nullopt when singular.
inline std::optional<std::vector<double>> solve_square(
    std::vector<std::vector<double>> m, std::vector<double> rhs) {
  const int n = static_cast<int>(rhs.size());
  for (int c = 0; c < n; ++c) {
    int p = c;
    for (int r = c + 1; r < n; ++r) {
      if (std::abs(m[r][c]) > std::abs(m[p][c])) p = r;
    }
    if (std::abs(m[p][c]) < 1e-11) return std::nullopt;
    std::swap(m[p], m[c]);
    std::swap(rhs[p], rhs[c]);
    for (int r = 0; r < n; ++r) {
      if (r == c) continue;
      const double f = m[r][c] / m[c][c];
      for (int k = c; k < n; ++k) m[r][k] -= f * m[c][k];
      rhs[r] -= f * rhs[c];
    }
  }
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = rhs[i] / m[i][i];
  return x;
}

// Minimum of c'x over the (bounded) polytope, or nullopt when empty.
inline std::optional<double> vertex_enumeration(const DenseLp& input,
                                                double tol = 1e-9) {
  // Substitute fixed columns first so they do not inflate the subset count.
  DenseLp lp;
  double fixed_cost = 0.0;
  std::vector<int> free_cols;
  for (int j = 0; j < input.n; ++j) {
    if (input.lower[j] == input.upper[j]) {
      fixed_cost += input.cost[j] * input.lower[j];
    } else {
      free_cols.push_back(j);
    }
  }
  lp.n = static_cast<int>(free_cols.size());
  for (int j : free_cols) {
    lp.lower.push_back(input.lower[j]);
    lp.upper.push_back(input.upper[j]);
    lp.cost.push_back(input.cost[j]);
  }
  for (std::size_t i = 0; i < input.a.size(); ++i) {
    std::vector<double> row;
    double rhs = input.b[i];
    for (int j = 0; j < input.n; ++j) {
      if (input.lower[j] == input.upper[j]) {
        rhs -= input.a[i][j] * input.lower[j];
      }
    }
    for (int j : free_cols) row.push_back(input.a[i][j]);
    lp.a.push_back(row);
    lp.sense.push_back(input.sense[i]);
    lp.b.push_back(rhs);
  }
  auto shifted = [&](std::optional<double> v) -> std::optional<double> {
    if (v) return *v + fixed_cost;
    return v;
  };
  struct Halfspace {
    std::vector<double> a;
    double b;
  };
  std::vector<Halfspace> cons;
  for (std::size_t i = 0; i < lp.a.size(); ++i) {
    cons.push_back({lp.a[i], lp.b[i]});
  }
  for (int j = 0; j < lp.n; ++j) {
    std::vector<double> e(lp.n, 0.0);
    e[j] = 1.0;
    cons.push_back({e, lp.lower[j]});
    if (lp.lower[j] != lp.upper[j]) cons.push_back({e, lp.upper[j]});
  }
  auto feasible = [&](const std::vector<double>& x) {
    for (std::size_t i = 0; i < lp.a.size(); ++i) {
      double act = 0.0;
      for (int j = 0; j < lp.n; ++j) act += lp.a[i][j] * x[j];
      const double slack = tol * (1.0 + std::abs(lp.b[i]));
      if (lp.sense[i] == RowSense::kLessEqual && act > lp.b[i] + slack) return false;
      if (lp.sense[i] == RowSense::kGreaterEqual && act < lp.b[i] - slack) return false;
      if (lp.sense[i] == RowSense::kEqual && std::abs(act - lp.b[i]) > slack) return false;
    }
    for (int j = 0; j < lp.n; ++j) {
      if (x[j] < lp.lower[j] - tol || x[j] > lp.upper[j] + tol) return false;
    }
    return true;
  };
  const int total = static_cast<int>(cons.size());
  std::optional<double> best;
  if (lp.n == 0) {
    std::vector<double> x;
    if (feasible(x)) best = 0.0;
    return shifted(best);
  }
  std::vector<int> pick(lp.n);
  // Iterate over all n-subsets in lexicographic order.
  for (int i = 0; i < lp.n; ++i) pick[i] = i;
  while (true) {
    // Equalities need not be among the picked hyperplanes (a zero or
    // dependent equality row never is); feasible() enforces them.
    std::vector<std::vector<double>> m;
    std::vector<double> rhs;
    for (int c : pick) {
      m.push_back(cons[c].a);
      rhs.push_back(cons[c].b);
    }
    if (auto x = solve_square(m, rhs); x && feasible(*x)) {
      double obj = 0.0;
      for (int j = 0; j < lp.n; ++j) obj += lp.cost[j] * (*x)[j];
      if (!best || obj < *best) best = obj;
    }
    int k = lp.n - 1;
    while (k >= 0 && pick[k] == total - lp.n + k) --k;
    if (k < 0) break;
    ++pick[k];
    for (int i = k + 1; i < lp.n; ++i) pick[i] = pick[i - 1] + 1;
  }
  return shifted(best);
}

// Exhaustive MILP oracle: integer columns are enumerated over their (small)
// integer ranges, the rest is solved by vertex enumeration.
inline std::optional<double> integer_enumeration(const DenseLp& lp) {
  std::vector<int> ints;
  for (int j = 0; j < lp.n; ++j) {
    if (!lp.integral.empty() && lp.integral[j]) ints.push_back(j);
  }
  std::optional<double> best;
  std::vector<double> value(ints.size());
  for (std::size_t k = 0; k < ints.size(); ++k) {
    value[k] = std::ceil(lp.lower[ints[k]]);
  }
  while (true) {
    DenseLp fixed = lp;
    for (std::size_t k = 0; k < ints.size(); ++k) {
      fixed.lower[ints[k]] = fixed.upper[ints[k]] = value[k];
    }
    if (auto v = vertex_enumeration(fixed); v && (!best || *v < *best)) best = v;
    std::size_t k = 0;
    while (k < ints.size()) {
      value[k] += 1.0;
      if (value[k] <= std::floor(lp.upper[ints[k]])) break;
      value[k] = std::ceil(lp.lower[ints[k]]);
      ++k;
    }
    if (k == ints.size()) break;
  }
  return best;
}

inline DenseLp random_lp(std::mt19937_64& rng, int max_vars, int max_rows) {
  std::uniform_int_distribution<int> nvar(1, max_vars);
  std::uniform_int_distribution<int> nrow(0, max_rows);
  std::uniform_int_distribution<int> coef(-5, 5);
  std::uniform_int_distribution<int> sense(0, 5);
  DenseLp lp;
  lp.n = nvar(rng);
  const int m = nrow(rng);
  for (int j = 0; j < lp.n; ++j) {
    const double lo = coef(rng) / 2.0;
    const double span = 1.0 + std::abs(coef(rng));
    lp.lower.push_back(lo);
    lp.upper.push_back(lo + span);
    lp.cost.push_back(coef(rng));
  }
  for (int i = 0; i < m; ++i) {
    std::vector<double> row(lp.n);
    for (double& v : row) v = coef(rng);
    lp.a.push_back(row);
    const int s = sense(rng);
    lp.sense.push_back(s < 3 ? RowSense::kLessEqual
                             : (s < 5 ? RowSense::kGreaterEqual : RowSense::kEqual));
    lp.b.push_back(coef(rng) * 1.5);
  }
  return lp;
}

inline DenseLp random_milp(std::mt19937_64& rng, int max_binaries,
                           int max_continuous, int max_rows) {
  std::uniform_int_distribution<int> nbin(1, max_binaries);
  std::uniform_int_distribution<int> ncont(0, max_continuous);
  std::uniform_int_distribution<int> nrow(1, max_rows);
  std::uniform_int_distribution<int> coef(-6, 6);
  std::uniform_int_distribution<int> positive(1, 9);
  DenseLp lp;
  const int nb = nbin(rng);
  const int nc = ncont(rng);
  lp.n = nb + nc;
  for (int j = 0; j < lp.n; ++j) {
    const bool binary = j < nb;
    lp.lower.push_back(0.0);
    lp.upper.push_back(binary ? 1.0 : positive(rng));
    lp.cost.push_back(coef(rng));
    lp.integral.push_back(binary);
  }
  const int m = nrow(rng);
  for (int i = 0; i < m; ++i) {
    std::vector<double> row(lp.n);
    for (double& v : row) v = coef(rng);
    lp.a.push_back(row);
    lp.sense.push_back(i % 3 == 2 ? RowSense::kGreaterEqual : RowSense::kLessEqual);
    lp.b.push_back(positive(rng) * (i % 3 == 2 ? -1.0 : 1.0));
  }
  return lp;
}

}  // namespace scgep::testing

#endif  // SCGEP_TESTS_LP_ORACLES_HPP_
