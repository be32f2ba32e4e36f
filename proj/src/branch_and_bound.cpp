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

// Best-bound branch-and-bound over the columns marked integral. Branching
// picks the most fractional column, ties broken by the lexicographically
// smallest column key.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <queue>
#include <vector>

#include "scgep/milp.hpp"
#include "simplex_internal.hpp"

namespace scgep {
namespace {

struct Node {
  double bound;
  std::int64_t id;
  std::vector<double> lower;
  std::vector<double> upper;
};

struct WorseBound {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    return a.id > b.id;
  }
};

double relative_gap(double incumbent, double bound) {
  if (!std::isfinite(incumbent)) return kInfinity;
  return (incumbent - bound) / std::max(1.0, std::abs(incumbent));
}

}  // namespace

SolveResult solve_milp(const SparseProblem& problem,
                       const SolverOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  if (!problem.has_integral_columns()) return solve_lp(problem, options);
  options.check();

  const int n = problem.num_columns();
  Node root{-kInfinity, 0, std::vector<double>(n), std::vector<double>(n)};
  for (int j = 0; j < n; ++j) {
    const ColumnRecord& c = problem.column(j);
    root.lower[j] = c.integral ? std::ceil(c.lower - options.integrality_tolerance)
                               : c.lower;
    root.upper[j] = c.integral ? std::floor(c.upper + options.integrality_tolerance)
                               : c.upper;
  }

  SolveResult result;
  result.primal.assign(n, 0.0);
  double incumbent = kInfinity;
  std::int64_t iterations = 0;
  std::int64_t nodes = 0;
  std::int64_t next_id = 1;
  bool saw_unbounded = false;

  std::priority_queue<Node, std::vector<Node>, WorseBound> open;
  open.push(std::move(root));
  bool hit_limit = false;

  while (!open.empty()) {
    const double global_bound = std::min(open.top().bound, incumbent);
    if (relative_gap(incumbent, global_bound) <= options.mip_gap) break;
    if (nodes >= options.node_limit ||
        iterations >= options.iteration_limit) {
      hit_limit = true;
      break;
    }
    Node node = open.top();
    open.pop();
    if (node.bound >= incumbent) continue;
    ++nodes;

    SolverOptions lp_options = options;
    lp_options.iteration_limit = options.iteration_limit - iterations;
    SolveResult lp =
        internal::solve_lp_bounded(problem, node.lower, node.upper, lp_options);
    iterations += lp.stats.iterations;
    if (lp.status == SolveStatus::kInfeasible) continue;
    if (lp.status == SolveStatus::kUnbounded) {
      saw_unbounded = true;
      break;
    }
    if (lp.status == SolveStatus::kIterationLimit) {
      hit_limit = true;
      break;
    }
    if (lp.objective >= incumbent) continue;

    int branch = -1;
    double best_frac = 0.0;
    for (int j = 0; j < n; ++j) {
      if (!problem.column(j).integral) continue;
      const double v = lp.primal[j];
      const double frac = std::abs(v - std::round(v));
      if (frac <= options.integrality_tolerance) continue;
      const double score = std::min(v - std::floor(v), std::ceil(v) - v);
      if (branch < 0 || score > best_frac + 1e-12 ||
          (std::abs(score - best_frac) <= 1e-12 &&
           problem.column(j).key < problem.column(branch).key)) {
        branch = j;
        best_frac = score;
      }
    }
    if (branch < 0) {
      incumbent = lp.objective;
      result.primal = lp.primal;
      for (int j = 0; j < n; ++j) {
        if (problem.column(j).integral) {
          result.primal[j] = std::round(result.primal[j]);
        }
      }
      result.has_solution = true;
      continue;
    }
    const double v = lp.primal[branch];
    Node down{lp.objective, next_id++, node.lower, node.upper};
    down.upper[branch] = std::floor(v);
    Node up{lp.objective, next_id++, std::move(node.lower),
            std::move(node.upper)};
    up.lower[branch] = std::ceil(v);
    open.push(std::move(down));
    open.push(std::move(up));
  }

  result.stats.iterations = iterations;
  result.stats.nodes = nodes;
  if (saw_unbounded) {
    result.status = SolveStatus::kUnbounded;
  } else if (hit_limit) {
    result.status = SolveStatus::kIterationLimit;
  } else if (!result.has_solution) {
    result.status = SolveStatus::kInfeasible;
  } else {
    result.status = SolveStatus::kOptimal;
  }
  double bound = incumbent;
  if (!open.empty()) bound = std::min(bound, open.top().bound);
  result.best_bound = bound;
  if (result.has_solution) {
    // Recompute from the rounded incumbent so the objective matches primal.
    double objective = problem.objective_offset();
    for (int j = 0; j < n; ++j) objective += problem.column(j).cost * result.primal[j];
    result.objective = objective;
  }
  result.stats.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return result;
}

SolveResult BuiltinSolver::solve_lp(const SparseProblem& problem,
                                    const SolverOptions& options) {
  return scgep::solve_lp(problem, options);
}

SolveResult BuiltinSolver::solve_milp(const SparseProblem& problem,
                                      const SolverOptions& options) {
  return scgep::solve_milp(problem, options);
}

std::unique_ptr<SolverBackend> make_builtin_solver() {
  return std::make_unique<BuiltinSolver>();
}

}  // namespace scgep
