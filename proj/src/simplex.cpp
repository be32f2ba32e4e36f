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

// Bounded-variable primal simplex with an explicit dense basis inverse.
//
// Every row i is turned into an equality a_i'x + s_i = b_i with a slack whose
// range encodes the sense: [0, inf) for <=, (-inf, 0] for >=, [0, 0] for =.
// Rows whose slack cannot absorb the initial residual get an artificial
// column; phase 1 drives the artificials to zero and phase 2 optimizes the
// real objective with the artificials fixed at zero.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <vector>

#include "scgep/milp.hpp"
#include "simplex_internal.hpp"

namespace scgep::internal {
namespace {

constexpr double kPivotTolerance = 1e-9;
constexpr double kHarrisTolerance = 1e-9;
constexpr int kRefactorInterval = 100;
constexpr int kDegenerateRunBeforeBland = 50;

enum class VarState : std::uint8_t { kBasic, kAtLower, kAtUpper, kFree };

enum class LoopResult { kOptimal, kUnbounded, kIterationLimit };

class BoundedSimplex {
 public:
  BoundedSimplex(int rows, int structurals, std::vector<int> col_start,
                 std::vector<int> row_index, std::vector<double> values,
                 std::vector<double> rhs, const std::vector<RowSense>& senses,
                 std::vector<double> lower, std::vector<double> upper,
                 std::vector<double> cost, const SolverOptions& options)
      : m_(rows),
        n_(structurals),
        col_start_(std::move(col_start)),
        row_index_(std::move(row_index)),
        values_(std::move(values)),
        b_(std::move(rhs)),
        options_(options) {
    lo_ = std::move(lower);
    up_ = std::move(upper);
    cost_ = std::move(cost);
    for (int i = 0; i < m_; ++i) {
      switch (senses[i]) {
        case RowSense::kLessEqual:
          lo_.push_back(0.0);
          up_.push_back(kInfinity);
          break;
        case RowSense::kGreaterEqual:
          lo_.push_back(-kInfinity);
          up_.push_back(0.0);
          break;
        case RowSense::kEqual:
          lo_.push_back(0.0);
          up_.push_back(0.0);
          break;
      }
      cost_.push_back(0.0);
    }
    double cmax = 0.0;
    for (int j = 0; j < n_; ++j) cmax = std::max(cmax, std::abs(cost_[j]));
    cost_scale_ = std::max(1.0, cmax);
    for (double v : b_) bmax_ = std::max(bmax_, std::abs(v));
  }

  SolveStatus solve();

  std::int64_t iterations() const { return iterations_; }
  const std::vector<double>& x() const { return x_; }
  const std::vector<double>& duals() const { return y_; }
  const std::vector<double>& ray() const { return ray_; }
  double reduced_cost(int j, const std::vector<double>& costs) const;

 private:
  int total() const { return static_cast<int>(lo_.size()); }

  template <typename F>
  void for_each_entry(int j, F&& f) const {
    if (j < n_) {
      for (int k = col_start_[j]; k < col_start_[j + 1]; ++k) {
        f(row_index_[k], values_[k]);
      }
    } else if (j < n_ + m_) {
      f(j - n_, 1.0);
    } else {
      const int a = j - n_ - m_;
      f(art_row_[a], art_sign_[a]);
    }
  }

  double* binv_row(int i) { return binv_.data() + static_cast<std::size_t>(i) * m_; }
  const double* binv_row(int i) const {
    return binv_.data() + static_cast<std::size_t>(i) * m_;
  }

  void initial_basis();
  void refactor();
  void recompute_basics();
  void compute_duals(const std::vector<double>& costs);
  void ftran(int j, std::vector<double>& alpha) const;
  LoopResult iterate(const std::vector<double>& costs, double dual_tol);

  int m_;
  int n_;
  std::vector<int> col_start_;
  std::vector<int> row_index_;
  std::vector<double> values_;
  std::vector<double> b_;
  const SolverOptions& options_;

  std::vector<double> lo_, up_, cost_;
  std::vector<int> art_row_;
  std::vector<double> art_sign_;
  double cost_scale_ = 1.0;
  double bmax_ = 0.0;

  std::vector<int> head_;
  std::vector<VarState> state_;
  std::vector<double> x_;
  std::vector<double> binv_;
  std::vector<double> y_;
  std::vector<double> ray_;
  std::int64_t iterations_ = 0;
  int pivots_since_refactor_ = 0;
};

double BoundedSimplex::reduced_cost(int j,
                                    const std::vector<double>& costs) const {
  double d = costs[j];
  for_each_entry(j, [&](int r, double v) { d -= y_[r] * v; });
  return d;
}

void BoundedSimplex::initial_basis() {
  const int structural_and_slack = n_ + m_;
  state_.assign(structural_and_slack, VarState::kAtLower);
  x_.assign(structural_and_slack, 0.0);
  for (int j = 0; j < n_; ++j) {
    if (std::isfinite(lo_[j])) {
      state_[j] = VarState::kAtLower;
      x_[j] = lo_[j];
    } else if (std::isfinite(up_[j])) {
      state_[j] = VarState::kAtUpper;
      x_[j] = up_[j];
    } else {
      state_[j] = VarState::kFree;
      x_[j] = 0.0;
    }
  }
  std::vector<double> residual = b_;
  for (int j = 0; j < n_; ++j) {
    if (x_[j] == 0.0) continue;
    for_each_entry(j, [&](int r, double v) { residual[r] -= v * x_[j]; });
  }
  head_.assign(m_, -1);
  std::vector<double> diag(m_, 1.0);
  for (int i = 0; i < m_; ++i) {
    const int s = n_ + i;
    const double r = residual[i];
    if (r >= lo_[s] && r <= up_[s]) {
      head_[i] = s;
      state_[s] = VarState::kBasic;
      x_[s] = r;
      continue;
    }
    // Slack parks at its finite bound (always 0); an artificial takes the
    // remainder.
    state_[s] = lo_[s] == 0.0 ? VarState::kAtLower : VarState::kAtUpper;
    x_[s] = 0.0;
    const double sign = r > 0 ? 1.0 : -1.0;
    art_row_.push_back(i);
    art_sign_.push_back(sign);
    lo_.push_back(0.0);
    up_.push_back(kInfinity);
    cost_.push_back(0.0);
    state_.push_back(VarState::kBasic);
    x_.push_back(std::abs(r));
    head_[i] = total() - 1;
    diag[i] = sign;
  }
  binv_.assign(static_cast<std::size_t>(m_) * m_, 0.0);
  for (int i = 0; i < m_; ++i) binv_row(i)[i] = 1.0 / diag[i];
}

void BoundedSimplex::refactor() {
  // Gauss-Jordan on [B | I] with partial pivoting.
  const std::size_t mm = static_cast<std::size_t>(m_);
  std::vector<double> work(mm * mm, 0.0);
  for (int c = 0; c < m_; ++c) {
    for_each_entry(head_[c], [&](int r, double v) { work[r * mm + c] = v; });
  }
  std::vector<double> inv(mm * mm, 0.0);
  for (std::size_t i = 0; i < mm; ++i) inv[i * mm + i] = 1.0;
  for (std::size_t c = 0; c < mm; ++c) {
    std::size_t pivot = c;
    double best = std::abs(work[c * mm + c]);
    for (std::size_t r = c + 1; r < mm; ++r) {
      const double v = std::abs(work[r * mm + c]);
      if (v > best) {
        best = v;
        pivot = r;
      }
    }
    if (best < 1e-14) throw ProblemError("simplex basis became singular");
    if (pivot != c) {
      std::swap_ranges(work.begin() + pivot * mm, work.begin() + pivot * mm + mm,
                       work.begin() + c * mm);
      std::swap_ranges(inv.begin() + pivot * mm, inv.begin() + pivot * mm + mm,
                       inv.begin() + c * mm);
    }
    const double p = work[c * mm + c];
    for (std::size_t k = 0; k < mm; ++k) {
      work[c * mm + k] /= p;
      inv[c * mm + k] /= p;
    }
    for (std::size_t r = 0; r < mm; ++r) {
      if (r == c) continue;
      const double f = work[r * mm + c];
      if (f == 0.0) continue;
      for (std::size_t k = 0; k < mm; ++k) {
        work[r * mm + k] -= f * work[c * mm + k];
        inv[r * mm + k] -= f * inv[c * mm + k];
      }
    }
  }
  binv_ = std::move(inv);
  pivots_since_refactor_ = 0;
}

void BoundedSimplex::recompute_basics() {
  std::vector<double> rhs = b_;
  for (int j = 0; j < total(); ++j) {
    if (state_[j] == VarState::kBasic || x_[j] == 0.0) continue;
    for_each_entry(j, [&](int r, double v) { rhs[r] -= v * x_[j]; });
  }
  for (int i = 0; i < m_; ++i) {
    const double* row = binv_row(i);
    double v = 0.0;
    for (int k = 0; k < m_; ++k) v += row[k] * rhs[k];
    x_[head_[i]] = v;
  }
}

void BoundedSimplex::compute_duals(const std::vector<double>& costs) {
  y_.assign(m_, 0.0);
  for (int i = 0; i < m_; ++i) {
    const double c = costs[head_[i]];
    if (c == 0.0) continue;
    const double* row = binv_row(i);
    for (int k = 0; k < m_; ++k) y_[k] += c * row[k];
  }
}

void BoundedSimplex::ftran(int j, std::vector<double>& alpha) const {
  alpha.assign(m_, 0.0);
  for_each_entry(j, [&](int r, double v) {
    for (int i = 0; i < m_; ++i) alpha[i] += binv_row(i)[r] * v;
  });
}

LoopResult BoundedSimplex::iterate(const std::vector<double>& costs,
                                   double dual_tol) {
  std::vector<double> alpha;
  int degenerate_run = 0;
  for (;;) {
    if (iterations_ >= options_.iteration_limit) return LoopResult::kIterationLimit;
    if (pivots_since_refactor_ >= kRefactorInterval) {
      refactor();
      recompute_basics();
    }
    compute_duals(costs);
    const bool bland = options_.deterministic_pivoting ||
                       degenerate_run > kDegenerateRunBeforeBland;

    int entering = -1;
    double direction = 0.0;
    double best = 0.0;
    for (int j = 0; j < total(); ++j) {
      const VarState st = state_[j];
      if (st == VarState::kBasic || lo_[j] == up_[j]) continue;
      const double d = reduced_cost(j, costs);
      double dir = 0.0;
      if ((st == VarState::kAtLower || st == VarState::kFree) && d < -dual_tol) {
        dir = 1.0;
      } else if ((st == VarState::kAtUpper || st == VarState::kFree) &&
                 d > dual_tol) {
        dir = -1.0;
      }
      if (dir == 0.0) continue;
      if (bland) {
        entering = j;
        direction = dir;
        break;
      }
      if (std::abs(d) > best) {
        best = std::abs(d);
        entering = j;
        direction = dir;
      }
    }
    if (entering < 0) return LoopResult::kOptimal;

    ftran(entering, alpha);

    // Harris two-pass ratio test.
    double theta_max = kInfinity;
    for (int i = 0; i < m_; ++i) {
      if (std::abs(alpha[i]) <= kPivotTolerance) continue;
      const int bv = head_[i];
      const double delta = -direction * alpha[i];
      if (delta < 0 && std::isfinite(lo_[bv])) {
        theta_max = std::min(theta_max,
                             (x_[bv] - lo_[bv] + kHarrisTolerance) / -delta);
      } else if (delta > 0 && std::isfinite(up_[bv])) {
        theta_max = std::min(theta_max,
                             (up_[bv] - x_[bv] + kHarrisTolerance) / delta);
      }
    }
    // A basic variable slightly past its bound must not yield a negative step.
    theta_max = std::max(theta_max, 0.0);
    const double range = up_[entering] - lo_[entering];
    if (!std::isfinite(theta_max) && !std::isfinite(range)) {
      ray_.assign(total(), 0.0);
      ray_[entering] = direction;
      for (int i = 0; i < m_; ++i) ray_[head_[i]] = -direction * alpha[i];
      return LoopResult::kUnbounded;
    }
    ++iterations_;

    if (std::isfinite(range) && range <= theta_max) {
      // Bound flip of the entering column; the basis is unchanged.
      const double step = direction * range;
      x_[entering] += step;
      state_[entering] =
          direction > 0 ? VarState::kAtUpper : VarState::kAtLower;
      x_[entering] = direction > 0 ? up_[entering] : lo_[entering];
      for (int i = 0; i < m_; ++i) x_[head_[i]] -= alpha[i] * step;
      degenerate_run = 0;
      continue;
    }

    int leave = -1;
    double leave_ratio = 0.0;
    double leave_pivot = 0.0;
    for (int i = 0; i < m_; ++i) {
      if (std::abs(alpha[i]) <= kPivotTolerance) continue;
      const int bv = head_[i];
      const double delta = -direction * alpha[i];
      double ratio;
      if (delta < 0 && std::isfinite(lo_[bv])) {
        ratio = (x_[bv] - lo_[bv]) / -delta;
      } else if (delta > 0 && std::isfinite(up_[bv])) {
        ratio = (up_[bv] - x_[bv]) / delta;
      } else {
        continue;
      }
      ratio = std::max(ratio, 0.0);
      if (ratio > theta_max) continue;
      bool take;
      if (leave < 0) {
        take = true;
      } else if (bland) {
        take = bv < head_[leave];
      } else {
        take = std::abs(alpha[i]) > leave_pivot;
      }
      if (take) {
        leave = i;
        leave_ratio = ratio;
        leave_pivot = std::abs(alpha[i]);
      }
    }

    const double theta = leave_ratio;
    const double step = direction * theta;
    x_[entering] += step;
    for (int i = 0; i < m_; ++i) x_[head_[i]] -= alpha[i] * step;
    degenerate_run = theta <= 1e-12 ? degenerate_run + 1 : 0;

    const int leaving = head_[leave];
    const double leave_delta = -direction * alpha[leave];
    if (leave_delta < 0) {
      x_[leaving] = lo_[leaving];
      state_[leaving] = VarState::kAtLower;
    } else {
      x_[leaving] = up_[leaving];
      state_[leaving] = VarState::kAtUpper;
    }
    if (lo_[leaving] == up_[leaving]) state_[leaving] = VarState::kAtLower;

    // Eta update of the explicit inverse.
    double* pivot_row = binv_row(leave);
    const double pivot = alpha[leave];
    for (int k = 0; k < m_; ++k) pivot_row[k] /= pivot;
    for (int i = 0; i < m_; ++i) {
      if (i == leave || alpha[i] == 0.0) continue;
      double* row = binv_row(i);
      const double f = alpha[i];
      for (int k = 0; k < m_; ++k) row[k] -= f * pivot_row[k];
    }
    head_[leave] = entering;
    state_[entering] = VarState::kBasic;
    ++pivots_since_refactor_;
  }
}

SolveStatus BoundedSimplex::solve() {
  initial_basis();
  const int first_artificial = n_ + m_;
  if (total() > first_artificial) {
    std::vector<double> phase1(total(), 0.0);
    for (int j = first_artificial; j < total(); ++j) phase1[j] = 1.0;
    const LoopResult r = iterate(phase1, 1e-11);
    if (r == LoopResult::kIterationLimit) return SolveStatus::kIterationLimit;
    refactor();
    recompute_basics();
    double infeasibility = 0.0;
    for (int j = first_artificial; j < total(); ++j) {
      infeasibility += std::max(0.0, x_[j]);
    }
    if (infeasibility >
        options_.feasibility_tolerance * 1e-3 * (1.0 + bmax_)) {
      compute_duals(phase1);
      return SolveStatus::kInfeasible;
    }
    for (int j = first_artificial; j < total(); ++j) {
      up_[j] = 0.0;
      if (state_[j] != VarState::kBasic) {
        state_[j] = VarState::kAtLower;
        x_[j] = 0.0;
      }
    }
  }
  const double dual_tol = options_.optimality_tolerance * 1e-3 * cost_scale_;
  const LoopResult r = iterate(cost_, dual_tol);
  if (r == LoopResult::kIterationLimit) return SolveStatus::kIterationLimit;
  if (r == LoopResult::kUnbounded) return SolveStatus::kUnbounded;
  if (m_ > 0) {
    refactor();
    recompute_basics();
  }
  compute_duals(cost_);
  return SolveStatus::kOptimal;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

}  // namespace

SolveResult solve_lp_bounded(const SparseProblem& problem,
                             std::span<const double> lower,
                             std::span<const double> upper,
                             const SolverOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  if (!problem.finalized()) {
    throw ProblemError("solve requested on a problem that is not finalized");
  }
  options.check();
  const int n = problem.num_columns();
  const int m = problem.num_rows();
  SolveResult result;
  result.primal.assign(n, 0.0);

  for (int j = 0; j < n; ++j) {
    if (lower[j] > upper[j]) {
      result.status = SolveStatus::kInfeasible;
      result.stats.wall_seconds = seconds_since(start);
      return result;
    }
  }

  // Presolve: substitute fixed columns, drop rows left empty.
  std::vector<int> reduced_col(n, -1);
  std::vector<int> kept_cols;
  std::vector<double> rhs(m);
  for (int i = 0; i < m; ++i) rhs[i] = problem.row(i).rhs;
  double offset = problem.objective_offset();
  for (int j = 0; j < n; ++j) {
    if (lower[j] == upper[j]) {
      const double v = lower[j];
      result.primal[j] = v;
      offset += problem.column(j).cost * v;
      for (int k = problem.column_start(j); k < problem.column_start(j + 1);
           ++k) {
        rhs[problem.entry_row(k)] -= problem.entry_value(k) * v;
      }
    } else {
      reduced_col[j] = static_cast<int>(kept_cols.size());
      kept_cols.push_back(j);
    }
  }
  std::vector<int> row_count(m, 0);
  for (int j : kept_cols) {
    for (int k = problem.column_start(j); k < problem.column_start(j + 1); ++k) {
      ++row_count[problem.entry_row(k)];
    }
  }
  std::vector<int> reduced_row(m, -1);
  std::vector<int> kept_rows;
  const double feas_tol = options.feasibility_tolerance;
  for (int i = 0; i < m; ++i) {
    if (row_count[i] > 0) {
      reduced_row[i] = static_cast<int>(kept_rows.size());
      kept_rows.push_back(i);
      continue;
    }
    const double r = rhs[i];
    const RowSense sense = problem.row(i).sense;
    const bool violated = (sense == RowSense::kLessEqual && r < -feas_tol) ||
                          (sense == RowSense::kGreaterEqual && r > feas_tol) ||
                          (sense == RowSense::kEqual && std::abs(r) > feas_tol);
    if (violated) {
      result.status = SolveStatus::kInfeasible;
      result.certificate.assign(m, 0.0);
      result.certificate[i] = r > 0 ? 1.0 : -1.0;
      result.stats.wall_seconds = seconds_since(start);
      return result;
    }
  }

  const int rm = static_cast<int>(kept_rows.size());
  const int rn = static_cast<int>(kept_cols.size());
  std::vector<int> col_start(rn + 1, 0);
  std::vector<int> row_idx;
  std::vector<double> vals;
  std::vector<double> lo(rn), up(rn), cost(rn);
  for (int c = 0; c < rn; ++c) {
    const int j = kept_cols[c];
    for (int k = problem.column_start(j); k < problem.column_start(j + 1); ++k) {
      row_idx.push_back(reduced_row[problem.entry_row(k)]);
      vals.push_back(problem.entry_value(k));
    }
    col_start[c + 1] = static_cast<int>(row_idx.size());
    lo[c] = lower[j];
    up[c] = upper[j];
    cost[c] = problem.column(j).cost;
  }
  std::vector<double> reduced_rhs(rm);
  std::vector<RowSense> senses(rm);
  for (int r = 0; r < rm; ++r) {
    reduced_rhs[r] = rhs[kept_rows[r]];
    senses[r] = problem.row(kept_rows[r]).sense;
  }

  BoundedSimplex simplex(rm, rn, std::move(col_start), std::move(row_idx),
                         std::move(vals), std::move(reduced_rhs), senses, lo, up,
                         cost, options);
  result.status = simplex.solve();
  result.stats.iterations = simplex.iterations();

  auto expand_rows = [&](const std::vector<double>& reduced) {
    std::vector<double> full(m, 0.0);
    for (int r = 0; r < rm && r < static_cast<int>(reduced.size()); ++r) {
      full[kept_rows[r]] = reduced[r];
    }
    return full;
  };

  if (result.status == SolveStatus::kInfeasible) {
    result.certificate = expand_rows(simplex.duals());
  } else if (result.status == SolveStatus::kUnbounded) {
    result.certificate.assign(n, 0.0);
    for (int c = 0; c < rn; ++c) result.certificate[kept_cols[c]] = simplex.ray()[c];
  } else if (result.status == SolveStatus::kOptimal) {
    for (int c = 0; c < rn; ++c) result.primal[kept_cols[c]] = simplex.x()[c];
    result.duals = expand_rows(simplex.duals());
    result.reduced_costs.assign(n, 0.0);
    double objective = problem.objective_offset();
    for (int j = 0; j < n; ++j) objective += problem.column(j).cost * result.primal[j];
    double dual_objective = problem.objective_offset();
    for (int i = 0; i < m; ++i) dual_objective += result.duals[i] * problem.row(i).rhs;
    const double tiny = options.optimality_tolerance * 1e-6;
    for (int j = 0; j < n; ++j) {
      double d = problem.column(j).cost;
      for (int k = problem.column_start(j); k < problem.column_start(j + 1); ++k) {
        d -= result.duals[problem.entry_row(k)] * problem.entry_value(k);
      }
      result.reduced_costs[j] = d;
      if (std::abs(d) <= tiny * std::max(1.0, std::abs(problem.column(j).cost))) {
        continue;
      }
      const double bound = d > 0 ? lower[j] : upper[j];
      dual_objective += std::isfinite(bound) ? d * bound : -kInfinity;
    }
    result.objective = objective;
    result.dual_objective = dual_objective;
    result.best_bound = objective;
    result.has_solution = true;
  }
  result.stats.wall_seconds = seconds_since(start);
  return result;
}

}  // namespace scgep::internal

namespace scgep {

SolveResult solve_lp(const SparseProblem& problem,
                     const SolverOptions& options) {
  std::vector<double> lower(problem.num_columns());
  std::vector<double> upper(problem.num_columns());
  for (int j = 0; j < problem.num_columns(); ++j) {
    lower[j] = problem.column(j).lower;
    upper[j] = problem.column(j).upper;
  }
  return internal::solve_lp_bounded(problem, lower, upper, options);
}

SolveResult extract_duals_at_fixed_integers(const SparseProblem& problem,
                                            std::span<const double> incumbent,
                                            const SolverOptions& options,
                                            bool fix_integers) {
  std::vector<double> lower(problem.num_columns());
  std::vector<double> upper(problem.num_columns());
  for (int j = 0; j < problem.num_columns(); ++j) {
    lower[j] = problem.column(j).lower;
    upper[j] = problem.column(j).upper;
    if (fix_integers && problem.column(j).integral) {
      if (static_cast<std::size_t>(j) >= incumbent.size()) {
        throw ProblemError("incumbent does not cover every column");
      }
      const double v = std::round(incumbent[j]);
      lower[j] = upper[j] = std::clamp(v, lower[j], upper[j]);
    }
  }
  return internal::solve_lp_bounded(problem, lower, upper, options);
}

}  // namespace scgep
