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

// Sparse LP/MILP kernel.
//
// A SparseProblem is a minimization problem
//
//   min  c'x + offset
//   s.t. a_i'x  (<=|=|>=)  b_i      for every row i
//        l <= x <= u
//        x_j integral               for every column marked integral
//
// with named rows and columns. solve_lp() runs a bounded-variable primal
// simplex (two phases, explicit basis inverse). solve_milp() runs best-bound
// branch-and-bound on top of it. Duals follow the sensitivity convention
// dual_i = d(objective)/d(b_i), so a binding <= row of a minimization has a
// non-positive dual and a binding >= row a non-negative one.

#ifndef SCGEP_MILP_HPP_
#define SCGEP_MILP_HPP_

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace scgep {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class RowSense { kLessEqual, kEqual, kGreaterEqual };

std::string_view to_string(RowSense sense);

struct ColumnRecord {
  std::string key;
  double lower = 0.0;
  double upper = kInfinity;
  double cost = 0.0;
  bool integral = false;
};

struct RowRecord {
  std::string key;
  RowSense sense = RowSense::kLessEqual;
  double rhs = 0.0;
};

struct Triplet {
  int row;
  int column;
  double value;
};

class ProblemError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SparseProblem {
 public:
  int add_column(std::string key, double lower, double upper, double cost,
                 bool integral = false);
  int add_row(std::string key, RowSense sense, double rhs);
  // Coefficients added twice for the same (row, column) are summed at
  // finalize().
  void add_coefficient(int row, int column, double value);

  // Merges duplicate triplets, drops explicit zeros, builds the column-wise
  // index and checks bounds. Mutators after finalize() reopen the problem.
  void finalize();
  bool finalized() const { return finalized_; }

  int num_columns() const { return static_cast<int>(columns_.size()); }
  int num_rows() const { return static_cast<int>(rows_.size()); }
  std::size_t num_nonzeros() const { return triplets_.size(); }

  const ColumnRecord& column(int j) const { return columns_[j]; }
  const RowRecord& row(int i) const { return rows_[i]; }
  ColumnRecord& mutable_column(int j);
  RowRecord& mutable_row(int i);
  const std::vector<ColumnRecord>& columns() const { return columns_; }
  const std::vector<RowRecord>& rows() const { return rows_; }
  const std::vector<Triplet>& triplets() const { return triplets_; }

  // -1 when absent.
  int column_index(std::string_view key) const;
  int row_index(std::string_view key) const;

  double objective_offset() const { return objective_offset_; }
  void set_objective_offset(double offset) { objective_offset_ = offset; }

  bool has_integral_columns() const;

  // Column-wise view, valid after finalize(). Entries of column j live in
  // [column_start(j), column_start(j + 1)).
  int column_start(int j) const { return column_start_[j]; }
  int entry_row(int k) const { return entry_row_[k]; }
  double entry_value(int k) const { return entry_value_[k]; }

  // a_i'x for every row.
  std::vector<double> row_activity(std::span<const double> x) const;

 private:
  std::vector<ColumnRecord> columns_;
  std::vector<RowRecord> rows_;
  std::vector<Triplet> triplets_;
  std::unordered_map<std::string, int> column_lookup_;
  std::unordered_map<std::string, int> row_lookup_;
  double objective_offset_ = 0.0;
  bool finalized_ = false;

  std::vector<int> column_start_;
  std::vector<int> entry_row_;
  std::vector<double> entry_value_;
};

enum class SolveStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

std::string_view to_string(SolveStatus status);

struct SolveStatistics {
  std::int64_t iterations = 0;
  std::int64_t nodes = 0;
  double wall_seconds = 0.0;
};

struct SolveResult {
  SolveStatus status = SolveStatus::kIterationLimit;
  double objective = 0.0;
  // Objective of the dual at the returned duals (LP solves only).
  double dual_objective = 0.0;
  // Best proven lower bound (MILP); equals objective for LP optima.
  double best_bound = -kInfinity;
  // True when an incumbent solution is available in `primal`.
  bool has_solution = false;
  std::vector<double> primal;
  // Empty whenever integrality was enforced.
  std::vector<double> duals;
  std::vector<double> reduced_costs;
  // Farkas multipliers over rows (infeasible) or a primal ray over columns
  // (unbounded).
  std::vector<double> certificate;
  SolveStatistics stats;

  bool optimal() const { return status == SolveStatus::kOptimal; }
  double value(const SparseProblem& problem, std::string_view key) const;
  double dual(const SparseProblem& problem, std::string_view key) const;
};

struct SolverOptions {
  double feasibility_tolerance = 1e-6;
  double optimality_tolerance = 1e-6;
  double mip_gap = 1e-4;
  double integrality_tolerance = 1e-6;
  std::int64_t iteration_limit = 200000;
  std::int64_t node_limit = 100000;
  // Bland's rule on every pivot. Otherwise Dantzig pricing, falling back to
  // Bland after a run of degenerate pivots.
  bool deterministic_pivoting = false;

  void check() const;
};

SolveResult solve_lp(const SparseProblem& problem,
                     const SolverOptions& options = {});

SolveResult solve_milp(const SparseProblem& problem,
                       const SolverOptions& options = {});

// LP duals of `problem` with integrality dropped. With fix_integers set, the
// integral columns are first fixed at the rounded incumbent values instead.
SolveResult extract_duals_at_fixed_integers(const SparseProblem& problem,
                                            std::span<const double> incumbent,
                                            const SolverOptions& options = {},
                                            bool fix_integers = false);

// Copy with every integrality mark removed.
SparseProblem relaxed_copy(const SparseProblem& problem);

// Writes the problem in the CPLEX LP file subset documented in
// docs/lp_format.md. Names are sanitized ('[' -> '(', ']' -> ')').
void write_lp_format(const SparseProblem& problem, std::ostream& out);
std::string sanitize_lp_name(std::string_view key);

// Pluggable backend with the same contract as the free functions.
class SolverBackend {
 public:
  virtual ~SolverBackend() = default;
  virtual std::string name() const = 0;
  virtual SolveResult solve_lp(const SparseProblem& problem,
                               const SolverOptions& options) = 0;
  virtual SolveResult solve_milp(const SparseProblem& problem,
                                 const SolverOptions& options) = 0;
};

class BuiltinSolver final : public SolverBackend {
 public:
  std::string name() const override { return "builtin-simplex"; }
  SolveResult solve_lp(const SparseProblem& problem,
                       const SolverOptions& options) override;
  SolveResult solve_milp(const SparseProblem& problem,
                         const SolverOptions& options) override;
};

std::unique_ptr<SolverBackend> make_builtin_solver();

}  // namespace scgep

#endif  // SCGEP_MILP_HPP_
