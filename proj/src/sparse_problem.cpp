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

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "scgep/milp.hpp"

namespace scgep {

std::string_view to_string(RowSense sense) {
  switch (sense) {
    case RowSense::kLessEqual:
      return "<=";
    case RowSense::kEqual:
      return "=";
    case RowSense::kGreaterEqual:
      return ">=";
  }
  return "?";
}

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal:
      return "optimal";
    case SolveStatus::kInfeasible:
      return "infeasible";
    case SolveStatus::kUnbounded:
      return "unbounded";
    case SolveStatus::kIterationLimit:
      return "iteration-limit";
  }
  return "?";
}

int SparseProblem::add_column(std::string key, double lower, double upper,
                              double cost, bool integral) {
  const int index = num_columns();
  auto [it, inserted] = column_lookup_.emplace(key, index);
  if (!inserted) throw ProblemError("duplicate column key: " + key);
  columns_.push_back({std::move(key), lower, upper, cost, integral});
  finalized_ = false;
  return index;
}

int SparseProblem::add_row(std::string key, RowSense sense, double rhs) {
  const int index = num_rows();
  auto [it, inserted] = row_lookup_.emplace(key, index);
  if (!inserted) throw ProblemError("duplicate row key: " + key);
  rows_.push_back({std::move(key), sense, rhs});
  finalized_ = false;
  return index;
}

void SparseProblem::add_coefficient(int row, int column, double value) {
  if (row < 0 || row >= num_rows() || column < 0 || column >= num_columns()) {
    throw ProblemError("coefficient references an undeclared row or column");
  }
  triplets_.push_back({row, column, value});
  finalized_ = false;
}

// Bounds, costs, senses and right-hand sides do not affect the column-wise
// index, so editing them keeps the problem finalized.
ColumnRecord& SparseProblem::mutable_column(int j) { return columns_[j]; }

RowRecord& SparseProblem::mutable_row(int i) { return rows_[i]; }

void SparseProblem::finalize() {
  for (const ColumnRecord& c : columns_) {
    if (std::isnan(c.lower) || std::isnan(c.upper) || c.lower > c.upper) {
      throw ProblemError("column " + c.key + " has lower > upper");
    }
    if (!std::isfinite(c.cost)) {
      throw ProblemError("column " + c.key + " has a non-finite cost");
    }
  }
  for (const RowRecord& r : rows_) {
    if (!std::isfinite(r.rhs)) {
      throw ProblemError("row " + r.key + " has a non-finite rhs");
    }
  }
  std::sort(triplets_.begin(), triplets_.end(),
            [](const Triplet& a, const Triplet& b) {
              return a.column != b.column ? a.column < b.column
                                          : a.row < b.row;
            });
  std::vector<Triplet> merged;
  merged.reserve(triplets_.size());
  for (const Triplet& t : triplets_) {
    if (!merged.empty() && merged.back().row == t.row &&
        merged.back().column == t.column) {
      merged.back().value += t.value;
    } else {
      merged.push_back(t);
    }
  }
  std::erase_if(merged, [](const Triplet& t) { return t.value == 0.0; });
  triplets_ = std::move(merged);

  column_start_.assign(columns_.size() + 1, 0);
  entry_row_.resize(triplets_.size());
  entry_value_.resize(triplets_.size());
  for (const Triplet& t : triplets_) ++column_start_[t.column + 1];
  for (std::size_t j = 0; j < columns_.size(); ++j) {
    column_start_[j + 1] += column_start_[j];
  }
  for (std::size_t k = 0; k < triplets_.size(); ++k) {
    entry_row_[k] = triplets_[k].row;
    entry_value_[k] = triplets_[k].value;
  }
  finalized_ = true;
}

int SparseProblem::column_index(std::string_view key) const {
  auto it = column_lookup_.find(std::string(key));
  return it == column_lookup_.end() ? -1 : it->second;
}

int SparseProblem::row_index(std::string_view key) const {
  auto it = row_lookup_.find(std::string(key));
  return it == row_lookup_.end() ? -1 : it->second;
}

bool SparseProblem::has_integral_columns() const {
  return std::any_of(columns_.begin(), columns_.end(),
                     [](const ColumnRecord& c) { return c.integral; });
}

std::vector<double> SparseProblem::row_activity(
    std::span<const double> x) const {
  std::vector<double> activity(rows_.size(), 0.0);
  for (const Triplet& t : triplets_) activity[t.row] += t.value * x[t.column];
  return activity;
}

double SolveResult::value(const SparseProblem& problem,
                          std::string_view key) const {
  const int j = problem.column_index(key);
  if (j < 0 || static_cast<std::size_t>(j) >= primal.size()) {
    throw ProblemError("no primal value for column " + std::string(key));
  }
  return primal[j];
}

double SolveResult::dual(const SparseProblem& problem,
                         std::string_view key) const {
  const int i = problem.row_index(key);
  if (i < 0 || static_cast<std::size_t>(i) >= duals.size()) {
    throw ProblemError("no dual value for row " + std::string(key));
  }
  return duals[i];
}

void SolverOptions::check() const {
  if (!(feasibility_tolerance > 0) || !(optimality_tolerance > 0) ||
      !(mip_gap > 0) || !(integrality_tolerance > 0)) {
    throw ProblemError("solver tolerances must be positive");
  }
}

SparseProblem relaxed_copy(const SparseProblem& problem) {
  SparseProblem copy = problem;
  for (int j = 0; j < copy.num_columns(); ++j) {
    copy.mutable_column(j).integral = false;
  }
  copy.finalize();
  return copy;
}

std::string sanitize_lp_name(std::string_view key) {
  std::string name;
  name.reserve(key.size());
  for (char ch : key) {
    switch (ch) {
      case '[':
        name += '(';
        break;
      case ']':
        name += ')';
        break;
      case ' ':
      case ':':
      case '+':
      case '-':
      case '*':
      case '^':
      case '<':
      case '>':
      case '=':
        name += '_';
        break;
      default:
        name += ch;
    }
  }
  if (name.empty() || std::isdigit(static_cast<unsigned char>(name[0])) ||
      name[0] == '.' || name[0] == 'e' || name[0] == 'E') {
    name.insert(name.begin(), '_');
  }
  return name;
}

namespace {

std::string format_number(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

}  // namespace

void write_lp_format(const SparseProblem& problem, std::ostream& out) {
  SparseProblem copy = problem;
  if (!copy.finalized()) copy.finalize();

  std::vector<std::vector<std::pair<int, double>>> by_row(copy.num_rows());
  for (const Triplet& t : copy.triplets()) {
    by_row[t.row].emplace_back(t.column, t.value);
  }
  auto write_terms = [&](const std::vector<std::pair<int, double>>& terms) {
    if (terms.empty()) {
      out << " 0";
      return;
    }
    for (const auto& [j, v] : terms) {
      out << (v < 0 ? " - " : " + ") << format_number(std::abs(v)) << ' '
          << sanitize_lp_name(copy.column(j).key);
    }
  };

  out << "\\ written by scgep\nMinimize\n obj:";
  std::vector<std::pair<int, double>> objective;
  for (int j = 0; j < copy.num_columns(); ++j) {
    if (copy.column(j).cost != 0.0) objective.emplace_back(j, copy.column(j).cost);
  }
  write_terms(objective);
  if (copy.objective_offset() != 0.0) {
    // LP format has no objective constant; carried as a fixed column.
    out << " + " << format_number(copy.objective_offset()) << " __offset";
  }
  out << "\nSubject To\n";
  for (int i = 0; i < copy.num_rows(); ++i) {
    const RowRecord& r = copy.row(i);
    out << ' ' << sanitize_lp_name(r.key) << ':';
    write_terms(by_row[i]);
    out << ' ' << to_string(r.sense) << ' ' << format_number(r.rhs) << '\n';
  }
  out << "Bounds\n";
  for (int j = 0; j < copy.num_columns(); ++j) {
    const ColumnRecord& c = copy.column(j);
    const std::string name = sanitize_lp_name(c.key);
    if (c.lower == c.upper) {
      out << ' ' << name << " = " << format_number(c.lower) << '\n';
    } else if (std::isinf(c.lower) && std::isinf(c.upper)) {
      out << ' ' << name << " free\n";
    } else {
      out << ' ' << (std::isinf(c.lower) ? "-inf" : format_number(c.lower))
          << " <= " << name << " <= "
          << (std::isinf(c.upper) ? "+inf" : format_number(c.upper)) << '\n';
    }
  }
  if (copy.objective_offset() != 0.0) out << " __offset = 1\n";
  bool header = false;
  for (int j = 0; j < copy.num_columns(); ++j) {
    if (!copy.column(j).integral) continue;
    if (!header) {
      out << "General\n";
      header = true;
    }
    out << ' ' << sanitize_lp_name(copy.column(j).key) << '\n';
  }
  out << "End\n";
}

}  // namespace scgep
