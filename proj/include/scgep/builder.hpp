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

// Translation of a SystemModel into LP/MILP instances.
//
// Every column and row belongs to one planning year. Rows of year y only
// reference columns of years <= y, so the same formulation yields both the
// monolithic problem and the per-year stage problems used by the nested
// decomposition. Row keys:
//
//   matdem[m,y]  compdem[c,y]  matsup[m,y]  stock[m,y]  prodcap[k,y]
//   fielduse[k,i,y]  fieldbal[k,i,y]  lead[g,y]  once[g,y]  life[g,y]
//   bal[i,t,h,y]  pmax[g,t,h,y]  status[g,y]  reserve[y]  rpsreq[k,y]
//   chgmax[g,t,h,y]  dismax[g,t,h,y]  socdyn[g,t,h,y]  socfirst[g,t,y]
//   soclast[g,t,y]
//
// Stage problems add "z:KEY" state-in columns, "link:KEY" rows, the
// cost-to-go column "alpha[y]" and cut rows "cut[y,n]".

#ifndef SCGEP_BUILDER_HPP_
#define SCGEP_BUILDER_HPP_

#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "scgep/milp.hpp"
#include "scgep/model.hpp"

namespace scgep {

struct ColumnSpec {
  std::string key;
  VarKind kind;
  int year;
  double lower = 0.0;
  double upper = kInfinity;
  double cost = 0.0;
  bool integral = false;

  bool fixed() const { return lower == upper; }
};

enum class RowFamily {
  kMaterialDemand,
  kComponentDemand,
  kMaterialSupply,
  kStockBalance,
  kProductCapacity,
  kFieldUse,
  kFieldBalance,
  kLeadTime,
  kSinglePlan,
  kLifetime,
  kEnergyBalance,
  kOutputLimit,
  kStatus,
  kReserve,
  kRps,
  kChargeLimit,
  kDischargeLimit,
  kSocDynamics,
  kSocFirst,
  kSocLast,
};

struct RowSpec {
  std::string key;
  RowFamily family;
  int year;
  RowSense sense = RowSense::kLessEqual;
  double rhs = 0.0;
  std::vector<std::pair<std::string, double>> terms;  // column key, coefficient
};

// Year T^RT actually used for an existing unit: never before the second
// model year, so units past their design life run for one more year.
int effective_retirement_year(const SystemModel& model,
                              const GeneratorAsset& asset);

// (pool, zone) pairs that carry a field ledger, sorted.
std::vector<std::pair<std::string, std::string>> field_pools(
    const SystemModel& model);

// Present-value investment cost per MW for a decision in `year`, prorated by
// the share of the lifetime that falls inside the horizon.
double adjusted_investment_cost(const SystemModel& model,
                                const GeneratorAsset& asset, int year);

// Columns of one year with bounds, integrality and objective coefficients.
std::vector<ColumnSpec> build_columns(const SystemModel& model, int year);
// Objective coefficients of the columns of `year`.
std::vector<std::pair<std::string, double>> build_objective(
    const SystemModel& model, int year);
std::vector<RowSpec> build_sc_constraints(const SystemModel& model, int year);
std::vector<RowSpec> build_gep_constraints(const SystemModel& model, int year);
std::vector<RowSpec> build_storage_constraints(const SystemModel& model,
                                               int year);

// All years together.
struct Formulation {
  std::vector<int> years;
  std::vector<ColumnSpec> columns;
  std::vector<RowSpec> rows;
  std::unordered_map<std::string, int> column_index;

  const ColumnSpec* find_column(const std::string& key) const;
  // Cost of `values` (indexed like `columns`).
  double objective(const std::vector<double>& values) const;
  // Largest bound or row violation of `values`.
  double max_violation(const std::vector<double>& values) const;
};

Formulation formulate(const SystemModel& model);

SparseProblem to_problem(const Formulation& formulation);
SparseProblem build_monolithic(const SystemModel& model);

struct StateVector {
  std::vector<std::string> keys;
  std::vector<double> values;
};

struct StageProblem {
  int year_index = 0;
  int year = 0;
  SparseProblem problem;
  // Incoming state: keys of earlier-year columns, each with a "z:KEY" column
  // and a "link:KEY" row whose right-hand side receives the trial value.
  std::vector<std::string> state_in;
  std::vector<int> state_in_columns;
  std::vector<int> link_rows;
  // Outgoing state, sorted. Columns hold the value handed to the next stage.
  std::vector<std::string> state_out;
  std::vector<int> state_out_columns;
  // -1 in the final year.
  int alpha_column = -1;
  // Formulation columns owned by this stage, paired with their problem column.
  std::vector<std::pair<int, int>> local_columns;

  void set_state_in(const std::vector<double>& values);
};

std::vector<StageProblem> build_stages(const Formulation& formulation);
StageProblem build_stage(const SystemModel& model, int year);

// Plain-language description of what a row key enforces. Throws ModelError
// for keys that no builder emits.
std::string explain_row(const std::string& key);

}  // namespace scgep

#endif  // SCGEP_BUILDER_HPP_
