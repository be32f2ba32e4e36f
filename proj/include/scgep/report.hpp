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

// Planning reports: what was built, retired and operated, the material and
// field ledgers, reliability penalties and the cost breakdown. A report
// carries enough data to re-check the plan's accounting identities without
// the model or the solver.

#ifndef SCGEP_REPORT_HPP_
#define SCGEP_REPORT_HPP_

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "scgep/builder.hpp"
#include "scgep/model.hpp"

namespace scgep {

inline constexpr int kReportSchemaVersion = 1;

class ReportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct UnitInfo {
  std::string id;
  std::string zone;
  std::string technology;
  bool candidate = false;
  double capacity_mw = 0.0;
  double energy_mwh = 0.0;  // storage only
  int lead_time = 0;
  int lifetime = 0;
  int retirement_year = 0;  // existing units, as applied

  bool operator==(const UnitInfo&) const = default;
};

struct UnitYear {
  std::string unit;
  int year = 0;
  double plan = 0.0;  // d, zero for existing units
  double build = 0.0;
  double retire = 0.0;
  double operate = 0.0;

  bool operator==(const UnitYear&) const = default;
};

struct CapacityRecord {
  std::string technology;
  int year = 0;
  double operational_mw = 0.0;
  double planned_mw = 0.0;  // decided this year
  double built_mw = 0.0;    // came online this year
  double retired_mw = 0.0;

  bool operator==(const CapacityRecord&) const = default;
};

struct MaterialRecord {
  std::string material;
  int year = 0;
  double primary_supply = 0.0;
  double recovered = 0.0;
  double stock = 0.0;
  double used = 0.0;
  // Supply + recovery + stock - use.
  double remaining = 0.0;

  bool operator==(const MaterialRecord&) const = default;
};

struct FieldRecord {
  std::string pool;
  std::string zone;
  int year = 0;
  double initial = 0.0;  // first year only
  double available = 0.0;
  double deployed = 0.0;  // area of capacity decided this year
  double returned = 0.0;  // area released by retirements this year

  bool operator==(const FieldRecord&) const = default;
};

struct ReliabilityRecord {
  int year = 0;
  double demand_mwh = 0.0;
  double load_shed_mwh = 0.0;
  double reserve_shortfall_mw = 0.0;
  double rps_shortfall_mwh = 0.0;

  bool operator==(const ReliabilityRecord&) const = default;
};

struct RpsRecord {
  std::string technology;
  int year = 0;
  double shortfall_mwh = 0.0;

  bool operator==(const RpsRecord&) const = default;
};

struct DispatchRecord {
  std::string technology;
  int year = 0;
  double generation_mwh = 0.0;  // discharge for storage
  double charge_mwh = 0.0;

  bool operator==(const DispatchRecord&) const = default;
};

struct StorageRecord {
  std::string unit;
  std::string day;
  int year = 0;
  double soc_first = 0.0;
  double soc_last = 0.0;
  double operate = 0.0;
  double energy_mwh = 0.0;

  bool operator==(const StorageRecord&) const = default;
};

struct CostRecord {
  int year = 0;
  double investment = 0.0;
  double operation = 0.0;
  double penalty = 0.0;
  double total() const { return investment + operation + penalty; }

  bool operator==(const CostRecord&) const = default;
};

struct PlanReport {
  int schema_version = kReportSchemaVersion;
  std::string model_name;
  std::string model_digest;
  std::string method;  // "monolithic" or "nbd"
  std::string status;
  double objective = 0.0;
  double lower_bound = 0.0;
  double gap = 0.0;
  int iterations = 0;
  std::vector<int> years;
  std::vector<UnitInfo> units;
  std::vector<UnitYear> unit_years;
  std::vector<CapacityRecord> capacity;
  std::vector<MaterialRecord> materials;
  std::vector<FieldRecord> fields;
  std::vector<ReliabilityRecord> reliability;
  std::vector<RpsRecord> rps;
  std::vector<DispatchRecord> dispatch;
  std::vector<StorageRecord> storage;
  std::vector<CostRecord> costs;

  double cost_total() const;
  bool operator==(const PlanReport&) const = default;
};

// Builds the report from values indexed like formulation.columns. Sets
// objective to the recomputed plan cost; bounds and status are left to the
// caller.
PlanReport make_plan_report(const SystemModel& model,
                            const Formulation& formulation,
                            const std::vector<double>& values);

std::string plan_to_json(const PlanReport& report);
PlanReport plan_from_json(const std::string& text);

// plan.json plus capacity/materials/fields/reliability/costs CSVs.
void write_report(const PlanReport& report, const std::filesystem::path& dir);
PlanReport read_report(const std::filesystem::path& dir);

// Human-readable tables.
std::string render_report(const PlanReport& report);

// Accounting identities re-derived from the report alone. Returns one
// message per violation larger than `tolerance`.
std::vector<std::string> check_plan_invariants(const PlanReport& report,
                                               double tolerance = 1e-6);

struct RunComparison {
  // Built capacity difference (B - A) by technology then year.
  std::map<std::string, std::map<int, double>> built_mw_delta;
  std::map<int, double> cost_delta;
  double objective_delta = 0.0;

  bool all_zero(double tolerance = 1e-9) const;
};

RunComparison compare_runs(const PlanReport& a, const PlanReport& b);
RunComparison compare_runs(const std::filesystem::path& dir_a,
                           const std::filesystem::path& dir_b);
std::string render_comparison(const RunComparison& diff);

// Shortest decimal that round-trips to the same double.
std::string format_double(double value);

}  // namespace scgep

#endif  // SCGEP_REPORT_HPP_
