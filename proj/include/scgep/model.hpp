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

// Input data of the supply-chain-constrained expansion planning model.
//
// Units: power in MW, energy in MWh, area in km^2, materials in tonnes,
// money in $. Hourly series are stored flat in (year, day, hour) order; see
// TimeStructure::slot().

#ifndef SCGEP_MODEL_HPP_
#define SCGEP_MODEL_HPP_

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace scgep {

class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Corridor {
  std::string id;
  std::string from;
  std::string to;
  double capacity_mw = 0.0;
};

struct Topology {
  std::vector<std::string> zones;
  std::vector<Corridor> corridors;
};

enum class TechType { kThermal, kRenewable, kStorage };

std::string_view to_string(TechType type);
std::optional<TechType> parse_tech_type(std::string_view text);

struct Technology {
  std::string id;
  TechType type = TechType::kThermal;
  // MW per km^2; zero means the technology does not consume field area.
  double capacity_density = 0.0;
  // Area pool drawn from by new builds (defaults to the technology id) and
  // the pool credited when a unit retires (defaults to `field`).
  std::string field;
  std::string return_field;
  // ELCC factor by year, in [0, 1].
  std::map<int, double> elcc;

  bool uses_land() const { return capacity_density > 0.0; }
  const std::string& build_pool() const { return field.empty() ? id : field; }
  const std::string& return_pool() const {
    return return_field.empty() ? build_pool() : return_field;
  }
  double elcc_at(int year) const;
};

struct Component {
  std::string id;
  // Tonnes of each material per component unit.
  std::map<std::string, double> material_use;
};

struct Product {
  std::string id;
  std::string technology;
  // Component units per MW of product.
  std::map<std::string, double> component_use;
};

struct TechnologyCatalog {
  std::vector<Technology> technologies;
  std::vector<std::string> materials;
  std::vector<Component> components;
  std::vector<Product> products;

  const Technology* find_technology(std::string_view id) const;
  const Product* find_product(std::string_view id) const;
};

enum class Existence { kExisting, kCandidate };
enum class Integrality { kBinary, kContinuous };

struct StorageParams {
  double energy_mwh = 0.0;
  double charge_efficiency = 1.0;
  double discharge_efficiency = 1.0;
};

struct GeneratorAsset {
  std::string id;
  std::string zone;
  std::string technology;
  std::string product;  // candidates only, optional
  Existence existence = Existence::kExisting;
  double capacity_mw = 0.0;
  std::optional<StorageParams> storage;
  int lead_time = 0;                   // candidates
  int lifetime = 0;                    // years
  std::optional<int> retirement_year;  // existing
  Integrality integrality = Integrality::kContinuous;
  std::map<int, double> investment_cost;  // $/MW by decision year
  std::map<int, double> fixed_cost;       // $/MW-year
  double variable_cost = 0.0;             // $/MWh

  bool candidate() const { return existence == Existence::kCandidate; }
};

struct RepresentativeDay {
  std::string id;
  // Annual occurrences N_ty by year.
  std::map<int, double> weight;
};

struct TimeStructure {
  std::vector<int> years;
  std::vector<RepresentativeDay> days;
  int hours = 24;
  double discount_rate = 0.0;

  int first_year() const { return years.front(); }
  int last_year() const { return years.back(); }
  int num_years() const { return static_cast<int>(years.size()); }
  int num_days() const { return static_cast<int>(days.size()); }
  std::size_t slots() const {
    return years.size() * days.size() * static_cast<std::size_t>(hours);
  }
  // Flat index of (year index, day index, zero-based hour).
  std::size_t slot(int year_index, int day, int hour) const {
    return (static_cast<std::size_t>(year_index) * days.size() + day) * hours +
           hour;
  }
  // -1 when the year is outside the horizon.
  int year_index(int year) const;
  double weight(int day, int year) const;
};

// Hourly series over the full (year, day, hour) grid.
using HourlySeries = std::vector<double>;

struct ScenarioData {
  std::map<std::string, HourlySeries> load;  // by zone, MW
  // Renewable availability by (zone, technology), unitless.
  std::map<std::pair<std::string, std::string>, HourlySeries> availability;
  // Exogenous net import injection by zone, MW. Missing zones inject zero.
  std::map<std::string, HourlySeries> imports;
  std::map<int, double> peak_load;       // MW
  std::map<int, double> reserve_margin;  // fraction
  // RPS mandate by technology and year, fraction of annual demand.
  std::map<std::string, std::map<int, double>> rps;
};

struct FieldArea {
  std::string zone;
  std::string field;
  double area_km2 = 0.0;
};

struct SupplyChainData {
  std::map<std::string, std::map<int, double>> primary_supply;  // t/year
  // Recovered tonnes per MW retired, by unit then material.
  std::map<std::string, std::map<std::string, double>> recovery;
  std::vector<FieldArea> fields;
  std::map<std::string, double> initial_stock;  // t

  double supply(const std::string& material, int year) const;
  double recovery_rate(const std::string& unit,
                       const std::string& material) const;
  double initial_area(const std::string& zone, const std::string& field) const;
};

struct PenaltyPrices {
  double voll = 10000.0;      // $/MWh
  double reserve = 263000.0;  // $/MW-year
  double rps = 60.0;          // $/MWh
};

struct SystemModel {
  std::string name;
  Topology topology;
  TechnologyCatalog catalog;
  std::vector<GeneratorAsset> assets;
  TimeStructure time;
  ScenarioData scenario;
  SupplyChainData supply_chain;
  PenaltyPrices penalties;

  const Technology& technology_of(const GeneratorAsset& asset) const;
  const GeneratorAsset* find_asset(std::string_view id) const;
  double load(const std::string& zone, int year_index, int day, int hour) const;
  double import_injection(const std::string& zone, int year_index, int day,
                          int hour) const;
  double availability(const GeneratorAsset& asset, int year_index, int day,
                      int hour) const;
  double peak_load(int year) const;
};

enum class Severity { kError, kWarning };

struct Issue {
  Severity severity;
  std::string where;
  std::string message;

  bool operator==(const Issue&) const = default;
};

struct ValidationReport {
  std::vector<Issue> issues;

  bool ok() const;
  std::size_t error_count() const;
  std::size_t warning_count() const;
  bool has_error(std::string_view fragment) const;
  bool operator==(const ValidationReport&) const = default;
};

ValidationReport validate(const SystemModel& model);

// Decision-variable families and their canonical keys, e.g.
// p[U1,d1,5,2026] for the output of unit U1 on day d1, hour 5, year 2026.
enum class VarKind {
  kGeneration,        // p[g,t,h,y]
  kFlow,              // q[l,t,h,y]
  kLoadShed,          // ls[i,t,h,y]
  kReserveShortfall,  // rm[y]
  kCharge,            // c[g,t,h,y]
  kDischarge,         // dc[g,t,h,y]
  kStateOfCharge,     // soc[g,t,h,y]
  kRpsShortfall,      // rps[k,y]
  kPlan,              // d[g,y]
  kBuild,             // b[g,y]
  kRetire,            // r[g,y]
  kOperate,           // o[g,y]
  kMaterialUse,       // u[m,y]
  kComponentOutput,   // v[c,y]
  kProductOutput,     // w[p,y]
  kStock,             // s[m,y]
  kField,             // f[k,i,y]
};

struct VarKindInfo {
  VarKind kind;
  std::string_view name;    // e.g. "gen-output"
  std::string_view prefix;  // e.g. "p"
  int arity;
};

const std::vector<VarKindInfo>& var_kinds();
const VarKindInfo& var_kind_info(VarKind kind);
std::optional<VarKind> parse_var_kind(std::string_view name);

std::string variable_key(VarKind kind, const std::vector<std::string>& indices);
// Kind by family name ("gen-output", "build", "field", ...); throws
// ModelError for unknown names or arity mismatches.
std::string variable_key(std::string_view kind,
                         const std::vector<std::string>& indices);

// Characters that identifiers may not contain, keeping keys injective.
inline constexpr std::string_view kReservedIdChars = "[],: \t\n";

}  // namespace scgep

#endif  // SCGEP_MODEL_HPP_
