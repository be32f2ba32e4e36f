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
#include <numeric>
#include <set>
#include <sstream>

#include "scgep/model.hpp"

namespace scgep {

std::string_view to_string(TechType type) {
  switch (type) {
    case TechType::kThermal:
      return "thermal";
    case TechType::kRenewable:
      return "renewable";
    case TechType::kStorage:
      return "storage";
  }
  return "?";
}

std::optional<TechType> parse_tech_type(std::string_view text) {
  if (text == "thermal") return TechType::kThermal;
  if (text == "renewable") return TechType::kRenewable;
  if (text == "storage") return TechType::kStorage;
  return std::nullopt;
}

double Technology::elcc_at(int year) const {
  auto it = elcc.find(year);
  return it == elcc.end() ? 0.0 : it->second;
}

const Technology* TechnologyCatalog::find_technology(std::string_view id) const {
  for (const Technology& t : technologies) {
    if (t.id == id) return &t;
  }
  return nullptr;
}

const Product* TechnologyCatalog::find_product(std::string_view id) const {
  for (const Product& p : products) {
    if (p.id == id) return &p;
  }
  return nullptr;
}

int TimeStructure::year_index(int year) const {
  auto it = std::find(years.begin(), years.end(), year);
  return it == years.end() ? -1 : static_cast<int>(it - years.begin());
}

double TimeStructure::weight(int day, int year) const {
  const auto& w = days[day].weight;
  auto it = w.find(year);
  return it == w.end() ? 0.0 : it->second;
}

double SupplyChainData::supply(const std::string& material, int year) const {
  auto it = primary_supply.find(material);
  if (it == primary_supply.end()) return 0.0;
  auto jt = it->second.find(year);
  return jt == it->second.end() ? 0.0 : jt->second;
}

double SupplyChainData::recovery_rate(const std::string& unit,
                                      const std::string& material) const {
  auto it = recovery.find(unit);
  if (it == recovery.end()) return 0.0;
  auto jt = it->second.find(material);
  return jt == it->second.end() ? 0.0 : jt->second;
}

double SupplyChainData::initial_area(const std::string& zone,
                                     const std::string& field) const {
  double area = 0.0;
  for (const FieldArea& f : fields) {
    if (f.zone == zone && f.field == field) area += f.area_km2;
  }
  return area;
}

const Technology& SystemModel::technology_of(const GeneratorAsset& asset) const {
  const Technology* t = catalog.find_technology(asset.technology);
  if (t == nullptr) {
    throw ModelError("unit " + asset.id + " has unknown technology " +
                     asset.technology);
  }
  return *t;
}

const GeneratorAsset* SystemModel::find_asset(std::string_view id) const {
  for (const GeneratorAsset& a : assets) {
    if (a.id == id) return &a;
  }
  return nullptr;
}

double SystemModel::load(const std::string& zone, int year_index, int day,
                         int hour) const {
  auto it = scenario.load.find(zone);
  if (it == scenario.load.end()) return 0.0;
  return it->second[time.slot(year_index, day, hour)];
}

double SystemModel::import_injection(const std::string& zone, int year_index,
                                     int day, int hour) const {
  auto it = scenario.imports.find(zone);
  if (it == scenario.imports.end()) return 0.0;
  return it->second[time.slot(year_index, day, hour)];
}

double SystemModel::availability(const GeneratorAsset& asset, int year_index,
                                 int day, int hour) const {
  auto it = scenario.availability.find({asset.zone, asset.technology});
  if (it == scenario.availability.end()) return 0.0;
  return it->second[time.slot(year_index, day, hour)];
}

double SystemModel::peak_load(int year) const {
  auto it = scenario.peak_load.find(year);
  return it == scenario.peak_load.end() ? 0.0 : it->second;
}

bool ValidationReport::ok() const { return error_count() == 0; }

std::size_t ValidationReport::error_count() const {
  return std::count_if(issues.begin(), issues.end(), [](const Issue& i) {
    return i.severity == Severity::kError;
  });
}

std::size_t ValidationReport::warning_count() const {
  return issues.size() - error_count();
}

bool ValidationReport::has_error(std::string_view fragment) const {
  return std::any_of(issues.begin(), issues.end(), [&](const Issue& i) {
    return i.severity == Severity::kError &&
           i.message.find(fragment) != std::string::npos;
  });
}

namespace {

class Checker {
 public:
  explicit Checker(ValidationReport& report) : report_(report) {}

  void error(std::string where, std::string message) {
    report_.issues.push_back(
        {Severity::kError, std::move(where), std::move(message)});
  }
  void warning(std::string where, std::string message) {
    report_.issues.push_back(
        {Severity::kWarning, std::move(where), std::move(message)});
  }
  void identifier(const std::string& where, const std::string& id) {
    if (id.empty()) {
      error(where, "empty identifier");
    } else if (id.find_first_of(kReservedIdChars) != std::string::npos) {
      error(where, "identifier '" + id + "' contains a reserved character");
    }
  }
  void non_negative(const std::string& where, double v, const char* what) {
    if (!std::isfinite(v) || v < 0) {
      error(where, std::string(what) + " must be finite and >= 0");
    }
  }

 private:
  ValidationReport& report_;
};

template <typename Range, typename Key>
void check_unique(Checker& check, const char* what, const Range& items,
                  Key key) {
  std::set<std::string> seen;
  for (const auto& item : items) {
    const std::string& id = key(item);
    if (!seen.insert(id).second) {
      check.error(std::string(what) + " " + id, "duplicate id");
    }
  }
}

void validate_topology(const SystemModel& model, Checker& check) {
  const Topology& topo = model.topology;
  if (topo.zones.empty()) check.error("topology", "no zones declared");
  check_unique(check, "zone", topo.zones, [](const std::string& z) -> const std::string& { return z; });
  check_unique(check, "corridor", topo.corridors,
               [](const Corridor& c) -> const std::string& { return c.id; });
  const std::set<std::string> zones(topo.zones.begin(), topo.zones.end());
  for (const std::string& z : topo.zones) check.identifier("zone", z);
  for (const Corridor& c : topo.corridors) {
    const std::string where = "corridor " + c.id;
    check.identifier(where, c.id);
    if (!zones.contains(c.from)) check.error(where, "unknown zone " + c.from);
    if (!zones.contains(c.to)) check.error(where, "unknown zone " + c.to);
    if (c.from == c.to) check.error(where, "endpoints must be distinct");
    check.non_negative(where, c.capacity_mw, "transfer capacity");
  }
}

void validate_catalog(const SystemModel& model, Checker& check) {
  const TechnologyCatalog& cat = model.catalog;
  check_unique(check, "technology", cat.technologies,
               [](const Technology& t) -> const std::string& { return t.id; });
  check_unique(check, "material", cat.materials,
               [](const std::string& m) -> const std::string& { return m; });
  check_unique(check, "component", cat.components,
               [](const Component& c) -> const std::string& { return c.id; });
  check_unique(check, "product", cat.products,
               [](const Product& p) -> const std::string& { return p.id; });
  const std::set<std::string> materials(cat.materials.begin(),
                                        cat.materials.end());
  std::set<std::string> components;
  for (const Component& c : cat.components) components.insert(c.id);

  for (const Technology& t : cat.technologies) {
    const std::string where = "technology " + t.id;
    check.identifier(where, t.id);
    if (!t.field.empty()) check.identifier(where, t.field);
    if (!t.return_field.empty()) check.identifier(where, t.return_field);
    if (!std::isfinite(t.capacity_density) || t.capacity_density < 0) {
      check.error(where, "capacity density must be > 0 for land-using "
                         "technologies (0 disables land use)");
    }
    for (const auto& [year, f] : t.elcc) {
      if (!(f >= 0 && f <= 1)) check.error(where, "ELCC factor outside [0,1]");
    }
  }
  for (const std::string& m : cat.materials) check.identifier("material", m);
  for (const Component& c : cat.components) {
    const std::string where = "component " + c.id;
    check.identifier(where, c.id);
    for (const auto& [m, qty] : c.material_use) {
      if (!materials.contains(m)) check.error(where, "unknown material " + m);
      check.non_negative(where, qty, "material demand");
    }
  }
  for (const Product& p : cat.products) {
    const std::string where = "product " + p.id;
    check.identifier(where, p.id);
    if (cat.find_technology(p.technology) == nullptr) {
      check.error(where, "unknown technology " + p.technology);
    }
    for (const auto& [c, qty] : p.component_use) {
      if (!components.contains(c)) check.error(where, "unknown component " + c);
      check.non_negative(where, qty, "component demand");
    }
  }
}

bool consumes_materials(const SystemModel& model, const std::string& tech) {
  for (const Product& p : model.catalog.products) {
    if (p.technology != tech) continue;
    for (const auto& [cid, units] : p.component_use) {
      if (units <= 0) continue;
      for (const Component& c : model.catalog.components) {
        if (c.id != cid) continue;
        for (const auto& [m, t] : c.material_use) {
          if (t > 0) return true;
        }
      }
    }
  }
  return false;
}

void validate_assets(const SystemModel& model, Checker& check) {
  check_unique(check, "unit", model.assets,
               [](const GeneratorAsset& a) -> const std::string& { return a.id; });
  const std::set<std::string> zones(model.topology.zones.begin(),
                                    model.topology.zones.end());
  const TimeStructure& time = model.time;
  for (const GeneratorAsset& a : model.assets) {
    const std::string where = "unit " + a.id;
    check.identifier(where, a.id);
    if (!zones.contains(a.zone)) check.error(where, "unknown zone " + a.zone);
    const Technology* tech = model.catalog.find_technology(a.technology);
    if (tech == nullptr) {
      check.error(where, "unknown technology " + a.technology);
      continue;
    }
    if (!(a.capacity_mw > 0) || !std::isfinite(a.capacity_mw)) {
      check.error(where, "power capacity must be > 0");
    }
    const bool is_storage = tech->type == TechType::kStorage;
    if (is_storage != a.storage.has_value()) {
      check.error(where, is_storage ? "storage unit lacks storage parameters"
                                    : "storage parameters on a non-storage unit");
    }
    if (a.storage) {
      if (!(a.storage->energy_mwh > 0)) {
        check.error(where, "storage energy capacity must be > 0");
      }
      for (double eff :
           {a.storage->charge_efficiency, a.storage->discharge_efficiency}) {
        if (!(eff > 0 && eff <= 1)) {
          check.error(where, "efficiency out of (0,1]");
        }
      }
    }
    const bool should_be_binary = tech->type == TechType::kThermal;
    if (should_be_binary != (a.integrality == Integrality::kBinary)) {
      check.error(where,
                  "integrality class must be binary iff the unit is thermal");
    }
    if (a.lifetime <= 0) check.error(where, "lifetime must be > 0 years");
    if (a.candidate()) {
      if (a.lead_time < 0) check.error(where, "lead time must be >= 0");
      if (a.retirement_year) {
        check.error(where, "candidates retire by lifetime, not a fixed year");
      }
      if (!a.product.empty()) {
        const Product* p = model.catalog.find_product(a.product);
        if (p == nullptr) {
          check.error(where, "unknown product " + a.product);
        } else if (p->technology != a.technology) {
          check.error(where, "product " + a.product +
                                 " belongs to another technology");
        }
      }
      for (int y : time.years) {
        auto it = a.investment_cost.find(y);
        if (it == a.investment_cost.end()) {
          check.error(where, "missing investment cost for year " +
                                 std::to_string(y));
        } else {
          check.non_negative(where, it->second, "investment cost");
        }
      }
      if (!time.years.empty() &&
          time.first_year() + a.lead_time > time.last_year()) {
        check.warning(where, "lead time exceeds the horizon; never buildable");
      }
      if (tech->uses_land()) {
        double area = model.supply_chain.initial_area(a.zone, tech->build_pool());
        if (area <= 0) {
          check.warning(where, "no field area declared for pool " +
                                   tech->build_pool() + " in zone " + a.zone);
        }
      }
    } else {
      if (!a.retirement_year) {
        check.error(where, "existing unit lacks a retirement year");
      }
      if (!a.product.empty()) {
        check.error(where, "product applies to candidates only");
      }
    }
    for (int y : time.years) {
      auto it = a.fixed_cost.find(y);
      if (it == a.fixed_cost.end()) {
        check.error(where, "missing fixed cost for year " + std::to_string(y));
      } else {
        check.non_negative(where, it->second, "fixed cost");
      }
    }
    check.non_negative(where, a.variable_cost, "variable cost");
  }
}

void validate_time(const SystemModel& model, Checker& check) {
  const TimeStructure& time = model.time;
  if (time.years.empty()) check.error("time", "no years declared");
  for (std::size_t k = 1; k < time.years.size(); ++k) {
    if (time.years[k] != time.years[k - 1] + 1) {
      check.error("time", "years must be consecutive and increasing");
      break;
    }
  }
  if (time.days.empty()) check.error("time", "no representative days declared");
  if (time.hours < 1) check.error("time", "hours per day must be >= 1");
  if (!(time.discount_rate > -1) || !std::isfinite(time.discount_rate)) {
    check.error("time", "discount rate must be > -1");
  }
  check_unique(check, "day", time.days,
               [](const RepresentativeDay& d) -> const std::string& { return d.id; });
  for (const RepresentativeDay& d : time.days) check.identifier("day", d.id);
  for (int y : time.years) {
    double total = 0.0;
    for (int t = 0; t < time.num_days(); ++t) {
      const double w = time.weight(t, y);
      if (!(w > 0)) {
        check.error("day " + time.days[t].id,
                    "weight must be > 0 in year " + std::to_string(y));
      }
      total += w;
    }
    if (total < 364 - 1e-9 || total > 366 + 1e-9) {
      check.error("time", "day weights of year " + std::to_string(y) +
                              " sum to " + std::to_string(total) +
                              ", outside [364, 366]");
    }
  }
}

void check_series(Checker& check, const std::string& where,
                  const HourlySeries& series, std::size_t expected) {
  if (series.size() != expected) {
    check.error(where, "series has " + std::to_string(series.size()) +
                           " values, expected " + std::to_string(expected));
  }
}

void validate_scenario(const SystemModel& model, Checker& check) {
  const TimeStructure& time = model.time;
  const ScenarioData& sc = model.scenario;
  const std::size_t expected = time.slots();
  for (const std::string& z : model.topology.zones) {
    auto it = sc.load.find(z);
    if (it == sc.load.end()) {
      check.error("load " + z, "missing load series");
      continue;
    }
    check_series(check, "load " + z, it->second, expected);
    for (double v : it->second) {
      if (!std::isfinite(v) || v < 0) {
        check.error("load " + z, "loads must be finite and >= 0");
        break;
      }
    }
  }
  for (const auto& [zone, series] : sc.load) {
    if (std::find(model.topology.zones.begin(), model.topology.zones.end(),
                  zone) == model.topology.zones.end()) {
      check.error("load " + zone, "unknown zone " + zone);
    }
  }
  for (const auto& [zone, series] : sc.imports) {
    const std::string where = "imports " + zone;
    auto load = sc.load.find(zone);
    if (load == sc.load.end()) {
      check.error(where, "unknown zone " + zone);
      continue;
    }
    check_series(check, where, series, expected);
    if (series.size() != load->second.size()) continue;
    for (std::size_t k = 0; k < series.size(); ++k) {
      if (!std::isfinite(series[k]) || series[k] < 0 ||
          series[k] > load->second[k] + 1e-9) {
        check.error(where, "net import must lie within [0, load]");
        break;
      }
    }
  }
  std::set<std::pair<std::string, std::string>> needed;
  for (const GeneratorAsset& a : model.assets) {
    const Technology* t = model.catalog.find_technology(a.technology);
    if (t != nullptr && t->type == TechType::kRenewable) {
      needed.insert({a.zone, a.technology});
    }
  }
  for (const auto& key : needed) {
    const std::string where = "availability " + key.first + "/" + key.second;
    auto it = sc.availability.find(key);
    if (it == sc.availability.end()) {
      check.error(where, "missing availability series");
      continue;
    }
    check_series(check, where, it->second, expected);
    bool all_zero = true;
    for (double v : it->second) {
      if (!(v >= 0 && v <= 1)) {
        check.error(where, "availability outside [0,1]");
        break;
      }
      all_zero = all_zero && v == 0.0;
    }
    if (all_zero) check.warning(where, "availability is identically zero");
  }
  for (int yi = 0; yi < time.num_years(); ++yi) {
    const int y = time.years[yi];
    const std::string where = "year " + std::to_string(y);
    auto peak = sc.peak_load.find(y);
    if (peak == sc.peak_load.end()) {
      check.error(where, "missing system peak load");
    } else {
      check.non_negative(where, peak->second, "peak load");
      double coincident = 0.0;
      for (int t = 0; t < time.num_days(); ++t) {
        for (int h = 0; h < time.hours; ++h) {
          double total = 0.0;
          for (const auto& [zone, series] : sc.load) {
            if (series.size() == expected) total += series[time.slot(yi, t, h)];
          }
          coincident = std::max(coincident, total);
        }
      }
      if (peak->second + 1e-9 < coincident) {
        check.warning(where, "peak load below the largest coincident load");
      }
    }
    auto rm = sc.reserve_margin.find(y);
    if (rm == sc.reserve_margin.end()) {
      check.error(where, "missing reserve margin");
    } else {
      check.non_negative(where, rm->second, "reserve margin");
    }
  }
  for (const auto& [tech, by_year] : sc.rps) {
    const Technology* t = model.catalog.find_technology(tech);
    if (t == nullptr) {
      check.error("rps " + tech, "unknown technology " + tech);
    } else if (t->type == TechType::kStorage) {
      check.error("rps " + tech, "storage cannot carry a generation mandate");
    }
    for (const auto& [y, f] : by_year) {
      if (!(f >= 0 && f <= 1)) check.error("rps " + tech, "mandate outside [0,1]");
    }
  }
}

void validate_supply_chain(const SystemModel& model, Checker& check) {
  const SupplyChainData& scd = model.supply_chain;
  const auto& materials = model.catalog.materials;
  auto known_material = [&](const std::string& m) {
    return std::find(materials.begin(), materials.end(), m) != materials.end();
  };
  for (const auto& [m, by_year] : scd.primary_supply) {
    if (!known_material(m)) check.error("supply " + m, "unknown material " + m);
    for (const auto& [y, v] : by_year) {
      check.non_negative("supply " + m, v, "primary supply");
    }
  }
  for (const auto& [unit, rates] : scd.recovery) {
    const std::string where = "recovery " + unit;
    const GeneratorAsset* a = model.find_asset(unit);
    if (a == nullptr) {
      check.error(where, "unknown unit " + unit);
      continue;
    }
    bool any = false;
    for (const auto& [m, rate] : rates) {
      if (!known_material(m)) check.error(where, "unknown material " + m);
      check.non_negative(where, rate, "recovery rate");
      any = any || rate > 0;
    }
    if (any && !consumes_materials(model, a->technology)) {
      check.error(where, "recovery defined for a technology that consumes no "
                         "modeled material");
    }
  }
  const std::set<std::string> zones(model.topology.zones.begin(),
                                    model.topology.zones.end());
  for (const FieldArea& f : scd.fields) {
    const std::string where = "field " + f.zone + "/" + f.field;
    if (!zones.contains(f.zone)) check.error(where, "unknown zone " + f.zone);
    check.identifier(where, f.field);
    check.non_negative(where, f.area_km2, "field area");
  }
  for (const auto& [m, v] : scd.initial_stock) {
    if (!known_material(m)) check.error("stock " + m, "unknown material " + m);
    check.non_negative("stock " + m, v, "initial stock");
  }
}

}  // namespace

ValidationReport validate(const SystemModel& model) {
  ValidationReport report;
  Checker check(report);
  validate_topology(model, check);
  validate_catalog(model, check);
  validate_time(model, check);
  validate_assets(model, check);
  if (report.ok()) validate_scenario(model, check);
  validate_supply_chain(model, check);
  const PenaltyPrices& pen = model.penalties;
  check.non_negative("penalties", pen.voll, "VOLL");
  check.non_negative("penalties", pen.reserve, "reserve penalty");
  check.non_negative("penalties", pen.rps, "RPS penalty");
  return report;
}

const std::vector<VarKindInfo>& var_kinds() {
  static const std::vector<VarKindInfo> kinds = {
      {VarKind::kGeneration, "gen-output", "p", 4},
      {VarKind::kFlow, "flow", "q", 4},
      {VarKind::kLoadShed, "load-shed", "ls", 4},
      {VarKind::kReserveShortfall, "reserve-shortfall", "rm", 1},
      {VarKind::kCharge, "charge", "c", 4},
      {VarKind::kDischarge, "discharge", "dc", 4},
      {VarKind::kStateOfCharge, "soc", "soc", 4},
      {VarKind::kRpsShortfall, "rps-shortfall", "rps", 2},
      {VarKind::kPlan, "plan", "d", 2},
      {VarKind::kBuild, "build", "b", 2},
      {VarKind::kRetire, "retire", "r", 2},
      {VarKind::kOperate, "operate", "o", 2},
      {VarKind::kMaterialUse, "material-use", "u", 2},
      {VarKind::kComponentOutput, "component-output", "v", 2},
      {VarKind::kProductOutput, "product-output", "w", 2},
      {VarKind::kStock, "stock", "s", 2},
      {VarKind::kField, "field", "f", 3},
  };
  return kinds;
}

const VarKindInfo& var_kind_info(VarKind kind) {
  for (const VarKindInfo& info : var_kinds()) {
    if (info.kind == kind) return info;
  }
  throw ModelError("unknown variable kind");
}

std::optional<VarKind> parse_var_kind(std::string_view name) {
  for (const VarKindInfo& info : var_kinds()) {
    if (info.name == name) return info.kind;
  }
  return std::nullopt;
}

std::string variable_key(VarKind kind, const std::vector<std::string>& indices) {
  const VarKindInfo& info = var_kind_info(kind);
  if (static_cast<int>(indices.size()) != info.arity) {
    throw ModelError("variable family " + std::string(info.name) + " takes " +
                     std::to_string(info.arity) + " indices, got " +
                     std::to_string(indices.size()));
  }
  std::string key(info.prefix);
  key += '[';
  for (std::size_t k = 0; k < indices.size(); ++k) {
    if (k > 0) key += ',';
    key += indices[k];
  }
  key += ']';
  return key;
}

std::string variable_key(std::string_view kind,
                         const std::vector<std::string>& indices) {
  const std::optional<VarKind> parsed = parse_var_kind(kind);
  if (!parsed) throw ModelError("unknown variable family " + std::string(kind));
  return variable_key(*parsed, indices);
}

}  // namespace scgep
