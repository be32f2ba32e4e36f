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

#include "scgep/builder.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace scgep {
namespace {

std::string str(int v) { return std::to_string(v); }

std::string key(VarKind kind, std::initializer_list<std::string> idx) {
  return variable_key(kind, std::vector<std::string>(idx));
}

std::string row_key(const char* prefix, std::initializer_list<std::string> idx) {
  std::string k(prefix);
  k += '[';
  bool first = true;
  for (const std::string& s : idx) {
    if (!first) k += ',';
    k += s;
    first = false;
  }
  k += ']';
  return k;
}

int year_index_or_throw(const SystemModel& model, int year) {
  const int yi = model.time.year_index(year);
  if (yi < 0) throw ModelError("year " + str(year) + " is outside the horizon");
  return yi;
}

TechType type_of(const SystemModel& model, const GeneratorAsset& g) {
  return model.technology_of(g).type;
}

bool produces_power(TechType t) { return t != TechType::kStorage; }

bool rps_active(const SystemModel& model, const std::string& tech, int year) {
  auto it = model.scenario.rps.find(tech);
  if (it == model.scenario.rps.end()) return false;
  auto jt = it->second.find(year);
  return jt != it->second.end() && jt->second > 0.0;
}

double cost_at(const std::map<int, double>& series, const GeneratorAsset& g,
               int year, const char* what) {
  auto it = series.find(year);
  if (it == series.end()) {
    throw ModelError("unit " + g.id + " has no " + what + " for year " +
                     str(year));
  }
  return it->second;
}

// Operation cannot start inside the horizon.
bool decision_blocked(const SystemModel& model, const GeneratorAsset& g,
                      int year) {
  return year + g.lead_time > model.time.last_year();
}

}  // namespace

std::vector<std::pair<std::string, std::string>> field_pools(
    const SystemModel& model) {
  std::set<std::pair<std::string, std::string>> pools;
  for (const GeneratorAsset& g : model.assets) {
    const Technology& tech = model.technology_of(g);
    if (!tech.uses_land()) continue;
    if (g.candidate()) pools.insert({tech.build_pool(), g.zone});
    pools.insert({tech.return_pool(), g.zone});
  }
  for (const FieldArea& f : model.supply_chain.fields) {
    pools.insert({f.field, f.zone});
  }
  return {pools.begin(), pools.end()};
}

int effective_retirement_year(const SystemModel& model,
                              const GeneratorAsset& asset) {
  const int first = model.time.first_year();
  return std::max(asset.retirement_year.value_or(first + 1), first + 1);
}

double adjusted_investment_cost(const SystemModel& model,
                                const GeneratorAsset& asset, int year) {
  const TimeStructure& time = model.time;
  year_index_or_throw(model, year);
  const double base = cost_at(asset.investment_cost, asset, year,
                              "investment cost");
  const int operating = time.last_year() - (year + asset.lead_time) + 1;
  const int effective = std::clamp(operating, 0, asset.lifetime);
  const double share = static_cast<double>(effective) / asset.lifetime;
  return base * share *
         std::pow(1.0 + time.discount_rate, -(year - time.first_year()));
}

std::vector<ColumnSpec> build_columns(const SystemModel& model, int year) {
  const TimeStructure& time = model.time;
  const int yi = year_index_or_throw(model, year);
  const std::string ys = str(year);
  const bool first_year = yi == 0;
  std::vector<ColumnSpec> cols;
  auto add = [&](std::string k, VarKind kind, double lo, double hi,
                 bool integral = false) {
    cols.push_back({std::move(k), kind, year, lo, hi, 0.0, integral});
  };

  for (const GeneratorAsset& g : model.assets) {
    const TechType type = type_of(model, g);
    const bool binary = g.integrality == Integrality::kBinary;
    if (g.candidate()) {
      add(key(VarKind::kPlan, {g.id, ys}), VarKind::kPlan, 0.0,
          decision_blocked(model, g, year) ? 0.0 : 1.0, binary);
      const bool can_build = year - g.lead_time >= time.first_year();
      add(key(VarKind::kBuild, {g.id, ys}), VarKind::kBuild, 0.0,
          can_build ? 1.0 : 0.0, binary);
      const bool can_retire =
          year - g.lifetime - g.lead_time >= time.first_year();
      add(key(VarKind::kRetire, {g.id, ys}), VarKind::kRetire, 0.0,
          can_retire ? 1.0 : 0.0, binary);
      add(key(VarKind::kOperate, {g.id, ys}), VarKind::kOperate, 0.0,
          can_build ? 1.0 : 0.0, binary);
    } else {
      const int rt = effective_retirement_year(model, g);
      const double r = year == rt ? 1.0 : 0.0;
      const double o = year < rt ? 1.0 : 0.0;
      add(key(VarKind::kBuild, {g.id, ys}), VarKind::kBuild, 0.0, 0.0, binary);
      add(key(VarKind::kRetire, {g.id, ys}), VarKind::kRetire, r, r, binary);
      add(key(VarKind::kOperate, {g.id, ys}), VarKind::kOperate, o, o, binary);
    }
    for (int t = 0; t < time.num_days(); ++t) {
      const std::string& day = time.days[t].id;
      for (int h = 0; h < time.hours; ++h) {
        const std::string hs = str(h + 1);
        if (produces_power(type)) {
          add(key(VarKind::kGeneration, {g.id, day, hs, ys}),
              VarKind::kGeneration, 0.0, g.capacity_mw);
        } else {
          add(key(VarKind::kCharge, {g.id, day, hs, ys}), VarKind::kCharge, 0.0,
              g.capacity_mw);
          add(key(VarKind::kDischarge, {g.id, day, hs, ys}),
              VarKind::kDischarge, 0.0, g.capacity_mw);
          add(key(VarKind::kStateOfCharge, {g.id, day, hs, ys}),
              VarKind::kStateOfCharge, 0.0, g.storage->energy_mwh);
        }
      }
    }
  }
  for (const Corridor& l : model.topology.corridors) {
    for (int t = 0; t < time.num_days(); ++t) {
      for (int h = 0; h < time.hours; ++h) {
        add(key(VarKind::kFlow, {l.id, time.days[t].id, str(h + 1), ys}),
            VarKind::kFlow, -l.capacity_mw, l.capacity_mw);
      }
    }
  }
  for (const std::string& zone : model.topology.zones) {
    for (int t = 0; t < time.num_days(); ++t) {
      for (int h = 0; h < time.hours; ++h) {
        add(key(VarKind::kLoadShed, {zone, time.days[t].id, str(h + 1), ys}),
            VarKind::kLoadShed, 0.0, model.load(zone, yi, t, h));
      }
    }
  }
  add(key(VarKind::kReserveShortfall, {ys}), VarKind::kReserveShortfall, 0.0,
      kInfinity);
  for (const Technology& k : model.catalog.technologies) {
    if (rps_active(model, k.id, year)) {
      add(key(VarKind::kRpsShortfall, {k.id, ys}), VarKind::kRpsShortfall, 0.0,
          kInfinity);
    }
  }
  for (const std::string& m : model.catalog.materials) {
    add(key(VarKind::kMaterialUse, {m, ys}), VarKind::kMaterialUse, 0.0,
        kInfinity);
    if (first_year) {
      auto it = model.supply_chain.initial_stock.find(m);
      const double s0 =
          it == model.supply_chain.initial_stock.end() ? 0.0 : it->second;
      add(key(VarKind::kStock, {m, ys}), VarKind::kStock, s0, s0);
    } else {
      add(key(VarKind::kStock, {m, ys}), VarKind::kStock, 0.0, kInfinity);
    }
  }
  for (const Component& c : model.catalog.components) {
    add(key(VarKind::kComponentOutput, {c.id, ys}), VarKind::kComponentOutput,
        0.0, kInfinity);
  }
  for (const Product& p : model.catalog.products) {
    add(key(VarKind::kProductOutput, {p.id, ys}), VarKind::kProductOutput, 0.0,
        kInfinity);
  }
  for (const auto& [pool, zone] : field_pools(model)) {
    add(key(VarKind::kField, {pool, zone, ys}), VarKind::kField, 0.0,
        kInfinity);
  }

  std::unordered_map<std::string, double> cost;
  for (const auto& [k, c] : build_objective(model, year)) cost[k] += c;
  for (ColumnSpec& c : cols) {
    auto it = cost.find(c.key);
    if (it != cost.end()) c.cost = it->second;
  }
  return cols;
}

std::vector<std::pair<std::string, double>> build_objective(
    const SystemModel& model, int year) {
  const TimeStructure& time = model.time;
  year_index_or_throw(model, year);
  const std::string ys = str(year);
  std::vector<std::pair<std::string, double>> obj;
  for (const GeneratorAsset& g : model.assets) {
    if (g.candidate()) {
      obj.emplace_back(key(VarKind::kPlan, {g.id, ys}),
                       adjusted_investment_cost(model, g, year) * g.capacity_mw);
    }
    obj.emplace_back(key(VarKind::kOperate, {g.id, ys}),
                     cost_at(g.fixed_cost, g, year, "fixed cost") *
                         g.capacity_mw);
    const bool storage = !produces_power(type_of(model, g));
    for (int t = 0; t < time.num_days(); ++t) {
      const double w = time.weight(t, year) * g.variable_cost;
      for (int h = 0; h < time.hours; ++h) {
        const std::string day = time.days[t].id, hs = str(h + 1);
        if (storage) {
          obj.emplace_back(key(VarKind::kCharge, {g.id, day, hs, ys}), w);
          obj.emplace_back(key(VarKind::kDischarge, {g.id, day, hs, ys}), w);
        } else {
          obj.emplace_back(key(VarKind::kGeneration, {g.id, day, hs, ys}), w);
        }
      }
    }
  }
  for (const std::string& zone : model.topology.zones) {
    for (int t = 0; t < time.num_days(); ++t) {
      for (int h = 0; h < time.hours; ++h) {
        obj.emplace_back(
            key(VarKind::kLoadShed, {zone, time.days[t].id, str(h + 1), ys}),
            time.weight(t, year) * model.penalties.voll);
      }
    }
  }
  obj.emplace_back(key(VarKind::kReserveShortfall, {ys}),
                   model.penalties.reserve);
  for (const Technology& k : model.catalog.technologies) {
    if (rps_active(model, k.id, year)) {
      obj.emplace_back(key(VarKind::kRpsShortfall, {k.id, ys}),
                       model.penalties.rps);
    }
  }
  return obj;
}

std::vector<RowSpec> build_sc_constraints(const SystemModel& model, int year) {
  const TimeStructure& time = model.time;
  const int yi = year_index_or_throw(model, year);
  const std::string ys = str(year);
  const std::string prev = str(year - 1);
  const TechnologyCatalog& cat = model.catalog;
  std::vector<RowSpec> rows;

  // Materials feed components, components feed products.
  for (const std::string& m : cat.materials) {
    RowSpec r{row_key("matdem", {m, ys}), RowFamily::kMaterialDemand, year,
              RowSense::kGreaterEqual, 0.0, {}};
    r.terms.emplace_back(key(VarKind::kMaterialUse, {m, ys}), 1.0);
    for (const Component& c : cat.components) {
      auto it = c.material_use.find(m);
      if (it != c.material_use.end() && it->second != 0.0) {
        r.terms.emplace_back(key(VarKind::kComponentOutput, {c.id, ys}),
                             -it->second);
      }
    }
    rows.push_back(std::move(r));
  }
  for (const Component& c : cat.components) {
    RowSpec r{row_key("compdem", {c.id, ys}), RowFamily::kComponentDemand, year,
              RowSense::kGreaterEqual, 0.0, {}};
    r.terms.emplace_back(key(VarKind::kComponentOutput, {c.id, ys}), 1.0);
    for (const Product& p : cat.products) {
      auto it = p.component_use.find(c.id);
      if (it != p.component_use.end() && it->second != 0.0) {
        r.terms.emplace_back(key(VarKind::kProductOutput, {p.id, ys}),
                             -it->second);
      }
    }
    rows.push_back(std::move(r));
  }

  // Supply and stock.
  for (const std::string& m : cat.materials) {
    RowSpec sup{row_key("matsup", {m, ys}), RowFamily::kMaterialSupply, year,
                RowSense::kLessEqual, model.supply_chain.supply(m, year), {}};
    sup.terms.emplace_back(key(VarKind::kMaterialUse, {m, ys}), 1.0);
    sup.terms.emplace_back(key(VarKind::kStock, {m, ys}), -1.0);
    for (const GeneratorAsset& g : model.assets) {
      const double rate = model.supply_chain.recovery_rate(g.id, m);
      if (rate != 0.0) {
        sup.terms.emplace_back(key(VarKind::kRetire, {g.id, ys}),
                               -rate * g.capacity_mw);
      }
    }
    rows.push_back(std::move(sup));
    if (yi == 0) continue;
    RowSpec st{row_key("stock", {m, ys}), RowFamily::kStockBalance, year,
               RowSense::kEqual, model.supply_chain.supply(m, year - 1), {}};
    st.terms.emplace_back(key(VarKind::kStock, {m, ys}), 1.0);
    st.terms.emplace_back(key(VarKind::kStock, {m, prev}), -1.0);
    st.terms.emplace_back(key(VarKind::kMaterialUse, {m, prev}), 1.0);
    for (const GeneratorAsset& g : model.assets) {
      const double rate = model.supply_chain.recovery_rate(g.id, m);
      if (rate != 0.0) {
        st.terms.emplace_back(key(VarKind::kRetire, {g.id, prev}),
                              -rate * g.capacity_mw);
      }
    }
    rows.push_back(std::move(st));
  }

  // Manufactured products cap new deployments. Technologies without any
  // product in the catalog are not manufacturing-limited.
  for (const Technology& k : cat.technologies) {
    std::vector<const Product*> products;
    for (const Product& p : cat.products) {
      if (p.technology == k.id) products.push_back(&p);
    }
    if (products.empty()) continue;
    RowSpec r{row_key("prodcap", {k.id, ys}), RowFamily::kProductCapacity, year,
              RowSense::kLessEqual, 0.0, {}};
    for (const GeneratorAsset& g : model.assets) {
      if (g.candidate() && g.technology == k.id) {
        r.terms.emplace_back(key(VarKind::kPlan, {g.id, ys}), g.capacity_mw);
      }
    }
    for (const Product* p : products) {
      r.terms.emplace_back(key(VarKind::kProductOutput, {p->id, ys}), -1.0);
    }
    rows.push_back(std::move(r));
  }

  // Field pools.
  for (const auto& [pool, zone] : field_pools(model)) {
    const std::string f = key(VarKind::kField, {pool, zone, ys});
    RowSpec use{row_key("fielduse", {pool, zone, ys}), RowFamily::kFieldUse,
                year, RowSense::kGreaterEqual, 0.0, {{f, 1.0}}};
    RowSpec bal{row_key("fieldbal", {pool, zone, ys}), RowFamily::kFieldBalance,
                year, RowSense::kEqual,
                yi == 0 ? model.supply_chain.initial_area(zone, pool) : 0.0,
                {{f, 1.0}}};
    if (yi > 0) bal.terms.emplace_back(key(VarKind::kField, {pool, zone, prev}), -1.0);
    for (const GeneratorAsset& g : model.assets) {
      if (g.zone != zone) continue;
      const Technology& tech = model.technology_of(g);
      if (!tech.uses_land()) continue;
      const double area = g.capacity_mw / tech.capacity_density;
      if (g.candidate() && tech.build_pool() == pool) {
        use.terms.emplace_back(key(VarKind::kPlan, {g.id, ys}), -area);
        if (yi > 0) bal.terms.emplace_back(key(VarKind::kPlan, {g.id, prev}), area);
      }
      if (tech.return_pool() == pool) {
        bal.terms.emplace_back(key(VarKind::kRetire, {g.id, ys}), -area);
      }
    }
    rows.push_back(std::move(use));
    rows.push_back(std::move(bal));
  }

  // Lead time, single decision, lifetime.
  for (const GeneratorAsset& g : model.assets) {
    if (!g.candidate()) continue;
    const int built_from = year - g.lead_time;
    if (built_from >= time.first_year()) {
      rows.push_back({row_key("lead", {g.id, ys}), RowFamily::kLeadTime, year,
                      RowSense::kEqual, 0.0,
                      {{key(VarKind::kBuild, {g.id, ys}), 1.0},
                       {key(VarKind::kPlan, {g.id, str(built_from)}), -1.0}}});
    }
    if (!decision_blocked(model, g, year) && yi > 0) {
      RowSpec once{row_key("once", {g.id, ys}), RowFamily::kSinglePlan, year,
                   RowSense::kLessEqual, 1.0, {}};
      for (int k = 0; k <= yi; ++k) {
        once.terms.emplace_back(key(VarKind::kPlan, {g.id, str(time.years[k])}),
                                1.0);
      }
      rows.push_back(std::move(once));
    }
    const int built_in = year - g.lifetime;
    if (built_in - g.lead_time >= time.first_year()) {
      rows.push_back({row_key("life", {g.id, ys}), RowFamily::kLifetime, year,
                      RowSense::kEqual, 0.0,
                      {{key(VarKind::kRetire, {g.id, ys}), 1.0},
                       {key(VarKind::kBuild, {g.id, str(built_in)}), -1.0}}});
    }
  }
  return rows;
}

std::vector<RowSpec> build_gep_constraints(const SystemModel& model, int year) {
  const TimeStructure& time = model.time;
  const int yi = year_index_or_throw(model, year);
  const std::string ys = str(year);
  std::vector<RowSpec> rows;

  for (const std::string& zone : model.topology.zones) {
    for (int t = 0; t < time.num_days(); ++t) {
      const std::string& day = time.days[t].id;
      for (int h = 0; h < time.hours; ++h) {
        const std::string hs = str(h + 1);
        RowSpec r{row_key("bal", {zone, day, hs, ys}), RowFamily::kEnergyBalance,
                  year, RowSense::kEqual,
                  model.load(zone, yi, t, h) -
                      model.import_injection(zone, yi, t, h),
                  {}};
        for (const GeneratorAsset& g : model.assets) {
          if (g.zone != zone) continue;
          if (produces_power(type_of(model, g))) {
            r.terms.emplace_back(key(VarKind::kGeneration, {g.id, day, hs, ys}),
                                 1.0);
          } else {
            r.terms.emplace_back(key(VarKind::kDischarge, {g.id, day, hs, ys}),
                                 1.0);
            r.terms.emplace_back(key(VarKind::kCharge, {g.id, day, hs, ys}),
                                 -1.0);
          }
        }
        for (const Corridor& l : model.topology.corridors) {
          const std::string q = key(VarKind::kFlow, {l.id, day, hs, ys});
          if (l.from == zone) r.terms.emplace_back(q, -1.0);
          if (l.to == zone) r.terms.emplace_back(q, 1.0);
        }
        r.terms.emplace_back(key(VarKind::kLoadShed, {zone, day, hs, ys}), 1.0);
        rows.push_back(std::move(r));
      }
    }
  }

  for (const GeneratorAsset& g : model.assets) {
    const TechType type = type_of(model, g);
    const std::string o = key(VarKind::kOperate, {g.id, ys});
    if (produces_power(type)) {
      for (int t = 0; t < time.num_days(); ++t) {
        const std::string& day = time.days[t].id;
        for (int h = 0; h < time.hours; ++h) {
          const std::string hs = str(h + 1);
          const double avail =
              type == TechType::kRenewable ? model.availability(g, yi, t, h) : 1.0;
          rows.push_back({row_key("pmax", {g.id, day, hs, ys}),
                          RowFamily::kOutputLimit, year, RowSense::kLessEqual,
                          0.0,
                          {{key(VarKind::kGeneration, {g.id, day, hs, ys}), 1.0},
                           {o, -avail * g.capacity_mw}}});
        }
      }
    }
    RowSpec st{row_key("status", {g.id, ys}), RowFamily::kStatus, year,
               RowSense::kEqual, 0.0, {{o, 1.0}}};
    if (yi > 0) {
      st.terms.emplace_back(key(VarKind::kOperate, {g.id, str(year - 1)}), -1.0);
    } else if (!g.candidate()) {
      st.rhs = 1.0;  // existing units start online
    }
    st.terms.emplace_back(key(VarKind::kBuild, {g.id, ys}), -1.0);
    st.terms.emplace_back(key(VarKind::kRetire, {g.id, ys}), 1.0);
    rows.push_back(std::move(st));
  }

  RowSpec rm{row_key("reserve", {ys}), RowFamily::kReserve, year,
             RowSense::kGreaterEqual,
             (1.0 + model.scenario.reserve_margin.at(year)) *
                 model.peak_load(year),
             {}};
  for (const GeneratorAsset& g : model.assets) {
    const double credit =
        g.capacity_mw * model.technology_of(g).elcc_at(year);
    if (credit != 0.0) {
      rm.terms.emplace_back(key(VarKind::kOperate, {g.id, ys}), credit);
    }
  }
  rm.terms.emplace_back(key(VarKind::kReserveShortfall, {ys}), 1.0);
  rows.push_back(std::move(rm));

  double annual_load = 0.0;
  for (const std::string& zone : model.topology.zones) {
    for (int t = 0; t < time.num_days(); ++t) {
      for (int h = 0; h < time.hours; ++h) {
        annual_load += time.weight(t, year) * model.load(zone, yi, t, h);
      }
    }
  }
  for (const Technology& k : model.catalog.technologies) {
    if (!rps_active(model, k.id, year)) continue;
    RowSpec r{row_key("rpsreq", {k.id, ys}), RowFamily::kRps, year,
              RowSense::kGreaterEqual,
              model.scenario.rps.at(k.id).at(year) * annual_load, {}};
    for (const GeneratorAsset& g : model.assets) {
      if (g.technology != k.id) continue;
      for (int t = 0; t < time.num_days(); ++t) {
        for (int h = 0; h < time.hours; ++h) {
          r.terms.emplace_back(
              key(VarKind::kGeneration, {g.id, time.days[t].id, str(h + 1), ys}),
              time.weight(t, year));
        }
      }
    }
    r.terms.emplace_back(key(VarKind::kRpsShortfall, {k.id, ys}), 1.0);
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<RowSpec> build_storage_constraints(const SystemModel& model,
                                               int year) {
  const TimeStructure& time = model.time;
  year_index_or_throw(model, year);
  const std::string ys = str(year);
  std::vector<RowSpec> rows;
  for (const GeneratorAsset& g : model.assets) {
    if (produces_power(type_of(model, g))) continue;
    const StorageParams& sp = *g.storage;
    const std::string o = key(VarKind::kOperate, {g.id, ys});
    for (int t = 0; t < time.num_days(); ++t) {
      const std::string& day = time.days[t].id;
      auto soc = [&](int h) {
        return key(VarKind::kStateOfCharge, {g.id, day, str(h + 1), ys});
      };
      for (int h = 0; h < time.hours; ++h) {
        const std::string hs = str(h + 1);
        const std::string c = key(VarKind::kCharge, {g.id, day, hs, ys});
        const std::string dc = key(VarKind::kDischarge, {g.id, day, hs, ys});
        rows.push_back({row_key("chgmax", {g.id, day, hs, ys}),
                        RowFamily::kChargeLimit, year, RowSense::kLessEqual, 0.0,
                        {{c, 1.0}, {o, -g.capacity_mw}}});
        rows.push_back({row_key("dismax", {g.id, day, hs, ys}),
                        RowFamily::kDischargeLimit, year, RowSense::kLessEqual,
                        0.0, {{dc, 1.0}, {o, -g.capacity_mw}}});
        // Hour 1 follows the last hour of the same day.
        const int before = h == 0 ? time.hours - 1 : h - 1;
        RowSpec dyn{row_key("socdyn", {g.id, day, hs, ys}),
                    RowFamily::kSocDynamics, year, RowSense::kEqual, 0.0,
                    {{soc(h), 1.0}}};
        if (before != h) dyn.terms.emplace_back(soc(before), -1.0);
        dyn.terms.emplace_back(c, -sp.charge_efficiency);
        dyn.terms.emplace_back(dc, 1.0 / sp.discharge_efficiency);
        rows.push_back(std::move(dyn));
      }
      rows.push_back({row_key("socfirst", {g.id, day, ys}), RowFamily::kSocFirst,
                      year, RowSense::kEqual, 0.0,
                      {{soc(0), 1.0}, {o, -0.5 * sp.energy_mwh}}});
      if (time.hours > 1) {
        rows.push_back({row_key("soclast", {g.id, day, ys}), RowFamily::kSocLast,
                        year, RowSense::kEqual, 0.0,
                        {{soc(time.hours - 1), 1.0},
                         {o, -0.5 * sp.energy_mwh}}});
      }
    }
  }
  return rows;
}

const ColumnSpec* Formulation::find_column(const std::string& key) const {
  auto it = column_index.find(key);
  return it == column_index.end() ? nullptr : &columns[it->second];
}

double Formulation::objective(const std::vector<double>& values) const {
  double total = 0.0;
  for (std::size_t j = 0; j < columns.size(); ++j) {
    total += columns[j].cost * values[j];
  }
  return total;
}

double Formulation::max_violation(const std::vector<double>& values) const {
  double worst = 0.0;
  for (std::size_t j = 0; j < columns.size(); ++j) {
    worst = std::max({worst, columns[j].lower - values[j],
                      values[j] - columns[j].upper});
  }
  for (const RowSpec& r : rows) {
    double act = 0.0;
    for (const auto& [k, a] : r.terms) act += a * values[column_index.at(k)];
    const double diff = act - r.rhs;
    if (r.sense != RowSense::kGreaterEqual) worst = std::max(worst, diff);
    if (r.sense != RowSense::kLessEqual) worst = std::max(worst, -diff);
  }
  return worst;
}

Formulation formulate(const SystemModel& model) {
  Formulation f;
  f.years = model.time.years;
  for (int y : model.time.years) {
    for (ColumnSpec& c : build_columns(model, y)) {
      if (!f.column_index.emplace(c.key, static_cast<int>(f.columns.size()))
               .second) {
        throw ModelError("duplicate column " + c.key);
      }
      f.columns.push_back(std::move(c));
    }
    for (auto* builder : {&build_sc_constraints, &build_gep_constraints,
                          &build_storage_constraints}) {
      for (RowSpec& r : builder(model, y)) f.rows.push_back(std::move(r));
    }
  }
  std::set<std::string> row_keys;
  for (const RowSpec& r : f.rows) {
    if (!row_keys.insert(r.key).second) throw ModelError("duplicate row " + r.key);
    for (const auto& [k, a] : r.terms) {
      const ColumnSpec* c = f.find_column(k);
      if (c == nullptr) {
        throw ModelError("row " + r.key + " references unknown column " + k);
      }
      if (c->year > r.year) {
        throw ModelError("row " + r.key + " references later column " + k);
      }
    }
  }
  return f;
}

SparseProblem to_problem(const Formulation& formulation) {
  SparseProblem p;
  for (const ColumnSpec& c : formulation.columns) {
    p.add_column(c.key, c.lower, c.upper, c.cost, c.integral);
  }
  for (const RowSpec& r : formulation.rows) {
    const int i = p.add_row(r.key, r.sense, r.rhs);
    for (const auto& [k, a] : r.terms) {
      p.add_coefficient(i, formulation.column_index.at(k), a);
    }
  }
  p.finalize();
  return p;
}

SparseProblem build_monolithic(const SystemModel& model) {
  return to_problem(formulate(model));
}

void StageProblem::set_state_in(const std::vector<double>& values) {
  if (values.size() != link_rows.size()) {
    throw ModelError("stage " + std::to_string(year) + " expects " +
                     std::to_string(link_rows.size()) + " state values, got " +
                     std::to_string(values.size()));
  }
  for (std::size_t k = 0; k < values.size(); ++k) {
    problem.mutable_row(link_rows[k]).rhs = values[k];
  }
}

std::vector<StageProblem> build_stages(const Formulation& f) {
  const int num_years = static_cast<int>(f.years.size());
  auto stage_of = [&](int year) {
    return static_cast<int>(std::find(f.years.begin(), f.years.end(), year) -
                            f.years.begin());
  };
  // For each non-fixed column, the latest stage whose rows reference it.
  std::vector<int> last_use(f.columns.size(), -1);
  for (const RowSpec& r : f.rows) {
    const int s = stage_of(r.year);
    for (const auto& [k, a] : r.terms) {
      if (a == 0.0) continue;
      const int j = f.column_index.at(k);
      last_use[j] = std::max(last_use[j], s);
    }
  }
  std::vector<StageProblem> stages(num_years);
  for (int s = 0; s < num_years; ++s) {
    StageProblem& st = stages[s];
    st.year_index = s;
    st.year = f.years[s];
    SparseProblem& p = st.problem;
    std::unordered_map<int, int> column_map;
    for (std::size_t j = 0; j < f.columns.size(); ++j) {
      const ColumnSpec& c = f.columns[j];
      if (stage_of(c.year) != s) continue;
      const int pj = p.add_column(c.key, c.lower, c.upper, c.cost, c.integral);
      column_map[static_cast<int>(j)] = pj;
      st.local_columns.emplace_back(static_cast<int>(j), pj);
    }
    // Incoming state, sorted by key.
    std::vector<int> incoming;
    for (std::size_t j = 0; j < f.columns.size(); ++j) {
      const ColumnSpec& c = f.columns[j];
      if (!c.fixed() && stage_of(c.year) < s && last_use[j] >= s) {
        incoming.push_back(static_cast<int>(j));
      }
    }
    std::sort(incoming.begin(), incoming.end(), [&](int a, int b) {
      return f.columns[a].key < f.columns[b].key;
    });
    for (int j : incoming) {
      const std::string& k = f.columns[j].key;
      const int z = p.add_column("z:" + k, -kInfinity, kInfinity, 0.0);
      column_map[j] = z;
      st.state_in.push_back(k);
      st.state_in_columns.push_back(z);
    }
    for (const RowSpec& r : f.rows) {
      if (stage_of(r.year) != s) continue;
      double rhs = r.rhs;
      std::vector<std::pair<int, double>> entries;
      for (const auto& [k, a] : r.terms) {
        if (a == 0.0) continue;
        const int j = f.column_index.at(k);
        const ColumnSpec& c = f.columns[j];
        if (stage_of(c.year) < s && c.fixed()) {
          rhs -= a * c.lower;
        } else {
          entries.emplace_back(column_map.at(j), a);
        }
      }
      const int i = p.add_row(r.key, r.sense, rhs);
      for (const auto& [j, a] : entries) p.add_coefficient(i, j, a);
    }
    for (std::size_t k = 0; k < st.state_in.size(); ++k) {
      const int i = p.add_row("link:" + st.state_in[k], RowSense::kEqual, 0.0);
      p.add_coefficient(i, st.state_in_columns[k], 1.0);
      st.link_rows.push_back(i);
    }
    // Outgoing state: columns of this or earlier stages used after it.
    std::vector<int> outgoing;
    for (std::size_t j = 0; j < f.columns.size(); ++j) {
      const ColumnSpec& c = f.columns[j];
      if (!c.fixed() && stage_of(c.year) <= s && last_use[j] > s) {
        outgoing.push_back(static_cast<int>(j));
      }
    }
    std::sort(outgoing.begin(), outgoing.end(), [&](int a, int b) {
      return f.columns[a].key < f.columns[b].key;
    });
    for (int j : outgoing) {
      st.state_out.push_back(f.columns[j].key);
      st.state_out_columns.push_back(column_map.at(j));
    }
    if (s + 1 < num_years) {
      st.alpha_column = p.add_column("alpha[" + std::to_string(st.year) + "]",
                                     0.0, kInfinity, 1.0);
    }
    p.finalize();
  }
  return stages;
}

StageProblem build_stage(const SystemModel& model, int year) {
  const int yi = year_index_or_throw(model, year);
  std::vector<StageProblem> stages = build_stages(formulate(model));
  return std::move(stages[yi]);
}

namespace {

std::vector<std::string> split_indices(const std::string& key,
                                       std::string& prefix) {
  const auto open = key.find('[');
  if (open == std::string::npos || key.back() != ']') {
    throw ModelError("not a row key: " + key);
  }
  prefix = key.substr(0, open);
  std::vector<std::string> parts;
  std::string cur;
  for (std::size_t i = open + 1; i + 1 < key.size(); ++i) {
    if (key[i] == ',') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += key[i];
    }
  }
  parts.push_back(cur);
  return parts;
}

}  // namespace

std::string explain_row(const std::string& key) {
  if (key.rfind("link:", 0) == 0) {
    return "Linking row: the stage copy of " + key.substr(5) +
           " equals the value handed over by the previous year's solution. "
           "Its dual is the cut slope for that state entry.";
  }
  std::string prefix;
  const std::vector<std::string> ix = split_indices(key, prefix);
  auto need = [&](std::size_t n) {
    if (ix.size() != n) {
      throw ModelError("row " + key + " should have " + std::to_string(n) +
                       " indices");
    }
  };
  if (prefix == "matdem") {
    need(2);
    return "Material demand: use of material " + ix[0] + " in " + ix[1] +
           " covers the material needed by all components manufactured that "
           "year.";
  }
  if (prefix == "compdem") {
    need(2);
    return "Component demand: output of component " + ix[0] + " in " + ix[1] +
           " covers the components needed by all products assembled that year.";
  }
  if (prefix == "matsup") {
    need(2);
    return "Material supply: use of " + ix[0] + " in " + ix[1] +
           " is limited to primary supply plus material recovered from units "
           "retiring that year plus stock on hand.";
  }
  if (prefix == "stock") {
    need(2);
    return "Stock balance: stock of " + ix[0] + " at the start of " + ix[1] +
           " equals last year's stock plus last year's primary supply and "
           "recovery minus last year's use.";
  }
  if (prefix == "prodcap") {
    need(2);
    return "Product capacity: MW of " + ix[0] + " decided in " + ix[1] +
           " cannot exceed the MW of products manufactured for it that year.";
  }
  if (prefix == "fielduse") {
    need(3);
    return "Field use: area needed by " + ix[0] + " capacity decided in zone " +
           ix[1] + " during " + ix[2] +
           " (MW over capacity density) fits in the available field area.";
  }
  if (prefix == "fieldbal") {
    need(3);
    return "Field balance: available " + ix[0] + " area in zone " + ix[1] +
           " for " + ix[2] +
           " equals the previous year's area (or the initial area) plus area "
           "returned by retiring units minus area used by last year's "
           "decisions.";
  }
  if (prefix == "lead") {
    need(2);
    return "Lead time: unit " + ix[0] + " comes online in " + ix[1] +
           " exactly when it was decided its lead time earlier.";
  }
  if (prefix == "once") {
    need(2);
    return "Single decision: unit " + ix[0] +
           " is decided at most once in the years up to " + ix[1] + ".";
  }
  if (prefix == "life") {
    need(2);
    return "Lifetime: unit " + ix[0] + " retires in " + ix[1] +
           " exactly when it was built one design lifetime earlier.";
  }
  if (prefix == "bal") {
    need(4);
    return "Energy balance for zone " + ix[0] + ", day " + ix[1] + ", hour " +
           ix[2] + ", " + ix[3] +
           ": generation plus storage discharge minus charge plus net inflow "
           "over corridors plus exogenous imports plus shed load equals load.";
  }
  if (prefix == "pmax") {
    need(4);
    return "Output limit: unit " + ix[0] + " produces at most its capacity "
           "(times availability for renewables) when operating, on day " +
           ix[1] + ", hour " + ix[2] + ", " + ix[3] + ".";
  }
  if (prefix == "status") {
    need(2);
    return "Operating status: unit " + ix[0] + " operates in " + ix[1] +
           " if it operated the year before or was built this year, and it did "
           "not retire this year.";
  }
  if (prefix == "reserve") {
    need(1);
    return "Reserve margin: ELCC-weighted operating capacity in " + ix[0] +
           " plus the shortfall slack covers peak load times one plus the "
           "reserve margin.";
  }
  if (prefix == "rpsreq") {
    need(2);
    return "Renewable mandate: day-weighted generation of " + ix[0] + " in " +
           ix[1] + " plus the shortfall slack covers the mandated share of "
           "annual demand.";
  }
  if (prefix == "chgmax") {
    need(4);
    return "Charge limit: storage " + ix[0] + " charges at most its power "
           "rating when operating (day " + ix[1] + ", hour " + ix[2] + ", " +
           ix[3] + ").";
  }
  if (prefix == "dismax") {
    need(4);
    return "Discharge limit: storage " + ix[0] + " discharges at most its "
           "power rating when operating (day " + ix[1] + ", hour " + ix[2] +
           ", " + ix[3] + ").";
  }
  if (prefix == "socdyn") {
    need(4);
    return "State of charge: storage " + ix[0] + " energy at hour " + ix[2] +
           " of day " + ix[1] + " in " + ix[3] +
           " equals the previous hour's energy plus charging times charge "
           "efficiency minus discharging over discharge efficiency. Hour 1 "
           "follows the last hour of the same day.";
  }
  if (prefix == "socfirst" || prefix == "soclast") {
    need(3);
    return std::string("Daily boundary: storage ") + ix[0] + " holds half its "
           "energy rating (when operating) at the " +
           (prefix == "socfirst" ? "first" : "last") + " hour of day " + ix[1] +
           " in " + ix[2] + ".";
  }
  if (prefix == "cut") {
    need(2);
    return "Benders cut " + ix[1] + " for " + ix[0] +
           ": the cost-to-go estimate is at least the future cost observed at "
           "a trial state, adjusted linearly by the state duals.";
  }
  throw ModelError("unknown row family '" + prefix + "'");
}

}  // namespace scgep
