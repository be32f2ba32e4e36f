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

// Small in-memory models for unit tests.

#ifndef SCGEP_TESTS_MODEL_FACTORY_HPP_
#define SCGEP_TESTS_MODEL_FACTORY_HPP_

#include <string>
#include <vector>

#include "scgep/model.hpp"

namespace scgep::testing {

// One zone "Z1", years [first, first + years), one day of weight 365 with
// `hours` hours, flat load. Catalog has thermal "gas", renewable "spv" and
// storage "bss" but no assets.
inline SystemModel empty_model(int years = 1, int hours = 2,
                               double load_mw = 100.0, int first = 2025) {
  SystemModel m;
  m.name = "unit";
  m.topology.zones = {"Z1"};
  Technology gas{"gas", TechType::kThermal, 0.0, "", "", {}};
  Technology spv{"spv", TechType::kRenewable, 36.0, "", "", {}};
  Technology bss{"bss", TechType::kStorage, 0.0, "", "", {}};
  for (int k = 0; k < years; ++k) {
    gas.elcc[first + k] = 0.9;
    spv.elcc[first + k] = 0.3;
    bss.elcc[first + k] = 0.8;
  }
  m.catalog.technologies = {gas, spv, bss};
  for (int k = 0; k < years; ++k) m.time.years.push_back(first + k);
  RepresentativeDay day{"d1", {}};
  for (int y : m.time.years) day.weight[y] = 365;
  m.time.days = {day};
  m.time.hours = hours;
  m.scenario.load["Z1"] = HourlySeries(m.time.slots(), load_mw);
  for (int y : m.time.years) {
    m.scenario.peak_load[y] = load_mw;
    m.scenario.reserve_margin[y] = 0.15;
  }
  return m;
}

inline GeneratorAsset existing_thermal(const SystemModel& m, std::string id,
                                       double mw, int retirement_year,
                                       double variable_cost = 30.0) {
  GeneratorAsset a;
  a.id = std::move(id);
  a.zone = "Z1";
  a.technology = "gas";
  a.existence = Existence::kExisting;
  a.capacity_mw = mw;
  a.lifetime = 30;
  a.retirement_year = retirement_year;
  a.integrality = Integrality::kBinary;
  for (int y : m.time.years) a.fixed_cost[y] = 1000.0;
  a.variable_cost = variable_cost;
  return a;
}

inline GeneratorAsset candidate(const SystemModel& m, std::string id,
                                std::string tech, double mw, int lead,
                                int lifetime, double invest) {
  GeneratorAsset a;
  a.id = std::move(id);
  a.zone = "Z1";
  a.technology = std::move(tech);
  a.existence = Existence::kCandidate;
  a.capacity_mw = mw;
  a.lead_time = lead;
  a.lifetime = lifetime;
  a.integrality = a.technology == "gas" ? Integrality::kBinary
                                        : Integrality::kContinuous;
  for (int y : m.time.years) {
    a.investment_cost[y] = invest;
    a.fixed_cost[y] = 500.0;
  }
  if (a.technology == "bss") a.storage = StorageParams{4 * mw, 0.9, 0.9};
  return a;
}

// Material chain: steel -> frame -> panel (spv).
inline void add_supply_chain(SystemModel& m) {
  m.catalog.materials = {"steel"};
  m.catalog.components = {{"frame", {{"steel", 2.0}}}};
  m.catalog.products = {{"panel", "spv", {{"frame", 0.5}}}};
  for (int y : m.time.years) m.supply_chain.primary_supply["steel"][y] = 100;
}

// Three years: retiring thermal unit, solar with recovery, gas, storage.
inline SystemModel three_year_model() {
  SystemModel m = empty_model(3, 2, 100);
  add_supply_chain(m);
  m.assets.push_back(existing_thermal(m, "U1", 80, 2026));
  m.assets[0].integrality = Integrality::kContinuous;
  m.catalog.technologies[0].type = TechType::kThermal;
  m.assets.push_back(candidate(m, "S1", "spv", 36, 1, 2, 1000));
  GeneratorAsset g = candidate(m, "G1", "gas", 50, 1, 20, 5000);
  g.integrality = Integrality::kContinuous;
  m.assets.push_back(g);
  GeneratorAsset b = candidate(m, "B1", "bss", 20, 0, 10, 2000);
  m.assets.push_back(b);
  m.scenario.availability[{"Z1", "spv"}] = HourlySeries(m.time.slots(), 0.5);
  m.supply_chain.fields.push_back({"Z1", "spv", 3});
  m.supply_chain.recovery["S1"]["steel"] = 1.0;
  return m;
}

}  // namespace scgep::testing

#endif  // SCGEP_TESTS_MODEL_FACTORY_HPP_
