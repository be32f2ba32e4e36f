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

#include <openssl/evp.h>

#include <array>
#include <cmath>
#include <stdexcept>

#include "json.hpp"
#include "scgep/ingest.hpp"

namespace scgep {
namespace {

using nlohmann::json;

json num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v == 0.0 ? 0.0 : v;  // folds -0
}

template <typename K>
json map_json(const std::map<K, double>& m) {
  json j = json::object();
  for (const auto& [k, v] : m) {
    if constexpr (std::is_same_v<K, int>) {
      j[std::to_string(k)] = num(v);
    } else {
      j[k] = num(v);
    }
  }
  return j;
}

json series_json(const HourlySeries& s) {
  json j = json::array();
  for (double v : s) j.push_back(num(v));
  return j;
}

}  // namespace

std::string canonical_model_json(const SystemModel& m) {
  json j;
  j["name"] = m.name;
  j["zones"] = m.topology.zones;
  json corridors = json::array();
  for (const Corridor& c : m.topology.corridors) {
    corridors.push_back({{"id", c.id}, {"from", c.from}, {"to", c.to},
                         {"capacity_mw", num(c.capacity_mw)}});
  }
  j["corridors"] = corridors;
  json techs = json::array();
  for (const Technology& t : m.catalog.technologies) {
    techs.push_back({{"id", t.id}, {"type", std::string(to_string(t.type))},
                     {"capacity_density", num(t.capacity_density)},
                     {"field", t.field}, {"return_field", t.return_field},
                     {"elcc", map_json(t.elcc)}});
  }
  j["technologies"] = techs;
  j["materials"] = m.catalog.materials;
  json comps = json::array();
  for (const Component& c : m.catalog.components) {
    comps.push_back({{"id", c.id}, {"material_use", map_json(c.material_use)}});
  }
  j["components"] = comps;
  json prods = json::array();
  for (const Product& p : m.catalog.products) {
    prods.push_back({{"id", p.id}, {"technology", p.technology},
                     {"component_use", map_json(p.component_use)}});
  }
  j["products"] = prods;
  json assets = json::array();
  for (const GeneratorAsset& a : m.assets) {
    json x = {{"id", a.id}, {"zone", a.zone}, {"technology", a.technology},
              {"product", a.product}, {"candidate", a.candidate()},
              {"capacity_mw", num(a.capacity_mw)}, {"lead_time", a.lead_time},
              {"lifetime", a.lifetime},
              {"binary", a.integrality == Integrality::kBinary},
              {"investment_cost", map_json(a.investment_cost)},
              {"fixed_cost", map_json(a.fixed_cost)},
              {"variable_cost", num(a.variable_cost)}};
    x["retirement_year"] = a.retirement_year ? json(*a.retirement_year) : json(nullptr);
    if (a.storage) {
      x["storage"] = {{"energy_mwh", num(a.storage->energy_mwh)},
                      {"charge_efficiency", num(a.storage->charge_efficiency)},
                      {"discharge_efficiency", num(a.storage->discharge_efficiency)}};
    }
    assets.push_back(x);
  }
  j["assets"] = assets;
  json days = json::array();
  for (const RepresentativeDay& d : m.time.days) {
    days.push_back({{"id", d.id}, {"weight", map_json(d.weight)}});
  }
  j["time"] = {{"years", m.time.years}, {"days", days}, {"hours", m.time.hours},
               {"discount_rate", num(m.time.discount_rate)}};
  json load = json::object();
  for (const auto& [z, s] : m.scenario.load) load[z] = series_json(s);
  json avail = json::object();
  for (const auto& [k, s] : m.scenario.availability) avail[k.first + ":" + k.second] = series_json(s);
  json imports = json::object();
  for (const auto& [z, s] : m.scenario.imports) imports[z] = series_json(s);
  json rps = json::object();
  for (const auto& [k, v] : m.scenario.rps) rps[k] = map_json(v);
  j["scenario"] = {{"load", load}, {"availability", avail}, {"imports", imports},
                   {"peak_load", map_json(m.scenario.peak_load)},
                   {"reserve_margin", map_json(m.scenario.reserve_margin)},
                   {"rps", rps}};
  json supply = json::object();
  for (const auto& [k, v] : m.supply_chain.primary_supply) supply[k] = map_json(v);
  json recovery = json::object();
  for (const auto& [k, v] : m.supply_chain.recovery) recovery[k] = map_json(v);
  json fields = json::array();
  for (const FieldArea& f : m.supply_chain.fields) {
    fields.push_back({{"zone", f.zone}, {"field", f.field}, {"area_km2", num(f.area_km2)}});
  }
  j["supply_chain"] = {{"primary_supply", supply}, {"recovery", recovery},
                       {"fields", fields},
                       {"initial_stock", map_json(m.supply_chain.initial_stock)}};
  j["penalties"] = {{"voll", num(m.penalties.voll)},
                    {"reserve", num(m.penalties.reserve)},
                    {"rps", num(m.penalties.rps)}};
  return j.dump();
}

std::string sha256_hex(const std::string& bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md.data(), &len, EVP_sha256(),
                 nullptr) != 1) {
    throw std::runtime_error("SHA-256 computation failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[md[i] >> 4];
    out += kHex[md[i] & 0xf];
  }
  return out;
}

std::string model_digest(const SystemModel& model) {
  return sha256_hex(canonical_model_json(model));
}

}  // namespace scgep
