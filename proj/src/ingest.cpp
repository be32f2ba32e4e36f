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

#include "scgep/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <random>
#include <set>
#include <sstream>

#include "json.hpp"

namespace scgep {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

[[noreturn]] void io_error(const std::string& msg) {
  throw IngestError(IngestError::Kind::kIo, msg);
}
[[noreturn]] void parse_error(const std::string& msg) {
  throw IngestError(IngestError::Kind::kParse, msg);
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) io_error("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  if (in.bad()) io_error("read failed for " + path.string());
  return buf.str();
}

// 1-based line and column of a byte offset.
std::pair<int, int> line_of(const std::string& text, std::size_t byte) {
  int line = 1;
  int col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

// A parsed JSON document that reports errors with the file and JSON path.
class Doc {
 public:
  explicit Doc(fs::path path) : path_(std::move(path)) {
    const std::string text = read_text(path_);
    try {
      root_ = json::parse(text);
    } catch (const json::parse_error& e) {
      const auto [line, col] = line_of(text, e.byte == 0 ? 0 : e.byte - 1);
      parse_error(path_.string() + ":" + std::to_string(line) + ":" +
                  std::to_string(col) + ": invalid JSON");
    }
  }

  const json& root() const { return root_; }
  const fs::path& path() const { return path_; }

  [[noreturn]] void fail(const std::string& where, const std::string& msg) const {
    parse_error(path_.string() + ": " + (where.empty() ? "/" : where) + ": " + msg);
  }

  const json& member(const json& obj, const std::string& where,
                     const std::string& key) const {
    if (!obj.is_object()) fail(where, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) fail(where, "missing field '" + key + "'");
    return *it;
  }
  const json* optional(const json& obj, const std::string& where,
                       const std::string& key) const {
    if (!obj.is_object()) fail(where, "expected an object");
    auto it = obj.find(key);
    return it == obj.end() || it->is_null() ? nullptr : &*it;
  }

  double number(const json& v, const std::string& where) const {
    if (!v.is_number()) fail(where, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) fail(where, "number is not finite");
    return d;
  }
  int integer(const json& v, const std::string& where) const {
    if (!v.is_number_integer()) fail(where, "expected an integer");
    return v.get<int>();
  }
  std::string string(const json& v, const std::string& where) const {
    if (!v.is_string()) fail(where, "expected a string");
    return v.get<std::string>();
  }
  bool boolean(const json& v, const std::string& where) const {
    if (!v.is_boolean()) fail(where, "expected true or false");
    return v.get<bool>();
  }
  const json& array(const json& v, const std::string& where) const {
    if (!v.is_array()) fail(where, "expected an array");
    return v;
  }
  const json& object(const json& v, const std::string& where) const {
    if (!v.is_object()) fail(where, "expected an object");
    return v;
  }

  std::vector<std::string> strings(const json& v, const std::string& where) const {
    std::vector<std::string> out;
    array(v, where);
    for (std::size_t i = 0; i < v.size(); ++i) {
      out.push_back(string(v[i], where + "/" + std::to_string(i)));
    }
    return out;
  }

  // A number for every horizon year, or an object keyed by year.
  std::map<int, double> by_year(const json& v, const std::string& where,
                                const std::vector<int>& years) const {
    std::map<int, double> out;
    if (v.is_number()) {
      const double d = number(v, where);
      for (int y : years) out[y] = d;
      return out;
    }
    object(v, where);
    for (auto it = v.begin(); it != v.end(); ++it) {
      int year = 0;
      const std::string& k = it.key();
      auto [p, ec] = std::from_chars(k.data(), k.data() + k.size(), year);
      if (ec != std::errc() || p != k.data() + k.size()) {
        fail(where, "key '" + k + "' is not a year");
      }
      out[year] = number(*it, where + "/" + k);
    }
    return out;
  }

  std::map<std::string, double> by_name(const json& v,
                                        const std::string& where) const {
    std::map<std::string, double> out;
    object(v, where);
    for (auto it = v.begin(); it != v.end(); ++it) {
      out[it.key()] = number(*it, where + "/" + it.key());
    }
    return out;
  }

 private:
  fs::path path_;
  json root_;
};

Topology read_topology(const Doc& d) {
  Topology t;
  const json& r = d.root();
  t.zones = d.strings(d.member(r, "", "zones"), "/zones");
  if (const json* c = d.optional(r, "", "corridors")) {
    d.array(*c, "/corridors");
    for (std::size_t i = 0; i < c->size(); ++i) {
      const std::string w = "/corridors/" + std::to_string(i);
      const json& x = (*c)[i];
      t.corridors.push_back({d.string(d.member(x, w, "id"), w + "/id"),
                             d.string(d.member(x, w, "from"), w + "/from"),
                             d.string(d.member(x, w, "to"), w + "/to"),
                             d.number(d.member(x, w, "capacity_mw"),
                                      w + "/capacity_mw")});
    }
  }
  return t;
}

TechnologyCatalog read_catalog(const Doc& d, const std::vector<int>& years) {
  TechnologyCatalog c;
  const json& r = d.root();
  const json& techs = d.array(d.member(r, "", "technologies"), "/technologies");
  for (std::size_t i = 0; i < techs.size(); ++i) {
    const std::string w = "/technologies/" + std::to_string(i);
    const json& x = techs[i];
    Technology t;
    t.id = d.string(d.member(x, w, "id"), w + "/id");
    const std::string type = d.string(d.member(x, w, "type"), w + "/type");
    const auto parsed = parse_tech_type(type);
    if (!parsed) d.fail(w + "/type", "unknown technology type '" + type + "'");
    t.type = *parsed;
    if (const json* v = d.optional(x, w, "capacity_density")) {
      t.capacity_density = d.number(*v, w + "/capacity_density");
    }
    if (const json* v = d.optional(x, w, "field")) t.field = d.string(*v, w + "/field");
    if (const json* v = d.optional(x, w, "return_field")) {
      t.return_field = d.string(*v, w + "/return_field");
    }
    t.elcc = d.by_year(d.member(x, w, "elcc"), w + "/elcc", years);
    c.technologies.push_back(std::move(t));
  }
  if (const json* m = d.optional(r, "", "materials")) {
    c.materials = d.strings(*m, "/materials");
  }
  if (const json* comps = d.optional(r, "", "components")) {
    d.array(*comps, "/components");
    for (std::size_t i = 0; i < comps->size(); ++i) {
      const std::string w = "/components/" + std::to_string(i);
      const json& x = (*comps)[i];
      c.components.push_back(
          {d.string(d.member(x, w, "id"), w + "/id"),
           d.by_name(d.member(x, w, "material_use"), w + "/material_use")});
    }
  }
  if (const json* prods = d.optional(r, "", "products")) {
    d.array(*prods, "/products");
    for (std::size_t i = 0; i < prods->size(); ++i) {
      const std::string w = "/products/" + std::to_string(i);
      const json& x = (*prods)[i];
      c.products.push_back(
          {d.string(d.member(x, w, "id"), w + "/id"),
           d.string(d.member(x, w, "technology"), w + "/technology"),
           d.by_name(d.member(x, w, "component_use"), w + "/component_use")});
    }
  }
  return c;
}

std::vector<GeneratorAsset> read_assets(const Doc& d, const std::vector<int>& years) {
  std::vector<GeneratorAsset> out;
  const json& list = d.array(d.member(d.root(), "", "assets"), "/assets");
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string w = "/assets/" + std::to_string(i);
    const json& x = list[i];
    GeneratorAsset a;
    a.id = d.string(d.member(x, w, "id"), w + "/id");
    a.zone = d.string(d.member(x, w, "zone"), w + "/zone");
    a.technology = d.string(d.member(x, w, "technology"), w + "/technology");
    const std::string status = d.string(d.member(x, w, "status"), w + "/status");
    if (status == "existing") {
      a.existence = Existence::kExisting;
    } else if (status == "candidate") {
      a.existence = Existence::kCandidate;
    } else {
      d.fail(w + "/status", "expected 'existing' or 'candidate'");
    }
    a.capacity_mw = d.number(d.member(x, w, "capacity_mw"), w + "/capacity_mw");
    if (const json* v = d.optional(x, w, "product")) a.product = d.string(*v, w + "/product");
    if (const json* v = d.optional(x, w, "energy_mwh")) {
      StorageParams s;
      s.energy_mwh = d.number(*v, w + "/energy_mwh");
      if (const json* e = d.optional(x, w, "charge_efficiency")) {
        s.charge_efficiency = d.number(*e, w + "/charge_efficiency");
      }
      if (const json* e = d.optional(x, w, "discharge_efficiency")) {
        s.discharge_efficiency = d.number(*e, w + "/discharge_efficiency");
      }
      a.storage = s;
    }
    if (const json* v = d.optional(x, w, "lead_time")) a.lead_time = d.integer(*v, w + "/lead_time");
    a.lifetime = d.integer(d.member(x, w, "lifetime"), w + "/lifetime");
    if (const json* v = d.optional(x, w, "retirement_year")) {
      a.retirement_year = d.integer(*v, w + "/retirement_year");
    }
    const std::string integ =
        d.string(d.member(x, w, "integrality"), w + "/integrality");
    if (integ == "binary") {
      a.integrality = Integrality::kBinary;
    } else if (integ == "continuous") {
      a.integrality = Integrality::kContinuous;
    } else {
      d.fail(w + "/integrality", "expected 'binary' or 'continuous'");
    }
    if (const json* v = d.optional(x, w, "investment_cost")) {
      a.investment_cost = d.by_year(*v, w + "/investment_cost", years);
    }
    a.fixed_cost = d.by_year(d.member(x, w, "fixed_cost"), w + "/fixed_cost", years);
    a.variable_cost =
        d.number(d.member(x, w, "variable_cost"), w + "/variable_cost");
    out.push_back(std::move(a));
  }
  return out;
}

struct Policies {
  std::map<int, double> reserve_margin;
  std::optional<std::map<int, double>> peak_load;
  double load_growth = 0.0;
  double discount_rate = 0.0;
  std::map<std::string, std::map<int, double>> rps;
  PenaltyPrices penalties;
};

Policies read_policies(const Doc& d, const std::vector<int>& years) {
  Policies p;
  const json& r = d.root();
  p.reserve_margin = d.by_year(d.member(r, "", "reserve_margin"), "/reserve_margin", years);
  if (const json* v = d.optional(r, "", "peak_load")) {
    p.peak_load = d.by_year(*v, "/peak_load", years);
  }
  if (const json* v = d.optional(r, "", "load_growth")) p.load_growth = d.number(*v, "/load_growth");
  if (const json* v = d.optional(r, "", "discount_rate")) p.discount_rate = d.number(*v, "/discount_rate");
  if (const json* v = d.optional(r, "", "rps")) {
    d.object(*v, "/rps");
    for (auto it = v->begin(); it != v->end(); ++it) {
      p.rps[it.key()] = d.by_year(*it, "/rps/" + it.key(), years);
    }
  }
  if (const json* v = d.optional(r, "", "penalties")) {
    if (const json* x = d.optional(*v, "/penalties", "voll")) p.penalties.voll = d.number(*x, "/penalties/voll");
    if (const json* x = d.optional(*v, "/penalties", "reserve")) p.penalties.reserve = d.number(*x, "/penalties/reserve");
    if (const json* x = d.optional(*v, "/penalties", "rps")) p.penalties.rps = d.number(*x, "/penalties/rps");
  }
  return p;
}

SupplyChainData read_supply_chain(const Doc& d, const std::vector<int>& years) {
  SupplyChainData s;
  const json& r = d.root();
  if (const json* v = d.optional(r, "", "primary_supply")) {
    d.object(*v, "/primary_supply");
    for (auto it = v->begin(); it != v->end(); ++it) {
      s.primary_supply[it.key()] = d.by_year(*it, "/primary_supply/" + it.key(), years);
    }
  }
  if (const json* v = d.optional(r, "", "national_supply")) {
    if (!s.primary_supply.empty()) {
      d.fail("/national_supply", "give either primary_supply or national_supply");
    }
    std::map<std::string, std::map<int, double>> national;
    d.object(*v, "/national_supply");
    for (auto it = v->begin(); it != v->end(); ++it) {
      national[it.key()] = d.by_year(*it, "/national_supply/" + it.key(), years);
    }
    const double share = d.number(d.member(r, "", "state_share"), "/state_share");
    const auto sectors = d.by_name(d.member(r, "", "sector_shares"), "/sector_shares");
    try {
      s.primary_supply = scale_material_supply(national, share, sectors);
    } catch (const ModelError& e) {
      d.fail("/national_supply", e.what());
    }
  }
  if (const json* v = d.optional(r, "", "recovery")) {
    d.object(*v, "/recovery");
    for (auto it = v->begin(); it != v->end(); ++it) {
      s.recovery[it.key()] = d.by_name(*it, "/recovery/" + it.key());
    }
  }
  if (const json* v = d.optional(r, "", "fields")) {
    d.array(*v, "/fields");
    for (std::size_t i = 0; i < v->size(); ++i) {
      const std::string w = "/fields/" + std::to_string(i);
      const json& x = (*v)[i];
      s.fields.push_back({d.string(d.member(x, w, "zone"), w + "/zone"),
                          d.string(d.member(x, w, "field"), w + "/field"),
                          d.number(d.member(x, w, "area_km2"), w + "/area_km2")});
    }
  }
  if (const json* v = d.optional(r, "", "initial_stock")) {
    s.initial_stock = d.by_name(*v, "/initial_stock");
  }
  return s;
}

// ---- CSV -------------------------------------------------------------------

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

double parse_cell(const std::string& cell, const fs::path& path, int line,
                  std::size_t column) {
  double v = 0.0;
  const char* b = cell.data();
  const char* e = b + cell.size();
  while (b < e && *b == ' ') ++b;
  while (e > b && e[-1] == ' ') --e;
  auto [p, ec] = std::from_chars(b, e, v);
  if (b == e || ec != std::errc() || p != e || !std::isfinite(v)) {
    parse_error(path.string() + ":" + std::to_string(line) + ": column " +
                std::to_string(column + 1) + ": '" + cell +
                "' is not a finite number");
  }
  return v;
}

int parse_year_cell(const std::string& cell, const fs::path& path, int line) {
  int y = 0;
  auto [p, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), y);
  if (cell.empty() || ec != std::errc() || p != cell.data() + cell.size()) {
    parse_error(path.string() + ":" + std::to_string(line) + ": '" + cell +
                "' is not a year");
  }
  return y;
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::pair<int, std::vector<std::string>>> rows;  // line, cells
};

CsvTable read_csv(const fs::path& path) {
  const std::string text = read_text(path);
  CsvTable t;
  std::istringstream in(text);
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty() || line == "\r" || line[0] == '#') continue;
    auto cells = split_csv_line(line);
    if (t.header.empty()) {
      t.header = std::move(cells);
      continue;
    }
    if (cells.size() != t.header.size()) {
      parse_error(path.string() + ":" + std::to_string(n) + ": expected " +
                  std::to_string(t.header.size()) + " columns, found " +
                  std::to_string(cells.size()));
    }
    t.rows.push_back({n, std::move(cells)});
  }
  if (t.header.empty()) parse_error(path.string() + ": empty file");
  return t;
}

// Profile rows `entity,year,day,h1..hH`; year "*" covers every model year.
std::map<std::string, HourlySeries> read_profiles(const fs::path& path,
                                                  const TimeStructure& time) {
  const CsvTable t = read_csv(path);
  if (t.header.size() < 4 || t.header[0] != "entity" || t.header[1] != "year" ||
      t.header[2] != "day") {
    parse_error(path.string() + ":1: header must start with entity,year,day");
  }
  if (static_cast<int>(t.header.size()) - 3 != time.hours) {
    parse_error(path.string() + ":1: expected " + std::to_string(time.hours) +
                " hour columns, found " + std::to_string(t.header.size() - 3));
  }
  std::map<std::string, HourlySeries> out;
  std::map<std::string, std::vector<char>> seen;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (const auto& [line, cells] : t.rows) {
    const std::string& entity = cells[0];
    if (entity.empty()) parse_error(path.string() + ":" + std::to_string(line) + ": empty entity");
    std::vector<int> year_indices;
    if (cells[1] == "*") {
      for (int yi = 0; yi < time.num_years(); ++yi) year_indices.push_back(yi);
    } else {
      const int yi = time.year_index(parse_year_cell(cells[1], path, line));
      if (yi < 0) continue;  // outside the horizon
      year_indices.push_back(yi);
    }
    int day = -1;
    for (int k = 0; k < time.num_days(); ++k) {
      if (time.days[k].id == cells[2]) day = k;
    }
    if (day < 0) {
      parse_error(path.string() + ":" + std::to_string(line) + ": unknown day '" +
                  cells[2] + "'");
    }
    auto& series = out[entity];
    auto& mark = seen[entity];
    if (series.empty()) {
      series.assign(time.slots(), nan);
      mark.assign(time.num_years() * time.num_days(), 0);
    }
    for (int yi : year_indices) {
      char& m = mark[yi * time.num_days() + day];
      if (m) {
        parse_error(path.string() + ":" + std::to_string(line) +
                    ": duplicate profile for " + entity + " on " + cells[2] +
                    " in " + std::to_string(time.years[yi]));
      }
      m = 1;
      for (int h = 0; h < time.hours; ++h) {
        series[time.slot(yi, day, h)] = parse_cell(cells[3 + h], path, line, 3 + h);
      }
    }
  }
  for (const auto& [entity, mark] : seen) {
    for (std::size_t k = 0; k < mark.size(); ++k) {
      if (!mark[k]) {
        const int yi = static_cast<int>(k) / time.num_days();
        const int day = static_cast<int>(k) % time.num_days();
        parse_error(path.string() + ": no profile for " + entity + " on " +
                    time.days[day].id + " in " + std::to_string(time.years[yi]));
      }
    }
  }
  return out;
}

bool is_leap(int year) {
  return (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
}

}  // namespace

std::vector<RawHourlySeries> read_raw_series_csv(const fs::path& path) {
  const CsvTable t = read_csv(path);
  if (t.header.size() < 3 || t.header[0] != "entity" || t.header[1] != "year") {
    parse_error(path.string() + ":1: header must be entity,year,h1..hN");
  }
  for (std::size_t c = 2; c < t.header.size(); ++c) {
    if (t.header[c] != "h" + std::to_string(c - 1)) {
      parse_error(path.string() + ":1: column " + std::to_string(c + 1) +
                  " should be h" + std::to_string(c - 1));
    }
  }
  std::vector<RawHourlySeries> out;
  for (const auto& [line, cells] : t.rows) {
    RawHourlySeries s;
    s.entity = cells[0];
    s.year = parse_year_cell(cells[1], path, line);
    const std::size_t expected = is_leap(s.year) ? 8784 : 8760;
    if (cells.size() - 2 != expected) {
      parse_error(path.string() + ":" + std::to_string(line) + ": year " +
                  std::to_string(s.year) + " needs " + std::to_string(expected) +
                  " hourly values, header has " + std::to_string(cells.size() - 2));
    }
    s.values.reserve(expected);
    for (std::size_t c = 2; c < cells.size(); ++c) {
      s.values.push_back(parse_cell(cells[c], path, line, c));
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::uint64_t seed_from_environment(std::uint64_t fallback) {
  const char* env = std::getenv("SCGEP_SEED");
  if (env == nullptr || *env == '\0') return fallback;
  std::uint64_t seed = 0;
  const char* end = env + std::char_traits<char>::length(env);
  auto [p, ec] = std::from_chars(env, end, seed);
  if (ec != std::errc() || p != end) {
    throw IngestError(IngestError::Kind::kParse,
                      std::string("SCGEP_SEED is not an unsigned integer: ") + env);
  }
  return seed;
}

ClusterResult cluster_representative_days(
    const std::vector<RawHourlySeries>& series, const ClusterOptions& options) {
  if (series.empty()) throw ModelError("clustering needs at least one series");
  if (options.days < 1) throw ModelError("number of representative days must be >= 1");
  const std::size_t hours = series.front().values.size();
  if (hours % 24 != 0 || hours == 0) throw ModelError("series length is not whole days");
  for (const RawHourlySeries& s : series) {
    if (s.values.size() != hours) {
      throw ModelError("series " + s.entity + " has " +
                       std::to_string(s.values.size()) + " values, expected " +
                       std::to_string(hours));
    }
    if (s.year != series.front().year) {
      throw ModelError("series cover different years");
    }
  }
  const int num_days = static_cast<int>(hours / 24);
  const int k = options.days;
  if (k > num_days) {
    throw ModelError("cannot pick " + std::to_string(k) + " days out of " +
                     std::to_string(num_days));
  }

  // Feature vectors: one row per day, 24 values per series.
  const std::size_t dim = 24 * series.size();
  std::vector<double> feat(num_days * dim);
  for (std::size_t s = 0; s < series.size(); ++s) {
    double scale = 1.0;
    if (options.normalize) {
      double m = 0.0;
      for (double v : series[s].values) m = std::max(m, std::abs(v));
      if (m > 0.0) scale = 1.0 / m;
    }
    auto w = options.weights.find(series[s].entity);
    if (w != options.weights.end()) scale *= w->second;
    for (int d = 0; d < num_days; ++d) {
      for (int h = 0; h < 24; ++h) {
        feat[d * dim + s * 24 + h] = scale * series[s].values[d * 24 + h];
      }
    }
  }
  auto dist2 = [&](const double* a, const double* b) {
    double t = 0.0;
    for (std::size_t i = 0; i < dim; ++i) t += (a[i] - b[i]) * (a[i] - b[i]);
    return t;
  };

  // Farthest-point initialization from a seeded first pick.
  std::vector<double> centers(k * dim);
  std::mt19937_64 rng(options.seed);
  const int first = static_cast<int>(rng() % static_cast<std::uint64_t>(num_days));
  std::copy_n(&feat[first * dim], dim, &centers[0]);
  std::vector<double> nearest(num_days, std::numeric_limits<double>::infinity());
  for (int c = 1; c < k; ++c) {
    int pick = 0;
    double best = -1.0;
    for (int d = 0; d < num_days; ++d) {
      nearest[d] = std::min(nearest[d], dist2(&feat[d * dim], &centers[(c - 1) * dim]));
      if (nearest[d] > best) {
        best = nearest[d];
        pick = d;
      }
    }
    std::copy_n(&feat[pick * dim], dim, &centers[c * dim]);
  }

  ClusterResult out;
  std::vector<int> assign(num_days, -1);
  for (int it = 0; it < options.max_iterations; ++it) {
    bool changed = false;
    double wcss = 0.0;
    for (int d = 0; d < num_days; ++d) {
      int arg = 0;
      double best = std::numeric_limits<double>::infinity();
      for (int c = 0; c < k; ++c) {
        const double v = dist2(&feat[d * dim], &centers[c * dim]);
        if (v < best) {
          best = v;
          arg = c;
        }
      }
      if (assign[d] != arg) changed = true;
      assign[d] = arg;
      wcss += best;
    }
    out.objective_history.push_back(wcss);
    if (!changed && it > 0) break;
    // Recompute centroids; an empty cluster takes the worst-served day.
    std::vector<int> count(k, 0);
    std::fill(centers.begin(), centers.end(), 0.0);
    for (int d = 0; d < num_days; ++d) {
      ++count[assign[d]];
      for (std::size_t i = 0; i < dim; ++i) centers[assign[d] * dim + i] += feat[d * dim + i];
    }
    for (int c = 0; c < k; ++c) {
      if (count[c] > 0) {
        for (std::size_t i = 0; i < dim; ++i) centers[c * dim + i] /= count[c];
      }
    }
    for (int c = 0; c < k; ++c) {
      if (count[c] > 0) continue;
      int worst = 0;
      double far = -1.0;
      for (int d = 0; d < num_days; ++d) {
        const double v = dist2(&feat[d * dim], &centers[assign[d] * dim]);
        if (v > far && count[assign[d]] > 1) {
          far = v;
          worst = d;
        }
      }
      --count[assign[worst]];
      assign[worst] = c;
      count[c] = 1;
      std::copy_n(&feat[worst * dim], dim, &centers[c * dim]);
      changed = true;
    }
  }

  // Order clusters by their earliest day and average the raw profiles.
  std::vector<int> order;
  std::vector<int> rank(k, -1);
  for (int d = 0; d < num_days; ++d) {
    if (rank[assign[d]] < 0) {
      rank[assign[d]] = static_cast<int>(order.size());
      order.push_back(assign[d]);
    }
  }
  const int used = static_cast<int>(order.size());
  out.weights.assign(used, 0);
  out.assignment.resize(num_days);
  for (int d = 0; d < num_days; ++d) {
    out.assignment[d] = rank[assign[d]];
    ++out.weights[rank[assign[d]]];
  }
  for (int c = 0; c < used; ++c) out.day_ids.push_back("d" + std::to_string(c + 1));
  for (const RawHourlySeries& s : series) {
    std::vector<double>& prof = out.profiles[s.entity];
    prof.assign(used * 24, 0.0);
    for (int d = 0; d < num_days; ++d) {
      for (int h = 0; h < 24; ++h) prof[out.assignment[d] * 24 + h] += s.values[d * 24 + h];
    }
    for (int c = 0; c < used; ++c) {
      for (int h = 0; h < 24; ++h) prof[c * 24 + h] /= out.weights[c];
    }
  }
  return out;
}

std::map<std::string, std::map<int, double>> scale_material_supply(
    const std::map<std::string, std::map<int, double>>& national,
    double state_share, const std::map<std::string, double>& sector_shares) {
  auto share_ok = [](double s) { return s >= 0.0 && s <= 1.0; };
  if (!share_ok(state_share)) throw ModelError("state share must lie in [0, 1]");
  std::map<std::string, std::map<int, double>> out;
  for (const auto& [m, by_year] : national) {
    auto it = sector_shares.find(m);
    if (it == sector_shares.end()) throw ModelError("no sector share for material " + m);
    if (!share_ok(it->second)) {
      throw ModelError("sector share of " + m + " must lie in [0, 1]");
    }
    for (const auto& [y, v] : by_year) {
      if (!(v >= 0.0)) {
        throw ModelError("national supply of " + m + " in " + std::to_string(y) +
                         " is negative");
      }
      out[m][y] = v * state_share * it->second;
    }
  }
  return out;
}

std::string_view to_string(ScenarioMode mode) {
  switch (mode) {
    case ScenarioMode::kBaseline:
      return "baseline";
    case ScenarioMode::kWithoutSupplyChain:
      return "wo_sc";
    case ScenarioMode::kLimitedSupplyChain:
      return "lim_sc";
  }
  return "baseline";
}

std::optional<ScenarioMode> parse_scenario_mode(std::string_view text) {
  for (ScenarioMode m : {ScenarioMode::kBaseline, ScenarioMode::kWithoutSupplyChain,
                         ScenarioMode::kLimitedSupplyChain}) {
    if (to_string(m) == text) return m;
  }
  return std::nullopt;
}

void apply_scenario(SystemModel& model, ScenarioMode mode, double supply_factor) {
  if (mode == ScenarioMode::kBaseline) return;
  if (mode == ScenarioMode::kLimitedSupplyChain) {
    if (!(supply_factor >= 0.0 && supply_factor <= 1.0)) {
      throw ModelError("supply factor must lie in [0, 1]");
    }
    for (auto& [m, by_year] : model.supply_chain.primary_supply) {
      for (auto& [y, v] : by_year) v *= supply_factor;
    }
    return;
  }
  for (const std::string& m : model.catalog.materials) {
    for (int y : model.time.years) {
      model.supply_chain.primary_supply[m][y] = kUnlimitedSupply;
    }
  }
  for (GeneratorAsset& g : model.assets) {
    if (g.candidate()) g.lead_time = 0;
  }
  std::set<std::pair<std::string, std::string>> pools;  // (zone, pool)
  for (const GeneratorAsset& g : model.assets) {
    const Technology* t = model.catalog.find_technology(g.technology);
    if (t == nullptr || !t->uses_land()) continue;
    pools.insert({g.zone, t->build_pool()});
    pools.insert({g.zone, t->return_pool()});
  }
  for (const FieldArea& f : model.supply_chain.fields) pools.insert({f.zone, f.field});
  std::vector<FieldArea> fields;
  for (const auto& [zone, pool] : pools) fields.push_back({zone, pool, kUnlimitedSupply});
  model.supply_chain.fields = std::move(fields);
}

void relax_integrality(SystemModel& model) {
  for (GeneratorAsset& g : model.assets) g.integrality = Integrality::kContinuous;
}

LoadedDataset load_dataset_unchecked(const fs::path& manifest_path) {
  const Doc manifest(manifest_path);
  const fs::path base = manifest_path.parent_path();
  const json& r = manifest.root();
  auto file = [&](const json& obj, const std::string& where, const std::string& key) {
    const fs::path p = base / manifest.string(manifest.member(obj, where, key),
                                              where + "/" + key);
    if (!fs::exists(p)) io_error(manifest_path.string() + ": " + key + " file " + p.string() + " does not exist");
    return p;
  };

  LoadedDataset out;
  SystemModel& m = out.model;
  m.name = manifest.string(manifest.member(r, "", "name"), "/name");

  const json& time = manifest.member(r, "", "time");
  const json& years_json = manifest.array(manifest.member(time, "/time", "years"), "/time/years");
  for (std::size_t i = 0; i < years_json.size(); ++i) {
    m.time.years.push_back(manifest.integer(years_json[i], "/time/years/" + std::to_string(i)));
  }
  if (m.time.years.empty()) manifest.fail("/time/years", "at least one year is required");
  if (!std::is_sorted(m.time.years.begin(), m.time.years.end()) ||
      std::adjacent_find(m.time.years.begin(), m.time.years.end()) != m.time.years.end()) {
    manifest.fail("/time/years", "years must be strictly increasing");
  }

  const fs::path topology = file(r, "", "topology");
  const fs::path catalog = file(r, "", "catalog");
  const fs::path assets = file(r, "", "assets");
  const fs::path policies = file(r, "", "policies");
  const fs::path supply = file(r, "", "supply_chain");
  const json& series = manifest.member(r, "", "series");
  const fs::path load_file = file(series, "/series", "load");
  std::optional<fs::path> avail_file;
  std::optional<fs::path> import_file;
  if (manifest.optional(series, "/series", "availability")) avail_file = file(series, "/series", "availability");
  if (manifest.optional(series, "/series", "imports")) import_file = file(series, "/series", "imports");

  m.topology = read_topology(Doc(topology));
  m.catalog = read_catalog(Doc(catalog), m.time.years);
  m.assets = read_assets(Doc(assets), m.time.years);
  const Policies pol = read_policies(Doc(policies), m.time.years);
  m.supply_chain = read_supply_chain(Doc(supply), m.time.years);
  m.time.discount_rate = pol.discount_rate;
  m.scenario.reserve_margin = pol.reserve_margin;
  m.scenario.rps = pol.rps;
  m.penalties = pol.penalties;

  auto assign_series = [&](const std::map<std::string, HourlySeries>& load,
                           const std::map<std::string, HourlySeries>& avail,
                           const std::map<std::string, HourlySeries>& imports,
                           const fs::path& avail_path) {
    m.scenario.load = load;
    m.scenario.imports = imports;
    for (const auto& [entity, s] : avail) {
      const auto colon = entity.find(':');
      if (colon == std::string::npos) {
        parse_error(avail_path.string() + ": availability entity '" + entity +
                    "' must be ZONE:TECHNOLOGY");
      }
      m.scenario.availability[{entity.substr(0, colon), entity.substr(colon + 1)}] = s;
    }
  };

  if (const json* cl = manifest.optional(r, "", "clustering")) {
    // Raw hourly series for one reference year, reduced to representative days.
    ClusterOptions opt;
    opt.days = manifest.integer(manifest.member(*cl, "/clustering", "days"), "/clustering/days");
    if (const json* v = manifest.optional(*cl, "/clustering", "normalize")) {
      opt.normalize = manifest.boolean(*v, "/clustering/normalize");
    }
    if (const json* v = manifest.optional(*cl, "/clustering", "weights")) {
      opt.weights = manifest.by_name(*v, "/clustering/weights");
    }
    opt.seed = seed_from_environment(42);
    if (const json* v = manifest.optional(*cl, "/clustering", "seed")) {
      if (std::getenv("SCGEP_SEED") == nullptr) {
        opt.seed = static_cast<std::uint64_t>(manifest.integer(*v, "/clustering/seed"));
      }
    }
    std::vector<RawHourlySeries> raw = read_raw_series_csv(load_file);
    const std::size_t num_load = raw.size();
    std::vector<RawHourlySeries> raw_avail;
    if (avail_file) raw_avail = read_raw_series_csv(*avail_file);
    std::vector<RawHourlySeries> raw_imports;
    if (import_file) raw_imports = read_raw_series_csv(*import_file);
    std::vector<RawHourlySeries> all = raw;
    all.insert(all.end(), raw_avail.begin(), raw_avail.end());
    ClusterResult c;
    try {
      // Imports do not shape the days; they are averaged over the clusters.
      c = cluster_representative_days(all, opt);
    } catch (const ModelError& e) {
      manifest.fail("/clustering", e.what());
    }
    const int ref_year = raw.empty() ? m.time.first_year() : raw.front().year;
    m.time.hours = 24;
    for (std::size_t d = 0; d < c.day_ids.size(); ++d) {
      RepresentativeDay day{c.day_ids[d], {}};
      for (int y : m.time.years) day.weight[y] = c.weights[d];
      m.time.days.push_back(day);
    }
    auto expand = [&](const std::vector<double>& prof, bool grow) {
      HourlySeries s(m.time.slots());
      for (int yi = 0; yi < m.time.num_years(); ++yi) {
        const double f = grow ? std::pow(1.0 + pol.load_growth, m.time.years[yi] - ref_year) : 1.0;
        for (int t = 0; t < m.time.num_days(); ++t) {
          for (int h = 0; h < 24; ++h) s[m.time.slot(yi, t, h)] = f * prof[t * 24 + h];
        }
      }
      return s;
    };
    std::map<std::string, HourlySeries> load, avail, imports;
    for (std::size_t i = 0; i < num_load; ++i) load[raw[i].entity] = expand(c.profiles.at(raw[i].entity), true);
    for (const RawHourlySeries& s : raw_avail) avail[s.entity] = expand(c.profiles.at(s.entity), false);
    for (const RawHourlySeries& s : raw_imports) {
      if (s.values.size() != c.assignment.size() * 24) {
        parse_error(import_file->string() + ": import series " + s.entity +
                    " covers a different year than the load");
      }
      std::vector<double> prof(c.day_ids.size() * 24, 0.0);
      for (std::size_t d = 0; d < c.assignment.size(); ++d) {
        for (int h = 0; h < 24; ++h) {
          prof[c.assignment[d] * 24 + h] += s.values[d * 24 + h] / c.weights[c.assignment[d]];
        }
      }
      imports[s.entity] = expand(prof, true);
    }
    assign_series(load, avail, imports, avail_file.value_or(fs::path()));
  } else {
    // Representative days given directly.
    m.time.hours = manifest.integer(manifest.member(time, "/time", "hours"), "/time/hours");
    if (m.time.hours < 1) manifest.fail("/time/hours", "must be >= 1");
    const json& days = manifest.array(manifest.member(time, "/time", "days"), "/time/days");
    for (std::size_t i = 0; i < days.size(); ++i) {
      const std::string w = "/time/days/" + std::to_string(i);
      RepresentativeDay day;
      day.id = manifest.string(manifest.member(days[i], w, "id"), w + "/id");
      day.weight = manifest.by_year(manifest.member(days[i], w, "weight"), w + "/weight", m.time.years);
      m.time.days.push_back(day);
    }
    if (m.time.days.empty()) manifest.fail("/time/days", "at least one day is required");
    const auto load = read_profiles(load_file, m.time);
    const auto avail = avail_file ? read_profiles(*avail_file, m.time)
                                  : std::map<std::string, HourlySeries>{};
    const auto imports = import_file ? read_profiles(*import_file, m.time)
                                     : std::map<std::string, HourlySeries>{};
    assign_series(load, avail, imports, avail_file.value_or(fs::path()));
  }

  if (pol.peak_load) {
    m.scenario.peak_load = *pol.peak_load;
  } else {
    // Coincident system peak over the representative hours.
    for (int yi = 0; yi < m.time.num_years(); ++yi) {
      double peak = 0.0;
      for (int t = 0; t < m.time.num_days(); ++t) {
        for (int h = 0; h < m.time.hours; ++h) {
          double total = 0.0;
          for (const auto& [zone, s] : m.scenario.load) total += s[m.time.slot(yi, t, h)];
          peak = std::max(peak, total);
        }
      }
      m.scenario.peak_load[m.time.years[yi]] = peak;
    }
  }

  if (const json* sc = manifest.optional(r, "", "scenario")) {
    const std::string mode_text =
        manifest.string(manifest.member(*sc, "/scenario", "mode"), "/scenario/mode");
    const auto mode = parse_scenario_mode(mode_text);
    if (!mode) manifest.fail("/scenario/mode", "expected baseline, wo_sc or lim_sc");
    double factor = 1.0;
    if (const json* v = manifest.optional(*sc, "/scenario", "supply_factor")) {
      factor = manifest.number(*v, "/scenario/supply_factor");
    }
    try {
      apply_scenario(m, *mode, factor);
    } catch (const ModelError& e) {
      manifest.fail("/scenario", e.what());
    }
  }

  out.report = validate(m);
  // Relaxing after validation keeps the integrality rule checked on the data
  // as written.
  if (const json* v = manifest.optional(r, "", "relax_integrality")) {
    if (manifest.boolean(*v, "/relax_integrality")) relax_integrality(m);
  }
  return out;
}

SystemModel load_dataset(const fs::path& manifest) {
  LoadedDataset d = load_dataset_unchecked(manifest);
  if (!d.report.ok()) {
    std::string msg = manifest.string() + ": model is invalid (" +
                      std::to_string(d.report.error_count()) + " error(s))";
    for (const Issue& i : d.report.issues) {
      if (i.severity == Severity::kError) {
        msg += "\n  " + i.where + ": " + i.message;
      }
    }
    throw IngestError(IngestError::Kind::kValidation, msg, d.report);
  }
  return std::move(d.model);
}

}  // namespace scgep
