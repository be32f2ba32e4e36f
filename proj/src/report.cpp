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

#include "scgep/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "json.hpp"

namespace scgep {
namespace {

using nlohmann::json;

// Solver noise below this is reported as zero.
constexpr double kClean = 1e-9;

double clean(double v) { return std::abs(v) < kClean ? 0.0 : v; }

class Values {
 public:
  Values(const Formulation& f, const std::vector<double>& v) : f_(f), v_(v) {
    if (v.size() != f.columns.size()) {
      throw ReportError("value vector does not match the formulation");
    }
  }
  double operator()(VarKind kind, std::initializer_list<std::string> idx) const {
    auto it = f_.column_index.find(variable_key(kind, std::vector<std::string>(idx)));
    return it == f_.column_index.end() ? 0.0 : clean(v_[it->second]);
  }

 private:
  const Formulation& f_;
  const std::vector<double>& v_;
};

std::string str(int v) { return std::to_string(v); }

}  // namespace

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (value == 0.0) return "0";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

double PlanReport::cost_total() const {
  double total = 0.0;
  for (const CostRecord& c : costs) total += c.total();
  return total;
}

PlanReport make_plan_report(const SystemModel& model,
                            const Formulation& formulation,
                            const std::vector<double>& values) {
  const Values val(formulation, values);
  const TimeStructure& time = model.time;
  PlanReport rep;
  rep.model_name = model.name;
  rep.years = time.years;

  for (const GeneratorAsset& g : model.assets) {
    UnitInfo u;
    u.id = g.id;
    u.zone = g.zone;
    u.technology = g.technology;
    u.candidate = g.candidate();
    u.capacity_mw = g.capacity_mw;
    u.energy_mwh = g.storage ? g.storage->energy_mwh : 0.0;
    u.lead_time = g.candidate() ? g.lead_time : 0;
    u.lifetime = g.lifetime;
    u.retirement_year = g.candidate() ? 0 : effective_retirement_year(model, g);
    rep.units.push_back(u);
    for (int y : time.years) {
      const std::string ys = str(y);
      rep.unit_years.push_back({g.id, y, val(VarKind::kPlan, {g.id, ys}),
                                val(VarKind::kBuild, {g.id, ys}),
                                val(VarKind::kRetire, {g.id, ys}),
                                val(VarKind::kOperate, {g.id, ys})});
    }
  }

  for (const Technology& k : model.catalog.technologies) {
    for (int y : time.years) {
      CapacityRecord c{k.id, y, 0, 0, 0, 0};
      const std::string ys = str(y);
      for (const GeneratorAsset& g : model.assets) {
        if (g.technology != k.id) continue;
        c.operational_mw += g.capacity_mw * val(VarKind::kOperate, {g.id, ys});
        c.planned_mw += g.capacity_mw * val(VarKind::kPlan, {g.id, ys});
        c.built_mw += g.capacity_mw * val(VarKind::kBuild, {g.id, ys});
        c.retired_mw += g.capacity_mw * val(VarKind::kRetire, {g.id, ys});
      }
      rep.capacity.push_back(c);
    }
  }

  for (const std::string& m : model.catalog.materials) {
    for (int y : time.years) {
      const std::string ys = str(y);
      MaterialRecord r;
      r.material = m;
      r.year = y;
      r.primary_supply = model.supply_chain.supply(m, y);
      for (const GeneratorAsset& g : model.assets) {
        r.recovered += model.supply_chain.recovery_rate(g.id, m) *
                       g.capacity_mw * val(VarKind::kRetire, {g.id, ys});
      }
      r.stock = val(VarKind::kStock, {m, ys});
      r.used = val(VarKind::kMaterialUse, {m, ys});
      r.remaining = clean(r.primary_supply + r.recovered + r.stock - r.used);
      rep.materials.push_back(r);
    }
  }

  for (const auto& [pool, zone] : field_pools(model)) {
    for (int y : time.years) {
      const std::string ys = str(y);
      FieldRecord r;
      r.pool = pool;
      r.zone = zone;
      r.year = y;
      r.initial = y == time.first_year()
                      ? model.supply_chain.initial_area(zone, pool)
                      : 0.0;
      r.available = val(VarKind::kField, {pool, zone, ys});
      for (const GeneratorAsset& g : model.assets) {
        if (g.zone != zone) continue;
        const Technology& tech = model.technology_of(g);
        if (!tech.uses_land()) continue;
        const double area = g.capacity_mw / tech.capacity_density;
        if (g.candidate() && tech.build_pool() == pool) {
          r.deployed += area * val(VarKind::kPlan, {g.id, ys});
        }
        if (tech.return_pool() == pool) {
          r.returned += area * val(VarKind::kRetire, {g.id, ys});
        }
      }
      rep.fields.push_back(r);
    }
  }

  for (int yi = 0; yi < time.num_years(); ++yi) {
    const int y = time.years[yi];
    const std::string ys = str(y);
    ReliabilityRecord r;
    r.year = y;
    for (const std::string& zone : model.topology.zones) {
      for (int t = 0; t < time.num_days(); ++t) {
        const double w = time.weight(t, y);
        for (int h = 0; h < time.hours; ++h) {
          r.demand_mwh += w * model.load(zone, yi, t, h);
          r.load_shed_mwh +=
              w * val(VarKind::kLoadShed,
                      {zone, time.days[t].id, str(h + 1), ys});
        }
      }
    }
    r.reserve_shortfall_mw = val(VarKind::kReserveShortfall, {ys});
    for (const Technology& k : model.catalog.technologies) {
      const double e = val(VarKind::kRpsShortfall, {k.id, ys});
      if (formulation.find_column(variable_key(VarKind::kRpsShortfall,
                                               {k.id, ys})) != nullptr) {
        rep.rps.push_back({k.id, y, e});
      }
      r.rps_shortfall_mwh += e;
    }
    rep.reliability.push_back(r);

    for (const Technology& k : model.catalog.technologies) {
      DispatchRecord d{k.id, y, 0, 0};
      for (const GeneratorAsset& g : model.assets) {
        if (g.technology != k.id) continue;
        for (int t = 0; t < time.num_days(); ++t) {
          const double w = time.weight(t, y);
          const std::string& day = time.days[t].id;
          for (int h = 0; h < time.hours; ++h) {
            const std::string hs = str(h + 1);
            if (k.type == TechType::kStorage) {
              d.generation_mwh += w * val(VarKind::kDischarge, {g.id, day, hs, ys});
              d.charge_mwh += w * val(VarKind::kCharge, {g.id, day, hs, ys});
            } else {
              d.generation_mwh += w * val(VarKind::kGeneration, {g.id, day, hs, ys});
            }
          }
        }
      }
      rep.dispatch.push_back(d);
    }

    for (const GeneratorAsset& g : model.assets) {
      if (!g.storage) continue;
      for (int t = 0; t < time.num_days(); ++t) {
        const std::string& day = time.days[t].id;
        rep.storage.push_back(
            {g.id, day, y, val(VarKind::kStateOfCharge, {g.id, day, "1", ys}),
             val(VarKind::kStateOfCharge, {g.id, day, str(time.hours), ys}),
             val(VarKind::kOperate, {g.id, ys}), g.storage->energy_mwh});
      }
    }
  }

  std::map<int, CostRecord> costs;
  for (int y : time.years) costs[y].year = y;
  for (std::size_t j = 0; j < formulation.columns.size(); ++j) {
    const ColumnSpec& c = formulation.columns[j];
    const double amount = c.cost * values[j];
    CostRecord& rec = costs[c.year];
    switch (c.kind) {
      case VarKind::kPlan:
        rec.investment += amount;
        break;
      case VarKind::kLoadShed:
      case VarKind::kReserveShortfall:
      case VarKind::kRpsShortfall:
        rec.penalty += amount;
        break;
      default:
        rec.operation += amount;
        break;
    }
  }
  for (auto& [y, c] : costs) rep.costs.push_back(c);
  rep.objective = formulation.objective(values);
  rep.lower_bound = rep.objective;
  return rep;
}

namespace {

json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return clean(v);
}

double number_or(const json& j, double fallback) {
  return j.is_null() ? fallback : j.get<double>();
}

json to_json(const PlanReport& r) {
  json j;
  j["schema_version"] = r.schema_version;
  j["model"] = {{"name", r.model_name}, {"digest", r.model_digest}};
  j["solve"] = {{"method", r.method},
                {"status", r.status},
                {"objective", number(r.objective)},
                {"lower_bound", number(r.lower_bound)},
                {"gap", number(r.gap)},
                {"iterations", r.iterations}};
  j["years"] = r.years;
  json units = json::array();
  for (const UnitInfo& u : r.units) {
    units.push_back({{"id", u.id},
                     {"zone", u.zone},
                     {"technology", u.technology},
                     {"candidate", u.candidate},
                     {"capacity_mw", number(u.capacity_mw)},
                     {"energy_mwh", number(u.energy_mwh)},
                     {"lead_time", u.lead_time},
                     {"lifetime", u.lifetime},
                     {"retirement_year", u.retirement_year}});
  }
  j["units"] = units;
  json uy = json::array();
  for (const UnitYear& u : r.unit_years) {
    uy.push_back({{"unit", u.unit},
                  {"year", u.year},
                  {"d", number(u.plan)},
                  {"b", number(u.build)},
                  {"r", number(u.retire)},
                  {"o", number(u.operate)}});
  }
  j["unit_years"] = uy;
  json cap = json::array();
  for (const CapacityRecord& c : r.capacity) {
    cap.push_back({{"technology", c.technology},
                   {"year", c.year},
                   {"operational_mw", number(c.operational_mw)},
                   {"planned_mw", number(c.planned_mw)},
                   {"built_mw", number(c.built_mw)},
                   {"retired_mw", number(c.retired_mw)}});
  }
  j["capacity"] = cap;
  json mat = json::array();
  for (const MaterialRecord& m : r.materials) {
    mat.push_back({{"material", m.material},
                   {"year", m.year},
                   {"primary_supply", number(m.primary_supply)},
                   {"recovered", number(m.recovered)},
                   {"stock", number(m.stock)},
                   {"used", number(m.used)},
                   {"remaining", number(m.remaining)}});
  }
  j["materials"] = mat;
  json fld = json::array();
  for (const FieldRecord& f : r.fields) {
    fld.push_back({{"pool", f.pool},
                   {"zone", f.zone},
                   {"year", f.year},
                   {"initial", number(f.initial)},
                   {"available", number(f.available)},
                   {"deployed", number(f.deployed)},
                   {"returned", number(f.returned)}});
  }
  j["fields"] = fld;
  json rel = json::array();
  for (const ReliabilityRecord& x : r.reliability) {
    rel.push_back({{"year", x.year},
                   {"demand_mwh", number(x.demand_mwh)},
                   {"load_shed_mwh", number(x.load_shed_mwh)},
                   {"reserve_shortfall_mw", number(x.reserve_shortfall_mw)},
                   {"rps_shortfall_mwh", number(x.rps_shortfall_mwh)}});
  }
  j["reliability"] = rel;
  json rps = json::array();
  for (const RpsRecord& x : r.rps) {
    rps.push_back({{"technology", x.technology},
                   {"year", x.year},
                   {"shortfall_mwh", number(x.shortfall_mwh)}});
  }
  j["rps"] = rps;
  json disp = json::array();
  for (const DispatchRecord& d : r.dispatch) {
    disp.push_back({{"technology", d.technology},
                    {"year", d.year},
                    {"generation_mwh", number(d.generation_mwh)},
                    {"charge_mwh", number(d.charge_mwh)}});
  }
  j["dispatch"] = disp;
  json st = json::array();
  for (const StorageRecord& s : r.storage) {
    st.push_back({{"unit", s.unit},
                  {"day", s.day},
                  {"year", s.year},
                  {"soc_first", number(s.soc_first)},
                  {"soc_last", number(s.soc_last)},
                  {"o", number(s.operate)},
                  {"energy_mwh", number(s.energy_mwh)}});
  }
  j["storage"] = st;
  json cost = json::array();
  for (const CostRecord& c : r.costs) {
    cost.push_back({{"year", c.year},
                    {"investment", number(c.investment)},
                    {"operation", number(c.operation)},
                    {"penalty", number(c.penalty)}});
  }
  j["costs"] = cost;
  return j;
}

}  // namespace

std::string plan_to_json(const PlanReport& report) {
  return to_json(report).dump(2) + "\n";
}

PlanReport plan_from_json(const std::string& text) {
  PlanReport r;
  try {
    const json j = json::parse(text);
    r.schema_version = j.at("schema_version").get<int>();
    if (r.schema_version != kReportSchemaVersion) {
      throw ReportError("unsupported plan schema version " +
                        std::to_string(r.schema_version));
    }
    r.model_name = j.at("model").at("name").get<std::string>();
    r.model_digest = j.at("model").at("digest").get<std::string>();
    const json& s = j.at("solve");
    r.method = s.at("method").get<std::string>();
    r.status = s.at("status").get<std::string>();
    r.objective = number_or(s.at("objective"), kInfinity);
    r.lower_bound = number_or(s.at("lower_bound"), -kInfinity);
    r.gap = number_or(s.at("gap"), kInfinity);
    r.iterations = s.at("iterations").get<int>();
    r.years = j.at("years").get<std::vector<int>>();
    for (const json& u : j.at("units")) {
      r.units.push_back({u.at("id"), u.at("zone"), u.at("technology"),
                         u.at("candidate"), u.at("capacity_mw"),
                         u.at("energy_mwh"), u.at("lead_time"),
                         u.at("lifetime"), u.at("retirement_year")});
    }
    for (const json& u : j.at("unit_years")) {
      r.unit_years.push_back(
          {u.at("unit"), u.at("year"), u.at("d"), u.at("b"), u.at("r"), u.at("o")});
    }
    for (const json& c : j.at("capacity")) {
      r.capacity.push_back({c.at("technology"), c.at("year"),
                            c.at("operational_mw"), c.at("planned_mw"),
                            c.at("built_mw"), c.at("retired_mw")});
    }
    for (const json& m : j.at("materials")) {
      r.materials.push_back({m.at("material"), m.at("year"),
                             m.at("primary_supply"), m.at("recovered"),
                             m.at("stock"), m.at("used"), m.at("remaining")});
    }
    for (const json& f : j.at("fields")) {
      r.fields.push_back({f.at("pool"), f.at("zone"), f.at("year"),
                          f.at("initial"), f.at("available"), f.at("deployed"),
                          f.at("returned")});
    }
    for (const json& x : j.at("reliability")) {
      r.reliability.push_back({x.at("year"), x.at("demand_mwh"),
                               x.at("load_shed_mwh"),
                               x.at("reserve_shortfall_mw"),
                               x.at("rps_shortfall_mwh")});
    }
    for (const json& x : j.at("rps")) {
      r.rps.push_back({x.at("technology"), x.at("year"), x.at("shortfall_mwh")});
    }
    for (const json& d : j.at("dispatch")) {
      r.dispatch.push_back({d.at("technology"), d.at("year"),
                            d.at("generation_mwh"), d.at("charge_mwh")});
    }
    for (const json& s2 : j.at("storage")) {
      r.storage.push_back({s2.at("unit"), s2.at("day"), s2.at("year"),
                           s2.at("soc_first"), s2.at("soc_last"), s2.at("o"),
                           s2.at("energy_mwh")});
    }
    for (const json& c : j.at("costs")) {
      r.costs.push_back({c.at("year"), c.at("investment"), c.at("operation"),
                         c.at("penalty")});
    }
  } catch (const json::exception& e) {
    throw ReportError(std::string("malformed plan.json: ") + e.what());
  }
  return r;
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ReportError("cannot write " + path.string());
  out << text;
  if (!out) throw ReportError("write failed for " + path.string());
}

class Csv {
 public:
  explicit Csv(std::initializer_list<const char*> header) {
    bool first = true;
    for (const char* h : header) {
      if (!first) text_ += ',';
      text_ += h;
      first = false;
    }
    text_ += '\n';
  }
  Csv& field(const std::string& s) {
    sep();
    text_ += s;
    return *this;
  }
  Csv& field(int v) { return field(std::to_string(v)); }
  Csv& field(double v) { return field(format_double(v)); }
  void end() {
    text_ += '\n';
    fresh_ = true;
  }
  const std::string& text() const { return text_; }

 private:
  void sep() {
    if (!fresh_) text_ += ',';
    fresh_ = false;
  }
  std::string text_;
  bool fresh_ = true;
};

}  // namespace

void write_report(const PlanReport& report, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ReportError("cannot create " + dir.string() + ": " + ec.message());
  write_file(dir / "plan.json", plan_to_json(report));

  Csv cap({"technology", "year", "operational_mw", "planned_mw", "built_mw",
           "retired_mw"});
  for (const CapacityRecord& c : report.capacity) {
    cap.field(c.technology).field(c.year).field(c.operational_mw)
        .field(c.planned_mw).field(c.built_mw).field(c.retired_mw).end();
  }
  write_file(dir / "capacity.csv", cap.text());

  Csv mat({"material", "year", "primary_supply_t", "recovered_t", "stock_t",
           "used_t", "remaining_t"});
  for (const MaterialRecord& m : report.materials) {
    mat.field(m.material).field(m.year).field(m.primary_supply)
        .field(m.recovered).field(m.stock).field(m.used).field(m.remaining).end();
  }
  write_file(dir / "materials.csv", mat.text());

  Csv fld({"pool", "zone", "year", "initial_km2", "available_km2",
           "deployed_km2", "returned_km2"});
  for (const FieldRecord& f : report.fields) {
    fld.field(f.pool).field(f.zone).field(f.year).field(f.initial)
        .field(f.available).field(f.deployed).field(f.returned).end();
  }
  write_file(dir / "fields.csv", fld.text());

  Csv rel({"year", "demand_mwh", "load_shed_mwh", "reserve_shortfall_mw",
           "rps_shortfall_mwh"});
  for (const ReliabilityRecord& r : report.reliability) {
    rel.field(r.year).field(r.demand_mwh).field(r.load_shed_mwh)
        .field(r.reserve_shortfall_mw).field(r.rps_shortfall_mwh).end();
  }
  write_file(dir / "reliability.csv", rel.text());

  Csv cost({"year", "investment", "operation", "penalty", "total"});
  CostRecord sum;
  for (const CostRecord& c : report.costs) {
    cost.field(c.year).field(c.investment).field(c.operation).field(c.penalty)
        .field(c.total()).end();
    sum.investment += c.investment;
    sum.operation += c.operation;
    sum.penalty += c.penalty;
  }
  if (!report.costs.empty()) {
    cost.field(std::string("total")).field(sum.investment).field(sum.operation)
        .field(sum.penalty).field(sum.total()).end();
  }
  write_file(dir / "costs.csv", cost.text());
}

PlanReport read_report(const std::filesystem::path& dir) {
  const std::filesystem::path path = dir / "plan.json";
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ReportError("cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return plan_from_json(buf.str());
}

namespace {

std::string fixed(double v, int precision = 2) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(precision) << v;
  std::string text = os.str();
  // No "-0.00" for values that round to zero.
  if (text[0] == '-' && text.find_first_not_of("-0.") == std::string::npos) {
    text.erase(0, 1);
  }
  return text;
}

std::string table(const std::vector<std::string>& header,
                  const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
  for (const auto& r : rows) {
    for (std::size_t c = 0; c < r.size(); ++c) {
      width[c] = std::max(width[c], r[c].size());
    }
  }
  std::ostringstream os;
  auto line = [&](const std::vector<std::string>& r) {
    for (std::size_t c = 0; c < r.size(); ++c) {
      os << (c == 0 ? "" : "  ");
      if (c == 0) {
        os << std::left << std::setw(static_cast<int>(width[c])) << r[c];
      } else {
        os << std::right << std::setw(static_cast<int>(width[c])) << r[c];
      }
    }
    os << '\n';
  };
  line(header);
  std::vector<std::string> rule;
  for (std::size_t w : width) rule.push_back(std::string(w, '-'));
  line(rule);
  for (const auto& r : rows) line(r);
  return os.str();
}

}  // namespace

std::string render_report(const PlanReport& r) {
  std::ostringstream os;
  os << "Model " << r.model_name << " (" << r.method << ", " << r.status
     << ")\n";
  os << "Objective $" << fixed(r.objective) << ", lower bound $"
     << fixed(r.lower_bound) << ", gap " << format_double(r.gap) << ", "
     << r.iterations << " iteration(s)\n\n";
  std::vector<std::vector<std::string>> rows;
  for (const CapacityRecord& c : r.capacity) {
    rows.push_back({c.technology, std::to_string(c.year), fixed(c.operational_mw),
                    fixed(c.planned_mw), fixed(c.built_mw), fixed(c.retired_mw)});
  }
  os << "Operational capacity (MW)\n"
     << table({"technology", "year", "operating", "decided", "online",
               "retired"},
              rows)
     << '\n';
  rows.clear();
  for (const MaterialRecord& m : r.materials) {
    rows.push_back({m.material, std::to_string(m.year), fixed(m.primary_supply),
                    fixed(m.recovered), fixed(m.stock), fixed(m.used),
                    fixed(m.remaining)});
  }
  if (!rows.empty()) {
    os << "Materials (t)\n"
       << table({"material", "year", "supply", "recovered", "stock", "used",
                 "remaining"},
                rows)
       << '\n';
  }
  rows.clear();
  for (const FieldRecord& f : r.fields) {
    rows.push_back({f.pool + "/" + f.zone, std::to_string(f.year),
                    fixed(f.available, 4), fixed(f.deployed, 4),
                    fixed(f.returned, 4)});
  }
  if (!rows.empty()) {
    os << "Field area (km2)\n"
       << table({"pool/zone", "year", "available", "deployed", "returned"}, rows)
       << '\n';
  }
  rows.clear();
  for (const ReliabilityRecord& x : r.reliability) {
    rows.push_back({std::to_string(x.year), fixed(x.demand_mwh),
                    fixed(x.load_shed_mwh), fixed(x.reserve_shortfall_mw),
                    fixed(x.rps_shortfall_mwh)});
  }
  os << "Reliability\n"
     << table({"year", "demand MWh", "shed MWh", "reserve short MW",
               "RPS short MWh"},
              rows)
     << '\n';
  rows.clear();
  for (const CostRecord& c : r.costs) {
    rows.push_back({std::to_string(c.year), fixed(c.investment),
                    fixed(c.operation), fixed(c.penalty), fixed(c.total())});
  }
  rows.push_back({"total", "", "", "", fixed(r.cost_total())});
  os << "Costs ($)\n"
     << table({"year", "investment", "operation", "penalty", "total"}, rows);
  return os.str();
}

std::vector<std::string> check_plan_invariants(const PlanReport& r,
                                               double tol) {
  std::vector<std::string> bad;
  auto expect = [&](double lhs, double rhs, const std::string& what) {
    if (!(std::abs(lhs - rhs) <= tol)) {
      bad.push_back(what + ": " + format_double(lhs) + " vs " +
                    format_double(rhs));
    }
  };
  auto at_most = [&](double lhs, double rhs, const std::string& what) {
    if (!(lhs <= rhs + tol)) {
      bad.push_back(what + ": " + format_double(lhs) + " > " +
                    format_double(rhs));
    }
  };

  // Stock recursion and supply limit.
  std::map<std::string, std::vector<const MaterialRecord*>> by_material;
  for (const MaterialRecord& m : r.materials) by_material[m.material].push_back(&m);
  for (auto& [m, recs] : by_material) {
    std::sort(recs.begin(), recs.end(),
              [](auto* a, auto* b) { return a->year < b->year; });
    for (std::size_t k = 0; k < recs.size(); ++k) {
      const MaterialRecord& x = *recs[k];
      const std::string where = m + " " + std::to_string(x.year);
      at_most(x.used, x.primary_supply + x.recovered + x.stock,
              "material supply " + where);
      expect(x.remaining, x.primary_supply + x.recovered + x.stock - x.used,
             "remaining material " + where);
      if (k > 0) {
        const MaterialRecord& p = *recs[k - 1];
        expect(x.stock, p.stock + p.primary_supply + p.recovered - p.used,
               "stock balance " + where);
      }
    }
  }

  // Field recursion, use limit and telescoped area conservation.
  std::map<std::pair<std::string, std::string>, std::vector<const FieldRecord*>>
      by_pool;
  for (const FieldRecord& f : r.fields) by_pool[{f.pool, f.zone}].push_back(&f);
  for (auto& [pz, recs] : by_pool) {
    std::sort(recs.begin(), recs.end(),
              [](auto* a, auto* b) { return a->year < b->year; });
    if (recs.empty()) continue;
    const double initial = recs.front()->initial;
    double deployed_before = 0.0;
    double returned_through = 0.0;
    for (std::size_t k = 0; k < recs.size(); ++k) {
      const FieldRecord& x = *recs[k];
      const std::string where = pz.first + "/" + pz.second + " " +
                                std::to_string(x.year);
      returned_through += x.returned;
      if (k == 0) {
        expect(x.available, x.initial + x.returned, "initial field " + where);
      } else {
        const FieldRecord& p = *recs[k - 1];
        expect(x.available, p.available + x.returned - p.deployed,
               "field balance " + where);
      }
      at_most(x.deployed, x.available, "field use " + where);
      expect(x.available + deployed_before - returned_through, initial,
             "area conservation " + where);
      deployed_before += x.deployed;
    }
  }

  // Unit status algebra, lead time and lifetime.
  std::map<std::string, std::vector<const UnitYear*>> by_unit;
  for (const UnitYear& u : r.unit_years) by_unit[u.unit].push_back(&u);
  for (const UnitInfo& u : r.units) {
    auto it = by_unit.find(u.id);
    if (it == by_unit.end()) {
      bad.push_back("unit " + u.id + " has no yearly status");
      continue;
    }
    auto recs = it->second;
    std::sort(recs.begin(), recs.end(),
              [](auto* a, auto* b) { return a->year < b->year; });
    double o_prev = u.candidate ? 0.0 : 1.0;
    for (std::size_t k = 0; k < recs.size(); ++k) {
      const UnitYear& x = *recs[k];
      const std::string where = u.id + " " + std::to_string(x.year);
      expect(x.operate, o_prev + x.build - x.retire, "status " + where);
      if (x.operate < -tol || x.operate > 1 + tol) {
        bad.push_back("status out of [0,1] " + where);
      }
      o_prev = x.operate;
      double cum_b = 0, cum_d_lead = 0, cum_r = 0, cum_b_life = 0;
      for (std::size_t q = 0; q <= k; ++q) {
        cum_b += recs[q]->build;
        cum_r += recs[q]->retire;
        if (recs[q]->year <= x.year - u.lead_time) cum_d_lead += recs[q]->plan;
        if (recs[q]->year <= x.year - u.lifetime) cum_b_life += recs[q]->build;
      }
      if (u.candidate) {
        expect(cum_b, cum_d_lead, "lead time " + where);
        expect(cum_r, cum_b_life, "lifetime " + where);
      } else {
        expect(x.build, 0.0, "existing build " + where);
        expect(x.retire, x.year == u.retirement_year ? 1.0 : 0.0,
               "fixed retirement " + where);
      }
    }
  }

  for (const StorageRecord& s : r.storage) {
    const std::string where = s.unit + " " + s.day + " " + std::to_string(s.year);
    expect(s.soc_first, 0.5 * s.energy_mwh * s.operate, "first-hour SOC " + where);
    expect(s.soc_last, 0.5 * s.energy_mwh * s.operate, "last-hour SOC " + where);
  }

  const double total = r.cost_total();
  if (std::isfinite(r.objective) &&
      !(std::abs(total - r.objective) <= 1e-6 * std::max(1.0, std::abs(r.objective)))) {
    bad.push_back("cost breakdown " + format_double(total) +
                  " does not sum to objective " + format_double(r.objective));
  }
  return bad;
}

bool RunComparison::all_zero(double tolerance) const {
  for (const auto& [k, by_year] : built_mw_delta) {
    for (const auto& [y, v] : by_year) {
      if (std::abs(v) > tolerance) return false;
    }
  }
  for (const auto& [y, v] : cost_delta) {
    if (std::abs(v) > tolerance) return false;
  }
  return std::abs(objective_delta) <= tolerance;
}

RunComparison compare_runs(const PlanReport& a, const PlanReport& b) {
  if (a.years != b.years) throw ReportError("runs cover different horizons");
  RunComparison diff;
  for (const CapacityRecord& c : a.capacity) {
    diff.built_mw_delta[c.technology][c.year] -= c.built_mw;
  }
  for (const CapacityRecord& c : b.capacity) {
    diff.built_mw_delta[c.technology][c.year] += c.built_mw;
  }
  for (const CostRecord& c : a.costs) diff.cost_delta[c.year] -= c.total();
  for (const CostRecord& c : b.costs) diff.cost_delta[c.year] += c.total();
  diff.objective_delta = b.objective - a.objective;
  return diff;
}

RunComparison compare_runs(const std::filesystem::path& dir_a,
                           const std::filesystem::path& dir_b) {
  return compare_runs(read_report(dir_a), read_report(dir_b));
}

std::string render_comparison(const RunComparison& diff) {
  std::set<int> years;
  for (const auto& [k, by_year] : diff.built_mw_delta) {
    for (const auto& [y, v] : by_year) years.insert(y);
  }
  std::vector<std::string> header = {"technology"};
  for (int y : years) header.push_back(std::to_string(y));
  std::vector<std::vector<std::string>> rows;
  for (const auto& [k, by_year] : diff.built_mw_delta) {
    std::vector<std::string> row = {k};
    for (int y : years) {
      auto it = by_year.find(y);
      const double v = it == by_year.end() ? 0.0 : clean(it->second);
      row.push_back(v == 0.0 ? "0" : (v > 0 ? "+" : "") + fixed(v));
    }
    rows.push_back(row);
  }
  std::ostringstream os;
  os << "Built capacity difference, B - A (MW)\n" << table(header, rows) << '\n';
  rows.clear();
  for (const auto& [y, v] : diff.cost_delta) {
    rows.push_back({std::to_string(y), fixed(clean(v))});
  }
  os << "Cost difference, B - A ($)\n" << table({"year", "delta"}, rows);
  os << "Objective difference: " << fixed(diff.objective_delta) << '\n';
  return os.str();
}

}  // namespace scgep
