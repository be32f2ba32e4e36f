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

#include "scgep/nbd.hpp"

#include <filesystem>
#include <fstream>
#include <random>

#include "doctest.h"
#include "json.hpp"
#include "model_factory.hpp"

namespace scgep {
namespace {

using testing::three_year_model;

ColumnSpec col(std::string key, int year, double lo, double hi, double cost) {
  ColumnSpec c{std::move(key), VarKind::kStock, year};
  c.lower = lo;
  c.upper = hi;
  c.cost = cost;
  return c;
}

RowSpec row(std::string key, int year, RowSense sense, double rhs,
            std::vector<std::pair<std::string, double>> terms) {
  RowSpec r{std::move(key), RowFamily::kStockBalance, year, sense, rhs,
            std::move(terms)};
  return r;
}

Formulation index(Formulation f) {
  for (std::size_t j = 0; j < f.columns.size(); ++j) {
    f.column_index[f.columns[j].key] = static_cast<int>(j);
  }
  return f;
}

// Year 1: buy x at 1 or w at 3 to cover 5 units. Year 2 pays 7 per unit of x.
// Myopic plan x = 5 costs 40; the optimum w = 5 costs 15.
Formulation linear_two_stage() {
  Formulation f;
  f.years = {1, 2};
  f.columns = {col("x", 1, 0, 10, 1), col("w", 1, 0, 10, 3),
               col("y", 2, 0, kInfinity, 1)};
  f.rows = {row("cover", 1, RowSense::kGreaterEqual, 5, {{"x", 1}, {"w", 1}}),
            row("carry", 2, RowSense::kGreaterEqual, 0, {{"y", 1}, {"x", -7}})};
  return index(f);
}

TEST_CASE("first forward pass is myopic") {
  const Formulation f = linear_two_stage();
  NbdSolver nbd(f);
  const auto fwd = nbd.forward_pass();
  CHECK(fwd.cost == doctest::Approx(40));
  CHECK(fwd.stage_objectives[0] == doctest::Approx(5));
  CHECK(fwd.stage_objectives[1] == doctest::Approx(35));
  CHECK(fwd.first_stage_bound == doctest::Approx(5));
}

TEST_CASE("linear stage cost gives an exact cut") {
  const Formulation f = linear_two_stage();
  NbdSolver nbd(f);
  const auto fwd = nbd.forward_pass();
  CHECK(nbd.backward_pass(fwd, 1) == 1);
  REQUIRE(nbd.cuts().size() == 1);
  const BendersCut& cut = nbd.cuts()[0];
  REQUIRE(cut.slope.size() == 1);
  CHECK(cut.slope[0] == doctest::Approx(7));
  CHECK(cut.intercept == doctest::Approx(35));
  CHECK(cut.evaluate(cut.trial) == cut.intercept);
  CHECK(nbd.compute_lower_bound() == doctest::Approx(15));
  // Same trajectory again: nothing new.
  CHECK(nbd.backward_pass(fwd, 2) == 0);
  CHECK(nbd.cuts().size() == 1);
}

TEST_CASE("run converges on the linear instance") {
  const Formulation f = linear_two_stage();
  NbdOptions opt;
  opt.epsilon = 1e-9;
  NbdSolver nbd(f, opt);
  const NbdResult r = nbd.run();
  CHECK(r.status == NbdStatus::kConverged);
  CHECK(r.upper_bound == doctest::Approx(15));
  CHECK(r.lower_bound == doctest::Approx(15));
  CHECK(r.iterations == 2);
  CHECK(r.best_values[f.column_index.at("w")] == doctest::Approx(5));
}

TEST_CASE("zero future sensitivity gives a flat cut") {
  Formulation f = linear_two_stage();
  f.rows[1].terms[1].second = 0.0;
  f.rows[1].rhs = 4;
  f = index(f);
  NbdSolver nbd(f);
  nbd.backward_pass(nbd.forward_pass(), 1);
  // The zero term is dropped, so there is no state to carry.
  REQUIRE(nbd.cuts().size() == 1);
  CHECK(nbd.cuts()[0].slope.empty());
  CHECK(nbd.cuts()[0].intercept == doctest::Approx(4));
}

TEST_CASE("zero iterations reports the bare first-stage bound") {
  const Formulation f = linear_two_stage();
  NbdOptions opt;
  opt.max_iterations = 0;
  const auto log = std::filesystem::temp_directory_path() / "scgep_nbd0.jsonl";
  opt.log_path = log;
  NbdSolver nbd(f, opt);
  const NbdResult r = nbd.run();
  CHECK(r.status == NbdStatus::kGapRemaining);
  CHECK(r.lower_bound == doctest::Approx(5));
  CHECK(std::isinf(r.upper_bound));
  CHECK(r.best_values.empty());
  std::ifstream in(log);
  std::string line;
  REQUIRE(std::getline(in, line));
  const auto j = nlohmann::json::parse(line);
  CHECK(j["ub"].is_null());
  CHECK(j["lb"].get<double>() == doctest::Approx(5));
  CHECK_FALSE(std::getline(in, line));
  std::filesystem::remove(log);
}

TEST_CASE("duplicate cuts are skipped") {
  const Formulation f = linear_two_stage();
  NbdSolver nbd(f);
  BendersCut c{0, 1, 10.0, {2.0}, {1.0}};
  CHECK(nbd.add_cut(c));
  CHECK_FALSE(nbd.add_cut(c));
  // Same hyperplane written at another trial point.
  BendersCut moved{0, 2, 12.0, {2.0}, {2.0}};
  CHECK_FALSE(nbd.add_cut(moved));
  BendersCut other{0, 2, 12.0, {3.0}, {2.0}};
  CHECK(nbd.add_cut(other));
  BendersCut wrong{0, 2, 12.0, {3.0, 1.0}, {2.0, 0.0}};
  CHECK_THROWS_AS(nbd.add_cut(wrong), NbdError);
  BendersCut last{1, 2, 1.0, {}, {}};
  CHECK_THROWS_AS(nbd.add_cut(last), NbdError);
}

TEST_CASE("single-year model matches the monolithic solve") {
  SystemModel m = testing::empty_model(1, 2, 100);
  m.assets.push_back(testing::existing_thermal(m, "U1", 80, 2040));
  m.assets.push_back(testing::candidate(m, "G1", "gas", 50, 0, 20, 5000));
  const Formulation f = formulate(m);
  const SolveResult mono = solve_milp(to_problem(f));
  REQUIRE(mono.optimal());
  NbdSolver nbd(f);
  const NbdResult r = nbd.run();
  CHECK(r.status == NbdStatus::kConverged);
  CHECK(r.upper_bound == doctest::Approx(mono.objective).epsilon(1e-9));
}

TEST_CASE("continuous three-year model converges to the monolithic optimum") {
  const SystemModel m = three_year_model();
  const Formulation f = formulate(m);
  const SolveResult mono = solve_lp(to_problem(f));
  REQUIRE(mono.optimal());
  NbdOptions opt;
  opt.relative_gap = true;
  opt.epsilon = 1e-6;
  NbdSolver nbd(f, opt);
  const NbdResult r = nbd.run();
  CHECK(r.status == NbdStatus::kConverged);
  CHECK(r.iterations <= 50);
  CHECK(r.upper_bound == doctest::Approx(mono.objective).epsilon(1e-6));
  CHECK(f.max_violation(r.best_values) < 1e-6);
  CHECK(f.objective(r.best_values) ==
        doctest::Approx(r.upper_bound).epsilon(1e-9));
  double lb = -kInfinity;
  for (const IterationRecord& rec : r.history) {
    CHECK(rec.lower_bound >= lb - 1e-9 * std::abs(rec.lower_bound));
    CHECK(rec.upper_bound >= rec.lower_bound - 1e-6 * std::abs(rec.upper_bound));
    CHECK(rec.trajectory_cost >= mono.objective * (1 - 1e-9));
    lb = rec.lower_bound;
  }

  SUBCASE("cuts under-estimate the relaxed future") {
    std::mt19937 rng(7);
    for (const BendersCut& cut : r.cuts) {
      // States visited by forward passes are feasible, and so is any convex
      // combination of them.
      std::vector<const BendersCut*> same;
      for (const BendersCut& c : r.cuts) {
        if (c.stage == cut.stage) same.push_back(&c);
      }
      for (int k = 0; k < 20; ++k) {
        std::vector<double> w(same.size());
        double total = 0;
        for (double& x : w) total += (x = std::uniform_real_distribution<>(0, 1)(rng));
        std::vector<double> point(cut.trial.size(), 0.0);
        for (std::size_t q = 0; q < same.size(); ++q) {
          for (std::size_t j = 0; j < point.size(); ++j) {
            point[j] += w[q] / total * same[q]->trial[j];
          }
        }
        const double future = nbd.relaxed_stage_value(cut.stage + 1, point);
        CHECK(cut.evaluate(point) <=
              future + 1e-6 * std::max(1.0, std::abs(future)));
      }
    }
  }
}

TEST_CASE("binary candidates stay within the reported gap") {
  SystemModel m = three_year_model();
  for (GeneratorAsset& g : m.assets) {
    if (g.id == "G1") g.integrality = Integrality::kBinary;
  }
  const Formulation f = formulate(m);
  const SolveResult mono = solve_milp(to_problem(f));
  REQUIRE(mono.optimal());
  NbdOptions opt;
  opt.relative_gap = true;
  opt.epsilon = 1e-6;
  opt.max_iterations = 20;
  const NbdResult r = NbdSolver(f, opt).run();
  REQUIRE(std::isfinite(r.upper_bound));
  CHECK(r.upper_bound >= mono.objective * (1 - 1e-4));
  CHECK(r.lower_bound <= mono.objective * (1 + 1e-4));
  CHECK(f.max_violation(r.best_values) < 1e-6);
}

TEST_CASE("checkpoint restores the cut pools") {
  const SystemModel m = three_year_model();
  const Formulation f = formulate(m);
  const auto ckpt = std::filesystem::temp_directory_path() / "scgep_ckpt.json";
  NbdOptions opt;
  opt.max_iterations = 2;
  opt.epsilon = 0;
  opt.checkpoint_path = ckpt;
  NbdSolver first(f, opt);
  const NbdResult r1 = first.run();
  REQUIRE_FALSE(r1.cuts.empty());

  NbdOptions warm;
  warm.warm_start_path = ckpt;
  NbdSolver second(f, warm);
  CHECK(second.cuts().size() == r1.cuts.size());
  CHECK(second.compute_lower_bound() ==
        doctest::Approx(first.compute_lower_bound()).epsilon(1e-9));

  // A checkpoint from another model is refused.
  SystemModel other = testing::empty_model(3, 2, 100);
  const Formulation g = formulate(other);
  NbdOptions bad;
  bad.warm_start_path = ckpt;
  CHECK_THROWS_AS(NbdSolver(g, bad), NbdError);
  std::filesystem::remove(ckpt);
}

TEST_CASE("options are checked") {
  const Formulation f = linear_two_stage();
  NbdOptions opt;
  opt.epsilon = -1;
  CHECK_THROWS_AS(NbdSolver(f, opt), NbdError);
  opt.epsilon = 1;
  opt.max_iterations = -1;
  CHECK_THROWS_AS(NbdSolver(f, opt), NbdError);
}

}  // namespace
}  // namespace scgep
