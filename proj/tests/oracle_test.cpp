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

#include "scgep/oracle.hpp"

#include "doctest.h"
#include "model_factory.hpp"
#include "scgep/nbd.hpp"

namespace scgep {
namespace {

using testing::candidate;
using testing::empty_model;
using testing::existing_thermal;
using testing::three_year_model;

TEST_CASE("one binary candidate over three years needs four schedules") {
  SystemModel m = empty_model(3, 2, 100);
  m.assets.push_back(existing_thermal(m, "U1", 80, 2040));
  m.assets.push_back(candidate(m, "G1", "gas", 50, 0, 20, 5000));
  const EnumerationResult e = enumerate_tiny(m);
  CHECK(e.schedules == 4);
  const MonolithicResult mono = solve_monolithic(m);
  CHECK(e.objective == doctest::Approx(mono.solve.objective).epsilon(1e-6));
}

TEST_CASE("blocked years are not enumerated") {
  SystemModel m = empty_model(3, 2, 100);
  m.assets.push_back(candidate(m, "G1", "gas", 50, 2, 20, 5000));
  // Lead time 2 leaves only the first year.
  CHECK(enumerate_tiny(m).schedules == 2);
}

TEST_CASE("no binary candidate means one LP") {
  SystemModel m = empty_model(2, 2, 100);
  m.assets.push_back(existing_thermal(m, "U1", 80, 2040));
  m.assets.push_back(candidate(m, "S1", "spv", 30, 0, 20, 1000));
  CHECK(enumerate_tiny(m).schedules == 1);
}

TEST_CASE("schedule cap is enforced") {
  SystemModel m = empty_model(3, 1, 100);
  for (int k = 0; k < 4; ++k) {
    m.assets.push_back(candidate(m, "G" + std::to_string(k), "gas", 10, 0, 20, 1));
  }
  CHECK_THROWS_AS(enumerate_tiny(m, {}, 100), OracleError);
  CHECK(enumerate_tiny(m).schedules == 256);
}

TEST_CASE("zero load costs nothing") {
  SystemModel m = empty_model(2, 2, 0);
  m.assets.push_back(candidate(m, "G1", "gas", 50, 0, 20, 5000));
  const MonolithicResult r = solve_monolithic(m);
  CHECK(r.solve.objective == doctest::Approx(0));
  for (const CostRecord& c : r.report.costs) {
    CHECK(c.investment == 0);
    CHECK(c.operation == 0);
    CHECK(c.penalty == 0);
  }
}

TEST_CASE("load without units is all slack") {
  SystemModel m = empty_model(2, 3, 40);
  const MonolithicResult r = solve_monolithic(m);
  const double shed = 2 * 365 * 3 * 40 * m.penalties.voll;
  const double reserve = 2 * 1.15 * 40 * m.penalties.reserve;
  CHECK(r.solve.objective == doctest::Approx(shed + reserve));
  CHECK(r.report.reliability[0].load_shed_mwh == doctest::Approx(365 * 3 * 40));
}

TEST_CASE("three ways agree on the three-year model") {
  SystemModel m = three_year_model();
  for (bool binary : {false, true}) {
    CAPTURE(binary);
    for (GeneratorAsset& g : m.assets) {
      if (g.id == "G1") {
        g.integrality = binary ? Integrality::kBinary : Integrality::kContinuous;
      }
    }
    const MonolithicResult mono = solve_monolithic(m);
    const EnumerationResult e = enumerate_tiny(m);
    CHECK(e.objective == doctest::Approx(mono.solve.objective).epsilon(1e-4));
    CHECK(check_plan_invariants(mono.report).empty());
    NbdOptions opt;
    opt.relative_gap = true;
    opt.epsilon = 1e-6;
    const NbdResult nbd = run_nbd(m, opt);
    CHECK(nbd.upper_bound >= mono.solve.objective * (1 - 1e-4));
    if (!binary) {
      CHECK(nbd.upper_bound == doctest::Approx(mono.solve.objective).epsilon(1e-4));
    } else {
      CHECK(nbd.upper_bound - mono.solve.objective <=
            nbd.upper_bound - nbd.lower_bound + 1e-4 * std::abs(nbd.upper_bound));
    }
  }
}

}  // namespace
}  // namespace scgep
