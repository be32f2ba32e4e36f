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

// Reference solutions used to certify the decomposition: the monolithic
// problem solved directly, and for tiny models a brute-force enumeration of
// every integral investment schedule.

#ifndef SCGEP_ORACLE_HPP_
#define SCGEP_ORACLE_HPP_

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "scgep/builder.hpp"
#include "scgep/milp.hpp"
#include "scgep/model.hpp"
#include "scgep/report.hpp"

namespace scgep {

class OracleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct MonolithicResult {
  Formulation formulation;
  SolveResult solve;
  PlanReport report;  // empty unless solve has a solution
};

// Throws OracleError when no solution is found within the limits.
MonolithicResult solve_monolithic(const SystemModel& model,
                                  const SolverOptions& options = {});

struct EnumerationResult {
  double objective = kInfinity;
  std::vector<double> values;  // best schedule, formulation-indexed
  std::int64_t schedules = 0;  // residual LPs solved
  std::int64_t infeasible = 0;
};

// Each binary candidate is either never decided or decided in exactly one
// year where that is allowed; continuous decisions stay in the residual LP.
// Throws OracleError when the number of schedules exceeds max_schedules.
EnumerationResult enumerate_tiny(const SystemModel& model,
                                 const SolverOptions& options = {},
                                 std::int64_t max_schedules = 4096);

}  // namespace scgep

#endif  // SCGEP_ORACLE_HPP_
