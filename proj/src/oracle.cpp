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

#include <string>

namespace scgep {

MonolithicResult solve_monolithic(const SystemModel& model,
                                  const SolverOptions& options) {
  MonolithicResult out;
  out.formulation = formulate(model);
  out.solve = solve_milp(to_problem(out.formulation), options);
  if (!out.solve.has_solution) {
    throw OracleError("monolithic problem is " +
                      std::string(to_string(out.solve.status)));
  }
  out.report = make_plan_report(model, out.formulation, out.solve.primal);
  out.report.method = "monolithic";
  out.report.status = std::string(to_string(out.solve.status));
  out.report.lower_bound = out.solve.best_bound;
  out.report.gap = out.report.objective - out.solve.best_bound;
  out.report.iterations = static_cast<int>(out.solve.stats.nodes);
  return out;
}

EnumerationResult enumerate_tiny(const SystemModel& model,
                                 const SolverOptions& options,
                                 std::int64_t max_schedules) {
  const Formulation f = formulate(model);
  SparseProblem p = to_problem(f);

  // Per binary candidate: the plan columns that may take the value 1.
  std::vector<std::vector<int>> choices;
  for (const GeneratorAsset& g : model.assets) {
    if (!g.candidate() || g.integrality != Integrality::kBinary) continue;
    std::vector<int> cols;
    for (int y : model.time.years) {
      const int j = p.column_index(variable_key(VarKind::kPlan, {g.id, std::to_string(y)}));
      if (j >= 0 && p.column(j).upper > 0.0) cols.push_back(j);
    }
    choices.push_back(std::move(cols));
  }
  std::int64_t total = 1;
  for (const auto& c : choices) {
    total *= static_cast<std::int64_t>(c.size()) + 1;
    if (total > max_schedules) {
      throw OracleError("enumeration needs more than " +
                        std::to_string(max_schedules) + " schedules");
    }
  }

  EnumerationResult best;
  std::vector<std::size_t> pick(choices.size(), 0);  // 0 = never
  for (std::int64_t n = 0; n < total; ++n) {
    for (std::size_t c = 0; c < choices.size(); ++c) {
      for (std::size_t k = 0; k < choices[c].size(); ++k) {
        ColumnRecord& col = p.mutable_column(choices[c][k]);
        col.lower = col.upper = (pick[c] == k + 1) ? 1.0 : 0.0;
      }
    }
    const SolveResult r = solve_lp(p, options);
    ++best.schedules;
    if (r.optimal()) {
      if (r.objective < best.objective) {
        best.objective = r.objective;
        best.values = r.primal;
      }
    } else {
      ++best.infeasible;
    }
    // Next schedule, odometer style.
    for (std::size_t c = 0; c < pick.size(); ++c) {
      if (++pick[c] <= choices[c].size()) break;
      pick[c] = 0;
    }
  }
  if (best.values.empty()) throw OracleError("every schedule is infeasible");
  return best;
}

}  // namespace scgep
