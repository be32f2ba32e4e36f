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

// Nested Benders decomposition over the yearly stage problems.
//
// Each iteration solves the stages forward in time, handing every stage's
// outgoing state to the next one, then walks backward solving LP relaxations
// at the visited states. Duals of the linking rows give a cut
//
//   alpha[y-1] >= V + pi'(x - x_hat)
//
// that is appended to the previous stage. The upper bound is the true cost
// of the best forward trajectory; the lower bound is the first-stage value
// under the accumulated cuts.

#ifndef SCGEP_NBD_HPP_
#define SCGEP_NBD_HPP_

#include <filesystem>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "scgep/builder.hpp"
#include "scgep/milp.hpp"
#include "scgep/model.hpp"

namespace scgep {

class NbdError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct NbdOptions {
  // Convergence threshold on UB - LB, in dollars unless relative_gap is set,
  // in which case it applies to (UB - LB) / max(1, |UB|).
  double epsilon = 1.0;
  bool relative_gap = false;
  int max_iterations = 50;
  SolverOptions solver;
  // Backward-pass duals at the forward incumbent with integers fixed,
  // instead of the plain LP relaxation.
  bool fix_integers_in_backward = false;
  // Optional outputs; empty paths disable them.
  std::filesystem::path log_path;         // JSON lines, one per iteration
  std::filesystem::path checkpoint_path;  // cut pools after every iteration
  std::filesystem::path warm_start_path;  // cut pools to start from

  void check() const;
};

struct BendersCut {
  int stage = 0;  // receiving stage index
  int iteration = 0;
  // alpha >= intercept + sum_j slope[j] * (x_j - trial[j]), with x_j the
  // stage's outgoing state in StageProblem::state_out order.
  double intercept = 0.0;
  std::vector<double> slope;
  std::vector<double> trial;

  double evaluate(const std::vector<double>& state) const;
  // intercept - slope'trial
  double constant() const;
};

struct IterationRecord {
  int iteration = 0;
  double upper_bound = kInfinity;  // best so far
  double lower_bound = -kInfinity;
  double gap = kInfinity;
  double trajectory_cost = kInfinity;  // this iteration's forward pass
  std::vector<double> stage_objectives;
  std::vector<double> stage_seconds;  // forward pass, backward pass
  int cuts_added = 0;
  double wall_seconds = 0.0;
};

enum class NbdStatus { kConverged, kGapRemaining };

std::string_view to_string(NbdStatus status);

struct NbdResult {
  NbdStatus status = NbdStatus::kGapRemaining;
  double upper_bound = kInfinity;
  double lower_bound = -kInfinity;
  double gap = kInfinity;
  int iterations = 0;
  // Best trajectory, indexed like Formulation::columns. Empty when no
  // forward pass completed.
  std::vector<double> best_values;
  std::vector<IterationRecord> history;
  std::vector<BendersCut> cuts;
};

class NbdSolver {
 public:
  NbdSolver(const Formulation& formulation, NbdOptions options = {});

  NbdResult run();

  // Pieces of one iteration, exposed for testing.
  struct ForwardResult {
    std::vector<double> values;  // formulation-indexed
    std::vector<double> stage_objectives;
    std::vector<std::vector<double>> states;  // outgoing state per stage
    std::vector<std::vector<double>> stage_primals;
    double cost = 0.0;
    double first_stage_bound = -kInfinity;
  };
  ForwardResult forward_pass();
  // Returns the number of cuts added.
  int backward_pass(const ForwardResult& forward, int iteration);
  double compute_lower_bound();

  const std::vector<StageProblem>& stages() const { return stages_; }
  const std::vector<BendersCut>& cuts() const { return cuts_; }
  // Adds a cut unless an equal one is already present; returns whether added.
  bool add_cut(const BendersCut& cut);

  // Relaxed value of stage `stage` (with its current cuts) at an incoming
  // state.
  double relaxed_stage_value(int stage, const std::vector<double>& state_in);

  void save_checkpoint(const std::filesystem::path& path) const;
  void load_checkpoint(const std::filesystem::path& path);

 private:
  double gap(double ub, double lb) const;
  SolveResult solve_stage(int s, bool relaxed,
                          const std::vector<double>* incumbent = nullptr);

  const Formulation& formulation_;
  NbdOptions options_;
  std::vector<StageProblem> stages_;
  std::vector<BendersCut> cuts_;
  std::vector<int> cuts_per_stage_;
  // First-stage solve reused by the next forward pass.
  bool first_stage_cached_ = false;
  SolveResult first_stage_;
};

// Convenience wrapper: formulate, decompose and run.
NbdResult run_nbd(const SystemModel& model, const NbdOptions& options = {});

}  // namespace scgep

#endif  // SCGEP_NBD_HPP_
