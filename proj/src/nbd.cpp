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

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace scgep {
namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

bool close(double a, double b) {
  return std::abs(a - b) <= 1e-9 * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

json finite_or_null(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

// Rows of a Farkas certificate worth naming in an error.
std::string describe_certificate(const SparseProblem& p, const SolveResult& r) {
  std::vector<std::pair<double, int>> rows;
  for (std::size_t i = 0; i < r.certificate.size() && i < p.rows().size(); ++i) {
    if (std::abs(r.certificate[i]) > 1e-9) {
      rows.push_back({-std::abs(r.certificate[i]), static_cast<int>(i)});
    }
  }
  std::sort(rows.begin(), rows.end());
  std::string out;
  for (std::size_t k = 0; k < rows.size() && k < 8; ++k) {
    if (k) out += ", ";
    out += p.row(rows[k].second).key;
  }
  return out.empty() ? "no certificate" : "certificate rows: " + out;
}

}  // namespace

void NbdOptions::check() const {
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
    throw NbdError("epsilon must be finite and >= 0");
  }
  if (max_iterations < 0) throw NbdError("max_iterations must be >= 0");
  solver.check();
}

double BendersCut::constant() const {
  double c = intercept;
  for (std::size_t j = 0; j < slope.size(); ++j) c -= slope[j] * trial[j];
  return c;
}

double BendersCut::evaluate(const std::vector<double>& state) const {
  double v = intercept;
  for (std::size_t j = 0; j < slope.size(); ++j) {
    v += slope[j] * (state[j] - trial[j]);
  }
  return v;
}

std::string_view to_string(NbdStatus status) {
  return status == NbdStatus::kConverged ? "converged" : "gap-remaining";
}

NbdSolver::NbdSolver(const Formulation& formulation, NbdOptions options)
    : formulation_(formulation), options_(std::move(options)) {
  options_.check();
  stages_ = build_stages(formulation_);
  if (stages_.empty()) throw NbdError("model has no planning years");
  cuts_per_stage_.assign(stages_.size(), 0);
  if (!options_.warm_start_path.empty()) load_checkpoint(options_.warm_start_path);
}

double NbdSolver::gap(double ub, double lb) const {
  if (!std::isfinite(ub) || !std::isfinite(lb)) return kInfinity;
  const double g = ub - lb;
  return options_.relative_gap ? g / std::max(1.0, std::abs(ub)) : g;
}

SolveResult NbdSolver::solve_stage(int s, bool relaxed,
                                   const std::vector<double>* incumbent) {
  const SparseProblem& p = stages_[s].problem;
  if (!relaxed) return solve_milp(p, options_.solver);
  if (options_.fix_integers_in_backward && incumbent != nullptr) {
    return extract_duals_at_fixed_integers(p, *incumbent, options_.solver, true);
  }
  return solve_lp(p, options_.solver);
}

bool NbdSolver::add_cut(const BendersCut& cut) {
  if (cut.stage < 0 || cut.stage >= static_cast<int>(stages_.size()) ||
      stages_[cut.stage].alpha_column < 0) {
    throw NbdError("cut targets a stage without cost-to-go");
  }
  StageProblem& st = stages_[cut.stage];
  if (cut.slope.size() != st.state_out.size() ||
      cut.trial.size() != st.state_out.size()) {
    throw NbdError("cut dimension does not match the stage state");
  }
  const double c = cut.constant();
  for (const BendersCut& old : cuts_) {
    if (old.stage != cut.stage || !close(old.constant(), c)) continue;
    bool same = true;
    for (std::size_t j = 0; j < cut.slope.size() && same; ++j) {
      same = close(old.slope[j], cut.slope[j]);
    }
    if (same) return false;
  }
  SparseProblem& p = st.problem;
  const int n = ++cuts_per_stage_[cut.stage];
  const int row = p.add_row("cut[" + std::to_string(st.year) + "," +
                                std::to_string(n) + "]",
                            RowSense::kGreaterEqual, c);
  p.add_coefficient(row, st.alpha_column, 1.0);
  for (std::size_t j = 0; j < cut.slope.size(); ++j) {
    if (cut.slope[j] != 0.0) {
      p.add_coefficient(row, st.state_out_columns[j], -cut.slope[j]);
    }
  }
  p.finalize();
  cuts_.push_back(cut);
  if (cut.stage == 0) first_stage_cached_ = false;
  return true;
}

NbdSolver::ForwardResult NbdSolver::forward_pass() {
  const int n = static_cast<int>(stages_.size());
  ForwardResult out;
  out.values.assign(formulation_.columns.size(), 0.0);
  out.stage_objectives.resize(n);
  out.states.resize(n);
  out.stage_primals.resize(n);
  for (int s = 0; s < n; ++s) {
    StageProblem& st = stages_[s];
    if (s > 0) st.set_state_in(out.states[s - 1]);
    SolveResult r;
    if (s == 0 && first_stage_cached_) {
      r = first_stage_;
    } else {
      r = solve_stage(s, false);
    }
    if (!r.has_solution) {
      throw NbdError("stage " + std::to_string(st.year) + " is " +
                     std::string(to_string(r.status)) + " in the forward pass (" +
                     describe_certificate(st.problem, r) + ")");
    }
    if (s == 0) {
      first_stage_ = r;
      first_stage_cached_ = true;
      out.first_stage_bound = st.problem.has_integral_columns() ? r.best_bound
                                                                : r.objective;
    }
    const double alpha = st.alpha_column >= 0 ? r.primal[st.alpha_column] : 0.0;
    out.stage_objectives[s] = r.objective - alpha;
    for (const auto& [fj, pj] : st.local_columns) out.values[fj] = r.primal[pj];
    out.states[s].reserve(st.state_out_columns.size());
    for (int j : st.state_out_columns) out.states[s].push_back(r.primal[j]);
    out.stage_primals[s] = std::move(r.primal);
  }
  out.cost = formulation_.objective(out.values);
  return out;
}

int NbdSolver::backward_pass(const ForwardResult& forward, int iteration) {
  int added = 0;
  for (int s = static_cast<int>(stages_.size()) - 1; s >= 1; --s) {
    StageProblem& st = stages_[s];
    st.set_state_in(forward.states[s - 1]);
    const SolveResult r = solve_stage(s, true, &forward.stage_primals[s]);
    if (!r.optimal()) {
      throw NbdError("relaxation of stage " + std::to_string(st.year) + " is " +
                     std::string(to_string(r.status)) +
                     " although every stage has slack recourse (" +
                     describe_certificate(st.problem, r) + ")");
    }
    BendersCut cut;
    cut.stage = s - 1;
    cut.iteration = iteration;
    cut.intercept = r.objective;
    cut.trial = forward.states[s - 1];
    cut.slope.reserve(st.link_rows.size());
    for (int i : st.link_rows) cut.slope.push_back(r.duals[i]);
    if (add_cut(cut)) ++added;
  }
  return added;
}

double NbdSolver::compute_lower_bound() {
  if (!first_stage_cached_) {
    first_stage_ = solve_stage(0, false);
    if (!first_stage_.has_solution && first_stage_.status != SolveStatus::kIterationLimit) {
      throw NbdError("first stage is " + std::string(to_string(first_stage_.status)) +
                     " (" + describe_certificate(stages_[0].problem, first_stage_) +
                     ")");
    }
    first_stage_cached_ = first_stage_.has_solution;
  }
  return stages_[0].problem.has_integral_columns() ? first_stage_.best_bound
                                                   : first_stage_.objective;
}

double NbdSolver::relaxed_stage_value(int stage,
                                      const std::vector<double>& state_in) {
  StageProblem& st = stages_.at(stage);
  if (stage > 0) st.set_state_in(state_in);
  const SolveResult r = solve_lp(st.problem, options_.solver);
  if (!r.optimal()) {
    throw NbdError("relaxation of stage " + std::to_string(st.year) + " is " +
                   std::string(to_string(r.status)));
  }
  return r.objective;
}

NbdResult NbdSolver::run() {
  const auto start = Clock::now();
  std::ofstream log;
  if (!options_.log_path.empty()) {
    log.open(options_.log_path, std::ios::trunc);
    if (!log) throw NbdError("cannot write " + options_.log_path.string());
  }
  auto write_log = [&](const IterationRecord& rec) {
    if (!log.is_open()) return;
    json j = {{"nu", rec.iteration},
              {"ub", finite_or_null(rec.upper_bound)},
              {"lb", finite_or_null(rec.lower_bound)},
              {"gap", finite_or_null(rec.gap)},
              {"stage_times", rec.stage_seconds},
              {"cuts_added", rec.cuts_added}};
    log << j.dump() << '\n';
    log.flush();
  };

  NbdResult result;
  double ub = kInfinity;
  double lb = -kInfinity;

  if (options_.max_iterations == 0) {
    lb = compute_lower_bound();
    IterationRecord rec;
    rec.lower_bound = lb;
    rec.wall_seconds = seconds_since(start);
    result.history.push_back(rec);
    write_log(rec);
  }

  for (int nu = 1; nu <= options_.max_iterations; ++nu) {
    IterationRecord rec;
    rec.iteration = nu;
    const auto t0 = Clock::now();
    const ForwardResult fwd = forward_pass();
    const double forward_seconds = seconds_since(t0);
    lb = std::max(lb, fwd.first_stage_bound);
    if (fwd.cost < ub) {
      ub = fwd.cost;
      result.best_values = fwd.values;
    }
    rec.trajectory_cost = fwd.cost;
    rec.stage_objectives = fwd.stage_objectives;

    if (gap(ub, lb) > options_.epsilon) {
      const auto t1 = Clock::now();
      rec.cuts_added = backward_pass(fwd, nu);
      const double backward_seconds = seconds_since(t1);
      lb = std::max(lb, compute_lower_bound());
      rec.stage_seconds = {forward_seconds, backward_seconds};
    } else {
      rec.stage_seconds = {forward_seconds, 0.0};
    }
    rec.upper_bound = ub;
    rec.lower_bound = lb;
    rec.gap = gap(ub, lb);
    rec.wall_seconds = seconds_since(start);
    result.history.push_back(rec);
    result.iterations = nu;
    write_log(rec);
    if (!options_.checkpoint_path.empty()) save_checkpoint(options_.checkpoint_path);
    if (rec.gap <= options_.epsilon) break;
    // Nothing new to learn: the bounds cannot move any further.
    if (rec.cuts_added == 0 && nu > 1) break;
  }

  result.upper_bound = ub;
  result.lower_bound = lb;
  result.gap = gap(ub, lb);
  result.status = result.gap <= options_.epsilon ? NbdStatus::kConverged
                                                 : NbdStatus::kGapRemaining;
  result.cuts = cuts_;
  return result;
}

void NbdSolver::save_checkpoint(const std::filesystem::path& path) const {
  json stages = json::array();
  for (const StageProblem& st : stages_) {
    stages.push_back({{"year", st.year}, {"state", st.state_out}});
  }
  json cuts = json::array();
  for (const BendersCut& c : cuts_) {
    cuts.push_back({{"stage", c.stage},
                    {"iteration", c.iteration},
                    {"intercept", c.intercept},
                    {"slope", c.slope},
                    {"trial", c.trial}});
  }
  const json doc = {{"version", 1}, {"stages", stages}, {"cuts", cuts}};
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw NbdError("cannot write " + tmp.string());
    out << doc.dump() << '\n';
    if (!out) throw NbdError("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

void NbdSolver::load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw NbdError("cannot read " + path.string());
  try {
    const json doc = json::parse(in);
    if (doc.at("version").get<int>() != 1) {
      throw NbdError("unsupported checkpoint version in " + path.string());
    }
    const json& stages = doc.at("stages");
    if (stages.size() != stages_.size()) {
      throw NbdError("checkpoint " + path.string() + " has a different horizon");
    }
    for (std::size_t s = 0; s < stages_.size(); ++s) {
      if (stages[s].at("year").get<int>() != stages_[s].year ||
          stages[s].at("state").get<std::vector<std::string>>() !=
              stages_[s].state_out) {
        throw NbdError("checkpoint " + path.string() +
                       " was written for a different model (stage " +
                       std::to_string(stages_[s].year) + ")");
      }
    }
    for (const json& c : doc.at("cuts")) {
      BendersCut cut;
      cut.stage = c.at("stage").get<int>();
      cut.iteration = c.at("iteration").get<int>();
      cut.intercept = c.at("intercept").get<double>();
      cut.slope = c.at("slope").get<std::vector<double>>();
      cut.trial = c.at("trial").get<std::vector<double>>();
      add_cut(cut);
    }
  } catch (const json::exception& e) {
    throw NbdError("malformed checkpoint " + path.string() + ": " + e.what());
  }
}

NbdResult run_nbd(const SystemModel& model, const NbdOptions& options) {
  const Formulation f = formulate(model);
  NbdSolver solver(f, options);
  return solver.run();
}

}  // namespace scgep
