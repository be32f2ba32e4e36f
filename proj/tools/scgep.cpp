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

// Command-line front end.
//
// Exit codes: 0 success, 1 invalid input, 2 solver did not converge,
// 3 file-system error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "scgep/builder.hpp"
#include "scgep/ingest.hpp"
#include "scgep/nbd.hpp"
#include "scgep/oracle.hpp"
#include "scgep/report.hpp"

namespace {

namespace fs = std::filesystem;
using namespace scgep;

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kNotConverged = 2;
constexpr int kIoError = 3;

int ingest_exit(const IngestError& e) {
  return e.kind() == IngestError::Kind::kIo ? kIoError : kInvalid;
}

void print_issues(const ValidationReport& report) {
  for (const Issue& i : report.issues) {
    std::cout << (i.severity == Severity::kError ? "error   " : "warning ")
              << i.where << ": " << i.message << '\n';
  }
}

int run_validate(const fs::path& manifest) {
  const LoadedDataset d = load_dataset_unchecked(manifest);
  std::cout << "model   " << d.model.name << '\n'
            << "digest  " << model_digest(d.model) << '\n';
  print_issues(d.report);
  std::cout << d.report.error_count() << " error(s), "
            << d.report.warning_count() << " warning(s)\n";
  return d.report.ok() ? kOk : kInvalid;
}

struct SolveArgs {
  fs::path config;
  std::string mode = "nbd";
  double epsilon = 1.0;
  bool relative = false;
  int max_iters = 50;
  fs::path out = "out";
  fs::path warm_start;
  bool fix_integers = false;
  fs::path lp_file;
};

int run_solve(const SolveArgs& a) {
  const SystemModel model = load_dataset(a.config);
  std::error_code ec;
  fs::create_directories(a.out, ec);
  if (ec) {
    std::cerr << "cannot create " << a.out << ": " << ec.message() << '\n';
    return kIoError;
  }
  const std::string digest = model_digest(model);
  if (!a.lp_file.empty()) {
    std::ofstream lp(a.lp_file);
    write_lp_format(build_monolithic(model), lp);
    if (!lp.flush()) {
      std::cerr << "cannot write " << a.lp_file << '\n';
      return kIoError;
    }
  }

  if (a.mode == "monolithic") {
    const MonolithicResult r = solve_monolithic(model);
    PlanReport rep = r.report;
    rep.model_digest = digest;
    write_report(rep, a.out);
    std::cout << "status     " << rep.status << '\n'
              << "objective  " << format_double(rep.objective) << '\n'
              << "bound      " << format_double(rep.lower_bound) << '\n';
    return r.solve.optimal() ? kOk : kNotConverged;
  }

  const Formulation f = formulate(model);
  NbdOptions opt;
  opt.epsilon = a.epsilon;
  opt.relative_gap = a.relative;
  opt.max_iterations = a.max_iters;
  opt.fix_integers_in_backward = a.fix_integers;
  opt.log_path = a.out / "iterations.jsonl";
  opt.checkpoint_path = a.out / "cuts.json";
  opt.warm_start_path = a.warm_start;
  NbdSolver solver(f, opt);
  const NbdResult r = solver.run();
  for (const IterationRecord& it : r.history) {
    std::cout << "iter " << it.iteration << "  ub " << format_double(it.upper_bound)
              << "  lb " << format_double(it.lower_bound) << "  gap "
              << format_double(it.gap) << '\n';
  }
  std::cout << "status     " << to_string(r.status) << '\n';
  if (!r.best_values.empty()) {
    PlanReport rep = make_plan_report(model, f, r.best_values);
    rep.model_digest = digest;
    rep.method = "nbd";
    rep.status = std::string(to_string(r.status));
    rep.lower_bound = r.lower_bound;
    rep.gap = r.gap;
    rep.iterations = r.iterations;
    write_report(rep, a.out);
    std::cout << "objective  " << format_double(rep.objective) << '\n';
  }
  return r.status == NbdStatus::kConverged ? kOk : kNotConverged;
}

int run_report(const fs::path& dir, bool check) {
  const PlanReport rep = read_report(dir);
  std::cout << render_report(rep);
  if (!check) return kOk;
  const auto bad = check_plan_invariants(rep);
  for (const std::string& b : bad) std::cout << "violated: " << b << '\n';
  std::cout << (bad.empty() ? "all identities hold\n" : "");
  return bad.empty() ? kOk : kInvalid;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Supply-chain-constrained generation expansion planning"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "scgep " SCGEP_VERSION);

  fs::path manifest;
  auto* validate_cmd = app.add_subcommand("validate", "Load a dataset and check it");
  validate_cmd->add_option("manifest", manifest, "Dataset manifest")->required();

  SolveArgs solve;
  auto* solve_cmd = app.add_subcommand("solve", "Optimize a plan");
  solve_cmd->add_option("--config", solve.config, "Dataset manifest")->required();
  solve_cmd->add_option("--mode", solve.mode, "nbd or monolithic")
      ->check(CLI::IsMember({"nbd", "monolithic"}));
  solve_cmd->add_option("--epsilon", solve.epsilon, "Convergence gap")
      ->check(CLI::NonNegativeNumber);
  solve_cmd->add_flag("--relative-gap", solve.relative,
                      "Measure the gap relative to the upper bound");
  solve_cmd->add_option("--max-iters", solve.max_iters, "Iteration cap")
      ->check(CLI::NonNegativeNumber);
  solve_cmd->add_option("--out", solve.out, "Output directory");
  solve_cmd->add_option("--warm-start", solve.warm_start, "Cut checkpoint to start from");
  solve_cmd->add_flag("--fix-integers", solve.fix_integers,
                      "Backward-pass duals with integers fixed at the forward plan");
  solve_cmd->add_option("--write-lp", solve.lp_file,
                        "Also write the monolithic problem in LP format");

  fs::path report_dir;
  bool check = false;
  auto* report_cmd = app.add_subcommand("report", "Print the tables of a solved plan");
  report_cmd->add_option("dir", report_dir, "Output directory of a solve")->required();
  report_cmd->add_flag("--check", check, "Re-check the plan's accounting identities");

  std::string row_key;
  auto* explain_cmd = app.add_subcommand("explain", "Describe a model element");
  auto* explain_row_cmd = explain_cmd->add_subcommand("row", "Describe a row key");
  explain_cmd->require_subcommand(1);
  explain_row_cmd->add_option("key", row_key, "Row key, e.g. bal[Z1,d1,3,2026]")->required();

  fs::path dir_a, dir_b;
  auto* compare_cmd = app.add_subcommand("compare", "Difference between two solved plans");
  compare_cmd->add_option("a", dir_a, "Baseline run")->required();
  compare_cmd->add_option("b", dir_b, "Other run")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalid;
  }

  try {
    if (*validate_cmd) return run_validate(manifest);
    if (*solve_cmd) return run_solve(solve);
    if (*report_cmd) return run_report(report_dir, check);
    if (*explain_cmd) {
      const std::string text = explain_row(row_key);
      std::cout << row_key << ": " << text << '\n';
      return kOk;
    }
    if (*compare_cmd) {
      std::cout << render_comparison(compare_runs(dir_a, dir_b));
      return kOk;
    }
  } catch (const IngestError& e) {
    std::cerr << "scgep: " << e.what() << '\n';
    return ingest_exit(e);
  } catch (const ReportError& e) {
    std::cerr << "scgep: " << e.what() << '\n';
    return std::string(e.what()).rfind("cannot", 0) == 0 ? kIoError : kInvalid;
  } catch (const ModelError& e) {
    std::cerr << "scgep: " << e.what() << '\n';
    return kInvalid;
  } catch (const NbdError& e) {
    std::cerr << "scgep: " << e.what() << '\n';
    return std::string(e.what()).rfind("cannot", 0) == 0 ? kIoError : kNotConverged;
  } catch (const OracleError& e) {
    std::cerr << "scgep: " << e.what() << '\n';
    return kNotConverged;
  } catch (const std::exception& e) {
    std::cerr << "scgep: " << e.what() << '\n';
    return kInvalid;
  }
  return kInvalid;
}
