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

// Loading models from a manifest of JSON documents and CSV time series,
// representative-day clustering, and scenario transformations.

#ifndef SCGEP_INGEST_HPP_
#define SCGEP_INGEST_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "scgep/model.hpp"

namespace scgep {

class IngestError : public std::runtime_error {
 public:
  enum class Kind { kIo, kParse, kValidation };

  IngestError(Kind kind, const std::string& message,
              ValidationReport report = {})
      : std::runtime_error(message), kind_(kind), report_(std::move(report)) {}

  Kind kind() const { return kind_; }
  // Filled for kValidation.
  const ValidationReport& report() const { return report_; }

 private:
  Kind kind_;
  ValidationReport report_;
};

enum class ScenarioMode { kBaseline, kWithoutSupplyChain, kLimitedSupplyChain };

std::string_view to_string(ScenarioMode mode);
std::optional<ScenarioMode> parse_scenario_mode(std::string_view text);

// Stand-in for "unbounded" supply and area when supply-chain limits are
// switched off.
inline constexpr double kUnlimitedSupply = 1e6;

// Relaxes or tightens the supply-chain data in place:
//   without: primary supply and every field pool become kUnlimitedSupply,
//            candidate lead times drop to zero;
//   limited: primary supply is scaled by `supply_factor` in [0, 1].
void apply_scenario(SystemModel& model, ScenarioMode mode,
                    double supply_factor = 1.0);

// Marks every unit continuous: the LP relaxation of the investment problem.
void relax_integrality(SystemModel& model);

// national x state share x sector share, element-wise. Throws ModelError on
// negative tonnage or shares outside [0, 1].
std::map<std::string, std::map<int, double>> scale_material_supply(
    const std::map<std::string, std::map<int, double>>& national,
    double state_share, const std::map<std::string, double>& sector_shares);

// One calendar year of hourly values.
struct RawHourlySeries {
  std::string entity;
  int year = 0;
  std::vector<double> values;  // 8760 or 8784
};

struct ClusterOptions {
  int days = 4;
  // Per-entity feature weight; unlisted entities weigh 1.
  std::map<std::string, double> weights;
  // Divide every series by its largest magnitude before clustering.
  bool normalize = true;
  std::uint64_t seed = 42;
  int max_iterations = 100;
};

struct ClusterResult {
  // Ids d1..dk, ordered by their earliest member day.
  std::vector<std::string> day_ids;
  std::vector<int> weights;  // member days per cluster
  // Centroid profiles in original units: entity -> k * 24 values.
  std::map<std::string, std::vector<double>> profiles;
  std::vector<int> assignment;  // cluster of each calendar day
  // Within-cluster sum of squares after each iteration, in feature space.
  std::vector<double> objective_history;
};

ClusterResult cluster_representative_days(
    const std::vector<RawHourlySeries>& series, const ClusterOptions& options);

// Seed from SCGEP_SEED, falling back to `fallback`.
std::uint64_t seed_from_environment(std::uint64_t fallback = 42);

// Reads `entity,year,h1..hN` rows. Throws IngestError naming file and line.
std::vector<RawHourlySeries> read_raw_series_csv(
    const std::filesystem::path& path);

// Loads the manifest and every file it references, applies the scenario
// transform it names and validates the result. Throws IngestError; a
// validation failure carries the report.
SystemModel load_dataset(const std::filesystem::path& manifest);

// Same as load_dataset but returns the model together with its report even
// when validation fails.
struct LoadedDataset {
  SystemModel model;
  ValidationReport report;
};
LoadedDataset load_dataset_unchecked(const std::filesystem::path& manifest);

// Canonical JSON rendering of a model; keys sorted, numbers round-trip.
std::string canonical_model_json(const SystemModel& model);
// Lowercase hex SHA-256.
std::string sha256_hex(const std::string& bytes);
std::string model_digest(const SystemModel& model);

}  // namespace scgep

#endif  // SCGEP_INGEST_HPP_
