// SPDX-License-Identifier: Apache-2.0
//
// Run configuration, weights files, pattern tables and metrics reports.
// All structured files are JSON with a "schema_version" field.

#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "dpbf/array_model.hpp"
#include "dpbf/companion.hpp"
#include "dpbf/pattern.hpp"
#include "dpbf/synthesis.hpp"
#include "dpbf/weights.hpp"

namespace dpbf {

inline constexpr int kSchemaVersion = 1;

/// Input error that names the offending key, e.g. "array.n_cols".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& message)
      : std::runtime_error(key + ": " + message), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

enum class Method { Spbf, Dpbf, Ura };
enum class GridCut { Azimuth, Elevation, Full };

struct GridSpec {
  GridCut cut = GridCut::Azimuth;
  double step_deg = 1.0;
  double phi_min_deg = -90.0;
  double phi_max_deg = 90.0;
  double theta_min_deg = -90.0;
  double theta_max_deg = 90.0;

  AngularGrid build() const;
};

struct OutputSpec {
  std::string dir = "out";
  std::string format = "csv";  // pattern table format: csv | json
};

/// Defaults describe a four-column array: N=4, M=6, dH=0.5, dV=0.7,
/// 90 degree Gaussian elements, 65 degree Gaussian target.
struct RunConfig {
  ArrayGeometry array = ArrayGeometry::ula(4, 0.5);
  double row_spacing_wl = 0.7;  // kept for echo even when the array is a ULA
  ElementPattern element = ElementPattern::symmetric(90.0);
  TargetPattern target = TargetPattern::gaussian(65.0);
  double target_el_hpbw_deg = 30.0;
  Method method = Method::Dpbf;
  UraMode ura_mode = UraMode::DpbfBoth;
  SynthesisConfig synthesis;
  GridSpec grid;
  OutputSpec output;
};

RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::filesystem::path& path);
/// Effective configuration including defaulted fields.
nlohmann::json config_to_json(const RunConfig& cfg);

/// Weights plus the geometry and element pattern they were designed for.
struct WeightsFile {
  ArrayGeometry array = ArrayGeometry::ula(1, 0.5);
  ElementPattern element = ElementPattern::symmetric(90.0);
  DualPolWeights weights;
};

nlohmann::json weights_to_json(const WeightsFile& wf);
WeightsFile weights_from_json(const nlohmann::json& j);
void write_weights(const std::filesystem::path& path, const WeightsFile& wf);
WeightsFile read_weights(const std::filesystem::path& path);

/// One row per grid point, patterns normalized to total power 2 pi.
struct PatternRow {
  double theta_deg = 0.0;
  double phi_deg = 0.0;
  double p_total_db = 0.0;
  double p_a_db = 0.0;
  double p_b_db = 0.0;
  double axis_ratio = 0.0;  // NaN where the field vanishes
  double tilt_deg = 0.0;
  bool linear = false;
};

std::vector<PatternRow> pattern_table(const WeightsFile& wf, const AngularGrid& grid,
                                      double db_floor = kDefaultDbFloor);
void write_pattern_csv(std::ostream& os, const std::vector<PatternRow>& rows);
nlohmann::json pattern_to_json(const std::vector<PatternRow>& rows);

/// Companion checks of beam 2 against beam 1 on a grid.
struct CompanionCheck {
  double max_parallelity = 0.0;     // max xi / max P1
  double max_power_mismatch = 0.0;  // max |P2 - P1| / max P1
};
CompanionCheck check_companion(const WeightsFile& beam1, const DualPolWeights& beam2,
                               const AngularGrid& grid);

/// Verification grid for a weights file: azimuth cut for a ULA, front
/// hemisphere for a URA.
AngularGrid verification_grid(const ArrayGeometry& geom, double step_deg);

/// Writes JSON with a trailing newline, formatted deterministically.
void write_json(const std::filesystem::path& path, const nlohmann::json& j);

}  // namespace dpbf
