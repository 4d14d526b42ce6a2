// SPDX-License-Identifier: Apache-2.0
//
// Wide-beam synthesis against a target power pattern.
//
// SPBF shapes the beam with amplitude and phase on polarization A only. DPBF
// shapes the *total* power |e_a|^2 + |e_b|^2 of both polarizations, which
// usually allows a phase-only taper (0 dB weighting loss). Both minimize a
// weighted sum of
//   cost1: variance of (pattern dB - target dB) inside the target window,
//   cost2: weighting loss in dB,
// with a seeded multi-start simplex search.

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "dpbf/array_model.hpp"
#include "dpbf/companion.hpp"
#include "dpbf/pattern.hpp"
#include "dpbf/weights.hpp"

namespace dpbf {

struct TargetPattern {
  enum class Shape { Gaussian, Tabulated };

  Shape shape = Shape::Gaussian;
  double hpbw_deg = 65.0;           // Gaussian
  std::vector<double> samples_db;   // Tabulated, one value per grid point

  static TargetPattern gaussian(double hpbw_deg);
  static TargetPattern tabulated(std::vector<double> samples_db);
};

/// Linear target power on a single-cut grid (Gaussian) or any grid of the
/// tabulated size.
std::vector<double> target_power(const TargetPattern& t, const AngularGrid& grid);

/// Separable 2D target: az(phi) * el(theta). Both must be Gaussian.
std::vector<double> target_power(const TargetPattern& az, const TargetPattern& el,
                                 const AngularGrid& grid);

enum class TaperMode { PhaseOnly, AmplitudeAndPhase };

struct CostWeights {
  double pattern = 1.0;  // lambda_1, multiplies cost1
  double taper = 1.0;    // lambda_2, multiplies cost2 (dB)
};

struct SynthesisConfig {
  TaperMode taper_mode = TaperMode::PhaseOnly;
  bool conjugate_pair = true;
  double cost_window_db = 10.0;
  CostWeights cost_weights;
  std::size_t restarts = 20;
  std::size_t max_evals = 3000;  // per restart
  std::uint64_t seed = 1;
  double tolerance = 1e-10;
  double db_floor = kDefaultDbFloor;

  void validate() const;
};

struct SynthesisResult {
  DualPolWeights weights;
  double cost1 = 0.0;
  double cost2 = 0.0;
  double scalar_cost = 0.0;
  std::optional<double> measured_hpbw_deg;
  std::size_t evals_used = 0;
  std::uint64_t seed = 0;
  std::size_t best_restart = 0;
  // Best scalar cost after each optimizer iteration of the winning restart.
  std::vector<double> trace;
  // Set by synthesize_ura.
  std::optional<UraComposition> composition;
};

/// Both patterns are normalized to equal total power over the grid, converted
/// to dB (floored), differenced, and the population variance taken over points
/// where the target is within window_db of its peak.
double cost_pattern_variance(std::span<const double> p_total, std::span<const double> target,
                             const AngularGrid& grid, double window_db,
                             double db_floor = kDefaultDbFloor);
double cost_pattern_variance(const PowerPattern& p, const TargetPattern& t, const AngularGrid& grid,
                             double window_db, double db_floor = kDefaultDbFloor);

double scalarize(double cost1, double cost2, const SynthesisConfig& cfg);

/// Costs of given weights under the synthesis cost definition.
struct CostBreakdown {
  double cost1 = 0.0;
  double cost2 = 0.0;
  double scalar = 0.0;
};
CostBreakdown evaluate_costs(const ArrayGeometry& geom, const ElementPattern& elem,
                             const DualPolWeights& w, std::span<const double> target,
                             const AngularGrid& grid, const SynthesisConfig& cfg);

SynthesisResult synthesize_spbf(const ArrayGeometry& geom, const ElementPattern& elem,
                                const TargetPattern& target, const AngularGrid& grid,
                                const SynthesisConfig& cfg);

SynthesisResult synthesize_dpbf(const ArrayGeometry& geom, const ElementPattern& elem,
                                const TargetPattern& target, const AngularGrid& grid,
                                const SynthesisConfig& cfg);

/// Per-dimension 1D syntheses combined with compose_ura. The elevation side
/// runs over the active rows (dpbf-both) or all rows with SPBF
/// (spbf-elevation); the azimuth side is DPBF over all columns. Costs are
/// evaluated on the full 2D grid.
SynthesisResult synthesize_ura(const ArrayGeometry& geom, const ElementPattern& elem,
                               const TargetPattern& target_az, const TargetPattern& target_el,
                               const AngularGrid& grid, const SynthesisConfig& cfg, UraMode mode);

}  // namespace dpbf
