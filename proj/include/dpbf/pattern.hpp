// SPDX-License-Identifier: Apache-2.0
//
// Far-field evaluation and pattern metrics.
//
// Grid evaluation is parallelized over directions with OpenMP. Each direction
// is reduced in a fixed element order, so results are bit-identical for any
// thread count. The serial kernels in dpbf::reference are kept for testing and
// benchmarking against the parallel ones.

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dpbf/array_model.hpp"
#include "dpbf/weights.hpp"

namespace dpbf {

/// Rectangular theta x phi grid. Point i lives at (thetas[i / nphi], phis[i % nphi]).
class AngularGrid {
 public:
  AngularGrid(std::vector<double> thetas_rad, std::vector<double> phis_rad);

  /// theta = 0, phi from min to max (inclusive) in steps of step_deg.
  static AngularGrid azimuth_cut(double step_deg = 1.0, double min_deg = -90.0,
                                 double max_deg = 90.0);
  /// phi = 0, theta from min to max.
  static AngularGrid elevation_cut(double step_deg = 1.0, double min_deg = -90.0,
                                   double max_deg = 90.0);
  /// Full front hemisphere theta x phi.
  static AngularGrid front_hemisphere(double step_deg = 1.0);

  const std::vector<double>& thetas() const { return thetas_; }
  const std::vector<double>& phis() const { return phis_; }
  std::size_t size() const { return thetas_.size() * phis_.size(); }
  Direction at(std::size_t i) const { return {thetas_[i / phis_.size()], phis_[i % phis_.size()]}; }

  bool is_azimuth_cut() const { return thetas_.size() == 1; }
  bool is_elevation_cut() const { return phis_.size() == 1 && thetas_.size() > 1; }

  /// Angles swept by a single-cut grid; throws for a 2D grid.
  const std::vector<double>& cut_angles() const;

  friend bool operator==(const AngularGrid&, const AngularGrid&) = default;

 private:
  std::vector<double> thetas_;
  std::vector<double> phis_;
};

/// Two-component far field (polarization A/B basis) per grid point.
struct FieldPattern {
  std::vector<cplx> e_a;
  std::vector<cplx> e_b;

  std::size_t size() const { return e_a.size(); }
};

enum class Normalization { Raw, TotalPower };

struct PowerPattern {
  std::vector<double> total;
  std::vector<double> a;
  std::vector<double> b;
  Normalization normalization = Normalization::Raw;
  double target = 0.0;  // integral of `total` when normalized

  std::size_t size() const { return total.size(); }
};

enum class Handedness { None, Left, Right };

struct PolarizationEllipse {
  double axis_ratio = 1.0;  // >= 1; very large values stand in for infinity
  double tilt_deg = 0.0;    // major-axis angle from the A axis, in (-90, 90]
  Handedness sense = Handedness::None;
  bool linear = false;      // axis_ratio above kLinearAxisRatio
};

inline constexpr double kLinearAxisRatio = 20.0;
inline constexpr double kDefaultDbFloor = -60.0;
inline constexpr double kHalfPowerDb = -3.0102999566398120;  // 10 log10(1/2)

/// e_a = g(dir) * w_a^T a(dir), e_b = g(dir) * w_b^T a(dir) at every grid point.
FieldPattern radiate(const ArrayGeometry& geom, const ElementPattern& elem,
                     const DualPolWeights& w, const AngularGrid& grid);

/// |e_a|^2, |e_b|^2 and their sum. Normalization is Raw.
PowerPattern power(const FieldPattern& f);

/// xi = |e1^H e2| per grid point.
std::vector<double> parallelity(const FieldPattern& f1, const FieldPattern& f2);

/// Trapezoidal integral of grid samples. A 2D grid uses the tensor-product
/// rule over theta and phi (no solid-angle weighting); an axis with a single
/// sample contributes weight 1.
double integrate(std::span<const double> values, const AngularGrid& grid);

/// Scale all three components so the integral of `total` equals target.
PowerPattern normalize_total_power(const PowerPattern& p, const AngularGrid& grid,
                                   double target);

/// Distance in degrees between the -3.0103 dB crossings nearest the global
/// peak, interpolated linearly in dB. Requires a single-cut grid.
double measure_hpbw(std::span<const double> power, const AngularGrid& grid);
inline double measure_hpbw(const PowerPattern& p, const AngularGrid& grid) {
  return measure_hpbw(p.total, grid);
}

/// Power loss relative to driving every active element at the largest
/// magnitude. Exactly-zero entries (zero-power elements) are not counted.
double weighting_loss_db(const DualPolWeights& w);

PolarizationEllipse polarization_ellipse(cplx e_a, cplx e_b);

/// 10 log10(p), floored at floor_db.
double to_db(double p, double floor_db = kDefaultDbFloor);

namespace reference {

/// Serial radiate built on the public steering_vector(); same numbers as the
/// parallel kernel.
FieldPattern radiate(const ArrayGeometry& geom, const ElementPattern& elem,
                     const DualPolWeights& w, const AngularGrid& grid);

std::vector<double> parallelity(const FieldPattern& f1, const FieldPattern& f2);

}  // namespace reference

}  // namespace dpbf
