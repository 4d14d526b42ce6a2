// SPDX-License-Identifier: Apache-2.0
//
// Geometry, steering vectors and idealized element patterns for
// dual-polarized uniform linear (ULA) and rectangular (URA) arrays.
//
// Conventions:
//   - Boresight is the array normal, direction (theta, phi) = (0, 0).
//   - The ULA lies along the horizontal axis; an azimuth cut is theta = 0.
//   - Elements are numbered column-major from one array edge: element
//     (row m, column n) has flat index n * rows + m. Reversing the flat index
//     therefore reverses both axes, i.e. reflects the element through the
//     array center.
//   - Positions are centered, so the phase reference is the array center.
//
// All types are values; all functions are pure.

#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace dpbf {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

inline constexpr double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline constexpr double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

/// Far-field direction. theta is elevation in [-pi/2, pi/2], phi is azimuth
/// in [-pi, pi], both in radians.
struct Direction {
  double theta = 0.0;
  double phi = 0.0;
};

enum class ArrayKind { ULA, URA };

/// Regular dual-polarized array. Spacings are in wavelengths.
class ArrayGeometry {
 public:
  static ArrayGeometry ula(std::size_t n_cols, double col_spacing_wl);
  static ArrayGeometry ura(std::size_t n_rows, std::size_t n_cols, double row_spacing_wl,
                           double col_spacing_wl);

  ArrayKind kind() const { return kind_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return rows_ * cols_; }
  double row_spacing_wl() const { return row_spacing_; }
  double col_spacing_wl() const { return col_spacing_; }

  std::size_t index(std::size_t row, std::size_t col) const { return col * rows_ + row; }

  friend bool operator==(const ArrayGeometry&, const ArrayGeometry&) = default;

 private:
  ArrayGeometry(ArrayKind kind, std::size_t rows, std::size_t cols, double row_spacing,
                double col_spacing);

  ArrayKind kind_;
  std::size_t rows_;
  std::size_t cols_;
  double row_spacing_;
  double col_spacing_;
};

/// Element position in wavelengths; x is horizontal, y vertical.
struct Position {
  double x = 0.0;
  double y = 0.0;
};

/// Gaussian element power pattern, identical for both polarizations.
/// P(theta, phi) = exp(-4 ln2 (phi/az)^2) * exp(-4 ln2 (theta/el)^2).
class ElementPattern {
 public:
  ElementPattern(double hpbw_az_deg, double hpbw_el_deg);

  /// Same beamwidth in both cuts.
  static ElementPattern symmetric(double hpbw_deg) { return {hpbw_deg, hpbw_deg}; }

  double hpbw_az_deg() const { return az_deg_; }
  double hpbw_el_deg() const { return el_deg_; }

  friend bool operator==(const ElementPattern&, const ElementPattern&) = default;

 private:
  double az_deg_;
  double el_deg_;
};

/// Gaussian power value exp(-4 ln2 (angle/hpbw)^2), angles in the same unit.
double gaussian_power(double angle, double hpbw);

std::vector<Position> element_positions(const ArrayGeometry& geom);

/// a_n = exp(+i 2 pi <pos_n, u>), u = (sin phi cos theta, sin theta).
std::vector<cplx> steering_vector(const ArrayGeometry& geom, const Direction& dir);

/// Field amplitude of the element, sqrt of the Gaussian power product.
double element_amplitude(const ElementPattern& pat, const Direction& dir);

/// Uniform-taper half-power beamwidth estimate 0.88 / (D/lambda), in radians.
/// Intended for D >= 1 wavelength; smaller inputs are extrapolation.
double hpbw_uniform_estimate(double d_over_lambda);

/// True when the estimate above is being used outside its stated range.
inline bool hpbw_estimate_is_extrapolated(double d_over_lambda) { return d_over_lambda < 1.0; }

}  // namespace dpbf
