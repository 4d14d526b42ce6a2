// SPDX-License-Identifier: Apache-2.0

#include "dpbf/array_model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace dpbf {

namespace {

void require_positive(double value, const char* what) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw std::invalid_argument(std::string(what) + " must be positive and finite");
  }
}

// Offset of index i from the center of an axis with `count` entries.
// (i - (count-1)/2) is exact in binary for any realistic count, so offsets of
// mirrored indices are exact negatives of each other.
double centered_offset(std::size_t i, std::size_t count) {
  return static_cast<double>(i) - 0.5 * static_cast<double>(count - 1);
}

}  // namespace

ArrayGeometry::ArrayGeometry(ArrayKind kind, std::size_t rows, std::size_t cols,
                             double row_spacing, double col_spacing)
    : kind_(kind), rows_(rows), cols_(cols), row_spacing_(row_spacing), col_spacing_(col_spacing) {
  if (cols_ == 0) throw std::invalid_argument("array needs at least one column");
  if (rows_ == 0) throw std::invalid_argument("array needs at least one row");
  if (kind_ == ArrayKind::ULA && rows_ != 1) throw std::invalid_argument("ULA has exactly one row");
  require_positive(col_spacing_, "column spacing");
  require_positive(row_spacing_, "row spacing");
}

ArrayGeometry ArrayGeometry::ula(std::size_t n_cols, double col_spacing_wl) {
  // Row spacing is irrelevant for a single row; any positive value works.
  return ArrayGeometry(ArrayKind::ULA, 1, n_cols, 1.0, col_spacing_wl);
}

ArrayGeometry ArrayGeometry::ura(std::size_t n_rows, std::size_t n_cols, double row_spacing_wl,
                                 double col_spacing_wl) {
  return ArrayGeometry(ArrayKind::URA, n_rows, n_cols, row_spacing_wl, col_spacing_wl);
}

ElementPattern::ElementPattern(double hpbw_az_deg, double hpbw_el_deg)
    : az_deg_(hpbw_az_deg), el_deg_(hpbw_el_deg) {
  for (double bw : {az_deg_, el_deg_}) {
    if (!(bw > 0.0 && bw <= 180.0)) {
      throw std::invalid_argument("element half-power beamwidth must lie in (0, 180] degrees");
    }
  }
}

double gaussian_power(double angle, double hpbw) {
  const double r = angle / hpbw;
  return std::exp(-4.0 * std::log(2.0) * r * r);
}

std::vector<Position> element_positions(const ArrayGeometry& geom) {
  std::vector<Position> pos(geom.size());
  for (std::size_t n = 0; n < geom.cols(); ++n) {
    for (std::size_t m = 0; m < geom.rows(); ++m) {
      pos[geom.index(m, n)] = {centered_offset(n, geom.cols()) * geom.col_spacing_wl(),
                               centered_offset(m, geom.rows()) * geom.row_spacing_wl()};
    }
  }
  return pos;
}

std::vector<cplx> steering_vector(const ArrayGeometry& geom, const Direction& dir) {
  const double ux = std::sin(dir.phi) * std::cos(dir.theta);
  const double uy = std::sin(dir.theta);
  const auto pos = element_positions(geom);
  std::vector<cplx> a(pos.size());
  for (std::size_t k = 0; k < pos.size(); ++k) {
    const double phase = 2.0 * kPi * (pos[k].x * ux + pos[k].y * uy);
    a[k] = {std::cos(phase), std::sin(phase)};
  }
  return a;
}

double element_amplitude(const ElementPattern& pat, const Direction& dir) {
  const double p = gaussian_power(rad_to_deg(dir.phi), pat.hpbw_az_deg()) *
                   gaussian_power(rad_to_deg(dir.theta), pat.hpbw_el_deg());
  return std::sqrt(p);
}

double hpbw_uniform_estimate(double d_over_lambda) {
  if (!(d_over_lambda > 0.0)) throw std::invalid_argument("array size must be positive");
  return 0.88 / d_over_lambda;
}

}  // namespace dpbf
