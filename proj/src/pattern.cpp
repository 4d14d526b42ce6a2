// SPDX-License-Identifier: Apache-2.0

#include "dpbf/pattern.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace dpbf {

namespace {

std::vector<double> sweep_rad(double step_deg, double min_deg, double max_deg) {
  if (!(step_deg > 0.0)) throw std::invalid_argument("grid step must be positive");
  if (!(max_deg >= min_deg)) throw std::invalid_argument("grid max must not be below grid min");
  const auto count = static_cast<std::size_t>(std::floor((max_deg - min_deg) / step_deg + 1e-9)) + 1;
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = deg_to_rad(min_deg + static_cast<double>(i) * step_deg);
  }
  return out;
}

void check_sorted(const std::vector<double>& v, const char* what) {
  if (v.empty()) throw std::invalid_argument(std::string(what) + " grid is empty");
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] > v[i - 1])) {
      throw std::invalid_argument(std::string(what) + " grid must be strictly increasing");
    }
  }
}

// Trapezoid weights along one axis; a single sample gets weight 1.
std::vector<double> trapezoid_weights(const std::vector<double>& x) {
  std::vector<double> w(x.size(), 0.0);
  if (x.size() == 1) {
    w[0] = 1.0;
    return w;
  }
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double h = 0.5 * (x[i + 1] - x[i]);
    w[i] += h;
    w[i + 1] += h;
  }
  return w;
}

void check_same_grid(const FieldPattern& f1, const FieldPattern& f2) {
  if (f1.e_a.size() != f2.e_a.size() || f1.e_b.size() != f2.e_b.size() ||
      f1.e_a.size() != f1.e_b.size()) {
    throw std::invalid_argument("field patterns are sampled on different grids");
  }
}

// Unconjugated dot product in fixed element order.
inline cplx dot(const std::vector<cplx>& w, const cplx* a, std::size_t n) {
  cplx acc{};
  for (std::size_t k = 0; k < n; ++k) acc += w[k] * a[k];
  return acc;
}

}  // namespace

AngularGrid::AngularGrid(std::vector<double> thetas_rad, std::vector<double> phis_rad)
    : thetas_(std::move(thetas_rad)), phis_(std::move(phis_rad)) {
  check_sorted(thetas_, "theta");
  check_sorted(phis_, "phi");
}

AngularGrid AngularGrid::azimuth_cut(double step_deg, double min_deg, double max_deg) {
  return {{0.0}, sweep_rad(step_deg, min_deg, max_deg)};
}

AngularGrid AngularGrid::elevation_cut(double step_deg, double min_deg, double max_deg) {
  return {sweep_rad(step_deg, min_deg, max_deg), {0.0}};
}

AngularGrid AngularGrid::front_hemisphere(double step_deg) {
  return {sweep_rad(step_deg, -90.0, 90.0), sweep_rad(step_deg, -90.0, 90.0)};
}

const std::vector<double>& AngularGrid::cut_angles() const {
  if (thetas_.size() == 1) return phis_;
  if (phis_.size() == 1) return thetas_;
  throw std::invalid_argument("operation needs a single-cut grid (one theta or one phi)");
}

FieldPattern radiate(const ArrayGeometry& geom, const ElementPattern& elem,
                     const DualPolWeights& w, const AngularGrid& grid) {
  w.check_matches(geom);
  const auto pos = element_positions(geom);
  const std::size_t n_elem = pos.size();
  const auto n_points = static_cast<std::ptrdiff_t>(grid.size());
  FieldPattern f{std::vector<cplx>(grid.size()), std::vector<cplx>(grid.size())};

#pragma omp parallel
  {
    std::vector<cplx> steer(n_elem);
#pragma omp for schedule(static)
    for (std::ptrdiff_t i = 0; i < n_points; ++i) {
      const Direction dir = grid.at(static_cast<std::size_t>(i));
      const double ux = std::sin(dir.phi) * std::cos(dir.theta);
      const double uy = std::sin(dir.theta);
      for (std::size_t k = 0; k < n_elem; ++k) {
        const double phase = 2.0 * kPi * (pos[k].x * ux + pos[k].y * uy);
        steer[k] = {std::cos(phase), std::sin(phase)};
      }
      const double g = element_amplitude(elem, dir);
      f.e_a[i] = g * dot(w.a(), steer.data(), n_elem);
      f.e_b[i] = g * dot(w.b(), steer.data(), n_elem);
    }
  }
  return f;
}

PowerPattern power(const FieldPattern& f) {
  if (f.e_a.size() != f.e_b.size()) throw std::invalid_argument("field components differ in size");
  const std::size_t n = f.size();
  PowerPattern p{std::vector<double>(n), std::vector<double>(n), std::vector<double>(n),
                 Normalization::Raw, 0.0};
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    p.a[i] = std::norm(f.e_a[i]);
    p.b[i] = std::norm(f.e_b[i]);
    p.total[i] = p.a[i] + p.b[i];
  }
  return p;
}

std::vector<double> parallelity(const FieldPattern& f1, const FieldPattern& f2) {
  check_same_grid(f1, f2);
  std::vector<double> xi(f1.size());
  const auto count = static_cast<std::ptrdiff_t>(f1.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    xi[i] = std::abs(std::conj(f1.e_a[i]) * f2.e_a[i] + std::conj(f1.e_b[i]) * f2.e_b[i]);
  }
  return xi;
}

double integrate(std::span<const double> values, const AngularGrid& grid) {
  if (values.size() != grid.size()) throw std::invalid_argument("sample count does not match grid");
  const auto wt = trapezoid_weights(grid.thetas());
  const auto wp = trapezoid_weights(grid.phis());
  double sum = 0.0;
  for (std::size_t it = 0; it < wt.size(); ++it) {
    double row = 0.0;
    for (std::size_t ip = 0; ip < wp.size(); ++ip) row += wp[ip] * values[it * wp.size() + ip];
    sum += wt[it] * row;
  }
  return sum;
}

PowerPattern normalize_total_power(const PowerPattern& p, const AngularGrid& grid, double target) {
  const double integral = integrate(p.total, grid);
  if (!(integral > 0.0) || !std::isfinite(integral)) {
    throw std::invalid_argument("cannot normalize a pattern with zero total power");
  }
  const double scale = target / integral;
  PowerPattern out = p;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out.total[i] *= scale;
    out.a[i] *= scale;
    out.b[i] *= scale;
  }
  out.normalization = Normalization::TotalPower;
  out.target = target;
  return out;
}

double measure_hpbw(std::span<const double> power, const AngularGrid& grid) {
  const auto& angles = grid.cut_angles();
  if (power.size() != angles.size()) throw std::invalid_argument("sample count does not match grid");
  const auto peak_it = std::max_element(power.begin(), power.end());
  const double peak = *peak_it;
  if (!(peak > 0.0)) throw std::invalid_argument("pattern has no positive power");
  const auto peak_idx = static_cast<std::size_t>(peak_it - power.begin());

  auto rel_db = [&](std::size_t i) {
    return 10.0 * std::log10(std::max(power[i] / peak, 1e-300));
  };
  auto crossing = [&](std::size_t inner, std::size_t outer) {
    const double d_in = rel_db(inner);
    const double d_out = rel_db(outer);
    const double t = (kHalfPowerDb - d_in) / (d_out - d_in);
    return angles[inner] + t * (angles[outer] - angles[inner]);
  };

  std::size_t right = peak_idx;
  while (right + 1 < power.size() && rel_db(right + 1) >= kHalfPowerDb) ++right;
  std::size_t left = peak_idx;
  while (left > 0 && rel_db(left - 1) >= kHalfPowerDb) --left;
  if (right + 1 == power.size() || left == 0) {
    throw std::runtime_error("half-power crossing not found inside the grid; beam wider than grid");
  }
  return rad_to_deg(crossing(right, right + 1) - crossing(left, left - 1));
}

double weighting_loss_db(const DualPolWeights& w) {
  double sum = 0.0;
  double peak = 0.0;
  std::size_t active = 0;
  for (const auto* pol : {&w.a(), &w.b()}) {
    for (const cplx& v : *pol) {
      const double p = std::norm(v);
      if (p == 0.0) continue;
      sum += p;
      peak = std::max(peak, p);
      ++active;
    }
  }
  if (active == 0) throw std::invalid_argument("weighting loss is undefined for all-zero weights");
  // Rounding can push the ratio a hair above 1; the loss is never negative.
  return std::max(0.0, -10.0 * std::log10(sum / (static_cast<double>(active) * peak)));
}

PolarizationEllipse polarization_ellipse(cplx e_a, cplx e_b) {
  const double pa = std::norm(e_a);
  const double pb = std::norm(e_b);
  const double s0 = pa + pb;
  if (!(s0 > 0.0)) throw std::invalid_argument("polarization ellipse of a zero field");
  const cplx cross = e_a * std::conj(e_b);
  const double s1 = pa - pb;
  const double s2 = 2.0 * cross.real();
  const double s3 = 2.0 * cross.imag();

  const double chi = 0.5 * std::asin(std::clamp(s3 / s0, -1.0, 1.0));
  const double tan_chi = std::abs(std::tan(chi));

  PolarizationEllipse e;
  e.axis_ratio = tan_chi > 1e-12 ? 1.0 / tan_chi : 1e12;
  e.linear = e.axis_ratio > kLinearAxisRatio;
  e.tilt_deg = rad_to_deg(0.5 * std::atan2(s2, s1));
  if (!e.linear) e.sense = s3 > 0.0 ? Handedness::Left : Handedness::Right;
  return e;
}

double to_db(double p, double floor_db) {
  if (!(p > 0.0)) return floor_db;
  return std::max(10.0 * std::log10(p), floor_db);
}

namespace reference {

FieldPattern radiate(const ArrayGeometry& geom, const ElementPattern& elem,
                     const DualPolWeights& w, const AngularGrid& grid) {
  w.check_matches(geom);
  FieldPattern f{std::vector<cplx>(grid.size()), std::vector<cplx>(grid.size())};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Direction dir = grid.at(i);
    const auto steer = steering_vector(geom, dir);
    const double g = element_amplitude(elem, dir);
    f.e_a[i] = g * dot(w.a(), steer.data(), steer.size());
    f.e_b[i] = g * dot(w.b(), steer.data(), steer.size());
  }
  return f;
}

std::vector<double> parallelity(const FieldPattern& f1, const FieldPattern& f2) {
  check_same_grid(f1, f2);
  std::vector<double> xi(f1.size());
  for (std::size_t i = 0; i < f1.size(); ++i) {
    xi[i] = std::abs(std::conj(f1.e_a[i]) * f2.e_a[i] + std::conj(f1.e_b[i]) * f2.e_b[i]);
  }
  return xi;
}

}  // namespace reference

}  // namespace dpbf
