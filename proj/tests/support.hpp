// SPDX-License-Identifier: Apache-2.0
//
// Shared test helpers: seeded random weights, the fixed reference designs,
// and a brute-force far-field oracle that does not use the library kernels.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "dpbf/array_model.hpp"
#include "dpbf/weights.hpp"

namespace testing_support {

using dpbf::cplx;

inline std::vector<cplx> random_vector(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<cplx> v(n);
  for (auto& x : v) x = {u(rng), u(rng)};
  return v;
}

inline dpbf::DualPolWeights random_ula(std::mt19937_64& rng, std::size_t n) {
  return dpbf::DualPolWeights::ula(random_vector(rng, n), random_vector(rng, n));
}

inline dpbf::DualPolWeights random_ura(std::mt19937_64& rng, std::size_t m, std::size_t n) {
  return dpbf::DualPolWeights::ura(m, n, random_vector(rng, m * n), random_vector(rng, m * n));
}

inline std::vector<cplx> unit_phasors(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-dpbf::kPi, dpbf::kPi);
  std::vector<cplx> v(n);
  for (auto& x : v) x = std::polar(1.0, u(rng));
  return v;
}

inline dpbf::DualPolWeights spbf_reference() {
  return dpbf::DualPolWeights::ula({1.0, 1.0, -0.48, 0.24});
}

inline dpbf::DualPolWeights dpbf_reference() {
  const double psi[] = {2.32, 2.06, 0.00, 0.97};
  std::vector<cplx> a;
  std::vector<cplx> b;
  for (double p : psi) {
    a.push_back(std::polar(1.0, p));
    b.push_back(std::polar(1.0, -p));
  }
  return dpbf::DualPolWeights::ula(a, b);
}

/// Azimuth-cut total power of ULA weights, written out from the defining sums.
inline double oracle_ula_power(const std::vector<cplx>& wa, const std::vector<cplx>& wb,
                               double spacing, double elem_hpbw_deg, double phi_deg) {
  const double n = static_cast<double>(wa.size());
  const double u = std::sin(phi_deg * dpbf::kPi / 180.0);
  cplx ea = 0.0;
  cplx eb = 0.0;
  for (std::size_t k = 0; k < wa.size(); ++k) {
    const double x = (static_cast<double>(k) - (n - 1.0) / 2.0) * spacing;
    const cplx steer = std::exp(cplx(0.0, 2.0 * dpbf::kPi * x * u));
    ea += wa[k] * steer;
    eb += wb[k] * steer;
  }
  const double g = elem_hpbw_deg > 0.0
                       ? std::exp(-4.0 * std::log(2.0) * std::pow(phi_deg / elem_hpbw_deg, 2.0))
                       : 1.0;
  return g * (std::norm(ea) + std::norm(eb));
}

/// Exact half-power width: 0.01 degree scan, then bisection on each crossing.
inline double oracle_ula_hpbw(const std::vector<cplx>& wa, const std::vector<cplx>& wb,
                              double spacing, double elem_hpbw_deg) {
  auto p = [&](double phi) { return oracle_ula_power(wa, wb, spacing, elem_hpbw_deg, phi); };
  double peak_phi = -90.0;
  double peak = 0.0;
  for (double phi = -90.0; phi <= 90.0; phi += 0.01) {
    if (p(phi) > peak) {
      peak = p(phi);
      peak_phi = phi;
    }
  }
  auto crossing = [&](double dir) {
    double inner = peak_phi;
    double outer = peak_phi;
    while (p(outer) >= peak / 2.0) {
      inner = outer;
      outer += dir * 0.01;
    }
    for (int i = 0; i < 100; ++i) {
      const double mid = 0.5 * (inner + outer);
      (p(mid) >= peak / 2.0 ? inner : outer) = mid;
    }
    return 0.5 * (inner + outer);
  };
  return crossing(+1.0) - crossing(-1.0);
}

inline double max_abs_diff(const std::vector<cplx>& x, const std::vector<cplx>& y) {
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) d = std::max(d, std::abs(x[i] - y[i]));
  return d;
}

}  // namespace testing_support
