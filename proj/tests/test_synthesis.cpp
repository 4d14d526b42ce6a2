// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <random>

#include "dpbf/optimizer.hpp"
#include "dpbf/synthesis.hpp"
#include "frozen_values.hpp"
#include "support.hpp"

using namespace dpbf;
using namespace testing_support;

namespace {

const auto kElem = ElementPattern::symmetric(90.0);
const auto kUla4 = ArrayGeometry::ula(4, 0.5);
const auto kTarget = TargetPattern::gaussian(65.0);

SynthesisConfig quick_config(std::uint64_t seed = 1) {
  SynthesisConfig cfg;
  cfg.restarts = 6;
  cfg.max_evals = 1500;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

TEST_CASE("simplex optimizer") {
  SUBCASE("quadratic bowl") {
    const auto res = minimize_simplex(
        [](std::span<const double> x) { return (x[0] - 1.0) * (x[0] - 1.0) + 4.0 * (x[1] + 2.0) * (x[1] + 2.0); },
        {0.0, 0.0}, {5000, 1e-14, 0.5});
    CHECK(res.x[0] == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(res.x[1] == doctest::Approx(-2.0).epsilon(1e-5));
  }
  SUBCASE("trace is non-increasing and eval budget respected") {
    const auto res = minimize_simplex(
        [](std::span<const double> x) {
          double s = 0.0;
          for (std::size_t i = 0; i < x.size(); ++i) s += std::cos(3.0 * x[i]) + 0.1 * x[i] * x[i];
          return s;
        },
        {0.3, -1.0, 2.0}, {200, 0.0, 0.5});
    for (std::size_t i = 1; i < res.trace.size(); ++i) CHECK(res.trace[i] <= res.trace[i - 1]);
    CHECK(res.evals <= 200 + 4);  // a shrink step may finish past the budget check
  }
  SUBCASE("zero-dimensional problem") {
    const auto res = minimize_simplex([](std::span<const double>) { return 3.0; }, {});
    CHECK(res.value == 3.0);
    CHECK(res.evals == 1);
  }
}

TEST_CASE("pattern variance cost") {
  const auto grid = AngularGrid::azimuth_cut();
  const auto t = target_power(kTarget, grid);
  SUBCASE("identical and scaled patterns cost nothing") {
    CHECK(cost_pattern_variance(t, t, grid, 10.0) == doctest::Approx(0.0).epsilon(1e-20));
    std::vector<double> scaled(t);
    for (double& x : scaled) x *= 7.5;
    CHECK(std::abs(cost_pattern_variance(scaled, t, grid, 10.0)) < 1e-12);
  }
  SUBCASE("SPBF reference weights match the numpy oracle") {
    const auto p = power(radiate(kUla4, kElem, spbf_reference(), grid));
    CHECK(cost_pattern_variance(p, kTarget, grid, 10.0) == doctest::Approx(frozen::kSpbfCost1).epsilon(1e-10));
  }
  SUBCASE("reference DPBF weights match the numpy oracle") {
    const auto p = power(radiate(kUla4, kElem, dpbf_reference(), grid));
    CHECK(cost_pattern_variance(p, kTarget, grid, 10.0) == doctest::Approx(frozen::kDpbfReferenceCost1).epsilon(1e-10));
  }
  SUBCASE("common dB offset leaves the cost unchanged") {
    const auto p = power(radiate(kUla4, kElem, dpbf_reference(), grid));
    std::vector<double> shifted(p.total);
    for (double& x : shifted) x *= std::pow(10.0, 0.37);
    CHECK(std::abs(cost_pattern_variance(shifted, t, grid, 10.0) -
                   cost_pattern_variance(p.total, t, grid, 10.0)) < 1e-12);
  }
  SUBCASE("empty window") {
    CHECK_THROWS_AS(cost_pattern_variance(t, t, grid, -1.0), std::invalid_argument);
  }
}

TEST_CASE("scalarize") {
  SynthesisConfig cfg;
  cfg.cost_weights = {1.0, 1.0};
  CHECK(scalarize(1.0, 0.0, cfg) == 1.0);
  cfg.cost_weights = {1.0, 0.0};
  CHECK(scalarize(0.0, 2.4, cfg) == 0.0);
  cfg.cost_weights = {1.0, 0.5};
  CHECK(scalarize(0.5, 2.4, cfg) == doctest::Approx(1.7));
}

TEST_CASE("config validation") {
  SynthesisConfig cfg;
  cfg.cost_weights = {0.0, 0.0};
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.restarts = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.cost_weights.taper = -1.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  CHECK_THROWS_AS(TargetPattern::gaussian(0.0), std::invalid_argument);
  CHECK_THROWS_AS(TargetPattern::gaussian(200.0), std::invalid_argument);
}

TEST_CASE("SPBF synthesis") {
  const auto grid = AngularGrid::azimuth_cut();
  SUBCASE("beats the reference weights under the same cost") {
    auto cfg = quick_config();
    cfg.taper_mode = TaperMode::AmplitudeAndPhase;
    const auto res = synthesize_spbf(kUla4, kElem, kTarget, grid, cfg);
    const auto ref = evaluate_costs(kUla4, kElem, spbf_reference(), target_power(kTarget, grid), grid, cfg);
    CHECK(res.scalar_cost <= ref.scalar);
    CHECK(res.weights.a()[0] == cplx(1.0, 0.0));
    for (const cplx& b : res.weights.b()) CHECK(b == cplx(0.0, 0.0));
    for (std::size_t i = 1; i < res.trace.size(); ++i) CHECK(res.trace[i] <= res.trace[i - 1]);
  }
  SUBCASE("single element has nothing to optimize") {
    auto cfg = quick_config();
    cfg.taper_mode = TaperMode::AmplitudeAndPhase;
    const auto res = synthesize_spbf(ArrayGeometry::ula(1, 0.5), kElem, kTarget, grid, cfg);
    const auto elem_power = power(radiate(ArrayGeometry::ula(1, 0.5), kElem, DualPolWeights::ula({1.0}), grid));
    CHECK(res.cost1 == doctest::Approx(cost_pattern_variance(elem_power, kTarget, grid, 10.0)));
    CHECK(res.cost1 > 0.0);
    const auto self = synthesize_spbf(ArrayGeometry::ula(1, 0.5), kElem, TargetPattern::gaussian(90.0), grid, cfg);
    CHECK(self.cost1 < 1e-20);
  }
  SUBCASE("phase-only config is rejected") {
    CHECK_THROWS_AS(synthesize_spbf(kUla4, kElem, kTarget, grid, quick_config()), std::invalid_argument);
  }
}

TEST_CASE("DPBF synthesis") {
  const auto grid = AngularGrid::azimuth_cut();
  const auto target = target_power(kTarget, grid);
  SUBCASE("phase-only conjugate pair") {
    const auto cfg = quick_config();
    const auto res = synthesize_dpbf(kUla4, kElem, kTarget, grid, cfg);
    const auto ref = evaluate_costs(kUla4, kElem, spbf_reference(), target, grid, cfg);
    CHECK(res.cost2 < 1e-10);
    CHECK(weighting_loss_db(res.weights) < 1e-10);
    CHECK(res.cost1 <= ref.cost1);
    for (std::size_t k = 0; k < 4; ++k) {
      CHECK(std::abs(std::abs(res.weights.a()[k]) - 1.0) < 1e-12);
      CHECK(res.weights.b()[k] == std::conj(res.weights.a()[k]));
    }
    CHECK(res.weights.a()[0] == cplx(1.0, 0.0));
    REQUIRE(res.measured_hpbw_deg);
    CHECK(std::abs(*res.measured_hpbw_deg - 65.0) <= 5.0);
  }
  SUBCASE("reference phases give the oracle beamwidth") {
    const auto p = power(radiate(kUla4, kElem, dpbf_reference(), grid));
    CHECK(std::abs(measure_hpbw(p, grid) - frozen::kDpbfReferenceHpbwDeg) <= 0.5);
    CHECK(std::abs(measure_hpbw(p, grid) - 65.0) <= 5.0);
  }
  SUBCASE("all-zero phases are worse than the optimum") {
    const auto cfg = quick_config();
    const auto res = synthesize_dpbf(kUla4, kElem, kTarget, grid, cfg);
    const std::vector<cplx> ones(4, 1.0);
    const auto flat = evaluate_costs(kUla4, kElem, DualPolWeights::ula(ones, ones), target, grid, cfg);
    CHECK(flat.cost1 > res.cost1);
  }
  SUBCASE("determinism") {
    const auto cfg = quick_config(42);
    const auto r1 = synthesize_dpbf(kUla4, kElem, kTarget, grid, cfg);
    const auto r2 = synthesize_dpbf(kUla4, kElem, kTarget, grid, cfg);
    CHECK(r1.weights == r2.weights);
    CHECK(r1.cost1 == r2.cost1);
    CHECK(r1.trace == r2.trace);
    CHECK(r1.evals_used == r2.evals_used);
  }
  SUBCASE("gauge invariance of the costs") {
    SynthesisConfig cfg;
    const auto base = evaluate_costs(kUla4, kElem, dpbf_reference(), target, grid, cfg);
    for (double shift : {0.3, -1.7, 2.9}) {
      const double psi[] = {2.32, 2.06, 0.00, 0.97};
      std::vector<cplx> a;
      std::vector<cplx> b;
      for (double p : psi) {
        a.push_back(std::polar(1.0, p + shift));
        b.push_back(std::polar(1.0, -(p + shift)));
      }
      const auto shifted = evaluate_costs(kUla4, kElem, DualPolWeights::ula(a, b), target, grid, cfg);
      CHECK(std::abs(shifted.cost1 - base.cost1) < 1e-10);
      CHECK(std::abs(shifted.cost2 - base.cost2) < 1e-10);
    }
  }
  SUBCASE("unpaired and amplitude modes") {
    auto cfg = quick_config();
    cfg.conjugate_pair = false;
    const auto free_phase = synthesize_dpbf(kUla4, kElem, kTarget, grid, cfg);
    CHECK(weighting_loss_db(free_phase.weights) < 1e-10);
    cfg.taper_mode = TaperMode::AmplitudeAndPhase;
    const auto tapered = synthesize_dpbf(kUla4, kElem, kTarget, grid, cfg);
    CHECK(std::isfinite(tapered.scalar_cost));
    CHECK(tapered.weights.a()[0] == cplx(1.0, 0.0));
  }
  SUBCASE("URA geometry is rejected") {
    CHECK_THROWS_AS(synthesize_dpbf(ArrayGeometry::ura(2, 2, 0.7, 0.5), kElem, kTarget, grid, quick_config()),
                    std::invalid_argument);
  }
}

TEST_CASE("URA synthesis") {
  const auto geom = ArrayGeometry::ura(6, 4, 0.7, 0.5);
  const auto grid = AngularGrid::front_hemisphere(3.0);
  const auto target_el = TargetPattern::gaussian(30.0);
  SUBCASE("dpbf-both activates every element with a phase-only taper") {
    const auto res = synthesize_ura(geom, kElem, kTarget, target_el, grid, quick_config(), UraMode::DpbfBoth);
    REQUIRE(res.composition);
    const auto& c = *res.composition;
    for (std::size_t m = 0; m < 6; ++m) {
      CHECK((c.u1_a[m] != cplx{}) == (m < 3));
      CHECK((c.u1_b[m] != cplx{}) == (m < 3));
    }
    for (std::size_t k = 0; k < res.weights.size(); ++k) {
      CHECK(res.weights.a()[k] != cplx{});
      CHECK(res.weights.b()[k] != cplx{});
    }
    CHECK(weighting_loss_db(res.weights) < 1e-10);
    CHECK(std::isfinite(res.cost1));

    const auto w2 = companion_ura(res.weights);
    const auto f1 = radiate(geom, kElem, res.weights, grid);
    const auto f2 = radiate(geom, kElem, w2, grid);
    const auto p1 = power(f1);
    const auto p2 = power(f2);
    const auto xi = parallelity(f1, f2);
    double peak = 0.0;
    for (double p : p1.total) peak = std::max(peak, p);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      CHECK(xi[i] < 1e-12);
      CHECK(std::abs(p1.total[i] - p2.total[i]) / peak < 1e-12);
    }
  }
  SUBCASE("spbf-elevation gives a rank-one A matrix") {
    const auto res = synthesize_ura(geom, kElem, kTarget, target_el, grid, quick_config(), UraMode::SpbfElevation);
    REQUIRE(res.composition);
    const auto& c = *res.composition;
    for (const cplx& x : c.u1_b) CHECK(x == cplx(0.0, 0.0));
    for (std::size_t m = 0; m < 6; ++m) {
      for (std::size_t n = 0; n < 4; ++n) CHECK(res.weights.a(m, n) == c.u1_a[m] * c.v_alpha[n]);
    }
  }
  SUBCASE("odd row count is rejected in dpbf-both mode") {
    CHECK_THROWS_AS(synthesize_ura(ArrayGeometry::ura(5, 4, 0.7, 0.5), kElem, kTarget, target_el, grid,
                                   quick_config(), UraMode::DpbfBoth),
                    std::invalid_argument);
  }
}
