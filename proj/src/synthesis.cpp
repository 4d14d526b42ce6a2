// SPDX-License-Identifier: Apache-2.0

#include "dpbf/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

#include "dpbf/optimizer.hpp"

namespace dpbf {

namespace {

constexpr double kTwoPi = 2.0 * kPi;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Uniform [0, 1) from the top 53 bits; portable across standard libraries,
// unlike std::uniform_real_distribution.
double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::mt19937_64 restart_rng(std::uint64_t seed, std::size_t restart) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(restart)};
  return std::mt19937_64(seq);
}

struct Parameterization {
  std::size_t dim = 0;
  double initial_step = 0.5;
  std::function<DualPolWeights(std::span<const double>)> build;
  std::function<std::vector<double>(std::mt19937_64&)> init;
};

Parameterization spbf_params(std::size_t n) {
  Parameterization p;
  p.dim = 2 * (n - 1);
  p.initial_step = 0.25;
  p.build = [n](std::span<const double> x) {
    std::vector<cplx> a(n);
    a[0] = 1.0;  // gauge
    for (std::size_t k = 1; k < n; ++k) a[k] = {x[2 * k - 2], x[2 * k - 1]};
    return DualPolWeights::ula(std::move(a));
  };
  p.init = [n](std::mt19937_64& rng) {
    std::vector<double> x;
    x.reserve(2 * (n - 1));
    for (std::size_t k = 1; k < n; ++k) {
      const double r = uniform01(rng);
      const double phase = kTwoPi * uniform01(rng) - kPi;
      x.push_back(r * std::cos(phase));
      x.push_back(r * std::sin(phase));
    }
    return x;
  };
  return p;
}

// Layout: [phases_a(n-1), phases_b(n, unpaired only), amps_a(n-1), amps_b(n, unpaired only)];
// the amplitude blocks exist only in amplitude-and-phase mode. Element 0 of
// polarization A is the gauge (phase 0, amplitude 1).
Parameterization dpbf_params(std::size_t n, const SynthesisConfig& cfg) {
  const bool paired = cfg.conjugate_pair;
  const bool amps = cfg.taper_mode == TaperMode::AmplitudeAndPhase;
  const std::size_t nb = paired ? 0 : n;
  const std::size_t n_phase = (n - 1) + nb;
  const std::size_t n_amp = amps ? (n - 1) + nb : 0;

  Parameterization p;
  p.dim = n_phase + n_amp;
  p.initial_step = 0.5;
  p.build = [=](std::span<const double> x) {
    std::vector<cplx> a(n);
    std::vector<cplx> b(n);
    for (std::size_t k = 0; k < n; ++k) {
      const double phase = k == 0 ? 0.0 : x[k - 1];
      const double amp = (k == 0 || !amps) ? 1.0 : x[n_phase + k - 1];
      a[k] = amp * std::polar(1.0, phase);
    }
    for (std::size_t k = 0; k < n; ++k) {
      if (paired) {
        b[k] = std::conj(a[k]);
      } else {
        const double amp = amps ? x[n_phase + (n - 1) + k] : 1.0;
        b[k] = amp * std::polar(1.0, x[(n - 1) + k]);
      }
    }
    return DualPolWeights::ula(std::move(a), std::move(b));
  };
  p.init = [=](std::mt19937_64& rng) {
    std::vector<double> x(n_phase + n_amp, 1.0);
    for (std::size_t i = 0; i < n_phase; ++i) x[i] = kTwoPi * uniform01(rng) - kPi;
    return x;
  };
  return p;
}

void require_ula(const ArrayGeometry& geom, const char* what) {
  if (geom.kind() != ArrayKind::ULA) throw std::invalid_argument(std::string(what) + " needs a ULA");
}

std::optional<double> try_hpbw(const std::vector<double>& total, const AngularGrid& grid) {
  try {
    return measure_hpbw(total, grid);
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

struct RestartOutcome {
  SimplexResult simplex;
  CostBreakdown costs;
};

SynthesisResult run_multistart(const ArrayGeometry& geom, const ElementPattern& elem,
                               const std::vector<double>& target, const AngularGrid& grid,
                               const SynthesisConfig& cfg, const Parameterization& param) {
  auto objective = [&](std::span<const double> x) {
    try {
      return evaluate_costs(geom, elem, param.build(x), target, grid, cfg).scalar;
    } catch (const std::invalid_argument&) {
      return kInf;
    }
  };

  const SimplexOptions opts{cfg.max_evals, cfg.tolerance, param.initial_step};
  const std::size_t restarts = param.dim == 0 ? 1 : cfg.restarts;
  std::vector<RestartOutcome> outcomes(restarts);

  // Restarts are independent; the winner is picked afterwards by
  // (cost, restart index), so completion order does not matter.
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t r = 0; r < static_cast<std::ptrdiff_t>(restarts); ++r) {
    auto rng = restart_rng(cfg.seed, static_cast<std::size_t>(r));
    auto& out = outcomes[static_cast<std::size_t>(r)];
    out.simplex = minimize_simplex(objective, param.init(rng), opts);
  }

  std::size_t best = 0;
  std::size_t evals = 0;
  for (std::size_t r = 0; r < restarts; ++r) {
    evals += outcomes[r].simplex.evals;
    if (outcomes[r].simplex.value < outcomes[best].simplex.value) best = r;
  }

  SynthesisResult res;
  res.weights = param.build(outcomes[best].simplex.x);
  const auto costs = evaluate_costs(geom, elem, res.weights, target, grid, cfg);
  res.cost1 = costs.cost1;
  res.cost2 = costs.cost2;
  res.scalar_cost = costs.scalar;
  res.evals_used = evals;
  res.seed = cfg.seed;
  res.best_restart = best;
  res.trace = std::move(outcomes[best].simplex.trace);
  res.measured_hpbw_deg = try_hpbw(power(radiate(geom, elem, res.weights, grid)).total, grid);
  return res;
}

std::vector<double> cut_or_default(const std::vector<double>& angles) {
  if (angles.size() > 1) return angles;
  return AngularGrid::azimuth_cut().phis();
}

}  // namespace

TargetPattern TargetPattern::gaussian(double hpbw_deg) {
  if (!(hpbw_deg > 0.0 && hpbw_deg <= 180.0)) {
    throw std::invalid_argument("target half-power beamwidth must lie in (0, 180] degrees");
  }
  return {Shape::Gaussian, hpbw_deg, {}};
}

TargetPattern TargetPattern::tabulated(std::vector<double> samples_db) {
  if (samples_db.empty()) throw std::invalid_argument("tabulated target has no samples");
  return {Shape::Tabulated, 0.0, std::move(samples_db)};
}

std::vector<double> target_power(const TargetPattern& t, const AngularGrid& grid) {
  std::vector<double> out(grid.size());
  if (t.shape == TargetPattern::Shape::Tabulated) {
    if (t.samples_db.size() != grid.size()) {
      throw std::invalid_argument("tabulated target has " + std::to_string(t.samples_db.size()) +
                                  " samples for a grid of " + std::to_string(grid.size()));
    }
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::pow(10.0, t.samples_db[i] / 10.0);
    return out;
  }
  const auto& angles = grid.cut_angles();
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = gaussian_power(rad_to_deg(angles[i]), t.hpbw_deg);
  }
  return out;
}

std::vector<double> target_power(const TargetPattern& az, const TargetPattern& el,
                                 const AngularGrid& grid) {
  if (az.shape != TargetPattern::Shape::Gaussian || el.shape != TargetPattern::Shape::Gaussian) {
    throw std::invalid_argument("separable 2D targets must be Gaussian in both cuts");
  }
  std::vector<double> out(grid.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const Direction d = grid.at(i);
    out[i] = gaussian_power(rad_to_deg(d.phi), az.hpbw_deg) *
             gaussian_power(rad_to_deg(d.theta), el.hpbw_deg);
  }
  return out;
}

void SynthesisConfig::validate() const {
  if (!(cost_weights.pattern >= 0.0) || !(cost_weights.taper >= 0.0)) {
    throw std::invalid_argument("cost weights must be nonnegative");
  }
  if (cost_weights.pattern == 0.0 && cost_weights.taper == 0.0) {
    throw std::invalid_argument("cost weights must not both be zero");
  }
  if (restarts < 1) throw std::invalid_argument("restarts must be at least 1");
  if (max_evals < 1) throw std::invalid_argument("max_evals must be at least 1");
  if (!(cost_window_db > 0.0)) throw std::invalid_argument("cost window must be positive");
  if (!(tolerance >= 0.0)) throw std::invalid_argument("tolerance must be nonnegative");
}

double cost_pattern_variance(std::span<const double> p_total, std::span<const double> target,
                             const AngularGrid& grid, double window_db, double db_floor) {
  if (p_total.size() != grid.size() || target.size() != grid.size()) {
    throw std::invalid_argument("pattern, target and grid sizes differ");
  }
  const double p_int = integrate(p_total, grid);
  const double t_int = integrate(target, grid);
  if (!(p_int > 0.0) || !(t_int > 0.0)) {
    throw std::invalid_argument("cannot compare patterns with zero total power");
  }
  const double p_scale = kTwoPi / p_int;
  const double t_scale = kTwoPi / t_int;

  std::vector<double> t_db(grid.size());
  for (std::size_t i = 0; i < t_db.size(); ++i) t_db[i] = to_db(target[i] * t_scale, db_floor);
  const double t_peak = *std::max_element(t_db.begin(), t_db.end());

  double sum = 0.0;
  double sum_sq = 0.0;
  std::size_t count = 0;
  std::vector<double> diff;
  diff.reserve(grid.size());
  for (std::size_t i = 0; i < t_db.size(); ++i) {
    if (t_db[i] < t_peak - window_db) continue;
    diff.push_back(to_db(p_total[i] * p_scale, db_floor) - t_db[i]);
    sum += diff.back();
    ++count;
  }
  if (count == 0) throw std::invalid_argument("cost window contains no grid points");
  const double mean = sum / static_cast<double>(count);
  for (double d : diff) sum_sq += (d - mean) * (d - mean);
  return sum_sq / static_cast<double>(count);
}

double cost_pattern_variance(const PowerPattern& p, const TargetPattern& t, const AngularGrid& grid,
                             double window_db, double db_floor) {
  return cost_pattern_variance(p.total, target_power(t, grid), grid, window_db, db_floor);
}

double scalarize(double cost1, double cost2, const SynthesisConfig& cfg) {
  return cfg.cost_weights.pattern * cost1 + cfg.cost_weights.taper * cost2;
}

CostBreakdown evaluate_costs(const ArrayGeometry& geom, const ElementPattern& elem,
                             const DualPolWeights& w, std::span<const double> target,
                             const AngularGrid& grid, const SynthesisConfig& cfg) {
  const auto p = power(radiate(geom, elem, w, grid));
  CostBreakdown c;
  c.cost1 = cost_pattern_variance(p.total, target, grid, cfg.cost_window_db, cfg.db_floor);
  c.cost2 = weighting_loss_db(w);
  c.scalar = scalarize(c.cost1, c.cost2, cfg);
  return c;
}

SynthesisResult synthesize_spbf(const ArrayGeometry& geom, const ElementPattern& elem,
                                const TargetPattern& target, const AngularGrid& grid,
                                const SynthesisConfig& cfg) {
  require_ula(geom, "SPBF synthesis");
  cfg.validate();
  if (cfg.taper_mode != TaperMode::AmplitudeAndPhase) {
    throw std::invalid_argument("SPBF synthesis needs taper_mode amplitude-and-phase");
  }
  return run_multistart(geom, elem, target_power(target, grid), grid, cfg, spbf_params(geom.cols()));
}

SynthesisResult synthesize_dpbf(const ArrayGeometry& geom, const ElementPattern& elem,
                                const TargetPattern& target, const AngularGrid& grid,
                                const SynthesisConfig& cfg) {
  require_ula(geom, "DPBF synthesis");
  cfg.validate();
  return run_multistart(geom, elem, target_power(target, grid), grid, cfg,
                        dpbf_params(geom.cols(), cfg));
}

SynthesisResult synthesize_ura(const ArrayGeometry& geom, const ElementPattern& elem,
                               const TargetPattern& target_az, const TargetPattern& target_el,
                               const AngularGrid& grid, const SynthesisConfig& cfg, UraMode mode) {
  if (geom.kind() != ArrayKind::URA) throw std::invalid_argument("URA synthesis needs a URA");
  cfg.validate();
  const std::size_t rows = geom.rows();

  // Elevation is synthesized as a ULA along the vertical axis: its cut is the
  // same 1D problem with spacing dV and the elevation element beamwidth.
  const AngularGrid el_grid({0.0}, cut_or_default(grid.thetas()));
  const AngularGrid az_grid({0.0}, cut_or_default(grid.phis()));
  const auto el_elem = ElementPattern::symmetric(elem.hpbw_el_deg());
  const auto az_elem = ElementPattern::symmetric(elem.hpbw_az_deg());

  SynthesisConfig el_cfg = cfg;
  el_cfg.seed = cfg.seed + 1;

  UraComposition comp;
  comp.mode = mode;
  comp.u1_a.assign(rows, cplx{});
  comp.u1_b.assign(rows, cplx{});
  SynthesisResult el_res;
  if (mode == UraMode::DpbfBoth) {
    const auto active = default_active_rows(rows);
    const auto n_active = static_cast<std::size_t>(std::count(active.begin(), active.end(), true));
    el_res = synthesize_dpbf(ArrayGeometry::ula(n_active, geom.row_spacing_wl()), el_elem, target_el,
                             el_grid, el_cfg);
    for (std::size_t m = 0, k = 0; m < rows; ++m) {
      if (!active[m]) continue;
      comp.u1_a[m] = el_res.weights.a()[k];
      comp.u1_b[m] = el_res.weights.b()[k];
      ++k;
    }
  } else {
    el_cfg.taper_mode = TaperMode::AmplitudeAndPhase;
    el_res = synthesize_spbf(ArrayGeometry::ula(rows, geom.row_spacing_wl()), el_elem, target_el,
                             el_grid, el_cfg);
    comp.u1_a = el_res.weights.a();
  }

  const auto az_res = synthesize_dpbf(ArrayGeometry::ula(geom.cols(), geom.col_spacing_wl()), az_elem,
                                      target_az, az_grid, cfg);
  comp.v_alpha = az_res.weights.a();
  comp.v_beta = az_res.weights.b();

  SynthesisResult res;
  res.weights = compose_ura(comp);
  const auto costs = evaluate_costs(geom, elem, res.weights, target_power(target_az, target_el, grid),
                                    grid, cfg);
  res.cost1 = costs.cost1;
  res.cost2 = costs.cost2;
  res.scalar_cost = costs.scalar;
  res.evals_used = el_res.evals_used + az_res.evals_used;
  res.seed = cfg.seed;
  res.best_restart = az_res.best_restart;
  res.trace = az_res.trace;
  res.composition = std::move(comp);

  const AngularGrid az_cut({0.0}, grid.phis().size() > 1 ? grid.phis() : az_grid.phis());
  res.measured_hpbw_deg = try_hpbw(power(radiate(geom, elem, res.weights, az_cut)).total, az_cut);
  return res;
}

}  // namespace dpbf
