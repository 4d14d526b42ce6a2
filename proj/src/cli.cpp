// SPDX-License-Identifier: Apache-2.0

#include "dpbf/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "dpbf/companion.hpp"
#include "dpbf/io.hpp"
#include "dpbf/synthesis.hpp"

namespace dpbf::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Verification tolerances, relative to the peak total power of beam 1.
constexpr double kParallelityTol = 1e-10;
constexpr double kPowerMismatchTol = 1e-10;
constexpr double kInvolutionTol = 1e-14;
constexpr double kEnergyTol = 1e-12;

// Reported losses below rounding noise print as exactly 0.
double reported_loss(double loss_db) { return loss_db < 1e-12 ? 0.0 : loss_db; }

json optional_number(const std::optional<double>& v) {
  return v && std::isfinite(*v) ? json(*v) : json(nullptr);
}

void write_pattern(const fs::path& dir, const std::string& format,
                   const std::vector<PatternRow>& rows) {
  if (format == "json") {
    write_json(dir / "pattern.json", pattern_to_json(rows));
    return;
  }
  std::ofstream out(dir / "pattern.csv", std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + (dir / "pattern.csv").string());
  write_pattern_csv(out, rows);
}

struct Options {
  std::string config;
  std::optional<std::int64_t> seed;
  std::optional<double> grid_step_deg;
  std::string out_dir;
  std::string format;
  std::string cut;
  std::string weights_in;
  std::string weights_out;
  std::string companion_in;
};

int cmd_synthesize(const Options& opt, std::ostream& out) {
  RunConfig cfg = load_config(opt.config);
  if (opt.seed) {
    if (*opt.seed < 0) throw ConfigError("--seed", "must be >= 0");
    cfg.synthesis.seed = static_cast<std::uint64_t>(*opt.seed);
  }
  if (opt.grid_step_deg) {
    if (!(*opt.grid_step_deg > 0.0)) throw ConfigError("--grid-step-deg", "must be > 0");
    cfg.grid.step_deg = *opt.grid_step_deg;
  }
  if (!opt.out_dir.empty()) cfg.output.dir = opt.out_dir;
  if (!opt.format.empty()) cfg.output.format = opt.format;

  const AngularGrid grid = cfg.grid.build();
  SynthesisResult res;
  switch (cfg.method) {
    case Method::Spbf:
      res = synthesize_spbf(cfg.array, cfg.element, cfg.target, grid, cfg.synthesis);
      break;
    case Method::Dpbf:
      res = synthesize_dpbf(cfg.array, cfg.element, cfg.target, grid, cfg.synthesis);
      break;
    case Method::Ura:
      res = synthesize_ura(cfg.array, cfg.element, cfg.target,
                           TargetPattern::gaussian(cfg.target_el_hpbw_deg), grid, cfg.synthesis,
                           cfg.ura_mode);
      break;
  }

  const WeightsFile wf{cfg.array, cfg.element, res.weights};
  const auto check = check_companion(wf, companion(res.weights),
                                     verification_grid(cfg.array, cfg.grid.step_deg));

  const fs::path dir = cfg.output.dir;
  fs::create_directories(dir);
  write_weights(dir / "weights.json", wf);
  write_pattern(dir, cfg.output.format, pattern_table(wf, grid, cfg.synthesis.db_floor));

  const json metrics = {
      {"schema_version", kSchemaVersion},
      {"weighting_loss_db", reported_loss(weighting_loss_db(res.weights))},
      {"cost1", res.cost1},
      {"cost2", reported_loss(res.cost2)},
      {"scalar_cost", res.scalar_cost},
      {"measured_hpbw_deg", optional_number(res.measured_hpbw_deg)},
      {"max_parallelity", check.max_parallelity},
      {"max_power_mismatch", check.max_power_mismatch},
      {"evals_used", res.evals_used},
      {"best_restart", res.best_restart},
      {"seed", res.seed},
      {"config", config_to_json(cfg)},
  };
  write_json(dir / "metrics.json", metrics);
  out << "wrote " << (dir / "weights.json").string() << ", pattern." << cfg.output.format
      << ", metrics.json\n";
  return kExitOk;
}

int cmd_companion(const Options& opt, std::ostream& out) {
  const WeightsFile wf = read_weights(opt.weights_in);
  const double step = opt.grid_step_deg.value_or(1.0);
  if (!(step > 0.0)) throw ConfigError("--grid-step-deg", "must be > 0");
  const WeightsFile second{wf.array, wf.element, companion(wf.weights)};
  write_weights(opt.weights_out, second);

  const auto check = check_companion(wf, second.weights, verification_grid(wf.array, step));
  const json metrics = {{"schema_version", kSchemaVersion},
                        {"max_parallelity", check.max_parallelity},
                        {"max_power_mismatch", check.max_power_mismatch},
                        {"weighting_loss_db", reported_loss(weighting_loss_db(second.weights))}};
  if (!opt.out_dir.empty()) {
    fs::create_directories(opt.out_dir);
    write_json(fs::path(opt.out_dir) / "metrics.json", metrics);
  }
  out << metrics.dump(2) << '\n';
  return kExitOk;
}

int cmd_pattern(const Options& opt, std::ostream& out) {
  const WeightsFile wf = read_weights(opt.weights_in);
  GridSpec spec;
  spec.step_deg = opt.grid_step_deg.value_or(1.0);
  if (!(spec.step_deg > 0.0)) throw ConfigError("--grid-step-deg", "must be > 0");
  const std::string cut = opt.cut.empty() ? "azimuth" : opt.cut;
  spec.cut = cut == "azimuth" ? GridCut::Azimuth : cut == "elevation" ? GridCut::Elevation : GridCut::Full;
  const std::string format = opt.format.empty() ? "csv" : opt.format;

  const auto rows = pattern_table(wf, spec.build());
  if (opt.out_dir.empty()) {
    if (format == "json") {
      out << pattern_to_json(rows).dump(2) << '\n';
    } else {
      write_pattern_csv(out, rows);
    }
    return kExitOk;
  }
  fs::create_directories(opt.out_dir);
  write_pattern(opt.out_dir, format, rows);
  return kExitOk;
}

int cmd_verify(const Options& opt, std::ostream& out) {
  const WeightsFile wf = read_weights(opt.weights_in);
  const double step = opt.grid_step_deg.value_or(1.0);
  if (!(step > 0.0)) throw ConfigError("--grid-step-deg", "must be > 0");

  DualPolWeights second;
  if (opt.companion_in.empty()) {
    second = companion(wf.weights);
  } else {
    const WeightsFile other = read_weights(opt.companion_in);
    if (!(other.array == wf.array)) throw ConfigError("companion", "array differs from beam 1");
    second = other.weights;
  }

  const auto grid = verification_grid(wf.array, step);
  const auto check = check_companion(wf, second, grid);

  const auto twice = companion(companion(wf.weights));
  double peak_w = 0.0;
  double involution = 0.0;
  for (std::size_t k = 0; k < twice.size(); ++k) {
    peak_w = std::max({peak_w, std::abs(wf.weights.a()[k]), std::abs(wf.weights.b()[k])});
    involution = std::max({involution, std::abs(twice.a()[k] + wf.weights.a()[k]),
                           std::abs(twice.b()[k] + wf.weights.b()[k])});
  }
  involution /= peak_w;
  const double e1 = total_energy(wf.weights);
  const double energy = std::abs(total_energy(second) - e1) / e1;

  const auto p = power(radiate(wf.array, wf.element, wf.weights, grid));
  double split = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    split = std::max(split, std::abs(p.total[i] - (p.a[i] + p.b[i])) / std::max(p.total[i], 1e-300));
  }

  json checks = json::array();
  bool pass = true;
  auto add = [&](const char* name, double value, double tol) {
    const bool ok = value <= tol;
    pass = pass && ok;
    checks.push_back({{"name", name}, {"value", value}, {"tolerance", tol}, {"pass", ok}});
  };
  add("orthogonality", check.max_parallelity, kParallelityTol);
  add("power_identity", check.max_power_mismatch, kPowerMismatchTol);
  add("energy_preservation", energy, kEnergyTol);
  add("involution", involution, kInvolutionTol);
  add("power_split", split, 1e-12);

  const json report = {{"schema_version", kSchemaVersion},
                       {"weighting_loss_db", reported_loss(weighting_loss_db(wf.weights))},
                       {"max_parallelity", check.max_parallelity},
                       {"max_power_mismatch", check.max_power_mismatch},
                       {"pass", pass},
                       {"checks", checks}};
  if (!opt.out_dir.empty()) {
    fs::create_directories(opt.out_dir);
    write_json(fs::path(opt.out_dir) / "metrics.json", report);
  }
  out << report.dump(2) << '\n';
  return pass ? kExitOk : kExitInvariant;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dual-polarization beamforming: wide-beam synthesis and companion beams", "dpbf"};
  app.require_subcommand(1);
  Options opt;

  auto* synth = app.add_subcommand("synthesize", "Synthesize beam-1 weights from a config");
  synth->add_option("--config", opt.config, "Run configuration (JSON)")->required();
  synth->add_option("--seed", opt.seed, "Override synthesis.seed");
  synth->add_option("--grid-step-deg", opt.grid_step_deg, "Override grid.step_deg");
  synth->add_option("--out", opt.out_dir, "Output directory (overrides output.dir)");
  synth->add_option("--format", opt.format, "Pattern table format")
      ->check(CLI::IsMember({"csv", "json"}));

  auto* comp = app.add_subcommand("companion", "Write the orthogonally polarized companion beam");
  comp->add_option("weights_in", opt.weights_in, "Beam-1 weights file")->required();
  comp->add_option("weights_out", opt.weights_out, "Companion weights file to write")->required();
  comp->add_option("--grid-step-deg", opt.grid_step_deg, "Verification grid step");
  comp->add_option("--out", opt.out_dir, "Directory for metrics.json");

  auto* pat = app.add_subcommand("pattern", "Tabulate normalized power and polarization");
  pat->add_option("weights", opt.weights_in, "Weights file")->required();
  pat->add_option("--grid-step-deg", opt.grid_step_deg, "Grid step");
  pat->add_option("--cut", opt.cut, "azimuth | elevation | full")
      ->check(CLI::IsMember({"azimuth", "elevation", "full"}));
  pat->add_option("--out", opt.out_dir, "Output directory (default: stdout)");
  pat->add_option("--format", opt.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));

  auto* ver = app.add_subcommand("verify", "Check companion-beam invariants for weights");
  ver->add_option("weights", opt.weights_in, "Beam-1 weights file")->required();
  ver->add_option("companion", opt.companion_in, "Beam-2 weights (default: constructed)");
  ver->add_option("--grid-step-deg", opt.grid_step_deg, "Verification grid step");
  ver->add_option("--out", opt.out_dir, "Directory for metrics.json");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }

  try {
    if (synth->parsed()) return cmd_synthesize(opt, out);
    if (comp->parsed()) return cmd_companion(opt, out);
    if (pat->parsed()) return cmd_pattern(opt, out);
    return cmd_verify(opt, out);
  } catch (const ConfigError& e) {
    err << "input error: " << e.what() << '\n';
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
  }
  return kExitInput;
}

}  // namespace dpbf::cli
