// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "dpbf/cli.hpp"
#include "dpbf/io.hpp"
#include "frozen_values.hpp"
#include "support.hpp"

using namespace dpbf;
using namespace testing_support;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

class ScratchDir {
 public:
  explicit ScratchDir(const std::string& tag) {
    path_ = fs::temp_directory_path() / ("dpbf_test_" + tag + "_" + std::to_string(std::random_device{}()));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~ScratchDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

struct RunResult {
  int code;
  std::string out;
  std::string err;
};

RunResult run_cli(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void spit(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

json ula4_config(const fs::path& out_dir) {
  return {{"schema_version", 1},
          {"array", {{"kind", "ULA"}, {"n_cols", 4}, {"col_spacing_wl", 0.5}}},
          {"element", {{"hpbw_az_deg", 90.0}, {"hpbw_el_deg", 90.0}}},
          {"target", {{"shape", "gaussian"}, {"hpbw_deg", 65.0}}},
          {"synthesis", {{"method", "dpbf"}, {"restarts", 4}, {"max_evals", 800}, {"seed", 7}}},
          {"output", {{"dir", out_dir.string()}}}};
}

WeightsFile ula4(const DualPolWeights& w) {
  return {ArrayGeometry::ula(4, 0.5), ElementPattern::symmetric(90.0), w};
}

// Splits CSV text into cells; row 0 is the header.
std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(std::move(cells));
  }
  return rows;
}

}  // namespace

TEST_CASE("config parsing") {
  SUBCASE("empty object gives documented defaults") {
    const auto cfg = parse_config(json::object());
    CHECK(cfg.array == ArrayGeometry::ula(4, 0.5));
    CHECK(cfg.method == Method::Dpbf);
    CHECK(cfg.synthesis.taper_mode == TaperMode::PhaseOnly);
    CHECK(cfg.synthesis.conjugate_pair);
    CHECK(cfg.target.hpbw_deg == 65.0);
    CHECK(cfg.element.hpbw_az_deg() == 90.0);
  }
  SUBCASE("URA implies the ura method and a full grid") {
    const auto cfg = parse_config({{"array", {{"kind", "URA"}, {"n_rows", 6}, {"n_cols", 4}}}});
    CHECK(cfg.method == Method::Ura);
    CHECK(cfg.grid.cut == GridCut::Full);
    CHECK(cfg.array.rows() == 6);
    CHECK(cfg.array.row_spacing_wl() == 0.7);
  }
  SUBCASE("spbf defaults to amplitude and phase") {
    const auto cfg = parse_config({{"synthesis", {{"method", "spbf"}}}});
    CHECK(cfg.synthesis.taper_mode == TaperMode::AmplitudeAndPhase);
  }

  auto error_key = [](const json& j) -> std::string {
    try {
      parse_config(j);
    } catch (const ConfigError& e) {
      return e.key();
    }
    return "<no error>";
  };
  CHECK(error_key({{"array", {{"n_cols", 0}}}}) == "array.n_cols");
  CHECK(error_key({{"arrray", json::object()}}) == "arrray");
  CHECK(error_key({{"synthesis", {{"seeed", 3}}}}) == "synthesis.seeed");
  CHECK(error_key({{"schema_version", 2}}) == "schema_version");
  CHECK(error_key({{"element", {{"hpbw_az_deg", 0.0}}}}) == "element.hpbw_az_deg");
  CHECK(error_key({{"synthesis", {{"restarts", 0}}}}) == "synthesis.restarts");
  CHECK(error_key({{"synthesis", {{"cost_weights", {{"pattern", 0.0}, {"taper", 0.0}}}}}}) ==
        "synthesis.cost_weights");
  CHECK(error_key({{"array", {{"kind", "URA"}, {"n_rows", 5}}}}) == "array.n_rows");
  CHECK(error_key({{"synthesis", {{"method", "spbf"}, {"taper_mode", "phase-only"}}}}) ==
        "synthesis.taper_mode");
  CHECK(error_key({{"synthesis", {{"method", "ura"}}}}) == "synthesis.method");
  CHECK(error_key({{"target", {{"shape", "tabulated"}, {"samples_db", {0.0, -1.0}}}}}) ==
        "target.samples_db");
  CHECK(error_key({{"output", {{"format", "xml"}}}}) == "output.format");
}

TEST_CASE("config echo reproduces the effective configuration") {
  const auto cfg = parse_config({{"synthesis", {{"seed", 11}}}});
  const json echo = config_to_json(cfg);
  CHECK(echo["synthesis"]["seed"] == 11);
  CHECK(echo["synthesis"]["restarts"] == 20);
  CHECK(echo["array"]["n_cols"] == 4);
  CHECK(echo["target"]["hpbw_deg"] == 65.0);
  CHECK(echo["grid"]["step_deg"] == 1.0);
  // Feeding the echo back in is a fixed point.
  CHECK(config_to_json(parse_config(echo)) == echo);
}

TEST_CASE("weights files round-trip exactly") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> dim(1, 7);
  for (int trial = 0; trial < 200; ++trial) {
    WeightsFile wf;
    if (trial % 2 == 0) {
      const auto n = static_cast<std::size_t>(dim(rng));
      wf.array = ArrayGeometry::ula(n, 0.5);
      wf.weights = random_ula(rng, n);
    } else {
      const auto m = static_cast<std::size_t>(dim(rng));
      const auto n = static_cast<std::size_t>(dim(rng));
      wf.array = ArrayGeometry::ura(m, n, 0.7, 0.5);
      wf.weights = random_ura(rng, m, n);
    }
    wf.element = ElementPattern(65.0 + trial * 0.1, 90.0);
    const json text = json::parse(weights_to_json(wf).dump());
    const WeightsFile back = weights_from_json(text);
    CHECK(back.array == wf.array);
    CHECK(back.weights == wf.weights);
    CHECK(back.element.hpbw_az_deg() == wf.element.hpbw_az_deg());
  }

  const json good = weights_to_json(ula4(dpbf_reference()));
  json bad = good;
  bad["polarization_a"].erase(0);
  CHECK_THROWS_AS(weights_from_json(bad), ConfigError);
  bad = good;
  bad["shape"] = {1, 5};
  CHECK_THROWS_AS(weights_from_json(bad), ConfigError);
  CHECK_THROWS_AS(weights_from_json(weights_to_json(ula4(DualPolWeights::zeros(ArrayKind::ULA, 1, 4)))),
                  ConfigError);
}

TEST_CASE("pattern table") {
  const auto grid = AngularGrid::azimuth_cut();
  const auto rows = pattern_table(ula4(dpbf_reference()), grid);
  REQUIRE(rows.size() == grid.size());

  std::vector<double> lin(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) lin[i] = std::pow(10.0, rows[i].p_total_db / 10.0);
  CHECK(integrate(lin, grid) == doctest::Approx(2.0 * kPi).epsilon(1e-6));  // dB rounding aside

  std::ostringstream csv;
  write_pattern_csv(csv, rows);
  const auto cells = csv_rows(csv.str());
  REQUIRE(cells.size() == rows.size() + 1);
  CHECK(csv.str().rfind("theta_deg,phi_deg,p_total_db,p_a_db,p_b_db,axis_ratio,tilt_deg,linear_flag\n", 0) == 0);
  for (std::size_t i = 1; i < cells.size(); ++i) CHECK(cells[i].size() == 8);
}

TEST_CASE("cli synthesize") {
  ScratchDir dir("synth");
  spit(dir / "cfg.json", ula4_config(dir / "run1").dump(2));

  const auto r1 = run_cli({"synthesize", "--config", (dir / "cfg.json").string()});
  REQUIRE_MESSAGE(r1.code == cli::kExitOk, r1.err);
  const json metrics = json::parse(slurp(dir / "run1" / "metrics.json"));
  CHECK(metrics["weighting_loss_db"].get<double>() == 0.0);
  CHECK(metrics["cost2"].get<double>() == 0.0);
  CHECK(metrics["max_parallelity"].get<double>() < 1e-12);
  CHECK(metrics["max_power_mismatch"].get<double>() < 1e-12);
  CHECK(metrics["seed"] == 7);
  CHECK(metrics["config"]["synthesis"]["tolerance"].is_number());
  CHECK(std::abs(metrics["measured_hpbw_deg"].get<double>() - 65.0) <= 5.0);
  CHECK(fs::exists(dir / "run1" / "weights.json"));
  CHECK(fs::exists(dir / "run1" / "pattern.csv"));

  SUBCASE("same config and seed give byte-identical files") {
    const std::string weights = slurp(dir / "run1" / "weights.json");
    const std::string csv = slurp(dir / "run1" / "pattern.csv");
    const std::string metrics_text = slurp(dir / "run1" / "metrics.json");
    fs::remove_all(dir / "run1");
    REQUIRE(run_cli({"synthesize", "--config", (dir / "cfg.json").string()}).code == cli::kExitOk);
    CHECK(slurp(dir / "run1" / "weights.json") == weights);
    CHECK(slurp(dir / "run1" / "pattern.csv") == csv);
    CHECK(slurp(dir / "run1" / "metrics.json") == metrics_text);
  }
  SUBCASE("seed override changes the run") {
    const auto r2 = run_cli({"synthesize", "--config", (dir / "cfg.json").string(), "--seed", "8",
                             "--out", (dir / "run3").string(), "--format", "json"});
    REQUIRE(r2.code == cli::kExitOk);
    CHECK(json::parse(slurp(dir / "run3" / "metrics.json"))["seed"] == 8);
    CHECK(fs::exists(dir / "run3" / "pattern.json"));
  }
  SUBCASE("input errors exit 2 and name the key") {
    json cfg = ula4_config(dir / "bad");
    cfg["array"]["n_cols"] = 0;
    spit(dir / "bad.json", cfg.dump());
    const auto r = run_cli({"synthesize", "--config", (dir / "bad.json").string()});
    CHECK(r.code == cli::kExitInput);
    CHECK(r.err.find("array.n_cols") != std::string::npos);

    CHECK(run_cli({"synthesize", "--config", (dir / "missing.json").string()}).code == cli::kExitInput);
    CHECK(run_cli({"synthesize"}).code == cli::kExitInput);
    CHECK(run_cli({"frobnicate"}).code == cli::kExitInput);
    CHECK(run_cli({}).code == cli::kExitInput);
  }
}

TEST_CASE("cli companion") {
  ScratchDir dir("companion");
  write_weights(dir / "w1.json", ula4(dpbf_reference()));
  const auto r = run_cli({"companion", (dir / "w1.json").string(), (dir / "w2.json").string()});
  REQUIRE_MESSAGE(r.code == cli::kExitOk, r.err);
  const json m = json::parse(r.out);
  CHECK(m["max_parallelity"].get<double>() < 1e-12);
  CHECK(read_weights(dir / "w2.json").weights == companion_ula(dpbf_reference()));

  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 5; ++trial) {
    const WeightsFile wf{ArrayGeometry::ura(2 + trial % 3, 3 + trial % 2, 0.7, 0.5),
                         ElementPattern(70.0, 80.0), {}};
    WeightsFile filled = wf;
    filled.weights = random_ura(rng, wf.array.rows(), wf.array.cols());
    write_weights(dir / "u1.json", filled);
    const auto ru = run_cli({"companion", (dir / "u1.json").string(), (dir / "u2.json").string(),
                             "--grid-step-deg", "3"});
    REQUIRE(ru.code == cli::kExitOk);
    CHECK(json::parse(ru.out)["max_power_mismatch"].get<double>() < 1e-12);
  }

  spit(dir / "empty.json", "");
  const auto bad = run_cli({"companion", (dir / "empty.json").string(), (dir / "x.json").string()});
  CHECK(bad.code == cli::kExitInput);
  CHECK_FALSE(bad.err.empty());
}

TEST_CASE("cli pattern") {
  ScratchDir dir("pattern");

  SUBCASE("SPBF reference beamwidth from the CSV") {
    write_weights(dir / "spbf.json", ula4(spbf_reference()));
    const auto r = run_cli({"pattern", (dir / "spbf.json").string(), "--grid-step-deg", "0.25"});
    REQUIRE(r.code == cli::kExitOk);
    const auto cells = csv_rows(r.out);
    std::vector<double> phi;
    std::vector<double> lin;
    for (std::size_t i = 1; i < cells.size(); ++i) {
      phi.push_back(deg_to_rad(std::stod(cells[i][1])));
      lin.push_back(std::pow(10.0, std::stod(cells[i][2]) / 10.0));
    }
    const AngularGrid grid({0.0}, phi);
    // The CSV keeps 6 decimals in dB; the crossing still lands within a few millidegrees.
    CHECK(std::abs(measure_hpbw(lin, grid) - frozen::kSpbfHpbwDeg) < 0.05);
  }
  SUBCASE("single element keeps a fixed polarization") {
    write_weights(dir / "one.json", WeightsFile{ArrayGeometry::ula(1, 0.5), ElementPattern::symmetric(90.0),
                                                DualPolWeights::ula({cplx(0.8, 0.1)}, {cplx(-0.3, 0.4)})});
    const auto r = run_cli({"pattern", (dir / "one.json").string(), "--grid-step-deg", "5"});
    REQUIRE(r.code == cli::kExitOk);
    const auto cells = csv_rows(r.out);
    const double diff0 = std::stod(cells[1][3]) - std::stod(cells[1][4]);
    for (std::size_t i = 1; i < cells.size(); ++i) {
      CHECK(std::stod(cells[i][3]) - std::stod(cells[i][4]) == doctest::Approx(diff0).epsilon(1e-5));
    }
  }
  SUBCASE("DPBF weights are nearly single-polarized near +-15 degrees") {
    write_weights(dir / "dpbf.json", ula4(dpbf_reference()));
    const auto r = run_cli({"pattern", (dir / "dpbf.json").string(), "--format", "json"});
    REQUIRE(r.code == cli::kExitOk);
    const json cols = json::parse(r.out)["columns"];
    double best_minus = 0.0;
    double best_plus = 0.0;
    for (std::size_t i = 0; i < cols["phi_deg"].size(); ++i) {
      const double phi = cols["phi_deg"][i].get<double>();
      const double dominance = std::abs(cols["p_a_db"][i].get<double>() - cols["p_b_db"][i].get<double>());
      if (phi >= -25.0 && phi <= -5.0) best_minus = std::max(best_minus, dominance);
      if (phi >= 5.0 && phi <= 25.0) best_plus = std::max(best_plus, dominance);
    }
    CHECK(best_minus > 15.0);
    CHECK(best_plus > 15.0);
  }
  SUBCASE("output directory and bad shape") {
    write_weights(dir / "dpbf.json", ula4(dpbf_reference()));
    REQUIRE(run_cli({"pattern", (dir / "dpbf.json").string(), "--out", (dir / "p").string()}).code == 0);
    CHECK(fs::exists(dir / "p" / "pattern.csv"));
    json j = weights_to_json(ula4(dpbf_reference()));
    j["shape"] = {1, 3};
    spit(dir / "mismatch.json", j.dump());
    CHECK(run_cli({"pattern", (dir / "mismatch.json").string()}).code == cli::kExitInput);
  }
}

TEST_CASE("cli verify") {
  ScratchDir dir("verify");
  write_weights(dir / "w1.json", ula4(dpbf_reference()));
  write_weights(dir / "w2.json", ula4(companion_ula(dpbf_reference())));

  const auto ok = run_cli({"verify", (dir / "w1.json").string(), (dir / "w2.json").string()});
  CHECK(ok.code == cli::kExitOk);
  const json report = json::parse(ok.out);
  CHECK(report["pass"] == true);
  CHECK(report["weighting_loss_db"].get<double>() == 0.0);

  CHECK(run_cli({"verify", (dir / "w1.json").string()}).code == cli::kExitOk);

  auto perturbed = companion_ula(dpbf_reference());
  std::vector<cplx> a(perturbed.a().begin(), perturbed.a().end());
  a[0] += 1e-3;
  write_weights(dir / "w2bad.json", ula4(DualPolWeights::ula(a, {perturbed.b().begin(), perturbed.b().end()})));
  const auto bad = run_cli({"verify", (dir / "w1.json").string(), (dir / "w2bad.json").string(),
                            "--out", (dir / "report").string()});
  CHECK(bad.code == cli::kExitInvariant);
  const json bad_report = json::parse(slurp(dir / "report" / "metrics.json"));
  CHECK(bad_report["pass"] == false);
  CHECK(bad_report["max_parallelity"].get<double>() > 1e-6);
  CHECK(bad_report["max_parallelity"].get<double>() ==
        doctest::Approx(frozen::kPerturbedParallelityRel).epsilon(1e-6));

  write_weights(dir / "spbf.json", ula4(spbf_reference()));
  const json spbf = json::parse(run_cli({"verify", (dir / "spbf.json").string()}).out);
  CHECK(spbf["weighting_loss_db"].get<double>() == doctest::Approx(frozen::kSpbfWeightingLossDb).epsilon(1e-12));
}
