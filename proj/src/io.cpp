// SPDX-License-Identifier: Apache-2.0

#include "dpbf/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <ostream>
#include <sstream>

namespace dpbf {

using nlohmann::json;

namespace {

std::string join(const std::string& prefix, const std::string& key) {
  return prefix.empty() ? key : prefix + "." + key;
}

void reject_unknown(const json& obj, const std::string& path,
                    std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ConfigError(path.empty() ? "<root>" : path, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    const bool known = std::any_of(allowed.begin(), allowed.end(),
                                   [&](const char* k) { return key == k; });
    if (!known) throw ConfigError(join(path, key), "unknown key");
  }
}

const json* find(const json& obj, const char* key) {
  const auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

double get_number(const json& obj, const std::string& path, const char* key, double fallback) {
  const json* v = find(obj, key);
  if (!v) return fallback;
  if (!v->is_number()) throw ConfigError(join(path, key), "expected a number");
  const double x = v->get<double>();
  if (!std::isfinite(x)) throw ConfigError(join(path, key), "must be finite");
  return x;
}

std::int64_t get_int(const json& obj, const std::string& path, const char* key,
                     std::int64_t fallback) {
  const json* v = find(obj, key);
  if (!v) return fallback;
  if (!v->is_number_integer()) throw ConfigError(join(path, key), "expected an integer");
  return v->get<std::int64_t>();
}

bool get_bool(const json& obj, const std::string& path, const char* key, bool fallback) {
  const json* v = find(obj, key);
  if (!v) return fallback;
  if (!v->is_boolean()) throw ConfigError(join(path, key), "expected true or false");
  return v->get<bool>();
}

std::string get_string(const json& obj, const std::string& path, const char* key,
                       std::string fallback) {
  const json* v = find(obj, key);
  if (!v) return fallback;
  if (!v->is_string()) throw ConfigError(join(path, key), "expected a string");
  return v->get<std::string>();
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

const char* method_name(Method m) {
  switch (m) {
    case Method::Spbf: return "spbf";
    case Method::Dpbf: return "dpbf";
    case Method::Ura: return "ura";
  }
  return "dpbf";
}

const char* cut_name(GridCut c) {
  switch (c) {
    case GridCut::Azimuth: return "azimuth";
    case GridCut::Elevation: return "elevation";
    case GridCut::Full: return "full";
  }
  return "azimuth";
}

const char* taper_name(TaperMode t) {
  return t == TaperMode::PhaseOnly ? "phase-only" : "amplitude-and-phase";
}

const char* ura_mode_name(UraMode m) {
  return m == UraMode::DpbfBoth ? "dpbf-both" : "spbf-elevation";
}

void check_schema(const json& j, const std::string& path) {
  const auto v = get_int(j, path, "schema_version", kSchemaVersion);
  if (v != kSchemaVersion) {
    throw ConfigError(join(path, "schema_version"),
                      "unsupported version " + std::to_string(v) + " (expected " +
                          std::to_string(kSchemaVersion) + ")");
  }
}

struct ArrayFields {
  ArrayGeometry geom = ArrayGeometry::ula(1, 0.5);
  double row_spacing = 0.7;
};

ArrayFields parse_array(const json& a, const std::string& path) {
  reject_unknown(a, path, {"kind", "n_cols", "n_rows", "col_spacing_wl", "row_spacing_wl"});
  const std::string kind = lower(get_string(a, path, "kind", "ula"));
  if (kind != "ula" && kind != "ura") throw ConfigError(join(path, "kind"), "expected ULA or URA");
  const bool ura = kind == "ura";

  const auto n_cols = get_int(a, path, "n_cols", 4);
  if (n_cols < 1) throw ConfigError(join(path, "n_cols"), "must be >= 1");
  const auto n_rows = get_int(a, path, "n_rows", ura ? 6 : 1);
  if (n_rows < 1) throw ConfigError(join(path, "n_rows"), "must be >= 1");
  if (!ura && n_rows != 1) throw ConfigError(join(path, "n_rows"), "a ULA has exactly one row");
  const double dh = get_number(a, path, "col_spacing_wl", 0.5);
  if (!(dh > 0.0)) throw ConfigError(join(path, "col_spacing_wl"), "must be > 0");
  const double dv = get_number(a, path, "row_spacing_wl", 0.7);
  if (!(dv > 0.0)) throw ConfigError(join(path, "row_spacing_wl"), "must be > 0");

  ArrayFields out;
  out.row_spacing = dv;
  out.geom = ura ? ArrayGeometry::ura(static_cast<std::size_t>(n_rows),
                                      static_cast<std::size_t>(n_cols), dv, dh)
                 : ArrayGeometry::ula(static_cast<std::size_t>(n_cols), dh);
  return out;
}

ElementPattern parse_element(const json& e, const std::string& path) {
  reject_unknown(e, path, {"hpbw_az_deg", "hpbw_el_deg"});
  const double az = get_number(e, path, "hpbw_az_deg", 90.0);
  const double el = get_number(e, path, "hpbw_el_deg", 90.0);
  if (!(az > 0.0 && az <= 180.0)) throw ConfigError(join(path, "hpbw_az_deg"), "must lie in (0, 180]");
  if (!(el > 0.0 && el <= 180.0)) throw ConfigError(join(path, "hpbw_el_deg"), "must lie in (0, 180]");
  return {az, el};
}

json array_to_json(const ArrayGeometry& g, double row_spacing) {
  return {{"kind", g.kind() == ArrayKind::ULA ? "ULA" : "URA"},
          {"n_cols", g.cols()},
          {"n_rows", g.rows()},
          {"col_spacing_wl", g.col_spacing_wl()},
          {"row_spacing_wl", g.kind() == ArrayKind::URA ? g.row_spacing_wl() : row_spacing}};
}

json element_to_json(const ElementPattern& e) {
  return {{"hpbw_az_deg", e.hpbw_az_deg()}, {"hpbw_el_deg", e.hpbw_el_deg()}};
}

json complex_list(const DualPolWeights& w, bool pol_a) {
  auto entry = [&](std::size_t m, std::size_t n) {
    const cplx v = pol_a ? w.a(m, n) : w.b(m, n);
    return json::array({v.real(), v.imag()});
  };
  json out = json::array();
  if (w.kind() == ArrayKind::ULA) {
    for (std::size_t n = 0; n < w.cols(); ++n) out.push_back(entry(0, n));
    return out;
  }
  for (std::size_t m = 0; m < w.rows(); ++m) {
    json row = json::array();
    for (std::size_t n = 0; n < w.cols(); ++n) row.push_back(entry(m, n));
    out.push_back(std::move(row));
  }
  return out;
}

cplx parse_complex(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    throw ConfigError(path, "expected a [re, im] pair");
  }
  return {v[0].get<double>(), v[1].get<double>()};
}

std::vector<cplx> parse_pol(const json& j, const std::string& path, const ArrayGeometry& g) {
  if (!j.is_array()) throw ConfigError(path, "expected an array");
  std::vector<cplx> out(g.size());
  if (g.kind() == ArrayKind::ULA) {
    if (j.size() != g.cols()) {
      throw ConfigError(path, "has " + std::to_string(j.size()) + " entries for " +
                                  std::to_string(g.cols()) + " columns");
    }
    for (std::size_t n = 0; n < g.cols(); ++n) {
      out[n] = parse_complex(j[n], path + "[" + std::to_string(n) + "]");
    }
    return out;
  }
  if (j.size() != g.rows()) {
    throw ConfigError(path, "has " + std::to_string(j.size()) + " rows for " +
                                std::to_string(g.rows()) + " array rows");
  }
  for (std::size_t m = 0; m < g.rows(); ++m) {
    const auto row_path = path + "[" + std::to_string(m) + "]";
    if (!j[m].is_array() || j[m].size() != g.cols()) {
      throw ConfigError(row_path, "expected " + std::to_string(g.cols()) + " entries");
    }
    for (std::size_t n = 0; n < g.cols(); ++n) {
      out[g.index(m, n)] = parse_complex(j[m][n], row_path + "[" + std::to_string(n) + "]");
    }
  }
  return out;
}

std::string fixed(double v, int digits) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  // Avoid "-0.000000" so mirrored rows print identically.
  std::string s(buf);
  if (s.find_first_not_of("-0.") == std::string::npos && s.front() == '-') s.erase(0, 1);
  return s;
}

std::string general(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

json null_if_nan(double v) { return std::isnan(v) ? json(nullptr) : json(v); }

}  // namespace

AngularGrid GridSpec::build() const {
  switch (cut) {
    case GridCut::Azimuth: return AngularGrid::azimuth_cut(step_deg, phi_min_deg, phi_max_deg);
    case GridCut::Elevation:
      return AngularGrid::elevation_cut(step_deg, theta_min_deg, theta_max_deg);
    case GridCut::Full:
      return {AngularGrid::elevation_cut(step_deg, theta_min_deg, theta_max_deg).thetas(),
              AngularGrid::azimuth_cut(step_deg, phi_min_deg, phi_max_deg).phis()};
  }
  throw std::logic_error("unhandled grid cut");
}

RunConfig parse_config(const json& j) {
  reject_unknown(j, "", {"schema_version", "array", "element", "target", "synthesis", "grid", "output"});
  check_schema(j, "");
  RunConfig cfg;

  const json empty = json::object();
  auto section = [&](const char* key) -> const json& {
    const json* v = find(j, key);
    return v ? *v : empty;
  };

  const auto arr = parse_array(section("array"), "array");
  cfg.array = arr.geom;
  cfg.row_spacing_wl = arr.row_spacing;
  cfg.element = parse_element(section("element"), "element");
  const bool ura = cfg.array.kind() == ArrayKind::URA;

  // Synthesis first: the method decides defaults elsewhere.
  const json& s = section("synthesis");
  reject_unknown(s, "synthesis", {"method", "ura_mode", "taper_mode", "conjugate_pair",
                                  "cost_window_db", "cost_weights", "restarts", "max_evals", "seed",
                                  "tolerance", "db_floor_db"});
  const std::string method = lower(get_string(s, "synthesis", "method", ura ? "ura" : "dpbf"));
  if (method == "spbf") {
    cfg.method = Method::Spbf;
  } else if (method == "dpbf") {
    cfg.method = Method::Dpbf;
  } else if (method == "ura") {
    cfg.method = Method::Ura;
  } else {
    throw ConfigError("synthesis.method", "expected spbf, dpbf or ura");
  }
  if (ura != (cfg.method == Method::Ura)) {
    throw ConfigError("synthesis.method", std::string("method ") + method_name(cfg.method) +
                                              " does not fit a " + (ura ? "URA" : "ULA"));
  }
  const std::string ura_mode = lower(get_string(s, "synthesis", "ura_mode", "dpbf-both"));
  if (ura_mode == "dpbf-both") {
    cfg.ura_mode = UraMode::DpbfBoth;
  } else if (ura_mode == "spbf-elevation") {
    cfg.ura_mode = UraMode::SpbfElevation;
  } else {
    throw ConfigError("synthesis.ura_mode", "expected dpbf-both or spbf-elevation");
  }
  if (ura && cfg.ura_mode == UraMode::DpbfBoth && cfg.array.rows() % 2 != 0) {
    throw ConfigError("array.n_rows", "dpbf-both needs an even row count");
  }

  auto& sc = cfg.synthesis;
  const std::string taper = lower(get_string(
      s, "synthesis", "taper_mode", cfg.method == Method::Spbf ? "amplitude-and-phase" : "phase-only"));
  if (taper == "phase-only") {
    sc.taper_mode = TaperMode::PhaseOnly;
  } else if (taper == "amplitude-and-phase") {
    sc.taper_mode = TaperMode::AmplitudeAndPhase;
  } else {
    throw ConfigError("synthesis.taper_mode", "expected phase-only or amplitude-and-phase");
  }
  if (cfg.method == Method::Spbf && sc.taper_mode != TaperMode::AmplitudeAndPhase) {
    throw ConfigError("synthesis.taper_mode", "spbf needs amplitude-and-phase");
  }
  sc.conjugate_pair = get_bool(s, "synthesis", "conjugate_pair", true);
  sc.cost_window_db = get_number(s, "synthesis", "cost_window_db", sc.cost_window_db);
  if (!(sc.cost_window_db > 0.0)) throw ConfigError("synthesis.cost_window_db", "must be > 0");
  if (const json* cw = find(s, "cost_weights")) {
    reject_unknown(*cw, "synthesis.cost_weights", {"pattern", "taper"});
    sc.cost_weights.pattern = get_number(*cw, "synthesis.cost_weights", "pattern", 1.0);
    sc.cost_weights.taper = get_number(*cw, "synthesis.cost_weights", "taper", 1.0);
    if (sc.cost_weights.pattern < 0.0) throw ConfigError("synthesis.cost_weights.pattern", "must be >= 0");
    if (sc.cost_weights.taper < 0.0) throw ConfigError("synthesis.cost_weights.taper", "must be >= 0");
    if (sc.cost_weights.pattern == 0.0 && sc.cost_weights.taper == 0.0) {
      throw ConfigError("synthesis.cost_weights", "pattern and taper must not both be 0");
    }
  }
  const auto restarts = get_int(s, "synthesis", "restarts", static_cast<std::int64_t>(sc.restarts));
  if (restarts < 1) throw ConfigError("synthesis.restarts", "must be >= 1");
  sc.restarts = static_cast<std::size_t>(restarts);
  const auto max_evals = get_int(s, "synthesis", "max_evals", static_cast<std::int64_t>(sc.max_evals));
  if (max_evals < 1) throw ConfigError("synthesis.max_evals", "must be >= 1");
  sc.max_evals = static_cast<std::size_t>(max_evals);
  const auto seed = get_int(s, "synthesis", "seed", 1);
  if (seed < 0) throw ConfigError("synthesis.seed", "must be >= 0");
  sc.seed = static_cast<std::uint64_t>(seed);
  sc.tolerance = get_number(s, "synthesis", "tolerance", sc.tolerance);
  if (sc.tolerance < 0.0) throw ConfigError("synthesis.tolerance", "must be >= 0");
  sc.db_floor = get_number(s, "synthesis", "db_floor_db", sc.db_floor);

  const json& g = section("grid");
  reject_unknown(g, "grid", {"cut", "step_deg", "phi_min_deg", "phi_max_deg", "theta_min_deg",
                             "theta_max_deg"});
  const std::string cut = lower(get_string(g, "grid", "cut", ura ? "full" : "azimuth"));
  if (cut == "azimuth") {
    cfg.grid.cut = GridCut::Azimuth;
  } else if (cut == "elevation") {
    cfg.grid.cut = GridCut::Elevation;
  } else if (cut == "full") {
    cfg.grid.cut = GridCut::Full;
  } else {
    throw ConfigError("grid.cut", "expected azimuth, elevation or full");
  }
  if (!ura && cfg.grid.cut != GridCut::Azimuth) {
    throw ConfigError("grid.cut", "ULA synthesis runs on an azimuth cut");
  }
  cfg.grid.step_deg = get_number(g, "grid", "step_deg", 1.0);
  if (!(cfg.grid.step_deg > 0.0)) throw ConfigError("grid.step_deg", "must be > 0");
  cfg.grid.phi_min_deg = get_number(g, "grid", "phi_min_deg", -90.0);
  cfg.grid.phi_max_deg = get_number(g, "grid", "phi_max_deg", 90.0);
  cfg.grid.theta_min_deg = get_number(g, "grid", "theta_min_deg", -90.0);
  cfg.grid.theta_max_deg = get_number(g, "grid", "theta_max_deg", 90.0);
  if (cfg.grid.phi_min_deg < -180.0 || cfg.grid.phi_max_deg > 180.0 ||
      !(cfg.grid.phi_max_deg > cfg.grid.phi_min_deg)) {
    throw ConfigError("grid.phi_max_deg", "phi range must be increasing within [-180, 180]");
  }
  if (cfg.grid.theta_min_deg < -90.0 || cfg.grid.theta_max_deg > 90.0 ||
      !(cfg.grid.theta_max_deg > cfg.grid.theta_min_deg)) {
    throw ConfigError("grid.theta_max_deg", "theta range must be increasing within [-90, 90]");
  }

  const json& t = section("target");
  reject_unknown(t, "target", {"shape", "hpbw_deg", "hpbw_el_deg", "samples_db"});
  const std::string shape = lower(get_string(t, "target", "shape", "gaussian"));
  if (shape == "gaussian") {
    const double hpbw = get_number(t, "target", "hpbw_deg", 65.0);
    if (!(hpbw > 0.0 && hpbw <= 180.0)) throw ConfigError("target.hpbw_deg", "must lie in (0, 180]");
    cfg.target = TargetPattern::gaussian(hpbw);
  } else if (shape == "tabulated") {
    const json* samples = find(t, "samples_db");
    if (!samples || !samples->is_array() || samples->empty()) {
      throw ConfigError("target.samples_db", "tabulated target needs a nonempty list");
    }
    std::vector<double> db;
    for (const auto& v : *samples) {
      if (!v.is_number()) throw ConfigError("target.samples_db", "expected numbers");
      db.push_back(v.get<double>());
    }
    if (db.size() != cfg.grid.build().size()) {
      throw ConfigError("target.samples_db", "needs one value per grid point (" +
                                                 std::to_string(cfg.grid.build().size()) + ")");
    }
    if (cfg.method == Method::Ura) throw ConfigError("target.shape", "URA synthesis needs a gaussian target");
    cfg.target = TargetPattern::tabulated(std::move(db));
  } else {
    throw ConfigError("target.shape", "expected gaussian or tabulated");
  }
  cfg.target_el_hpbw_deg = get_number(t, "target", "hpbw_el_deg", cfg.target_el_hpbw_deg);
  if (!(cfg.target_el_hpbw_deg > 0.0 && cfg.target_el_hpbw_deg <= 180.0)) {
    throw ConfigError("target.hpbw_el_deg", "must lie in (0, 180]");
  }

  const json& o = section("output");
  reject_unknown(o, "output", {"dir", "format"});
  cfg.output.dir = get_string(o, "output", "dir", cfg.output.dir);
  cfg.output.format = lower(get_string(o, "output", "format", cfg.output.format));
  if (cfg.output.format != "csv" && cfg.output.format != "json") {
    throw ConfigError("output.format", "expected csv or json");
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<file>", "cannot open config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("<file>", std::string("malformed JSON: ") + e.what());
  }
  return parse_config(j);
}

json config_to_json(const RunConfig& cfg) {
  const auto& s = cfg.synthesis;
  json target = {{"shape", cfg.target.shape == TargetPattern::Shape::Gaussian ? "gaussian" : "tabulated"},
                 {"hpbw_el_deg", cfg.target_el_hpbw_deg}};
  if (cfg.target.shape == TargetPattern::Shape::Gaussian) {
    target["hpbw_deg"] = cfg.target.hpbw_deg;
  } else {
    target["samples_db"] = cfg.target.samples_db;
  }
  return {
      {"schema_version", kSchemaVersion},
      {"array", array_to_json(cfg.array, cfg.row_spacing_wl)},
      {"element", element_to_json(cfg.element)},
      {"target", target},
      {"synthesis",
       {{"method", method_name(cfg.method)},
        {"ura_mode", ura_mode_name(cfg.ura_mode)},
        {"taper_mode", taper_name(s.taper_mode)},
        {"conjugate_pair", s.conjugate_pair},
        {"cost_window_db", s.cost_window_db},
        {"cost_weights", {{"pattern", s.cost_weights.pattern}, {"taper", s.cost_weights.taper}}},
        {"restarts", s.restarts},
        {"max_evals", s.max_evals},
        {"seed", s.seed},
        {"tolerance", s.tolerance},
        {"db_floor_db", s.db_floor}}},
      {"grid",
       {{"cut", cut_name(cfg.grid.cut)},
        {"step_deg", cfg.grid.step_deg},
        {"phi_min_deg", cfg.grid.phi_min_deg},
        {"phi_max_deg", cfg.grid.phi_max_deg},
        {"theta_min_deg", cfg.grid.theta_min_deg},
        {"theta_max_deg", cfg.grid.theta_max_deg}}},
      {"output", {{"dir", cfg.output.dir}, {"format", cfg.output.format}}},
  };
}

json weights_to_json(const WeightsFile& wf) {
  wf.weights.check_matches(wf.array);
  return {{"schema_version", kSchemaVersion},
          {"type", "dpbf-weights"},
          {"array", array_to_json(wf.array, wf.array.row_spacing_wl())},
          {"element", element_to_json(wf.element)},
          {"shape", {wf.weights.rows(), wf.weights.cols()}},
          {"polarization_a", complex_list(wf.weights, true)},
          {"polarization_b", complex_list(wf.weights, false)}};
}

WeightsFile weights_from_json(const json& j) {
  reject_unknown(j, "", {"schema_version", "type", "array", "element", "shape", "polarization_a",
                         "polarization_b"});
  check_schema(j, "");
  if (get_string(j, "", "type", "") != "dpbf-weights") {
    throw ConfigError("type", "expected \"dpbf-weights\"");
  }
  for (const char* key : {"array", "element", "shape", "polarization_a", "polarization_b"}) {
    if (!find(j, key)) throw ConfigError(key, "missing");
  }
  WeightsFile wf;
  wf.array = parse_array(j["array"], "array").geom;
  wf.element = parse_element(j["element"], "element");

  const json& shape = j["shape"];
  if (!shape.is_array() || shape.size() != 2 || !shape[0].is_number_unsigned() ||
      !shape[1].is_number_unsigned()) {
    throw ConfigError("shape", "expected [rows, cols]");
  }
  if (shape[0].get<std::size_t>() != wf.array.rows() || shape[1].get<std::size_t>() != wf.array.cols()) {
    throw ConfigError("shape", "does not match the declared array geometry");
  }
  auto a = parse_pol(j["polarization_a"], "polarization_a", wf.array);
  auto b = parse_pol(j["polarization_b"], "polarization_b", wf.array);
  wf.weights = wf.array.kind() == ArrayKind::ULA
                   ? DualPolWeights::ula(std::move(a), std::move(b))
                   : DualPolWeights::ura(wf.array.rows(), wf.array.cols(), std::move(a), std::move(b));
  if (wf.weights.all_zero()) throw ConfigError("polarization_a", "weights are all zero");
  return wf;
}

void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

void write_weights(const std::filesystem::path& path, const WeightsFile& wf) {
  write_json(path, weights_to_json(wf));
}

WeightsFile read_weights(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<file>", "cannot open weights file " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("<file>", std::string("malformed weights file: ") + e.what());
  }
  return weights_from_json(j);
}

std::vector<PatternRow> pattern_table(const WeightsFile& wf, const AngularGrid& grid,
                                      double db_floor) {
  const auto field = radiate(wf.array, wf.element, wf.weights, grid);
  const auto p = normalize_total_power(power(field), grid, 2.0 * kPi);
  std::vector<PatternRow> rows(grid.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Direction d = grid.at(i);
    auto& r = rows[i];
    r.theta_deg = rad_to_deg(d.theta);
    r.phi_deg = rad_to_deg(d.phi);
    r.p_total_db = to_db(p.total[i], db_floor);
    r.p_a_db = to_db(p.a[i], db_floor);
    r.p_b_db = to_db(p.b[i], db_floor);
    if (field.e_a[i] == cplx{} && field.e_b[i] == cplx{}) {
      r.axis_ratio = std::numeric_limits<double>::quiet_NaN();
      r.tilt_deg = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    const auto e = polarization_ellipse(field.e_a[i], field.e_b[i]);
    r.axis_ratio = e.axis_ratio;
    r.tilt_deg = e.tilt_deg;
    r.linear = e.linear;
  }
  return rows;
}

void write_pattern_csv(std::ostream& os, const std::vector<PatternRow>& rows) {
  os << "theta_deg,phi_deg,p_total_db,p_a_db,p_b_db,axis_ratio,tilt_deg,linear_flag\n";
  for (const auto& r : rows) {
    os << fixed(r.theta_deg, 4) << ',' << fixed(r.phi_deg, 4) << ',' << fixed(r.p_total_db, 6) << ','
       << fixed(r.p_a_db, 6) << ',' << fixed(r.p_b_db, 6) << ',' << general(r.axis_ratio) << ','
       << fixed(r.tilt_deg, 4) << ',' << (r.linear ? 1 : 0) << '\n';
  }
}

json pattern_to_json(const std::vector<PatternRow>& rows) {
  json cols = {{"theta_deg", json::array()}, {"phi_deg", json::array()},
               {"p_total_db", json::array()}, {"p_a_db", json::array()},
               {"p_b_db", json::array()}, {"axis_ratio", json::array()},
               {"tilt_deg", json::array()}, {"linear_flag", json::array()}};
  for (const auto& r : rows) {
    cols["theta_deg"].push_back(r.theta_deg);
    cols["phi_deg"].push_back(r.phi_deg);
    cols["p_total_db"].push_back(r.p_total_db);
    cols["p_a_db"].push_back(r.p_a_db);
    cols["p_b_db"].push_back(r.p_b_db);
    cols["axis_ratio"].push_back(null_if_nan(r.axis_ratio));
    cols["tilt_deg"].push_back(null_if_nan(r.tilt_deg));
    cols["linear_flag"].push_back(r.linear ? 1 : 0);
  }
  return {{"schema_version", kSchemaVersion}, {"normalization", "total-power-2pi"}, {"columns", cols}};
}

CompanionCheck check_companion(const WeightsFile& beam1, const DualPolWeights& beam2,
                               const AngularGrid& grid) {
  const auto f1 = radiate(beam1.array, beam1.element, beam1.weights, grid);
  const auto f2 = radiate(beam1.array, beam1.element, beam2, grid);
  const auto p1 = power(f1);
  const auto p2 = power(f2);
  const auto xi = parallelity(f1, f2);
  const double peak = *std::max_element(p1.total.begin(), p1.total.end());
  CompanionCheck c;
  if (!(peak > 0.0)) throw std::invalid_argument("beam 1 radiates no power on the grid");
  for (std::size_t i = 0; i < xi.size(); ++i) {
    c.max_parallelity = std::max(c.max_parallelity, xi[i] / peak);
    c.max_power_mismatch = std::max(c.max_power_mismatch, std::abs(p2.total[i] - p1.total[i]) / peak);
  }
  return c;
}

AngularGrid verification_grid(const ArrayGeometry& geom, double step_deg) {
  return geom.kind() == ArrayKind::ULA ? AngularGrid::azimuth_cut(step_deg)
                                       : AngularGrid::front_hemisphere(step_deg);
}

}  // namespace dpbf
