#include "cavsig/run_config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace cavsig {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw std::invalid_argument("config field '" + field + "': " + what);
}

Complex parse_complex(const json& j, const std::string& field) {
  if (j.is_number()) return Complex{j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return Complex{j[0].get<double>(), j[1].get<double>()};
  }
  fail(field, "expected a number or an [re, im] pair");
}

DensityMatrix2 parse_state(const json& j, const std::string& field) {
  if (j.is_string()) {
    const std::string name = j.get<std::string>();
    if (name == "ground") return DensityMatrix2::ground();
    if (name == "excited") return DensityMatrix2::excited();
    if (name == "plus") return DensityMatrix2::plus();
    if (name == "minus") return DensityMatrix2::minus();
    fail(field, "unknown named state '" + name + "'");
  }
  if (!j.is_object()) fail(field, "expected a named state or an object");
  const double excited = j.value("excited_population", 0.0);
  const Complex coherence = j.contains("coherence")
                                ? parse_complex(j.at("coherence"), field + ".coherence")
                                : Complex{0.0, 0.0};
  try {
    return DensityMatrix2::from_entries(excited, coherence, std::conj(coherence),
                                        1.0 - excited);
  } catch (const std::invalid_argument& e) {
    fail(field, e.what());
  }
}

void parse_detector(const json& j, const std::string& field, DetectorParams& out) {
  if (!j.is_object()) fail(field, "expected an object");
  if (j.contains("position")) out.position = j.at("position").get<double>();
  if (j.contains("resonance_mode")) out.resonance_mode = j.at("resonance_mode").get<int>();
  if (j.contains("coupling")) out.coupling = j.at("coupling").get<double>();
}

std::vector<int> parse_cutoff_grid(const json& j, const std::string& field) {
  std::vector<int> grid;
  if (j.is_array()) {
    for (const auto& v : j) grid.push_back(v.get<int>());
  } else if (j.is_object()) {
    const int from = j.at("from").get<int>();
    const int to = j.at("to").get<int>();
    const int step = j.value("step", 1);
    if (step < 1) fail(field, "step must be >= 1");
    for (int n = from; n <= to; n += step) grid.push_back(n);
  } else {
    fail(field, "expected a list or {from, to, step}");
  }
  return grid;
}

std::vector<double> parse_time_grid(const json& j, const std::string& field) {
  std::vector<double> grid;
  if (j.is_array()) {
    for (const auto& v : j) grid.push_back(v.get<double>());
  } else if (j.is_object()) {
    const double from = j.at("from").get<double>();
    const double to = j.at("to").get<double>();
    const int points = j.at("points").get<int>();
    if (points < 1) fail(field, "points must be >= 1");
    for (int i = 0; i < points; ++i) {
      grid.push_back(points == 1 ? from : from + (to - from) * i / (points - 1));
    }
  } else {
    fail(field, "expected a list or {from, to, points}");
  }
  return grid;
}

int line_of_offset(const std::string& text, std::size_t byte) {
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + std::min(byte, text.size()),
                                         '\n'));
}

}  // namespace

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();

  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("config: parse error at line " +
                                std::to_string(line_of_offset(text, e.byte)) + ": " + e.what());
  }

  RunConfig cfg;
  try {
    if (j.contains("cavity")) {
      const json& c = j.at("cavity");
      if (c.contains("length")) cfg.cavity.length = c.at("length").get<double>();
      if (c.contains("cutoff")) cfg.cavity.cutoff = c.at("cutoff").get<int>();
    }
    if (j.contains("detector_a")) parse_detector(j.at("detector_a"), "detector_a", cfg.detector_a);
    if (j.contains("detector_b")) parse_detector(j.at("detector_b"), "detector_b", cfg.detector_b);
    if (j.contains("switching_time")) cfg.switching_time = j.at("switching_time").get<double>();
    if (j.contains("coefficient")) {
      const std::string name = j.at("coefficient").get<std::string>();
      const auto parsed = parse_coefficient(name);
      if (!parsed) fail("coefficient", "unknown selector '" + name + "'");
      cfg.coefficient = *parsed;
    }
    if (j.contains("fourth_order")) cfg.fourth_order = j.at("fourth_order").get<bool>();
    if (j.contains("kind")) cfg.kind = j.at("kind").get<std::string>();
    if (j.contains("cutoff_grid")) {
      cfg.cutoff_grid = parse_cutoff_grid(j.at("cutoff_grid"), "cutoff_grid");
    }
    if (j.contains("time_grid")) cfg.time_grid = parse_time_grid(j.at("time_grid"), "time_grid");
    if (j.contains("fit_window")) {
      const json& w = j.at("fit_window");
      if (!w.is_array() || w.size() != 2) fail("fit_window", "expected [min, max]");
      cfg.fit_window = {w[0].get<double>(), w[1].get<double>()};
    }
    if (j.contains("normalize_reference")) {
      cfg.normalize_reference = j.at("normalize_reference").get<double>();
    }
    if (j.contains("input_state_a")) {
      cfg.input_state_a = parse_state(j.at("input_state_a"), "input_state_a");
    }
    if (j.contains("measurement_time")) {
      cfg.measurement_time = j.at("measurement_time").get<double>();
    }
    if (j.contains("oracle")) {
      const json& o = j.at("oracle");
      if (o.contains("modes")) cfg.oracle.modes = o.at("modes").get<int>();
      if (o.contains("photon_cap")) cfg.oracle.photon_cap = o.at("photon_cap").get<int>();
      if (o.contains("steps")) cfg.oracle.steps = o.at("steps").get<int>();
      if (o.contains("nodes_2d")) cfg.oracle.nodes_2d = o.at("nodes_2d").get<int>();
      if (o.contains("nodes_4d")) cfg.oracle.nodes_4d = o.at("nodes_4d").get<int>();
      if (o.contains("tolerance_scale")) {
        cfg.oracle.tolerance_scale = o.at("tolerance_scale").get<double>();
      }
    }
    if (j.contains("output")) cfg.output = j.at("output").get<std::string>();
    if (j.contains("svg")) cfg.svg = j.at("svg").get<bool>();
    if (j.contains("threads")) cfg.threads = j.at("threads").get<int>();
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  return cfg;
}

std::string echo_config(const RunConfig& cfg) {
  json j;
  j["cavity"] = {{"length", cfg.cavity.length}, {"cutoff", cfg.cavity.cutoff}};
  j["detector_a"] = {{"position", cfg.detector_a.position},
                     {"resonance_mode", cfg.detector_a.resonance_mode},
                     {"coupling", cfg.detector_a.coupling}};
  j["detector_b"] = {{"position", cfg.detector_b.position},
                     {"resonance_mode", cfg.detector_b.resonance_mode},
                     {"coupling", cfg.detector_b.coupling}};
  j["switching_time"] = cfg.switching_time;
  j["coefficient"] = std::string(to_string(cfg.coefficient));
  j["fourth_order"] = cfg.fourth_order;
  j["kind"] = cfg.kind;
  if (!cfg.cutoff_grid.empty()) j["cutoff_grid"] = cfg.cutoff_grid;
  if (!cfg.time_grid.empty()) j["time_grid"] = cfg.time_grid;
  if (cfg.fit_window[0] != 0.0 || cfg.fit_window[1] != 0.0) {
    j["fit_window"] = cfg.fit_window;
  }
  if (cfg.normalize_reference) j["normalize_reference"] = *cfg.normalize_reference;
  j["input_state_a"] = {
      {"excited_population", cfg.input_state_a.excited_population()},
      {"coherence", {cfg.input_state_a.coherence().real(), cfg.input_state_a.coherence().imag()}}};
  if (cfg.measurement_time) j["measurement_time"] = *cfg.measurement_time;
  j["oracle"] = {{"modes", cfg.oracle.modes},
                 {"photon_cap", cfg.oracle.photon_cap},
                 {"steps", cfg.oracle.steps},
                 {"nodes_2d", cfg.oracle.nodes_2d},
                 {"nodes_4d", cfg.oracle.nodes_4d},
                 {"tolerance_scale", cfg.oracle.tolerance_scale}};
  j["threads"] = cfg.threads;
  return j.dump();
}

void validate(const RunConfig& cfg) {
  validate(cfg.cavity, cfg.detector_a);
  validate(cfg.cavity, cfg.detector_b);
  validate_switching_time(cfg.switching_time);
  if (cfg.kind != "cutoff" && cfg.kind != "time") {
    throw std::invalid_argument("config field 'kind': must be 'cutoff' or 'time'");
  }
  for (std::size_t i = 0; i < cfg.cutoff_grid.size(); ++i) {
    if (cfg.cutoff_grid[i] < 1 || (i > 0 && cfg.cutoff_grid[i] <= cfg.cutoff_grid[i - 1])) {
      throw std::invalid_argument(
          "config field 'cutoff_grid': must be >= 1 and strictly increasing");
    }
  }
  for (std::size_t i = 0; i < cfg.time_grid.size(); ++i) {
    if (cfg.time_grid[i] < 0.0 || (i > 0 && cfg.time_grid[i] <= cfg.time_grid[i - 1])) {
      throw std::invalid_argument(
          "config field 'time_grid': must be >= 0 and strictly increasing");
    }
  }
  if (cfg.threads < 1) throw std::invalid_argument("config field 'threads': must be >= 1");
  if (cfg.oracle.tolerance_scale <= 0.0) {
    throw std::invalid_argument("config field 'oracle.tolerance_scale': must be positive");
  }
}

ParameterSnapshot snapshot(const RunConfig& cfg) {
  return ParameterSnapshot{cfg.cavity, cfg.detector_a, cfg.detector_b, cfg.switching_time};
}

}  // namespace cavsig
