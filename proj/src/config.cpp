#include "fdflow/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace fdflow {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

[[noreturn]] void fail(int line, const std::string& msg) {
  throw ConfigError("config line " + std::to_string(line) + ": " + msg);
}

double parse_real(int line, const std::string& key, const std::string& text) {
  const char* begin = text.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0')
    fail(line, "value for " + key + " is not a number: '" + text + "'");
  return v;
}

int parse_int(int line, const std::string& key, const std::string& text) {
  const char* begin = text.c_str();
  char* end = nullptr;
  const long v = std::strtol(begin, &end, 10);
  if (end == begin || *end != '\0')
    fail(line, "value for " + key + " is not an integer: '" + text + "'");
  return static_cast<int>(v);
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(lineno, "expected key=value: '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty()) fail(lineno, "empty key");
    if (val.empty()) fail(lineno, "empty value for " + key);

    if (key == "n") {
      cfg.n = parse_int(lineno, key, val);
      if (cfg.n < 1) fail(lineno, "n must be >= 1");
    } else if (key == "dt") {
      cfg.dt = parse_real(lineno, key, val);
      if (!(cfg.dt > 0.0)) fail(lineno, "dt must be > 0");
    } else if (key == "T") {
      cfg.T = parse_real(lineno, key, val);
      if (!(cfg.T > 0.0)) fail(lineno, "T must be > 0");
    } else if (key == "epsilon") {
      cfg.epsilon = parse_real(lineno, key, val);
      if (!(cfg.epsilon > 0.0)) fail(lineno, "epsilon must be > 0");
    } else if (key == "beta") {
      cfg.beta = parse_real(lineno, key, val);
      if (!(cfg.beta >= 0.0 && cfg.beta < 1.0))
        fail(lineno, "beta must satisfy 0 <= beta < 1");
    } else if (key == "mu") {
      cfg.mu = parse_real(lineno, key, val);
      if (!(cfg.mu > 0.0)) fail(lineno, "mu must be > 0");
    } else if (key == "delta_reg") {
      cfg.delta_reg = parse_real(lineno, key, val);
      if (!(cfg.delta_reg > 0.0)) fail(lineno, "delta_reg must be > 0");
    } else if (key == "cut_depth") {
      cfg.cut_depth = parse_int(lineno, key, val);
      if (cfg.cut_depth < 0 || cfg.cut_depth > 12)
        fail(lineno, "cut_depth must be in [0, 12]");
    } else if (key == "solver_tol") {
      cfg.solver_tol = parse_real(lineno, key, val);
      if (!(cfg.solver_tol > 0.0 && cfg.solver_tol <= 1e-6))
        fail(lineno, "solver_tol must be in (0, 1e-6]");
    } else {
      fail(lineno, "unknown key '" + key + "'");
    }
  }

  try {
    validate(cfg);
  } catch (const std::invalid_argument& e) {
    // validate() messages already carry the "config:" prefix.
    throw ConfigError(e.what());
  }
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace fdflow
