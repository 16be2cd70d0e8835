#pragma once

#include <cctype>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "exner/exact_solution.hpp"
#include "exner/mesh.hpp"
#include "exner/schemes.hpp"
#include "exner/sediment.hpp"

namespace exner {

using Real = double;

enum class LawPreset { Grass, Mpm, Custom };

/// Law selection plus the union of per-preset parameters. Grass uses A_g;
/// mpm and custom use the threshold-law fields (mpm pins kappa, p, tau_cr).
struct LawConfig {
  LawPreset preset = LawPreset::Grass;
  Real A_g = 0.005;
  Real kappa = 8.0;
  Real p = 1.5;
  Real tau_cr = 0.047;
  Real f = 0.1;
  Real s = 2.65;
  Real d_s = 0.001;
};

/// Full description of one benchmark run. Defaults reproduce the reference
/// configuration: Grass law, q = 1, alpha = beta = A_g = 0.005, C = 1,
/// 500 cells on [0, 4], cfl = 1, T = 7 s, relaxation scheme, exact boundaries.
struct BenchmarkConfig {
  LawConfig law;
  Real q = 1.0;
  Real alpha = 0.005;
  Real beta = 0.005;
  Real C = 1.0;
  Real g = 9.81;
  Real x_min = 0.0;
  Real x_max = 4.0;
  Index cells = 500;
  Real cfl = 1.0;
  Real t_end = 7.0;
  SchemeKind scheme = SchemeKind::Relaxation;
  BoundaryMode bc = BoundaryMode::Exact;
  std::string out_dir = "out";
  std::uint64_t seed = 42;
  Real tol_l1_h = 0.02;
  Real tol_l1_u = 0.05;
  Real tol_l1_zb = 0.02;
  Real rate_min = 0.7;
  Real rate_max = 1.3;
};

inline ReducedLaw<Real> reduced_law(const LawConfig& cfg, Real g) {
  switch (cfg.preset) {
    case LawPreset::Grass: {
      GrassLaw<Real> law{cfg.A_g};
      validate(law);
      return reduce(law);
    }
    case LawPreset::Mpm: {
      auto law = meyer_peter_mueller(cfg.f, cfg.s, cfg.d_s, g);
      validate(law);
      return reduce(law);
    }
    case LawPreset::Custom: {
      SedimentLaw<Real> law{cfg.kappa, cfg.p, cfg.tau_cr, cfg.f, cfg.s, cfg.d_s, g};
      validate(law);
      return reduce(law);
    }
  }
  throw std::logic_error("unreachable law preset");
}

inline ExactSolution<Real> exact_solution(const BenchmarkConfig& cfg) {
  return ExactSolution<Real>(cfg.q, cfg.alpha, cfg.beta, cfg.C, reduced_law(cfg.law, cfg.g),
                             cfg.g);
}

inline Mesh1D<Real> mesh(const BenchmarkConfig& cfg) {
  return Mesh1D<Real>(cfg.x_min, cfg.x_max, cfg.cells);
}

inline BoundaryCondition<Real> boundary_condition(const BenchmarkConfig& cfg) {
  if (cfg.bc == BoundaryMode::Exact) return BoundaryCondition<Real>::exact(exact_solution(cfg));
  return BoundaryCondition<Real>::transmissive();
}

/// Validates the run description; every violated bound is listed in the
/// thrown message.
inline void validate(const BenchmarkConfig& cfg) {
  std::vector<std::string> errors;
  auto check = [&](bool ok, const std::string& msg) {
    if (!ok) errors.push_back(msg);
  };
  check(cfg.q > 0, "q must be > 0");
  check(cfg.g > 0, "g must be > 0");
  check(cfg.x_max > cfg.x_min, "x_max must exceed x_min");
  check(cfg.cells >= 2, "cells must be >= 2");
  check(cfg.cfl > 0, "cfl must be > 0");
  check(cfg.t_end >= 0, "tend must be >= 0");

  try {
    const auto law = reduced_law(cfg.law, cfg.g);
    check(law.A > 0, "law must have A > 0 for the reference solution");
    if (cfg.x_max > cfg.x_min && cfg.cells >= 2) {
      const auto m = mesh(cfg);
      // Exact boundaries sample one ghost cell beyond each end.
      const Index lo = cfg.bc == BoundaryMode::Exact ? -1 : 0;
      const Index hi = cfg.bc == BoundaryMode::Exact ? m.cells() : m.cells() - 1;
      for (Index j : {lo, hi}) {
        const Real x = m.center(j);
        check(cfg.alpha * x + cfg.beta > 0,
              "alpha x + beta must be positive on the mesh (violated at x = " +
                  std::to_string(x) + ")");
      }
    }
  } catch (const std::invalid_argument& e) {
    errors.push_back(e.what());
  }

  if (!errors.empty()) {
    std::string msg = "invalid configuration:";
    for (const auto& e : errors) msg += "\n  - " + e;
    throw ConfigError(msg);
  }
}

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

inline Real parse_real(const std::string& key, const std::string& value) {
  std::size_t pos = 0;
  Real out;
  try {
    out = std::stod(value, &pos);
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': cannot parse '" + value + "' as a number");
  }
  if (pos != value.size())
    throw ConfigError("key '" + key + "': trailing characters in '" + value + "'");
  return out;
}

inline std::int64_t parse_int(const std::string& key, const std::string& value) {
  std::size_t pos = 0;
  std::int64_t out;
  try {
    out = std::stoll(value, &pos);
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': cannot parse '" + value + "' as an integer");
  }
  if (pos != value.size())
    throw ConfigError("key '" + key + "': trailing characters in '" + value + "'");
  return out;
}

}  // namespace detail

inline LawPreset parse_law_preset(const std::string& value) {
  if (value == "grass") return LawPreset::Grass;
  if (value == "mpm") return LawPreset::Mpm;
  if (value == "custom") return LawPreset::Custom;
  throw ConfigError("key 'law': unknown value '" + value + "' (expected grass|mpm|custom)");
}

inline SchemeKind parse_scheme(const std::string& value) {
  if (value == "relaxation") return SchemeKind::Relaxation;
  if (value == "rusanov") return SchemeKind::Rusanov;
  throw ConfigError("key 'scheme': unknown value '" + value +
                    "' (expected relaxation|rusanov)");
}

inline BoundaryMode parse_bc(const std::string& value) {
  if (value == "exact") return BoundaryMode::Exact;
  if (value == "transmissive") return BoundaryMode::Transmissive;
  throw ConfigError("key 'bc': unknown value '" + value + "' (expected exact|transmissive)");
}

/// Applies one key=value assignment; unknown keys are rejected by name.
inline void apply_key(BenchmarkConfig& cfg, const std::string& key, const std::string& value) {
  using detail::parse_int;
  using detail::parse_real;
  if (key == "law") {
    cfg.law.preset = parse_law_preset(value);
  } else if (key == "A_g") {
    cfg.law.A_g = parse_real(key, value);
  } else if (key == "kappa") {
    cfg.law.kappa = parse_real(key, value);
  } else if (key == "p") {
    cfg.law.p = parse_real(key, value);
  } else if (key == "tau_cr") {
    cfg.law.tau_cr = parse_real(key, value);
  } else if (key == "f") {
    cfg.law.f = parse_real(key, value);
  } else if (key == "s") {
    cfg.law.s = parse_real(key, value);
  } else if (key == "d_s") {
    cfg.law.d_s = parse_real(key, value);
  } else if (key == "q") {
    cfg.q = parse_real(key, value);
  } else if (key == "alpha") {
    cfg.alpha = parse_real(key, value);
  } else if (key == "beta") {
    cfg.beta = parse_real(key, value);
  } else if (key == "C") {
    cfg.C = parse_real(key, value);
  } else if (key == "g") {
    cfg.g = parse_real(key, value);
  } else if (key == "x_min") {
    cfg.x_min = parse_real(key, value);
  } else if (key == "x_max") {
    cfg.x_max = parse_real(key, value);
  } else if (key == "cells") {
    cfg.cells = static_cast<Index>(parse_int(key, value));
  } else if (key == "cfl") {
    cfg.cfl = parse_real(key, value);
  } else if (key == "tend") {
    cfg.t_end = parse_real(key, value);
  } else if (key == "scheme") {
    cfg.scheme = parse_scheme(value);
  } else if (key == "bc") {
    cfg.bc = parse_bc(value);
  } else if (key == "out") {
    cfg.out_dir = value;
  } else if (key == "seed") {
    cfg.seed = static_cast<std::uint64_t>(parse_int(key, value));
  } else if (key == "tol_l1_h") {
    cfg.tol_l1_h = parse_real(key, value);
  } else if (key == "tol_l1_u") {
    cfg.tol_l1_u = parse_real(key, value);
  } else if (key == "tol_l1_zb") {
    cfg.tol_l1_zb = parse_real(key, value);
  } else if (key == "rate_min") {
    cfg.rate_min = parse_real(key, value);
  } else if (key == "rate_max") {
    cfg.rate_max = parse_real(key, value);
  } else {
    throw ConfigError("unknown configuration key '" + key + "'");
  }
}

/// Parses a flat key = value file ('#' starts a comment, blank lines ignored).
inline void load_config_file(BenchmarkConfig& cfg, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string stripped = detail::trim(line);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config file line " + std::to_string(line_no) +
                        ": expected 'key = value', got '" + stripped + "'");
    const std::string key = detail::trim(stripped.substr(0, eq));
    const std::string value = detail::trim(stripped.substr(eq + 1));
    if (key.empty())
      throw ConfigError("config file line " + std::to_string(line_no) + ": empty key");
    apply_key(cfg, key, value);
  }
}

inline std::string law_preset_name(LawPreset preset) {
  switch (preset) {
    case LawPreset::Grass: return "grass";
    case LawPreset::Mpm: return "mpm";
    case LawPreset::Custom: return "custom";
  }
  return "?";
}

inline std::string scheme_name(SchemeKind scheme) {
  return scheme == SchemeKind::Relaxation ? "relaxation" : "rusanov";
}

inline std::string bc_name(BoundaryMode bc) {
  return bc == BoundaryMode::Exact ? "exact" : "transmissive";
}

/// Resolved key=value map, the self-describing echo embedded in reports.
inline std::map<std::string, std::string> config_echo(const BenchmarkConfig& cfg) {
  auto real = [](Real v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };
  std::map<std::string, std::string> echo;
  echo["law"] = law_preset_name(cfg.law.preset);
  echo["A_g"] = real(cfg.law.A_g);
  echo["kappa"] = real(cfg.law.kappa);
  echo["p"] = real(cfg.law.p);
  echo["tau_cr"] = real(cfg.law.tau_cr);
  echo["f"] = real(cfg.law.f);
  echo["s"] = real(cfg.law.s);
  echo["d_s"] = real(cfg.law.d_s);
  echo["q"] = real(cfg.q);
  echo["alpha"] = real(cfg.alpha);
  echo["beta"] = real(cfg.beta);
  echo["C"] = real(cfg.C);
  echo["g"] = real(cfg.g);
  echo["x_min"] = real(cfg.x_min);
  echo["x_max"] = real(cfg.x_max);
  echo["cells"] = std::to_string(cfg.cells);
  echo["cfl"] = real(cfg.cfl);
  echo["tend"] = real(cfg.t_end);
  echo["scheme"] = scheme_name(cfg.scheme);
  echo["bc"] = bc_name(cfg.bc);
  echo["out"] = cfg.out_dir;
  echo["seed"] = std::to_string(cfg.seed);
  echo["tol_l1_h"] = real(cfg.tol_l1_h);
  echo["tol_l1_u"] = real(cfg.tol_l1_u);
  echo["tol_l1_zb"] = real(cfg.tol_l1_zb);
  echo["rate_min"] = real(cfg.rate_min);
  echo["rate_max"] = real(cfg.rate_max);
  return echo;
}

}  // namespace exner
