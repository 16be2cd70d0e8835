#pragma once

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "exner/config.hpp"
#include "exner/csv.hpp"
#include "exner/harness.hpp"

namespace exner::cli {

/// Exit-code contract shared by every subcommand.
enum ExitCode : int {
  kOk = 0,
  kThresholdFailure = 1,
  kConfigError = 2,
  kNumericalFailure = 3,
};

namespace detail {

struct CommonFlags {
  std::optional<std::string> config_path;
  std::optional<Index> cells;
  std::optional<Real> cfl;
  std::optional<Real> t_end;
  std::optional<std::string> scheme;
  std::optional<std::string> law;
  std::optional<std::string> bc;
  std::optional<Real> x_min;
  std::optional<Real> x_max;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
};

inline void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_path, "Path to a key = value config file");
  cmd->add_option("--cells", flags.cells, "Number of mesh cells");
  cmd->add_option("--cfl", flags.cfl, "CFL number");
  cmd->add_option("--tend", flags.t_end, "Final time [s]");
  cmd->add_option("--scheme", flags.scheme, "Scheme: relaxation|rusanov");
  cmd->add_option("--law", flags.law, "Bedload law: grass|mpm|custom");
  cmd->add_option("--bc", flags.bc, "Boundary condition: exact|transmissive");
  cmd->add_option("--xmin", flags.x_min, "Left domain edge [m]");
  cmd->add_option("--xmax", flags.x_max, "Right domain edge [m]");
  cmd->add_option("--out", flags.out, "Output directory");
  cmd->add_option("--seed", flags.seed, "Random seed for sampling");
}

/// Config file first, then flag overrides.
inline BenchmarkConfig resolve_config(const CommonFlags& flags,
                                      BenchmarkConfig cfg = BenchmarkConfig{}) {
  if (flags.config_path) load_config_file(cfg, *flags.config_path);
  if (flags.cells) cfg.cells = *flags.cells;
  if (flags.cfl) cfg.cfl = *flags.cfl;
  if (flags.t_end) cfg.t_end = *flags.t_end;
  if (flags.scheme) cfg.scheme = parse_scheme(*flags.scheme);
  if (flags.law) cfg.law.preset = parse_law_preset(*flags.law);
  if (flags.bc) cfg.bc = parse_bc(*flags.bc);
  if (flags.x_min) cfg.x_min = *flags.x_min;
  if (flags.x_max) cfg.x_max = *flags.x_max;
  if (flags.out) cfg.out_dir = *flags.out;
  if (flags.seed) cfg.seed = *flags.seed;
  return cfg;
}

inline void write_json_report(const nlohmann::json& j, const std::string& out_dir,
                              const std::string& name) {
  if (out_dir.empty()) return;
  std::filesystem::create_directories(out_dir);
  std::ofstream out(std::filesystem::path(out_dir) / name);
  out << j.dump(2) << '\n';
}

inline int run_bench(const CommonFlags& flags) {
  const BenchmarkConfig cfg = resolve_config(flags);
  const RunReport report = run_benchmark(cfg);
  std::cout << "bench: scheme=" << scheme_name(cfg.scheme) << " cells=" << cfg.cells
            << " T=" << format_real(cfg.t_end) << " steps=" << report.steps << '\n'
            << "  rel L1  h=" << format_real(report.errors.h.rel.l1)
            << "  u=" << format_real(report.errors.u.rel.l1)
            << "  z_b=" << format_real(report.errors.z_b.rel.l1) << '\n'
            << "  budget defect  water=" << format_real(report.water.relative_defect)
            << "  bed=" << format_real(report.bed.relative_defect) << '\n'
            << "  thresholds " << (report.thresholds_met ? "met" : "NOT met") << '\n';
  return report.thresholds_met ? kOk : kThresholdFailure;
}

inline int run_converge(const CommonFlags& flags, std::vector<Index>& cells_list) {
  BenchmarkConfig base;
  base.t_end = 1.0;  // desk-scale default for studies; file or flag overrides
  BenchmarkConfig cfg = resolve_config(flags, base);
  if (cells_list.empty()) cells_list = {100, 200, 400, 800};
  const ConvergenceReport report = run_convergence(cfg, cells_list);
  write_json_report(report_json(report), cfg.out_dir, "convergence.json");
  std::cout << "converge: scheme=" << scheme_name(cfg.scheme) << '\n';
  for (const auto& e : report.entries)
    std::cout << "  J=" << e.cells << "  L1(h)=" << format_real(e.l1_h)
              << "  L1(u)=" << format_real(e.l1_u) << "  L1(z_b)=" << format_real(e.l1_zb)
              << '\n';
  std::cout << "  rates  h=" << format_real(report.rate_h) << "  u=" << format_real(report.rate_u)
            << "  z_b=" << format_real(report.rate_zb) << '\n'
            << "  thresholds " << (report.thresholds_met ? "met" : "NOT met") << '\n';
  return report.thresholds_met ? kOk : kThresholdFailure;
}

inline int run_verify(const CommonFlags& flags, int samples) {
  const BenchmarkConfig cfg = resolve_config(flags);
  const OracleReport report = verify_oracle(cfg, samples);
  write_json_report(report_json(report), cfg.out_dir, "oracle.json");
  std::cout << "verify: samples=" << report.samples << " skipped=" << report.skipped << '\n'
            << "  max residual  mass=" << format_real(report.max_mass)
            << "  momentum=" << format_real(report.max_momentum)
            << "  bed=" << format_real(report.max_bed) << '\n'
            << "  halving ratio=" << format_real(report.halving_ratio)
            << "  order=" << format_real(report.order) << '\n'
            << "  " << (report.passed ? "passed" : "FAILED") << '\n';
  return report.passed ? kOk : kThresholdFailure;
}

inline int run_exact_dump(const CommonFlags& flags, const std::vector<Real>& times) {
  const BenchmarkConfig cfg = resolve_config(flags);
  validate(cfg);
  const auto m = mesh(cfg);
  const auto sol = exact_solution(cfg);
  const std::filesystem::path dir(cfg.out_dir.empty() ? "." : cfg.out_dir);
  std::filesystem::create_directories(dir);
  for (const Real t : times) {
    char name[64];
    std::snprintf(name, sizeof(name), "exact_t%g.csv", static_cast<double>(t));
    write_exact_csv(m, sol, t, dir / name);
    std::cout << "wrote " << (dir / name).string() << '\n';
  }
  return kOk;
}

}  // namespace detail

/// Parses argv, dispatches the subcommand and maps failures onto the exit
/// codes: 0 success, 1 threshold failure, 2 configuration error,
/// 3 numerical failure.
inline int parse_and_dispatch(int argc, const char* const* argv) {
  CLI::App app{"1D finite-volume benchmark for coupled shallow-water bedload transport"};
  app.require_subcommand(1);

  detail::CommonFlags bench_flags, conv_flags, verify_flags, dump_flags;
  std::vector<Index> cells_list;
  int samples = 100;
  std::vector<Real> times;

  auto* bench = app.add_subcommand("bench", "Run one benchmark against the exact solution");
  detail::add_common_flags(bench, bench_flags);

  auto* converge = app.add_subcommand("converge", "Mesh-refinement convergence study");
  detail::add_common_flags(converge, conv_flags);
  converge->add_option("--cells-list", cells_list, "Mesh sizes (default 100 200 400 800)");

  auto* verify = app.add_subcommand("verify", "Verify the exact solution satisfies the PDEs");
  detail::add_common_flags(verify, verify_flags);
  verify->add_option("--samples", samples, "Number of random (x, t) samples");

  auto* dump = app.add_subcommand("exact-dump", "Write exact-solution CSV files");
  detail::add_common_flags(dump, dump_flags);
  dump->add_option("--times", times, "Times [s] to sample");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kConfigError;
  }

  try {
    if (bench->parsed()) return detail::run_bench(bench_flags);
    if (converge->parsed()) return detail::run_converge(conv_flags, cells_list);
    if (verify->parsed()) return detail::run_verify(verify_flags, samples);
    if (dump->parsed()) return detail::run_exact_dump(dump_flags, times);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::domain_error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const SolverError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumericalFailure;
  }
  return kConfigError;
}

}  // namespace exner::cli
