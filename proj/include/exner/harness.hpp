#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <random>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "exner/config.hpp"
#include "exner/csv.hpp"
#include "exner/exact_solution.hpp"
#include "exner/mesh.hpp"
#include "exner/schemes.hpp"

namespace exner {

/// Conservation bookkeeping of one run: total cell mass against the
/// dt-integrated boundary fluxes recorded per step.
struct MassBudget {
  Real initial = 0;
  Real final = 0;
  Real boundary = 0;
  Real defect = 0;
  Real relative_defect = 0;
};

struct RunReport {
  BenchmarkConfig config;
  SnapshotErrors<Real> errors{};
  MassBudget water;
  MassBudget bed;
  std::int64_t steps = 0;
  Real max_speed = 0;
  Real qb_identity_error = 0;  // preflight: max |q_b(exact) - (alpha x + beta)|
  Real wall_time_s = 0;
  bool thresholds_met = false;
};

inline nlohmann::json report_json(const RunReport& r);

namespace detail {

inline MassBudget close_budget(Real initial, Real final, Real boundary) {
  MassBudget b{initial, final, boundary, 0, 0};
  b.defect = final - initial - boundary;
  b.relative_defect = std::abs(b.defect) / std::max(std::abs(initial), Real(1));
  return b;
}

inline Real total_mass(const ArrayX<Real>& field, Real dx) { return dx * field.sum(); }

}  // namespace detail

/// Algebraic preflight: along the exact solution the bedload flux must equal
/// alpha x + beta at every cell center.
inline Real qb_identity_error(const Mesh1D<Real>& m, const ExactSolution<Real>& sol) {
  Real worst = 0;
  for (Index j = 0; j < m.cells(); ++j) {
    const Real x = m.center(j);
    worst = std::max(worst, std::abs(sol.qb_of_exact(x) - (sol.alpha() * x + sol.beta())));
  }
  return worst;
}

/// Projects the exact solution at t = 0, integrates to t_end, and compares
/// against the exact solution at t_end. Snapshots, a gnuplot script and a
/// JSON report are emitted into cfg.out_dir unless it is empty.
inline RunReport run_benchmark(const BenchmarkConfig& cfg) {
  validate(cfg);
  const auto start = std::chrono::steady_clock::now();

  const auto m = mesh(cfg);
  const auto sol = exact_solution(cfg);
  const auto law = reduced_law(cfg.law, cfg.g);
  const auto bc = boundary_condition(cfg);

  RunReport report;
  report.config = cfg;
  report.qb_identity_error = qb_identity_error(m, sol);

  const auto initial = project_exact(m, sol, Real(0));
  auto [final, steps] = integrate(initial, law, cfg.g, bc, cfg.cfl, cfg.t_end, cfg.scheme);

  report.errors = norms(final, sol);
  report.steps = static_cast<std::int64_t>(steps.size());
  Real inflow_h = 0, inflow_z = 0;
  for (const auto& s : steps) {
    inflow_h += s.boundary_h;
    inflow_z += s.boundary_zb;
    report.max_speed = std::max(report.max_speed, s.max_speed);
  }
  const Real dx = m.dx();
  report.water = detail::close_budget(detail::total_mass(initial.h, dx),
                                      detail::total_mass(final.h, dx), inflow_h);
  report.bed = detail::close_budget(detail::total_mass(initial.z_b, dx),
                                    detail::total_mass(final.z_b, dx), inflow_z);
  report.thresholds_met = report.errors.h.rel.l1 <= cfg.tol_l1_h &&
                          report.errors.u.rel.l1 <= cfg.tol_l1_u &&
                          report.errors.z_b.rel.l1 <= cfg.tol_l1_zb;
  report.wall_time_s =
      std::chrono::duration<Real>(std::chrono::steady_clock::now() - start).count();

  if (!cfg.out_dir.empty()) {
    const std::filesystem::path dir(cfg.out_dir);
    std::filesystem::create_directories(dir);
    write_snapshot_csv(initial, law, dir / "snapshot_initial.csv");
    write_snapshot_csv(final, law, dir / "snapshot_final.csv");
    write_exact_csv(m, sol, cfg.t_end, dir / "exact_final.csv");
    write_plot_script(dir / "plot.gp", "snapshot_final.csv", "exact_final.csv",
                      scheme_name(cfg.scheme) + " scheme, J=" + std::to_string(cfg.cells) +
                          ", T=" + format_real(cfg.t_end));
    std::ofstream out(dir / "report.json");
    out << report_json(report).dump(2) << '\n';
  }
  return report;
}

struct ConvergenceEntry {
  Index cells = 0;
  Real dx = 0;
  Real l1_h = 0;
  Real l1_u = 0;
  Real l1_zb = 0;
  MassBudget water;
  MassBudget bed;
};

struct ConvergenceReport {
  BenchmarkConfig config;
  std::vector<ConvergenceEntry> entries;
  Real rate_h = 0;
  Real rate_u = 0;
  Real rate_zb = 0;
  Real fit_residual_h = 0;  // RMS residual of the log-log slope fit
  Real fit_residual_u = 0;
  Real fit_residual_zb = 0;
  bool thresholds_met = false;
};

namespace detail {

/// Least-squares slope of log(err) against log(dx), plus RMS fit residual.
inline std::pair<Real, Real> loglog_rate(const std::vector<ConvergenceEntry>& entries,
                                         Real ConvergenceEntry::*field) {
  const Index n = static_cast<Index>(entries.size());
  Eigen::MatrixXd design(n, 2);
  Eigen::VectorXd rhs(n);
  for (Index i = 0; i < n; ++i) {
    design(i, 0) = 1.0;
    design(i, 1) = std::log(entries[i].dx);
    rhs(i) = std::log(entries[i].*field);
  }
  const Eigen::Vector2d coeffs = design.colPivHouseholderQr().solve(rhs);
  const Real rms = std::sqrt((design * coeffs - rhs).squaredNorm() / Real(n));
  return {coeffs(1), rms};
}

inline unsigned thread_cap() {
  if (const char* env = std::getenv("EXNER_BENCH_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

}  // namespace detail

/// Runs the benchmark over each J in cells (strictly increasing, at least 3)
/// and fits the L1 convergence rate per field. Runs execute in parallel up
/// to EXNER_BENCH_THREADS; results are merged in J order.
inline ConvergenceReport run_convergence(const BenchmarkConfig& cfg,
                                         const std::vector<Index>& cells) {
  if (cells.size() < 3)
    throw ConfigError("convergence study needs at least 3 mesh sizes");
  for (std::size_t i = 1; i < cells.size(); ++i)
    if (cells[i] <= cells[i - 1])
      throw ConfigError("convergence study mesh sizes must be strictly increasing");

  std::vector<BenchmarkConfig> configs;
  for (Index J : cells) {
    BenchmarkConfig c = cfg;
    c.cells = J;
    c.out_dir.clear();
    validate(c);
    configs.push_back(c);
  }

  std::vector<RunReport> reports(configs.size());
  const unsigned cap = std::max(1u, detail::thread_cap());
  for (std::size_t begin = 0; begin < configs.size(); begin += cap) {
    const std::size_t end = std::min(configs.size(), begin + cap);
    std::vector<std::future<RunReport>> batch;
    for (std::size_t i = begin; i < end; ++i)
      batch.push_back(std::async(std::launch::async,
                                 [&configs, i] { return run_benchmark(configs[i]); }));
    for (std::size_t i = begin; i < end; ++i) reports[i] = batch[i - begin].get();
  }

  ConvergenceReport out;
  out.config = cfg;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto& r = reports[i];
    out.entries.push_back({cells[i], (cfg.x_max - cfg.x_min) / Real(cells[i]),
                           r.errors.h.abs.l1, r.errors.u.abs.l1, r.errors.z_b.abs.l1, r.water,
                           r.bed});
  }
  std::tie(out.rate_h, out.fit_residual_h) =
      detail::loglog_rate(out.entries, &ConvergenceEntry::l1_h);
  std::tie(out.rate_u, out.fit_residual_u) =
      detail::loglog_rate(out.entries, &ConvergenceEntry::l1_u);
  std::tie(out.rate_zb, out.fit_residual_zb) =
      detail::loglog_rate(out.entries, &ConvergenceEntry::l1_zb);
  out.thresholds_met = out.rate_h >= cfg.rate_min && out.rate_h <= cfg.rate_max;
  return out;
}

/// Verification thresholds for the reference solution, pinned once.
inline constexpr Real kOracleResidualTol = 1e-4;
inline constexpr Real kOracleRatioMin = 3.5;
inline constexpr Real kOracleRatioMax = 4.5;
inline constexpr Real kOracleIdentityTol = 1e-12;
inline constexpr Real kOracleDerivativeTol = 1e-6;

struct OracleReport {
  BenchmarkConfig config;
  int samples = 0;
  int skipped = 0;  // samples whose stencil left the validity domain
  Real dx = 0;
  Real dt = 0;
  Real max_mass = 0;
  Real max_momentum = 0;
  Real max_bed = 0;
  Real max_residual = 0;
  Real max_residual_half = 0;
  Real halving_ratio = 0;
  Real order = 0;
  Real max_steadiness = 0;    // drift of (h, u) between sampled times
  Real max_bed_motion = 0;    // |z_b(x,t) - z_b(x,0) + alpha t|, scaled
  Real max_qb_identity = 0;   // |q_b - (alpha x + beta)|, scaled
  Real max_dzb0_identity = 0; // relative error of closed-form d z_b0/dx
  bool passed = false;
};

/// Samples the reference solution at random (x, t) points and checks that it
/// satisfies the governing equations to second order in the stencil widths,
/// together with its algebraic identities.
inline OracleReport verify_oracle(const BenchmarkConfig& cfg, int samples, Real dx = 1e-3,
                                  Real dt = 1e-3) {
  if (samples < 1) throw ConfigError("verify_oracle needs at least 1 sample");
  validate(cfg);
  const auto sol = exact_solution(cfg);

  OracleReport report;
  report.config = cfg;
  report.dx = dx;
  report.dt = dt;

  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<Real> x_dist(cfg.x_min, cfg.x_max);
  std::uniform_real_distribution<Real> t_dist(Real(0), std::max(cfg.t_end, dt));

  for (int i = 0; i < samples; ++i) {
    const Real x = x_dist(rng);
    const Real t = t_dist(rng);
    if (!sol.in_domain(x - dx) || !sol.in_domain(x + dx)) {
      ++report.skipped;
      continue;
    }
    ++report.samples;

    const auto res = residual(sol, x, t, dx, dt);
    report.max_mass = std::max(report.max_mass, std::abs(res.mass));
    report.max_momentum = std::max(report.max_momentum, std::abs(res.momentum));
    report.max_bed = std::max(report.max_bed, std::abs(res.bed));
    const auto half = residual(sol, x, t, dx / 2, dt / 2);
    report.max_residual_half =
        std::max({report.max_residual_half, std::abs(half.mass), std::abs(half.momentum),
                  std::abs(half.bed)});

    const auto w0 = sol.eval(x, Real(0));
    const auto wt = sol.eval(x, t);
    report.max_steadiness =
        std::max({report.max_steadiness, std::abs(wt.h - w0.h), std::abs(wt.u - w0.u)});
    report.max_bed_motion =
        std::max(report.max_bed_motion, std::abs(wt.z_b - w0.z_b + sol.alpha() * t) /
                                            std::max(Real(1), std::abs(sol.alpha() * t)));
    const Real qb_lin = sol.alpha() * x + sol.beta();
    report.max_qb_identity =
        std::max(report.max_qb_identity,
                 std::abs(sol.qb_of_exact(x) - qb_lin) / std::max(Real(1), qb_lin));

    // Closed-form bed slope against a tight central difference.
    const Real fd_dx = Real(2e-4);
    if (sol.in_domain(x - fd_dx) && sol.in_domain(x + fd_dx)) {
      const Real fd =
          (sol.bed_initial(x + fd_dx) - sol.bed_initial(x - fd_dx)) / (2 * fd_dx);
      const Real exactd = sol.dzb0_dx(x);
      report.max_dzb0_identity =
          std::max(report.max_dzb0_identity,
                   std::abs(exactd - fd) / std::max(std::abs(exactd), Real(1e-12)));
    }
  }

  report.max_residual = std::max({report.max_mass, report.max_momentum, report.max_bed});
  report.halving_ratio = report.max_residual_half > Real(0)
                             ? report.max_residual / report.max_residual_half
                             : Real(0);
  report.order = report.halving_ratio > Real(0) ? std::log2(report.halving_ratio) : Real(0);
  report.passed = report.samples > 0 && report.max_residual <= kOracleResidualTol &&
                  report.halving_ratio >= kOracleRatioMin &&
                  report.halving_ratio <= kOracleRatioMax &&
                  report.max_steadiness == Real(0) &&
                  report.max_bed_motion <= Real(1e-14) &&
                  report.max_qb_identity <= kOracleIdentityTol &&
                  report.max_dzb0_identity <= kOracleDerivativeTol;
  return report;
}

inline nlohmann::json norms_json(const FieldErrors<Real>& e) {
  return {{"abs", {{"l1", e.abs.l1}, {"l2", e.abs.l2}, {"linf", e.abs.linf}}},
          {"rel", {{"l1", e.rel.l1}, {"l2", e.rel.l2}, {"linf", e.rel.linf}}}};
}

inline nlohmann::json budget_json(const MassBudget& b) {
  return {{"initial", b.initial},
          {"final", b.final},
          {"boundary", b.boundary},
          {"defect", b.defect},
          {"relative_defect", b.relative_defect}};
}

inline nlohmann::json report_json(const RunReport& r) {
  return {{"config", config_echo(r.config)},
          {"errors",
           {{"h", norms_json(r.errors.h)},
            {"u", norms_json(r.errors.u)},
            {"z_b", norms_json(r.errors.z_b)}}},
          {"budget", {{"water", budget_json(r.water)}, {"bed", budget_json(r.bed)}}},
          {"steps", r.steps},
          {"max_wave_speed", r.max_speed},
          {"qb_identity_error", r.qb_identity_error},
          {"wall_time_s", r.wall_time_s},
          {"thresholds_met", r.thresholds_met}};
}

inline nlohmann::json report_json(const ConvergenceReport& r) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : r.entries)
    entries.push_back({{"cells", e.cells},
                       {"dx", e.dx},
                       {"l1_h", e.l1_h},
                       {"l1_u", e.l1_u},
                       {"l1_zb", e.l1_zb},
                       {"water_defect", e.water.relative_defect},
                       {"bed_defect", e.bed.relative_defect}});
  return {{"config", config_echo(r.config)},
          {"entries", entries},
          {"rates", {{"h", r.rate_h}, {"u", r.rate_u}, {"z_b", r.rate_zb}}},
          {"fit_residuals",
           {{"h", r.fit_residual_h}, {"u", r.fit_residual_u}, {"z_b", r.fit_residual_zb}}},
          {"thresholds_met", r.thresholds_met}};
}

inline nlohmann::json report_json(const OracleReport& r) {
  return {{"config", config_echo(r.config)},
          {"samples", r.samples},
          {"skipped", r.skipped},
          {"stencil", {{"dx", r.dx}, {"dt", r.dt}}},
          {"max_residual",
           {{"mass", r.max_mass}, {"momentum", r.max_momentum}, {"bed", r.max_bed}}},
          {"max_residual_overall", r.max_residual},
          {"max_residual_half", r.max_residual_half},
          {"halving_ratio", r.halving_ratio},
          {"order", r.order},
          {"identities",
           {{"steadiness", r.max_steadiness},
            {"bed_motion", r.max_bed_motion},
            {"qb_linear", r.max_qb_identity},
            {"dzb0_dx", r.max_dzb0_identity}}},
          {"passed", r.passed}};
}

}  // namespace exner
