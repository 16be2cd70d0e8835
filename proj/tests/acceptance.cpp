// Acceptance suite: runs every verification criterion of the benchmark
// artifact at its pinned tolerance and prints one pass/fail line each.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "exner/harness.hpp"

using namespace exner;

namespace {

int failures = 0;

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

void record(int id, const std::string& name, bool ok, const std::string& detail, double seconds) {
  std::printf("[%s] %d %-24s %s (%.2f s)\n", ok ? "PASS" : "FAIL", id, name.c_str(),
              detail.c_str(), seconds);
  if (!ok) ++failures;
}

std::string fmt(const char* pattern, auto... values) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), pattern, values...);
  return std::string(buf);
}

BenchmarkConfig reference_config() {
  BenchmarkConfig cfg;  // defaults are the reference setup
  cfg.out_dir.clear();
  return cfg;
}

ReducedLaw<Real> zero_law() { return ReducedLaw<Real>{0.0, 0.0, 1.5}; }

// 1. The exact solution satisfies the governing equations: max central-difference
//    residual <= 1e-4 at dx = dt = 1e-3, shrinking by ~4x when halved.
void criterion_oracle_residual() {
  Timer timer;
  const auto report = verify_oracle(reference_config(), 100);
  const double t = timer.seconds();
  const bool ok = report.max_residual <= 1e-4 && report.halving_ratio >= 3.5 &&
                  report.halving_ratio <= 4.5 && t < 1.0;
  record(1, "oracle-residual", ok,
         fmt("max=%.3g ratio=%.3g", report.max_residual, report.halving_ratio), t);
}

// 2. Algebraic identity: bedload flux along the exact solution equals
//    alpha x + beta at all 500 cell centers to 1e-12.
void criterion_qb_identity() {
  Timer timer;
  const auto cfg = reference_config();
  const double worst = qb_identity_error(mesh(cfg), exact_solution(cfg));
  const double t = timer.seconds();
  const bool ok = worst <= 1e-12 && t < 0.1;
  record(2, "qb-identity", ok, fmt("max=%.3g", worst), t);
}

RunReport relaxation_run;
RunReport rusanov_run;
std::vector<MassBudget> all_budgets;

// 3. Reference reproduction: relaxation scheme, J = 500, cfl = 1, T = 7 s,
//    exact boundaries; relative L1 errors h, z_b <= 2e-2 and u <= 5e-2.
void criterion_reference_run() {
  Timer timer;
  relaxation_run = run_benchmark(reference_config());
  const double t = timer.seconds();
  all_budgets.push_back(relaxation_run.water);
  all_budgets.push_back(relaxation_run.bed);
  const auto& e = relaxation_run.errors;
  const bool ok =
      e.h.rel.l1 <= 2e-2 && e.z_b.rel.l1 <= 2e-2 && e.u.rel.l1 <= 5e-2 && t < 30.0;
  record(3, "reference-run", ok,
         fmt("relL1 h=%.3g u=%.3g z_b=%.3g", e.h.rel.l1, e.u.rel.l1, e.z_b.rel.l1), t);
}

// 4. First-order convergence: L1(h) rate over J in {100, 200, 400, 800} at
//    T = 1 lies in [0.7, 1.3] for both schemes.
void criterion_convergence() {
  Timer timer;
  auto cfg = reference_config();
  cfg.t_end = 1.0;
  const std::vector<Index> cells{100, 200, 400, 800};

  cfg.scheme = SchemeKind::Relaxation;
  const auto relax = run_convergence(cfg, cells);
  cfg.scheme = SchemeKind::Rusanov;
  const auto rusanov = run_convergence(cfg, cells);
  const double t = timer.seconds();
  for (const auto* r : {&relax, &rusanov})
    for (const auto& entry : r->entries) {
      all_budgets.push_back(entry.water);
      all_budgets.push_back(entry.bed);
    }
  auto in_window = [](double rate) { return rate >= 0.7 && rate <= 1.3; };
  const bool ok = in_window(relax.rate_h) && in_window(rusanov.rate_h) && t < 60.0;
  record(4, "convergence", ok,
         fmt("rate(h) relaxation=%.3f rusanov=%.3f", relax.rate_h, rusanov.rate_h), t);
}

// 5. Conservation: water and bed budgets close to 1e-10 relative against the
//    recorded boundary fluxes on every benchmark run above.
void criterion_conservation() {
  Timer timer;
  double worst = 0.0;
  for (const auto& b : all_budgets) worst = std::max(worst, b.relative_defect);
  const bool ok = !all_budgets.empty() && worst <= 1e-10;
  record(5, "conservation", ok,
         fmt("runs=%zu worst defect=%.3g", all_budgets.size() / 2, worst), timer.seconds());
}

// 6. Lake at rest: zero transport and flat free surface over the bed profile;
//    both schemes keep h + z_b and hu within 1e-12 over 100 steps.
void criterion_lake_at_rest() {
  Timer timer;
  const auto cfg = reference_config();
  const auto sol = exact_solution(cfg);
  const Mesh1D<Real> m(0.0, 4.0, 100);
  FieldSnapshot<Real> initial(m);
  for (Index j = 0; j < m.cells(); ++j) {
    initial.z_b[j] = sol.bed_initial(m.center(j));
    initial.h[j] = 1.3 - initial.z_b[j];
  }
  const auto bc = BoundaryCondition<Real>::transmissive();

  double drift = 0.0;
  for (SchemeKind scheme : {SchemeKind::Relaxation, SchemeKind::Rusanov}) {
    FieldSnapshot<Real> state = initial;
    for (int i = 0; i < 100; ++i)
      state = step(state, zero_law(), cfg.g, bc, 1.0, scheme).first;
    drift = std::max(drift,
                     (state.free_surface() - initial.free_surface()).abs().maxCoeff());
    drift = std::max(drift, state.hu.abs().maxCoeff());
  }
  const bool ok = drift <= 1e-12;
  record(6, "lake-at-rest", ok, fmt("max drift=%.3g", drift), timer.seconds());
}

// 7. Fixed-bed steady state: with transport frozen, the projected exact data
//    drifts less on finer meshes (J = 200 vs 400 ratio >= 1.5) for both schemes.
void criterion_steady_state() {
  Timer timer;
  const auto cfg = reference_config();
  const auto sol = exact_solution(cfg);
  const auto bc = BoundaryCondition<Real>::exact(sol, 0.0);  // ghosts pinned at t = 0

  auto drift = [&](Index cells, SchemeKind scheme) {
    const auto initial = project_exact(Mesh1D<Real>(0.0, 4.0, cells), sol, 0.0);
    const auto final = integrate(initial, zero_law(), cfg.g, bc, 1.0, 1.0, scheme).first;
    Real worst = 0.0;
    for (Index j = 0; j < cells; ++j) {
      const auto w = sol.eval(final.mesh.center(j), 0.0);
      worst = std::max(worst, std::abs(final.h[j] - w.h));
      worst = std::max(worst, std::abs(velocity(final.h[j], final.hu[j]) - w.u));
    }
    return worst;
  };

  const double relax_ratio =
      drift(200, SchemeKind::Relaxation) / drift(400, SchemeKind::Relaxation);
  const double rusanov_ratio = drift(200, SchemeKind::Rusanov) / drift(400, SchemeKind::Rusanov);
  const bool ok = relax_ratio >= 1.5 && rusanov_ratio >= 1.5;
  record(7, "fixed-bed-steady", ok,
         fmt("drift ratio relaxation=%.2f rusanov=%.2f", relax_ratio, rusanov_ratio),
         timer.seconds());
}

// 8. Cross-scheme agreement: L1(h) errors of the two schemes at J = 500,
//    T = 7 agree within a factor of 5 (this run's budgets must close too).
void criterion_cross_scheme() {
  Timer timer;
  auto cfg = reference_config();
  cfg.scheme = SchemeKind::Rusanov;
  rusanov_run = run_benchmark(cfg);
  const double a = relaxation_run.errors.h.abs.l1;
  const double b = rusanov_run.errors.h.abs.l1;
  const double factor = std::max(a / b, b / a);
  const bool ok = factor <= 5.0 && rusanov_run.water.relative_defect <= 1e-10 &&
                  rusanov_run.bed.relative_defect <= 1e-10;
  record(8, "cross-scheme", ok, fmt("L1(h) relaxation=%.3g rusanov=%.3g factor=%.2f", a, b, factor),
         timer.seconds());
}

// 9. Threshold-law self-consistency: the reduced (A, u_cr^2) parameters match
//    an independent evaluation to 1e-12 relative over random parameter tuples.
void criterion_mpm_consistency() {
  Timer timer;
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> f_dist(0.02, 0.3), s_dist(1.5, 3.0),
      d_dist(1e-4, 1e-2), u_dist(0.5, 4.0);
  const double g = 9.81;

  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double f = f_dist(rng), s = s_dist(rng), d = d_dist(rng);
    const auto law = meyer_peter_mueller(f, s, d, g);
    const auto [A, u_cr_sq] = effective_params(law);

    // Independent route: exp/log power, factored diameter scaling.
    const double r = f / (8.0 * (s - 1.0) * g * d);
    const double A_ref = 8.0 * std::exp(1.5 * std::log(r)) * std::sqrt((s - 1.0) * g) *
                         std::pow(d, 1.5);
    const double u_ref = 0.047 * 8.0 * (s - 1.0) * g * d / f;
    worst = std::max(worst, std::abs(A - A_ref) / A_ref);
    worst = std::max(worst, std::abs(u_cr_sq - u_ref) / u_ref);

    // Dual route at a sample velocity: original threshold form vs reduced form.
    const double u = std::sqrt(u_ref) + u_dist(rng);
    const double tau = shields_stress(law, u);
    const double direct = 8.0 * std::pow(tau - 0.047, 1.5) * std::sqrt((s - 1.0) * g * d * d * d);
    worst = std::max(worst, std::abs(bedload_rate(law, u) - direct) / direct);
  }
  const bool ok = worst <= 1e-12;
  record(9, "mpm-consistency", ok, fmt("worst rel=%.3g", worst), timer.seconds());
}

}  // namespace

int main() {
  std::printf("acceptance suite: coupled shallow-water / bed-evolution benchmark\n");
  criterion_oracle_residual();
  criterion_qb_identity();
  criterion_reference_run();
  criterion_convergence();
  criterion_conservation();
  criterion_lake_at_rest();
  criterion_steady_state();
  criterion_cross_scheme();
  criterion_mpm_consistency();
  std::printf("%d/9 criteria passed\n", 9 - failures);
  return failures;
}
