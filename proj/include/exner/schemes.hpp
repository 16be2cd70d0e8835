#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "exner/exact_solution.hpp"
#include "exner/mesh.hpp"
#include "exner/sediment.hpp"
#include "exner/types.hpp"

namespace exner {

enum class BoundaryMode { Exact, Transmissive };

/// Ghost-cell policy per side. Exact mode fills ghosts from the reference
/// solution at the current time (or at frozen_time when set, e.g. for
/// fixed-bed steady-state runs).
template <typename Scalar>
struct BoundaryCondition {
  BoundaryMode left = BoundaryMode::Transmissive;
  BoundaryMode right = BoundaryMode::Transmissive;
  std::optional<ExactSolution<Scalar>> solution;
  std::optional<Scalar> frozen_time;

  static BoundaryCondition exact(const ExactSolution<Scalar>& sol,
                                 std::optional<Scalar> frozen = std::nullopt) {
    return {BoundaryMode::Exact, BoundaryMode::Exact, sol, frozen};
  }
  static BoundaryCondition transmissive() { return {}; }
};

/// Per-interface relaxation speeds, recomputed every step.
/// a bounds the pressure block (waves u -+ a/h), b the bed block fan used in
/// the CFL reduction (waves u* -+ b/h).
template <typename Scalar>
struct RelaxationParams {
  Scalar a;
  Scalar b;
};

template <typename Scalar>
struct StepReport {
  Scalar dt;           // time increment taken [s]
  Scalar max_speed;    // fastest wave speed in the CFL reduction [m/s]
  Scalar boundary_h;   // net dt-integrated boundary inflow of h [m^2]
  Scalar boundary_zb;  // net dt-integrated boundary inflow of z_b [m^2]
};

enum class SchemeKind { Relaxation, Rusanov };

namespace detail {

/// Cell arrays extended by one ghost layer per side; index 0 and J+1 are
/// ghosts, interior cells live at 1..J.
template <typename Scalar>
struct ExtendedState {
  ArrayX<Scalar> h, hu, z, u, pi, qr;
};

template <typename Scalar>
ExtendedState<Scalar> extend_with_ghosts(const FieldSnapshot<Scalar>& snap,
                                         const ReducedLaw<Scalar>& law, Scalar g,
                                         const BoundaryCondition<Scalar>& bc) {
  const Index n = snap.mesh.cells();
  ExtendedState<Scalar> s;
  for (auto* a : {&s.h, &s.hu, &s.z, &s.u, &s.pi, &s.qr}) a->resize(n + 2);
  s.h.segment(1, n) = snap.h;
  s.hu.segment(1, n) = snap.hu;
  s.z.segment(1, n) = snap.z_b;

  auto fill = [&](Index ghost, Index mirror, BoundaryMode mode, Index ghost_cell) {
    if (mode == BoundaryMode::Transmissive) {
      s.h[ghost] = s.h[mirror];
      s.hu[ghost] = s.hu[mirror];
      s.z[ghost] = s.z[mirror];
      return;
    }
    if (!bc.solution)
      throw std::invalid_argument("exact boundary condition requires a reference solution");
    const Scalar t = bc.frozen_time.value_or(snap.time);
    const auto w = bc.solution->eval(snap.mesh.center(ghost_cell), t);
    if (!(w.h > Scalar(0)))
      throw std::domain_error("exact boundary fill produced nonpositive depth");
    s.h[ghost] = w.h;
    s.hu[ghost] = w.h * w.u;
    s.z[ghost] = w.z_b;
  };
  fill(0, 1, bc.left, -1);
  fill(n + 1, n, bc.right, n);

  for (Index j = 0; j < n + 2; ++j) {
    s.u[j] = velocity(s.h[j], s.hu[j]);
    s.pi[j] = g * s.h[j] * s.h[j] / Scalar(2);
    s.qr[j] = bedload_flux(law, s.u[j]);
  }
  return s;
}

/// Bed-coupling speed sqrt(max_sides dq_b/dq * sqrt(g h)): an upper bound on
/// the slow bed wave that vanishes where transport is insensitive to the
/// flow (rest states, sub-threshold cells, zero-transport laws).
template <typename Scalar>
Scalar bed_coupling_speed(const ReducedLaw<Scalar>& law, Scalar g, Scalar hl, Scalar ul, Scalar hr,
                          Scalar ur) {
  auto side = [&](Scalar h, Scalar u) {
    if (!(h > dry_depth<Scalar>)) return Scalar(0);
    const Scalar dq = bedload_rate_dq(law, h, h * u).first;
    return std::max(dq, Scalar(0)) * std::sqrt(g * h);
  };
  return std::sqrt(std::max(side(hl, ul), side(hr, ur)));
}

template <typename Scalar>
struct InterfaceFluxes {
  Scalar fh;        // mass flux, single-valued
  Scalar fm_left;   // momentum flux applied to the left cell
  Scalar fm_right;  // momentum flux applied to the right cell
  Scalar fz;        // bed flux, single-valued
  Scalar speed;     // fastest wave of this interface
};

/// Interface solver for the five-field relaxation system.
///
/// The pressure block (h, hu, pi) is resolved by a Suliciu fan with waves
/// u_L - a/h_L, u*, u_R + a/h_R. The topography coupling g h dz_b is carried
/// by the contact as a pressure jump pi*_R - pi*_L = -g hbar (z_R - z_L),
/// which reproduces hydrostatic equilibria exactly. The bed block (z_b, q_r)
/// is resolved by its linear sub-fan centered on u* with half-width equal to
/// the bed-coupling speed; where that speed vanishes the bed flux degenerates
/// to plain upwinding of q_r, so a motionless bed is never smeared.
template <typename Scalar>
InterfaceFluxes<Scalar> relaxation_interface(const ExtendedState<Scalar>& s, Index i,
                                             const ReducedLaw<Scalar>& law, Scalar g) {
  const Index l = i, r = i + 1;
  const Scalar hl = s.h[l], hr = s.h[r];
  const Scalar ul = s.u[l], ur = s.u[r];
  const Scalar pil = s.pi[l], pir = s.pi[r];
  const Scalar cl = std::sqrt(g * hl), cr = std::sqrt(g * hr);
  const Scalar du = std::abs(ur - ul);
  const Scalar a = std::max(hl * (cl + Scalar(2) * du), hr * (cr + Scalar(2) * du));
  const Scalar hbar = Scalar(0.5) * (hl + hr);
  const Scalar topo = g * hbar * (s.z[r] - s.z[l]);

  const Scalar u_star = Scalar(0.5) * (ul + ur) + (pil - pir - topo) / (Scalar(2) * a);
  const Scalar pi_star_l =
      Scalar(0.5) * (pil + pir) + Scalar(0.5) * a * (ul - ur) + Scalar(0.5) * topo;
  const Scalar pi_star_r = pi_star_l - topo;
  const Scalar inv_hl = Scalar(1) / hl + (u_star - ul) / a;
  const Scalar inv_hr = Scalar(1) / hr + (ur - u_star) / a;
  if (!(inv_hl > Scalar(0)) || !(inv_hr > Scalar(0)))
    throw SolverError(SolverError::Kind::Positivity,
                      "relaxation interface " + std::to_string(i) +
                          ": intermediate depth lost positivity");
  const Scalar h_star_l = Scalar(1) / inv_hl;
  const Scalar h_star_r = Scalar(1) / inv_hr;
  const Scalar sigma_l = ul - a / hl;
  const Scalar sigma_r = ur + a / hr;

  InterfaceFluxes<Scalar> out{};
  if (sigma_l > Scalar(0)) {
    out.fh = hl * ul;
    out.fm_left = hl * ul * ul + pil;
    out.fm_right = out.fm_left - topo;
  } else if (u_star > Scalar(0)) {
    out.fh = h_star_l * u_star;
    out.fm_left = h_star_l * u_star * u_star + pi_star_l;
    out.fm_right = out.fm_left - topo;
  } else if (u_star < Scalar(0)) {
    if (sigma_r < Scalar(0)) {
      out.fm_right = hr * ur * ur + pir;
      out.fh = hr * ur;
    } else {
      out.fm_right = h_star_r * u_star * u_star + pi_star_r;
      out.fh = h_star_r * u_star;
    }
    out.fm_left = out.fm_right + topo;
  } else {
    out.fh = Scalar(0);
    out.fm_left = pi_star_l;
    out.fm_right = pi_star_r;
  }

  // Bed block: linear fan u* -+ c_b straddling the contact. The half-width
  // adds the bed-coupling margin to |u*|, so the flux always carries a dz
  // dissipation at the slow bed-wave scale; decoupled upwinding of q_r alone
  // is unstable under refinement.
  const Scalar c_m = bed_coupling_speed(law, g, hl, ul, hr, ur);
  const Scalar c_b = std::abs(u_star) + c_m;
  const Scalar qrl = s.qr[l], qrr = s.qr[r];
  if (c_b < Scalar(1e-8)) {
    // No transport and no flow: q_r is passively averaged.
    out.fz = Scalar(0.5) * (qrl + qrr);
  } else {
    const Scalar lam_m = u_star - c_b;
    const Scalar lam_p = u_star + c_b;
    out.fz = qrl + lam_m * (lam_p * (s.z[r] - s.z[l]) - (qrr - qrl)) / (lam_p - lam_m);
  }

  // CFL bound over the full relaxation fan; b deliberately encloses the bed
  // waves with the water speeds on top of the coupling margin.
  const RelaxationParams<Scalar> speeds{
      a, hbar * (std::max(std::abs(ul) + cl, std::abs(ur) + cr) + c_m)};
  const Scalar bed_fan = std::abs(u_star) + std::max(speeds.b / hbar, c_b);
  out.speed = std::max({std::abs(sigma_l), std::abs(sigma_r), bed_fan});
  return out;
}

/// Local Lax-Friedrichs interface for the unrelaxed three-field system.
/// Water dissipation acts on (h + z_b, hu) so hydrostatic states and the
/// interface-split topography source balance exactly; bed dissipation uses
/// the bed-coupling speed only.
template <typename Scalar>
InterfaceFluxes<Scalar> rusanov_interface(const ExtendedState<Scalar>& s, Index i,
                                          const ReducedLaw<Scalar>& law, Scalar g) {
  const Index l = i, r = i + 1;
  const Scalar hl = s.h[l], hr = s.h[r];
  const Scalar ul = s.u[l], ur = s.u[r];
  const Scalar lam_w =
      std::max(std::abs(ul) + std::sqrt(g * hl), std::abs(ur) + std::sqrt(g * hr));
  const Scalar lam_b = bed_coupling_speed(law, g, hl, ul, hr, ur);

  const Scalar dz = s.z[r] - s.z[l];
  const Scalar deta = (s.h[r] + s.z[r]) - (s.h[l] + s.z[l]);
  auto phi = [&](Index j) { return s.hu[j] * s.u[j] + g * s.h[j] * s.h[j] / Scalar(2); };

  InterfaceFluxes<Scalar> out{};
  out.fh = Scalar(0.5) * (s.hu[l] + s.hu[r]) - Scalar(0.5) * lam_w * deta;
  const Scalar fm = Scalar(0.5) * (phi(l) + phi(r)) - Scalar(0.5) * lam_w * (s.hu[r] - s.hu[l]);
  const Scalar topo = g * Scalar(0.5) * (hl + hr) * dz;
  out.fm_left = fm + Scalar(0.5) * topo;
  out.fm_right = fm - Scalar(0.5) * topo;
  out.fz = Scalar(0.5) * (s.qr[l] + s.qr[r]) - Scalar(0.5) * lam_b * dz;
  out.speed = lam_w + lam_b;
  return out;
}

template <typename Scalar>
std::pair<FieldSnapshot<Scalar>, StepReport<Scalar>> explicit_step(
    const FieldSnapshot<Scalar>& snap, const ReducedLaw<Scalar>& law, Scalar g,
    const BoundaryCondition<Scalar>& bc, Scalar cfl, SchemeKind scheme) {
  if (!(cfl > Scalar(0))) throw std::invalid_argument("cfl must be > 0");
  if (!snap.h.allFinite() || !snap.hu.allFinite() || !snap.z_b.allFinite())
    throw SolverError(SolverError::Kind::Divergence, "non-finite input state");
  const Index n = snap.mesh.cells();
  const Scalar dx = snap.mesh.dx();
  const auto s = extend_with_ghosts(snap, law, g, bc);

  std::vector<InterfaceFluxes<Scalar>> flux(static_cast<std::size_t>(n) + 1);
  Scalar vmax = Scalar(0);
  for (Index i = 0; i <= n; ++i) {
    flux[i] = scheme == SchemeKind::Relaxation ? relaxation_interface(s, i, law, g)
                                               : rusanov_interface(s, i, law, g);
    vmax = std::max(vmax, flux[i].speed);
  }
  if (!std::isfinite(vmax) || !(vmax > Scalar(0)))
    throw SolverError(SolverError::Kind::Divergence, "wave-speed reduction is not finite");
  const Scalar dt = cfl * dx / vmax;

  FieldSnapshot<Scalar> next(snap.mesh, snap.time + dt);
  const Scalar r = dt / dx;
  for (Index j = 0; j < n; ++j) {
    next.h[j] = snap.h[j] - r * (flux[j + 1].fh - flux[j].fh);
    next.hu[j] = snap.hu[j] - r * (flux[j + 1].fm_left - flux[j].fm_right);
    next.z_b[j] = snap.z_b[j] - r * (flux[j + 1].fz - flux[j].fz);
    if (!std::isfinite(next.h[j]) || !std::isfinite(next.hu[j]) || !std::isfinite(next.z_b[j]))
      throw SolverError(SolverError::Kind::Divergence,
                        "non-finite state in cell " + std::to_string(j), j);
    if (!(next.h[j] > Scalar(0)))
      throw SolverError(SolverError::Kind::Positivity,
                        "depth lost positivity in cell " + std::to_string(j), j);
  }

  StepReport<Scalar> report{dt, vmax, dt * (flux[0].fh - flux[n].fh),
                            dt * (flux[0].fz - flux[n].fz)};
  return {std::move(next), report};
}

}  // namespace detail

/// One explicit step of the five-field relaxation scheme: instantaneous
/// relaxation to equilibrium, then a Godunov sweep of the transport part.
template <typename Scalar>
std::pair<FieldSnapshot<Scalar>, StepReport<Scalar>> relaxation_step(
    const FieldSnapshot<Scalar>& snap, const ReducedLaw<Scalar>& law, Scalar g,
    const BoundaryCondition<Scalar>& bc, Scalar cfl) {
  return detail::explicit_step(snap, law, g, bc, cfl, SchemeKind::Relaxation);
}

/// One explicit step of the Rusanov cross-check scheme.
template <typename Scalar>
std::pair<FieldSnapshot<Scalar>, StepReport<Scalar>> rusanov_step(
    const FieldSnapshot<Scalar>& snap, const ReducedLaw<Scalar>& law, Scalar g,
    const BoundaryCondition<Scalar>& bc, Scalar cfl) {
  return detail::explicit_step(snap, law, g, bc, cfl, SchemeKind::Rusanov);
}

/// Scheme-dispatching single step.
template <typename Scalar>
std::pair<FieldSnapshot<Scalar>, StepReport<Scalar>> step(const FieldSnapshot<Scalar>& snap,
                                                          const ReducedLaw<Scalar>& law, Scalar g,
                                                          const BoundaryCondition<Scalar>& bc,
                                                          Scalar cfl, SchemeKind scheme) {
  return detail::explicit_step(snap, law, g, bc, cfl, scheme);
}

/// Advances the snapshot to exactly time snap.time + T, clipping the final
/// step. Returns the final snapshot and one report per step taken.
template <typename Scalar>
std::pair<FieldSnapshot<Scalar>, std::vector<StepReport<Scalar>>> integrate(
    const FieldSnapshot<Scalar>& snap, const ReducedLaw<Scalar>& law, Scalar g,
    const BoundaryCondition<Scalar>& bc, Scalar cfl, Scalar T, SchemeKind scheme) {
  if (!(T >= Scalar(0))) throw std::invalid_argument("integrate: T must be >= 0");
  FieldSnapshot<Scalar> state = snap;
  std::vector<StepReport<Scalar>> reports;
  if (T == Scalar(0)) return {std::move(state), std::move(reports)};

  const Scalar t_end = snap.time + T;
  const std::int64_t max_steps = std::max<std::int64_t>(
      1000, static_cast<std::int64_t>(Scalar(10) * Scalar(snap.mesh.cells()) * T / snap.mesh.dx()));
  std::int64_t steps = 0;
  while (state.time < t_end) {
    auto [next, report] = detail::explicit_step(state, law, g, bc, cfl, scheme);
    if (next.time > t_end) {
      // Redo the final step with dt clipped to land exactly on t_end.
      const Scalar clipped = t_end - state.time;
      const Scalar cfl_clip = cfl * clipped / report.dt;
      auto [redo, redo_report] = detail::explicit_step(state, law, g, bc, cfl_clip, scheme);
      redo.time = t_end;
      state = std::move(redo);
      reports.push_back(redo_report);
    } else {
      state = std::move(next);
      reports.push_back(report);
    }
    if (++steps > max_steps)
      throw SolverError(SolverError::Kind::NonTermination,
                        "step budget exhausted before reaching final time", -1, steps);
  }
  state.time = t_end;
  return {std::move(state), std::move(reports)};
}

}  // namespace exner
