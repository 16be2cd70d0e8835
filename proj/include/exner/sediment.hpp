#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "exner/types.hpp"

namespace exner {

/// Threshold bedload law q_b = kappa (tau* - tau*_cr)^p sqrt((s-1) g d_s^3),
/// with the dimensionless shear stress tau* given by the Darcy-Weisbach
/// closure tau* = f u^2 / (8 (s-1) g d_s).
template <typename Scalar>
struct SedimentLaw {
  Scalar kappa;   // empirical coefficient, dimensionless
  Scalar p;       // exponent, dimensionless
  Scalar tau_cr;  // critical Shields stress, dimensionless
  Scalar f;       // Darcy-Weisbach friction coefficient, dimensionless
  Scalar s;       // relative sediment density rho_s / rho
  Scalar d_s;     // sediment diameter [m]
  Scalar g;       // gravity [m/s^2]
};

/// Thresholdless cubic law q_b = A_g u^3.
template <typename Scalar>
struct GrassLaw {
  Scalar A_g;  // interaction coefficient [s m^-1 scaled so q_b = A_g u^3]
};

/// Canonical reduced form q_b = A (u^2 - u_cr^2)_+^p shared by every law in
/// the family. All solver-side operations consume this type.
template <typename Scalar>
struct ReducedLaw {
  Scalar A;        // interaction coefficient
  Scalar u_cr_sq;  // squared threshold velocity [m^2/s^2]
  Scalar p;        // exponent
};

template <typename Scalar>
void validate(const SedimentLaw<Scalar>& law) {
  auto fail = [](const std::string& msg) { throw std::invalid_argument("sediment law: " + msg); };
  if (!(law.kappa >= Scalar(0))) fail("kappa must be >= 0");
  if (!(law.p > Scalar(0))) fail("p must be > 0");
  if (!(law.tau_cr >= Scalar(0))) fail("tau_cr must be >= 0");
  if (!(law.f > Scalar(0))) fail("f must be > 0");
  if (!(law.s > Scalar(1))) fail("s must be > 1");
  if (!(law.d_s > Scalar(0))) fail("d_s must be > 0");
  if (!(law.g > Scalar(0))) fail("g must be > 0");
}

template <typename Scalar>
void validate(const GrassLaw<Scalar>& law) {
  if (!(law.A_g > Scalar(0))) throw std::invalid_argument("grass law: A_g must be > 0");
}

/// Meyer-Peter & Mueller preset: kappa = 8, p = 3/2, tau*_cr = 0.047.
template <typename Scalar>
SedimentLaw<Scalar> meyer_peter_mueller(Scalar f, Scalar s, Scalar d_s, Scalar g) {
  return SedimentLaw<Scalar>{Scalar(8), Scalar(1.5), Scalar(0.047), f, s, d_s, g};
}

/// Dimensionless bottom shear stress tau* = f u^2 / (8 (s-1) g d_s).
template <typename Scalar>
Scalar shields_stress(const SedimentLaw<Scalar>& law, Scalar u) {
  return law.f * u * u / (Scalar(8) * (law.s - Scalar(1)) * law.g * law.d_s);
}

/// Interaction coefficient A and squared threshold velocity u_cr^2 of the
/// reduced form. r = f / (8 (s-1) g d_s) maps u^2 to tau*, so
/// u_cr^2 = tau*_cr / r and A = kappa r^p sqrt((s-1) g d_s^3).
template <typename Scalar>
std::pair<Scalar, Scalar> effective_params(const SedimentLaw<Scalar>& law) {
  const Scalar r = law.f / (Scalar(8) * (law.s - Scalar(1)) * law.g * law.d_s);
  const Scalar u_cr_sq = law.tau_cr / r;
  const Scalar A = law.kappa * std::pow(r, law.p) *
                   std::sqrt((law.s - Scalar(1)) * law.g * law.d_s * law.d_s * law.d_s);
  return {A, u_cr_sq};
}

template <typename Scalar>
ReducedLaw<Scalar> reduce(const SedimentLaw<Scalar>& law) {
  const auto [A, u_cr_sq] = effective_params(law);
  return ReducedLaw<Scalar>{A, u_cr_sq, law.p};
}

template <typename Scalar>
ReducedLaw<Scalar> reduce(const GrassLaw<Scalar>& law) {
  return ReducedLaw<Scalar>{law.A_g, Scalar(0), Scalar(1.5)};
}

/// Bedload transport magnitude A (u^2 - u_cr^2)_+^p. Even in u; zero at and
/// below the threshold.
template <typename Scalar>
Scalar bedload_rate(const ReducedLaw<Scalar>& law, Scalar u) {
  const Scalar excess = u * u - law.u_cr_sq;
  if (excess <= Scalar(0)) return Scalar(0);
  return law.A * std::pow(excess, law.p);
}

template <typename Scalar>
Scalar bedload_rate(const SedimentLaw<Scalar>& law, Scalar u) {
  return bedload_rate(reduce(law), u);
}

template <typename Scalar>
Scalar bedload_rate(const GrassLaw<Scalar>& law, Scalar u) {
  return bedload_rate(reduce(law), u);
}

/// Signed bedload flux sign(u) q_b(|u|): sediment moves with the flow.
template <typename Scalar>
Scalar bedload_flux(const ReducedLaw<Scalar>& law, Scalar u) {
  const Scalar magnitude = bedload_rate(law, u);
  return u < Scalar(0) ? -magnitude : magnitude;
}

/// Partial derivatives (d q_b / d q, d q_b / d h) of the signed flux seen as
/// q_b(h, q) with u = q / h. Zero in the sub-threshold region and, one-sided,
/// at the threshold itself. Used for bed wave-speed bounds.
template <typename Scalar>
std::pair<Scalar, Scalar> bedload_rate_dq(const ReducedLaw<Scalar>& law, Scalar h, Scalar q) {
  if (!(h > Scalar(0))) throw std::domain_error("bedload_rate_dq: depth must be positive");
  const Scalar u = q / h;
  const Scalar excess = u * u - law.u_cr_sq;
  if (excess <= Scalar(0)) return {Scalar(0), Scalar(0)};
  const Scalar dd_du = Scalar(2) * law.p * std::abs(u) * law.A * std::pow(excess, law.p - Scalar(1));
  return {dd_du / h, -u * dd_du / h};
}

template <typename Scalar>
std::pair<Scalar, Scalar> bedload_rate_dq(const SedimentLaw<Scalar>& law, Scalar h, Scalar q) {
  return bedload_rate_dq(reduce(law), h, q);
}

template <typename Scalar>
std::pair<Scalar, Scalar> bedload_rate_dq(const GrassLaw<Scalar>& law, Scalar h, Scalar q) {
  return bedload_rate_dq(reduce(law), h, q);
}

}  // namespace exner
