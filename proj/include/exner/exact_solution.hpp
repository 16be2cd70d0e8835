#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "exner/sediment.hpp"
#include "exner/types.hpp"

namespace exner {

/// Pointwise primitive state of the coupled system.
template <typename Scalar>
struct PrimitiveState {
  Scalar h;    // water depth [m]
  Scalar u;    // velocity [m/s]
  Scalar z_b;  // bed elevation [m]
};

/// Closed-form smooth unsteady solution of the coupled shallow-water /
/// bed-evolution system for a uniform discharge q:
///
///   u_e^2 = ((alpha x + beta) / A)^(1/p),  u = sqrt(u_e^2 + u_cr^2),
///   h = q / u,
///   z_b0 = -(u^3 + 2 g q) / (2 g u) + C,   z_b = -alpha t + z_b0.
///
/// h and u are time-independent; the bed translates downward at rate alpha.
/// The bedload flux evaluates to exactly alpha x + beta along the solution.
/// Defined wherever alpha x + beta > 0.
template <typename Scalar>
class ExactSolution {
 public:
  ExactSolution(Scalar q, Scalar alpha, Scalar beta, Scalar C, ReducedLaw<Scalar> law,
                Scalar g = Scalar(9.81))
      : q_(q), alpha_(alpha), beta_(beta), C_(C), law_(law), g_(g) {
    if (!(q > Scalar(0))) throw std::invalid_argument("exact solution: q must be > 0");
    if (!(law.A > Scalar(0))) throw std::invalid_argument("exact solution: law must have A > 0");
    if (!(law.p > Scalar(0))) throw std::invalid_argument("exact solution: law must have p > 0");
    if (!(g > Scalar(0))) throw std::invalid_argument("exact solution: g must be > 0");
  }

  Scalar q() const { return q_; }
  Scalar alpha() const { return alpha_; }
  Scalar beta() const { return beta_; }
  Scalar integration_constant() const { return C_; }
  Scalar gravity() const { return g_; }
  const ReducedLaw<Scalar>& law() const { return law_; }

  bool in_domain(Scalar x) const { return alpha_ * x + beta_ > Scalar(0); }

  Scalar velocity(Scalar x) const {
    require_domain(x);
    const Scalar ue_sq = std::pow((alpha_ * x + beta_) / law_.A, Scalar(1) / law_.p);
    return std::sqrt(ue_sq + law_.u_cr_sq);
  }

  Scalar depth(Scalar x) const { return q_ / velocity(x); }

  Scalar bed_initial(Scalar x) const {
    const Scalar u = velocity(x);
    return -(u * u * u + Scalar(2) * g_ * q_) / (Scalar(2) * g_ * u) + C_;
  }

  Scalar bed(Scalar x, Scalar t) const { return -alpha_ * t + bed_initial(x); }

  PrimitiveState<Scalar> eval(Scalar x, Scalar t) const {
    const Scalar u = velocity(x);
    const Scalar z0 = -(u * u * u + Scalar(2) * g_ * q_) / (Scalar(2) * g_ * u) + C_;
    return {q_ / u, u, -alpha_ * t + z0};
  }

  Scalar free_surface(Scalar x, Scalar t) const {
    const auto w = eval(x, t);
    return w.h + w.z_b;
  }

  /// Bedload flux along the solution; equals alpha x + beta analytically.
  Scalar qb_of_exact(Scalar x) const { return bedload_rate(law_, velocity(x)); }

  /// Closed-form du/dx.
  Scalar du_dx(Scalar x) const {
    require_domain(x);
    const Scalar y = (alpha_ * x + beta_) / law_.A;
    const Scalar due_sq = std::pow(y, Scalar(1) / law_.p - Scalar(1)) * alpha_ / (law_.p * law_.A);
    return due_sq / (Scalar(2) * velocity(x));
  }

  /// Closed-form d z_b0 / dx = (q / u^2 - u / g) du/dx.
  Scalar dzb0_dx(Scalar x) const {
    const Scalar u = velocity(x);
    return (q_ / (u * u) - u / g_) * du_dx(x);
  }

 private:
  void require_domain(Scalar x) const {
    if (!in_domain(x))
      throw std::domain_error("exact solution undefined at x = " + std::to_string(double(x)) +
                              ": alpha x + beta <= 0");
  }

  Scalar q_;
  Scalar alpha_;
  Scalar beta_;
  Scalar C_;
  ReducedLaw<Scalar> law_;
  Scalar g_;
};

/// Central finite-difference residuals of the three governing equations
/// evaluated on the exact solution. Each component is O(dx^2 + dt^2).
template <typename Scalar>
struct PdeResidual {
  Scalar mass;
  Scalar momentum;
  Scalar bed;
};

template <typename Scalar>
PdeResidual<Scalar> residual(const ExactSolution<Scalar>& sol, Scalar x, Scalar t, Scalar dx,
                             Scalar dt) {
  const Scalar g = sol.gravity();
  const auto wl = sol.eval(x - dx, t);
  const auto wr = sol.eval(x + dx, t);
  const auto wc = sol.eval(x, t);
  const auto wtm = sol.eval(x, t - dt);
  const auto wtp = sol.eval(x, t + dt);

  auto momentum_flux = [g](const PrimitiveState<Scalar>& w) {
    return w.h * w.u * w.u + g * w.h * w.h / Scalar(2);
  };

  const Scalar mass = (wtp.h - wtm.h) / (Scalar(2) * dt) +
                      (wr.h * wr.u - wl.h * wl.u) / (Scalar(2) * dx);
  const Scalar momentum = (wtp.h * wtp.u - wtm.h * wtm.u) / (Scalar(2) * dt) +
                          (momentum_flux(wr) - momentum_flux(wl)) / (Scalar(2) * dx) +
                          g * wc.h * (wr.z_b - wl.z_b) / (Scalar(2) * dx);
  const Scalar bed = (wtp.z_b - wtm.z_b) / (Scalar(2) * dt) +
                     (sol.qb_of_exact(x + dx) - sol.qb_of_exact(x - dx)) / (Scalar(2) * dx);
  return {mass, momentum, bed};
}

}  // namespace exner
