#pragma once

#include <cmath>
#include <stdexcept>

#include "exner/exact_solution.hpp"
#include "exner/sediment.hpp"
#include "exner/types.hpp"

namespace exner {

/// Uniform 1D finite-volume grid with J cells on [x_min, x_max].
template <typename Scalar>
class Mesh1D {
 public:
  Mesh1D(Scalar x_min, Scalar x_max, Index cells) : x_min_(x_min), x_max_(x_max), cells_(cells) {
    if (!(x_max > x_min)) throw std::invalid_argument("mesh: x_max must exceed x_min");
    if (cells < 2) throw std::invalid_argument("mesh: at least 2 cells required");
    dx_ = (x_max - x_min) / Scalar(cells);
  }

  Scalar x_min() const { return x_min_; }
  Scalar x_max() const { return x_max_; }
  Index cells() const { return cells_; }
  Scalar dx() const { return dx_; }

  /// Center of cell j (j may be -1 or J for ghost cells).
  Scalar center(Index j) const { return x_min_ + (Scalar(j) + Scalar(0.5)) * dx_; }

  ArrayX<Scalar> centers() const {
    ArrayX<Scalar> x(cells_);
    for (Index j = 0; j < cells_; ++j) x[j] = center(j);
    return x;
  }

  bool operator==(const Mesh1D& other) const {
    return x_min_ == other.x_min_ && x_max_ == other.x_max_ && cells_ == other.cells_;
  }

 private:
  Scalar x_min_;
  Scalar x_max_;
  Index cells_;
  Scalar dx_;
};

/// Conserved variables of one cell.
template <typename Scalar>
struct CellState {
  Scalar h;
  Scalar hu;
  Scalar z_b;
};

/// Cell state extended with the relaxation variables.
template <typename Scalar>
struct RelaxCellState {
  Scalar h;
  Scalar hu;
  Scalar z_b;
  Scalar pi;   // relaxed pressure, g h^2 / 2 at equilibrium
  Scalar q_r;  // relaxed bedload flux, q_b at equilibrium
};

/// Velocity hu/h, with a dry-cell guard below dry_depth.
template <typename Scalar>
Scalar velocity(Scalar h, Scalar hu) {
  return h > dry_depth<Scalar> ? hu / h : Scalar(0);
}

/// Per-cell fields (h, hu, z_b) on a mesh at one instant.
template <typename Scalar>
struct FieldSnapshot {
  Mesh1D<Scalar> mesh;
  Scalar time;
  ArrayX<Scalar> h;
  ArrayX<Scalar> hu;
  ArrayX<Scalar> z_b;

  explicit FieldSnapshot(const Mesh1D<Scalar>& m, Scalar t = Scalar(0))
      : mesh(m),
        time(t),
        h(ArrayX<Scalar>::Zero(m.cells())),
        hu(ArrayX<Scalar>::Zero(m.cells())),
        z_b(ArrayX<Scalar>::Zero(m.cells())) {}

  CellState<Scalar> cell(Index j) const { return {h[j], hu[j], z_b[j]}; }

  ArrayX<Scalar> velocities() const {
    ArrayX<Scalar> u(h.size());
    for (Index j = 0; j < h.size(); ++j) u[j] = velocity(h[j], hu[j]);
    return u;
  }

  ArrayX<Scalar> free_surface() const { return h + z_b; }
};

/// Snapshot extended with the relaxation fields.
template <typename Scalar>
struct RelaxSnapshot {
  FieldSnapshot<Scalar> base;
  ArrayX<Scalar> pi;
  ArrayX<Scalar> q_r;

  RelaxCellState<Scalar> cell(Index j) const {
    return {base.h[j], base.hu[j], base.z_b[j], pi[j], q_r[j]};
  }
};

/// Samples the exact solution at cell centers (pointwise, not cell-averaged).
template <typename Scalar>
FieldSnapshot<Scalar> project_exact(const Mesh1D<Scalar>& mesh, const ExactSolution<Scalar>& sol,
                                    Scalar t) {
  FieldSnapshot<Scalar> snap(mesh, t);
  for (Index j = 0; j < mesh.cells(); ++j) {
    const auto w = sol.eval(mesh.center(j), t);
    snap.h[j] = w.h;
    snap.hu[j] = w.h * w.u;
    snap.z_b[j] = w.z_b;
  }
  return snap;
}

/// Instantaneous relaxation onto the equilibrium manifold:
/// pi = g h^2 / 2 and q_r = signed bedload flux of the cell velocity.
template <typename Scalar>
RelaxSnapshot<Scalar> equilibrium_lift(const FieldSnapshot<Scalar>& snap,
                                       const ReducedLaw<Scalar>& law, Scalar g) {
  RelaxSnapshot<Scalar> out{snap, ArrayX<Scalar>(snap.h.size()), ArrayX<Scalar>(snap.h.size())};
  for (Index j = 0; j < snap.h.size(); ++j) {
    out.pi[j] = g * snap.h[j] * snap.h[j] / Scalar(2);
    out.q_r[j] = bedload_flux(law, velocity(snap.h[j], snap.hu[j]));
  }
  return out;
}

/// Discrete L1/L2/Linf error norms of one field, cell-width weighted.
template <typename Scalar>
struct NormTriple {
  Scalar l1;
  Scalar l2;
  Scalar linf;
};

template <typename Scalar>
struct FieldErrors {
  NormTriple<Scalar> abs;
  NormTriple<Scalar> rel;
};

/// Norms of (computed - exact) with dx weighting. Relative norms divide by
/// the matching norm of the exact field; when that norm is below 1e-14 the
/// absolute value is reported instead.
template <typename Scalar>
FieldErrors<Scalar> field_errors(const ArrayX<Scalar>& computed, const ArrayX<Scalar>& exact,
                                 Scalar dx) {
  const ArrayX<Scalar> err = computed - exact;
  NormTriple<Scalar> a{dx * err.abs().sum(), std::sqrt(dx * err.square().sum()),
                       err.abs().maxCoeff()};
  NormTriple<Scalar> e{dx * exact.abs().sum(), std::sqrt(dx * exact.square().sum()),
                       exact.abs().maxCoeff()};
  auto rel = [](Scalar num, Scalar den) {
    return den < Scalar(1e-14) ? num : num / den;
  };
  return {a, {rel(a.l1, e.l1), rel(a.l2, e.l2), rel(a.linf, e.linf)}};
}

/// Error norms of a snapshot against the exact solution at the same time,
/// measured on the plotted fields (h, u, z_b).
template <typename Scalar>
struct SnapshotErrors {
  FieldErrors<Scalar> h;
  FieldErrors<Scalar> u;
  FieldErrors<Scalar> z_b;
};

template <typename Scalar>
SnapshotErrors<Scalar> norms(const FieldSnapshot<Scalar>& snap, const ExactSolution<Scalar>& sol) {
  const Index n = snap.mesh.cells();
  ArrayX<Scalar> h_ex(n), u_ex(n), z_ex(n);
  for (Index j = 0; j < n; ++j) {
    const auto w = sol.eval(snap.mesh.center(j), snap.time);
    h_ex[j] = w.h;
    u_ex[j] = w.u;
    z_ex[j] = w.z_b;
  }
  const Scalar dx = snap.mesh.dx();
  return {field_errors(snap.h, h_ex, dx), field_errors(snap.velocities(), u_ex, dx),
          field_errors(snap.z_b, z_ex, dx)};
}

}  // namespace exner
