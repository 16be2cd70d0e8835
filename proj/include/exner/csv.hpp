#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "exner/exact_solution.hpp"
#include "exner/mesh.hpp"
#include "exner/sediment.hpp"

namespace exner {

/// Shortest-fixed formatting used for all CSV output: 17 significant digits,
/// '.' decimal separator, locale-independent. Identical configs therefore
/// produce byte-identical files.
inline std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return std::string(buf);
}

inline constexpr const char* kCsvHeader = "x,h,u,z_b,eta,q_b";

namespace detail {

inline void write_row(std::ofstream& out, double x, double h, double u, double z_b, double q_b) {
  out << format_real(x) << ',' << format_real(h) << ',' << format_real(u) << ','
      << format_real(z_b) << ',' << format_real(h + z_b) << ',' << format_real(q_b) << '\n';
}

}  // namespace detail

/// Writes one snapshot as CSV with columns x,h,u,z_b,eta,q_b (eta = h + z_b,
/// q_b = signed bedload flux of the cell velocity).
template <typename Scalar>
void write_snapshot_csv(const FieldSnapshot<Scalar>& snap, const ReducedLaw<Scalar>& law,
                        const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << kCsvHeader << '\n';
  for (Index j = 0; j < snap.mesh.cells(); ++j) {
    const Scalar u = velocity(snap.h[j], snap.hu[j]);
    detail::write_row(out, snap.mesh.center(j), snap.h[j], u, snap.z_b[j], bedload_flux(law, u));
  }
}

/// Writes the exact solution sampled at cell centers at time t.
template <typename Scalar>
void write_exact_csv(const Mesh1D<Scalar>& mesh, const ExactSolution<Scalar>& sol, Scalar t,
                     const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << kCsvHeader << '\n';
  for (Index j = 0; j < mesh.cells(); ++j) {
    const Scalar x = mesh.center(j);
    const auto w = sol.eval(x, t);
    detail::write_row(out, x, w.h, w.u, w.z_b, sol.qb_of_exact(x));
  }
}

/// Emits a gnuplot script with the two benchmark panels: free surface and
/// bed elevation on the left, velocity on the right.
inline void write_plot_script(const std::filesystem::path& path, const std::string& computed_csv,
                              const std::string& exact_csv, const std::string& title) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << "set terminal pngcairo size 1200,480\n"
      << "set output 'profiles.png'\n"
      << "set datafile separator ','\n"
      << "set key top left\n"
      << "set multiplot layout 1,2 title '" << title << "'\n"
      << "set xlabel 'x [m]'\n"
      << "set ylabel 'elevation [m]'\n"
      << "plot '" << computed_csv << "' using 1:5 with lines title 'h+z_b computed', \\\n"
      << "     '" << exact_csv << "' using 1:5 with lines dt 2 title 'h+z_b exact', \\\n"
      << "     '" << computed_csv << "' using 1:4 with lines title 'z_b computed', \\\n"
      << "     '" << exact_csv << "' using 1:4 with lines dt 2 title 'z_b exact'\n"
      << "set ylabel 'u [m/s]'\n"
      << "plot '" << computed_csv << "' using 1:3 with lines title 'u computed', \\\n"
      << "     '" << exact_csv << "' using 1:3 with lines dt 2 title 'u exact'\n"
      << "unset multiplot\n";
}

}  // namespace exner
