#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "exner/sediment.hpp"

#include "testing.hpp"

using namespace exner;

namespace {

SedimentLaw<double> reference_law() {
  // f, s, d_s from the worked examples; MPM threshold parameters.
  return meyer_peter_mueller(0.1, 2.65, 0.001, 9.81);
}

SedimentLaw<double> random_law(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> kappa(0.5, 10.0), p(1.0, 2.5), tau(0.0, 0.06),
      f(0.02, 0.3), s(1.3, 3.0), d(1e-4, 0.01);
  return {kappa(rng), p(rng), tau(rng), f(rng), s(rng), d(rng), 9.81};
}

}  // namespace

TEST_CASE("shields stress") {
  const auto law = reference_law();
  CHECK(shields_stress(law, 0.0) == 0.0);
  // Hand arithmetic: f u^2 / (8 (s-1) g d_s) at u = 1.
  const double expected = 0.1 / (8.0 * 1.65 * 9.81 * 0.001);
  CHECK(shields_stress(law, 1.0) == testing::rel(expected, 1e-15));
  CHECK(shields_stress(law, 1.0) == testing::rel(0.772248, 1e-6));

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> vel(-5.0, 5.0);
  for (int i = 0; i < 50; ++i) {
    const auto l = random_law(rng);
    const double u = vel(rng);
    CHECK(shields_stress(l, u) == shields_stress(l, -u));
  }
}

TEST_CASE("effective parameters") {
  SUBCASE("zero threshold gives zero critical velocity") {
    auto law = reference_law();
    law.tau_cr = 0.0;
    CHECK(effective_params(law).second == 0.0);
  }

  SUBCASE("MPM reference values") {
    const auto [A, u_cr_sq] = effective_params(reference_law());
    CHECK(u_cr_sq == testing::rel(0.060861, 1e-4));
    CHECK(A == testing::rel(6.9072e-4, 1e-4));
  }

  SUBCASE("independent term-by-term evaluation") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 50; ++i) {
      const auto law = random_law(rng);
      const auto [A, u_cr_sq] = effective_params(law);
      // Alternative route: exp/log power and factored diameter scaling.
      const double r = law.f / (8.0 * (law.s - 1.0) * law.g * law.d_s);
      const double A_ref = law.kappa * std::exp(law.p * std::log(r)) *
                           std::sqrt((law.s - 1.0) * law.g) * std::pow(law.d_s, 1.5);
      const double u_ref = law.tau_cr * 8.0 * (law.s - 1.0) * law.g * law.d_s / law.f;
      CHECK(A == testing::rel(A_ref, 1e-12));
      CHECK(u_cr_sq == testing::rel(u_ref, 1e-12));
    }
  }

  SUBCASE("grass preset maps directly") {
    const auto reduced = reduce(GrassLaw<double>{0.005});
    CHECK(reduced.A == 0.005);
    CHECK(reduced.u_cr_sq == 0.0);
    CHECK(reduced.p == 1.5);
  }
}

TEST_CASE("bedload rate") {
  const GrassLaw<double> grass{0.005};
  CHECK(bedload_rate(grass, 1.0) == testing::rel(0.005, 1e-15));

  const auto mpm = reference_law();
  const double u_cr = std::sqrt(effective_params(mpm).second);
  CHECK(bedload_rate(mpm, u_cr) == 0.0);
  CHECK(bedload_rate(mpm, u_cr / 2) == 0.0);

  SUBCASE("even in u, exactly") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> vel(-4.0, 4.0);
    for (int i = 0; i < 100; ++i) {
      const auto l = random_law(rng);
      const double u = vel(rng);
      CHECK(bedload_rate(l, u) == bedload_rate(l, -u));
    }
  }

  SUBCASE("grass equals A_g |u|^3") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> vel(-4.0, 4.0);
    for (int i = 0; i < 100; ++i) {
      const double u = vel(rng);
      const double expected = 0.005 * std::abs(u) * std::abs(u) * std::abs(u);
      CHECK(bedload_rate(grass, u) == testing::rel(expected, 1e-14));
    }
  }

  SUBCASE("continuous at the threshold") {
    const auto reduced = reduce(mpm);
    const double u = std::sqrt(reduced.u_cr_sq * (1.0 + 1e-12));
    const double bound =
        1e-12 * reduced.A * std::max(1.0, std::pow(reduced.u_cr_sq, reduced.p));
    CHECK(bedload_rate(mpm, u) <= bound);
  }

  SUBCASE("signed flux moves with the flow") {
    CHECK(bedload_flux(reduce(grass), 2.0) > 0.0);
    CHECK(bedload_flux(reduce(grass), -2.0) == -bedload_flux(reduce(grass), 2.0));
    CHECK(bedload_flux(reduce(grass), 0.0) == 0.0);
  }
}

TEST_CASE("bedload flux derivatives") {
  const auto grass = reduce(GrassLaw<double>{0.005});

  SUBCASE("nonpositive depth is rejected") {
    CHECK_THROWS_AS(bedload_rate_dq(grass, 0.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(bedload_rate_dq(grass, -1.0, 1.0), std::domain_error);
  }

  SUBCASE("sub-threshold region is flat") {
    const auto mpm = reference_law();
    const double u_cr = std::sqrt(effective_params(mpm).second);
    const auto [dq, dh] = bedload_rate_dq(mpm, 1.0, 0.5 * u_cr);
    CHECK(dq == 0.0);
    CHECK(dh == 0.0);
  }

  SUBCASE("grass closed form: dq_b/dq = 3 A u^2") {
    const auto [dq, dh] = bedload_rate_dq(grass, 1.0, 1.0);
    CHECK(dq == testing::rel(0.015, 1e-14));
    CHECK(dh == testing::rel(-0.015, 1e-14));
  }

  SUBCASE("central differences agree away from the threshold") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> depth(0.3, 3.0), vel(0.8, 4.0), sign(0.0, 1.0);
    const double eps = 1e-6;
    for (int i = 0; i < 60; ++i) {
      const auto law = reduce(random_law(rng));
      const double h = depth(rng);
      double u = vel(rng) + std::sqrt(law.u_cr_sq);  // stay clear of the kink
      if (sign(rng) < 0.5) u = -u;
      const double q = h * u;
      const auto [dq, dh] = bedload_rate_dq(law, h, q);
      const double fd_q =
          (bedload_flux(law, (q + eps) / h) - bedload_flux(law, (q - eps) / h)) / (2 * eps);
      const double fd_h =
          (bedload_flux(law, q / (h + eps)) - bedload_flux(law, q / (h - eps))) / (2 * eps);
      CHECK(dq == testing::rel(fd_q, 1e-6));
      CHECK(dh == testing::rel(fd_h, 1e-6));
    }
  }
}

TEST_CASE("validation rejects out-of-range parameters") {
  auto law = reference_law();
  CHECK_NOTHROW(validate(law));
  law.s = 1.0;
  CHECK_THROWS_AS(validate(law), std::invalid_argument);
  law = reference_law();
  law.f = 0.0;
  CHECK_THROWS_AS(validate(law), std::invalid_argument);
  law = reference_law();
  law.kappa = -1.0;
  CHECK_THROWS_AS(validate(law), std::invalid_argument);
  CHECK_THROWS_AS(validate(GrassLaw<double>{0.0}), std::invalid_argument);

  // kappa = 0 is a valid zero-transport law.
  law = reference_law();
  law.kappa = 0.0;
  CHECK_NOTHROW(validate(law));
  CHECK(reduce(law).A == 0.0);
  CHECK(bedload_rate(law, 2.0) == 0.0);
}

TEST_CASE("scalar-generic instantiation") {
  const ReducedLaw<float> law{0.005f, 0.0f, 1.5f};
  CHECK(bedload_rate(law, 1.0f) == testing::rel(0.005f, 1e-6));
}
