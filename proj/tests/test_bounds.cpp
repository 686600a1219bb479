#include <doctest.h>

#include <cmath>
#include <limits>

#include "oracles.hpp"
#include "phasebound/bounds.hpp"
#include "phasebound/errors.hpp"
#include "phasebound/qfi_oracle.hpp"

using namespace phasebound;
using phasebound::testing::rel_diff;

TEST_CASE("thermal-loss bound") {
  const InputMoments m{1.0, 4.0};
  CHECK(cq_min_loss_thermal(m, 1.0, 3.0) == doctest::Approx(16.0).epsilon(1e-15));
  CHECK(cq_min_loss_thermal(m, 0.8, 0.0) == doctest::Approx(8.0).epsilon(1e-14));
  // Hot bath: the bound goes to zero.
  CHECK(cq_min_loss_thermal(m, 0.8, 1e12) < 1e-9);
  // Vacuum probes.
  CHECK(cq_min_loss_thermal({0.0, 0.0}, 0.8, 1.0) == 0.0);
  CHECK(cq_min_loss_thermal({2.0, 0.0}, 0.8, 1.0) == 0.0);
  CHECK_THROWS_AS(cq_min_loss_thermal(m, 0.0, 0.0), InvalidParameter);
  CHECK_THROWS_AS(cq_min_loss_thermal(m, 0.5, -1.0), InvalidParameter);
  CHECK_THROWS_AS(cq_min_loss_thermal({-1.0, 1.0}, 0.5, 0.0), InvalidParameter);

  SUBCASE("strictly decreasing in n_T") {
    for (double r : {0.3, 1.0, 2.5}) {
      const InputMoments sq = squeezed_vacuum_moments(r);
      double prev = cq_min_loss_thermal(sq, 0.8, 0.0);
      for (double n_T : {0.1, 1.0, 10.0, 100.0}) {
        const double next = cq_min_loss_thermal(sq, 0.8, n_T);
        CHECK(next < prev);
        prev = next;
      }
    }
  }
}

TEST_CASE("zero-temperature and diffusion bounds") {
  CHECK(cq_min_loss_zero_T({2.0, 12.0}, 0.5) == doctest::Approx(48.0 / 7.0).epsilon(1e-14));
  CHECK(cq_min_loss_zero_T({2.0, 12.0}, 1.0) == doctest::Approx(48.0).epsilon(1e-15));
  for (double r : {0.0, 0.2, 1.0, 4.0}) {
    for (double eta : {0.1, 0.5, 0.99, 1.0}) {
      const InputMoments m = squeezed_vacuum_moments(r);
      CHECK(cq_min_loss_zero_T(m, eta) == cq_min_loss_thermal(m, eta, 0.0));
      CHECK(cq_min_loss_diffusion(m, eta, 0.0) == cq_min_loss_zero_T(m, eta));
    }
  }
  const InputMoments m{3.0, 5.0};
  CHECK(cq_min_loss_diffusion(m, 1.0, 0.2) ==
        doctest::Approx(4.0 / (1.0 / 5.0 + 8.0 * 0.04)).epsilon(1e-14));
  // Diffusion caps the information at 1/(2 lambda^2) however bright the probe.
  CHECK(cq_min_loss_diffusion({1e12, 1e24}, 1.0, 0.1) ==
        doctest::Approx(1.0 / (2.0 * 0.01)).epsilon(1e-9));
  CHECK_THROWS_AS(cq_min_loss_diffusion(m, 1.0, -0.1), InvalidParameter);
}

TEST_CASE("phase-variance bound") {
  const InputMoments m{2.0, 6.0};
  CHECK(phase_variance_bound_full(m, 0.9, 0.0, 0.0) ==
        doctest::Approx(1.0 / cq_min_loss_zero_T(m, 0.9)).epsilon(1e-14));
  CHECK(phase_variance_bound_full(m, 0.9, 0.5, 0.0) ==
        doctest::Approx(1.0 / cq_min_loss_thermal(m, 0.9, 0.5)).epsilon(1e-14));
  CHECK(phase_variance_bound_full(m, 0.8, 0.3, 0.1) >= 2.0 * 0.01);
  CHECK(phase_variance_bound_full({1e14, 1e28}, 1.0, 0.0, 0.1) ==
        doctest::Approx(0.02).epsilon(1e-9));
  CHECK(std::isinf(phase_variance_bound_full({0.0, 0.0}, 0.9, 0.0, 0.1)));
}

TEST_CASE("Gaussian closed forms") {
  CHECK(exact_qfi_squeezed(0.0, 0.7, 0.5) == 0.0);
  for (double r : {0.1, 0.5, 1.0}) {
    const InputMoments m = squeezed_vacuum_moments(r);
    CHECK(exact_qfi_squeezed(r, 1.0, 0.0) == doctest::Approx(4.0 * m.var_n).epsilon(1e-12));
    CHECK(exact_qfi_squeezed(r, 1.0, 0.0) ==
          doctest::Approx(2.0 * std::sinh(2.0 * r) * std::sinh(2.0 * r)).epsilon(1e-12));
    // Lossless: the bound is tight for squeezed vacuum.
    CHECK(cq_min_loss_thermal(m, 1.0, 0.0) == doctest::Approx(exact_qfi_squeezed(r, 1.0, 0.0)));
  }
  CHECK_THROWS_AS(GaussianAux::make(-0.1, 0.5, 0.0), InvalidParameter);
  CHECK_THROWS_AS(GaussianAux::make(0.1, 1.5, 0.0), InvalidParameter);
  const GaussianAux aux = GaussianAux::make(0.4, 0.6, 0.2);
  CHECK(aux.u == doctest::Approx(0.6 * std::sinh(0.8)));
  CHECK(aux.v == doctest::Approx(0.6 * std::cosh(0.8) + 0.4 * 1.4));
  CHECK(aux.v_minus_u == doctest::Approx(aux.v - aux.u).epsilon(1e-14));
  CHECK(aux.symplectic_denominator() == doctest::Approx(1.0 + aux.v * aux.v - aux.u * aux.u));

  // Strong squeezing: compare with a long-double evaluation of the textbook form.
  for (double r : {3.0, 5.0, 8.0}) {
    const long double e = 0.95L;
    const long double ul = e * std::sinh(2.0L * r);
    const long double vl = e * std::cosh(2.0L * r) + (1.0L - e);
    const long double q = 4.0L * ul * ul / (1.0L + vl * vl - ul * ul);
    // The reference also cancels, but with 64-bit mantissas it stays ~1e-11.
    CHECK(rel_diff(exact_qfi_squeezed(r, 0.95, 0.0), static_cast<double>(q)) < 1e-10);
    CHECK(rel_diff(im_opt_squeezed(r, 0.95, 0.0), static_cast<double>(q)) < 1e-10);
  }
}

TEST_CASE("optimal quadrature information") {
  CHECK(im_opt_squeezed(0.0, 0.8, 0.1) == 0.0);
  for (double r : {0.1, 0.5, 1.5, 3.0}) {
    for (double eta : {0.5, 0.95, 1.0}) {
      CAPTURE(r);
      CAPTURE(eta);
      CHECK(rel_diff(im_opt_squeezed(r, eta, 0.0), exact_qfi_squeezed(r, eta, 0.0)) < 1e-12);
      for (double lambda : {0.05, 0.1, 0.3}) {
        const InputMoments m = squeezed_vacuum_moments(r);
        CHECK(im_opt_squeezed(r, eta, lambda) <= cq_min_loss_diffusion(m, eta, lambda));
        CHECK(im_opt_squeezed(r, eta, lambda) < im_opt_squeezed(r, eta, 0.0));
      }
    }
  }
}

TEST_CASE("raw purification forms") {
  const InputMoments m{2.0, 12.0};
  // Trivial environment unitary: the raw form is the pure-state value.
  CHECK(raw_cq_loss_thermal(m, 1.0, 0.0, 0.0, 0.0, 0.0) == doctest::Approx(48.0));
  CHECK(raw_cq_loss_diffusion(m, 1.0, 0.3, 1.0, 0.0) == doctest::Approx(48.0));
  CHECK(std::isinf(raw_cq_loss_diffusion(m, 0.9, 0.0, 0.0, 0.5)));
  CHECK(raw_cq_loss_diffusion(m, 0.9, 0.0, 0.0, 0.0) < std::numeric_limits<double>::infinity());

  SUBCASE("lossless diffusion optimum in closed form") {
    const double lambda = 0.2;
    const double k = 8.0 * lambda * lambda * m.var_n;
    const double beta = k / (1.0 + k);
    CHECK(raw_cq_loss_diffusion(m, 1.0, lambda, 0.0, beta) ==
          doctest::Approx(cq_min_loss_diffusion(m, 1.0, lambda)).epsilon(1e-13));
    for (double db : {-1e-3, 1e-3})
      CHECK(raw_cq_loss_diffusion(m, 1.0, lambda, 0.0, beta + db) >
            raw_cq_loss_diffusion(m, 1.0, lambda, 0.0, beta));
  }

  SUBCASE("minimized raw forms on a grid") {
    for (double r : {0.2, 0.8, 1.6}) {
      for (double eta : {0.3, 0.8, 1.0}) {
        for (double n_T : {0.0, 1.0, 10.0}) {
          CAPTURE(r);
          CAPTURE(eta);
          CAPTURE(n_T);
          const InputMoments sq = squeezed_vacuum_moments(r);
          auto f = [&](std::span<const double> x) {
            return raw_cq_loss_thermal(sq, eta, n_T, x[0], x[1], x[2]);
          };
          CHECK(rel_diff(minimize_raw_cq(f, {0.0, 0.0, 0.0}).value,
                         cq_min_loss_thermal(sq, eta, n_T)) < 1e-6);
        }
      }
    }
  }
}

TEST_CASE("upper-bound validity against the oracle") {
  for (double r : {0.2, 0.5, 0.8}) {
    for (double eta : {0.5, 0.8, 0.95}) {
      for (double n_T : {0.0, 0.5, 2.0}) {
        CAPTURE(r);
        CAPTURE(eta);
        CAPTURE(n_T);
        const double oracle = oracle_qfi_squeezed(r, {eta, n_T, 0.0});
        CHECK(cq_min_loss_thermal(squeezed_vacuum_moments(r), eta, n_T) >= oracle - 1e-9);
      }
      for (double lambda : {0.05, 0.2}) {
        const double oracle = oracle_qfi_squeezed(r, {eta, 0.0, lambda});
        CHECK(cq_min_loss_diffusion(squeezed_vacuum_moments(r), eta, lambda) >= oracle - 1e-9);
      }
    }
  }
}

TEST_CASE("saturation at large energy") {
  for (double n_T : {10.0, 100.0}) {
    const double r = squeezing_for_mean(1e4);
    const double ratio =
        cq_min_loss_thermal(squeezed_vacuum_moments(r), 0.8, n_T) / exact_qfi_squeezed(r, 0.8, n_T);
    CHECK(ratio >= 1.0);
    CHECK(ratio <= 1.05);
  }
}
