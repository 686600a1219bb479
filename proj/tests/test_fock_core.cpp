#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "phasebound/errors.hpp"
#include "phasebound/fock_core.hpp"

using namespace phasebound;
using phasebound::testing::max_abs_diff;
using phasebound::testing::random_density;

TEST_CASE("number operator") {
  const RMatrix n2 = number_operator(2);
  CHECK(n2(0, 0) == 0.0);
  CHECK(n2(1, 1) == 1.0);
  CHECK(n2(0, 1) == 0.0);
  CHECK(number_operator(4).diagonal().sum() == 6.0);
  CHECK(number_operator(10).trace() == 45.0);
  CHECK_THROWS_AS(number_operator(1), InvalidDimension);
  CHECK_THROWS_AS(number_operator(0), InvalidDimension);
}

TEST_CASE("annihilation operator") {
  const CMatrix a2 = annihilation_operator(2);
  CHECK(a2(0, 1) == Complex(1.0, 0.0));
  CHECK(std::abs(a2(0, 0)) == 0.0);
  CHECK(std::abs(a2(1, 0)) == 0.0);
  CHECK(std::abs(a2(1, 1)) == 0.0);

  for (int d : {2, 5, 12}) {
    const CMatrix a = annihilation_operator(d);
    const CMatrix n = a.adjoint() * a;
    CHECK(max_abs_diff(n, number_operator(d).cast<Complex>()) < 1e-14);
    // [a, a^dag] is the identity except on the truncation edge.
    const CMatrix comm = a * a.adjoint() - a.adjoint() * a;
    for (int i = 0; i < d - 1; ++i) CHECK(std::abs(comm(i, i) - 1.0) < 1e-12);
    CHECK(std::abs(comm(d - 1, d - 1) + (d - 1.0)) < 1e-12);
  }
  CHECK_THROWS_AS(annihilation_operator(1), InvalidDimension);
}

TEST_CASE("FockVector and DensityMatrix validation") {
  CHECK_THROWS_AS(FockVector(CVector::Ones(1)), InvalidDimension);
  CHECK_THROWS_AS(FockVector(CVector::Zero(3)), InvalidParameter);
  const FockVector v(CVector::Ones(4));
  CHECK(std::abs(v.amps().norm() - 1.0) < 1e-15);
  CHECK(std::abs(FockVector::number_state(2, 3)[2] - 1.0) < 1e-15);

  CMatrix bad = CMatrix::Zero(2, 2);
  bad(0, 0) = 1.0;
  bad(0, 1) = 0.3;  // not Hermitian
  CHECK_THROWS_AS(DensityMatrix{bad}, InvalidState);
  CMatrix half = CMatrix::Identity(2, 2) * 0.4;  // trace 0.8
  CHECK_THROWS_AS(DensityMatrix{half}, InvalidState);
  CMatrix neg = CMatrix::Zero(2, 2);
  neg(0, 0) = 1.2;
  neg(1, 1) = -0.2;
  CHECK_THROWS_AS(DensityMatrix{neg}, InvalidState);
  CHECK_THROWS_AS(DensityMatrix{CMatrix::Identity(2, 3)}, ShapeError);
}

TEST_CASE("squeezed vacuum") {
  const FockVector vac = squeezed_vacuum(0.0, 5);
  CHECK(std::abs(vac[0] - 1.0) < 1e-15);
  for (int k = 1; k < 5; ++k) CHECK(std::abs(vac[k]) == 0.0);

  SUBCASE("closed-form amplitudes, even support, non-negative") {
    for (double r : {0.1, 0.5, 0.8, 1.2}) {
      const FockVector psi = squeezed_vacuum(r);
      const double t = std::tanh(r);
      for (int k = 0; k < psi.dim(); ++k) {
        if (k % 2 == 1) {
          CHECK(std::abs(psi[k]) == 0.0);
          continue;
        }
        const int m = k / 2;
        // (tanh r)^m sqrt((2m)!) / (2^m m!) / sqrt(cosh r), built from lgamma.
        const double log_mag = m * std::log(t) + 0.5 * std::lgamma(2.0 * m + 1.0) -
                               m * std::log(2.0) - std::lgamma(m + 1.0) -
                               0.5 * std::log(std::cosh(r));
        const double expected = std::exp(log_mag);
        CHECK(psi[k].real() >= 0.0);
        CHECK(std::abs(psi[k].imag()) == 0.0);
        // Renormalization after truncation shifts amplitudes by at most ~1e-8.
        CHECK(std::abs(psi[k].real() - expected) < 1e-8);
      }
    }
  }

  SUBCASE("moments match the analytic law") {
    const InputMoments m = moments(squeezed_vacuum(0.5, 40));
    const double n = std::sinh(0.5) * std::sinh(0.5);
    CHECK(std::abs(m.mean_n - n) < 1e-8);
    CHECK(std::abs(m.var_n - 2.0 * n * (n + 1.0)) < 1e-7);
    const InputMoments a = squeezed_vacuum_moments(0.5);
    CHECK(a.mean_n == doctest::Approx(n).epsilon(1e-15));
    CHECK(a.var_n == doctest::Approx(2.0 * n * (n + 1.0)).epsilon(1e-15));
    CHECK(squeezing_for_mean(n) == doctest::Approx(0.5).epsilon(1e-14));
  }

  SUBCASE("truncation accounting") {
    for (double r : {0.05, 0.3, 0.8, 1.5}) {
      const int d = squeezed_vacuum_dim(r);
      CHECK_NOTHROW(squeezed_vacuum(r, d));
      // Mass beyond the default dimension, measured on a much larger basis.
      const FockVector big = squeezed_vacuum(r, 3 * d + 20);
      double tail = 0.0;
      for (int k = d; k < big.dim(); ++k) tail += std::norm(big[k]);
      CHECK(tail <= kTruncationTolerance);
      CHECK(tail > 0.0);
    }
    // The default dimension is the smallest accepted one.
    const int d08 = squeezed_vacuum_dim(0.8);
    CHECK_THROWS_AS(squeezed_vacuum(0.8, d08 - 1), TruncationError);
    try {
      squeezed_vacuum(0.8, 20);
      FAIL("expected TruncationError");
    } catch (const TruncationError& e) {
      CHECK(e.suggested_dim() == d08);
      CHECK(e.discarded_mass() > kTruncationTolerance);
    }
    CHECK_THROWS_AS(squeezed_vacuum(-0.1, 10), InvalidParameter);
  }
}

TEST_CASE("thermal state") {
  const DensityMatrix vac = thermal_state(0.0, 4);
  CHECK(std::abs(vac(0, 0) - 1.0) < 1e-15);
  const DensityMatrix t1 = thermal_state(1.0, 40);
  CHECK(std::abs(t1(1, 1).real() / t1(0, 0).real() - 0.5) < 1e-14);
  for (double n : {0.1, 1.0, 5.0, 100.0}) {
    const int d = thermal_dim(n);
    CHECK(thermal_tail_mass(n, d) <= kTruncationTolerance);
    CHECK(thermal_tail_mass(n, d - 1) > kTruncationTolerance);
    const DensityMatrix t = thermal_state(n, d);
    CHECK(std::abs(t.elems().trace().real() - 1.0) < 1e-12);
    CHECK(std::abs(moments(t).mean_n - n) < 1e-6 * (n + 1.0));
  }
  CHECK_THROWS_AS(thermal_state(-1.0, 5), InvalidParameter);
}

TEST_CASE("beam splitter") {
  CHECK(max_abs_diff(beam_splitter(0.0, 3, 4), CMatrix::Identity(12, 12)) < 1e-14);

  SUBCASE("pi/2 swaps the modes") {
    const CMatrix u = beam_splitter(std::acos(-1.0) / 2.0, 3, 3);
    CVector in = CVector::Zero(9);
    in(1 * 3 + 0) = 1.0;  // |1, 0>
    const CVector out = u * in;
    CHECK(std::abs(std::abs(out(0 * 3 + 1)) - 1.0) < 1e-12);
  }

  SUBCASE("unitarity on random angles") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> angle(0.0, 1.6);
    std::uniform_int_distribution<int> dim(2, 7);
    for (int trial = 0; trial < 20; ++trial) {
      const int da = dim(rng);
      const int db = dim(rng);
      const CMatrix u = beam_splitter(angle(rng), da, db);
      CHECK(max_abs_diff(u.adjoint() * u, CMatrix::Identity(da * db, da * db)) < 1e-10);
    }
  }

  SUBCASE("transmits eta of the mean photon number") {
    const double eta = 0.7;
    const FockVector psi = squeezed_vacuum(0.3);
    const int d = psi.dim();
    CVector joint = CVector::Zero(d * d);
    for (int k = 0; k < d; ++k) joint(k * d) = psi[k];
    const CVector out = beam_splitter(std::acos(std::sqrt(eta)), d, d) * joint;
    double mean_a = 0.0;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) mean_a += i * std::norm(out(i * d + j));
    CHECK(std::abs(mean_a - eta * moments(psi).mean_n) < 1e-10);
  }

  SUBCASE("photon-number blocks agree with the dense matrix") {
    const double theta = 0.6;
    const int d = 6;
    const CMatrix u = beam_splitter(theta, d, d);
    for (int total = 0; total < d; ++total) {
      const RMatrix block = beam_splitter_block(theta, total);
      for (int k = 0; k <= total; ++k)
        for (int l = 0; l <= total; ++l)
          CHECK(std::abs(u((total - k) * d + k, (total - l) * d + l) - block(k, l)) < 1e-12);
    }
  }

  CHECK_THROWS_AS(beam_splitter(0.1, 65, 64), InvalidDimension);
  CHECK_THROWS_AS(beam_splitter(0.1, 1, 4), InvalidDimension);
}

TEST_CASE("tensor product and partial trace") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const CMatrix a = random_density(2 + trial % 4, rng);
    const CMatrix b = random_density(2 + trial % 3, rng);
    const CMatrix ab = tensor_product(a, b);
    CHECK(std::abs(ab.trace() - 1.0) < 1e-12);
    const int da = static_cast<int>(a.rows());
    const int db = static_cast<int>(b.rows());
    CHECK(max_abs_diff(partial_trace(ab, Subsystem::A, da, db).elems(), a) < 1e-12);
    CHECK(max_abs_diff(partial_trace(ab, Subsystem::B, da, db).elems(), b) < 1e-12);
  }

  SUBCASE("positivity and trace survive an entangling unitary") {
    const CMatrix joint = random_density(12, rng);
    const CMatrix u = beam_splitter(0.4, 3, 4);
    const DensityMatrix red = partial_trace(u * joint * u.adjoint(), Subsystem::B, 3, 4);
    CHECK(std::abs(red.elems().trace().real() - 1.0) < 1e-12);
    CHECK(red.eigenvalues().minCoeff() >= -1e-12);
  }

  CHECK_THROWS_AS(partial_trace(CMatrix::Identity(6, 6) / 6.0, Subsystem::A, 2, 4), ShapeError);
}

TEST_CASE("moments") {
  for (int k = 0; k < 5; ++k) {
    const InputMoments m = moments(FockVector::number_state(k, 6));
    CHECK(m.mean_n == doctest::Approx(k));
    CHECK(std::abs(m.var_n) < 1e-14);
  }
  const InputMoments t = moments(thermal_state(0.5, thermal_dim(0.5)));
  CHECK(t.var_n == doctest::Approx(0.5 * 1.5).epsilon(1e-5));
  CHECK_THROWS_AS(InputMoments::checked(-1.0, 0.0), InvalidParameter);
  CHECK_THROWS_AS(InputMoments::checked(1.0, -0.5), InvalidParameter);
}
