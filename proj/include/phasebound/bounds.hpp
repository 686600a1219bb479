#pragma once

#include "phasebound/fock_core.hpp"

namespace phasebound {

/// Covariance shorthands of a squeezed vacuum after thermal loss:
/// u = eta sinh 2r, v = eta cosh 2r + (1 - eta)(2 n_T + 1).
struct GaussianAux {
  double u = 0.0;
  double v = 1.0;
  double v_minus_u = 1.0;  ///< eta e^{-2r} + (1 - eta)(2 n_T + 1), free of cancellation

  /// Throws InvalidParameter outside r >= 0, eta in (0, 1], n_T >= 0, or when
  /// 1 + v^2 - u^2 is not positive.
  static GaussianAux make(double r, double eta, double n_T);

  /// 1 + v^2 - u^2, evaluated as 1 + (v - u)(v + u).
  double symplectic_denominator() const;
};

// Minimized purification bounds on the QFI. All take probe moments, so they
// apply to any input state. A vacuum probe (zero mean or zero variance)
// yields 0; the reciprocal-sum form lets infinities propagate instead of NaN.

/// Loss into a bath of thermal occupation n_T:
///   4 / [1/var + ((1-eta)/eta) ((n_T+1)/<n> + n_T/(<n>+1))].
double cq_min_loss_thermal(const InputMoments& m, double eta, double n_T);

/// Zero-temperature loss: 4 / [1/var + (1-eta)/(eta <n>)].
double cq_min_loss_zero_T(const InputMoments& m, double eta);

/// Loss plus phase diffusion: 4 / [1/var + (1-eta)/(eta <n>) + 8 lambda^2].
double cq_min_loss_diffusion(const InputMoments& m, double eta, double lambda);

/// Phase-variance lower bound with loss, temperature and diffusion:
///   1/(4 var) + ((1-eta)/(4 eta))((n_T+1)/<n> + n_T/(<n>+1)) + 2 lambda^2.
/// Returns +inf for a vacuum probe.
double phase_variance_bound_full(const InputMoments& m, double eta, double n_T, double lambda);

/// Exact QFI of a squeezed vacuum after thermal loss, 4u^2 / (1 + v^2 - u^2).
double exact_qfi_squeezed(double r, double eta, double n_T);

/// Mean, variance and phase slope of M = i(a^2 - a^dag^2) on a squeezed vacuum
/// after zero-temperature loss, diffusion and a phase shift phi.
struct QuadratureMoments {
  double mean = 0.0;
  double variance = 0.0;
  double dmean_dphi = 0.0;
};
QuadratureMoments squeezed_quadrature_moments(double r, double eta, double lambda, double phi);

/// Error-propagation information of M at the optimal phi = 0:
///   4u^2 e^{-8 lambda^2} / (1 + v^2 + u^2 (1 - 3 e^{-16 lambda^2}) / 2),
/// with u, v taken at n_T = 0.
double im_opt_squeezed(double r, double eta, double lambda);

/// Purified-state C_Q for loss into a thermal bath before minimization over
/// the environment-unitary coefficients (alpha, beta, gamma).
double raw_cq_loss_thermal(const InputMoments& m, double eta, double n_T, double alpha,
                           double beta, double gamma);

/// Purified-state C_Q for loss plus diffusion before minimization over
/// (alpha, beta):
///   4 var [eta + alpha(1-eta) - beta]^2 + 4<n>(1-alpha)^2 eta(1-eta) + beta^2/(2 lambda^2).
/// For lambda = 0 the beta term forces beta = 0: any other beta gives +inf.
double raw_cq_loss_diffusion(const InputMoments& m, double eta, double lambda, double alpha,
                             double beta);

}  // namespace phasebound
