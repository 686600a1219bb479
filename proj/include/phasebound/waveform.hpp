#pragma once

#include <functional>
#include <span>
#include <vector>

#include "phasebound/numerics.hpp"

namespace phasebound {

/// Prior power spectrum of the fluctuating phase,
///   S(w) = kappa^{p-1} / (lambda_c^p + |w|^p).
/// lambda_c = 0 is the pure Wiener-type spectrum; p = 2 with lambda_c > 0 is
/// the Lorentzian kappa / (lambda_c^2 + w^2).
struct PriorSpectrum {
  double kappa = 1.0;
  double p = 2.0;
  double lambda_c = 0.0;

  static PriorSpectrum wiener(double kappa, double p);
  static PriorSpectrum lorentzian(double kappa, double lambda_c);

  void validate() const;
  double operator()(double omega) const;
  /// 1 / S(w), finite at w = 0 only when lambda_c > 0.
  double inverse(double omega) const;
};

/// Photon-number correlation spectrum of a squeezed-vacuum beam from an
/// optical parametric oscillator. Holds R+ > 1, R- = 1/R+, the pump amplitude
/// x = (sqrt(R+) - 1)/(sqrt(R+) + 1) and the cavity decay rate that reproduces
/// the requested photon flux.
class OpoSpectrumModel {
 public:
  static OpoSpectrumModel from_flux(double R_plus, double flux_N);

  double R_plus() const noexcept { return R_plus_; }
  double R_minus() const noexcept { return R_minus_; }
  double pump_amplitude() const noexcept { return x_; }
  double gamma() const noexcept { return gamma_; }
  double flux() const noexcept { return flux_; }

  /// gamma/16 [(R+ - 1)(1 - x) + (R- - 1)(1 + x)], in cancellation-free form.
  double flux_from_gamma() const;

 private:
  OpoSpectrumModel(double R_plus, double flux_N);

  double R_plus_;
  double R_minus_;
  double x_;
  double flux_;
  double gamma_;
};

/// Cavity decay rate gamma = 16 N / [(R+ - 1)(1 - x) + (R- - 1)(1 + x)].
double solve_gamma(double R_plus, double flux_N);

/// Fourier transform of 4<dn(t) dn(t')>:
///   4N + (gamma^3/16)[(R+ - 1)^2 (1-x)^3 / ((1-x)^2 gamma^2 + w^2)
///                    + (R- - 1)^2 (1+x)^3 / ((1+x)^2 gamma^2 + w^2)].
double sigma_tilde(double omega, const OpoSpectrumModel& model);

struct SpectralCqParams {
  double eta = 1.0;
  double beta = 1.0;
};

/// Spectral purification bound on the quantum Fisher information,
///   Sigma(w) [eta + beta(1-eta)]^2 + 4N (1-beta)^2 eta (1-eta).
double spectral_cq(double omega, const OpoSpectrumModel& model, const SpectralCqParams& params);

/// Flat spectral bound 4 eta N / (1 - eta) left when beta = eta/(eta - 1)
/// removes the correlation term.
double loss_only_cq(double eta, double flux_N);

/// (1/2pi) int S(w) / (1 + S(w) C(w)) dw over the real line for an even C,
/// evaluated as (1/pi) int_0^inf 1 / (1/S(w) + C(w)) dw. `breakpoints` are the
/// integrand's characteristic frequencies; the half-line is split there.
double prior_weighted_mse(const PriorSpectrum& prior, const ScalarFunction& cq,
                          std::span<const double> breakpoints,
                          double rel_tol = kDefaultQuadratureRelTol);

/// Waveform-phase MSE lower bound at a fixed variational beta.
double mse_bound(const PriorSpectrum& prior, const OpoSpectrumModel& model,
                 const SpectralCqParams& params, double rel_tol = kDefaultQuadratureRelTol);

struct OptimizedMse {
  double beta_star = 1.0;
  double bound = 0.0;
  bool flat = false;  ///< eta = 1 or no beta dependence seen
};

/// Maximizes mse_bound over beta in [min(eta/(eta-1), 0) - 10, 1]. At eta = 1
/// beta is irrelevant: returns beta = 1 with the flat flag.
OptimizedMse mse_bound_optimized(const PriorSpectrum& prior, const OpoSpectrumModel& model,
                                 double eta, double rel_tol = kDefaultQuadratureRelTol);

struct ScalingConstruction {
  double D = 0.0;
  double L = 0.0;
};

/// D = 4 kappa^{p-1} eta N (17N + 4mu) / (N(17 - eta) + 4mu(1 - eta)) and
/// L = 8 pi N^2 / mu.
ScalingConstruction scaling_construction_D(double flux_N, double mu, double eta, double kappa,
                                           double p);

/// mu = N^{2p/(p+1)}, the choice that keeps L <= O(D^{1/p}) without loss.
double mu_lossless_rule(double flux_N, double p);
/// mu = N^{2 - 1/p}, the corresponding choice under loss.
double mu_lossy_rule(double flux_N, double p);

/// Anti-squeezing level as a function of flux, R+ = prefactor * N^exponent.
struct SqueezingRule {
  double prefactor = 16.0;
  double exponent = 1.0 / 3.0;
  double operator()(double flux_N) const;
};

struct Fig3Point {
  double flux_N = 0.0;
  double eta = 1.0;
  double bound = 0.0;
  double beta_star = 1.0;
  bool flat = false;
};

Fig3Point fig3_point(double eta, double flux_N, const SqueezingRule& rule,
                     const PriorSpectrum& prior, double rel_tol = kDefaultQuadratureRelTol);

/// Optimized MSE bound over an ascending flux grid with the Lorentzian prior
/// kappa = lambda_c = 1 unless overridden. Points are computed independently
/// (on `threads` workers) and returned in grid order.
std::vector<Fig3Point> fig3_curve(double eta, std::span<const double> flux_grid,
                                  const SqueezingRule& rule = {},
                                  const PriorSpectrum& prior = PriorSpectrum::lorentzian(1.0, 1.0),
                                  double rel_tol = kDefaultQuadratureRelTol, int threads = 1);

}  // namespace phasebound
