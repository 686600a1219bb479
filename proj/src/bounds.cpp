#include "phasebound/bounds.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "phasebound/errors.hpp"

namespace phasebound {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_eta(double eta) {
  if (!(eta > 0.0 && eta <= 1.0)) {
    std::ostringstream os;
    os << "transmission eta must lie in (0, 1], got " << eta;
    throw InvalidParameter(os.str());
  }
}

void require_nonneg(double x, const char* name) {
  if (!std::isfinite(x) || x < 0.0) {
    std::ostringstream os;
    os << name << " must be finite and >= 0, got " << x;
    throw InvalidParameter(os.str());
  }
}

void require_moments(const InputMoments& m) { (void)InputMoments::checked(m.mean_n, m.var_n); }

// 1/var, with a zero variance mapped to +inf.
double inverse_variance(const InputMoments& m) { return m.var_n > 0.0 ? 1.0 / m.var_n : kInf; }

// ((1-eta)/eta) ((n_T+1)/<n> + n_T/(<n>+1)); exactly zero without loss.
double thermal_loss_penalty(const InputMoments& m, double eta, double n_T) {
  if (eta == 1.0) return 0.0;
  const double occupation = (m.mean_n > 0.0 ? (n_T + 1.0) / m.mean_n : kInf) +
                            n_T / (m.mean_n + 1.0);
  return (1.0 - eta) / eta * occupation;
}

double reciprocal_bound(double denominator) { return denominator == kInf ? 0.0 : 4.0 / denominator; }

}  // namespace

GaussianAux GaussianAux::make(double r, double eta, double n_T) {
  require_nonneg(r, "squeezing r");
  require_eta(eta);
  require_nonneg(n_T, "thermal occupation n_T");
  const double bath = (1.0 - eta) * (2.0 * n_T + 1.0);
  // v - u directly: subtracting the two large terms loses digits at strong squeezing.
  GaussianAux aux{eta * std::sinh(2.0 * r), eta * std::cosh(2.0 * r) + bath,
                  eta * std::exp(-2.0 * r) + bath};
  if (!(aux.symplectic_denominator() > 0.0)) {
    throw InvalidParameter("GaussianAux: 1 + v^2 - u^2 must be positive");
  }
  return aux;
}

double GaussianAux::symplectic_denominator() const { return 1.0 + v_minus_u * (v + u); }

double cq_min_loss_thermal(const InputMoments& m, double eta, double n_T) {
  require_moments(m);
  require_eta(eta);
  require_nonneg(n_T, "thermal occupation n_T");
  return reciprocal_bound(inverse_variance(m) + thermal_loss_penalty(m, eta, n_T));
}

double cq_min_loss_zero_T(const InputMoments& m, double eta) {
  return cq_min_loss_thermal(m, eta, 0.0);
}

double cq_min_loss_diffusion(const InputMoments& m, double eta, double lambda) {
  require_moments(m);
  require_eta(eta);
  require_nonneg(lambda, "diffusion strength lambda");
  return reciprocal_bound(inverse_variance(m) + thermal_loss_penalty(m, eta, 0.0) +
                          8.0 * lambda * lambda);
}

double phase_variance_bound_full(const InputMoments& m, double eta, double n_T, double lambda) {
  require_moments(m);
  require_eta(eta);
  require_nonneg(n_T, "thermal occupation n_T");
  require_nonneg(lambda, "diffusion strength lambda");
  return 0.25 * (inverse_variance(m) + thermal_loss_penalty(m, eta, n_T)) +
         2.0 * lambda * lambda;
}

double exact_qfi_squeezed(double r, double eta, double n_T) {
  const GaussianAux aux = GaussianAux::make(r, eta, n_T);
  return 4.0 * aux.u * aux.u / aux.symplectic_denominator();
}

QuadratureMoments squeezed_quadrature_moments(double r, double eta, double lambda, double phi) {
  require_nonneg(lambda, "diffusion strength lambda");
  const GaussianAux aux = GaussianAux::make(r, eta, 0.0);
  const double l2 = lambda * lambda;
  const double c8 = std::exp(-8.0 * l2);
  const double u2 = aux.u * aux.u;
  QuadratureMoments out;
  out.mean = aux.u * std::exp(-4.0 * l2) * std::sin(2.0 * phi);
  out.dmean_dphi = 2.0 * aux.u * std::exp(-4.0 * l2) * std::cos(2.0 * phi);
  out.variance = 1.0 + aux.v * aux.v +
                 0.5 * u2 * (1.0 - c8 - c8 * (3.0 * c8 - 1.0) * std::cos(4.0 * phi));
  return out;
}

double im_opt_squeezed(double r, double eta, double lambda) {
  require_nonneg(lambda, "diffusion strength lambda");
  const GaussianAux aux = GaussianAux::make(r, eta, 0.0);
  const double l2 = lambda * lambda;
  const double c8 = std::exp(-8.0 * l2);
  const double u2 = aux.u * aux.u;
  // 1 + v^2 + u^2 (1 - 3 e^{-16 l2}) / 2 regrouped so it reduces to the
  // symplectic denominator exactly at lambda = 0, without cancellation.
  const double denom = aux.symplectic_denominator() - 1.5 * u2 * std::expm1(-16.0 * l2);
  return 4.0 * u2 * c8 / denom;
}

double raw_cq_loss_thermal(const InputMoments& m, double eta, double n_T, double alpha,
                           double beta, double gamma) {
  require_moments(m);
  require_eta(eta);
  require_nonneg(n_T, "thermal occupation n_T");
  const double c1 = std::sqrt(eta);
  const double s1 = std::sqrt(1.0 - eta);
  const double c2 = std::sqrt(n_T + 1.0);
  const double s2 = std::sqrt(n_T);
  const double c1s = c1 * c1;
  const double s1s = s1 * s1;

  const double t_var = c1s + alpha * s1s;
  const double t_mean = c1 * c2 * (1.0 - alpha) - gamma * s2;
  const double t_mean1 = c1 * s2 * (1.0 - alpha) - gamma * c2;
  const double t_vac = (s1s + alpha * c1s + beta) * c2 * s2 + gamma * c1 * (c2 * c2 + s2 * s2);
  return 4.0 * (m.var_n * t_var * t_var + m.mean_n * s1s * t_mean * t_mean +
                (m.mean_n + 1.0) * s1s * t_mean1 * t_mean1 + t_vac * t_vac);
}

double raw_cq_loss_diffusion(const InputMoments& m, double eta, double lambda, double alpha,
                             double beta) {
  require_moments(m);
  require_eta(eta);
  require_nonneg(lambda, "diffusion strength lambda");
  const double t = eta + alpha * (1.0 - eta) - beta;
  double diffusion_term = 0.0;
  if (beta != 0.0) diffusion_term = lambda > 0.0 ? beta * beta / (2.0 * lambda * lambda) : kInf;
  return 4.0 * m.var_n * t * t + 4.0 * m.mean_n * (1.0 - alpha) * (1.0 - alpha) * eta * (1.0 - eta) +
         diffusion_term;
}

}  // namespace phasebound
