#include "phasebound/waveform.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "phasebound/errors.hpp"
#include "phasebound/parallel.hpp"

namespace phasebound {

namespace {

void require_positive(double x, const char* name) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    std::ostringstream os;
    os << name << " must be positive and finite, got " << x;
    throw InvalidParameter(os.str());
  }
}

void require_eta(double eta) {
  if (!(eta > 0.0 && eta <= 1.0)) {
    std::ostringstream os;
    os << "transmission eta must lie in (0, 1], got " << eta;
    throw InvalidParameter(os.str());
  }
}

// (R+ - 1)(1 - x) + (R- - 1)(1 + x), which simplifies to 2 (s - 1)^2 / s with
// s = sqrt(R+). The simplified form avoids cancellation near R+ = 1.
double flux_bracket(double R_plus) {
  const double s = std::sqrt(R_plus);
  return 2.0 * (s - 1.0) * (s - 1.0) / s;
}

}  // namespace

PriorSpectrum PriorSpectrum::wiener(double kappa, double p) {
  PriorSpectrum prior{kappa, p, 0.0};
  prior.validate();
  return prior;
}

PriorSpectrum PriorSpectrum::lorentzian(double kappa, double lambda_c) {
  PriorSpectrum prior{kappa, 2.0, lambda_c};
  prior.validate();
  return prior;
}

void PriorSpectrum::validate() const {
  require_positive(kappa, "prior kappa");
  if (!(p > 1.0) || !std::isfinite(p)) throw InvalidParameter("prior exponent p must exceed 1");
  if (!(lambda_c >= 0.0) || !std::isfinite(lambda_c)) {
    throw InvalidParameter("prior cutoff lambda_c must be finite and >= 0");
  }
}

double PriorSpectrum::operator()(double omega) const { return 1.0 / inverse(omega); }

double PriorSpectrum::inverse(double omega) const {
  return (std::pow(lambda_c, p) + std::pow(std::abs(omega), p)) / std::pow(kappa, p - 1.0);
}

OpoSpectrumModel::OpoSpectrumModel(double R_plus, double flux_N)
    : R_plus_(R_plus),
      R_minus_(1.0 / R_plus),
      x_((std::sqrt(R_plus) - 1.0) / (std::sqrt(R_plus) + 1.0)),
      flux_(flux_N),
      gamma_(solve_gamma(R_plus, flux_N)) {}

OpoSpectrumModel OpoSpectrumModel::from_flux(double R_plus, double flux_N) {
  return OpoSpectrumModel(R_plus, flux_N);
}

double OpoSpectrumModel::flux_from_gamma() const { return gamma_ / 16.0 * flux_bracket(R_plus_); }

double solve_gamma(double R_plus, double flux_N) {
  if (!(R_plus > 1.0) || !std::isfinite(R_plus)) {
    std::ostringstream os;
    os << "anti-squeezing level R+ must exceed 1, got " << R_plus;
    throw InvalidParameter(os.str());
  }
  require_positive(flux_N, "photon flux N");
  return 16.0 * flux_N / flux_bracket(R_plus);
}

double sigma_tilde(double omega, const OpoSpectrumModel& model) {
  const double g = model.gamma();
  const double x = model.pump_amplitude();
  const double w2 = omega * omega;
  const double am = 1.0 - x;
  const double ap = 1.0 + x;
  const double rp = model.R_plus() - 1.0;
  const double rm = model.R_minus() - 1.0;
  return 4.0 * model.flux() +
         g * g * g / 16.0 *
             (rp * rp * am * am * am / (am * am * g * g + w2) +
              rm * rm * ap * ap * ap / (ap * ap * g * g + w2));
}

double spectral_cq(double omega, const OpoSpectrumModel& model, const SpectralCqParams& params) {
  require_eta(params.eta);
  const double a = params.eta + params.beta * (1.0 - params.eta);
  const double b = 1.0 - params.beta;
  const double correlated = a == 0.0 ? 0.0 : sigma_tilde(omega, model) * a * a;
  return correlated + 4.0 * model.flux() * b * b * params.eta * (1.0 - params.eta);
}

double loss_only_cq(double eta, double flux_N) {
  require_eta(eta);
  require_positive(flux_N, "photon flux N");
  if (eta == 1.0) throw InvalidParameter("loss_only_cq: undefined without loss");
  return 4.0 * eta * flux_N / (1.0 - eta);
}

double prior_weighted_mse(const PriorSpectrum& prior, const ScalarFunction& cq,
                          std::span<const double> breakpoints, double rel_tol) {
  prior.validate();
  std::vector<double> cuts;
  for (double b : breakpoints)
    if (b > 0.0 && std::isfinite(b)) cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(),
                         [](double a, double b) { return b <= a * (1.0 + 1e-9); }),
             cuts.end());

  auto integrand = [&](double w) { return 1.0 / (prior.inverse(w) + cq(w)); };
  double total = 0.0;
  double lo = 0.0;
  for (double cut : cuts) {
    total += integrate(integrand, lo, cut, rel_tol).value;
    lo = cut;
  }
  const double scale = cuts.empty() ? 1.0 : cuts.back();
  total += integrate_semi_infinite(integrand, lo, rel_tol, 0.0, scale).value;
  return total / std::numbers::pi;
}

double mse_bound(const PriorSpectrum& prior, const OpoSpectrumModel& model,
                 const SpectralCqParams& params, double rel_tol) {
  require_eta(params.eta);
  const double g = model.gamma();
  const double x = model.pump_amplitude();
  const double a = params.eta + params.beta * (1.0 - params.eta);
  const double b = 1.0 - params.beta;
  const double kp = std::pow(prior.kappa, prior.p - 1.0);

  std::vector<double> cuts = {prior.lambda_c, (1.0 - x) * g, (1.0 + x) * g};
  // Where |w|^p / kappa^{p-1} overtakes the flat part of C.
  const double c_inf = 4.0 * model.flux() * (a * a + b * b * params.eta * (1.0 - params.eta));
  cuts.push_back(std::pow(kp * c_inf, 1.0 / prior.p));
  // Where it overtakes the w^-2 tail of the Lorentzian part of C.
  const double rp = model.R_plus() - 1.0;
  const double rm = model.R_minus() - 1.0;
  const double tail = a * a * g * g * g / 16.0 *
                      (rp * rp * std::pow(1.0 - x, 3) + rm * rm * std::pow(1.0 + x, 3));
  if (tail > 0.0) cuts.push_back(std::pow(kp * tail, 1.0 / (prior.p + 2.0)));

  auto cq = [&](double w) { return spectral_cq(w, model, params); };
  return prior_weighted_mse(prior, cq, cuts, rel_tol);
}

OptimizedMse mse_bound_optimized(const PriorSpectrum& prior, const OpoSpectrumModel& model,
                                 double eta, double rel_tol) {
  require_eta(eta);
  if (eta == 1.0) {
    return OptimizedMse{1.0, mse_bound(prior, model, {1.0, 1.0}, rel_tol), true};
  }
  const double lo = std::min(eta / (eta - 1.0), 0.0) - 10.0;
  auto objective = [&](double beta) { return mse_bound(prior, model, {eta, beta}, rel_tol); };
  const ScalarMaximum best = maximize_scalar(objective, lo, 1.0);
  if (best.flat) return OptimizedMse{1.0, objective(1.0), true};
  return OptimizedMse{best.argmax, best.value, false};
}

ScalingConstruction scaling_construction_D(double flux_N, double mu, double eta, double kappa,
                                           double p) {
  require_positive(flux_N, "photon flux N");
  require_positive(mu, "mu");
  require_positive(kappa, "kappa");
  require_eta(eta);
  if (!(p > 1.0)) throw InvalidParameter("spectral exponent p must exceed 1");
  const double num = 4.0 * std::pow(kappa, p - 1.0) * eta * flux_N * (17.0 * flux_N + 4.0 * mu);
  const double den = flux_N * (17.0 - eta) + 4.0 * mu * (1.0 - eta);
  return ScalingConstruction{num / den, 8.0 * std::numbers::pi * flux_N * flux_N / mu};
}

double mu_lossless_rule(double flux_N, double p) {
  return std::pow(flux_N, 2.0 * p / (p + 1.0));
}

double mu_lossy_rule(double flux_N, double p) { return std::pow(flux_N, 2.0 - 1.0 / p); }

double SqueezingRule::operator()(double flux_N) const {
  require_positive(flux_N, "photon flux N");
  return prefactor * std::pow(flux_N, exponent);
}

Fig3Point fig3_point(double eta, double flux_N, const SqueezingRule& rule,
                     const PriorSpectrum& prior, double rel_tol) {
  const OpoSpectrumModel model = OpoSpectrumModel::from_flux(rule(flux_N), flux_N);
  const OptimizedMse opt = mse_bound_optimized(prior, model, eta, rel_tol);
  return Fig3Point{flux_N, eta, opt.bound, opt.beta_star, opt.flat};
}

std::vector<Fig3Point> fig3_curve(double eta, std::span<const double> flux_grid,
                                  const SqueezingRule& rule, const PriorSpectrum& prior,
                                  double rel_tol, int threads) {
  for (std::size_t i = 0; i < flux_grid.size(); ++i) {
    require_positive(flux_grid[i], "flux grid value");
    if (i > 0 && !(flux_grid[i] > flux_grid[i - 1])) {
      throw InvalidParameter("fig3_curve: flux grid must be strictly ascending");
    }
  }
  std::vector<Fig3Point> out(flux_grid.size());
  parallel_for(flux_grid.size(), threads,
               [&](std::size_t i) { out[i] = fig3_point(eta, flux_grid[i], rule, prior, rel_tol); });
  return out;
}

}  // namespace phasebound
