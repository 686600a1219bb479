#pragma once

#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace phasebound {

using ScalarFunction = std::function<double(double)>;

inline constexpr double kDefaultQuadratureRelTol = 1e-8;
inline constexpr double kDefaultScalarTol = 1e-6;
inline constexpr int kDefaultPrescanPoints = 33;

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;  ///< sum of per-panel |Kronrod - Gauss| differences
  int evaluations = 0;
};

/// Globally adaptive Gauss-Kronrod (7/15) quadrature on [a, b]. Bisects the
/// panel with the largest error until the total error estimate is at most
/// max(abs_tol, rel_tol * |value|). Throws AccuracyFailure, carrying the best
/// estimate, once `max_panels` is exhausted.
QuadratureResult integrate(const ScalarFunction& f, double a, double b,
                           double rel_tol = kDefaultQuadratureRelTol, double abs_tol = 0.0,
                           int max_panels = 4000);

/// Integral over [a, inf) through w = a + scale * t / (1 - t), t in [0, 1).
/// `scale` should sit near the integrand's decay length. The integrand must
/// fall off at least like w^-p with p > 1.
QuadratureResult integrate_semi_infinite(const ScalarFunction& f, double a,
                                         double rel_tol = kDefaultQuadratureRelTol,
                                         double abs_tol = 0.0, double scale = 1.0);

struct ScalarMaximum {
  double argmax = 0.0;
  double value = 0.0;
  bool flat = false;  ///< pre-scan saw no variation; argmax is the midpoint
};

/// Grid pre-scan of `prescan` points followed by golden-section refinement on
/// the bracket around the best grid point, to an argmax interval <= tol.
/// The returned value is never below the best pre-scan value.
ScalarMaximum maximize_scalar(const ScalarFunction& f, double lo, double hi,
                              double tol = kDefaultScalarTol,
                              int prescan = kDefaultPrescanPoints);

/// Least-squares slope of log y against log x, restricted to xs inside the
/// optional closed window [lo, hi]. Needs three points and positive data.
double loglog_slope(std::span<const double> xs, std::span<const double> ys,
                    std::optional<std::pair<double, double>> window = std::nullopt);

/// `count` log-spaced points from lo to hi inclusive.
std::vector<double> logspace(double lo, double hi, int count);

}  // namespace phasebound
