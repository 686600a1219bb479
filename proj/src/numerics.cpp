#include "phasebound/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>

#include "phasebound/errors.hpp"

namespace phasebound {

namespace {

// Gauss-Kronrod 7/15 abscissae on [-1, 1] (non-negative half).
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights at kXgk[1], kXgk[3], kXgk[5], kXgk[7].
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a;
  double b;
  double value;
  double error;
  double abs_value;
  bool operator<(const Panel& other) const { return error < other.error; }
};

double checked_eval(const ScalarFunction& f, double x) {
  const double y = f(x);
  if (!std::isfinite(y)) {
    std::ostringstream os;
    os << "integrand is not finite at x = " << x;
    throw DomainError(os.str());
  }
  return y;
}

Panel gauss_kronrod_panel(const ScalarFunction& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = checked_eval(f, center);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  double abs_sum = std::abs(fc) * kWgk[7];
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kXgk[i];
    const double f1 = checked_eval(f, center - dx);
    const double f2 = checked_eval(f, center + dx);
    kronrod += kWgk[i] * (f1 + f2);
    abs_sum += kWgk[i] * (std::abs(f1) + std::abs(f2));
    if (i % 2 == 1) gauss += kWg[i / 2] * (f1 + f2);
  }
  return Panel{a, b, kronrod * half, std::abs((kronrod - gauss) * half), abs_sum * std::abs(half)};
}

}  // namespace

QuadratureResult integrate(const ScalarFunction& f, double a, double b, double rel_tol,
                           double abs_tol, int max_panels) {
  if (!std::isfinite(a) || !std::isfinite(b)) {
    throw DomainError("integrate: limits must be finite; use integrate_semi_infinite");
  }
  if (a == b) return {};
  if (b < a) {
    QuadratureResult flipped = integrate(f, b, a, rel_tol, abs_tol, max_panels);
    flipped.value = -flipped.value;
    return flipped;
  }

  std::priority_queue<Panel> panels;
  panels.push(gauss_kronrod_panel(f, a, b));
  double value = panels.top().value;
  double error = panels.top().error;
  double l1 = panels.top().abs_value;
  int evaluations = 15;
  constexpr double kEps = std::numeric_limits<double>::epsilon();

  for (;;) {
    // Below ~50 ulp of the L1 norm further bisection only chases roundoff.
    const double target = std::max({abs_tol, rel_tol * std::abs(value), 50.0 * kEps * l1});
    if (error <= target) break;
    if (static_cast<int>(panels.size()) >= max_panels) {
      std::ostringstream os;
      os << "integrate: " << max_panels << " panels on [" << a << ", " << b
         << "] left error estimate " << error << " above target " << target;
      throw AccuracyFailure(os.str(), value, error);
    }
    const Panel worst = panels.top();
    panels.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const Panel left = gauss_kronrod_panel(f, worst.a, mid);
    const Panel right = gauss_kronrod_panel(f, mid, worst.b);
    evaluations += 30;
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    l1 += left.abs_value + right.abs_value - worst.abs_value;
    panels.push(left);
    panels.push(right);
  }

  // Re-sum to shed the drift of the running updates.
  double total = 0.0;
  double total_error = 0.0;
  while (!panels.empty()) {
    total += panels.top().value;
    total_error += panels.top().error;
    panels.pop();
  }
  return QuadratureResult{total, total_error, evaluations};
}

QuadratureResult integrate_semi_infinite(const ScalarFunction& f, double a, double rel_tol,
                                         double abs_tol, double scale) {
  if (!std::isfinite(a)) throw DomainError("integrate_semi_infinite: lower limit must be finite");
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw DomainError("integrate_semi_infinite: scale must be positive and finite");
  }
  auto mapped = [&](double t) {
    const double s = 1.0 - t;
    return f(a + scale * t / s) * scale / (s * s);
  };
  return integrate(mapped, 0.0, 1.0, rel_tol, abs_tol);
}

ScalarMaximum maximize_scalar(const ScalarFunction& f, double lo, double hi, double tol,
                              int prescan) {
  if (!(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw DomainError("maximize_scalar: need finite lo < hi");
  }
  if (prescan < 3) throw DomainError("maximize_scalar: pre-scan needs at least 3 points");

  std::vector<double> xs(prescan);
  std::vector<double> ys(prescan);
  const double step = (hi - lo) / (prescan - 1);
  for (int i = 0; i < prescan; ++i) {
    xs[i] = (i == prescan - 1) ? hi : lo + i * step;
    ys[i] = f(xs[i]);
  }
  const auto best_it = std::max_element(ys.begin(), ys.end());
  const auto [min_it, max_it] = std::minmax_element(ys.begin(), ys.end());
  const double spread = *max_it - *min_it;
  if (spread <= 1e-14 * std::max(std::abs(*max_it), std::abs(*min_it))) {
    const double mid = 0.5 * (lo + hi);
    return ScalarMaximum{mid, std::max(f(mid), *best_it), true};
  }

  const int ib = static_cast<int>(best_it - ys.begin());
  double a = xs[std::max(ib - 1, 0)];
  double b = xs[std::min(ib + 1, prescan - 1)];
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > tol) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  ScalarMaximum out{xs[ib], ys[ib], false};
  const double x_gs = fc > fd ? c : d;
  const double f_gs = std::max(fc, fd);
  if (f_gs > out.value) out = ScalarMaximum{x_gs, f_gs, false};
  return out;
}

double loglog_slope(std::span<const double> xs, std::span<const double> ys,
                    std::optional<std::pair<double, double>> window) {
  if (xs.size() != ys.size()) throw DomainError("loglog_slope: xs and ys differ in length");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int n = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (window && (xs[i] < window->first || xs[i] > window->second)) continue;
    if (!(xs[i] > 0.0) || !(ys[i] > 0.0)) {
      throw DomainError("loglog_slope: data must be positive inside the window");
    }
    const double lx = std::log(xs[i]);
    const double ly = std::log(ys[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  if (n < 3) throw DomainError("loglog_slope: fewer than 3 points in window");
  const double denom = n * sxx - sx * sx;
  if (!(std::abs(denom) > 0.0)) throw DomainError("loglog_slope: x values are degenerate");
  return (n * sxy - sx * sy) / denom;
}

std::vector<double> logspace(double lo, double hi, int count) {
  if (!(lo > 0.0) || !(hi >= lo) || count < 1) {
    throw DomainError("logspace: need 0 < lo <= hi and count >= 1");
  }
  std::vector<double> out(count);
  if (count == 1) {
    out[0] = lo;
    return out;
  }
  const double l0 = std::log10(lo);
  const double l1 = std::log10(hi);
  for (int i = 0; i < count; ++i) out[i] = std::pow(10.0, l0 + (l1 - l0) * i / (count - 1));
  out.front() = lo;
  out.back() = hi;
  return out;
}

}  // namespace phasebound
