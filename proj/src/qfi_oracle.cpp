#include "phasebound/qfi_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "phasebound/errors.hpp"

namespace phasebound {

double qfi_phase_covariant(const DensityMatrix& rho, double relative_cutoff) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(rho.elems());
  if (solver.info() != Eigen::Success) throw InvalidState("qfi: eigendecomposition failed");
  const Eigen::VectorXd& p = solver.eigenvalues();
  const CMatrix& vecs = solver.eigenvectors();
  if (p.minCoeff() < -1e-8) {
    std::ostringstream os;
    os << "qfi: state has eigenvalue " << p.minCoeff() << " below -1e-8";
    throw InvalidState(os.str());
  }

  const int d = rho.dim();
  CMatrix drho(d, d);
  for (int l = 0; l < d; ++l)
    for (int k = 0; k < d; ++k) drho(l, k) = Complex(0.0, -(l - k)) * rho(l, k);
  const CMatrix deig = vecs.adjoint() * drho * vecs;

  const double eps = relative_cutoff * p.maxCoeff();
  double fisher = 0.0;
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      const double s = p(i) + p(j);
      if (s > eps) fisher += std::norm(deig(i, j)) / s;
    }
  }
  return 2.0 * fisher;
}

double oracle_qfi_squeezed(double r, const NoiseParams& noise) {
  const DensityMatrix probe = DensityMatrix::pure(squeezed_vacuum(r));
  return qfi_phase_covariant(apply_noise(probe, noise));
}

double classical_fisher_error_propagation(double mean_M, double var_M, double dmean_dphi) {
  (void)mean_M;
  if (!(var_M > 0.0)) {
    std::ostringstream os;
    os << "classical Fisher information needs Var(M) > 0, got " << var_M;
    throw DegenerateMeasurement(os.str());
  }
  return dmean_dphi * dmean_dphi / var_M;
}

namespace {

using Point = Eigen::VectorXd;

double eval(const RawObjective& f, const Point& x) {
  return f(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())));
}

double step_for(double x) { return 1e-4 * std::max(1.0, std::abs(x)); }

Point fd_gradient(const RawObjective& f, const Point& x) {
  Point g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double h = step_for(x(i));
    Point xp = x, xm = x;
    xp(i) += h;
    xm(i) -= h;
    g(i) = (eval(f, xp) - eval(f, xm)) / (2.0 * h);
  }
  return g;
}

Eigen::MatrixXd fd_hessian(const RawObjective& f, const Point& x) {
  const Eigen::Index n = x.size();
  Eigen::MatrixXd h(n, n);
  const double f0 = eval(f, x);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double hi = 10.0 * step_for(x(i));
    Point xp = x, xm = x;
    xp(i) += hi;
    xm(i) -= hi;
    h(i, i) = (eval(f, xp) - 2.0 * f0 + eval(f, xm)) / (hi * hi);
    for (Eigen::Index j = 0; j < i; ++j) {
      const double hj = 10.0 * step_for(x(j));
      Point pp = x, pm = x, mp = x, mm = x;
      pp(i) += hi; pp(j) += hj;
      pm(i) += hi; pm(j) -= hj;
      mp(i) -= hi; mp(j) += hj;
      mm(i) -= hi; mm(j) -= hj;
      h(i, j) = h(j, i) =
          (eval(f, pp) - eval(f, pm) - eval(f, mp) + eval(f, mm)) / (4.0 * hi * hj);
    }
  }
  return h;
}

struct SimplexRun {
  Point best;
  double value;
  int iterations;
};

SimplexRun nelder_mead(const RawObjective& f, const Point& start, double step, int budget) {
  const Eigen::Index n = start.size();
  std::vector<Point> simplex(n + 1, start);
  for (Eigen::Index i = 0; i < n; ++i) simplex[i + 1](i) += step;
  std::vector<double> fv(n + 1);
  for (Eigen::Index i = 0; i <= n; ++i) fv[i] = eval(f, simplex[i]);

  std::vector<Eigen::Index> order(n + 1);
  int it = 0;
  for (; it < budget; ++it) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return fv[a] < fv[b]; });
    const Eigen::Index lo = order.front(), hi = order.back(), next = order[n - 1];

    double size = 0.0;
    for (Eigen::Index i = 0; i <= n; ++i)
      size = std::max(size, (simplex[i] - simplex[lo]).cwiseAbs().maxCoeff());
    const double spread = fv[hi] - fv[lo];
    if (size <= 1e-12 * std::max(1.0, simplex[lo].cwiseAbs().maxCoeff()) ||
        spread <= 1e-16 * std::max(1e-300, std::abs(fv[lo]))) {
      break;
    }

    Point centroid = Point::Zero(n);
    for (Eigen::Index i = 0; i <= n; ++i)
      if (i != hi) centroid += simplex[i];
    centroid /= static_cast<double>(n);

    const Point reflected = centroid + (centroid - simplex[hi]);
    const double fr = eval(f, reflected);
    if (fr < fv[lo]) {
      const Point expanded = centroid + 2.0 * (centroid - simplex[hi]);
      const double fe = eval(f, expanded);
      if (fe < fr) {
        simplex[hi] = expanded;
        fv[hi] = fe;
      } else {
        simplex[hi] = reflected;
        fv[hi] = fr;
      }
      continue;
    }
    if (fr < fv[next]) {
      simplex[hi] = reflected;
      fv[hi] = fr;
      continue;
    }
    const bool outside = fr < fv[hi];
    const Point contracted = outside ? Point(centroid + 0.5 * (reflected - centroid))
                                     : Point(centroid + 0.5 * (simplex[hi] - centroid));
    const double fc = eval(f, contracted);
    if (fc < (outside ? fr : fv[hi])) {
      simplex[hi] = contracted;
      fv[hi] = fc;
      continue;
    }
    for (Eigen::Index i = 0; i <= n; ++i) {
      if (i == lo) continue;
      simplex[i] = simplex[lo] + 0.5 * (simplex[i] - simplex[lo]);
      fv[i] = eval(f, simplex[i]);
    }
  }
  const auto lo = std::min_element(fv.begin(), fv.end()) - fv.begin();
  return SimplexRun{simplex[lo], fv[lo], it};
}

std::vector<double> to_vector(const Point& x) { return {x.data(), x.data() + x.size()}; }

}  // namespace

MinimizeResult minimize_raw_cq(const RawObjective& raw_cq, std::vector<double> start,
                               const MinimizeOptions& options) {
  if (start.empty()) throw InvalidParameter("minimize_raw_cq: need at least one parameter");
  Point x = Eigen::Map<const Point>(start.data(), static_cast<Eigen::Index>(start.size()));
  double fx = eval(raw_cq, x);
  int used = 0;

  constexpr int kMaxRestarts = 50;
  for (int restart = 0; restart < kMaxRestarts; ++restart) {
    const int budget = options.max_iterations - used;
    if (budget <= 0) {
      throw OptimizationFailure("minimize_raw_cq: iteration cap reached", to_vector(x), fx);
    }
    const double step = restart == 0 ? options.initial_step
                                     : options.initial_step * std::pow(0.1, std::min(restart, 4));
    const SimplexRun run = nelder_mead(raw_cq, x, step, budget);
    used += run.iterations;
    const bool improved = run.value < fx - 1e-15 * std::abs(fx);
    if (run.value <= fx) {
      x = run.best;
      fx = run.value;
    }
    if (!improved && restart > 0) break;
  }

  // Newton polish on finite differences; the raw forms are quadratic, so this
  // lands on the minimum to roundoff. Flat directions get a pseudo-inverse.
  Point g = fd_gradient(raw_cq, x);
  for (int k = 0; k < 8 && g.norm() > 0.1 * options.gradient_tol; ++k) {
    const Eigen::MatrixXd h = fd_hessian(raw_cq, x);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
    svd.setThreshold(1e-10);
    const Point trial = x - svd.solve(g);
    const double ft = eval(raw_cq, trial);
    // Near the minimum the step's gain is below roundoff in f; judge it by
    // the gradient instead.
    if (!(ft <= fx + 1e-14 * std::abs(fx))) break;
    const Point gt = fd_gradient(raw_cq, trial);
    if (!(ft <= fx) && !(gt.norm() < g.norm())) break;
    x = trial;
    fx = std::min(fx, ft);
    g = gt;
  }

  const double gnorm = g.norm();
  if (!(gnorm <= options.gradient_tol)) {
    std::ostringstream os;
    os << "minimize_raw_cq: gradient norm " << gnorm << " above " << options.gradient_tol;
    throw OptimizationFailure(os.str(), to_vector(x), fx);
  }
  return MinimizeResult{fx, to_vector(x), gnorm, used};
}

}  // namespace phasebound
