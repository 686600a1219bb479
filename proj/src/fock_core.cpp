#include "phasebound/fock_core.hpp"

#include <cmath>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

#include "phasebound/errors.hpp"

namespace phasebound {

namespace {

constexpr double kHermitianTolerance = 1e-10;
constexpr double kTraceTolerance = 1e-8;
constexpr double kPsdTolerance = 1e-8;

// Guards the squeezed-vacuum population scan against runaway r.
constexpr int kMaxScanLevels = 1 << 22;

void require_dim(int dim, const char* what) {
  if (dim < 2) {
    std::ostringstream os;
    os << what << ": dimension must be >= 2, got " << dim;
    throw InvalidDimension(os.str());
  }
}

void require_squeezing(double r) {
  if (!std::isfinite(r) || r < 0.0) {
    std::ostringstream os;
    os << "squeezing parameter must be finite and >= 0, got " << r;
    throw InvalidParameter(os.str());
  }
}

// Amplitude ratio c_{m+1}/c_m of the even Fock components of S(r)|0>.
double even_ratio(double tanh_r, int m) {
  return tanh_r * std::sqrt((2.0 * m + 1.0) / (2.0 * m + 2.0));
}

}  // namespace

FockVector::FockVector(CVector amps) : amps_(std::move(amps)) {
  require_dim(static_cast<int>(amps_.size()), "FockVector");
  const double norm = amps_.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw InvalidParameter("FockVector: amplitudes must have a finite, non-zero norm");
  }
  amps_ /= norm;
}

FockVector FockVector::number_state(int k, int dim) {
  require_dim(dim, "number_state");
  if (k < 0 || k >= dim) {
    throw InvalidParameter("number_state: level outside the truncated basis");
  }
  CVector amps = CVector::Zero(dim);
  amps(k) = 1.0;
  return FockVector(std::move(amps));
}

DensityMatrix::DensityMatrix(CMatrix elems) : elems_(std::move(elems)) {
  if (elems_.rows() != elems_.cols() || elems_.rows() < 1) {
    throw ShapeError("DensityMatrix: matrix must be square and non-empty");
  }
  const double asym = (elems_ - elems_.adjoint()).cwiseAbs().maxCoeff();
  if (asym > kHermitianTolerance) {
    std::ostringstream os;
    os << "DensityMatrix: not Hermitian (max |rho - rho^dag| = " << asym << ")";
    throw InvalidState(os.str());
  }
  elems_ = 0.5 * (elems_ + elems_.adjoint()).eval();

  const double tr = elems_.trace().real();
  if (std::abs(tr - 1.0) > kTraceTolerance) {
    std::ostringstream os;
    os << "DensityMatrix: trace " << tr << " differs from 1";
    throw InvalidState(os.str());
  }
  const double min_eig = eigenvalues().minCoeff();
  if (min_eig < -kPsdTolerance) {
    std::ostringstream os;
    os << "DensityMatrix: negative eigenvalue " << min_eig;
    throw InvalidState(os.str());
  }
}

DensityMatrix DensityMatrix::pure(const FockVector& psi) {
  return DensityMatrix(psi.amps() * psi.amps().adjoint());
}

Eigen::VectorXd DensityMatrix::eigenvalues() const {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(elems_, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

InputMoments InputMoments::checked(double mean_n, double var_n) {
  if (!std::isfinite(mean_n) || !std::isfinite(var_n) || mean_n < 0.0 || var_n < 0.0) {
    std::ostringstream os;
    os << "InputMoments: mean_n and var_n must be finite and >= 0 (got " << mean_n << ", "
       << var_n << ")";
    throw InvalidParameter(os.str());
  }
  return InputMoments{mean_n, var_n};
}

RMatrix number_operator(int dim) {
  require_dim(dim, "number_operator");
  return Eigen::VectorXd::LinSpaced(dim, 0.0, dim - 1.0).asDiagonal();
}

CMatrix annihilation_operator(int dim) {
  require_dim(dim, "annihilation_operator");
  CMatrix a = CMatrix::Zero(dim, dim);
  for (int k = 1; k < dim; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
  return a;
}

int squeezed_vacuum_dim(double r) {
  require_squeezing(r);
  const double t = std::tanh(r);
  double amp = 1.0 / std::sqrt(std::cosh(r));
  double kept = 0.0;
  for (int m = 0; 2 * m < kMaxScanLevels; ++m) {
    kept += amp * amp;
    if (1.0 - kept <= kTruncationTolerance) return std::max(2, 2 * m + 1);
    amp *= even_ratio(t, m);
  }
  throw InvalidParameter("squeezed_vacuum_dim: squeezing too strong for a Fock truncation");
}

FockVector squeezed_vacuum(double r, int dim) {
  require_squeezing(r);
  require_dim(dim, "squeezed_vacuum");
  const double t = std::tanh(r);
  CVector amps = CVector::Zero(dim);
  double amp = 1.0 / std::sqrt(std::cosh(r));
  double kept = 0.0;
  for (int m = 0; 2 * m < dim; ++m) {
    amps(2 * m) = amp;
    kept += amp * amp;
    amp *= even_ratio(t, m);
  }
  const double discarded = 1.0 - kept;
  if (discarded > kTruncationTolerance) {
    const int suggested = squeezed_vacuum_dim(r);
    std::ostringstream os;
    os << "squeezed_vacuum: truncation at dim " << dim << " discards " << discarded
       << " probability; use dim >= " << suggested;
    throw TruncationError(os.str(), suggested, discarded);
  }
  return FockVector(std::move(amps));
}

FockVector squeezed_vacuum(double r) { return squeezed_vacuum(r, squeezed_vacuum_dim(r)); }

InputMoments squeezed_vacuum_moments(double r) {
  require_squeezing(r);
  const double s = std::sinh(r);
  const double mean = s * s;
  return InputMoments{mean, 2.0 * mean * (mean + 1.0)};
}

double squeezing_for_mean(double mean_n) {
  if (!std::isfinite(mean_n) || mean_n < 0.0) {
    throw InvalidParameter("squeezing_for_mean: mean photon number must be finite and >= 0");
  }
  return std::asinh(std::sqrt(mean_n));
}

double thermal_tail_mass(double n_T, int dim) {
  if (!std::isfinite(n_T) || n_T < 0.0) throw InvalidParameter("thermal occupation must be >= 0");
  if (n_T == 0.0) return 0.0;
  return std::pow(n_T / (n_T + 1.0), dim);
}

int thermal_dim(double n_T) {
  int dim = 2;
  while (thermal_tail_mass(n_T, dim) > kTruncationTolerance) {
    if (dim >= kMaxScanLevels) throw InvalidParameter("thermal_dim: occupation too large");
    ++dim;
  }
  return dim;
}

DensityMatrix thermal_state(double n_T, int dim) {
  if (!std::isfinite(n_T) || n_T < 0.0) {
    throw InvalidParameter("thermal_state: occupation must be finite and >= 0");
  }
  require_dim(dim, "thermal_state");
  const double q = n_T / (n_T + 1.0);
  Eigen::VectorXd p(dim);
  double w = 1.0;
  for (int k = 0; k < dim; ++k) {
    p(k) = w;
    w *= q;
  }
  p /= p.sum();
  return DensityMatrix(p.cast<Complex>().asDiagonal());
}

CMatrix beam_splitter(double theta, int dimA, int dimB) {
  require_dim(dimA, "beam_splitter");
  require_dim(dimB, "beam_splitter");
  if (static_cast<long>(dimA) * dimB > kMaxProductDim) {
    std::ostringstream os;
    os << "beam_splitter: product dimension " << static_cast<long>(dimA) * dimB
       << " exceeds the dense limit " << kMaxProductDim;
    throw InvalidDimension(os.str());
  }
  const int n = dimA * dimB;
  // theta (a b^dag - a^dag b) is real antisymmetric in the number basis.
  RMatrix gen = RMatrix::Zero(n, n);
  for (int i = 1; i < dimA; ++i) {
    for (int j = 0; j + 1 < dimB; ++j) {
      const double amp = std::sqrt(static_cast<double>(i) * (j + 1));
      gen(static_cast<long>(i - 1) * dimB + j + 1, static_cast<long>(i) * dimB + j) += amp;
      gen(static_cast<long>(i) * dimB + j, static_cast<long>(i - 1) * dimB + j + 1) -= amp;
    }
  }
  const RMatrix scaled = theta * gen;
  const RMatrix u = scaled.exp();
  return u.cast<Complex>();
}

RMatrix beam_splitter_block(double theta, int total_photons) {
  if (total_photons < 0) throw InvalidParameter("beam_splitter_block: negative photon number");
  const int n = total_photons + 1;
  RMatrix gen = RMatrix::Zero(n, n);
  for (int k = 0; k < total_photons; ++k) {
    // a b^dag |N-k, k> = sqrt((N-k)(k+1)) |N-k-1, k+1>
    const double amp = std::sqrt(static_cast<double>(total_photons - k) * (k + 1));
    gen(k + 1, k) += amp;
    gen(k, k + 1) -= amp;
  }
  const RMatrix scaled = theta * gen;
  return scaled.exp();
}

CMatrix tensor_product(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

DensityMatrix partial_trace(const CMatrix& rho_ab, Subsystem keep, int dimA, int dimB) {
  if (dimA < 1 || dimB < 1 || rho_ab.rows() != static_cast<Eigen::Index>(dimA) * dimB ||
      rho_ab.cols() != rho_ab.rows()) {
    std::ostringstream os;
    os << "partial_trace: matrix of shape " << rho_ab.rows() << "x" << rho_ab.cols()
       << " does not match dims " << dimA << "x" << dimB;
    throw ShapeError(os.str());
  }
  if (keep == Subsystem::A) {
    CMatrix out = CMatrix::Zero(dimA, dimA);
    for (int i = 0; i < dimA; ++i)
      for (int j = 0; j < dimA; ++j)
        for (int k = 0; k < dimB; ++k) out(i, j) += rho_ab(i * dimB + k, j * dimB + k);
    return DensityMatrix(std::move(out));
  }
  CMatrix out = CMatrix::Zero(dimB, dimB);
  for (int i = 0; i < dimA; ++i)
    for (int k = 0; k < dimB; ++k)
      for (int l = 0; l < dimB; ++l) out(k, l) += rho_ab(i * dimB + k, i * dimB + l);
  return DensityMatrix(std::move(out));
}

InputMoments moments(const FockVector& psi) {
  double mean = 0.0;
  double second = 0.0;
  for (int k = 0; k < psi.dim(); ++k) {
    const double p = std::norm(psi[k]);
    mean += k * p;
    second += static_cast<double>(k) * k * p;
  }
  return InputMoments{mean, std::max(0.0, second - mean * mean)};
}

InputMoments moments(const DensityMatrix& rho) {
  double mean = 0.0;
  double second = 0.0;
  for (int k = 0; k < rho.dim(); ++k) {
    const double p = rho(k, k).real();
    mean += k * p;
    second += static_cast<double>(k) * k * p;
  }
  return InputMoments{mean, std::max(0.0, second - mean * mean)};
}

}  // namespace phasebound
