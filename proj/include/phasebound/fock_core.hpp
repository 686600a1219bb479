#pragma once

#include <complex>

#include <Eigen/Dense>

namespace phasebound {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;

/// Largest probability mass a Fock truncation may discard.
inline constexpr double kTruncationTolerance = 1e-8;

/// Largest two-mode product dimension materialized as a dense matrix.
inline constexpr int kMaxProductDim = 4096;

/// Pure single-mode state on a truncated number basis; amps[k] is the
/// amplitude of |k>. Always normalized.
class FockVector {
 public:
  /// Normalizes `amps`. Throws InvalidDimension for fewer than two levels and
  /// InvalidParameter for a zero vector.
  explicit FockVector(CVector amps);

  static FockVector number_state(int k, int dim);

  int dim() const noexcept { return static_cast<int>(amps_.size()); }
  const CVector& amps() const noexcept { return amps_; }
  Complex operator[](int k) const { return amps_(k); }

 private:
  CVector amps_;
};

/// Hermitian, unit-trace, positive semidefinite operator on a truncated Fock
/// space. The invariants are checked once at construction.
class DensityMatrix {
 public:
  explicit DensityMatrix(CMatrix elems);

  static DensityMatrix pure(const FockVector& psi);

  int dim() const noexcept { return static_cast<int>(elems_.rows()); }
  const CMatrix& elems() const noexcept { return elems_; }
  Complex operator()(int row, int col) const { return elems_(row, col); }

  /// Ascending eigenvalues.
  Eigen::VectorXd eigenvalues() const;

 private:
  CMatrix elems_;
};

/// Photon-number mean and variance of a probe.
struct InputMoments {
  double mean_n = 0.0;
  double var_n = 0.0;

  /// Throws InvalidParameter on negative or non-finite entries.
  static InputMoments checked(double mean_n, double var_n);
};

RMatrix number_operator(int dim);
CMatrix annihilation_operator(int dim);

/// Smallest even-support truncation keeping squeezed-vacuum population
/// >= 1 - kTruncationTolerance.
int squeezed_vacuum_dim(double r);

/// S(r)|0> with non-negative real amplitudes on `dim` levels, renormalized.
/// Throws TruncationError (carrying squeezed_vacuum_dim(r)) when the discarded
/// mass exceeds kTruncationTolerance.
FockVector squeezed_vacuum(double r, int dim);
FockVector squeezed_vacuum(double r);

/// Closed-form moments: <n> = sinh^2 r, var = 2<n>(<n>+1). Valid at any r,
/// including squeezing levels far beyond what a Fock truncation can hold.
InputMoments squeezed_vacuum_moments(double r);

/// Inverse of sinh^2 r = mean_n.
double squeezing_for_mean(double mean_n);

/// Geometric tail mass (n_T/(n_T+1))^dim discarded by truncating at `dim`.
double thermal_tail_mass(double n_T, int dim);

/// Smallest dim >= 2 with thermal_tail_mass <= kTruncationTolerance.
int thermal_dim(double n_T);

DensityMatrix thermal_state(double n_T, int dim);

/// Dense exp(theta (a (x) b^dag - a^dag (x) b)) on the truncated product space,
/// basis index i*dimB + j for |i>_A |j>_B.
CMatrix beam_splitter(double theta, int dimA, int dimB);

/// Exact beam-splitter block on the (N+1)-dimensional total-photon-number-N
/// subspace, indexed by the B-mode occupation k (basis |N-k, k>).
RMatrix beam_splitter_block(double theta, int total_photons);

CMatrix tensor_product(const CMatrix& a, const CMatrix& b);

enum class Subsystem { A, B };

DensityMatrix partial_trace(const CMatrix& rho_ab, Subsystem keep, int dimA, int dimB);

InputMoments moments(const FockVector& psi);
InputMoments moments(const DensityMatrix& rho);

}  // namespace phasebound
