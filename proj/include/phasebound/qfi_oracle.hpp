#pragma once

#include <functional>
#include <span>
#include <vector>

#include "phasebound/channels.hpp"
#include "phasebound/fock_core.hpp"

namespace phasebound {

/// Eigenvalues below this fraction of the largest one are treated as outside
/// the support of rho.
inline constexpr double kDefaultSupportCutoff = 1e-11;

/// Exact QFI for the phase imprinted by exp(-i phi n) on rho, i.e. rho is the
/// phi = 0 output of a phase-covariant channel and d rho / d phi = -i[n, rho]:
///
///   F = 2 sum_{p_i + p_j > eps} |<e_i| d rho |e_j>|^2 / (p_i + p_j)
///
/// with eps = relative_cutoff * max_i p_i. Throws InvalidState when rho has an
/// eigenvalue below -1e-8.
double qfi_phase_covariant(const DensityMatrix& rho,
                           double relative_cutoff = kDefaultSupportCutoff);

/// Fock-space pipeline: squeezed vacuum at the default truncation, then
/// apply_noise, then qfi_phase_covariant.
double oracle_qfi_squeezed(double r, const NoiseParams& noise);

/// Error-propagation Fisher information (d<M>/d phi)^2 / Var(M).
/// Throws DegenerateMeasurement when var_M <= 0.
double classical_fisher_error_propagation(double mean_M, double var_M, double dmean_dphi);

using RawObjective = std::function<double(std::span<const double>)>;

struct MinimizeOptions {
  int max_iterations = 10000;    ///< simplex iterations summed over restarts
  double gradient_tol = 1e-7;    ///< finite-difference gradient norm at the result
  double initial_step = 1.0;
};

struct MinimizeResult {
  double value = 0.0;
  std::vector<double> argmin;
  double gradient_norm = 0.0;
  int iterations = 0;
};

/// Nelder-Mead simplex descent with restarts, followed by a finite-difference
/// Newton polish. Throws OptimizationFailure carrying the best iterate when the
/// iteration cap is hit or the final gradient norm stays above tolerance.
MinimizeResult minimize_raw_cq(const RawObjective& raw_cq, std::vector<double> start,
                               const MinimizeOptions& options = {});

}  // namespace phasebound
