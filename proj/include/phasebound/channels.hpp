#pragma once

#include "phasebound/fock_core.hpp"

namespace phasebound {

/// Noise acting on the probe mode.
struct NoiseParams {
  double eta = 1.0;     ///< transmission, 0 < eta <= 1
  double n_T = 0.0;     ///< thermal occupation of the loss bath
  double lambda = 0.0;  ///< phase-diffusion strength

  /// Throws InvalidParameter when any field leaves its physical range.
  void validate() const;
};

/// rho_{lk} -> exp(-i phi (l - k)) rho_{lk}.
DensityMatrix phase_shift(const DensityMatrix& rho, double phi);

/// Mixes the probe with a thermal bath of `bath_dim` levels on a beam splitter
/// of transmission eta and traces the bath out.
///
/// The two-mode dilation is evaluated block by block in total photon number,
/// so no photon is lost to truncation: the output lives on
/// rho.dim() + bath_dim - 1 levels and for eta = 1 equals rho zero-padded to
/// that size. Throws TruncationError when the thermal tail beyond `bath_dim`
/// exceeds kTruncationTolerance.
DensityMatrix lossy_thermal_channel(const DensityMatrix& rho, double eta, double n_T,
                                    int bath_dim);

/// Same, with bath_dim = thermal_dim(n_T).
DensityMatrix lossy_thermal_channel(const DensityMatrix& rho, double eta, double n_T);

/// rho_{lk} -> exp(-lambda^2 (l - k)^2) rho_{lk}.
DensityMatrix phase_diffusion(const DensityMatrix& rho, double lambda);

/// Combined noise in the fixed order: loss into the thermal bath, then
/// diffusion. The phase shift is left to the caller.
DensityMatrix apply_noise(const DensityMatrix& rho, const NoiseParams& noise);

}  // namespace phasebound
