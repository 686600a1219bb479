#include "phasebound/channels.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "phasebound/errors.hpp"

namespace phasebound {

void NoiseParams::validate() const {
  if (!(eta > 0.0 && eta <= 1.0)) {
    std::ostringstream os;
    os << "transmission eta must lie in (0, 1], got " << eta;
    throw InvalidParameter(os.str());
  }
  if (!std::isfinite(n_T) || n_T < 0.0) {
    throw InvalidParameter("thermal occupation n_T must be finite and >= 0");
  }
  if (!std::isfinite(lambda) || lambda < 0.0) {
    throw InvalidParameter("diffusion strength lambda must be finite and >= 0");
  }
}

DensityMatrix phase_shift(const DensityMatrix& rho, double phi) {
  CMatrix out = rho.elems();
  for (int l = 0; l < rho.dim(); ++l)
    for (int k = 0; k < rho.dim(); ++k) out(l, k) *= std::polar(1.0, -phi * (l - k));
  return DensityMatrix(std::move(out));
}

DensityMatrix lossy_thermal_channel(const DensityMatrix& rho, double eta, double n_T,
                                    int bath_dim) {
  NoiseParams{eta, n_T, 0.0}.validate();
  if (bath_dim < 2) throw InvalidDimension("lossy_thermal_channel: bath_dim must be >= 2");
  const double tail = thermal_tail_mass(n_T, bath_dim);
  if (tail > kTruncationTolerance) {
    const int suggested = thermal_dim(n_T);
    std::ostringstream os;
    os << "lossy_thermal_channel: bath truncated at " << bath_dim << " discards " << tail
       << " thermal mass; use bath_dim >= " << suggested;
    throw TruncationError(os.str(), suggested, tail);
  }

  const int ds = rho.dim();
  const int out_dim = ds + bath_dim - 1;
  const DensityMatrix bath = thermal_state(n_T, bath_dim);
  const double theta = std::acos(std::sqrt(eta));

  // Exact blocks for every total photon number the input can reach.
  std::vector<RMatrix> blocks;
  blocks.reserve(out_dim);
  for (int n = 0; n < out_dim; ++n) blocks.push_back(beam_splitter_block(theta, n));

  // |n>_S |j>_E -> sum_k B_{n+j}(k, j) |n+j-k>_S |k>_E; tracing out k pairs
  // terms with equal bath occupation on both sides.
  CMatrix out = CMatrix::Zero(out_dim, out_dim);
  for (int j = 0; j < bath_dim; ++j) {
    const double pj = bath(j, j).real();
    if (pj == 0.0) continue;
    for (int n = 0; n < ds; ++n) {
      const RMatrix& bn = blocks[n + j];
      for (int n2 = 0; n2 < ds; ++n2) {
        const Complex r = pj * rho(n, n2);
        if (r == Complex(0.0)) continue;
        const RMatrix& bn2 = blocks[n2 + j];
        const int kmax = std::min(n, n2) + j;
        for (int k = 0; k <= kmax; ++k) {
          out(n + j - k, n2 + j - k) += r * bn(k, j) * bn2(k, j);
        }
      }
    }
  }
  return DensityMatrix(std::move(out));
}

DensityMatrix lossy_thermal_channel(const DensityMatrix& rho, double eta, double n_T) {
  return lossy_thermal_channel(rho, eta, n_T, thermal_dim(n_T));
}

DensityMatrix phase_diffusion(const DensityMatrix& rho, double lambda) {
  if (!std::isfinite(lambda) || lambda < 0.0) {
    throw InvalidParameter("phase_diffusion: lambda must be finite and >= 0");
  }
  CMatrix out = rho.elems();
  const double l2 = lambda * lambda;
  for (int l = 0; l < rho.dim(); ++l) {
    for (int k = 0; k < rho.dim(); ++k) {
      const double d = l - k;
      out(l, k) *= std::exp(-l2 * d * d);
    }
  }
  return DensityMatrix(std::move(out));
}

DensityMatrix apply_noise(const DensityMatrix& rho, const NoiseParams& noise) {
  noise.validate();
  return phase_diffusion(lossy_thermal_channel(rho, noise.eta, noise.n_T), noise.lambda);
}

}  // namespace phasebound
