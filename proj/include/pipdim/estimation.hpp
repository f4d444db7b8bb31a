#pragma once

// Noise level and clean-spectrum estimates that feed dimensionality selection.

#include <span>
#include <vector>

#include "pipdim/signal.hpp"
#include "pipdim/types.hpp"

namespace pipdim {

struct NoiseEstimate {
  double sigma_hat = 0.0;
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;
};

/// Count-twice estimator: each half carries noise of variance 2 sigma^2, so
/// the difference has variance 4 sigma^2 and
/// sigma_hat = ||M1 - M2||_F / (2 sqrt(m n)).
NoiseEstimate estimate_noise(const Matrix& half1, const Matrix& half2);

/// As above, and additionally requires both matrices to share kind and
/// construction parameters.
NoiseEstimate estimate_noise(const SignalMatrix& half1, const SignalMatrix& half2);

struct SpectrumEstimate {
  std::vector<double> lambda_hat;  // non-increasing, >= 0
  std::size_t effective_rank = 0;  // number of strictly positive entries
  double threshold = 0.0;          // 2 sigma_hat sqrt(n)
};

/// Universal singular value thresholding:
/// lambda_hat_i = max(lambda_tilde_i - 2 sigma_hat sqrt(n), 0).
SpectrumEstimate estimate_spectrum_usvt(std::span<const double> empirical, double sigma_hat,
                                        std::size_t n);

}  // namespace pipdim
