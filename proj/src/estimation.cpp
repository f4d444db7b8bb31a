#include "pipdim/estimation.hpp"

#include <algorithm>
#include <cmath>

#include "pipdim/error.hpp"

namespace pipdim {

NoiseEstimate estimate_noise(const Matrix& half1, const Matrix& half2) {
  require(half1.rows() == half2.rows() && half1.cols() == half2.cols(),
          "estimate_noise: matrices differ in shape");
  require(half1.size() > 0, "estimate_noise: empty matrices");
  require(half1.allFinite() && half2.allFinite(), "estimate_noise: non-finite entries");
  const double mn = static_cast<double>(half1.rows()) * static_cast<double>(half1.cols());
  return {(half1 - half2).norm() / (2.0 * std::sqrt(mn)), half1.rows(), half1.cols()};
}

NoiseEstimate estimate_noise(const SignalMatrix& half1, const SignalMatrix& half2) {
  require(half1.spec == half2.spec, "estimate_noise: signal matrices differ in kind or parameters");
  return estimate_noise(half1.values, half2.values);
}

SpectrumEstimate estimate_spectrum_usvt(std::span<const double> empirical, double sigma_hat,
                                        std::size_t n) {
  require(sigma_hat >= 0.0 && std::isfinite(sigma_hat), "sigma_hat must be finite and >= 0");
  for (std::size_t i = 0; i < empirical.size(); ++i) {
    require(empirical[i] >= 0.0, "empirical singular values must be >= 0");
    if (i > 0) require(empirical[i] <= empirical[i - 1], "empirical singular values must be non-increasing");
  }

  SpectrumEstimate estimate;
  estimate.threshold = 2.0 * sigma_hat * std::sqrt(static_cast<double>(n));
  estimate.lambda_hat.reserve(empirical.size());
  for (const double value : empirical) {
    const double clipped = std::max(value - estimate.threshold, 0.0);
    estimate.lambda_hat.push_back(clipped);
    if (clipped > 0.0) ++estimate.effective_rank;
  }
  return estimate;
}

}  // namespace pipdim
