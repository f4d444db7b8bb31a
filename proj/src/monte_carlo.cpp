#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "digest.hpp"
#include "pipdim/error.hpp"
#include "pipdim/kernels.hpp"
#include "pipdim/linalg.hpp"
#include "pipdim/selection.hpp"

namespace pipdim {

namespace kernels {

std::vector<double> simulate_trial(const TrialSetup& setup, std::uint64_t trial) {
  const auto d = static_cast<Eigen::Index>(setup.lambda.size());
  const auto n = static_cast<Eigen::Index>(setup.n);

  std::seed_seq seq{static_cast<std::uint32_t>(setup.seed), static_cast<std::uint32_t>(setup.seed >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
  std::mt19937_64 rng(seq);

  const Matrix U = linalg::haar_orthonormal(n, d, rng);
  const Eigen::Map<const Vector> lambda(setup.lambda.data(), d);
  Matrix M = U * lambda.asDiagonal() * U.transpose();
  M += linalg::symmetric_gaussian_noise(n, setup.sigma, rng);

  const auto eig = linalg::symmetric_eigen(M);
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return std::abs(eig.values(a)) > std::abs(eig.values(b));
  });

  Matrix U_tilde(n, d);
  Vector weight_tilde(d);  // |lambda~_j|^{2a}
  for (Eigen::Index j = 0; j < d; ++j) {
    const Eigen::Index src = order[static_cast<std::size_t>(j)];
    U_tilde.col(j) = eig.vectors.col(src);
    weight_tilde(j) = linalg::positive_power(std::abs(eig.values(src)), 2.0 * setup.alpha);
  }
  Vector weight(d);  // lambda_i^{2a}
  for (Eigen::Index i = 0; i < d; ++i) weight(i) = linalg::positive_power(lambda(i), 2.0 * setup.alpha);

  // ||E E^T - Ê Ê^T||^2 = ||E^T E||^2 + ||Ê^T Ê||^2 - 2 ||E^T Ê||^2, swept over k.
  const Matrix G = U.transpose() * U_tilde;
  const double clean = weight.squaredNorm();
  std::vector<double> losses(static_cast<std::size_t>(d));
  double noisy = 0.0;
  double cross = 0.0;
  for (Eigen::Index k = 0; k < d; ++k) {
    noisy += weight_tilde(k) * weight_tilde(k);
    cross += weight_tilde(k) * weight.dot(G.col(k).cwiseAbs2());
    losses[static_cast<std::size_t>(k)] = std::sqrt(std::max(0.0, clean + noisy - 2.0 * cross));
  }
  return losses;
}

}  // namespace kernels

namespace {

// Drops trailing zeros; the remaining entries must be positive and non-increasing.
std::span<const double> planted_rank(std::span<const double> spectrum, std::size_t n) {
  for (std::size_t i = 0; i < spectrum.size(); ++i) {
    require(std::isfinite(spectrum[i]) && spectrum[i] >= 0.0, "spectrum entries must be finite and >= 0");
    if (i > 0) require(spectrum[i] <= spectrum[i - 1], "spectrum must be non-increasing");
  }
  std::size_t d = spectrum.size();
  while (d > 0 && spectrum[d - 1] == 0.0) --d;
  if (d == 0) fail(ErrorKind::degenerate, "no signal detected: estimated spectrum is all zero");
  require(d <= n, "spectrum has more non-zero entries than n");
  return spectrum.first(d);
}

}  // namespace

std::string spectrum_digest(std::span<const double> spectrum) {
  detail::Fnv1a hash;
  hash.update(static_cast<std::uint64_t>(spectrum.size()));
  for (const double value : spectrum) hash.update(value);
  return hash.hex();
}

PipLossCurve theorem3_curve(std::span<const double> spectrum, double sigma, double alpha,
                            std::size_t n, const BoundOptions& options) {
  const auto planted = planted_rank(spectrum, n);
  const auto terms = theorem3_terms(planted, sigma, alpha, n, options);
  PipLossCurve curve;
  curve.losses.reserve(terms.size());
  for (const auto& t : terms) curve.losses.push_back(t.total);
  curve.method = CurveMethod::theorem3;
  curve.alpha = alpha;
  curve.sigma = sigma;
  curve.spectrum_digest = spectrum_digest(planted);
  return curve;
}

PipLossCurve monte_carlo_pip_curve(std::span<const double> spectrum, double sigma, double alpha,
                                   std::size_t n, const MonteCarloOptions& options) {
  require(sigma >= 0.0 && std::isfinite(sigma), "sigma must be finite and >= 0");
  require(alpha >= 0.0 && alpha <= 1.0, "alpha must lie in [0, 1]");
  require(options.trials >= 1, "trials must be >= 1");
  const auto planted = planted_rank(spectrum, n);

  kernels::TrialSetup setup{{planted.begin(), planted.end()}, sigma, alpha, n, options.seed};
  const Matrix losses = options.parallel ? kernels::omp::monte_carlo_trials(setup, options.trials)
                                         : kernels::serial::monte_carlo_trials(setup, options.trials);

  const auto T = static_cast<double>(options.trials);
  PipLossCurve curve;
  curve.method = CurveMethod::monte_carlo;
  curve.alpha = alpha;
  curve.sigma = sigma;
  curve.trials = options.trials;
  curve.seed = options.seed;
  curve.spectrum_digest = spectrum_digest(planted);
  curve.losses.resize(planted.size());
  std::vector<double> errors(planted.size(), 0.0);
  for (Eigen::Index k = 0; k < losses.cols(); ++k) {
    const double mean = losses.col(k).mean();
    curve.losses[static_cast<std::size_t>(k)] = mean;
    if (options.trials > 1) {
      const double variance = (losses.col(k).array() - mean).square().sum() / (T - 1.0);
      errors[static_cast<std::size_t>(k)] = std::sqrt(variance / T);
    }
  }
  curve.standard_errors = std::move(errors);
  return curve;
}

}  // namespace pipdim
