#include <algorithm>
#include <cmath>

#include "pipdim/error.hpp"
#include "pipdim/kernels.hpp"
#include "pipdim/linalg.hpp"
#include "pipdim/perturbation.hpp"
#include "pipdim/selection.hpp"

namespace pipdim {

using linalg::positive_power;

BiasVarianceDecomposition theorem1_decomposition(const Matrix& E, const Matrix& E_hat) {
  require(E.rows() == E_hat.rows(), "theorem1: row counts differ");
  require(E_hat.cols() <= E.cols(), "theorem1: need k <= d");
  require_orthonormal(E, "E");
  require_orthonormal(E_hat, "E_hat");

  const double loss = pip_loss(E, E_hat);
  const double leak = (E_hat - E * (E.transpose() * E_hat)).squaredNorm();
  return {loss * loss, static_cast<double>(E.cols() - E_hat.cols()), 2.0 * leak};
}

DeterministicBound theorem2_bound(const Matrix& M, const Matrix& M_tilde, double alpha,
                                  std::size_t k, std::size_t d) {
  require(M.rows() == M.cols() && M.rows() == M_tilde.rows() && M.cols() == M_tilde.cols(),
          "theorem2: M and M_tilde must be square and of equal size");
  require(alpha >= 0.0 && alpha <= 1.0, "alpha must lie in [0, 1]");
  const auto n = static_cast<std::size_t>(M.rows());
  require(k >= 1 && k <= d && d <= n, "theorem2: need 1 <= k <= d <= n");

  const SvdFactors clean = svd(M);
  const SvdFactors noisy = svd(M_tilde);
  const auto& lambda = clean.singular_values;
  const auto& lambda_tilde = noisy.singular_values;
  const auto K = static_cast<Eigen::Index>(k);
  const auto D = static_cast<Eigen::Index>(d);

  Matrix E = clean.U.leftCols(D);
  for (Eigen::Index i = 0; i < D; ++i) E.col(i) *= positive_power(lambda(i), alpha);
  Matrix E_hat = noisy.U.leftCols(K);
  for (Eigen::Index i = 0; i < K; ++i) E_hat.col(i) *= positive_power(lambda_tilde(i), alpha);

  DeterministicBound bound{};
  bound.lhs = pip_loss(E, E_hat);

  double bias = 0.0;
  for (Eigen::Index i = K; i < D; ++i) bias += positive_power(lambda(i), 4.0 * alpha);
  bound.bias = std::sqrt(bias);

  double magnitude = 0.0;
  for (Eigen::Index i = 0; i < K; ++i) {
    const double diff =
        positive_power(lambda(i), 2.0 * alpha) - positive_power(lambda_tilde(i), 2.0 * alpha);
    magnitude += diff * diff;
  }
  bound.magnitude = std::sqrt(magnitude);

  // H(r, j) = u_r^T ũ_j; the i-th direction factor is the block r > i, j <= i.
  const Matrix H = clean.U.transpose() * noisy.U.leftCols(K);
  double direction = 0.0;
  for (Eigen::Index i = 1; i <= K; ++i) {
    const double factor =
        H.bottomLeftCorner(static_cast<Eigen::Index>(n) - i, i).norm();
    const double upper = positive_power(lambda(i - 1), 2.0 * alpha);
    const double lower = i < K ? positive_power(lambda(i), 2.0 * alpha) : 0.0;
    direction += (upper - lower) * factor;
  }
  bound.direction = std::sqrt(2.0) * direction;
  return bound;
}

namespace {

void check_bound_inputs(std::span<const double> spectrum, double sigma, double alpha, std::size_t n) {
  require(!spectrum.empty(), "spectrum must be non-empty");
  require(spectrum.size() <= n, "spectrum longer than n");
  require(sigma >= 0.0 && std::isfinite(sigma), "sigma must be finite and >= 0");
  require(alpha >= 0.0 && alpha <= 1.0, "alpha must lie in [0, 1]");
  for (std::size_t i = 0; i < spectrum.size(); ++i) {
    require(spectrum[i] >= 0.0 && std::isfinite(spectrum[i]), "spectrum entries must be finite and >= 0");
    if (i > 0) require(spectrum[i] <= spectrum[i - 1], "spectrum must be non-increasing");
  }
}

[[noreturn]] void repeated_values() {
  fail(ErrorKind::invalid_argument, "repeated singular values: bound undefined");
}

// lambda_{i+1} with zero padding, 0-based i.
double next_value(std::span<const double> spectrum, std::size_t i) {
  return i + 1 < spectrum.size() ? spectrum[i + 1] : 0.0;
}

}  // namespace

std::vector<ExpectationBound> theorem3_terms(std::span<const double> spectrum, double sigma,
                                             double alpha, std::size_t n,
                                             const BoundOptions& options) {
  check_bound_inputs(spectrum, sigma, alpha, n);
  const std::size_t d = spectrum.size();
  std::vector<ExpectationBound> terms(d);

  // Suffix sums of lambda^{4a} for the bias term.
  std::vector<double> tail(d + 1, 0.0);
  for (std::size_t i = d; i-- > 0;) tail[i] = tail[i + 1] + positive_power(spectrum[i], 4.0 * alpha);

  if (alpha == 0.0) {
    // sum_{r <= k, s in range} (lambda_r - lambda_s)^-2
    std::vector<double> variance_sum(d, 0.0);
    if (options.alpha0_range == Alpha0Range::beyond_rank) {
      const double padding = static_cast<double>(n - d);
      double prefix = 0.0;
      for (std::size_t k = 0; k < d; ++k) {
        if (padding > 0.0) {
          if (!(spectrum[k] > 0.0)) repeated_values();
          prefix += padding / (spectrum[k] * spectrum[k]);
        }
        variance_sum[k] = prefix;
      }
    } else {
      std::size_t valid = 0;
      while (valid < d && (valid + 1 == n || spectrum[valid] - next_value(spectrum, valid) > 0.0)) ++valid;
      if (valid < d) {
        // The sums are still defined for k < the first tie; fail only if asked beyond it.
        if (valid == 0) repeated_values();
      }
      const auto sums = kernels::omp::gap_inverse_square_sums(spectrum, n, valid);
      for (std::size_t k = 0; k < d; ++k) variance_sum[k] = k < valid ? sums[k] : std::nan("");
    }
    for (std::size_t k = 0; k < d; ++k) {
      if (std::isnan(variance_sum[k])) repeated_values();
      if (k + 1 == d && !(spectrum[d - 1] > 0.0)) {
        fail(ErrorKind::invalid_argument, "alpha = 0 with k = d requires lambda_d > 0");
      }
      const double bias2 = static_cast<double>(d - (k + 1));
      const double var2 = 2.0 * sigma * sigma * variance_sum[k];
      terms[k] = {std::sqrt(bias2), 0.0, std::sqrt(var2), std::sqrt(bias2 + var2)};
    }
    return terms;
  }

  // Every gap lambda_i - lambda_{i+1} with i <= d must be positive (i < n).
  for (std::size_t i = 0; i < d; ++i) {
    if (i + 1 < n && !(spectrum[i] - next_value(spectrum, i) > 0.0)) repeated_values();
  }
  const auto gap_sums = kernels::omp::gap_inverse_square_sums(spectrum, n, d);

  const double magnitude_scale = 2.0 * std::sqrt(2.0 * static_cast<double>(n)) * alpha * sigma;
  const bool mirsky = options.mirsky_tightening && alpha == 0.5;
  double magnitude_sum = 0.0;
  double direction_sum = 0.0;
  for (std::size_t k = 0; k < d; ++k) {
    magnitude_sum += positive_power(spectrum[k], 4.0 * alpha - 2.0);
    const double coefficient = positive_power(spectrum[k], 2.0 * alpha) -
                               positive_power(next_value(spectrum, k), 2.0 * alpha);
    direction_sum += coefficient * sigma * std::sqrt(gap_sums[k]);

    ExpectationBound& t = terms[k];
    t.bias = std::sqrt(tail[k + 1]);
    t.magnitude = mirsky ? static_cast<double>(k + 1) * sigma : magnitude_scale * std::sqrt(magnitude_sum);
    t.direction = std::sqrt(2.0) * direction_sum;
    t.total = t.bias + t.magnitude + t.direction;
  }
  return terms;
}

ExpectationBound theorem3_bound(std::span<const double> spectrum, double sigma, double alpha,
                                std::size_t k, std::size_t n, const BoundOptions& options) {
  require(k >= 1 && k <= spectrum.size(), "theorem3: need 1 <= k <= d");
  // Only the first k gaps matter for the variance terms; the bias needs the rest.
  check_bound_inputs(spectrum, sigma, alpha, n);
  if (alpha > 0.0) {
    for (std::size_t i = 0; i < k; ++i) {
      if (i + 1 < n && !(spectrum[i] - next_value(spectrum, i) > 0.0)) repeated_values();
    }
    const auto gap_sums = kernels::omp::gap_inverse_square_sums(spectrum, n, k);
    double bias = 0.0;
    for (std::size_t i = k; i < spectrum.size(); ++i) bias += positive_power(spectrum[i], 4.0 * alpha);
    double magnitude = 0.0;
    double direction = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      magnitude += positive_power(spectrum[i], 4.0 * alpha - 2.0);
      const double coefficient = positive_power(spectrum[i], 2.0 * alpha) -
                                 positive_power(next_value(spectrum, i), 2.0 * alpha);
      direction += coefficient * sigma * std::sqrt(gap_sums[i]);
    }
    ExpectationBound t{};
    t.bias = std::sqrt(bias);
    t.magnitude = (options.mirsky_tightening && alpha == 0.5)
                      ? static_cast<double>(k) * sigma
                      : 2.0 * std::sqrt(2.0 * static_cast<double>(n)) * alpha * sigma * std::sqrt(magnitude);
    t.direction = std::sqrt(2.0) * direction;
    t.total = t.bias + t.magnitude + t.direction;
    return t;
  }

  const std::size_t d = spectrum.size();
  if (k == d && !(spectrum[d - 1] > 0.0)) {
    fail(ErrorKind::invalid_argument, "alpha = 0 with k = d requires lambda_d > 0");
  }
  double variance_sum = 0.0;
  if (options.alpha0_range == Alpha0Range::beyond_rank) {
    for (std::size_t r = 0; r < k && d < n; ++r) {
      if (!(spectrum[r] > 0.0)) repeated_values();
      variance_sum += static_cast<double>(n - d) / (spectrum[r] * spectrum[r]);
    }
  } else {
    if (k < n && !(spectrum[k - 1] - next_value(spectrum, k - 1) > 0.0)) repeated_values();
    variance_sum = kernels::omp::gap_inverse_square_sums(spectrum, n, k)[k - 1];
  }
  const double bias2 = static_cast<double>(d - k);
  const double var2 = 2.0 * sigma * sigma * variance_sum;
  return {std::sqrt(bias2), 0.0, std::sqrt(var2), std::sqrt(bias2 + var2)};
}

std::vector<GrowthIncrement> variance_growth_profile(std::span<const double> spectrum, double sigma,
                                                     double alpha, std::size_t n,
                                                     const BoundOptions& options) {
  const auto terms = theorem3_terms(spectrum, sigma, alpha, n, options);
  std::vector<GrowthIncrement> profile;
  profile.reserve(terms.size());
  double previous_magnitude = 0.0;
  double previous_direction = 0.0;
  for (std::size_t k = 0; k < terms.size(); ++k) {
    profile.push_back({k + 1, terms[k].magnitude - previous_magnitude,
                       terms[k].direction - previous_direction,
                       positive_power(spectrum[k], 2.0 * alpha - 1.0)});
    previous_magnitude = terms[k].magnitude;
    previous_direction = terms[k].direction;
  }
  return profile;
}

}  // namespace pipdim
