#pragma once

// Dimensionality selection: PIP-loss bias/variance bounds, the Monte-Carlo
// loss curve, argmin selection and p% sub-optimal intervals.

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pipdim/types.hpp"

namespace pipdim {

// ---------------------------------------------------------------------------
// Exact decomposition and deterministic bound.

struct BiasVarianceDecomposition {
  double loss_squared;  // ||E E^T - Ê Ê^T||_F^2
  double bias;          // d - k
  double variance;      // 2 ||Ê^T E_perp||_F^2
  double abs_difference() const { return std::abs(loss_squared - (bias + variance)); }
};

/// Both sides of ||EE^T - ÊÊ^T||^2 = d - k + 2 ||Ê^T E_perp||^2 for
/// orthonormal-column E (n x d) and Ê (n x k), k <= d. E_perp is never
/// formed: ||Ê^T E_perp||_F = ||(I - E E^T) Ê||_F.
BiasVarianceDecomposition theorem1_decomposition(const Matrix& E, const Matrix& E_hat);

struct DeterministicBound {
  double lhs;        // PIP loss between oracle and trained embeddings
  double bias;       // sqrt(sum_{i>k}^d lambda_i^{4a})
  double magnitude;  // sqrt(sum_{i<=k} (lambda_i^{2a} - lambda~_i^{2a})^2)
  double direction;  // sqrt(2) sum_{i<=k} c_i ||Ũ_{:,1:i}^T U_{:,i+1:n}||_F
  double rhs() const { return bias + magnitude + direction; }
  bool holds(double slack = 1e-8) const { return lhs <= rhs() + slack; }
};

/// Deterministic bound for E = U_{:,1:d} D^a (from M) against
/// Ê = Ũ_{:,1:k} D̃^a (from M̃). The telescoping coefficient is
/// c_i = lambda_i^{2a} - lambda_{i+1}^{2a} for i < k and c_k = lambda_k^{2a}.
DeterministicBound theorem2_bound(const Matrix& M, const Matrix& M_tilde, double alpha,
                                  std::size_t k, std::size_t d);

// ---------------------------------------------------------------------------
// Expectation bound under symmetric iid noise.

/// Which s the alpha = 0 variance sum runs over: s > d as published, or
/// s > k for sensitivity checks.
enum class Alpha0Range { beyond_rank, beyond_k };

struct BoundOptions {
  Alpha0Range alpha0_range = Alpha0Range::beyond_rank;
  /// At alpha = 0.5, replace the magnitude term by k * sigma.
  bool mirsky_tightening = false;
};

struct ExpectationBound {
  double bias;
  double magnitude;
  double direction;
  double total;
};

/// Evaluates the bound at one k. `spectrum` holds lambda_1..lambda_d (> 0,
/// non-increasing); entries past d up to n are taken as 0.
ExpectationBound theorem3_bound(std::span<const double> spectrum, double sigma, double alpha,
                                std::size_t k, std::size_t n, const BoundOptions& options = {});

/// theorem3_bound for every k = 1..d, sharing the gap sums.
std::vector<ExpectationBound> theorem3_terms(std::span<const double> spectrum, double sigma,
                                             double alpha, std::size_t n,
                                             const BoundOptions& options = {});

struct GrowthIncrement {
  std::size_t k;
  double magnitude_increment;  // second term at k minus second term at k-1
  double direction_increment;  // third term at k minus third term at k-1
  double reference_rate;       // lambda_k^{2a-1}
  double total() const { return magnitude_increment + direction_increment; }
};

/// Per-k increments of the two variance terms. At alpha = 0 the magnitude
/// term vanishes and the direction increment comes from the alpha = 0
/// branch's sigma term.
std::vector<GrowthIncrement> variance_growth_profile(std::span<const double> spectrum, double sigma,
                                                     double alpha, std::size_t n,
                                                     const BoundOptions& options = {});

// ---------------------------------------------------------------------------
// Loss curves and selection.

enum class CurveMethod { theorem3, monte_carlo, exact_oracle };
std::string to_string(CurveMethod method);

struct PipLossCurve {
  std::vector<double> losses;                 // index k-1
  std::optional<std::vector<double>> standard_errors;  // Monte-Carlo only
  CurveMethod method = CurveMethod::theorem3;
  double alpha = 0.0;
  double sigma = 0.0;
  std::string spectrum_digest;
  std::size_t trials = 0;
  std::uint64_t seed = 0;

  std::size_t size() const noexcept { return losses.size(); }
};

std::string spectrum_digest(std::span<const double> spectrum);

PipLossCurve theorem3_curve(std::span<const double> spectrum, double sigma, double alpha,
                            std::size_t n, const BoundOptions& options = {});

struct MonteCarloOptions {
  std::size_t trials = 10;
  std::uint64_t seed = 0;
  bool parallel = true;
};

/// Simulates M = U diag(lambda) U^T with Haar U, adds symmetric iid
/// N(0, sigma^2) noise, factorizes once per trial and sweeps k = 1..d.
/// Deterministic given the seed, independent of the thread count.
PipLossCurve monte_carlo_pip_curve(std::span<const double> spectrum, double sigma, double alpha,
                                   std::size_t n, const MonteCarloOptions& options = {});

/// 1-based argmin; ties go to the smaller k.
std::size_t select_dimension(const PipLossCurve& curve);
std::size_t select_dimension(std::span<const double> losses);

struct SubOptimalInterval {
  double p;  // percent
  std::size_t k_lo;
  std::size_t k_hi;
  bool contiguous;
};

struct SubOptimalIntervals {
  std::size_t k_star = 0;
  double reference_suboptimality = 0.0;  // loss(1) - loss(k*)
  bool degenerate = false;               // flat curve: every interval is [1, d]
  std::vector<SubOptimalInterval> intervals;

  const SubOptimalInterval& at(double p) const;
};

inline constexpr double kDefaultPList[] = {5.0, 10.0, 20.0, 50.0};

/// For each p, [min, max] of {k : loss(k) - loss(k*) <= p/100 (loss(1) - loss(k*))}.
/// Intervals are reported in ascending p order.
SubOptimalIntervals suboptimal_intervals(std::span<const double> losses,
                                         std::span<const double> p_list = kDefaultPList);
inline SubOptimalIntervals suboptimal_intervals(const PipLossCurve& curve,
                                                std::span<const double> p_list = kDefaultPList) {
  return suboptimal_intervals(curve.losses, p_list);
}

}  // namespace pipdim
