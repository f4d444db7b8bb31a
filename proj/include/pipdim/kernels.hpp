#pragma once

// Data-parallel inner loops. Every kernel has a straightforward serial
// reference in `serial` and an OpenMP version in `omp`; the library calls
// the OpenMP one, tests check it against the reference and bench/ times both.

#include <cstdint>
#include <span>
#include <vector>

#include "pipdim/corpus.hpp"
#include "pipdim/signal.hpp"
#include "pipdim/types.hpp"

namespace pipdim::kernels {

/// One Monte-Carlo PIP-loss experiment: planted spectrum `lambda` (d
/// entries, non-increasing, positive), ambient dimension n, noise sigma and
/// exponent alpha.
struct TrialSetup {
  std::vector<double> lambda;
  double sigma = 0.0;
  double alpha = 0.5;
  std::size_t n = 0;
  std::uint64_t seed = 0;
};

/// An analogy query a:b :: c:? expressed in row indices.
struct AnalogyQuery {
  Eigen::Index a, b, c;
};

enum class AnalogyRule { cos_add, cos_mul };

namespace serial {

/// Fills `out` (n x n, pre-sized) with the signal matrix entries.
void fill_signal(const CooccurrenceCounts& counts, const SignalSpec& spec, Matrix& out);

/// S_i = sum_{r <= i < s <= n} (lambda_r - lambda_s)^-2 for i = 1..count,
/// with lambda_s = 0 for s > lambda.size(). Brute force over all pairs.
std::vector<double> gap_inverse_square_sums(std::span<const double> lambda, std::size_t n,
                                            std::size_t count);

/// losses(t, k-1) = PIP loss of trial t at dimensionality k.
Matrix monte_carlo_trials(const TrialSetup& setup, std::size_t trials);

/// Predicted row index for each query over unit-normalized rows.
std::vector<Eigen::Index> analogy_predictions(const Matrix& unit_rows,
                                              std::span<const AnalogyQuery> queries,
                                              AnalogyRule rule);

}  // namespace serial

namespace omp {

void fill_signal(const CooccurrenceCounts& counts, const SignalSpec& spec, Matrix& out);

/// Same contract as the serial version; O(d^2 + count) via per-index
/// in/out gap sums and a prefix scan.
std::vector<double> gap_inverse_square_sums(std::span<const double> lambda, std::size_t n,
                                            std::size_t count);

/// Trials run in parallel; each derives its stream from (seed, trial), so
/// the result is bitwise identical to the serial version.
Matrix monte_carlo_trials(const TrialSetup& setup, std::size_t trials);

std::vector<Eigen::Index> analogy_predictions(const Matrix& unit_rows,
                                              std::span<const AnalogyQuery> queries,
                                              AnalogyRule rule);

}  // namespace omp

/// PIP losses for k = 1..d of a single simulated trial.
std::vector<double> simulate_trial(const TrialSetup& setup, std::uint64_t trial);

/// Entry value of the signal matrix for one non-zero count cell.
double signal_entry(const SignalSpec& spec, double count, double row_marginal,
                    double column_marginal, double total);

}  // namespace pipdim::kernels
