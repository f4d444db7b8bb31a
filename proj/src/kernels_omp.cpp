#include <algorithm>
#include <cmath>

#include "kernel_common.hpp"

namespace pipdim::kernels::omp {

void fill_signal(const CooccurrenceCounts& counts, const SignalSpec& spec, Matrix& out) {
  const auto n = static_cast<std::ptrdiff_t>(counts.size());
  out.resize(n, n);
#pragma omp parallel for schedule(dynamic, 64)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    detail::fill_signal_row(counts, spec, static_cast<std::size_t>(i), out);
  }
}

std::vector<double> gap_inverse_square_sums(std::span<const double> lambda, std::size_t n,
                                            std::size_t count) {
  detail::check_gap_inputs(lambda, n, count);
  const std::size_t d = lambda.size();
  const auto tail = static_cast<long double>(n - d);

  // S_i - S_{i-1} = sum_{s > i} g(i, s) - sum_{r < i} g(r, i).
  std::vector<long double> delta(count);
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t jj = 0; jj < static_cast<std::ptrdiff_t>(count); ++jj) {
    const auto j = static_cast<std::size_t>(jj);
    const long double lj = lambda[j];
    long double out = tail > 0.0L ? tail / (lj * lj) : 0.0L;
    for (std::size_t s = j + 1; s < d; ++s) {
      const long double gap = lj - lambda[s];
      out += 1.0L / (gap * gap);
    }
    long double in = 0.0L;
    for (std::size_t r = 0; r < j; ++r) {
      const long double gap = lambda[r] - lj;
      in += 1.0L / (gap * gap);
    }
    delta[j] = out - in;
  }

  // The scan can leave rounding residue where the exact sum is empty (i = n).
  std::vector<double> sums(count);
  long double running = 0.0L;
  for (std::size_t i = 0; i < count; ++i) {
    running += delta[i];
    sums[i] = i + 1 == n ? 0.0 : std::max(0.0, static_cast<double>(running));
  }
  return sums;
}

Matrix monte_carlo_trials(const TrialSetup& setup, std::size_t trials) {
  detail::check_trial_setup(setup, trials);
  Matrix losses(static_cast<Eigen::Index>(trials), static_cast<Eigen::Index>(setup.lambda.size()));
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t t = 0; t < static_cast<std::ptrdiff_t>(trials); ++t) {
    const auto row = simulate_trial(setup, static_cast<std::uint64_t>(t));
    losses.row(t) = Eigen::Map<const Vector>(row.data(), losses.cols());
  }
  return losses;
}

std::vector<Eigen::Index> analogy_predictions(const Matrix& unit_rows,
                                              std::span<const AnalogyQuery> queries,
                                              AnalogyRule rule) {
  std::vector<Eigen::Index> predictions(queries.size());
#pragma omp parallel for schedule(dynamic, 8)
  for (std::ptrdiff_t q = 0; q < static_cast<std::ptrdiff_t>(queries.size()); ++q) {
    predictions[static_cast<std::size_t>(q)] =
        detail::predict_analogy(unit_rows, queries[static_cast<std::size_t>(q)], rule);
  }
  return predictions;
}

}  // namespace pipdim::kernels::omp
