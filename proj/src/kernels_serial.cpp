#include <cmath>
#include <limits>

#include "kernel_common.hpp"
#include "pipdim/error.hpp"

namespace pipdim::kernels {

namespace detail {

void fill_signal_row(const CooccurrenceCounts& counts, const SignalSpec& spec, std::size_t row,
                     Matrix& out) {
  const auto& marginals = counts.row_marginals();
  const auto i = static_cast<Eigen::Index>(row);
  out.row(i).setZero();
  for (auto it = counts.row_begin(row); it != counts.row_end(row); ++it) {
    out(i, static_cast<Eigen::Index>(it->column)) =
        signal_entry(spec, it->value, marginals[row], marginals[it->column], counts.total_pairs());
  }
}

Eigen::Index predict_analogy(const Matrix& unit_rows, const AnalogyQuery& query, AnalogyRule rule) {
  constexpr double kEpsilon = 1e-3;
  const Vector cos_a = unit_rows * unit_rows.row(query.a).transpose();
  const Vector cos_b = unit_rows * unit_rows.row(query.b).transpose();
  const Vector cos_c = unit_rows * unit_rows.row(query.c).transpose();

  Eigen::Index best = -1;
  double best_score = -std::numeric_limits<double>::infinity();
  for (Eigen::Index x = 0; x < unit_rows.rows(); ++x) {
    if (x == query.a || x == query.b || x == query.c) continue;
    double score = 0.0;
    if (rule == AnalogyRule::cos_add) {
      score = cos_b(x) - cos_a(x) + cos_c(x);
    } else {
      // Cosines shifted to [0, 1] so the product and ratio stay non-negative.
      const double a = (cos_a(x) + 1.0) / 2.0;
      const double b = (cos_b(x) + 1.0) / 2.0;
      const double c = (cos_c(x) + 1.0) / 2.0;
      score = b * c / (a + kEpsilon);
    }
    if (score > best_score) {
      best_score = score;
      best = x;
    }
  }
  return best;
}

void check_gap_inputs(std::span<const double> lambda, std::size_t n, std::size_t count) {
  require(lambda.size() <= n, "gap sums: more values than n");
  require(count <= lambda.size(), "gap sums: count exceeds the number of values");
}

void check_trial_setup(const TrialSetup& setup, std::size_t trials) {
  require(trials >= 1, "trials must be >= 1");
  require(!setup.lambda.empty(), "trial setup needs a non-empty spectrum");
  require(setup.lambda.size() <= setup.n, "spectrum longer than n");
  require(setup.sigma >= 0.0, "sigma must be >= 0");
}

}  // namespace detail

namespace serial {

void fill_signal(const CooccurrenceCounts& counts, const SignalSpec& spec, Matrix& out) {
  out.resize(static_cast<Eigen::Index>(counts.size()), static_cast<Eigen::Index>(counts.size()));
  for (std::size_t i = 0; i < counts.size(); ++i) detail::fill_signal_row(counts, spec, i, out);
}

std::vector<double> gap_inverse_square_sums(std::span<const double> lambda, std::size_t n,
                                            std::size_t count) {
  detail::check_gap_inputs(lambda, n, count);
  auto value = [&](std::size_t s) { return s < lambda.size() ? lambda[s] : 0.0; };
  std::vector<double> sums(count);
  for (std::size_t i = 0; i < count; ++i) {
    long double sum = 0.0L;
    for (std::size_t r = 0; r <= i; ++r) {
      for (std::size_t s = i + 1; s < n; ++s) {
        const long double gap = value(r) - value(s);
        sum += 1.0L / (gap * gap);
      }
    }
    sums[i] = static_cast<double>(sum);
  }
  return sums;
}

Matrix monte_carlo_trials(const TrialSetup& setup, std::size_t trials) {
  detail::check_trial_setup(setup, trials);
  Matrix losses(static_cast<Eigen::Index>(trials), static_cast<Eigen::Index>(setup.lambda.size()));
  for (std::size_t t = 0; t < trials; ++t) {
    const auto row = simulate_trial(setup, t);
    losses.row(static_cast<Eigen::Index>(t)) = Eigen::Map<const Vector>(row.data(), losses.cols());
  }
  return losses;
}

std::vector<Eigen::Index> analogy_predictions(const Matrix& unit_rows,
                                              std::span<const AnalogyQuery> queries,
                                              AnalogyRule rule) {
  std::vector<Eigen::Index> predictions;
  predictions.reserve(queries.size());
  for (const auto& query : queries) predictions.push_back(detail::predict_analogy(unit_rows, query, rule));
  return predictions;
}

}  // namespace serial

}  // namespace pipdim::kernels
