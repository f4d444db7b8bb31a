#include <cmath>
#include <random>

#include "doctest.h"
#include "pipdim/kernels.hpp"
#include "pipdim/perturbation.hpp"
#include "pipdim/selection.hpp"
#include "test_util.hpp"

using namespace pipdim;
using testutil::contains;
using testutil::expect_error;

TEST_CASE("select_dimension") {
  CHECK(select_dimension(std::vector<double>{5, 4, 3, 2}) == 4);
  CHECK(select_dimension(std::vector<double>{5, 3, 3, 4}) == 2);
  CHECK(select_dimension(std::vector<double>{1}) == 1);
  CHECK_THROWS_AS(select_dimension(std::vector<double>{}), Error);
}

TEST_CASE("sub-optimal intervals") {
  SUBCASE("hand example") {
    const auto r = suboptimal_intervals(std::vector<double>{10, 1, 2, 9});
    CHECK(r.k_star == 2);
    CHECK(r.reference_suboptimality == 9.0);
    CHECK(r.at(50).k_lo == 2);
    CHECK(r.at(50).k_hi == 3);
    CHECK(r.at(5).k_lo == 2);
    CHECK(r.at(5).k_hi == 2);
  }
  SUBCASE("flat curve is degenerate") {
    const auto r = suboptimal_intervals(std::vector<double>{2, 2, 2});
    CHECK(r.degenerate);
    for (const auto& i : r.intervals) {
      CHECK(i.k_lo == 1);
      CHECK(i.k_hi == 3);
    }
  }
  SUBCASE("non-contiguous sets are flagged") {
    const auto r = suboptimal_intervals(std::vector<double>{10, 0, 5, 0.1}, std::vector<double>{5});
    CHECK(r.at(5).k_lo == 2);
    CHECK(r.at(5).k_hi == 4);
    CHECK_FALSE(r.at(5).contiguous);
  }
  SUBCASE("unknown p") {
    CHECK_THROWS_AS(suboptimal_intervals(std::vector<double>{3, 1}).at(7), Error);
  }
}

TEST_CASE("intervals contain k* and are nested (property)") {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 200; ++t) {
    std::vector<double> losses(1 + rng() % 30);
    for (auto& v : losses) v = std::generate_canonical<double, 53>(rng);
    const auto r = suboptimal_intervals(losses);
    CHECK(r.intervals.size() == 4);
    for (std::size_t i = 0; i < r.intervals.size(); ++i) {
      CHECK(r.intervals[i].k_lo <= r.k_star);
      CHECK(r.intervals[i].k_hi >= r.k_star);
      if (i > 0) {
        CHECK(r.intervals[i].k_lo <= r.intervals[i - 1].k_lo);
        CHECK(r.intervals[i].k_hi >= r.intervals[i - 1].k_hi);
      }
    }
  }
}

TEST_CASE("Monte-Carlo curve: noiseless limit is the pure bias") {
  const std::vector<double> lambda = {6.0, 4.0, 3.0, 1.5, 1.0};
  const auto curve = monte_carlo_pip_curve(lambda, 0.0, 0.5, 12, {1, 3, true});
  REQUIRE(curve.size() == 5);
  for (std::size_t k = 1; k <= 5; ++k) {
    double bias = 0.0;
    for (std::size_t i = k; i < 5; ++i) bias += lambda[i] * lambda[i];
    CHECK(curve.losses[k - 1] == doctest::Approx(std::sqrt(bias)).epsilon(1e-6).scale(1.0));
  }
  CHECK(select_dimension(curve) == 5);
  CHECK(curve.standard_errors.has_value());
  CHECK((*curve.standard_errors)[0] == 0.0);
}

TEST_CASE("Monte-Carlo curve is deterministic and thread-independent") {
  const std::vector<double> lambda = {10, 8, 6, 5, 3, 2, 1};
  const auto a = monte_carlo_pip_curve(lambda, 0.4, 0.5, 30, {6, 99, true});
  const auto b = monte_carlo_pip_curve(lambda, 0.4, 0.5, 30, {6, 99, true});
  const auto c = monte_carlo_pip_curve(lambda, 0.4, 0.5, 30, {6, 99, false});
  CHECK(a.losses == b.losses);
  CHECK(a.losses == c.losses);
  CHECK(*a.standard_errors == *c.standard_errors);
  CHECK(a.trials == 6);
  CHECK(a.seed == 99);
  CHECK(a.method == CurveMethod::monte_carlo);
  CHECK(a.spectrum_digest == spectrum_digest(lambda));
  const auto other = monte_carlo_pip_curve(lambda, 0.4, 0.5, 30, {6, 100, true});
  CHECK(other.losses != a.losses);
}

TEST_CASE("one trial matches a direct dense evaluation") {
  // Rebuild trial 0 with the same stream and compare against explicit PIP matrices.
  kernels::TrialSetup setup{{9, 5, 4, 2}, 0.3, 0.75, 15, 1234};
  const auto losses = kernels::simulate_trial(setup, 0);
  std::seed_seq seq{1234u, 0u, 0u, 0u};
  std::mt19937_64 rng(seq);
  const Matrix U = linalg::haar_orthonormal(15, 4, rng);
  const Vector lambda = Eigen::Map<const Vector>(setup.lambda.data(), 4);
  const Matrix Mt = U * lambda.asDiagonal() * U.transpose() + linalg::symmetric_gaussian_noise(15, 0.3, rng);
  Matrix E = U;
  for (int i = 0; i < 4; ++i) E.col(i) *= std::pow(lambda(i), 0.75);
  const auto f = svd(Mt);
  for (std::size_t k = 1; k <= 4; ++k) {
    Matrix Eh = f.U.leftCols(Eigen::Index(k));
    for (Eigen::Index i = 0; i < Eigen::Index(k); ++i) Eh.col(i) *= std::pow(f.singular_values(i), 0.75);
    const double direct = (E * E.transpose() - Eh * Eh.transpose()).norm();
    CHECK(losses[k - 1] == doctest::Approx(direct).epsilon(1e-9));
  }
}

TEST_CASE("Monte-Carlo stderr shrinks like 1/sqrt(T)") {
  const std::vector<double> lambda = {10, 7, 5, 3, 2, 1.5, 1};
  std::vector<double> mean_se;
  for (const std::size_t T : {5, 20, 80}) {
    double sum = 0.0;
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
      const auto c = monte_carlo_pip_curve(lambda, 0.5, 0.5, 40, {T, seed, true});
      for (const double se : *c.standard_errors) sum += se;
    }
    mean_se.push_back(sum);
  }
  // Quadrupling T halves the stderr; allow sampling noise in the std estimate.
  CHECK(mean_se[0] / mean_se[1] == doctest::Approx(2.0).epsilon(0.3));
  CHECK(mean_se[1] / mean_se[2] == doctest::Approx(2.0).epsilon(0.3));
}

TEST_CASE("Monte-Carlo curve errors and trimming") {
  CHECK(contains(expect_error([] { monte_carlo_pip_curve(std::vector<double>{0, 0}, 0.1, 0.5, 5); }).what(),
                 "no signal detected"));
  CHECK(expect_error([] { monte_carlo_pip_curve(std::vector<double>{0.0}, 0.1, 0.5, 5); }).kind() ==
        ErrorKind::degenerate);
  CHECK_THROWS_AS(monte_carlo_pip_curve(std::vector<double>{1.0}, 0.1, 0.5, 5, {0, 0, true}), Error);
  CHECK_THROWS_AS(monte_carlo_pip_curve(std::vector<double>{1.0}, -0.1, 0.5, 5), Error);
  CHECK_THROWS_AS(monte_carlo_pip_curve(std::vector<double>{1, 2}, 0.1, 0.5, 5), Error);
  // Trailing zeros from USVT are not part of the search space.
  CHECK(monte_carlo_pip_curve(std::vector<double>{3, 2, 0, 0}, 0.1, 0.5, 5).size() == 2);
  CHECK(theorem3_curve(std::vector<double>{3, 2, 0, 0}, 0.1, 0.5, 5).size() == 2);
}

TEST_CASE("theorem 3 curve carries its metadata") {
  const std::vector<double> lambda = {4, 3, 2, 1};
  const auto c = theorem3_curve(lambda, 0.1, 0.5, 10);
  CHECK(c.method == CurveMethod::theorem3);
  CHECK_FALSE(c.standard_errors.has_value());
  CHECK(c.losses[1] == doctest::Approx(theorem3_bound(lambda, 0.1, 0.5, 2, 10).total));
  CHECK(to_string(CurveMethod::monte_carlo) == "monte_carlo");
}
