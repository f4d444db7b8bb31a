#include <algorithm>
#include <cmath>

#include "pipdim/error.hpp"
#include "pipdim/selection.hpp"

namespace pipdim {

std::string to_string(CurveMethod method) {
  switch (method) {
    case CurveMethod::theorem3: return "theorem3";
    case CurveMethod::monte_carlo: return "monte_carlo";
    case CurveMethod::exact_oracle: return "exact_oracle";
  }
  return "unknown";
}

std::size_t select_dimension(std::span<const double> losses) {
  require(!losses.empty(), "select_dimension: empty loss curve");
  std::size_t best = 0;
  for (std::size_t k = 0; k < losses.size(); ++k) {
    require(std::isfinite(losses[k]), "select_dimension: non-finite loss at k = " + std::to_string(k + 1));
    if (losses[k] < losses[best]) best = k;
  }
  return best + 1;
}

std::size_t select_dimension(const PipLossCurve& curve) { return select_dimension(curve.losses); }

const SubOptimalInterval& SubOptimalIntervals::at(double p) const {
  for (const auto& interval : intervals) {
    if (interval.p == p) return interval;
  }
  fail(ErrorKind::invalid_argument, "no interval computed for p = " + std::to_string(p));
}

SubOptimalIntervals suboptimal_intervals(std::span<const double> losses,
                                         std::span<const double> p_list) {
  SubOptimalIntervals result;
  result.k_star = select_dimension(losses);
  const std::size_t d = losses.size();
  const double best = losses[result.k_star - 1];
  result.reference_suboptimality = losses[0] - best;
  result.degenerate = !(result.reference_suboptimality > 0.0);

  std::vector<double> ps(p_list.begin(), p_list.end());
  for (const double p : ps) require(p >= 0.0 && std::isfinite(p), "p must be finite and >= 0");
  std::sort(ps.begin(), ps.end());
  ps.erase(std::unique(ps.begin(), ps.end()), ps.end());

  for (const double p : ps) {
    if (result.degenerate) {
      result.intervals.push_back({p, 1, d, true});
      continue;
    }
    const double threshold = p / 100.0 * result.reference_suboptimality;
    std::size_t lo = d;
    std::size_t hi = 0;
    std::size_t members = 0;
    for (std::size_t k = 1; k <= d; ++k) {
      if (losses[k - 1] - best <= threshold) {
        lo = std::min(lo, k);
        hi = std::max(hi, k);
        ++members;
      }
    }
    result.intervals.push_back({p, lo, hi, members == hi - lo + 1});
  }
  return result;
}

}  // namespace pipdim
