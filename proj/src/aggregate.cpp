#include "hetseq/aggregate.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "hetseq/errors.hpp"

namespace hetseq {

namespace {

// Shared reducer for the naive and sequential formulas. Sorting before
// summation makes the result invariant to input order.
Probability pooled_two_sided_p(std::span<const double> ts) {
  if (ts.empty()) {
    throw DomainError("aggregate: empty statistic list");
  }
  std::vector<double> sorted(ts.begin(), ts.end());
  for (double t : sorted) {
    if (!std::isfinite(t)) {
      throw DomainError("aggregate: non-finite statistic");
    }
  }
  std::sort(sorted.begin(), sorted.end());
  double sum = 0.0;
  for (double t : sorted) sum += t;
  return two_sided_p(sum / std::sqrt(static_cast<double>(sorted.size())));
}

}  // namespace

Probability aggregate_naive(std::span<const double> ts) {
  return pooled_two_sided_p(ts);
}

Probability aggregate_sequential(std::span<const double> ts) {
  return pooled_two_sided_p(ts);
}

Probability aggregate_median(std::span<const Probability> ps) {
  if (ps.empty()) {
    throw DomainError("aggregate_median: empty p-value list");
  }
  std::vector<double> sorted;
  sorted.reserve(ps.size());
  for (Probability p : ps) sorted.push_back(p.value());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  const double med = (n % 2 == 1)
                         ? sorted[n / 2]
                         : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
  return Probability(med);
}

}  // namespace hetseq
