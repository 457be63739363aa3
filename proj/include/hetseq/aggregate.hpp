// aggregate.hpp -- pooling per-fold test statistics into one p-value.
#pragma once

#include <span>
#include <vector>

#include "hetseq/numeric.hpp"

namespace hetseq {

// p = 2*Phi(-|sum(ts)/sqrt(len)|), len >= 1. Inputs are summed in sorted
// order so the result does not depend on list order. Invalid for the
// cross-fold statistics (they are dependent); kept exact to the formula.
Probability aggregate_naive(std::span<const double> ts);

// Sample median of the per-fold p-values; for even counts, the midpoint of
// the two middle order statistics.
Probability aggregate_median(std::span<const Probability> ps);

// Same reduction as aggregate_naive, applied to the K-1 sequential
// statistics (divisor sqrt(K-1)). Validity comes from how the inputs are
// produced, not from this reducer.
Probability aggregate_sequential(std::span<const double> ts);

}  // namespace hetseq
