// gates.hpp -- the two-group GATES fold statistic: median-split grouping,
// treatment-effect contrast, jackknife standard error, T_k and p_k.
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "hetseq/data.hpp"
#include "hetseq/numeric.hpp"

namespace hetseq {

// Group labels for the units of one evaluation fold, aligned with the
// fold's evaluation order. 1 = top group (larger tau_hat), 0 = bottom.
// Sizes differ by at most one.
struct GroupAssignment {
  std::vector<std::uint8_t> labels;
};

// Rank units by tau_hat (ties broken by evaluation-order index) and label
// the top ceil(m/2) ranks 1. With distinct values and even m this is the
// strict above-median split. m >= 2.
GroupAssignment assign_groups(std::span<const double> tau_hat);

struct CellCounts {
  std::size_t top_treated = 0;
  std::size_t top_control = 0;
  std::size_t bottom_treated = 0;
  std::size_t bottom_control = 0;
};

struct FoldStatistic {
  int fold;            // 1-based fold label, 0 outside a pipeline
  double delta;        // top-vs-bottom difference in arm contrasts
  double sigma;        // delete-one jackknife SE of delta
  double sigma_welch;  // closed-form sqrt(sum s^2_c / n_c) cross-check
  double t;            // delta / sigma
  Probability p;       // 2*Phi(-|t|)
  CellCounts cells;
};

// delta = [mean Y(top, treated) - mean Y(top, control)]
//       - [mean Y(bottom, treated) - mean Y(bottom, control)],
// with sigma from jackknife_se and sigma_welch from the per-cell variance
// formula. Throws DegenerateFoldError when any (group x arm) cell has
// fewer than two units or when sigma is zero.
FoldStatistic contrast(const Dataset& data, std::span<const std::size_t> eval,
                       const GroupAssignment& groups, int fold_label = 0);

// Delete-one jackknife SE of delta over the m evaluation units:
// sqrt(((m-1)/m) * sum_i (delta_(-i) - mean_i delta_(-i))^2), with each
// delta_(-i) obtained by an O(1) cell-mean update. Requires every cell to
// have at least two units.
double jackknife_se(const Dataset& data, std::span<const std::size_t> eval,
                    const GroupAssignment& groups);

}  // namespace hetseq
