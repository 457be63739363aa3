#include "hetseq/folds.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace hetseq {

FoldPlan::FoldPlan(std::vector<int> assignments, int num_folds)
    : assignments_(std::move(assignments)), num_folds_(num_folds) {
  const std::size_t n = assignments_.size();
  if (num_folds_ < 1 || n == 0) {
    throw DomainError("FoldPlan: need K >= 1 and n >= 1");
  }
  std::vector<std::size_t> sizes(static_cast<std::size_t>(num_folds_), 0);
  for (int label : assignments_) {
    if (label < 1 || label > num_folds_) {
      throw DomainError("FoldPlan: label outside 1..K");
    }
    ++sizes[static_cast<std::size_t>(label - 1)];
  }
  const auto [lo, hi] = std::minmax_element(sizes.begin(), sizes.end());
  if (*lo == 0) {
    throw DomainError("FoldPlan: some fold is empty");
  }
  if (*hi - *lo > 1) {
    throw DomainError("FoldPlan: fold sizes differ by more than 1");
  }
}

void FoldPlan::check_label(int k) const {
  if (k < 1 || k > num_folds_) {
    throw DomainError("fold label " + std::to_string(k) + " outside 1.." +
                      std::to_string(num_folds_));
  }
}

std::vector<std::size_t> FoldPlan::eval_indices(int k) const {
  check_label(k);
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < assignments_.size(); ++i) {
    if (assignments_[i] == k) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> FoldPlan::train_indices_crossfold(int k) const {
  check_label(k);
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < assignments_.size(); ++i) {
    if (assignments_[i] != k) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> FoldPlan::train_indices_sequential(int k) const {
  check_label(k);
  if (k < 2) {
    throw DomainError(
        "sequential training is undefined for fold 1 (no prior folds)");
  }
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < assignments_.size(); ++i) {
    if (assignments_[i] < k) out.push_back(i);
  }
  return out;
}

FoldPlan make_plan(std::size_t n, int num_folds, RngStream rng) {
  if (num_folds < 2) {
    throw DomainError("make_plan: need K >= 2");
  }
  if (static_cast<std::size_t>(num_folds) > n) {
    throw DomainError("make_plan: need K <= n");
  }
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  // Fisher-Yates with the unbiased bounded draw.
  for (std::size_t i = n - 1; i > 0; --i) {
    const std::size_t j = rng.next_below(i + 1);
    std::swap(perm[i], perm[j]);
  }
  const std::size_t k = static_cast<std::size_t>(num_folds);
  const std::size_t base = n / k;
  const std::size_t extra = n % k;  // first `extra` folds get one more
  std::vector<int> assignments(n);
  std::size_t pos = 0;
  for (std::size_t f = 0; f < k; ++f) {
    const std::size_t size = base + (f < extra ? 1 : 0);
    for (std::size_t s = 0; s < size; ++s) {
      assignments[perm[pos++]] = static_cast<int>(f + 1);
    }
  }
  return FoldPlan(std::move(assignments), num_folds);
}

}  // namespace hetseq
