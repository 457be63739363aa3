// folds.hpp -- random K-fold partitions and the two training regimes.
#pragma once

#include <cstddef>
#include <vector>

#include "hetseq/errors.hpp"
#include "hetseq/rng.hpp"

namespace hetseq {

// A partition of unit indices 0..n-1 into folds labelled 1..K, sizes
// differing by at most one.
class FoldPlan {
 public:
  FoldPlan(std::vector<int> assignments, int num_folds);  // validates

  std::size_t n() const { return assignments_.size(); }
  int num_folds() const { return num_folds_; }
  int label(std::size_t i) const { return assignments_[i]; }
  const std::vector<int>& assignments() const { return assignments_; }

  // Indices with label k, ascending.
  std::vector<std::size_t> eval_indices(int k) const;
  // Complement of eval_indices(k): the cross-fold training set.
  std::vector<std::size_t> train_indices_crossfold(int k) const;
  // Indices with label < k: the sequential training set. Requires k >= 2.
  std::vector<std::size_t> train_indices_sequential(int k) const;

 private:
  void check_label(int k) const;
  std::vector<int> assignments_;
  int num_folds_;
};

// Uniformly random partition: a random permutation chunked into K blocks,
// the first (n mod K) blocks one element larger. 2 <= K <= n.
FoldPlan make_plan(std::size_t n, int num_folds, RngStream rng);

}  // namespace hetseq
