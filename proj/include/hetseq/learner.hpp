// learner.hpp -- pluggable CATE estimators: fit on a training index set,
// predict tau_hat on arbitrary covariate rows.
#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "hetseq/data.hpp"
#include "hetseq/rng.hpp"

namespace hetseq {

enum class LearnerKind {
  kZero,  // constant-0 predictor
  kKnnT,  // k-nearest-neighbour T-learner
};

struct LearnerSpec {
  LearnerKind kind = LearnerKind::kKnnT;
  // Neighbour count per arm; nullopt = auto, ceil(sqrt(min(n1, n0))).
  std::optional<std::size_t> knn_k;

  void validate() const;  // throws ConfigError
};

// An immutable fitted predictor. predict() is a pure function of the fitted
// state and may be called concurrently.
class CateModel {
 public:
  virtual ~CateModel() = default;

  // z_rows is row-major m x p with p == input_dim().
  virtual std::vector<double> predict(std::span<const double> z_rows,
                                      std::size_t m) const = 0;
  virtual std::size_t input_dim() const = 0;

  // Predictions for a subset of dataset rows.
  std::vector<double> predict_rows(const Dataset& data,
                                   std::span<const std::size_t> rows) const;
};

// Fit a model on data[train].
//
// Zero ignores the data. KnnT estimates tau_hat(z) as the mean outcome of
// the knn_k nearest treated training units minus the same over control
// units (Euclidean distance in z; ties broken by lowest dataset row index;
// counts larger than an arm are clamped to the arm size). The stream is
// part of the interface so stochastic learners can be added without
// changing call sites; neither built-in consumes it.
//
// Throws DomainError on an empty training set, FitError when KnnT sees an
// arm with no units.
std::unique_ptr<const CateModel> fit(const LearnerSpec& spec,
                                     const Dataset& data,
                                     std::span<const std::size_t> train,
                                     RngStream rng);

}  // namespace hetseq
