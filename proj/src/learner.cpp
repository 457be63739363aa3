#include "hetseq/learner.hpp"

#include <algorithm>
#include <cmath>

namespace hetseq {

void LearnerSpec::validate() const {
  if (knn_k && *knn_k < 1) {
    throw ConfigError("LearnerSpec: explicit knn_k must be >= 1");
  }
}

std::vector<double> CateModel::predict_rows(
    const Dataset& data, std::span<const std::size_t> rows) const {
  std::vector<double> flat;
  flat.reserve(rows.size() * data.p());
  for (std::size_t i : rows) {
    const auto z = data.z_row(i);
    flat.insert(flat.end(), z.begin(), z.end());
  }
  return predict(flat, rows.size());
}

namespace {

class ZeroModel final : public CateModel {
 public:
  explicit ZeroModel(std::size_t p) : p_(p) {}

  std::vector<double> predict(std::span<const double> z_rows,
                              std::size_t m) const override {
    if (z_rows.size() != m * p_) {
      throw DomainError("predict: covariate dimension mismatch");
    }
    return std::vector<double>(m, 0.0);
  }

  std::size_t input_dim() const override { return p_; }

 private:
  std::size_t p_;
};

// One treatment arm of the kNN T-learner: covariate rows, outcomes and the
// originating dataset row indices (for deterministic tie-breaking).
struct Arm {
  std::vector<double> z;  // row-major
  std::vector<double> y;
  std::vector<std::size_t> index;

  std::size_t size() const { return y.size(); }
};

class KnnTModel final : public CateModel {
 public:
  KnnTModel(std::size_t p, std::size_t k, Arm treated, Arm control)
      : p_(p), k_(k), treated_(std::move(treated)),
        control_(std::move(control)) {}

  std::vector<double> predict(std::span<const double> z_rows,
                              std::size_t m) const override {
    if (z_rows.size() != m * p_) {
      throw DomainError("predict: covariate dimension mismatch");
    }
    std::vector<double> out(m);
    std::vector<std::pair<double, std::size_t>> scratch;
    for (std::size_t q = 0; q < m; ++q) {
      const double* query = z_rows.data() + q * p_;
      out[q] = arm_mean(treated_, query, scratch) -
               arm_mean(control_, query, scratch);
    }
    return out;
  }

  std::size_t input_dim() const override { return p_; }

 private:
  // Mean outcome over the k nearest units of one arm. Neighbours are the k
  // smallest (squared distance, dataset index) pairs; arm rows are kept in
  // ascending dataset-index order, so arm-local positions tie-break
  // identically. Summation follows that order, which makes predictions
  // independent of how the caller ordered the training set.
  double arm_mean(const Arm& arm, const double* query,
                  std::vector<std::pair<double, std::size_t>>& scratch) const {
    const std::size_t n = arm.size();
    const std::size_t k = std::min(k_, n);
    scratch.clear();
    scratch.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double* row = arm.z.data() + i * p_;
      double d2 = 0.0;
      for (std::size_t j = 0; j < p_; ++j) {
        const double diff = query[j] - row[j];
        d2 += diff * diff;
      }
      scratch.emplace_back(d2, i);
    }
    std::nth_element(scratch.begin(), scratch.begin() + (k - 1),
                     scratch.end());
    std::sort(scratch.begin(), scratch.begin() + k);
    double sum = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      sum += arm.y[scratch[i].second];
    }
    return sum / static_cast<double>(k);
  }

  std::size_t p_;
  std::size_t k_;
  Arm treated_;
  Arm control_;
};

}  // namespace

std::unique_ptr<const CateModel> fit(const LearnerSpec& spec,
                                     const Dataset& data,
                                     std::span<const std::size_t> train,
                                     RngStream /*rng*/) {
  spec.validate();
  if (train.empty()) {
    throw DomainError("fit: empty training set");
  }
  for (std::size_t i : train) {
    if (i >= data.n()) {
      throw DomainError("fit: training index out of range");
    }
  }
  if (spec.kind == LearnerKind::kZero) {
    return std::make_unique<ZeroModel>(data.p());
  }

  // Keep arms in ascending dataset-index order; arm_mean relies on it.
  std::vector<std::size_t> sorted(train.begin(), train.end());
  std::sort(sorted.begin(), sorted.end());
  Arm treated, control;
  for (std::size_t i : sorted) {
    Arm& arm = data.d(i) == 1 ? treated : control;
    const auto z = data.z_row(i);
    arm.z.insert(arm.z.end(), z.begin(), z.end());
    arm.y.push_back(data.y(i));
    arm.index.push_back(i);
  }
  if (treated.size() == 0 || control.size() == 0) {
    throw FitError("kNN T-learner: training set has an empty arm (" +
                   std::to_string(treated.size()) + " treated, " +
                   std::to_string(control.size()) + " control)");
  }
  const std::size_t k =
      spec.knn_k ? *spec.knn_k
                 : static_cast<std::size_t>(std::ceil(std::sqrt(
                       static_cast<double>(std::min(treated.size(),
                                                    control.size())))));
  return std::make_unique<KnnTModel>(data.p(), k, std::move(treated),
                                     std::move(control));
}

}  // namespace hetseq
