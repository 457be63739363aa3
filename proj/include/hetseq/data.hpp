// data.hpp -- RCT sample container, synthetic data generation, CSV ingestion.
#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "hetseq/errors.hpp"
#include "hetseq/rng.hpp"

namespace hetseq {

// One randomized-trial sample: covariates z (n x p, row-major), binary
// treatment d, observed outcome y. Immutable after construction.
class Dataset {
 public:
  Dataset(std::size_t n, std::size_t p, std::vector<double> z,
          std::vector<int> d, std::vector<double> y);

  std::size_t n() const { return n_; }
  std::size_t p() const { return p_; }

  std::span<const double> z_row(std::size_t i) const {
    return std::span<const double>(z_.data() + i * p_, p_);
  }
  std::span<const double> z_flat() const { return z_; }
  int d(std::size_t i) const { return d_[i]; }
  double y(std::size_t i) const { return y_[i]; }
  std::span<const int> d() const { return d_; }
  std::span<const double> y() const { return y_; }

 private:
  std::size_t n_, p_;
  std::vector<double> z_;
  std::vector<int> d_;
  std::vector<double> y_;
};

// Ground-truth CATE shapes used by the simulation study.
enum class TauSpec {
  kZero,    // tau(z) = 0, the global null
  kReluZ1,  // tau(z) = max(z_1, 0)
};

struct DgpConfig {
  std::size_t n = 1000;
  std::size_t p = 10;
  double pi = 0.5;  // treatment probability
  TauSpec tau_spec = TauSpec::kZero;
  double noise_sd = 1.0;

  void validate() const;  // throws ConfigError
};

// tau(z) for the given spec; z must be non-empty.
double true_cate(TauSpec tau_spec, std::span<const double> z);

// Draw one dataset: Z ~ Unif[-1,1)^{n x p} (row-major), D ~ Bernoulli(pi),
// Y = D * tau(Z) + noise_sd * eps with eps standard normal. Consumption
// order on the stream is Z, then D, then eps, so the result is a pure
// function of (config, stream).
Dataset generate(const DgpConfig& config, RngStream rng);

// Read a dataset from CSV. Header must name columns y, d, z1..zp (any
// order, no extras); cells are decimal doubles, d in {0,1}.
Dataset read_csv(const std::string& path);

}  // namespace hetseq
