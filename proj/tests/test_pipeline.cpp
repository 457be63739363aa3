#include <cmath>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "hetseq/pipeline.hpp"
#include "oracle.hpp"

using hetseq::Dataset;
using hetseq::DegeneratePolicy;
using hetseq::DgpConfig;
using hetseq::FoldPlan;
using hetseq::FoldStatistic;
using hetseq::LearnerKind;
using hetseq::LearnerSpec;
using hetseq::make_plan;
using hetseq::RngStream;
using hetseq::run;
using hetseq::run_crossfold;
using hetseq::run_sequential;
using hetseq::RunConfig;
using hetseq::RunResult;
using hetseq::Scheme;

namespace {

RunConfig zero_cfg(int k_folds, Scheme scheme = Scheme::kAll) {
  RunConfig cfg;
  cfg.k_folds = k_folds;
  cfg.learner.kind = LearnerKind::kZero;
  cfg.scheme = scheme;
  return cfg;
}

// The fold plan the pipeline will use for a given replication stream.
FoldPlan plan_of(const Dataset& data, const RunConfig& cfg,
                 std::uint64_t seed, std::uint64_t tag) {
  return make_plan(data.n(), cfg.k_folds,
                   RngStream(seed, hetseq::kFoldStreamBase + tag));
}

// Independent recompute of a zero-learner fold statistic: the grouping is
// the index split (ties broken by evaluation order), the statistic comes
// from the brute-force oracle, and p from the extended-precision CDF.
struct ExpectedStat {
  double delta, sigma, t, p;
};
ExpectedStat expected_zero_stat(const Dataset& data,
                                const std::vector<std::size_t>& eval) {
  const std::size_t m = eval.size();
  std::vector<int> labels(m, 0), d(m);
  std::vector<double> y(m);
  for (std::size_t pos = m - (m + 1) / 2; pos < m; ++pos) labels[pos] = 1;
  for (std::size_t pos = 0; pos < m; ++pos) {
    d[pos] = data.d(eval[pos]);
    y[pos] = data.y(eval[pos]);
  }
  ExpectedStat e;
  e.delta = hetseq_test::brute_force_delta(d, y, labels);
  e.sigma = hetseq_test::brute_force_jackknife_se(d, y, labels);
  e.t = e.delta / e.sigma;
  e.p = static_cast<double>(
      2.0L * hetseq_test::oracle_normal_cdf(-std::fabs((long double)e.t)));
  return e;
}

}  // namespace

TEST_CASE("crossfold with the zero learner matches the end-to-end oracle") {
  DgpConfig dgp;
  dgp.n = 48;
  dgp.p = 2;
  const std::uint64_t seed = 404;
  const Dataset data = generate(dgp, RngStream(seed, 1));
  const RunConfig cfg = zero_cfg(2);
  const auto stats = run_crossfold(data, cfg, RngStream(seed, 1));
  REQUIRE(stats.size() == 2);
  const FoldPlan plan = plan_of(data, cfg, seed, 1);
  for (const auto& s : stats) {
    const ExpectedStat e = expected_zero_stat(data, plan.eval_indices(s.fold));
    CHECK(s.delta == doctest::Approx(e.delta).epsilon(1e-12));
    CHECK(s.sigma == doctest::Approx(e.sigma).epsilon(1e-12));
    CHECK(s.t == doctest::Approx(e.t).epsilon(1e-12));
    CHECK(s.p.value() == doctest::Approx(e.p).epsilon(1e-11));
  }
}

TEST_CASE("sequential K=2 is a single train/test split") {
  DgpConfig dgp;
  dgp.n = 40;
  dgp.p = 2;
  const Dataset data = generate(dgp, RngStream(7, 3));
  const RunConfig cfg = zero_cfg(2, Scheme::kSequential);
  const auto stats = run_sequential(data, cfg, RngStream(7, 3));
  REQUIRE(stats.size() == 1);
  CHECK(stats[0].fold == 2);
  const FoldPlan plan = plan_of(data, cfg, 7, 3);
  const ExpectedStat e = expected_zero_stat(data, plan.eval_indices(2));
  CHECK(stats[0].t == doctest::Approx(e.t).epsilon(1e-12));
}

TEST_CASE("determinism: identical inputs give bitwise identical results") {
  DgpConfig dgp;
  dgp.n = 120;
  dgp.p = 3;
  const Dataset data = generate(dgp, RngStream(12, 5));
  RunConfig cfg;
  cfg.k_folds = 4;
  cfg.scheme = Scheme::kAll;  // default knn learner
  const RunResult a = run(data, cfg, RngStream(12, 5));
  const RunResult b = run(data, cfg, RngStream(12, 5));
  REQUIRE(a.results.size() == b.results.size());
  for (std::size_t i = 0; i < a.results.size(); ++i) {
    CHECK(a.results[i].p.value() == b.results[i].p.value());
    REQUIRE(a.results[i].per_fold.size() == b.results[i].per_fold.size());
    for (std::size_t f = 0; f < a.results[i].per_fold.size(); ++f) {
      CHECK(a.results[i].per_fold[f].t == b.results[i].per_fold[f].t);
      CHECK(a.results[i].per_fold[f].sigma == b.results[i].per_fold[f].sigma);
    }
  }
}

TEST_CASE("scheme all: naive and median share fold statistics, p in [0,1]") {
  DgpConfig dgp;
  dgp.n = 150;
  dgp.p = 2;
  const Dataset data = generate(dgp, RngStream(3, 9));
  RunConfig cfg;
  cfg.k_folds = 3;
  const RunResult res = run(data, cfg, RngStream(3, 9));
  REQUIRE(res.results.size() == 3);
  const auto* naive = res.find(Scheme::kNaive);
  const auto* median = res.find(Scheme::kMedian);
  const auto* seq = res.find(Scheme::kSequential);
  REQUIRE(naive != nullptr);
  REQUIRE(median != nullptr);
  REQUIRE(seq != nullptr);
  REQUIRE(naive->per_fold.size() == 3);
  REQUIRE(seq->per_fold.size() == 2);
  for (std::size_t f = 0; f < 3; ++f) {
    CHECK(naive->per_fold[f].t == median->per_fold[f].t);
    CHECK(naive->per_fold[f].p.value() == median->per_fold[f].p.value());
  }
  for (const auto& r : res.results) {
    CHECK(r.p.value() >= 0.0);
    CHECK(r.p.value() <= 1.0);
    CHECK(r.rejected == (r.p.value() <= cfg.alpha));
  }
}

TEST_CASE("sequential statistics only depend on prior folds") {
  DgpConfig dgp;
  dgp.n = 100;
  dgp.p = 2;
  const std::uint64_t seed = 88, tag = 2;
  const Dataset data = generate(dgp, RngStream(seed, tag));
  RunConfig cfg;
  cfg.k_folds = 5;
  cfg.scheme = Scheme::kSequential;
  const FoldPlan plan = plan_of(data, cfg, seed, tag);

  const auto base =
      run_sequential(data, cfg, plan, RngStream(seed, tag), nullptr);
  REQUIRE(base.size() == 4);

  // rewrite every outcome in fold K; folds 2..K-1 must not move
  std::vector<double> y(data.y().begin(), data.y().end());
  for (std::size_t i : plan.eval_indices(5)) y[i] += 100.0;
  const Dataset mutated(data.n(), data.p(),
                        {data.z_flat().begin(), data.z_flat().end()},
                        {data.d().begin(), data.d().end()}, std::move(y));
  const auto after =
      run_sequential(mutated, cfg, plan, RngStream(seed, tag), nullptr);
  REQUIRE(after.size() == 4);
  for (std::size_t i = 0; i + 1 < base.size(); ++i) {
    CHECK(base[i].t == after[i].t);  // bitwise
    CHECK(base[i].delta == after[i].delta);
  }
  CHECK(base.back().t != after.back().t);
}

TEST_CASE("degenerate folds: skip policy records, error policy aborts") {
  // engineer a dataset whose fold-1 evaluation has no control units
  const std::uint64_t seed = 55, tag = 0;
  RunConfig cfg = zero_cfg(2);
  cfg.degenerate_policy = DegeneratePolicy::kSkipFold;
  const FoldPlan plan = make_plan(16, 2, RngStream(seed, hetseq::kFoldStreamBase + tag));
  std::vector<int> d(16, 0);
  std::vector<double> y(16), z(16);
  RngStream noise(55, 99);
  for (std::size_t i = 0; i < 16; ++i) {
    y[i] = noise.next_normal();
    z[i] = noise.next_uniform_sym();
  }
  for (std::size_t i : plan.eval_indices(1)) d[i] = 1;  // fold 1 all treated
  // fold 2: give both arms to both groups (eval order = ascending index,
  // zero learner splits it in half)
  const auto f2 = plan.eval_indices(2);
  for (std::size_t pos = 0; pos < f2.size(); ++pos) {
    d[f2[pos]] = pos % 2 == 0 ? 1 : 0;
  }
  const Dataset data(16, 1, std::move(z), std::move(d), std::move(y));

  const RunResult res = run(data, cfg, RngStream(seed, tag));
  REQUIRE(res.skipped_folds.size() == 1);
  CHECK(res.skipped_folds[0].fold == 1);
  CHECK(res.skipped_folds[0].pipeline == hetseq::PipelineKind::kCrossfold);
  const auto* naive = res.find(Scheme::kNaive);
  const auto* median = res.find(Scheme::kMedian);
  REQUIRE(naive != nullptr);
  REQUIRE(median != nullptr);
  CHECK(naive->per_fold.size() == 1);  // K-1 usable folds
  // median over a single fold is that fold's p
  CHECK(median->p.value() == naive->per_fold[0].p.value());

  RunConfig strict = cfg;
  strict.degenerate_policy = DegeneratePolicy::kError;
  try {
    run(data, strict, RngStream(seed, tag));
    FAIL("expected DegenerateFoldError");
  } catch (const hetseq::DegenerateFoldError& e) {
    CHECK(e.fold() == 1);
  }
}

TEST_CASE("a run with every fold degenerate raises a run error") {
  // all units treated: every cell on the control side is empty
  std::vector<int> d(20, 1);
  std::vector<double> y(20), z(20);
  RngStream noise(5, 5);
  for (std::size_t i = 0; i < 20; ++i) {
    y[i] = noise.next_normal();
    z[i] = noise.next_uniform_sym();
  }
  const Dataset data(20, 1, std::move(z), std::move(d), std::move(y));
  RunConfig cfg = zero_cfg(2);
  cfg.degenerate_policy = DegeneratePolicy::kSkipFold;
  CHECK_THROWS_AS(run(data, cfg, RngStream(1, 0)),
                  hetseq::DegenerateRunError);
}

TEST_CASE("config validation") {
  RunConfig cfg;
  cfg.k_folds = 1;
  CHECK_THROWS_AS(cfg.validate(), hetseq::ConfigError);
  cfg.k_folds = 5;
  cfg.alpha = 0.0;
  CHECK_THROWS_AS(cfg.validate(), hetseq::ConfigError);
  cfg.alpha = 1.0;
  CHECK_THROWS_AS(cfg.validate(), hetseq::ConfigError);
}
