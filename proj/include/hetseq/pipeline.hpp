// pipeline.hpp -- end-to-end heterogeneity test on one dataset:
// split -> fit -> predict -> per-fold GATES statistic -> aggregate.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hetseq/aggregate.hpp"
#include "hetseq/data.hpp"
#include "hetseq/folds.hpp"
#include "hetseq/gates.hpp"
#include "hetseq/learner.hpp"

namespace hetseq {

enum class Scheme { kNaive, kMedian, kSequential, kAll };
enum class DegeneratePolicy { kError, kSkipFold };

const char* scheme_name(Scheme s);

struct RunConfig {
  int k_folds = 5;
  LearnerSpec learner;
  Scheme scheme = Scheme::kAll;
  double alpha = 0.05;
  DegeneratePolicy degenerate_policy = DegeneratePolicy::kError;

  void validate() const;  // throws ConfigError
};

// Identifies which pipeline a fold belongs to.
enum class PipelineKind { kCrossfold, kSequential };

struct SkippedFold {
  PipelineKind pipeline;
  int fold;  // 1-based label
  std::string reason;
};

struct AggregationResult {
  Scheme method;  // kNaive, kMedian or kSequential
  Probability p;
  bool rejected;  // p <= alpha
  std::vector<FoldStatistic> per_fold;
};

struct RunResult {
  std::vector<AggregationResult> results;
  std::vector<SkippedFold> skipped_folds;

  const AggregationResult* find(Scheme method) const;
};

// Stream-id classes: replication tag r draws folds from stream
// kFoldStreamBase + r and learner randomness from kLearnerStreamBase + r,
// so adding or removing one consumer never shifts another.
inline constexpr std::uint64_t kFoldStreamBase = 0x8000000000000000ull;
inline constexpr std::uint64_t kLearnerStreamBase = 0xC000000000000000ull;

// Cross-fold blueprint: for each fold k = 1..K fit on all other folds,
// predict on fold k, median-split and compute the fold statistic.
// rep_stream identifies the run: its stream_id is the replication tag used
// to derive the fold and learner streams.
std::vector<FoldStatistic> run_crossfold(const Dataset& data,
                                         const RunConfig& cfg,
                                         RngStream rep_stream);
// Same, on a caller-provided plan.
std::vector<FoldStatistic> run_crossfold(const Dataset& data,
                                         const RunConfig& cfg,
                                         const FoldPlan& plan,
                                         RngStream rep_stream,
                                         std::vector<SkippedFold>* skipped);

// Sequential blueprint: for each fold k = 2..K fit on folds 1..k-1 only,
// evaluate on fold k. Statistic k is a function of folds 1..k alone.
std::vector<FoldStatistic> run_sequential(const Dataset& data,
                                          const RunConfig& cfg,
                                          RngStream rep_stream);
std::vector<FoldStatistic> run_sequential(const Dataset& data,
                                          const RunConfig& cfg,
                                          const FoldPlan& plan,
                                          RngStream rep_stream,
                                          std::vector<SkippedFold>* skipped);

// Run the schemes requested by cfg.scheme. Under kAll both pipelines share
// one fold plan, so method comparisons are paired; naive and median are
// always computed from the same cross-fold statistics.
RunResult run(const Dataset& data, const RunConfig& cfg, RngStream rep_stream);

}  // namespace hetseq
