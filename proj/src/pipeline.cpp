#include "hetseq/pipeline.hpp"

#include <string>
#include <utility>

namespace hetseq {

const char* scheme_name(Scheme s) {
  switch (s) {
    case Scheme::kNaive:
      return "naive";
    case Scheme::kMedian:
      return "median";
    case Scheme::kSequential:
      return "sequential";
    case Scheme::kAll:
      return "all";
  }
  return "?";
}

void RunConfig::validate() const {
  if (k_folds < 2) {
    throw ConfigError("RunConfig: k_folds must be >= 2");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw ConfigError("RunConfig: alpha must lie strictly in (0,1)");
  }
  learner.validate();
}

const AggregationResult* RunResult::find(Scheme method) const {
  for (const auto& r : results) {
    if (r.method == method) return &r;
  }
  return nullptr;
}

namespace {

// Substream lanes for per-fold learner randomness. Crossfold fold k uses
// lane k; sequential fold k uses lane K + k so the two pipelines never
// share draws under scheme all.
RngStream learner_stream(const RngStream& rep_stream, std::uint64_t lane) {
  return RngStream(rep_stream.base_seed(),
                   kLearnerStreamBase + rep_stream.stream_id())
      .substream(lane);
}

// One fold of either pipeline. Returns false when the fold is degenerate
// and the policy says skip.
bool eval_one_fold(const Dataset& data, const RunConfig& cfg,
                   const FoldPlan& plan, int fold,
                   const std::vector<std::size_t>& train,
                   const RngStream& fit_rng, PipelineKind kind,
                   std::vector<FoldStatistic>* out,
                   std::vector<SkippedFold>* skipped) {
  const std::vector<std::size_t> eval = plan.eval_indices(fold);
  try {
    const auto model = fit(cfg.learner, data, train, fit_rng);
    const std::vector<double> tau_hat = model->predict_rows(data, eval);
    const GroupAssignment groups = assign_groups(tau_hat);
    out->push_back(contrast(data, eval, groups, fold));
    return true;
  } catch (DegenerateFoldError& e) {
    if (cfg.degenerate_policy == DegeneratePolicy::kError) {
      e.set_fold(fold);
      throw;
    }
    if (skipped) {
      skipped->push_back(SkippedFold{kind, fold, e.what()});
    }
    return false;
  } catch (const FitError& e) {
    if (cfg.degenerate_policy == DegeneratePolicy::kError) {
      throw DegenerateRunError("fold " + std::to_string(fold) + ": " +
                               e.what());
    }
    if (skipped) {
      skipped->push_back(SkippedFold{kind, fold, e.what()});
    }
    return false;
  }
}

FoldPlan plan_for(const Dataset& data, const RunConfig& cfg,
                  const RngStream& rep_stream) {
  return make_plan(data.n(), cfg.k_folds,
                   RngStream(rep_stream.base_seed(),
                             kFoldStreamBase + rep_stream.stream_id()));
}

}  // namespace

std::vector<FoldStatistic> run_crossfold(const Dataset& data,
                                         const RunConfig& cfg,
                                         const FoldPlan& plan,
                                         RngStream rep_stream,
                                         std::vector<SkippedFold>* skipped) {
  cfg.validate();
  std::vector<FoldStatistic> stats;
  stats.reserve(static_cast<std::size_t>(cfg.k_folds));
  for (int k = 1; k <= cfg.k_folds; ++k) {
    eval_one_fold(data, cfg, plan, k, plan.train_indices_crossfold(k),
                  learner_stream(rep_stream, static_cast<std::uint64_t>(k)),
                  PipelineKind::kCrossfold, &stats, skipped);
  }
  return stats;
}

std::vector<FoldStatistic> run_crossfold(const Dataset& data,
                                         const RunConfig& cfg,
                                         RngStream rep_stream) {
  return run_crossfold(data, cfg, plan_for(data, cfg, rep_stream), rep_stream,
                       nullptr);
}

std::vector<FoldStatistic> run_sequential(const Dataset& data,
                                          const RunConfig& cfg,
                                          const FoldPlan& plan,
                                          RngStream rep_stream,
                                          std::vector<SkippedFold>* skipped) {
  cfg.validate();
  std::vector<FoldStatistic> stats;
  stats.reserve(static_cast<std::size_t>(cfg.k_folds - 1));
  const std::uint64_t lane_base = static_cast<std::uint64_t>(cfg.k_folds);
  for (int k = 2; k <= cfg.k_folds; ++k) {
    eval_one_fold(data, cfg, plan, k, plan.train_indices_sequential(k),
                  learner_stream(rep_stream,
                                 lane_base + static_cast<std::uint64_t>(k)),
                  PipelineKind::kSequential, &stats, skipped);
  }
  return stats;
}

std::vector<FoldStatistic> run_sequential(const Dataset& data,
                                          const RunConfig& cfg,
                                          RngStream rep_stream) {
  return run_sequential(data, cfg, plan_for(data, cfg, rep_stream), rep_stream,
                        nullptr);
}

RunResult run(const Dataset& data, const RunConfig& cfg, RngStream rep_stream) {
  cfg.validate();
  const bool want_crossfold =
      cfg.scheme == Scheme::kNaive || cfg.scheme == Scheme::kMedian ||
      cfg.scheme == Scheme::kAll;
  const bool want_sequential =
      cfg.scheme == Scheme::kSequential || cfg.scheme == Scheme::kAll;

  const FoldPlan plan = plan_for(data, cfg, rep_stream);
  RunResult out;

  auto push = [&](Scheme method, Probability p,
                  const std::vector<FoldStatistic>& per_fold) {
    out.results.push_back(
        AggregationResult{method, p, p.value() <= cfg.alpha, per_fold});
  };

  if (want_crossfold) {
    const std::vector<FoldStatistic> stats =
        run_crossfold(data, cfg, plan, rep_stream, &out.skipped_folds);
    if (stats.empty()) {
      throw DegenerateRunError(
          "cross-fold pipeline: every fold was degenerate");
    }
    std::vector<double> ts;
    std::vector<Probability> ps;
    for (const auto& s : stats) {
      ts.push_back(s.t);
      ps.push_back(s.p);
    }
    if (cfg.scheme != Scheme::kMedian) {
      push(Scheme::kNaive, aggregate_naive(ts), stats);
    }
    if (cfg.scheme != Scheme::kNaive) {
      push(Scheme::kMedian, aggregate_median(ps), stats);
    }
  }
  if (want_sequential) {
    const std::vector<FoldStatistic> stats =
        run_sequential(data, cfg, plan, rep_stream, &out.skipped_folds);
    if (stats.empty()) {
      throw DegenerateRunError(
          "sequential pipeline: every fold was degenerate");
    }
    std::vector<double> ts;
    for (const auto& s : stats) ts.push_back(s.t);
    push(Scheme::kSequential, aggregate_sequential(ts), stats);
  }
  return out;
}

}  // namespace hetseq
