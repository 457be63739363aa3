#include "hetseq/simharness.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace hetseq {

const char* tau_name(TauSpec spec) {
  switch (spec) {
    case TauSpec::kZero:
      return "zero";
    case TauSpec::kReluZ1:
      return "relu-z1";
  }
  return "?";
}

void SimConfig::validate() const {
  if (reps < 1) {
    throw ConfigError("SimConfig: reps must be >= 1");
  }
  if (parallelism && *parallelism < 1) {
    throw ConfigError("SimConfig: parallelism must be >= 1");
  }
  dgp.validate();
  run.validate();
}

unsigned resolve_parallelism(const std::optional<unsigned>& configured) {
  if (const char* env = std::getenv("HETSEQ_THREADS")) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end == env || *end != '\0' || v < 1 || v > 4096) {
      throw ConfigError("HETSEQ_THREADS must be a positive integer");
    }
    return static_cast<unsigned>(v);
  }
  if (configured) {
    return *configured;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1u;
}

namespace {

std::vector<Scheme> requested_methods(Scheme scheme) {
  switch (scheme) {
    case Scheme::kNaive:
      return {Scheme::kNaive};
    case Scheme::kMedian:
      return {Scheme::kMedian};
    case Scheme::kSequential:
      return {Scheme::kSequential};
    case Scheme::kAll:
      return {Scheme::kNaive, Scheme::kMedian, Scheme::kSequential};
  }
  return {};
}

struct RepOutcome {
  // p-value per requested method, -1 when the replication was degenerate.
  std::vector<double> p;
};

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace

SimulationReport simulate(const SimConfig& cfg, bool collect_pvalues) {
  cfg.validate();
  const std::vector<Scheme> methods = requested_methods(cfg.run.scheme);
  const std::size_t reps = cfg.reps;

  std::vector<RepOutcome> outcomes(reps);
  std::atomic<std::size_t> next{0};
  std::mutex failure_mutex;
  std::exception_ptr failure;

  auto run_one = [&](std::size_t rep_index) {
    // Replication r (1-based) draws its data on stream (base_seed, r); the
    // pipeline derives fold/learner streams from the same tag.
    const std::uint64_t tag = static_cast<std::uint64_t>(rep_index) + 1;
    RepOutcome out;
    out.p.assign(methods.size(), -1.0);
    try {
      const Dataset data = generate(cfg.dgp, RngStream(cfg.base_seed, tag));
      const RunResult result =
          run(data, cfg.run, RngStream(cfg.base_seed, tag));
      for (std::size_t mi = 0; mi < methods.size(); ++mi) {
        if (const AggregationResult* agg = result.find(methods[mi])) {
          out.p[mi] = agg->p.value();
        }
      }
    } catch (const DegenerateRunError&) {
      // leave the sentinel p-values; counted as a degenerate replication
    }
    outcomes[rep_index] = std::move(out);
  };

  auto worker = [&] {
    for (;;) {
      const std::size_t r = next.fetch_add(1);
      if (r >= reps) return;
      try {
        run_one(r);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };

  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(
      resolve_parallelism(cfg.parallelism), reps));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  SimulationReport report;
  report.config = cfg;
  bool any_usable = false;
  for (std::size_t mi = 0; mi < methods.size(); ++mi) {
    MethodSummary summary;
    summary.method = methods[mi];
    std::size_t used = 0, rejected = 0;
    for (std::size_t r = 0; r < reps; ++r) {
      const double p = outcomes[r].p[mi];
      if (p >= 0.0) {
        ++used;
        if (p <= cfg.run.alpha) ++rejected;
      }
      if (collect_pvalues) summary.pvalues.push_back(p);
    }
    summary.reps_used = used;
    summary.degenerate_count = reps - used;
    if (used > 0) {
      any_usable = true;
      const double rate =
          static_cast<double>(rejected) / static_cast<double>(used);
      summary.rejection_rate = rate;
      summary.mc_stderr =
          std::sqrt(rate * (1.0 - rate) / static_cast<double>(used));
    } else {
      summary.rejection_rate = 0.0;
      summary.mc_stderr = 0.0;
    }
    report.methods.push_back(std::move(summary));
  }
  if (!any_usable) {
    throw DegenerateRunError("simulate: every replication was degenerate");
  }
  return report;
}

namespace {

nlohmann::json learner_json(const LearnerSpec& spec) {
  nlohmann::json j;
  j["kind"] = spec.kind == LearnerKind::kZero ? "zero" : "knn";
  if (spec.knn_k) {
    j["knn_k"] = *spec.knn_k;
  } else {
    j["knn_k"] = "auto";
  }
  return j;
}

nlohmann::json run_config_json(const RunConfig& cfg) {
  nlohmann::json j;
  j["k_folds"] = cfg.k_folds;
  j["learner"] = learner_json(cfg.learner);
  j["scheme"] = scheme_name(cfg.scheme);
  j["alpha"] = cfg.alpha;
  j["degenerate_policy"] =
      cfg.degenerate_policy == DegeneratePolicy::kError ? "error"
                                                        : "skip_fold";
  return j;
}

nlohmann::json fold_json(const FoldStatistic& s) {
  nlohmann::json j;
  j["fold"] = s.fold;
  j["cells"] = {{"top_treated", s.cells.top_treated},
                {"top_control", s.cells.top_control},
                {"bottom_treated", s.cells.bottom_treated},
                {"bottom_control", s.cells.bottom_control}};
  j["delta"] = s.delta;
  j["sigma"] = s.sigma;
  j["sigma_welch"] = s.sigma_welch;
  j["t"] = s.t;
  j["p"] = s.p.value();
  return j;
}

}  // namespace

std::string report_json(const SimulationReport& report) {
  nlohmann::json j;
  // parallelism is intentionally not echoed: reports are identical for any
  // thread count, and serializing it would break that byte-for-byte.
  j["config"]["dgp"] = {{"n", report.config.dgp.n},
                        {"p", report.config.dgp.p},
                        {"pi", report.config.dgp.pi},
                        {"tau", tau_name(report.config.dgp.tau_spec)},
                        {"noise_sd", report.config.dgp.noise_sd}};
  j["config"]["run"] = run_config_json(report.config.run);
  j["config"]["reps"] = report.config.reps;
  j["config"]["base_seed"] = report.config.base_seed;
  nlohmann::json methods = nlohmann::json::array();
  for (const auto& m : report.methods) {
    methods.push_back({{"method", scheme_name(m.method)},
                       {"rejection_rate", m.rejection_rate},
                       {"mc_stderr", m.mc_stderr},
                       {"reps_used", m.reps_used},
                       {"degenerate_count", m.degenerate_count}});
  }
  j["methods"] = methods;
  return j.dump(2) + "\n";
}

std::string report_table(const SimulationReport& report) {
  const char* scenario = report.config.dgp.tau_spec == TauSpec::kZero
                             ? "tau(z) = 0"
                             : "tau(z) = (z_1)_+";
  std::ostringstream os;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "rejection rate at alpha = %g",
                report.config.run.alpha);
  os << buf << " (" << report.config.reps << " replications, seed "
     << report.config.base_seed << ")\n\n";
  os << "  scenario          ";
  for (const auto& m : report.methods) {
    std::snprintf(buf, sizeof(buf), " %14s", scheme_name(m.method));
    os << buf;
  }
  os << "\n  " << scenario;
  for (std::size_t i = std::string(scenario).size(); i < 18; ++i) os << ' ';
  for (const auto& m : report.methods) {
    std::snprintf(buf, sizeof(buf), " %13.2f%%", 100.0 * m.rejection_rate);
    os << buf;
  }
  os << "\n  (mc stderr)       ";
  for (const auto& m : report.methods) {
    std::snprintf(buf, sizeof(buf), "        (%.2f%%)", 100.0 * m.mc_stderr);
    os << buf;
  }
  os << "\n";
  std::size_t degenerate = 0;
  for (const auto& m : report.methods) {
    degenerate = std::max(degenerate, m.degenerate_count);
  }
  if (degenerate > 0) {
    os << "  degenerate replications excluded: " << degenerate << "\n";
  }
  return os.str();
}

ValidateOutput validate_file(const std::string& path, const RunConfig& cfg,
                             std::uint64_t seed) {
  cfg.validate();
  const Dataset data = read_csv(path);
  const RunResult result = run(data, cfg, RngStream(seed, 0));

  std::ostringstream os;
  os << "dataset: n = " << data.n() << ", p = " << data.p() << " (" << path
     << ")\n";
  os << "folds: K = " << cfg.k_folds << ", seed " << seed << "\n";
  auto print_folds = [&os](const std::vector<FoldStatistic>& stats) {
    os << "  fold   n_eval  top/T  top/C  bot/T  bot/C"
       << "       delta       sigma     sigma_w           T           p\n";
    for (const auto& s : stats) {
      const std::size_t n_eval = s.cells.top_treated + s.cells.top_control +
                                 s.cells.bottom_treated +
                                 s.cells.bottom_control;
      char line[256];
      std::snprintf(line, sizeof(line),
                    "  %4d %8zu %6zu %6zu %6zu %6zu %11.5f %11.5f %11.5f "
                    "%11.5f %11.5f\n",
                    s.fold, n_eval, s.cells.top_treated, s.cells.top_control,
                    s.cells.bottom_treated, s.cells.bottom_control, s.delta,
                    s.sigma, s.sigma_welch, s.t, s.p.value());
      os << line;
    }
  };

  nlohmann::json j;
  j["dataset"] = {{"n", data.n()}, {"p", data.p()}, {"path", path}};
  j["alpha"] = cfg.alpha;
  j["seed"] = seed;
  bool crossfold_printed = false;
  for (const auto& agg : result.results) {
    if (agg.method != Scheme::kSequential && !crossfold_printed) {
      os << "cross-fold statistics (fit on all other folds):\n";
      print_folds(agg.per_fold);
      crossfold_printed = true;
      nlohmann::json folds = nlohmann::json::array();
      for (const auto& s : agg.per_fold) folds.push_back(fold_json(s));
      j["crossfold_folds"] = folds;
    }
    if (agg.method == Scheme::kSequential) {
      os << "sequential statistics (fit on folds 1..k-1):\n";
      print_folds(agg.per_fold);
      nlohmann::json folds = nlohmann::json::array();
      for (const auto& s : agg.per_fold) folds.push_back(fold_json(s));
      j["sequential_folds"] = folds;
    }
  }
  os << "aggregate p-values (alpha = " << format_double(cfg.alpha) << "):\n";
  nlohmann::json aggs = nlohmann::json::array();
  for (const auto& agg : result.results) {
    char line[128];
    std::snprintf(line, sizeof(line), "  %-11s p = %-10.6g %s\n",
                  scheme_name(agg.method), agg.p.value(),
                  agg.rejected ? "-> REJECT no-heterogeneity null"
                               : "-> fail to reject");
    os << line;
    aggs.push_back({{"method", scheme_name(agg.method)},
                    {"p", agg.p.value()},
                    {"rejected", agg.rejected}});
  }
  j["aggregates"] = aggs;
  if (!result.skipped_folds.empty()) {
    os << "skipped folds:\n";
    nlohmann::json skips = nlohmann::json::array();
    for (const auto& s : result.skipped_folds) {
      os << "  " << (s.pipeline == PipelineKind::kCrossfold ? "crossfold"
                                                            : "sequential")
         << " fold " << s.fold << ": " << s.reason << "\n";
      skips.push_back({{"pipeline", s.pipeline == PipelineKind::kCrossfold
                                        ? "crossfold"
                                        : "sequential"},
                       {"fold", s.fold},
                       {"reason", s.reason}});
    }
    j["skipped_folds"] = skips;
  } else {
    j["skipped_folds"] = nlohmann::json::array();
  }

  return ValidateOutput{result, os.str(), j.dump(2) + "\n"};
}

}  // namespace hetseq
