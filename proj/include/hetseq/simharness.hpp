// simharness.hpp -- Monte-Carlo replication engine and report formatting.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hetseq/data.hpp"
#include "hetseq/pipeline.hpp"

namespace hetseq {

struct SimConfig {
  DgpConfig dgp;
  RunConfig run;
  std::size_t reps = 2000;
  std::uint64_t base_seed = 0;
  // Worker threads; nullopt = auto (hardware concurrency). The
  // HETSEQ_THREADS environment variable overrides both.
  std::optional<unsigned> parallelism;

  void validate() const;  // throws ConfigError
};

struct MethodSummary {
  Scheme method;
  double rejection_rate;      // rejections / reps_used
  double mc_stderr;           // sqrt(r*(1-r)/reps_used)
  std::size_t reps_used;      // replications that produced a p-value
  std::size_t degenerate_count;
  // Per-replication p-values in replication order; filled only when
  // simulate() is asked to collect them. Degenerate replications hold -1.
  std::vector<double> pvalues;
};

struct SimulationReport {
  SimConfig config;  // echo (parallelism excluded from serialized forms)
  std::vector<MethodSummary> methods;
};

// Run cfg.reps independent replications: replication r generates data on
// stream (base_seed, r) and runs the pipeline with replication tag r.
// Deterministic given base_seed regardless of thread count. Throws
// DegenerateRunError if no replication produces any p-value.
SimulationReport simulate(const SimConfig& cfg, bool collect_pvalues = false);

// Deterministic JSON serialization (config echo + per-method summaries).
std::string report_json(const SimulationReport& report);
// Aligned text table: one row per DGP scenario, one column per method.
std::string report_table(const SimulationReport& report);

// Apply the heterogeneity test to a CSV file.
struct ValidateOutput {
  RunResult result;
  std::string text_report;
  std::string json_report;
};
ValidateOutput validate_file(const std::string& path, const RunConfig& cfg,
                             std::uint64_t seed);

// HETSEQ_THREADS env var if set, else the configured value, else hardware
// concurrency; always >= 1.
unsigned resolve_parallelism(const std::optional<unsigned>& configured);

const char* tau_name(TauSpec spec);

}  // namespace hetseq
