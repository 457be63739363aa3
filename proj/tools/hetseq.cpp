// hetseq.cpp -- command-line harness: `simulate` reproduces the rejection
// rate study, `validate` applies the heterogeneity test to a CSV file.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "hetseq/simharness.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitDegenerate = 4;

hetseq::Scheme parse_scheme(const std::string& s) {
  if (s == "naive") return hetseq::Scheme::kNaive;
  if (s == "median") return hetseq::Scheme::kMedian;
  if (s == "sequential") return hetseq::Scheme::kSequential;
  if (s == "all") return hetseq::Scheme::kAll;
  throw hetseq::ConfigError("unknown scheme: " + s);
}

hetseq::LearnerSpec parse_learner(const std::string& kind, unsigned knn_k) {
  hetseq::LearnerSpec spec;
  if (kind == "zero") {
    spec.kind = hetseq::LearnerKind::kZero;
  } else if (kind == "knn") {
    spec.kind = hetseq::LearnerKind::kKnnT;
  } else {
    throw hetseq::ConfigError("unknown learner: " + kind);
  }
  if (knn_k > 0) spec.knn_k = knn_k;
  return spec;
}

hetseq::TauSpec parse_tau(const std::string& s) {
  if (s == "zero") return hetseq::TauSpec::kZero;
  if (s == "relu-z1") return hetseq::TauSpec::kReluZ1;
  throw hetseq::ConfigError("unknown tau spec: " + s);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "hetseq: cross-fold and sequential validation of treatment "
      "heterogeneity in randomized trials"};
  app.require_subcommand(1);

  // --- simulate ---
  auto* sim = app.add_subcommand(
      "simulate", "Monte-Carlo rejection-rate study on synthetic RCT data");
  std::size_t n = 1000, p = 10, reps = 2000;
  double pi = 0.5, alpha = 0.05, noise_sd = 1.0;
  int k_folds = 5;
  std::string tau = "zero", learner = "knn", scheme = "all", out_path;
  unsigned knn_k = 0;  // 0 = auto
  std::uint64_t seed = 1;
  int parallelism = 0;  // 0 = auto
  sim->add_option("--n", n, "sample size per replication");
  sim->add_option("--p", p, "covariate dimension");
  sim->add_option("--pi", pi, "treatment probability");
  sim->add_option("--k-folds", k_folds, "number of folds K");
  sim->add_option("--reps", reps, "Monte-Carlo replications");
  sim->add_option("--tau", tau, "ground-truth CATE: zero | relu-z1");
  sim->add_option("--learner", learner, "CATE learner: zero | knn");
  sim->add_option("--knn-k", knn_k, "neighbours per arm (0 = auto)");
  sim->add_option("--noise-sd", noise_sd, "outcome noise SD");
  sim->add_option("--scheme", scheme,
                  "aggregation: naive | median | sequential | all");
  sim->add_option("--alpha", alpha, "significance level");
  sim->add_option("--seed", seed, "base seed");
  sim->add_option("--parallelism", parallelism,
                  "worker threads (0 = auto; HETSEQ_THREADS overrides)");
  sim->add_option("--out", out_path, "write the JSON report to this file");

  // --- validate ---
  auto* val = app.add_subcommand(
      "validate", "test for treatment heterogeneity in a CSV dataset");
  std::string input;
  bool as_json = false;
  int v_k_folds = 5;
  std::string v_learner = "knn", v_scheme = "all";
  unsigned v_knn_k = 0;
  double v_alpha = 0.05;
  std::uint64_t v_seed = 1;
  val->add_option("--input", input, "CSV file with columns y, d, z1..zp")
      ->required();
  val->add_option("--k-folds", v_k_folds, "number of folds K");
  val->add_option("--learner", v_learner, "CATE learner: zero | knn");
  val->add_option("--knn-k", v_knn_k, "neighbours per arm (0 = auto)");
  val->add_option("--scheme", v_scheme,
                  "aggregation: naive | median | sequential | all");
  val->add_option("--alpha", v_alpha, "significance level");
  val->add_option("--seed", v_seed, "fold-plan seed");
  val->add_flag("--json", as_json, "print a JSON report instead of text");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (sim->parsed()) {
      hetseq::SimConfig cfg;
      cfg.dgp =
          hetseq::DgpConfig{n, p, pi, parse_tau(tau), noise_sd};
      cfg.run.k_folds = k_folds;
      cfg.run.learner = parse_learner(learner, knn_k);
      cfg.run.scheme = parse_scheme(scheme);
      cfg.run.alpha = alpha;
      cfg.run.degenerate_policy = hetseq::DegeneratePolicy::kSkipFold;
      cfg.reps = reps;
      cfg.base_seed = seed;
      if (parallelism < 0) {
        throw hetseq::ConfigError("--parallelism must be >= 0");
      }
      if (parallelism > 0) {
        cfg.parallelism = static_cast<unsigned>(parallelism);
      }
      const hetseq::SimulationReport report = hetseq::simulate(cfg);
      std::cout << hetseq::report_table(report);
      if (!out_path.empty()) {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) {
          throw hetseq::ConfigError("cannot write to " + out_path);
        }
        out << hetseq::report_json(report);
        std::cout << "report written to " << out_path << "\n";
      }
    } else {
      hetseq::RunConfig cfg;
      cfg.k_folds = v_k_folds;
      cfg.learner = parse_learner(v_learner, v_knn_k);
      cfg.scheme = parse_scheme(v_scheme);
      cfg.alpha = v_alpha;
      cfg.degenerate_policy = hetseq::DegeneratePolicy::kError;
      const hetseq::ValidateOutput out =
          hetseq::validate_file(input, cfg, v_seed);
      std::cout << (as_json ? out.json_report : out.text_report);
    }
  } catch (const hetseq::ParseError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const hetseq::DegenerateFoldError& e) {
    std::cerr << "degenerate run: " << e.what() << "\n";
    return kExitDegenerate;
  } catch (const hetseq::DegenerateRunError& e) {
    std::cerr << "degenerate run: " << e.what() << "\n";
    return kExitDegenerate;
  } catch (const hetseq::Error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return 0;
}
