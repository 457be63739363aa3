#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "hetseq/data.hpp"

using hetseq::Dataset;
using hetseq::DgpConfig;
using hetseq::generate;
using hetseq::read_csv;
using hetseq::RngStream;
using hetseq::TauSpec;
using hetseq::true_cate;

namespace {

std::string write_temp_csv(const char* name, const std::string& content) {
  std::string path = std::string("hetseq_test_") + name + ".csv";
  std::ofstream out(path);
  out << content;
  return path;
}

}  // namespace

TEST_CASE("true_cate shapes") {
  const std::vector<double> z_pos = {0.7, -1.0};
  const std::vector<double> z_neg = {-0.3};
  CHECK(true_cate(TauSpec::kZero, z_pos) == 0.0);
  CHECK(true_cate(TauSpec::kReluZ1, z_pos) == 0.7);
  CHECK(true_cate(TauSpec::kReluZ1, z_neg) == 0.0);
  CHECK_THROWS_AS(true_cate(TauSpec::kZero, std::span<const double>{}),
                  hetseq::DomainError);
}

TEST_CASE("generate is deterministic and well-formed") {
  DgpConfig cfg;
  cfg.n = 500;
  cfg.p = 3;
  const Dataset a = generate(cfg, RngStream(42, 17));
  const Dataset b = generate(cfg, RngStream(42, 17));
  REQUIRE(a.n() == 500);
  REQUIRE(a.p() == 3);
  for (std::size_t i = 0; i < a.n(); ++i) {
    CHECK(a.y(i) == b.y(i));
    CHECK(a.d(i) == b.d(i));
    CHECK((a.d(i) == 0 || a.d(i) == 1));
    for (std::size_t j = 0; j < a.p(); ++j) {
      CHECK(a.z_row(i)[j] == b.z_row(i)[j]);
      CHECK(a.z_row(i)[j] >= -1.0);
      CHECK(a.z_row(i)[j] < 1.0);
    }
  }
  const Dataset c = generate(cfg, RngStream(42, 18));
  bool differs = false;
  for (std::size_t i = 0; i < c.n() && !differs; ++i) {
    differs = c.y(i) != a.y(i);
  }
  CHECK(differs);
}

TEST_CASE("null DGP: outcome mean and treated share across replications") {
  DgpConfig cfg;  // n=1000, p=10, pi=0.5, tau=0
  double total = 0.0;
  std::size_t outside_band = 0;
  const int reps = 200;
  for (int r = 1; r <= reps; ++r) {
    const Dataset d = generate(cfg, RngStream(7, static_cast<uint64_t>(r)));
    std::size_t treated = 0;
    for (std::size_t i = 0; i < d.n(); ++i) {
      total += d.y(i);
      treated += static_cast<std::size_t>(d.d(i));
    }
    const double share = treated / static_cast<double>(d.n());
    if (share < 0.44 || share > 0.56) ++outside_band;
  }
  // Y is standard normal under the null: 4-sigma band on the grand mean.
  CHECK(std::fabs(total / (reps * 1000.0)) <
        4.0 / std::sqrt(reps * 1000.0));
  // P(share outside [0.44, 0.56]) < 2 exp(-2 * 1000 * 0.06^2) ~ 1.5e-3.
  CHECK(outside_band <= 2);
}

TEST_CASE("large-sample moments for both tau shapes") {
  DgpConfig cfg;
  cfg.n = 100000;
  cfg.p = 2;

  SUBCASE("null: arm means coincide") {
    const Dataset d = generate(cfg, RngStream(11, 1));
    double sum1 = 0.0, sum0 = 0.0;
    std::size_t n1 = 0, n0 = 0;
    for (std::size_t i = 0; i < d.n(); ++i) {
      if (d.d(i) == 1) {
        sum1 += d.y(i);
        ++n1;
      } else {
        sum0 += d.y(i);
        ++n0;
      }
    }
    const double diff = sum1 / n1 - sum0 / n0;
    CHECK(std::fabs(diff) < 4.0 * std::sqrt(1.0 / n1 + 1.0 / n0));
  }

  SUBCASE("relu-z1: contrast on the z1 > 0.5 region is 0.75") {
    cfg.tau_spec = TauSpec::kReluZ1;
    const Dataset d = generate(cfg, RngStream(11, 2));
    double sum1 = 0.0, sum0 = 0.0, sumsq1 = 0.0, sumsq0 = 0.0;
    std::size_t n1 = 0, n0 = 0;
    for (std::size_t i = 0; i < d.n(); ++i) {
      if (d.z_row(i)[0] <= 0.5) continue;
      if (d.d(i) == 1) {
        sum1 += d.y(i);
        sumsq1 += d.y(i) * d.y(i);
        ++n1;
      } else {
        sum0 += d.y(i);
        sumsq0 += d.y(i) * d.y(i);
        ++n0;
      }
    }
    REQUIRE(n1 > 1000);
    REQUIRE(n0 > 1000);
    const double m1 = sum1 / n1, m0 = sum0 / n0;
    const double v1 = sumsq1 / n1 - m1 * m1, v0 = sumsq0 / n0 - m0 * m0;
    const double se = std::sqrt(v1 / n1 + v0 / n0);
    CHECK(std::fabs(m1 - m0 - 0.75) < 4.0 * se);
  }
}

TEST_CASE("csv round trip and column mapping") {
  const std::string canonical = write_temp_csv(
      "canon", "y,d,z1\n1.5,1,0.25\n-2.0,0,-0.5\n0.0,1,1.0\n");
  const Dataset a = read_csv(canonical);
  REQUIRE(a.n() == 3);
  REQUIRE(a.p() == 1);
  CHECK(a.y(0) == 1.5);
  CHECK(a.d(1) == 0);
  CHECK(a.z_row(2)[0] == 1.0);

  const std::string reordered = write_temp_csv(
      "reorder", "z1,y,d\n0.25,1.5,1\n-0.5,-2.0,0\n1.0,0.0,1\n");
  const Dataset b = read_csv(reordered);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(a.y(i) == b.y(i));
    CHECK(a.d(i) == b.d(i));
    CHECK(a.z_row(i)[0] == b.z_row(i)[0]);
  }
  std::remove(canonical.c_str());
  std::remove(reordered.c_str());
}

TEST_CASE("csv errors name the offending row and column") {
  const std::string bad_d = write_temp_csv(
      "badd",
      "y,d,z1\n1,1,0\n1,0,0\n1,1,0\n1,0,0\n1,1,0\n1,0,0\n1,2,0\n");
  try {
    read_csv(bad_d);
    FAIL("expected ParseError");
  } catch (const hetseq::ParseError& e) {
    CHECK(e.row() == 7);
    CHECK(e.column() == "d");
    CHECK(std::string(e.what()).find("row 7") != std::string::npos);
  }
  std::remove(bad_d.c_str());

  const std::string missing = write_temp_csv("missing", "y,z1\n1,0\n");
  CHECK_THROWS_AS(read_csv(missing), hetseq::ParseError);
  std::remove(missing.c_str());

  const std::string gap = write_temp_csv("gap", "y,d,z1,z3\n1,0,0,0\n");
  CHECK_THROWS_AS(read_csv(gap), hetseq::ParseError);
  std::remove(gap.c_str());

  const std::string nonnum = write_temp_csv("nonnum", "y,d,z1\n1,0,abc\n");
  try {
    read_csv(nonnum);
    FAIL("expected ParseError");
  } catch (const hetseq::ParseError& e) {
    CHECK(e.row() == 1);
    CHECK(e.column() == "z1");
  }
  std::remove(nonnum.c_str());

  const std::string no_z = write_temp_csv("noz", "y,d\n1,0\n");
  CHECK_THROWS_AS(read_csv(no_z), hetseq::ParseError);
  std::remove(no_z.c_str());

  const std::string unknown = write_temp_csv("unk", "y,d,z1,w\n1,0,0,0\n");
  CHECK_THROWS_AS(read_csv(unknown), hetseq::ParseError);
  std::remove(unknown.c_str());

  CHECK_THROWS_AS(read_csv("does_not_exist.csv"), hetseq::ParseError);
}

TEST_CASE("config validation") {
  DgpConfig cfg;
  cfg.pi = 0.0;
  CHECK_THROWS_AS(cfg.validate(), hetseq::ConfigError);
  cfg.pi = 1.0;
  CHECK_THROWS_AS(cfg.validate(), hetseq::ConfigError);
  cfg.pi = 0.5;
  cfg.noise_sd = 0.0;
  CHECK_THROWS_AS(cfg.validate(), hetseq::ConfigError);
  cfg.noise_sd = 1.0;
  cfg.n = 0;
  CHECK_THROWS_AS(cfg.validate(), hetseq::ConfigError);
}
