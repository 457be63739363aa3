#include "hetseq/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <utility>

namespace hetseq {

Dataset::Dataset(std::size_t n, std::size_t p, std::vector<double> z,
                 std::vector<int> d, std::vector<double> y)
    : n_(n), p_(p), z_(std::move(z)), d_(std::move(d)), y_(std::move(y)) {
  if (n_ < 1 || p_ < 1) {
    throw DomainError("Dataset: need n >= 1 and p >= 1");
  }
  if (z_.size() != n_ * p_ || d_.size() != n_ || y_.size() != n_) {
    throw DomainError("Dataset: container sizes do not match n, p");
  }
  for (double v : z_) {
    if (!std::isfinite(v)) throw DomainError("Dataset: non-finite covariate");
  }
  for (std::size_t i = 0; i < n_; ++i) {
    if (d_[i] != 0 && d_[i] != 1) {
      throw DomainError("Dataset: treatment values must be 0 or 1");
    }
    if (!std::isfinite(y_[i])) {
      throw DomainError("Dataset: non-finite outcome");
    }
  }
}

void DgpConfig::validate() const {
  if (n < 1) throw ConfigError("DgpConfig: n must be >= 1");
  if (p < 1) throw ConfigError("DgpConfig: p must be >= 1");
  if (!(pi > 0.0 && pi < 1.0)) {
    throw ConfigError("DgpConfig: pi must lie strictly in (0,1)");
  }
  if (!(noise_sd > 0.0) || !std::isfinite(noise_sd)) {
    throw ConfigError("DgpConfig: noise_sd must be positive");
  }
}

double true_cate(TauSpec tau_spec, std::span<const double> z) {
  if (z.empty()) {
    throw DomainError("true_cate: empty covariate vector");
  }
  switch (tau_spec) {
    case TauSpec::kZero:
      return 0.0;
    case TauSpec::kReluZ1:
      return std::max(z[0], 0.0);
  }
  throw DomainError("true_cate: unknown tau spec");
}

Dataset generate(const DgpConfig& config, RngStream rng) {
  config.validate();
  const std::size_t n = config.n, p = config.p;
  std::vector<double> z(n * p);
  for (double& v : z) {
    v = rng.next_uniform_sym();
  }
  std::vector<int> d(n);
  for (int& v : d) {
    v = rng.next_bernoulli(config.pi) ? 1 : 0;
  }
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double tau =
        true_cate(config.tau_spec, std::span<const double>(&z[i * p], p));
    y[i] = d[i] * tau + config.noise_sd * rng.next_normal();
  }
  return Dataset(n, p, std::move(z), std::move(d), std::move(y));
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    // trim surrounding whitespace and a trailing CR from DOS line ends
    const auto first = cell.find_first_not_of(" \t\r");
    const auto last = cell.find_last_not_of(" \t\r");
    cells.push_back(first == std::string::npos
                        ? std::string()
                        : cell.substr(first, last - first + 1));
  }
  if (!line.empty() && line.back() == ',') {
    cells.emplace_back();
  }
  return cells;
}

double parse_double(const std::string& cell, std::size_t row,
                    const std::string& column) {
  double value = 0.0;
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || cell.empty()) {
    throw ParseError("row " + std::to_string(row) + ", column " + column +
                         ": not a number: '" + cell + "'",
                     row, column);
  }
  if (!std::isfinite(value)) {
    throw ParseError("row " + std::to_string(row) + ", column " + column +
                         ": non-finite value",
                     row, column);
  }
  return value;
}

}  // namespace

Dataset read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open file: " + path);
  }
  std::string line;
  if (!std::getline(in, line)) {
    throw ParseError("empty file: " + path);
  }
  const std::vector<std::string> header = split_line(line);

  // Map header names to positions: y, d, z1..zp in any order, no extras.
  int y_col = -1, d_col = -1;
  std::vector<int> z_cols;  // z_cols[j] = column of z{j+1}
  for (std::size_t c = 0; c < header.size(); ++c) {
    const std::string& name = header[c];
    if (name == "y") {
      if (y_col >= 0) throw ParseError("duplicate column y", 0, "y");
      y_col = static_cast<int>(c);
    } else if (name == "d") {
      if (d_col >= 0) throw ParseError("duplicate column d", 0, "d");
      d_col = static_cast<int>(c);
    } else if (name.size() >= 2 && name[0] == 'z') {
      std::size_t j = 0;
      const auto [ptr, ec] =
          std::from_chars(name.data() + 1, name.data() + name.size(), j);
      if (ec != std::errc() || ptr != name.data() + name.size() || j < 1) {
        throw ParseError("unrecognized column '" + name + "'", 0, name);
      }
      if (z_cols.size() < j) z_cols.resize(j, -1);
      if (z_cols[j - 1] >= 0) {
        throw ParseError("duplicate column " + name, 0, name);
      }
      z_cols[j - 1] = static_cast<int>(c);
    } else {
      throw ParseError("unrecognized column '" + name + "'", 0, name);
    }
  }
  if (y_col < 0) throw ParseError("missing column y", 0, "y");
  if (d_col < 0) throw ParseError("missing column d", 0, "d");
  if (z_cols.empty()) {
    throw ParseError("no covariate columns z1..zp found", 0, "z1");
  }
  for (std::size_t j = 0; j < z_cols.size(); ++j) {
    if (z_cols[j] < 0) {
      throw ParseError("missing column z" + std::to_string(j + 1), 0,
                       "z" + std::to_string(j + 1));
    }
  }
  const std::size_t p = z_cols.size();

  std::vector<double> z;
  std::vector<int> d;
  std::vector<double> y;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (line.empty() || (line.size() == 1 && line[0] == '\r')) continue;
    ++row;
    const std::vector<std::string> cells = split_line(line);
    if (cells.size() != header.size()) {
      throw ParseError("row " + std::to_string(row) + ": expected " +
                           std::to_string(header.size()) + " cells, got " +
                           std::to_string(cells.size()),
                       row, "");
    }
    const double dval = parse_double(cells[d_col], row, "d");
    if (dval != 0.0 && dval != 1.0) {
      throw ParseError("row " + std::to_string(row) +
                           ", column d: treatment must be 0 or 1 (got " +
                           cells[d_col] + ")",
                       row, "d");
    }
    d.push_back(static_cast<int>(dval));
    y.push_back(parse_double(cells[y_col], row, "y"));
    for (std::size_t j = 0; j < p; ++j) {
      z.push_back(
          parse_double(cells[z_cols[j]], row, "z" + std::to_string(j + 1)));
    }
  }
  if (row == 0) {
    throw ParseError("no data rows in " + path);
  }
  return Dataset(row, p, std::move(z), std::move(d), std::move(y));
}

}  // namespace hetseq
