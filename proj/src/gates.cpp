#include "hetseq/gates.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <string>

namespace hetseq {

GroupAssignment assign_groups(std::span<const double> tau_hat) {
  const std::size_t m = tau_hat.size();
  if (m < 2) {
    throw DomainError("assign_groups: need at least 2 units");
  }
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return tau_hat[a] < tau_hat[b];
                   });
  const std::size_t top = (m + 1) / 2;  // top ceil(m/2) ranks
  GroupAssignment out;
  out.labels.assign(m, 0);
  for (std::size_t r = m - top; r < m; ++r) {
    out.labels[order[r]] = 1;
  }
  return out;
}

namespace {

// Cell layout: index = 2*group + arm; contrast signs +,-,-,+ for
// (top,treated), (top,control), (bottom,treated), (bottom,control).
constexpr std::array<double, 4> kSign = {+1.0, -1.0, -1.0, +1.0};

constexpr std::size_t cell_of(std::uint8_t group, int arm) {
  return 2u * (1u - group) + static_cast<std::size_t>(1 - arm);
}

struct Cells {
  std::array<double, 4> sum{};
  std::array<std::size_t, 4> count{};
  std::vector<std::size_t> cell_of_unit;  // per eval position

  CellCounts counts() const {
    return CellCounts{count[0], count[1], count[2], count[3]};
  }
};

Cells tabulate(const Dataset& data, std::span<const std::size_t> eval,
               const GroupAssignment& groups) {
  if (groups.labels.size() != eval.size()) {
    throw DomainError("contrast: group labels do not match eval fold size");
  }
  Cells cells;
  cells.cell_of_unit.resize(eval.size());
  for (std::size_t pos = 0; pos < eval.size(); ++pos) {
    const std::size_t i = eval[pos];
    if (i >= data.n()) {
      throw DomainError("contrast: eval index out of range");
    }
    const std::size_t c = cell_of(groups.labels[pos], data.d(i));
    cells.cell_of_unit[pos] = c;
    cells.sum[c] += data.y(i);
    cells.count[c] += 1;
  }
  return cells;
}

void require_cells(const Cells& cells, std::size_t min_size,
                   const char* why) {
  for (std::size_t c = 0; c < 4; ++c) {
    if (cells.count[c] < min_size) {
      throw DegenerateFoldError(
          std::string("degenerate fold: ") + why + " (cells: top/treated=" +
              std::to_string(cells.count[0]) +
              ", top/control=" + std::to_string(cells.count[1]) +
              ", bottom/treated=" + std::to_string(cells.count[2]) +
              ", bottom/control=" + std::to_string(cells.count[3]) + ")",
          cells.count[0], cells.count[1], cells.count[2], cells.count[3]);
    }
  }
}

double delta_from(const Cells& cells) {
  double delta = 0.0;
  for (std::size_t c = 0; c < 4; ++c) {
    delta += kSign[c] * cells.sum[c] / static_cast<double>(cells.count[c]);
  }
  return delta;
}

}  // namespace

double jackknife_se(const Dataset& data, std::span<const std::size_t> eval,
                    const GroupAssignment& groups) {
  const Cells cells = tabulate(data, eval, groups);
  require_cells(cells, 2, "a cell would be emptied by the delete-one jackknife");

  const std::size_t m = eval.size();
  const double delta = delta_from(cells);
  std::array<double, 4> mean;
  for (std::size_t c = 0; c < 4; ++c) {
    mean[c] = cells.sum[c] / static_cast<double>(cells.count[c]);
  }
  // Pseudo-values: deleting unit i only moves its own cell mean, so
  // delta_(-i) = delta + sign_c * ((sum_c - y_i)/(n_c - 1) - mean_c),
  // an O(1) update per unit.
  std::vector<double> pseudo(m);
  for (std::size_t pos = 0; pos < m; ++pos) {
    const std::size_t c = cells.cell_of_unit[pos];
    const double y = data.y(eval[pos]);
    const double mean_without =
        (cells.sum[c] - y) / static_cast<double>(cells.count[c] - 1);
    pseudo[pos] = delta + kSign[c] * (mean_without - mean[c]);
  }
  double pseudo_mean = 0.0;
  for (double v : pseudo) pseudo_mean += v;
  pseudo_mean /= static_cast<double>(m);
  double ss = 0.0;
  for (double v : pseudo) {
    const double dev = v - pseudo_mean;
    ss += dev * dev;
  }
  const double mm = static_cast<double>(m);
  return std::sqrt((mm - 1.0) / mm * ss);
}

FoldStatistic contrast(const Dataset& data, std::span<const std::size_t> eval,
                       const GroupAssignment& groups, int fold_label) {
  const Cells cells = tabulate(data, eval, groups);
  require_cells(cells, 1, "an empty (group x arm) cell");
  require_cells(cells, 2, "a cell with a single unit");

  const double delta = delta_from(cells);

  // Welch-style closed form: sum over cells of s^2_c / n_c with the
  // (n_c - 1)-denominator sample variance. Two-pass for stability.
  double welch_var = 0.0;
  for (std::size_t c = 0; c < 4; ++c) {
    const double mean = cells.sum[c] / static_cast<double>(cells.count[c]);
    double ss = 0.0;
    for (std::size_t pos = 0; pos < eval.size(); ++pos) {
      if (cells.cell_of_unit[pos] == c) {
        const double dev = data.y(eval[pos]) - mean;
        ss += dev * dev;
      }
    }
    const double nc = static_cast<double>(cells.count[c]);
    welch_var += ss / (nc - 1.0) / nc;
  }

  const double sigma = jackknife_se(data, eval, groups);
  if (!(sigma > 0.0)) {
    throw DegenerateFoldError(
        "degenerate fold: zero-variance contrast (T undefined)",
        cells.count[0], cells.count[1], cells.count[2], cells.count[3],
        fold_label);
  }
  const double t = delta / sigma;
  return FoldStatistic{fold_label,       delta, sigma, std::sqrt(welch_var),
                       t,                two_sided_p(t),
                       cells.counts()};
}

}  // namespace hetseq
