#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "medcons/error.hpp"
#include "medcons/partition.hpp"

namespace medcons {

/// Overlap counts between the clusters of two partitions.
///
/// Only non-zero cells are stored (sorted by row, then column), so the table
/// stays O(n) even when both partitions have Θ(n) clusters.
class ContingencyTable {
 public:
  struct Cell {
    ClusterId row;
    ClusterId col;
    std::size_t count;
  };

  ContingencyTable(const Partition& p, const Partition& q)
      : n_(p.size()), row_sums_(p.cluster_sizes()), col_sums_(q.cluster_sizes()) {
    check_same_size(p, q);
    std::vector<std::uint64_t> keys(n_);
    for (std::size_t v = 0; v < n_; ++v) {
      keys[v] = (static_cast<std::uint64_t>(p[v]) << 32) | q[v];
    }
    std::sort(keys.begin(), keys.end());
    for (std::size_t i = 0; i < n_;) {
      std::size_t j = i;
      while (j < n_ && keys[j] == keys[i]) ++j;
      cells_.push_back({static_cast<ClusterId>(keys[i] >> 32),
                        static_cast<ClusterId>(keys[i] & 0xffffffffu), j - i});
      i = j;
    }
  }

  std::size_t total() const noexcept { return n_; }
  std::span<const Cell> cells() const noexcept { return cells_; }
  std::span<const std::size_t> row_sums() const noexcept { return row_sums_; }
  std::span<const std::size_t> col_sums() const noexcept { return col_sums_; }

 private:
  std::size_t n_;
  std::vector<std::size_t> row_sums_;
  std::vector<std::size_t> col_sums_;
  std::vector<Cell> cells_;
};

namespace detail {
inline std::int64_t pairs(std::size_t x) {
  return static_cast<std::int64_t>(x) * (static_cast<std::int64_t>(x) - 1) / 2;
}
}  // namespace detail

/// Mirkin distance by enumerating all unordered pairs. O(n^2); reference only.
inline std::int64_t mirkin_pairwise(const Partition& p, const Partition& q) {
  check_same_size(p, q);
  std::int64_t disagreements = 0;
  for (std::size_t u = 0; u < p.size(); ++u) {
    for (std::size_t v = u + 1; v < p.size(); ++v) {
      disagreements += (p[u] == p[v]) != (q[u] == q[v]);
    }
  }
  return disagreements;
}

/// Mirkin distance: unordered pairs co-clustered in exactly one partition.
inline std::int64_t mirkin_contingency(const Partition& p, const Partition& q) {
  ContingencyTable table(p, q);
  std::int64_t together_p = 0, together_q = 0, together_both = 0;
  for (std::size_t a : table.row_sums()) together_p += detail::pairs(a);
  for (std::size_t b : table.col_sums()) together_q += detail::pairs(b);
  for (const auto& cell : table.cells()) together_both += detail::pairs(cell.count);
  return together_p + together_q - 2 * together_both;
}

inline std::int64_t mirkin(const Partition& p, const Partition& q) {
  return mirkin_contingency(p, q);
}

/// Mirkin distance normalized by the number of unordered pairs.
inline double rand_distance(const Partition& p, const Partition& q) {
  check_same_size(p, q);
  if (p.size() < 2) {
    throw RangeError("rand distance is undefined for fewer than 2 vertices");
  }
  return static_cast<double>(mirkin_contingency(p, q)) /
         static_cast<double>(detail::pairs(p.size()));
}

/// Split-join (van Dongen) distance. Raw value counts element moves;
/// normalized divides by 2n.
inline double split_join(const Partition& p, const Partition& q,
                         bool normalized = true) {
  ContingencyTable table(p, q);
  const std::size_t n = table.total();
  if (n == 0) return 0.0;
  std::vector<std::size_t> best_row(p.num_clusters(), 0);
  std::vector<std::size_t> best_col(q.num_clusters(), 0);
  for (const auto& cell : table.cells()) {
    best_row[cell.row] = std::max(best_row[cell.row], cell.count);
    best_col[cell.col] = std::max(best_col[cell.col], cell.count);
  }
  std::size_t projection = 0;
  for (std::size_t x : best_row) projection += x;
  for (std::size_t x : best_col) projection += x;
  const double raw = static_cast<double>(2 * n - projection);
  return normalized ? raw / (2.0 * static_cast<double>(n)) : raw;
}

/// Variation of information in nats.
inline double variation_of_information(const Partition& p, const Partition& q) {
  ContingencyTable table(p, q);
  const double n = static_cast<double>(table.total());
  if (table.total() == 0) return 0.0;
  // VI = -sum_ij r_ij [log(r_ij / p_i) + log(r_ij / q_j)], r = joint frequency.
  double vi = 0.0;
  for (const auto& cell : table.cells()) {
    const double nij = static_cast<double>(cell.count);
    const double a = static_cast<double>(table.row_sums()[cell.row]);
    const double b = static_cast<double>(table.col_sums()[cell.col]);
    vi -= (nij / n) * (std::log(nij / a) + std::log(nij / b));
  }
  return std::max(vi, 0.0);
}

/// Sum of Mirkin distances from `c` to every ensemble member.
inline std::int64_t total_mirkin(const Partition& c,
                                 std::span<const Partition> ensemble) {
  if (ensemble.empty()) throw Error("total_mirkin needs a non-empty ensemble");
  std::int64_t total = 0;
  for (const auto& p : ensemble) total += mirkin_contingency(c, p);
  return total;
}

}  // namespace medcons
