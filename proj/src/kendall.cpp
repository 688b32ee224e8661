#include "metaeval/kendall.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "metaeval/error.hpp"

namespace metaeval {

namespace {

// Counts inversions (strict) while sorting `v` ascending.
std::int64_t merge_count(std::vector<double>& v, std::vector<double>& scratch, std::size_t lo, std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::int64_t swaps = merge_count(v, scratch, lo, mid) + merge_count(v, scratch, mid, hi);
  std::size_t i = lo;
  std::size_t j = mid;
  std::size_t k = lo;
  while (i < mid && j < hi) {
    if (v[j] < v[i]) {
      swaps += static_cast<std::int64_t>(mid - i);
      scratch[k++] = v[j++];
    } else {
      scratch[k++] = v[i++];
    }
  }
  while (i < mid) scratch[k++] = v[i++];
  while (j < hi) scratch[k++] = v[j++];
  std::copy(scratch.begin() + static_cast<std::ptrdiff_t>(lo), scratch.begin() + static_cast<std::ptrdiff_t>(hi),
            v.begin() + static_cast<std::ptrdiff_t>(lo));
  return swaps;
}

struct TieStats {
  std::int64_t pairs = 0;
  double t2 = 0.0;
  double t3 = 0.0;

  void add_group(std::int64_t t) {
    if (t < 2) return;
    pairs += t * (t - 1) / 2;
    const double td = static_cast<double>(t);
    t2 += td * (td - 1.0) * (2.0 * td + 5.0);
    t3 += td * (td - 1.0) * (td - 2.0);
  }
};

// Tie groups of an ascending sequence.
TieStats tie_stats(const std::vector<double>& sorted) {
  TieStats stats;
  std::size_t start = 0;
  for (std::size_t i = 1; i <= sorted.size(); ++i) {
    if (i == sorted.size() || sorted[i] != sorted[start]) {
      stats.add_group(static_cast<std::int64_t>(i - start));
      start = i;
    }
  }
  return stats;
}

// Number of permutations of n elements by inversion count (Mahonian
// numbers), cached per n.
const std::vector<double>& mahonian(std::int64_t n) {
  thread_local std::vector<std::vector<double>> cache;
  if (cache.empty()) cache.push_back({1.0});  // n = 1
  while (static_cast<std::int64_t>(cache.size()) < n) {
    const auto& prev = cache.back();
    const std::size_t m = cache.size() + 1;  // inserting the m-th element adds 0..m-1 inversions
    std::vector<double> next(prev.size() + m - 1, 0.0);
    double window = 0.0;
    for (std::size_t k = 0; k < next.size(); ++k) {
      if (k < prev.size()) window += prev[k];
      if (k >= m && k - m < prev.size()) window -= prev[k - m];
      next[k] = window;
    }
    cache.push_back(std::move(next));
  }
  return cache[static_cast<std::size_t>(n - 1)];
}

constexpr std::int64_t kExactBelow = 10;

// Two-sided exact p-value for S without ties: permutations with at most
// c = min(D, pairs - D) inversions, doubled.
double exact_p_value(std::int64_t n, std::int64_t discordant, std::int64_t pairs) {
  const std::int64_t c = std::min(discordant, pairs - discordant);
  const auto& counts = mahonian(n);
  double total = 0.0;
  for (double v : counts) total += v;
  double tail = 0.0;
  for (std::int64_t k = 0; k <= c; ++k) tail += counts[static_cast<std::size_t>(k)];
  return std::min(1.0, 2.0 * tail / total);
}

}  // namespace

PairCounts count_pairs(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw ValidationError("kendall_tau: length mismatch (" + std::to_string(x.size()) + " vs " +
                          std::to_string(y.size()) + ")");
  }
  if (x.size() < 2) throw ValidationError("kendall_tau: need at least 2 observations");
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) throw ValidationError("kendall_tau: non-finite input");
  }

  const std::size_t n = x.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return x[a] != x[b] ? x[a] < x[b] : y[a] < y[b];
  });

  std::vector<double> xs(n);
  std::vector<double> ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = x[order[i]];
    ys[i] = y[order[i]];
  }

  TieStats x_ties = tie_stats(xs);
  std::int64_t joint = 0;
  std::size_t start = 0;
  for (std::size_t i = 1; i <= n; ++i) {
    if (i == n || xs[i] != xs[start] || ys[i] != ys[start]) {
      const auto t = static_cast<std::int64_t>(i - start);
      joint += t * (t - 1) / 2;
      start = i;
    }
  }

  std::vector<double> scratch(n);
  const std::int64_t swaps = merge_count(ys, scratch, 0, n);  // ys is now sorted
  TieStats y_ties = tie_stats(ys);

  PairCounts c;
  c.n = static_cast<std::int64_t>(n);
  c.pairs = c.n * (c.n - 1) / 2;
  c.x_tied = x_ties.pairs;
  c.y_tied = y_ties.pairs;
  c.concordant_minus_discordant = c.pairs - c.x_tied - c.y_tied + joint - 2 * swaps;
  c.x_t2 = x_ties.t2;
  c.y_t2 = y_ties.t2;
  c.x_t3 = x_ties.t3;
  c.y_t3 = y_ties.t3;
  return c;
}

double tau_b(const PairCounts& c) {
  const double denom =
      std::sqrt(static_cast<double>(c.pairs - c.x_tied) * static_cast<double>(c.pairs - c.y_tied));
  return static_cast<double>(c.concordant_minus_discordant) / denom;
}

double tau_p_value(const PairCounts& c) {
  if (c.x_tied == 0 && c.y_tied == 0 && c.n < kExactBelow) {
    const std::int64_t discordant = (c.pairs - c.concordant_minus_discordant) / 2;
    return exact_p_value(c.n, discordant, c.pairs);
  }
  const double n = static_cast<double>(c.n);
  const double m = n * (n - 1.0);
  double var = (m * (2.0 * n + 5.0) - c.x_t2 - c.y_t2) / 18.0 +
               2.0 * static_cast<double>(c.x_tied) * static_cast<double>(c.y_tied) / m;
  if (c.n > 2) var += c.x_t3 * c.y_t3 / (9.0 * m * (n - 2.0));
  if (!(var > 0.0)) return 1.0;
  return std::erfc(std::abs(static_cast<double>(c.concordant_minus_discordant)) / std::sqrt(var) / std::sqrt(2.0));
}

TauResult kendall_tau(std::span<const double> x, std::span<const double> y) {
  const auto counts = count_pairs(x, y);
  TauResult r;
  if (counts.x_tied == counts.pairs || counts.y_tied == counts.pairs) {
    r.degenerate = true;
    r.tau = std::nan("");
    r.p_value = 1.0;
    return r;
  }
  r.tau = tau_b(counts);
  r.p_value = tau_p_value(counts);
  return r;
}

}  // namespace metaeval
