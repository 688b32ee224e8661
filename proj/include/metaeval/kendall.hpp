#pragma once

#include <cstdint>
#include <span>

namespace metaeval {

// Pair statistics behind tau-b. `x_tied`/`y_tied` count pairs tied in x (resp.
// y), joint ties included. The *_t2/*_t3 sums are Σ t(t-1)(2t+5) and
// Σ t(t-1)(t-2) over tie groups, used by the variance of S.
struct PairCounts {
  std::int64_t n = 0;
  std::int64_t pairs = 0;  // n(n-1)/2
  std::int64_t concordant_minus_discordant = 0;
  std::int64_t x_tied = 0;
  std::int64_t y_tied = 0;
  double x_t2 = 0.0;
  double y_t2 = 0.0;
  double x_t3 = 0.0;
  double y_t3 = 0.0;
};

struct TauResult {
  double tau = 0.0;
  double p_value = 1.0;
  bool degenerate = false;  // one side is constant; tau undefined
};

// O(n log n) pair counting (Knight's merge-sort method).
PairCounts count_pairs(std::span<const double> x, std::span<const double> y);

// Tau-b from pair counts: S / sqrt((pairs - x_tied) * (pairs - y_tied)).
double tau_b(const PairCounts& counts);

// Two-sided p-value: the exact permutation distribution for n < 10 without
// ties, otherwise the tie-corrected normal approximation of S.
double tau_p_value(const PairCounts& counts);

// Throws ValidationError on length mismatch, length < 2 or non-finite input.
TauResult kendall_tau(std::span<const double> x, std::span<const double> y);

}  // namespace metaeval
