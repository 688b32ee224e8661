#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "metaeval/error.hpp"
#include "metaeval/kendall.hpp"
#include "metaeval/random.hpp"
#include "oracles.hpp"

using namespace metaeval;
using namespace metaeval::oracles;

namespace {


std::vector<double> random_vector(Rng& rng, std::size_t n, std::uint64_t levels) {
  std::vector<double> v(n);
  for (auto& x : v) x = static_cast<double>(rng.below(levels));
  return v;
}

}  // namespace

TEST(KendallTau, IdentityAndReversal) {
  const std::vector<double> x = {1, 2, 3};
  const std::vector<double> rev = {3, 2, 1};
  EXPECT_EQ(kendall_tau(x, x).tau, 1.0);
  EXPECT_EQ(kendall_tau(x, rev).tau, -1.0);
}

TEST(KendallTau, MergeCountMatchesBruteForceWithTies) {
  Rng rng(101);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t n = 2 + rng.below(49);
    const auto x = random_vector(rng, n, 1 + rng.below(10));
    const auto y = random_vector(rng, n, 1 + rng.below(10));
    const auto b = brute_force(x, y);
    const auto c = count_pairs(x, y);
    ASSERT_EQ(c.concordant_minus_discordant, b.s);
    ASSERT_EQ(c.x_tied, b.x_tied);
    ASSERT_EQ(c.y_tied, b.y_tied);
    const auto r = kendall_tau(x, y);
    if (b.x_tied < c.pairs && b.y_tied < c.pairs) {
      ASSERT_FALSE(r.degenerate);
      ASSERT_EQ(r.tau, b.tau);
    } else {
      ASSERT_TRUE(r.degenerate);
    }
  }
}

TEST(KendallTau, LengthThirtyWithoutTies) {
  Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> x(30);
    std::vector<double> y(30);
    for (auto& v : x) v = rng.uniform();
    for (auto& v : y) v = rng.uniform();
    EXPECT_EQ(kendall_tau(x, y).tau, brute_force(x, y).tau);
  }
}

TEST(KendallTau, SymmetricInItsArguments) {
  Rng rng(8);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + rng.below(30);
    const auto x = random_vector(rng, n, 5);
    const auto y = random_vector(rng, n, 5);
    const auto a = kendall_tau(x, y);
    const auto b = kendall_tau(y, x);
    if (a.degenerate) {
      EXPECT_TRUE(b.degenerate);
      continue;
    }
    EXPECT_EQ(a.tau, b.tau);
    EXPECT_EQ(a.p_value, b.p_value);
    EXPECT_GE(a.p_value, 0.0);
    EXPECT_LE(a.p_value, 1.0);
    EXPECT_GE(a.tau, -1.0);
    EXPECT_LE(a.tau, 1.0);
  }
}

TEST(KendallTau, InvariantUnderStrictlyIncreasingTransforms) {
  Rng rng(9);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 3 + rng.below(30);
    auto x = random_vector(rng, n, 6);
    const auto y = random_vector(rng, n, 6);
    auto cubed = x;
    for (auto& v : cubed) v = v * v * v + 2.0;
    const auto a = kendall_tau(x, y);
    const auto b = kendall_tau(cubed, y);
    EXPECT_EQ(a.degenerate, b.degenerate);
    if (!a.degenerate) {
      EXPECT_EQ(a.tau, b.tau);
      EXPECT_EQ(a.p_value, b.p_value);
    }
  }
}

// Small n without ties: the p-value is the share of all n! permutations whose
// |S| is at least the observed one.
TEST(KendallTau, ExactPValueMatchesPermutationEnumeration) {
  Rng rng(10);
  for (std::size_t n = 2; n <= 7; ++n) {
    std::vector<double> base(n);
    std::iota(base.begin(), base.end(), 0.0);
    for (int trial = 0; trial < 10; ++trial) {
      auto y = base;
      rng.shuffle(y.begin(), y.end());
      const auto observed = std::llabs(brute_force(base, y).s);
      auto perm = base;
      std::size_t extreme = 0;
      std::size_t total = 0;
      do {
        ++total;
        if (std::llabs(brute_force(base, perm).s) >= observed) ++extreme;
      } while (std::next_permutation(perm.begin(), perm.end()));
      EXPECT_NEAR(kendall_tau(base, y).p_value, static_cast<double>(extreme) / total, 1e-12) << "n=" << n;
    }
  }
}

// Reference values from scipy.stats.kendalltau; method "exact" below ten
// observations without ties and "asymptotic" otherwise.
TEST(KendallTau, MatchesScipy) {
  struct Case {
    std::vector<double> x;
    std::vector<double> y;
    double tau;
    double p;
  };
  const std::vector<Case> cases = {
      {{17, 86, 60, 77, 47, 3, 70, 87, 88, 92}, {70, 29, 85, 61, 80, 34, 60, 31, 73, 66}, -0.06666666666666667,
       0.788446734264471},
      {{17, 86, 60, 77, 47, 3, 70, 47, 88, 92}, {70, 29, 85, 61, 80, 34, 60, 31, 73, 66}, 0.04494665749754947,
       0.8574624419592412},
      {{1, 2, 3, 4, 5}, {2, 1, 4, 3, 5}, 0.6, 0.23333333333333334},
      {{1, 2, 3, 4, 5, 6, 7, 8, 9}, {9, 1, 8, 2, 7, 3, 6, 4, 5}, -0.1111111111111111, 0.761414241622575},
      {{3, 1, 4, 1, 5, 9, 2, 6, 5, 3, 5, 8}, {2, 7, 1, 8, 2, 8, 1, 8, 2, 8, 4, 5}, 0.17109647770728875,
       0.4732837191521063},
      {{1, 1, 2, 2, 3, 3}, {1, 2, 1, 2, 1, 2}, 0.0, 1.0},
      {{0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17, 18, 19},
       {0, 1, 4, 2, 2, 4, 1, 0, 1, 4, 2, 2, 4, 1, 0, 1, 4, 2, 2, 4}, 0.16155793605536828, 0.3608158770840827},
  };
  for (const auto& c : cases) {
    const auto r = kendall_tau(c.x, c.y);
    EXPECT_NEAR(r.tau, c.tau, 1e-12);
    EXPECT_NEAR(r.p_value, c.p, 1e-9);
  }
}

TEST(KendallTau, ConstantSideIsDegenerate) {
  const std::vector<double> x = {1, 1, 1, 1};
  const std::vector<double> y = {1, 2, 3, 4};
  const auto r = kendall_tau(x, y);
  EXPECT_TRUE(r.degenerate);
  EXPECT_TRUE(std::isnan(r.tau));
  EXPECT_TRUE(kendall_tau(y, x).degenerate);
}

TEST(KendallTau, BadInputsAreErrors) {
  const std::vector<double> one = {1};
  const std::vector<double> two = {1, 2};
  const std::vector<double> three = {1, 2, 3};
  const std::vector<double> bad = {1, std::nan("")};
  EXPECT_THROW(kendall_tau(one, one), ValidationError);
  EXPECT_THROW(kendall_tau(two, three), ValidationError);
  EXPECT_THROW(kendall_tau(bad, two), ValidationError);
}
