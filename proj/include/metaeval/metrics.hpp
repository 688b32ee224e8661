#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "metaeval/corpus.hpp"

namespace metaeval {

// Metrics computed in-process. Every one is a recall-oriented similarity in
// [0, 1] with higher meaning closer to the reference.
enum class NativeMetric { R1, R2, RL, JS2 };

inline constexpr NativeMetric kNativeMetrics[] = {NativeMetric::R1, NativeMetric::R2, NativeMetric::RL,
                                                  NativeMetric::JS2};

std::string_view metric_name(NativeMetric metric);
std::optional<NativeMetric> parse_native_metric(std::string_view name);

// Clipped n-gram recall, n in {1, 2}. Throws if the reference has no n-grams.
double rouge_n(std::span<const TokenId> candidate, std::span<const TokenId> reference, int n);

// LCS(candidate, reference) / |reference|. Throws on an empty reference.
double rouge_l(std::span<const TokenId> candidate, std::span<const TokenId> reference);

// 1 - JSD between the bigram distributions, base-2 logarithms. Throws if
// either side has no bigram.
double js2(std::span<const TokenId> candidate, std::span<const TokenId> reference);

std::size_t lcs_length(std::span<const TokenId> a, std::span<const TokenId> b);

// Sorted (key, count) pairs for unigrams or bigrams, packed into 64 bits.
using PackedBag = std::vector<std::pair<std::uint64_t, std::uint32_t>>;
PackedBag packed_ngrams(std::span<const TokenId> tokens, int n);

// Precomputes the reference side so repeated scoring (the generator's fitness
// loop, bulk scoring) only pays for the candidate.
//
// A candidate with no bigram scores 0 under JS2 here rather than throwing:
// there is no distribution to compare, and the pool must stay rectangular.
class ReferenceScorer {
 public:
  explicit ReferenceScorer(std::span<const TokenId> reference);

  double score(NativeMetric metric, std::span<const TokenId> candidate) const;

 private:
  TokenSeq reference_;
  PackedBag unigrams_;
  PackedBag bigrams_;
};

}  // namespace metaeval
