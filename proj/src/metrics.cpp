#include "metaeval/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "metaeval/error.hpp"

namespace metaeval {

namespace {

std::uint64_t pack(TokenId a, TokenId b) { return (static_cast<std::uint64_t>(a) << 32) | b; }

std::uint32_t total_count(const PackedBag& bag) {
  std::uint32_t total = 0;
  for (const auto& [key, count] : bag) total += count;
  return total;
}

std::uint32_t clipped_overlap(const PackedBag& cand, const PackedBag& ref) {
  std::uint32_t hits = 0;
  auto c = cand.begin();
  auto r = ref.begin();
  while (c != cand.end() && r != ref.end()) {
    if (c->first < r->first) {
      ++c;
    } else if (r->first < c->first) {
      ++r;
    } else {
      hits += std::min(c->second, r->second);
      ++c;
      ++r;
    }
  }
  return hits;
}

double recall(const PackedBag& cand, const PackedBag& ref) {
  return static_cast<double>(clipped_overlap(cand, ref)) / static_cast<double>(total_count(ref));
}

// Both bags non-empty.
double js_similarity(const PackedBag& cand, const PackedBag& ref) {
  const double cand_total = total_count(cand);
  const double ref_total = total_count(ref);
  // Per support element: p*log2(2p/(p+q)) + q*log2(2q/(p+q)), halved at the end.
  double divergence = 0.0;
  auto term = [](double x, double mix) { return x > 0.0 ? x * std::log2(x / mix) : 0.0; };
  auto c = cand.begin();
  auto r = ref.begin();
  while (c != cand.end() || r != ref.end()) {
    double p = 0.0;
    double q = 0.0;
    if (r == ref.end() || (c != cand.end() && c->first < r->first)) {
      p = c->second / cand_total;
      ++c;
    } else if (c == cand.end() || r->first < c->first) {
      q = r->second / ref_total;
      ++r;
    } else {
      p = c->second / cand_total;
      q = r->second / ref_total;
      ++c;
      ++r;
    }
    const double mix = 0.5 * (p + q);
    divergence += term(p, mix) + term(q, mix);
  }
  divergence *= 0.5;
  return std::clamp(1.0 - divergence, 0.0, 1.0);
}

}  // namespace

std::string_view metric_name(NativeMetric metric) {
  switch (metric) {
    case NativeMetric::R1: return "R1";
    case NativeMetric::R2: return "R2";
    case NativeMetric::RL: return "RL";
    case NativeMetric::JS2: return "JS2";
  }
  return "?";
}

std::optional<NativeMetric> parse_native_metric(std::string_view name) {
  for (auto m : kNativeMetrics) {
    if (metric_name(m) == name) return m;
  }
  return std::nullopt;
}

PackedBag packed_ngrams(std::span<const TokenId> tokens, int n) {
  if (n != 1 && n != 2) throw ValidationError("packed n-grams support n = 1 or 2");
  std::vector<std::uint64_t> keys;
  if (tokens.size() >= static_cast<std::size_t>(n)) {
    keys.reserve(tokens.size());
    for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
      keys.push_back(n == 1 ? tokens[i] : pack(tokens[i], tokens[i + 1]));
    }
  }
  std::sort(keys.begin(), keys.end());
  PackedBag bag;
  for (auto key : keys) {
    if (!bag.empty() && bag.back().first == key) {
      ++bag.back().second;
    } else {
      bag.emplace_back(key, 1);
    }
  }
  return bag;
}

double rouge_n(std::span<const TokenId> candidate, std::span<const TokenId> reference, int n) {
  if (n != 1 && n != 2) throw ValidationError("ROUGE-N supports n = 1 or 2, got " + std::to_string(n));
  auto ref = packed_ngrams(reference, n);
  if (ref.empty()) throw ValidationError("reference has no " + std::to_string(n) + "-grams");
  return recall(packed_ngrams(candidate, n), ref);
}

std::size_t lcs_length(std::span<const TokenId> a, std::span<const TokenId> b) {
  if (a.empty() || b.empty()) return 0;
  std::vector<std::size_t> prev(b.size() + 1, 0);
  std::vector<std::size_t> cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

double rouge_l(std::span<const TokenId> candidate, std::span<const TokenId> reference) {
  if (reference.empty()) throw ValidationError("ROUGE-L needs a non-empty reference");
  return static_cast<double>(lcs_length(candidate, reference)) / static_cast<double>(reference.size());
}

double js2(std::span<const TokenId> candidate, std::span<const TokenId> reference) {
  auto cand = packed_ngrams(candidate, 2);
  auto ref = packed_ngrams(reference, 2);
  if (cand.empty()) throw ValidationError("JS-2: candidate has no bigrams");
  if (ref.empty()) throw ValidationError("JS-2: reference has no bigrams");
  return js_similarity(cand, ref);
}

ReferenceScorer::ReferenceScorer(std::span<const TokenId> reference)
    : reference_(reference.begin(), reference.end()),
      unigrams_(packed_ngrams(reference, 1)),
      bigrams_(packed_ngrams(reference, 2)) {
  if (bigrams_.empty()) throw ValidationError("reference needs at least two tokens to be scored");
}

double ReferenceScorer::score(NativeMetric metric, std::span<const TokenId> candidate) const {
  switch (metric) {
    case NativeMetric::R1:
      return recall(packed_ngrams(candidate, 1), unigrams_);
    case NativeMetric::R2:
      return recall(packed_ngrams(candidate, 2), bigrams_);
    case NativeMetric::RL:
      return static_cast<double>(lcs_length(candidate, reference_)) / static_cast<double>(reference_.size());
    case NativeMetric::JS2: {
      auto cand = packed_ngrams(candidate, 2);
      return cand.empty() ? 0.0 : js_similarity(cand, bigrams_);
    }
  }
  return 0.0;
}

}  // namespace metaeval
