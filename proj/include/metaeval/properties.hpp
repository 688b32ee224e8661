#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "metaeval/corpus.hpp"
#include "metaeval/scores.hpp"

namespace metaeval {

struct PropertyRecord {
  std::string doc_id;
  double eos = 0.0;
  double abstractiveness = 0.0;
  double coverage = 0.0;
};

enum class Property { eos, abstractiveness, coverage };
std::string_view property_name(Property p);

// How each metric is brought into [0, 1] before taking its per-document
// maximum. `theoretical_range` clamps raw scores to [0, 1] (the native metrics
// already live there); `per_document_minmax` uses the normalized matrix, which
// pins every maximum to 1.
enum class EosScale { theoretical_range, per_document_minmax };

// Mean over metrics of the best score any candidate received.
double eos(const ScoreMatrix& matrix, EosScale scale = EosScale::theoretical_range);

// 1 - |Voc(d) ∩ Voc(r)| / |Voc(r)|.
double abstractiveness(const Document& doc, const Reference& ref);

struct Fragment {
  std::size_t start_in_reference = 0;
  std::size_t start_in_document = 0;
  std::size_t length = 0;
};

// Greedy left-to-right scan of the reference. At each position the longest
// document run matching there becomes a fragment (earliest document position
// on ties) and the scan jumps past it; unmatched tokens advance by one.
std::vector<Fragment> extractive_fragments(std::span<const TokenId> doc_tokens, std::span<const TokenId> ref_tokens);

// Share of reference tokens inside extractive fragments.
double coverage(std::span<const TokenId> doc_tokens, std::span<const TokenId> ref_tokens);

PropertyRecord compute_properties(const Document& doc, const Reference& ref, const ScoreMatrix& matrix,
                                  EosScale scale = EosScale::theoretical_range);

// Trailing window mean; entries before the window fills are empty.
std::vector<std::optional<double>> moving_average(std::span<const double> values, std::size_t window);

// 10 points for corpora under 1000 documents, else 100.
std::size_t default_trend_window(std::size_t documents);

struct ScatterRow {
  std::string doc_id;
  double property_value = 0.0;
  double tau = 0.0;
  std::optional<double> trend;  // moving average of tau over rows sorted by property value
};

struct Scatter {
  std::string metric_a;
  std::string metric_b;
  Property property = Property::coverage;
  std::vector<ScatterRow> rows;  // ascending property value, then doc id
  std::size_t omitted = 0;       // documents without a significant tau
};

// One row per document whose full-pool Kendall tau between the two metrics is
// significant at `alpha`. `records` and `scores.documents` are matched by doc id.
Scatter property_scatter(const std::vector<PropertyRecord>& records, const ScoreSet& scores, Property property,
                         std::string_view metric_a, std::string_view metric_b, double alpha = 0.05,
                         std::size_t window = 0);

}  // namespace metaeval
