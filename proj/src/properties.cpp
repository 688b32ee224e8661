#include "metaeval/properties.hpp"

#include <algorithm>
#include <map>

#include "metaeval/analysis.hpp"
#include "metaeval/error.hpp"

namespace metaeval {

std::string_view property_name(Property p) {
  switch (p) {
    case Property::eos: return "eos";
    case Property::abstractiveness: return "abstractiveness";
    case Property::coverage: return "coverage";
  }
  return "?";
}

double eos(const ScoreMatrix& matrix, EosScale scale) {
  if (matrix.candidate_count() == 0) throw ValidationError("EoS of '" + matrix.doc_id + "': empty candidate pool");
  if (matrix.metric_count() == 0) throw ValidationError("EoS of '" + matrix.doc_id + "': no metrics");
  const auto& columns = scale == EosScale::per_document_minmax ? matrix.normalized : matrix.raw;
  if (columns.size() != matrix.metric_count()) {
    throw ValidationError("EoS of '" + matrix.doc_id + "': matrix is not normalized");
  }
  double sum = 0.0;
  for (const auto& col : columns) {
    double best = *std::max_element(col.begin(), col.end());
    sum += std::clamp(best, 0.0, 1.0);
  }
  return sum / static_cast<double>(columns.size());
}

double abstractiveness(const Document& doc, const Reference& ref) {
  if (ref.vocab.empty()) throw ValidationError("abstractiveness of '" + ref.doc_id + "': empty reference vocabulary");
  auto doc_vocab = doc.all_tokens();
  std::sort(doc_vocab.begin(), doc_vocab.end());
  doc_vocab.erase(std::unique(doc_vocab.begin(), doc_vocab.end()), doc_vocab.end());
  std::vector<TokenId> shared;
  std::set_intersection(doc_vocab.begin(), doc_vocab.end(), ref.vocab.begin(), ref.vocab.end(),
                        std::back_inserter(shared));
  return 1.0 - static_cast<double>(shared.size()) / static_cast<double>(ref.vocab.size());
}

std::vector<Fragment> extractive_fragments(std::span<const TokenId> doc_tokens, std::span<const TokenId> ref_tokens) {
  std::vector<Fragment> fragments;
  std::size_t i = 0;
  while (i < ref_tokens.size()) {
    Fragment best;
    for (std::size_t j = 0; j < doc_tokens.size(); ++j) {
      std::size_t len = 0;
      while (i + len < ref_tokens.size() && j + len < doc_tokens.size() && ref_tokens[i + len] == doc_tokens[j + len]) {
        ++len;
      }
      if (len > best.length) {
        best = {i, j, len};
        if (i + len == ref_tokens.size()) break;  // cannot be beaten
      }
    }
    if (best.length == 0) {
      ++i;
    } else {
      fragments.push_back(best);
      i += best.length;
    }
  }
  return fragments;
}

double coverage(std::span<const TokenId> doc_tokens, std::span<const TokenId> ref_tokens) {
  if (ref_tokens.empty()) throw ValidationError("coverage needs a non-empty reference");
  std::size_t covered = 0;
  for (const auto& f : extractive_fragments(doc_tokens, ref_tokens)) covered += f.length;
  return static_cast<double>(covered) / static_cast<double>(ref_tokens.size());
}

PropertyRecord compute_properties(const Document& doc, const Reference& ref, const ScoreMatrix& matrix,
                                  EosScale scale) {
  PropertyRecord rec;
  rec.doc_id = doc.id;
  rec.eos = eos(matrix, scale);
  rec.abstractiveness = abstractiveness(doc, ref);
  rec.coverage = coverage(doc.all_tokens(), ref.tokens);
  return rec;
}

std::vector<std::optional<double>> moving_average(std::span<const double> values, std::size_t window) {
  if (window == 0) throw ValidationError("moving-average window must be at least 1");
  std::vector<std::optional<double>> out(values.size());
  for (std::size_t i = window - 1; i < values.size(); ++i) {
    double sum = 0.0;
    for (std::size_t k = i + 1 - window; k <= i; ++k) sum += values[k];
    out[i] = sum / static_cast<double>(window);
  }
  return out;
}

std::size_t default_trend_window(std::size_t documents) { return documents < 1000 ? 10 : 100; }

Scatter property_scatter(const std::vector<PropertyRecord>& records, const ScoreSet& scores, Property property,
                         std::string_view metric_a, std::string_view metric_b, double alpha, std::size_t window) {
  const auto a = scores.metric_index(metric_a);
  const auto b = scores.metric_index(metric_b);
  if (a == scores.metrics.size()) throw ValidationError("unknown metric '" + std::string(metric_a) + "'");
  if (b == scores.metrics.size()) throw ValidationError("unknown metric '" + std::string(metric_b) + "'");

  std::map<std::string_view, const PropertyRecord*> by_doc;
  for (const auto& r : records) by_doc.emplace(r.doc_id, &r);

  Scatter scatter;
  scatter.metric_a = metric_a;
  scatter.metric_b = metric_b;
  scatter.property = property;
  for (const auto& doc : scores.documents) {
    auto it = by_doc.find(doc.doc_id);
    if (it == by_doc.end()) {
      throw ValidationError("no property record for document '" + doc.doc_id + "'");
    }
    if (doc.candidate_count() < 2) {
      ++scatter.omitted;
      continue;
    }
    auto result = kendall_tau(doc.raw[a], doc.raw[b]);
    if (result.degenerate || !(result.p_value < alpha)) {
      ++scatter.omitted;
      continue;
    }
    const auto& rec = *it->second;
    double value = property == Property::eos ? rec.eos
                   : property == Property::abstractiveness ? rec.abstractiveness
                                                           : rec.coverage;
    scatter.rows.push_back({doc.doc_id, value, result.tau, std::nullopt});
  }
  std::sort(scatter.rows.begin(), scatter.rows.end(), [](const ScatterRow& x, const ScatterRow& y) {
    return x.property_value != y.property_value ? x.property_value < y.property_value : x.doc_id < y.doc_id;
  });
  if (window == 0) window = default_trend_window(scores.documents.size());
  std::vector<double> taus;
  for (const auto& r : scatter.rows) taus.push_back(r.tau);
  auto trend = moving_average(taus, window);
  for (std::size_t i = 0; i < scatter.rows.size(); ++i) scatter.rows[i].trend = trend[i];
  return scatter;
}

}  // namespace metaeval
