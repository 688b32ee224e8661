#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace metaeval {

// Scores of one document's candidate pool. Storage is column-major:
// raw[m][c] is metric m on candidate c.
struct ScoreMatrix {
  std::string doc_id;
  std::vector<std::string> candidate_ids;
  std::vector<std::vector<double>> raw;
  std::vector<std::vector<double>> normalized;  // filled by normalize()
  std::vector<double> mean_normalized;          // filled by normalize()

  std::size_t candidate_count() const { return candidate_ids.size(); }
  std::size_t metric_count() const { return raw.size(); }
  bool is_normalized() const { return normalized.size() == raw.size() && !raw.empty(); }
};

// Score matrices for a whole corpus over one shared, ordered metric list.
struct ScoreSet {
  std::vector<std::string> metrics;
  std::vector<ScoreMatrix> documents;

  std::size_t metric_index(std::string_view name) const;  // metrics.size() if absent
  std::size_t document_index(std::string_view doc_id) const;  // documents.size() if absent
  std::size_t candidate_total() const;
};

// Throws ValidationError unless every document carries exactly one finite
// value per (candidate, metric).
void validate_rectangular(const ScoreSet& scores);

// Per-document, per-metric min-max scaling; a constant column maps to 0.5.
// Fills `normalized` and `mean_normalized`. Throws for a document with fewer
// than two candidates.
void normalize(ScoreMatrix& matrix);
void normalize(ScoreSet& scores);

// Outcome of merging an external score column.
struct ExternalScoreReport {
  std::size_t rows = 0;
  std::size_t duplicate_rows = 0;  // later rows overwrote earlier ones
};

// Reads `doc_id,candidate_id,score` rows (with that header) and appends a
// column named `metric_name`. Unknown documents or candidates, missing rows
// and clashing metric names throw ValidationError; normalized values are
// cleared and must be recomputed.
ExternalScoreReport merge_external_scores(std::istream& in, const std::string& metric_name, ScoreSet& scores,
                                          std::string_view source = "external scores");
ExternalScoreReport load_external_scores(const std::filesystem::path& path, const std::string& metric_name,
                                         ScoreSet& scores);

}  // namespace metaeval
