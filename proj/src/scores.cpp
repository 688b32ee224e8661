#include "metaeval/scores.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>

#include "metaeval/error.hpp"
#include "metaeval/log.hpp"

namespace metaeval {

std::size_t ScoreSet::metric_index(std::string_view name) const {
  auto it = std::find(metrics.begin(), metrics.end(), name);
  return static_cast<std::size_t>(it - metrics.begin());
}

std::size_t ScoreSet::document_index(std::string_view doc_id) const {
  auto it = std::find_if(documents.begin(), documents.end(), [&](const ScoreMatrix& m) { return m.doc_id == doc_id; });
  return static_cast<std::size_t>(it - documents.begin());
}

std::size_t ScoreSet::candidate_total() const {
  std::size_t n = 0;
  for (const auto& d : documents) n += d.candidate_count();
  return n;
}

void validate_rectangular(const ScoreSet& scores) {
  std::vector<std::string> sorted = scores.metrics;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw ValidationError("metric names are not unique");
  }
  std::size_t gaps = 0;
  std::string first_gap;
  for (const auto& doc : scores.documents) {
    if (doc.raw.size() != scores.metrics.size()) {
      throw ValidationError("document '" + doc.doc_id + "' has " + std::to_string(doc.raw.size()) +
                            " metric columns, expected " + std::to_string(scores.metrics.size()));
    }
    for (std::size_t m = 0; m < doc.raw.size(); ++m) {
      if (doc.raw[m].size() != doc.candidate_count()) {
        throw ValidationError("document '" + doc.doc_id + "', metric " + scores.metrics[m] + ": column length " +
                              std::to_string(doc.raw[m].size()) + " != " + std::to_string(doc.candidate_count()));
      }
      for (std::size_t c = 0; c < doc.candidate_count(); ++c) {
        if (!std::isfinite(doc.raw[m][c])) {
          if (gaps++ == 0) first_gap = doc.doc_id + "/" + doc.candidate_ids[c] + "/" + scores.metrics[m];
        }
      }
    }
  }
  if (gaps > 0) {
    throw ValidationError(std::to_string(gaps) + " missing score cell(s), first at " + first_gap);
  }
}

void normalize(ScoreMatrix& matrix) {
  const std::size_t n = matrix.candidate_count();
  if (n < 2) {
    throw ValidationError("document '" + matrix.doc_id + "' has " + std::to_string(n) +
                          " candidate(s); normalization needs at least 2");
  }
  matrix.normalized.assign(matrix.raw.size(), std::vector<double>(n, 0.5));
  for (std::size_t m = 0; m < matrix.raw.size(); ++m) {
    const auto& col = matrix.raw[m];
    auto [lo_it, hi_it] = std::minmax_element(col.begin(), col.end());
    const double lo = *lo_it;
    const double hi = *hi_it;
    if (hi > lo) {
      for (std::size_t c = 0; c < n; ++c) matrix.normalized[m][c] = (col[c] - lo) / (hi - lo);
    }
  }
  matrix.mean_normalized.assign(n, 0.0);
  if (matrix.raw.empty()) return;
  for (std::size_t c = 0; c < n; ++c) {
    double sum = 0.0;
    for (const auto& col : matrix.normalized) sum += col[c];
    matrix.mean_normalized[c] = sum / static_cast<double>(matrix.raw.size());
  }
}

void normalize(ScoreSet& scores) {
  for (auto& doc : scores.documents) normalize(doc);
}

namespace {

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    auto comma = line.find(',', start);
    fields.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

std::optional<double> parse_real(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty() || !std::isfinite(v)) return std::nullopt;
  return v;
}

}  // namespace

ExternalScoreReport merge_external_scores(std::istream& in, const std::string& metric_name, ScoreSet& scores,
                                          std::string_view source) {
  if (metric_name.empty()) throw ValidationError("external metric needs a name");
  if (scores.metric_index(metric_name) != scores.metrics.size()) {
    throw ValidationError("metric '" + metric_name + "' is already registered");
  }

  // Candidate lookup per document.
  std::map<std::string, std::size_t, std::less<>> doc_index;
  std::vector<std::map<std::string, std::size_t, std::less<>>> candidate_index(scores.documents.size());
  for (std::size_t d = 0; d < scores.documents.size(); ++d) {
    doc_index.emplace(scores.documents[d].doc_id, d);
    const auto& ids = scores.documents[d].candidate_ids;
    for (std::size_t c = 0; c < ids.size(); ++c) candidate_index[d].emplace(ids[c], c);
  }

  std::vector<std::vector<double>> column(scores.documents.size());
  for (std::size_t d = 0; d < scores.documents.size(); ++d) {
    column[d].assign(scores.documents[d].candidate_count(), std::nan(""));
  }

  ExternalScoreReport report;
  std::string line;
  std::size_t line_no = 0;
  bool seen_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto where = std::string(source) + ":" + std::to_string(line_no) + ": ";
    auto fields = split_csv(line);
    if (!seen_header) {
      if (fields.size() != 3 || fields[0] != "doc_id" || fields[1] != "candidate_id" || fields[2] != "score") {
        throw ValidationError(where + "expected header doc_id,candidate_id,score");
      }
      seen_header = true;
      continue;
    }
    if (fields.size() != 3) throw ValidationError(where + "expected 3 fields");
    auto doc_it = doc_index.find(fields[0]);
    if (doc_it == doc_index.end()) {
      throw ValidationError(where + "unknown document '" + std::string(fields[0]) + "'");
    }
    const std::size_t d = doc_it->second;
    auto it = candidate_index[d].find(fields[1]);
    if (it == candidate_index[d].end()) {
      throw ValidationError(where + "unknown candidate '" + std::string(fields[1]) + "' in document '" +
                            std::string(fields[0]) + "'");
    }
    auto value = parse_real(fields[2]);
    if (!value) throw ValidationError(where + "score is not a finite decimal number");
    double& cell = column[d][it->second];
    if (!std::isnan(cell)) {
      ++report.duplicate_rows;
      log_warning(where + "duplicate row for " + std::string(fields[0]) + "/" + std::string(fields[1]) +
                  ", keeping the later value");
    }
    cell = *value;
    ++report.rows;
  }
  if (in.bad()) throw IoError("error reading " + std::string(source));
  if (!seen_header) throw ValidationError(std::string(source) + ": missing header doc_id,candidate_id,score");

  std::size_t gaps = 0;
  std::string first_gap;
  for (std::size_t d = 0; d < column.size(); ++d) {
    for (std::size_t c = 0; c < column[d].size(); ++c) {
      if (std::isnan(column[d][c]) && gaps++ == 0) {
        first_gap = scores.documents[d].doc_id + "/" + scores.documents[d].candidate_ids[c];
      }
    }
  }
  if (gaps > 0) {
    throw ValidationError(std::string(source) + ": " + std::to_string(gaps) + " candidate(s) without a '" +
                          metric_name + "' score, first missing: " + first_gap);
  }

  scores.metrics.push_back(metric_name);
  for (std::size_t d = 0; d < scores.documents.size(); ++d) {
    auto& doc = scores.documents[d];
    doc.raw.push_back(std::move(column[d]));
    doc.normalized.clear();
    doc.mean_normalized.clear();
  }
  validate_rectangular(scores);
  return report;
}

ExternalScoreReport load_external_scores(const std::filesystem::path& path, const std::string& metric_name,
                                         ScoreSet& scores) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open external score file " + path.string());
  return merge_external_scores(in, metric_name, scores, path.string());
}

}  // namespace metaeval
