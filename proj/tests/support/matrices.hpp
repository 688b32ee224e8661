#pragma once

#include <string>
#include <vector>

#include "metaeval/scores.hpp"

namespace metaeval::fixtures {

// columns[m][c]; candidate ids are c0, c1, ...
inline ScoreMatrix make_matrix(std::string doc_id, std::vector<std::vector<double>> columns) {
  ScoreMatrix m;
  m.doc_id = std::move(doc_id);
  const std::size_t n = columns.empty() ? 0 : columns[0].size();
  for (std::size_t c = 0; c < n; ++c) m.candidate_ids.push_back("c" + std::to_string(c));
  m.raw = std::move(columns);
  return m;
}

inline ScoreSet make_scores(std::vector<std::string> metrics, std::vector<ScoreMatrix> documents,
                            bool normalized = true) {
  ScoreSet s;
  s.metrics = std::move(metrics);
  s.documents = std::move(documents);
  if (normalized) normalize(s);
  return s;
}

}  // namespace metaeval::fixtures
