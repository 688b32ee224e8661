#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "metaeval/corpus.hpp"
#include "metaeval/metrics.hpp"

namespace metaeval {

// An extractive summary: a non-empty set of sentence indices of one document.
struct Candidate {
  std::string doc_id;
  std::vector<std::uint32_t> sentence_indices;  // sorted, unique
  std::string candidate_id;
  TokenSeq tokens;  // sentences concatenated in document order
  std::size_t token_count = 0;
};

// Canonical id for a sorted index set, e.g. {0, 3, 7} -> "0-3-7".
std::string candidate_id_for(std::span<const std::uint32_t> sorted_indices);
std::vector<std::uint32_t> parse_candidate_id(std::string_view id);

// Throws ValidationError if an index is out of range or the set is empty.
Candidate make_candidate(const Document& doc, std::vector<std::uint32_t> sentence_indices);

struct GenConfig {
  std::size_t population_size = 100;
  std::size_t generations = 50;
  std::optional<double> mutation_rate;  // unset: 1 / number of sentences
  std::size_t tournament_size = 2;
  double elite_fraction = 0.1;
  std::size_t token_budget = 100;
  bool budget_from_reference = false;  // use |reference tokens| as the budget
  std::uint64_t seed = 0;

  void validate() const;
};

struct GeneratedPool {
  std::vector<Candidate> candidates;       // final population, deduplicated
  std::vector<double> best_fitness;        // best of the initial population, then after each generation
  std::size_t evaluations = 0;
};

// Evolves sentence-inclusion masks towards `metric(candidate, reference)` and
// returns the deduplicated final population. Deterministic in (doc, ref,
// metric, cfg). Throws ValidationError if no sentence fits the budget or if
// `metric_name` is not a native metric.
GeneratedPool generate_pool(const Document& doc, const Reference& ref, NativeMetric metric, const GenConfig& cfg);
GeneratedPool generate_pool(const Document& doc, const Reference& ref, std::string_view metric_name,
                            const GenConfig& cfg);

struct StoredCandidate {
  std::vector<std::uint32_t> sentence_indices;
  std::string candidate_id;
  std::vector<std::string> provenance;  // metrics whose pool produced it, in request order
};

struct DocumentPool {
  std::string doc_id;
  std::vector<StoredCandidate> candidates;  // sorted by sentence index set
  std::size_t generated = 0;                // pool sizes summed before cross-metric dedup
};

struct CandidateStore {
  std::vector<DocumentPool> documents;
  std::vector<std::pair<std::string, std::string>> skipped;  // (doc id, reason)
};

// Runs generate_pool for every (document, metric) and merges per document.
// Documents whose generation fails are skipped and listed, not fatal.
CandidateStore generate_all(const Corpus& corpus, const std::vector<NativeMetric>& metrics, const GenConfig& cfg,
                            std::size_t jobs = 1);

}  // namespace metaeval
