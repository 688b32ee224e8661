#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "metaeval/analysis.hpp"
#include "metaeval/generator.hpp"
#include "metaeval/properties.hpp"
#include "metaeval/scores.hpp"

namespace metaeval {

// Provenance lines written as `# key=value` at the top of every output.
struct Provenance {
  std::string kind;         // e.g. "candidate-store"
  std::string config_hash;  // hash of the stage configuration
  std::string upstream_hash;
  std::uint64_t seed = 0;
  std::string config_json;  // canonical serialized configuration
};

void write_provenance(std::ostream& out, const Provenance& p);
// Reads the leading comment block; throws ValidationError if `kind` differs.
Provenance read_provenance(std::istream& in, const std::string& expected_kind, const std::string& source);

std::string hex64(std::uint64_t v);
std::string format_real(double v, int digits = 10);
std::uint64_t file_digest(const std::filesystem::path& path);

void write_candidate_store(std::ostream& out, const CandidateStore& store, const Provenance& p);
CandidateStore read_candidate_store(std::istream& in, Provenance& p, const std::string& source);

// Raw columns, normalized columns and mean_normalized. Reading keeps the raw
// values and recomputes the normalization.
void write_score_set(std::ostream& out, const ScoreSet& scores, const Provenance& p);
ScoreSet read_score_set(std::istream& in, Provenance& p, const std::string& source);

void write_correlation_table(std::ostream& out, const CorrelationTable& table, const Provenance& p);
void write_disagreement(std::ostream& out, const std::vector<DisagreementCurve>& curves, const Provenance& p);
void write_curve(std::ostream& out, const Curve& curve, const Provenance& p);
void write_properties(std::ostream& out, const std::vector<PropertyRecord>& records, const Provenance& p);
void write_scatter(std::ostream& out, const std::vector<PropertyRecord>& records, const std::vector<Scatter>& scatters,
                   const Provenance& p);
void write_trend(std::ostream& out, const std::vector<Scatter>& scatters, const Provenance& p);

// Metric pair x bin layout with one column per partner metric, as a
// markdown table.
void write_correlation_markdown(std::ostream& out, const CorrelationTable& table,
                                const std::vector<std::string>& metrics);

}  // namespace metaeval
