#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "metaeval/kendall.hpp"
#include "metaeval/scores.hpp"

namespace metaeval {

// Low / medium / top third of a document's mean-score range.
enum class Bin : std::uint8_t { L, M, T };

struct BinAssignment {
  std::string doc_id;
  std::vector<Bin> labels;  // parallel to the matrix's candidates
  double lower_boundary = 0.0;  // L | M
  double upper_boundary = 0.0;  // M | T
  bool degenerate = false;      // constant mean scores; everything lands in T
};

// Splits [min, max] of mean_normalized into three equal-width intervals.
// Values on a boundary go to the higher bin. Needs >= 3 candidates.
BinAssignment bin_summaries(const ScoreMatrix& matrix);
std::vector<BinAssignment> bin_summaries(const ScoreSet& scores);

enum class BinSpec { LMT, MT, T, L, M };
enum class BinMode { cumulative, noncumulative };

std::string_view bin_spec_name(BinSpec spec);  // "L+M+T", "M+T", "T", "L", "M"
std::string_view bin_mode_name(BinMode mode);
std::vector<BinSpec> bin_specs(BinMode mode);  // cumulative: L+M+T, M+T, T; noncumulative: L, M, T
bool bin_in_spec(Bin bin, BinSpec spec);

struct CorrelationRow {
  std::string metric_a;
  std::string metric_b;
  BinSpec spec = BinSpec::LMT;
  std::optional<double> mean_tau;  // over documents with significant tau
  std::size_t documents = 0;               // documents averaged
  std::size_t dropped_insignificant = 0;   // p >= alpha
  std::size_t dropped_degenerate = 0;      // constant column inside the bin
  std::size_t skipped = 0;                 // fewer than 2 candidates in the bin
};

struct CorrelationTable {
  BinMode mode = BinMode::cumulative;
  double alpha = 0.05;
  std::vector<CorrelationRow> rows;  // metric pairs in metric order (a before b), specs in bin_specs order

  // Either orientation of the pair.
  const CorrelationRow* find(std::string_view a, std::string_view b, BinSpec spec) const;
};

CorrelationTable correlation_table(const ScoreSet& scores, const std::vector<BinAssignment>& bins, BinMode mode,
                                   double alpha = 0.05, std::size_t jobs = 1);

// Per-bin summary of a sampled or enumerated quantity.
struct Curve {
  std::vector<double> positions;             // thresholds (cumulative) or bin centers
  std::vector<std::optional<double>> values;  // empty when the bin holds no sample
  std::vector<std::size_t> counts;
};

enum class Accumulation { top_anchored, bottom_anchored };

struct DisagreementConfig {
  std::size_t pairs = 100000;
  std::size_t nbins = 15;
  BinMode mode = BinMode::cumulative;
  Accumulation accumulation = Accumulation::top_anchored;
  std::string anchor_metric;  // empty: first metric
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
};

struct DisagreementCurve {
  std::string metric_a;
  std::string metric_b;
  Curve curve;
  std::optional<double> overall;  // over every sampled pair not tied on either metric
  std::size_t overall_count = 0;
};

// Samples pairs of (document, candidate) entries across the whole corpus,
// keys each pair by the mean normalized anchor score, and reports the
// fraction of untied pairs ordered oppositely by the two metrics (raw scores).
std::vector<DisagreementCurve> disagreement(const ScoreSet& scores, const DisagreementConfig& cfg);

struct RatioConfig {
  std::size_t nbins = 15;
  std::optional<std::size_t> anchors_per_document;  // unset: every candidate is an anchor
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
};

// F, N (candidates above the anchor on all / some metric) and F', N' (below).
struct AnchorRatio {
  double anchor_mean = 0.0;
  std::size_t above_all = 0;
  std::size_t above_any = 0;
  std::size_t below_all = 0;
  std::size_t below_any = 0;
};

std::vector<AnchorRatio> anchor_ratios(const ScoreMatrix& matrix, const std::vector<std::size_t>& anchors);

struct RatioCurves {
  Curve fn;      // F / N
  Curve fprime;  // F' / N'
};

// Ratios averaged within equal-width bins of the anchor's mean normalized
// score over [0, 1]. Throws for fewer than two metrics.
RatioCurves ratio_curves(const ScoreSet& scores, const RatioConfig& cfg);
Curve fn_ratio(const ScoreSet& scores, const RatioConfig& cfg);
Curve fprime_ratio(const ScoreSet& scores, const RatioConfig& cfg);

// Independent Uniform(0, 1) scores, normalized. Metrics are named U1..Un.
ScoreSet random_metric_baseline(std::size_t n_docs, std::size_t n_candidates, std::size_t n_metrics,
                                std::uint64_t seed);

}  // namespace metaeval
