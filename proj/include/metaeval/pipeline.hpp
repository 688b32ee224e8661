#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "metaeval/analysis.hpp"
#include "metaeval/corpus.hpp"
#include "metaeval/generator.hpp"
#include "metaeval/properties.hpp"

namespace metaeval {

struct ExternalScoreSpec {
  std::string name;
  std::filesystem::path path;
};

enum class ModeSelection { cumulative, noncumulative, both };

struct AnalysisParams {
  double alpha = 0.05;
  std::size_t nbins = 15;
  std::size_t pairs = 100000;
  ModeSelection modes = ModeSelection::both;
  Accumulation accumulation = Accumulation::top_anchored;
  std::string anchor_metric;  // empty: first metric
  std::optional<std::size_t> anchors_per_document;
  std::size_t trend_window = 0;  // 0: chosen from the corpus size
  EosScale eos_scale = EosScale::theoretical_range;
  bool random_baseline = false;
  std::size_t random_documents = 200;
  std::size_t random_candidates = 100;
  std::size_t random_metrics = 5;
};

struct RunConfig {
  std::filesystem::path corpus;
  TokenizerConfig tokenizer;
  GenConfig generator;  // its seed is replaced by `seed`
  std::vector<std::string> metrics{"R1", "R2", "RL", "JS2"};
  std::vector<ExternalScoreSpec> external;
  AnalysisParams analysis;
  std::filesystem::path out_dir = "metaeval-out";
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
  bool force = false;  // regenerate even if an up-to-date store exists
};

// Overlays the keys present in a JSON config file onto `base`.
RunConfig load_config_file(const std::filesystem::path& path, RunConfig base);

std::vector<BinMode> selected_modes(const AnalysisParams& params);

namespace artifact_names {
inline constexpr const char* kStore = "candidates.csv";
inline constexpr const char* kScores = "scores.csv";
inline constexpr const char* kProperties = "properties.csv";
inline constexpr const char* kScatter = "scatter.csv";
inline constexpr const char* kTrend = "trend.csv";
inline constexpr const char* kFnRatio = "fn_ratio.csv";
inline constexpr const char* kFprimeRatio = "fprime_ratio.csv";
inline constexpr const char* kReport = "report.md";
std::string correlation(BinMode mode);   // correlation_<mode>.csv
std::string disagreement(BinMode mode);  // disagreement_<mode>.csv
}  // namespace artifact_names

// Scores every stored candidate of every document with at least two
// candidates (others are logged and left out). Not normalized.
ScoreSet score_store(const Corpus& corpus, const CandidateStore& store, const std::vector<NativeMetric>& metrics,
                     std::size_t jobs = 1);

// Each stage reads its inputs from, and writes into, cfg.out_dir. Upstream
// artifacts whose recorded configuration hash differs from the one implied by
// `cfg` are rejected with ValidationError; missing files raise IoError.
void cmd_generate(const RunConfig& cfg);
void cmd_score(const RunConfig& cfg);
void cmd_analyze(const RunConfig& cfg);
void cmd_properties(const RunConfig& cfg);
void cmd_report(const RunConfig& cfg);
// generate, score, properties, analyze, report (analyze + report only for the random baseline).
void run_pipeline(const RunConfig& cfg);

// Stage configuration hashes, as recorded in artifact headers.
std::string generate_hash(const RunConfig& cfg);
std::string score_hash(const RunConfig& cfg);
std::string analyze_hash(const RunConfig& cfg);
std::string properties_hash(const RunConfig& cfg);

}  // namespace metaeval
