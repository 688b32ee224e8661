#include "metaeval/pipeline.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"
#include "metaeval/artifacts.hpp"
#include "metaeval/error.hpp"
#include "metaeval/log.hpp"
#include "metaeval/parallel.hpp"
#include "metaeval/random.hpp"

namespace metaeval {

using nlohmann::json;
namespace fs = std::filesystem;

namespace artifact_names {
std::string correlation(BinMode mode) { return "correlation_" + std::string(bin_mode_name(mode)) + ".csv"; }
std::string disagreement(BinMode mode) { return "disagreement_" + std::string(bin_mode_name(mode)) + ".csv"; }
}  // namespace artifact_names

namespace {

const char* mode_selection_name(ModeSelection m) {
  switch (m) {
    case ModeSelection::cumulative: return "cumulative";
    case ModeSelection::noncumulative: return "noncumulative";
    case ModeSelection::both: return "both";
  }
  return "both";
}

ModeSelection parse_mode_selection(const std::string& s) {
  if (s == "cumulative") return ModeSelection::cumulative;
  if (s == "noncumulative") return ModeSelection::noncumulative;
  if (s == "both") return ModeSelection::both;
  throw ValidationError("unknown mode '" + s + "'");
}

std::string hash_of(const json& j) { return hex64(fnv1a64(j.dump())); }

json tokenizer_json(const TokenizerConfig& t) {
  return {{"lowercase", t.lowercase}, {"strip_punctuation", t.strip_punctuation}, {"stemming", t.stemming}};
}

json generator_json(const GenConfig& g) {
  return {{"population_size", g.population_size},
          {"generations", g.generations},
          {"mutation_rate", g.mutation_rate ? json(*g.mutation_rate) : json(nullptr)},
          {"tournament_size", g.tournament_size},
          {"elite_fraction", g.elite_fraction},
          {"token_budget", g.token_budget},
          {"budget_from_reference", g.budget_from_reference}};
}

json generate_stage_json(const RunConfig& cfg) {
  if (cfg.corpus.empty()) throw ValidationError("no corpus given (--corpus)");
  return {{"stage", "generate"},
          {"corpus_digest", hex64(file_digest(cfg.corpus))},
          {"tokenizer", tokenizer_json(cfg.tokenizer)},
          {"generator", generator_json(cfg.generator)},
          {"metrics", cfg.metrics},
          {"seed", cfg.seed}};
}

json score_stage_json(const RunConfig& cfg) {
  json external = json::array();
  for (const auto& e : cfg.external) external.push_back({{"name", e.name}, {"digest", hex64(file_digest(e.path))}});
  return {{"stage", "score"}, {"upstream", generate_hash(cfg)}, {"metrics", cfg.metrics}, {"external", external}};
}

json analysis_params_json(const AnalysisParams& a) {
  json j = {{"alpha", a.alpha},
            {"nbins", a.nbins},
            {"pairs", a.pairs},
            {"modes", mode_selection_name(a.modes)},
            {"accumulation", a.accumulation == Accumulation::top_anchored ? "top" : "bottom"},
            {"anchor_metric", a.anchor_metric},
            {"anchors_per_document", a.anchors_per_document ? json(*a.anchors_per_document) : json(nullptr)},
            {"random_baseline", a.random_baseline}};
  if (a.random_baseline) {
    j["random_documents"] = a.random_documents;
    j["random_candidates"] = a.random_candidates;
    j["random_metrics"] = a.random_metrics;
  }
  return j;
}

json analyze_stage_json(const RunConfig& cfg) {
  return {{"stage", "analyze"},
          {"upstream", cfg.analysis.random_baseline ? std::string("random-baseline") : score_hash(cfg)},
          {"analysis", analysis_params_json(cfg.analysis)},
          {"seed", cfg.seed}};
}

json properties_stage_json(const RunConfig& cfg) {
  return {{"stage", "properties"},
          {"upstream", score_hash(cfg)},
          {"eos_scale", cfg.analysis.eos_scale == EosScale::theoretical_range ? "range" : "minmax"},
          {"alpha", cfg.analysis.alpha},
          {"trend_window", cfg.analysis.trend_window}};
}

Provenance provenance_for(const std::string& kind, const json& stage, const std::string& upstream, std::uint64_t seed) {
  return Provenance{kind, hash_of(stage), upstream, seed, stage.dump()};
}

// Writes through a temporary file so an interrupted run never leaves a
// truncated artifact behind.
template <typename Writer>
void write_artifact(const fs::path& path, Writer&& writer) {
  std::error_code ec;
  fs::create_directories(path.parent_path(), ec);
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw IoError("cannot write " + tmp.string());
    writer(out);
    out.flush();
    if (!out) throw IoError("error writing " + tmp.string());
  }
  fs::rename(tmp, path, ec);
  if (ec) throw IoError("cannot move " + tmp.string() + " to " + path.string() + ": " + ec.message());
}

std::ifstream open_input(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("missing input file " + path.string());
  return in;
}

void check_hash(const Provenance& p, const std::string& expected, const fs::path& path) {
  if (p.config_hash != expected) {
    throw ValidationError(path.string() + " was produced under configuration " + p.config_hash +
                          ", but the current configuration implies " + expected + "; rerun the upstream stage");
  }
}

Corpus load_run_corpus(const RunConfig& cfg) {
  if (cfg.corpus.empty()) throw ValidationError("no corpus given (--corpus or \"corpus\" in the config file)");
  return load_corpus(cfg.corpus, cfg.tokenizer);
}

std::vector<NativeMetric> native_metrics(const RunConfig& cfg) {
  if (cfg.metrics.empty()) throw ValidationError("at least one native metric is required (--metrics)");
  std::vector<NativeMetric> out;
  for (const auto& name : cfg.metrics) {
    auto m = parse_native_metric(name);
    if (!m) {
      throw ValidationError("'" + name + "' is not a native metric (R1, R2, RL, JS2); supply external metrics with "
                            "--external-scores NAME=PATH");
    }
    if (std::find(out.begin(), out.end(), *m) != out.end()) throw ValidationError("metric '" + name + "' listed twice");
    out.push_back(*m);
  }
  return out;
}

GenConfig generator_config(const RunConfig& cfg) {
  GenConfig g = cfg.generator;
  g.seed = derive_seed(cfg.seed, "generate");
  return g;
}

ScoreSet load_validated_scores(const RunConfig& cfg) {
  const fs::path path = cfg.out_dir / artifact_names::kScores;
  auto in = open_input(path);
  Provenance p;
  auto scores = read_score_set(in, p, path.string());
  check_hash(p, score_hash(cfg), path);
  return scores;
}

std::string read_text(const fs::path& path) {
  auto in = open_input(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::vector<BinMode> selected_modes(const AnalysisParams& params) {
  switch (params.modes) {
    case ModeSelection::cumulative: return {BinMode::cumulative};
    case ModeSelection::noncumulative: return {BinMode::noncumulative};
    case ModeSelection::both: return {BinMode::cumulative, BinMode::noncumulative};
  }
  return {};
}

RunConfig load_config_file(const fs::path& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
  try {
    if (j.contains("corpus")) base.corpus = j["corpus"].get<std::string>();
    if (j.contains("seed")) base.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("jobs")) base.jobs = j["jobs"].get<std::size_t>();
    if (j.contains("out")) base.out_dir = j["out"].get<std::string>();
    if (j.contains("metrics")) base.metrics = j["metrics"].get<std::vector<std::string>>();
    if (j.contains("external_scores")) {
      base.external.clear();
      for (auto& [name, p] : j["external_scores"].items()) base.external.push_back({name, p.get<std::string>()});
    }
    if (j.contains("tokenizer")) {
      const auto& t = j["tokenizer"];
      base.tokenizer.lowercase = t.value("lowercase", base.tokenizer.lowercase);
      base.tokenizer.strip_punctuation = t.value("strip_punctuation", base.tokenizer.strip_punctuation);
      base.tokenizer.stemming = t.value("stemming", base.tokenizer.stemming);
    }
    if (j.contains("generator")) {
      const auto& g = j["generator"];
      auto& gen = base.generator;
      gen.population_size = g.value("population_size", gen.population_size);
      gen.generations = g.value("generations", gen.generations);
      if (g.contains("mutation_rate") && !g["mutation_rate"].is_null()) gen.mutation_rate = g["mutation_rate"].get<double>();
      gen.tournament_size = g.value("tournament_size", gen.tournament_size);
      gen.elite_fraction = g.value("elite_fraction", gen.elite_fraction);
      gen.token_budget = g.value("token_budget", gen.token_budget);
      gen.budget_from_reference = g.value("budget_from_reference", gen.budget_from_reference);
    }
    if (j.contains("analysis")) {
      const auto& a = j["analysis"];
      auto& an = base.analysis;
      an.alpha = a.value("alpha", an.alpha);
      an.nbins = a.value("nbins", an.nbins);
      an.pairs = a.value("pairs", an.pairs);
      if (a.contains("mode")) an.modes = parse_mode_selection(a["mode"].get<std::string>());
      if (a.contains("accumulation")) {
        const auto acc = a["accumulation"].get<std::string>();
        if (acc != "top" && acc != "bottom") throw ValidationError("accumulation must be top or bottom");
        an.accumulation = acc == "top" ? Accumulation::top_anchored : Accumulation::bottom_anchored;
      }
      an.anchor_metric = a.value("anchor_metric", an.anchor_metric);
      if (a.contains("anchors_per_document") && !a["anchors_per_document"].is_null()) {
        an.anchors_per_document = a["anchors_per_document"].get<std::size_t>();
      }
      an.trend_window = a.value("trend_window", an.trend_window);
      if (a.contains("eos_scale")) {
        const auto scale = a["eos_scale"].get<std::string>();
        if (scale != "range" && scale != "minmax") throw ValidationError("eos_scale must be range or minmax");
        an.eos_scale = scale == "range" ? EosScale::theoretical_range : EosScale::per_document_minmax;
      }
      an.random_baseline = a.value("random_baseline", an.random_baseline);
      an.random_documents = a.value("random_documents", an.random_documents);
      an.random_candidates = a.value("random_candidates", an.random_candidates);
      an.random_metrics = a.value("random_metrics", an.random_metrics);
    }
  } catch (const json::exception& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
  return base;
}

std::string generate_hash(const RunConfig& cfg) { return hash_of(generate_stage_json(cfg)); }
std::string score_hash(const RunConfig& cfg) { return hash_of(score_stage_json(cfg)); }
std::string analyze_hash(const RunConfig& cfg) { return hash_of(analyze_stage_json(cfg)); }
std::string properties_hash(const RunConfig& cfg) { return hash_of(properties_stage_json(cfg)); }

ScoreSet score_store(const Corpus& corpus, const CandidateStore& store, const std::vector<NativeMetric>& metrics,
                     std::size_t jobs) {
  ScoreSet scores;
  for (auto m : metrics) scores.metrics.emplace_back(metric_name(m));
  std::vector<std::optional<ScoreMatrix>> matrices(store.documents.size());
  parallel_for(store.documents.size(), jobs, [&](std::size_t i) {
    const auto& pool = store.documents[i];
    const auto d = corpus.find(pool.doc_id);
    if (d == corpus.size()) throw ValidationError("candidate store names unknown document '" + pool.doc_id + "'");
    if (pool.candidates.size() < 2) return;
    const auto& doc = corpus.documents()[d];
    ReferenceScorer scorer(corpus.references()[d].tokens);
    ScoreMatrix matrix;
    matrix.doc_id = pool.doc_id;
    matrix.raw.assign(metrics.size(), {});
    for (const auto& stored : pool.candidates) {
      auto cand = make_candidate(doc, stored.sentence_indices);
      matrix.candidate_ids.push_back(cand.candidate_id);
      for (std::size_t m = 0; m < metrics.size(); ++m) matrix.raw[m].push_back(scorer.score(metrics[m], cand.tokens));
    }
    matrices[i] = std::move(matrix);
  });
  for (std::size_t i = 0; i < matrices.size(); ++i) {
    if (matrices[i]) {
      scores.documents.push_back(std::move(*matrices[i]));
    } else {
      log_warning("document '" + store.documents[i].doc_id + "' has fewer than 2 candidates; left out of the matrix");
    }
  }
  return scores;
}

void cmd_generate(const RunConfig& cfg) {
  const auto metrics = native_metrics(cfg);
  const auto corpus = load_run_corpus(cfg);
  const auto stage = generate_stage_json(cfg);
  const auto hash = hash_of(stage);
  const fs::path path = cfg.out_dir / artifact_names::kStore;

  if (fs::exists(path)) {
    std::ifstream in(path);
    Provenance previous;
    try {
      previous = read_provenance(in, "candidate-store", path.string());
    } catch (const ValidationError&) {
      previous = {};
    }
    if (previous.config_hash == hash && !cfg.force) {
      log_info("candidate store " + path.string() + " is up to date (config " + hash + "); reusing it");
      return;
    }
    if (!previous.config_hash.empty() && previous.config_hash != hash) {
      log_warning("replacing candidate store generated under config " + previous.config_hash + " (seed " +
                  std::to_string(previous.seed) + ") with config " + hash + " (seed " + std::to_string(cfg.seed) + ")");
    }
  }

  const auto store = generate_all(corpus, metrics, generator_config(cfg), cfg.jobs);
  std::size_t total = 0;
  std::size_t generated = 0;
  for (const auto& doc : store.documents) {
    total += doc.candidates.size();
    generated += doc.generated;
    log_info("  " + doc.doc_id + ": " + std::to_string(doc.candidates.size()) + " unique of " +
             std::to_string(doc.generated) + " generated");
  }
  log_info("generated " + std::to_string(total) + " unique candidates over " + std::to_string(store.documents.size()) +
           " documents (dedup ratio " + format_real(generated ? static_cast<double>(total) / generated : 0.0, 4) +
           ", " + std::to_string(store.skipped.size()) + " skipped)");
  write_artifact(path, [&](std::ostream& out) {
    write_candidate_store(out, store, provenance_for("candidate-store", stage, "", cfg.seed));
  });
}

void cmd_score(const RunConfig& cfg) {
  const auto metrics = native_metrics(cfg);
  const auto corpus = load_run_corpus(cfg);
  const fs::path store_path = cfg.out_dir / artifact_names::kStore;
  auto in = open_input(store_path);
  Provenance store_prov;
  const auto store = read_candidate_store(in, store_prov, store_path.string());
  check_hash(store_prov, generate_hash(cfg), store_path);

  ScoreSet scores = score_store(corpus, store, metrics, cfg.jobs);
  if (scores.documents.empty()) throw ValidationError("no document has at least 2 candidates to score");
  for (const auto& ext : cfg.external) {
    auto report = load_external_scores(ext.path, ext.name, scores);
    log_info("merged " + std::to_string(report.rows) + " '" + ext.name + "' score rows");
  }
  validate_rectangular(scores);
  normalize(scores);

  const auto stage = score_stage_json(cfg);
  write_artifact(cfg.out_dir / artifact_names::kScores, [&](std::ostream& out) {
    write_score_set(out, scores, provenance_for("score-matrix", stage, store_prov.config_hash, cfg.seed));
  });
}

void cmd_analyze(const RunConfig& cfg) {
  const auto& params = cfg.analysis;
  ScoreSet scores;
  std::string upstream;
  if (params.random_baseline) {
    scores = random_metric_baseline(params.random_documents, params.random_candidates, params.random_metrics,
                                    derive_seed(cfg.seed, "random-baseline"));
    upstream = "random-baseline";
  } else {
    scores = load_validated_scores(cfg);
    upstream = score_hash(cfg);
  }
  const auto stage = analyze_stage_json(cfg);
  const auto prov = provenance_for("analysis", stage, upstream, cfg.seed);
  const std::uint64_t seed = derive_seed(cfg.seed, "analyze");

  // Binning needs at least three candidates per document.
  ScoreSet binnable;
  binnable.metrics = scores.metrics;
  for (const auto& doc : scores.documents) {
    if (doc.candidate_count() >= 3) {
      binnable.documents.push_back(doc);
    } else {
      log_warning("document '" + doc.doc_id + "' has fewer than 3 candidates; left out of the correlation tables");
    }
  }
  const auto bins = bin_summaries(binnable);

  for (auto mode : selected_modes(params)) {
    const auto table = correlation_table(binnable, bins, mode, params.alpha, cfg.jobs);
    write_artifact(cfg.out_dir / artifact_names::correlation(mode),
                   [&](std::ostream& out) { write_correlation_table(out, table, prov); });

    DisagreementConfig dcfg;
    dcfg.pairs = params.pairs;
    dcfg.nbins = params.nbins;
    dcfg.mode = mode;
    dcfg.accumulation = params.accumulation;
    dcfg.anchor_metric = params.anchor_metric;
    dcfg.seed = seed;
    dcfg.jobs = cfg.jobs;
    const auto curves = disagreement(scores, dcfg);
    write_artifact(cfg.out_dir / artifact_names::disagreement(mode),
                   [&](std::ostream& out) { write_disagreement(out, curves, prov); });
  }

  RatioConfig rcfg;
  rcfg.nbins = params.nbins;
  rcfg.anchors_per_document = params.anchors_per_document;
  rcfg.seed = seed;
  rcfg.jobs = cfg.jobs;
  const auto ratios = ratio_curves(scores, rcfg);
  write_artifact(cfg.out_dir / artifact_names::kFnRatio, [&](std::ostream& out) { write_curve(out, ratios.fn, prov); });
  write_artifact(cfg.out_dir / artifact_names::kFprimeRatio,
                 [&](std::ostream& out) { write_curve(out, ratios.fprime, prov); });
}

void cmd_properties(const RunConfig& cfg) {
  if (cfg.analysis.random_baseline) throw ValidationError("properties need a corpus; not available for the random baseline");
  const auto corpus = load_run_corpus(cfg);
  const auto scores = load_validated_scores(cfg);

  std::vector<PropertyRecord> records(scores.documents.size());
  parallel_for(scores.documents.size(), cfg.jobs, [&](std::size_t i) {
    const auto& matrix = scores.documents[i];
    const auto d = corpus.find(matrix.doc_id);
    if (d == corpus.size()) throw ValidationError("score matrix names unknown document '" + matrix.doc_id + "'");
    records[i] = compute_properties(corpus.documents()[d], corpus.references()[d], matrix, cfg.analysis.eos_scale);
  });

  std::vector<Scatter> scatters;
  for (std::size_t a = 0; a < scores.metrics.size(); ++a) {
    for (std::size_t b = a + 1; b < scores.metrics.size(); ++b) {
      for (auto prop : {Property::eos, Property::abstractiveness, Property::coverage}) {
        scatters.push_back(property_scatter(records, scores, prop, scores.metrics[a], scores.metrics[b],
                                            cfg.analysis.alpha, cfg.analysis.trend_window));
      }
    }
  }

  const auto stage = properties_stage_json(cfg);
  const auto prov = provenance_for("properties", stage, score_hash(cfg), cfg.seed);
  write_artifact(cfg.out_dir / artifact_names::kProperties,
                 [&](std::ostream& out) { write_properties(out, records, prov); });
  write_artifact(cfg.out_dir / artifact_names::kScatter,
                 [&](std::ostream& out) { write_scatter(out, records, scatters, prov); });
  write_artifact(cfg.out_dir / artifact_names::kTrend, [&](std::ostream& out) { write_trend(out, scatters, prov); });
}

namespace {

struct ReportInput {
  std::string title;
  fs::path path;
  std::string expected_hash;
};

// Rebuilds the pair x bin layout from a correlation CSV.
void correlation_layout(std::ostream& out, const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::string> metrics;
  std::map<std::string, std::map<std::string, std::map<std::string, std::string>>> cells;  // a -> bin -> b -> tau
  std::vector<std::string> bins;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') continue;
    if (header) {
      header = false;
      continue;
    }
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) f.push_back(field);
    if (f.size() < 4) continue;
    for (const auto& m : {f[0], f[1]}) {
      if (std::find(metrics.begin(), metrics.end(), m) == metrics.end()) metrics.push_back(m);
    }
    if (std::find(bins.begin(), bins.end(), f[2]) == bins.end()) bins.push_back(f[2]);
    std::string tau = "n/a";
    if (!f[3].empty()) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.2f", std::stod(f[3]));
      tau = buf;
    }
    cells[f[0]][f[2]][f[1]] = tau;
  }
  if (metrics.size() < 2) return;
  out << "| Metric | Bin |";
  for (std::size_t b = 1; b < metrics.size(); ++b) out << ' ' << metrics[b] << " |";
  out << "\n|---|---|";
  for (std::size_t b = 1; b < metrics.size(); ++b) out << "---|";
  out << '\n';
  for (std::size_t a = 0; a + 1 < metrics.size(); ++a) {
    for (const auto& bin : bins) {
      out << "| " << metrics[a] << " | " << bin << " |";
      for (std::size_t b = 1; b < metrics.size(); ++b) {
        std::string cell;
        if (b > a) {
          auto& row = cells[metrics[a]][bin];
          auto it = row.find(metrics[b]);
          cell = it == row.end() ? "n/a" : it->second;
        }
        out << ' ' << cell << " |";
      }
      out << '\n';
    }
  }
  out << '\n';
}

}  // namespace

void cmd_report(const RunConfig& cfg) {
  const auto analysis_hash = analyze_hash(cfg);
  std::vector<ReportInput> inputs;
  for (auto mode : selected_modes(cfg.analysis)) {
    inputs.push_back({"Kendall tau, " + std::string(bin_mode_name(mode)) + " bins",
                      cfg.out_dir / artifact_names::correlation(mode), analysis_hash});
  }
  for (auto mode : selected_modes(cfg.analysis)) {
    inputs.push_back({"Disagreement, " + std::string(bin_mode_name(mode)) + " bins",
                      cfg.out_dir / artifact_names::disagreement(mode), analysis_hash});
  }
  inputs.push_back({"F/N ratio", cfg.out_dir / artifact_names::kFnRatio, analysis_hash});
  inputs.push_back({"F'/N' ratio", cfg.out_dir / artifact_names::kFprimeRatio, analysis_hash});
  std::string props_hash;
  if (!cfg.analysis.random_baseline) {
    props_hash = properties_hash(cfg);
    inputs.push_back({"Reference properties", cfg.out_dir / artifact_names::kProperties, props_hash});
    inputs.push_back({"Property scatter", cfg.out_dir / artifact_names::kScatter, props_hash});
    inputs.push_back({"Property trend lines", cfg.out_dir / artifact_names::kTrend, props_hash});
  }

  std::vector<std::string> texts;
  for (const auto& input : inputs) {
    auto text = read_text(input.path);
    std::istringstream in(text);
    auto prov = read_provenance(in, input.path.filename() == artifact_names::kProperties ||
                                            input.path.filename() == artifact_names::kScatter ||
                                            input.path.filename() == artifact_names::kTrend
                                        ? "properties"
                                        : "analysis",
                                input.path.string());
    check_hash(prov, input.expected_hash, input.path);
    texts.push_back(std::move(text));
  }

  const json stage = {{"stage", "report"}, {"analysis", analysis_hash}, {"properties", props_hash}};
  write_artifact(cfg.out_dir / artifact_names::kReport, [&](std::ostream& out) {
    out << "# Metric meta-evaluation report\n\n";
    out << "- config hash: `" << hash_of(stage) << "`\n";
    out << "- seed: " << cfg.seed << '\n';
    out << "- analysis config: `" << analyze_stage_json(cfg).dump() << "`\n";
    if (!cfg.analysis.random_baseline) out << "- properties config: `" << properties_stage_json(cfg).dump() << "`\n";
    out << '\n';
    for (std::size_t i = 0; i < inputs.size(); ++i) {
      out << "## " << inputs[i].title << "\n\n";
      if (inputs[i].path.filename().string().rfind("correlation_", 0) == 0) correlation_layout(out, texts[i]);
      out << "Source: `" << inputs[i].path.filename().string() << "`\n\n```\n" << texts[i];
      if (!texts[i].empty() && texts[i].back() != '\n') out << '\n';
      out << "```\n\n";
    }
  });
}

void run_pipeline(const RunConfig& cfg) {
  if (!cfg.analysis.random_baseline) {
    cmd_generate(cfg);
    cmd_score(cfg);
    cmd_properties(cfg);
  }
  cmd_analyze(cfg);
  cmd_report(cfg);
}

}  // namespace metaeval
