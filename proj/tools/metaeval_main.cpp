// metaeval: generate candidate pools, score them, and meta-evaluate the metrics.
#include <charconv>
#include <iostream>

#include "CLI11.hpp"
#include "metaeval/error.hpp"
#include "metaeval/log.hpp"
#include "metaeval/pipeline.hpp"

using namespace metaeval;

namespace {

struct Flags {
  std::string corpus;
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> jobs;
  std::vector<std::string> metrics;
  std::vector<std::string> external;
  std::string budget;
  std::optional<double> alpha;
  std::optional<std::size_t> nbins;
  std::optional<std::size_t> pairs;
  std::string mode;
  bool random_baseline = false;
  std::string out;
  std::optional<std::size_t> population;
  std::optional<std::size_t> generations;
  std::string anchor_metric;
  std::string accumulation;
  std::string eos_scale;
  std::optional<std::size_t> anchors;
  std::optional<std::size_t> window;
  bool stemming = false;
  bool force = false;
  bool verbose = false;
  bool quiet = false;
};

void add_common(CLI::App* app, Flags& f) {
  app->add_option("--corpus", f.corpus, "JSONL corpus (id, sentences, reference)");
  app->add_option("--config", f.config, "JSON config file; flags override it");
  app->add_option("--seed", f.seed, "root seed");
  app->add_option("--jobs", f.jobs, "worker thread cap")->check(CLI::PositiveNumber);
  app->add_option("--metrics", f.metrics, "native metrics (R1 R2 RL JS2)")->delimiter(',');
  app->add_option("--external-scores", f.external, "external metric scores, NAME=PATH (repeatable)");
  app->add_option("--budget", f.budget, "token budget: an integer or 'reference'");
  app->add_option("--alpha", f.alpha, "significance level for tau rows")->check(CLI::Range(0.0, 1.0));
  app->add_option("--nbins", f.nbins, "bins for disagreement and ratio curves")->check(CLI::PositiveNumber);
  app->add_option("--pairs", f.pairs, "sampled pairs for disagreement")->check(CLI::PositiveNumber);
  app->add_option("--mode", f.mode, "bin mode")->check(CLI::IsMember({"cumulative", "noncumulative", "both"}));
  app->add_flag("--random-baseline", f.random_baseline, "analyze synthetic uniform metrics instead of a corpus");
  app->add_option("--out", f.out, "output directory");
  app->add_option("--population", f.population, "GA population size")->check(CLI::PositiveNumber);
  app->add_option("--generations", f.generations, "GA generations");
  app->add_option("--anchor-metric", f.anchor_metric, "metric keying the disagreement bins");
  app->add_option("--accumulation", f.accumulation, "cumulative disagreement anchoring")
      ->check(CLI::IsMember({"top", "bottom"}));
  app->add_option("--eos-scale", f.eos_scale, "ease-of-summarization scale")
      ->check(CLI::IsMember({"range", "minmax"}));
  app->add_option("--anchors-per-document", f.anchors, "subsample F/N anchors per document")
      ->check(CLI::PositiveNumber);
  app->add_option("--trend-window", f.window, "moving average window (0 = by corpus size)");
  app->add_flag("--stemming", f.stemming, "Porter-stem tokens");
  app->add_flag("--force", f.force, "regenerate even if the candidate store is up to date");
  app->add_flag("-v,--verbose", f.verbose, "log progress");
  app->add_flag("-q,--quiet", f.quiet, "log errors only");
}

RunConfig resolve(const Flags& f) {
  RunConfig cfg;
  if (!f.config.empty()) cfg = load_config_file(f.config, cfg);
  if (!f.corpus.empty()) cfg.corpus = f.corpus;
  if (f.seed) cfg.seed = *f.seed;
  if (f.jobs) cfg.jobs = *f.jobs;
  if (!f.metrics.empty()) cfg.metrics = f.metrics;
  if (!f.external.empty()) {
    cfg.external.clear();
    for (const auto& spec : f.external) {
      const auto eq = spec.find('=');
      if (eq == std::string::npos || eq == 0 || eq + 1 == spec.size()) {
        throw ValidationError("--external-scores expects NAME=PATH, got '" + spec + "'");
      }
      cfg.external.push_back({spec.substr(0, eq), spec.substr(eq + 1)});
    }
  }
  if (!f.budget.empty()) {
    if (f.budget == "reference") {
      cfg.generator.budget_from_reference = true;
    } else {
      std::size_t v = 0;
      auto [p, ec] = std::from_chars(f.budget.data(), f.budget.data() + f.budget.size(), v);
      if (ec != std::errc() || p != f.budget.data() + f.budget.size() || v == 0) {
        throw ValidationError("--budget must be a positive integer or 'reference'");
      }
      cfg.generator.token_budget = v;
      cfg.generator.budget_from_reference = false;
    }
  }
  auto& a = cfg.analysis;
  if (f.alpha) a.alpha = *f.alpha;
  if (f.nbins) a.nbins = *f.nbins;
  if (f.pairs) a.pairs = *f.pairs;
  if (f.mode == "cumulative") a.modes = ModeSelection::cumulative;
  if (f.mode == "noncumulative") a.modes = ModeSelection::noncumulative;
  if (f.mode == "both") a.modes = ModeSelection::both;
  if (f.random_baseline) a.random_baseline = true;
  if (!f.out.empty()) cfg.out_dir = f.out;
  if (f.population) cfg.generator.population_size = *f.population;
  if (f.generations) cfg.generator.generations = *f.generations;
  if (!f.anchor_metric.empty()) a.anchor_metric = f.anchor_metric;
  if (f.accumulation == "top") a.accumulation = Accumulation::top_anchored;
  if (f.accumulation == "bottom") a.accumulation = Accumulation::bottom_anchored;
  if (f.eos_scale == "range") a.eos_scale = EosScale::theoretical_range;
  if (f.eos_scale == "minmax") a.eos_scale = EosScale::per_document_minmax;
  if (f.anchors) a.anchors_per_document = *f.anchors;
  if (f.window) a.trend_window = *f.window;
  if (f.stemming) cfg.tokenizer.stemming = true;
  if (f.force) cfg.force = true;
  cfg.generator.validate();
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Meta-evaluation of summarization metrics on generated extractive candidates"};
  app.require_subcommand(1);
  Flags flags;
  std::vector<std::pair<CLI::App*, void (*)(const RunConfig&)>> commands = {
      {app.add_subcommand("generate", "evolve candidate pools per document and metric"), cmd_generate},
      {app.add_subcommand("score", "score stored candidates with every metric"), cmd_score},
      {app.add_subcommand("analyze", "tau tables, disagreement and F/N curves"), cmd_analyze},
      {app.add_subcommand("properties", "reference properties and their tau scatter"), cmd_properties},
      {app.add_subcommand("report", "collect all outputs into report.md"), cmd_report},
      {app.add_subcommand("run", "generate, score, properties, analyze and report"), run_pipeline},
  };
  for (auto& [sub, fn] : commands) add_common(sub, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  set_log_level(flags.quiet ? LogLevel::quiet : flags.verbose ? LogLevel::info : LogLevel::warning);
  try {
    const RunConfig cfg = resolve(flags);
    for (auto& [sub, fn] : commands) {
      if (sub->parsed()) fn(cfg);
    }
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
