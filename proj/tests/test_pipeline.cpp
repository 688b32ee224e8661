#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "metaeval/artifacts.hpp"
#include "metaeval/error.hpp"
#include "metaeval/log.hpp"
#include "metaeval/pipeline.hpp"

using namespace metaeval;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class PipelineTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / ("metaeval-test-" + std::string(info->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  RunConfig config(const std::string& sub = "out") const {
    RunConfig cfg;
    cfg.corpus = METAEVAL_FIXTURE_DIR "/corpus.jsonl";
    cfg.out_dir = dir_ / sub;
    cfg.seed = 7;
    cfg.generator.generations = 20;
    cfg.analysis.pairs = 5000;
    cfg.analysis.random_documents = 20;
    cfg.analysis.random_candidates = 30;
    return cfg;
  }

  fs::path dir_;
};

std::size_t max_candidates_per_document(const fs::path& store_path) {
  std::ifstream in(store_path);
  Provenance p;
  const auto store = read_candidate_store(in, p, store_path.string());
  std::size_t most = 0;
  for (const auto& d : store.documents) most = std::max(most, d.candidates.size());
  return most;
}

}  // namespace

TEST_F(PipelineTest, GenerateIsBoundedAndDeterministic) {
  auto cfg = config("a");
  cfg.metrics = {"R1", "R2"};
  cmd_generate(cfg);
  const auto store = cfg.out_dir / artifact_names::kStore;
  EXPECT_LE(max_candidates_per_document(store), 200u);

  auto again = config("b");
  again.metrics = cfg.metrics;
  cmd_generate(again);
  EXPECT_EQ(slurp(store), slurp(again.out_dir / artifact_names::kStore));

  again.force = true;
  cmd_generate(again);
  EXPECT_EQ(slurp(store), slurp(again.out_dir / artifact_names::kStore));

  auto other = config("c");
  other.metrics = cfg.metrics;
  other.seed = 8;
  cmd_generate(other);
  EXPECT_NE(slurp(store), slurp(other.out_dir / artifact_names::kStore));
}

TEST_F(PipelineTest, ScoreWritesOneColumnPerMetricAndIsIdempotent) {
  auto cfg = config();
  cmd_generate(cfg);
  cmd_score(cfg);
  const auto path = cfg.out_dir / artifact_names::kScores;
  const auto first = slurp(path);
  std::ifstream in(path);
  Provenance p;
  const auto scores = read_score_set(in, p, "scores");
  EXPECT_EQ(scores.metrics, (std::vector<std::string>{"R1", "R2", "RL", "JS2"}));
  EXPECT_EQ(scores.documents.size(), 3u);
  cmd_score(cfg);
  EXPECT_EQ(slurp(path), first);
}

TEST_F(PipelineTest, ExternalScoresAreMergedAndGapsNamed) {
  auto cfg = config();
  cmd_generate(cfg);
  std::ifstream in(cfg.out_dir / artifact_names::kStore);
  Provenance p;
  const auto store = read_candidate_store(in, p, "store");

  const auto full = dir_ / "ext.csv";
  const auto gappy = dir_ / "gappy.csv";
  {
    std::ofstream a(full);
    std::ofstream b(gappy);
    a << "doc_id,candidate_id,score\n";
    b << "doc_id,candidate_id,score\n";
    double v = 0.0;
    for (const auto& d : store.documents) {
      for (const auto& c : d.candidates) {
        a << d.doc_id << ',' << c.candidate_id << ',' << (v += 0.001) << '\n';
        if (&c != &store.documents[1].candidates[2]) b << d.doc_id << ',' << c.candidate_id << ',' << v << '\n';
      }
    }
  }
  cfg.external = {{"BScore", full}};
  cmd_score(cfg);
  std::ifstream scored(cfg.out_dir / artifact_names::kScores);
  const auto scores = read_score_set(scored, p, "scores");
  EXPECT_EQ(scores.metrics.back(), "BScore");

  cfg.external = {{"BScore", gappy}};
  try {
    cmd_score(cfg);
    FAIL();
  } catch (const ValidationError& e) {
    const std::string missing = store.documents[1].doc_id + "/" + store.documents[1].candidates[2].candidate_id;
    EXPECT_NE(std::string(e.what()).find(missing), std::string::npos) << e.what();
  }

  cfg.external = {{"R1", full}};
  EXPECT_THROW(cmd_score(cfg), ValidationError);
}

TEST_F(PipelineTest, FullRunIsByteIdentical) {
  auto a = config("a");
  auto b = config("b");
  run_pipeline(a);
  run_pipeline(b);
  std::size_t compared = 0;
  for (const auto& entry : fs::directory_iterator(a.out_dir)) {
    const auto name = entry.path().filename();
    ASSERT_TRUE(fs::exists(b.out_dir / name)) << name;
    EXPECT_EQ(slurp(entry.path()), slurp(b.out_dir / name)) << name;
    ++compared;
  }
  EXPECT_GE(compared, 11u);
  for (const char* name : {artifact_names::kStore, artifact_names::kScores, artifact_names::kProperties,
                           artifact_names::kScatter, artifact_names::kTrend, artifact_names::kFnRatio,
                           artifact_names::kFprimeRatio, artifact_names::kReport}) {
    EXPECT_TRUE(fs::exists(a.out_dir / name)) << name;
  }

  const auto report = slurp(a.out_dir / artifact_names::kReport);
  cmd_report(a);
  EXPECT_EQ(slurp(a.out_dir / artifact_names::kReport), report);
}

TEST_F(PipelineTest, MissingUpstreamIsNamed) {
  auto cfg = config();
  try {
    cmd_score(cfg);
    FAIL();
  } catch (const IoError& e) {
    EXPECT_NE(std::string(e.what()).find(artifact_names::kStore), std::string::npos) << e.what();
  }
  EXPECT_THROW(cmd_analyze(cfg), IoError);
  EXPECT_THROW(cmd_properties(cfg), IoError);
  EXPECT_THROW(cmd_report(cfg), IoError);
}

TEST_F(PipelineTest, MismatchedUpstreamIsRefused) {
  auto cfg = config();
  cmd_generate(cfg);
  cmd_score(cfg);

  auto changed = cfg;
  changed.generator.population_size = 40;
  EXPECT_NE(generate_hash(changed), generate_hash(cfg));
  EXPECT_THROW(cmd_score(changed), ValidationError);

  changed = cfg;
  changed.metrics = {"R1", "RL"};
  EXPECT_THROW(cmd_analyze(changed), ValidationError);
  EXPECT_THROW(cmd_properties(changed), ValidationError);

  // analysis parameters do not invalidate the score matrix
  changed = cfg;
  changed.analysis.alpha = 0.01;
  EXPECT_EQ(score_hash(changed), score_hash(cfg));
  EXPECT_NE(analyze_hash(changed), analyze_hash(cfg));
  EXPECT_NO_THROW(cmd_analyze(changed));
}

TEST_F(PipelineTest, RandomBaselineNeedsNoCorpus) {
  auto cfg = config();
  cfg.corpus.clear();
  cfg.analysis.random_baseline = true;
  cmd_analyze(cfg);
  EXPECT_TRUE(fs::exists(cfg.out_dir / artifact_names::kFnRatio));
  EXPECT_TRUE(fs::exists(cfg.out_dir / artifact_names::kFprimeRatio));
  EXPECT_TRUE(fs::exists(cfg.out_dir / artifact_names::correlation(BinMode::cumulative)));
  EXPECT_FALSE(fs::exists(cfg.out_dir / artifact_names::kScores));
}

TEST_F(PipelineTest, ConfigFileOverlaysDefaults) {
  const auto path = dir_ / "run.json";
  std::ofstream(path) << R"({"seed": 99, "metrics": ["R1", "JS2"],
    "generator": {"population_size": 12, "token_budget": 40},
    "analysis": {"alpha": 0.01, "mode": "noncumulative", "accumulation": "bottom"}})";
  const auto cfg = load_config_file(path, config());
  EXPECT_EQ(cfg.seed, 99u);
  EXPECT_EQ(cfg.metrics, (std::vector<std::string>{"R1", "JS2"}));
  EXPECT_EQ(cfg.generator.population_size, 12u);
  EXPECT_EQ(cfg.generator.token_budget, 40u);
  EXPECT_EQ(cfg.generator.generations, 20u);  // untouched
  EXPECT_EQ(cfg.analysis.alpha, 0.01);
  EXPECT_EQ(cfg.analysis.modes, ModeSelection::noncumulative);
  EXPECT_EQ(cfg.analysis.accumulation, Accumulation::bottom_anchored);

  std::ofstream(dir_ / "bad.json") << R"({"seed": "x"})";
  EXPECT_THROW(load_config_file(dir_ / "bad.json", config()), ValidationError);
  EXPECT_THROW(load_config_file(dir_ / "absent.json", config()), IoError);
}

// The command-line binary, driven through the shell.
class CliTest : public PipelineTest {
 protected:
  int run(const std::string& args) const {
    const std::string cmd = std::string(METAEVAL_CLI) + " " + args + " >" + (dir_ / "stdout").string() + " 2>" +
                            (dir_ / "stderr").string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }
  std::string err() const { return slurp(dir_ / "stderr"); }
  std::string out_flag(const std::string& sub = "out") const { return "--out " + (dir_ / sub).string(); }
};

TEST_F(CliTest, ExitCodes) {
  EXPECT_EQ(run("--help"), 0);
  EXPECT_EQ(run("generate --no-such-flag"), 1);
  EXPECT_EQ(run("generate --corpus " + (dir_ / "missing.jsonl").string() + " " + out_flag()), 2);
  EXPECT_NE(err().find("missing.jsonl"), std::string::npos) << err();
  EXPECT_EQ(run("score " + out_flag()), 1);
  EXPECT_NE(err().find("no corpus"), std::string::npos) << err();
  EXPECT_EQ(run("score --corpus " METAEVAL_FIXTURE_DIR "/corpus.jsonl " + out_flag()), 2);
  EXPECT_NE(err().find("candidates.csv"), std::string::npos) << err();
  EXPECT_EQ(run("generate --corpus " METAEVAL_FIXTURE_DIR "/corpus.jsonl --metrics R1,BScore " + out_flag()), 1);
  EXPECT_EQ(run("analyze --alpha 2 --random-baseline " + out_flag()), 1);
}

TEST_F(CliTest, RunAndRerun) {
  const std::string common = "--corpus " METAEVAL_FIXTURE_DIR "/corpus.jsonl --seed 3 --pairs 3000 --jobs 2 ";
  ASSERT_EQ(run("run " + common + out_flag("a")), 0) << err();
  ASSERT_EQ(run("run " + common + out_flag("b")), 0) << err();
  EXPECT_EQ(slurp(dir_ / "a" / "report.md"), slurp(dir_ / "b" / "report.md"));
  EXPECT_EQ(slurp(dir_ / "a" / "scores.csv"), slurp(dir_ / "b" / "scores.csv"));

  // upstream produced under another seed is refused
  EXPECT_EQ(run("score --corpus " METAEVAL_FIXTURE_DIR "/corpus.jsonl --seed 4 " + out_flag("a")), 1);
  EXPECT_NE(err().find("rerun the upstream stage"), std::string::npos) << err();
}

TEST_F(CliTest, RandomBaselineWithoutCorpus) {
  ASSERT_EQ(run("analyze --random-baseline --pairs 2000 --mode cumulative " + out_flag()), 0) << err();
  EXPECT_TRUE(fs::exists(dir_ / "out" / "fn_ratio.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "out" / "fprime_ratio.csv"));
  EXPECT_FALSE(fs::exists(dir_ / "out" / "correlation_noncumulative.csv"));
}
