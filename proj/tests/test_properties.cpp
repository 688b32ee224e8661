#include <gtest/gtest.h>

#include <cmath>

#include "matrices.hpp"
#include "metaeval/error.hpp"
#include "metaeval/properties.hpp"
#include "metaeval/random.hpp"
#include "oracles.hpp"
#include "synthetic.hpp"

using namespace metaeval;
using fixtures::make_matrix;
using fixtures::make_scores;
using oracles::oracle_fragments;

namespace {

TokenSeq ids(Vocabulary& vocab, const std::string& text) {
  TokenSeq out;
  for (const auto& tok : tokenize(text, {})) out.push_back(vocab.intern(tok));
  return out;
}


void expect_same(const std::vector<Fragment>& got, const std::vector<Fragment>& want) {
  ASSERT_EQ(got.size(), want.size());
  for (std::size_t k = 0; k < got.size(); ++k) {
    EXPECT_EQ(got[k].start_in_reference, want[k].start_in_reference);
    EXPECT_EQ(got[k].start_in_document, want[k].start_in_document);
    EXPECT_EQ(got[k].length, want[k].length);
  }
}

TokenSeq from_bits(std::uint32_t bits, std::size_t len) {
  TokenSeq t(len);
  for (std::size_t k = 0; k < len; ++k) t[k] = (bits >> k) & 1u;
  return t;
}

}  // namespace

TEST(Eos, SingleMetricIsItsMaximum) {
  auto m = make_matrix("d", {{0.2, 0.8, 0.5}});
  normalize(m);
  EXPECT_DOUBLE_EQ(eos(m), 0.8);
}

TEST(Eos, TwoMetricsAverageTheirMaxima) {
  auto m = make_matrix("d", {{0.3, 1.0}, {0.5, 0.1}});
  normalize(m);
  EXPECT_DOUBLE_EQ(eos(m), 0.75);
}

TEST(Eos, PerDocumentMinMaxAlwaysGivesOne) {
  auto m = make_matrix("d", {{0.3, 0.4}, {0.5, 0.1}, {0.2, 0.2}});
  normalize(m);
  // the constant column normalizes to 0.5, the other two to a maximum of 1
  EXPECT_DOUBLE_EQ(eos(m, EosScale::per_document_minmax), (1.0 + 1.0 + 0.5) / 3.0);
  auto varied = make_matrix("d", {{0.3, 0.4}, {0.5, 0.1}});
  normalize(varied);
  EXPECT_DOUBLE_EQ(eos(varied, EosScale::per_document_minmax), 1.0);
}

TEST(Eos, AddingACandidateNeverLowersIt) {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::vector<double>> cols(3);
    for (auto& col : cols) {
      for (int c = 0; c < 4; ++c) col.push_back(rng.uniform());
    }
    auto before = make_matrix("d", cols);
    normalize(before);
    for (auto& col : cols) col.push_back(rng.uniform());
    auto after = make_matrix("d", cols);
    normalize(after);
    EXPECT_GE(eos(after), eos(before));
  }
}

TEST(Eos, EmptyPoolIsAnError) {
  auto m = make_matrix("d", {{}});
  EXPECT_THROW(eos(m), ValidationError);
}

TEST(Abstractiveness, HandExamples) {
  const auto corpus = Corpus::build({{"full", {"a b c d e"}, "a b c"},
                                     {"none", {"a b c"}, "x y z"},
                                     {"quarter", {"a b c q r"}, "a b c z a"}},
                                    {});
  EXPECT_DOUBLE_EQ(abstractiveness(corpus.documents()[0], corpus.references()[0]), 0.0);
  EXPECT_DOUBLE_EQ(abstractiveness(corpus.documents()[1], corpus.references()[1]), 1.0);
  // Voc(r) = {a, b, c, z}, three of them in the document
  EXPECT_DOUBLE_EQ(abstractiveness(corpus.documents()[2], corpus.references()[2]), 0.25);
}

TEST(Fragments, HandExamples) {
  Vocabulary vocab;
  const auto doc = ids(vocab, "a b c d");
  expect_same(extractive_fragments(doc, ids(vocab, "a b x c d")), {{0, 0, 2}, {3, 2, 2}});
  EXPECT_DOUBLE_EQ(coverage(doc, ids(vocab, "a b x c d")), 0.8);

  expect_same(extractive_fragments(doc, ids(vocab, "b c d")), {{0, 1, 3}});
  EXPECT_DOUBLE_EQ(coverage(doc, ids(vocab, "b c d")), 1.0);

  EXPECT_TRUE(extractive_fragments(doc, ids(vocab, "x y")).empty());
  EXPECT_DOUBLE_EQ(coverage(doc, ids(vocab, "x y")), 0.0);
  EXPECT_THROW(coverage(doc, {}), ValidationError);
}

TEST(Fragments, TiesGoToTheEarliestDocumentPosition) {
  Vocabulary vocab;
  expect_same(extractive_fragments(ids(vocab, "x a b y a b"), ids(vocab, "a b")), {{0, 1, 2}});
}

TEST(Fragments, ExhaustiveSmallInstancesMatchTheOracle) {
  for (std::size_t dl = 0; dl <= 5; ++dl) {
    for (std::size_t rl = 0; rl <= 5; ++rl) {
      for (std::uint32_t db = 0; db < (1u << dl); ++db) {
        for (std::uint32_t rb = 0; rb < (1u << rl); ++rb) {
          const auto doc = from_bits(db, dl);
          const auto ref = from_bits(rb, rl);
          expect_same(extractive_fragments(doc, ref), oracle_fragments(doc, ref));
        }
      }
    }
  }
}

TEST(Fragments, RandomInstancesUpToTwelveTokens) {
  Rng rng(3);
  for (int trial = 0; trial < 20000; ++trial) {
    TokenSeq doc(rng.below(13));
    TokenSeq ref(1 + rng.below(12));
    for (auto& t : doc) t = static_cast<TokenId>(rng.below(3));
    for (auto& t : ref) t = static_cast<TokenId>(rng.below(3));
    const auto frags = extractive_fragments(doc, ref);
    expect_same(frags, oracle_fragments(doc, ref));

    std::size_t next_free = 0;
    std::size_t total = 0;
    for (const auto& f : frags) {
      EXPECT_GE(f.length, 1u);
      EXPECT_GE(f.start_in_reference, next_free);
      next_free = f.start_in_reference + f.length;
      total += f.length;
      EXPECT_TRUE(std::equal(ref.begin() + f.start_in_reference, ref.begin() + next_free,
                             doc.begin() + f.start_in_document));
    }
    EXPECT_LE(total, ref.size());
  }
}

TEST(Properties, FullCoverageMeansNoAbstraction) {
  fixtures::ToyCorpusSpec spec;
  spec.documents = 20;
  spec.style = fixtures::ReferenceStyle::verbatim_extract;
  const auto corpus = Corpus::build(fixtures::toy_corpus(spec), {});
  for (std::size_t d = 0; d < corpus.size(); ++d) {
    const auto& doc = corpus.documents()[d];
    const auto& ref = corpus.references()[d];
    const double cov = coverage(doc.all_tokens(), ref.tokens);
    EXPECT_DOUBLE_EQ(cov, 1.0);
    EXPECT_DOUBLE_EQ(abstractiveness(doc, ref), 0.0);
  }

  spec.style = fixtures::ReferenceStyle::paraphrase;
  const auto para = Corpus::build(fixtures::toy_corpus(spec), {});
  for (std::size_t d = 0; d < para.size(); ++d) {
    const auto& doc = para.documents()[d];
    const auto& ref = para.references()[d];
    if (coverage(doc.all_tokens(), ref.tokens) == 1.0) EXPECT_DOUBLE_EQ(abstractiveness(doc, ref), 0.0);
    EXPECT_GT(abstractiveness(doc, ref), 0.0);
  }
}

TEST(MovingAverage, HandWindow) {
  const std::vector<double> v = {0.0, 1.0};
  const auto out = moving_average(v, 2);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_FALSE(out[0].has_value());
  EXPECT_DOUBLE_EQ(*out[1], 0.5);

  const std::vector<double> w = {1, 2, 3, 4, 5};
  const auto three = moving_average(w, 3);
  EXPECT_DOUBLE_EQ(*three[2], 2.0);
  EXPECT_DOUBLE_EQ(*three[4], 4.0);
  EXPECT_THROW(moving_average(w, 0), ValidationError);
  EXPECT_EQ(default_trend_window(999), 10u);
  EXPECT_EQ(default_trend_window(1000), 100u);
}

TEST(Scatter, OneRowPerSignificantDocument) {
  std::vector<ScoreMatrix> docs;
  std::vector<PropertyRecord> records;
  for (int d = 0; d < 3; ++d) {
    std::vector<double> a = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6};
    std::vector<double> b;
    for (double x : a) b.push_back(x * x + d);
    docs.push_back(make_matrix("d" + std::to_string(d), {a, b}));
    records.push_back({"d" + std::to_string(d), 0.5, 0.3 - 0.1 * d, 0.1 * d});
  }
  const auto scores = make_scores({"R1", "R2"}, docs);
  const auto s = property_scatter(records, scores, Property::coverage, "R1", "R2", 0.05, 2);
  ASSERT_EQ(s.rows.size(), 3u);
  EXPECT_EQ(s.omitted, 0u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(s.rows[i].doc_id, "d" + std::to_string(i));
    EXPECT_DOUBLE_EQ(s.rows[i].tau, 1.0);
  }
  EXPECT_FALSE(s.rows[0].trend.has_value());
  EXPECT_DOUBLE_EQ(*s.rows[1].trend, 1.0);

  const auto by_abs = property_scatter(records, scores, Property::abstractiveness, "R1", "R2", 0.05, 2);
  EXPECT_EQ(by_abs.rows.front().doc_id, "d2");  // ascending property value
}

TEST(Scatter, InsignificantAndDegenerateDocumentsAreCounted) {
  const auto scores = make_scores({"R1", "R2"}, {make_matrix("sig", {{1, 2, 3, 4, 5, 6}, {1, 2, 3, 4, 5, 6}}),
                                                  make_matrix("flat", {{1, 2, 3}, {7, 7, 7}}),
                                                  make_matrix("noise", {{1, 2, 3, 4}, {2, 4, 1, 3}})});
  std::vector<PropertyRecord> records = {{"sig", 1, 0, 1}, {"flat", 1, 0, 1}, {"noise", 1, 0, 1}};
  const auto s = property_scatter(records, scores, Property::eos, "R1", "R2");
  EXPECT_EQ(s.rows.size(), 1u);
  EXPECT_EQ(s.omitted, 2u);
  EXPECT_THROW(property_scatter(records, scores, Property::eos, "R1", "JS2"), ValidationError);
  records.pop_back();
  EXPECT_THROW(property_scatter(records, scores, Property::eos, "R1", "R2"), ValidationError);
}
