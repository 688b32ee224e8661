#include "synthetic.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <cmath>
#include <sstream>

#include "metaeval/random.hpp"

namespace metaeval::fixtures {

namespace {

const std::vector<std::string> kFunctionWords = {"the", "a",    "of", "to",   "and", "in",   "on",
                                                 "for", "was",  "is", "with", "said", "at",  "by",
                                                 "from", "that", "it", "as",  "were", "be"};

bool is_function_word(const std::string& w) {
  return std::find(kFunctionWords.begin(), kFunctionWords.end(), w) != kFunctionWords.end();
}

// Zipf-ish draw over a shared vocabulary so frequent function words recur
// across sentences and bigram overlap is not vanishingly rare.
std::string common_word(Rng& rng) {
  static const std::vector<std::string> words = [] {
    std::vector<std::string> w = kFunctionWords;
    for (int i = 0; i < 180; ++i) w.push_back("w" + std::to_string(i));
    return w;
  }();
  const double u = rng.uniform();
  const auto idx = static_cast<std::size_t>(std::pow(u, 2.2) * static_cast<double>(words.size()));
  return words[std::min(idx, words.size() - 1)];
}

std::string join(const std::vector<std::string>& tokens) {
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty()) out += ' ';
    out += t;
  }
  return out;
}

std::vector<std::string> split(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string t;
  while (in >> t) out.push_back(t);
  return out;
}

}  // namespace

std::vector<CorpusRecord> toy_corpus(const ToyCorpusSpec& spec) {
  Rng rng(spec.seed);
  std::vector<CorpusRecord> records;
  for (std::size_t d = 0; d < spec.documents; ++d) {
    CorpusRecord rec;
    char id[32];
    std::snprintf(id, sizeof id, "toy-%03zu", d);
    rec.id = id;
    const std::string topic = "t" + std::to_string(d) + "x";
    const std::size_t n_sent = spec.min_sentences + rng.below(spec.max_sentences - spec.min_sentences + 1);
    for (std::size_t s = 0; s < n_sent; ++s) {
      const std::size_t len =
          spec.min_sentence_tokens + rng.below(spec.max_sentence_tokens - spec.min_sentence_tokens + 1);
      std::vector<std::string> tokens;
      for (std::size_t k = 0; k < len; ++k) {
        tokens.push_back(rng.coin(0.15) ? topic + std::to_string(rng.below(8)) : common_word(rng));
      }
      rec.sentences.push_back(join(tokens));
    }

    std::vector<std::string> ref;
    switch (spec.style) {
      case ReferenceStyle::verbatim_extract: {
        const std::size_t take = std::min<std::size_t>(3, n_sent);
        const std::size_t start = rng.below(n_sent - take + 1);
        for (std::size_t s = start; s < start + take; ++s) {
          for (auto& t : split(rec.sentences[s])) ref.push_back(t);
        }
        break;
      }
      case ReferenceStyle::paraphrase: {
        std::vector<std::size_t> picks(n_sent);
        for (std::size_t i = 0; i < n_sent; ++i) picks[i] = i;
        rng.shuffle(picks.begin(), picks.end());
        picks.resize(3);
        std::sort(picks.begin(), picks.end());
        for (auto s : picks) {
          for (auto& t : split(rec.sentences[s])) ref.push_back(rng.coin(0.25) ? "novel" + std::to_string(rng.below(50)) : t);
        }
        break;
      }
      case ReferenceStyle::abstractive: {
        // A verbatim extract whose content words are then swapped out type by
        // type, the way a paraphrase keeps the function words but rewords the
        // rest: 60% of the distinct words become unseen ones.
        const std::size_t take = std::min<std::size_t>(3, n_sent);
        const std::size_t start = rng.below(n_sent - take + 1);
        for (std::size_t s = start; s < start + take; ++s) {
          for (auto& t : split(rec.sentences[s])) ref.push_back(t);
        }
        std::vector<std::string> types(ref.begin(), ref.end());
        std::sort(types.begin(), types.end());
        types.erase(std::unique(types.begin(), types.end()), types.end());
        std::vector<std::string> content;
        for (const auto& t : types) {
          if (!is_function_word(t)) content.push_back(t);
        }
        rng.shuffle(content.begin(), content.end());
        const std::size_t swap = std::min(content.size(), (types.size() * 6 + 9) / 10);
        std::map<std::string, std::string> replacement;
        for (std::size_t k = 0; k < swap; ++k) replacement[content[k]] = "abs" + std::to_string(d) + "y" + std::to_string(k);
        for (auto& t : ref) {
          auto it = replacement.find(t);
          if (it != replacement.end()) t = it->second;
        }
        break;
      }
    }
    rec.reference = join(ref);
    records.push_back(std::move(rec));
  }
  return records;
}

ScoreSet score_toy_corpus(const std::vector<CorpusRecord>& records, const GenConfig& gen,
                          const std::vector<NativeMetric>& metrics) {
  const auto corpus = Corpus::build(records, TokenizerConfig{});
  const auto store = generate_all(corpus, metrics, gen);
  auto scores = score_store(corpus, store, metrics);
  normalize(scores);
  return scores;
}

double novel_vocabulary_share(const CorpusRecord& record) {
  std::set<std::string> doc;
  for (const auto& s : record.sentences) {
    for (auto& t : split(s)) doc.insert(t);
  }
  std::set<std::string> ref;
  for (auto& t : split(record.reference)) ref.insert(t);
  std::size_t novel = 0;
  for (const auto& t : ref) novel += doc.count(t) == 0 ? 1 : 0;
  return ref.empty() ? 0.0 : static_cast<double>(novel) / static_cast<double>(ref.size());
}

}  // namespace metaeval::fixtures
