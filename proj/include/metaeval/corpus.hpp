#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace metaeval {

using TokenId = std::uint32_t;
using TokenSeq = std::vector<TokenId>;

struct TokenizerConfig {
  bool lowercase = true;
  bool strip_punctuation = true;
  bool stemming = false;

  bool operator==(const TokenizerConfig&) const = default;
};

// Whitespace split, then edge punctuation stripping, lowercasing and Porter
// stemming, in that order, each gated by `cfg`. Empty tokens are discarded.
std::vector<std::string> tokenize(std::string_view text, const TokenizerConfig& cfg);

// Porter (1980) suffix stripper. Expects a lowercase word.
std::string porter_stem(std::string_view word);

// Interns token strings so the rest of the pipeline works on integer ids.
class Vocabulary {
 public:
  TokenId intern(const std::string& token);
  TokenSeq intern_all(const std::vector<std::string>& tokens);
  const std::string& spelling(TokenId id) const { return spellings_.at(id); }
  std::size_t size() const { return spellings_.size(); }

 private:
  std::unordered_map<std::string, TokenId> ids_;
  std::vector<std::string> spellings_;
};

struct Document {
  std::string id;
  std::vector<std::string> sentences;
  std::vector<TokenSeq> sentence_tokens;  // parallel to `sentences`

  std::size_t sentence_count() const { return sentences.size(); }
  TokenSeq all_tokens() const;
};

struct Reference {
  std::string doc_id;
  std::string text;
  TokenSeq tokens;
  std::vector<TokenId> vocab;  // sorted, unique
};

// One input line before tokenization.
struct CorpusRecord {
  std::string id;
  std::vector<std::string> sentences;
  std::string reference;
};

// Immutable after construction; safe to share across threads.
class Corpus {
 public:
  static Corpus build(const std::vector<CorpusRecord>& records, const TokenizerConfig& cfg);

  const std::vector<Document>& documents() const { return documents_; }
  const std::vector<Reference>& references() const { return references_; }
  const Vocabulary& vocabulary() const { return vocab_; }
  const TokenizerConfig& tokenizer() const { return cfg_; }
  std::size_t size() const { return documents_.size(); }
  std::size_t dropped_sentences() const { return dropped_sentences_; }

  // Index of the document with `id`, or size() if absent.
  std::size_t find(std::string_view id) const;

 private:
  std::vector<Document> documents_;
  std::vector<Reference> references_;
  Vocabulary vocab_;
  TokenizerConfig cfg_;
  std::size_t dropped_sentences_ = 0;
  std::map<std::string, std::size_t, std::less<>> index_;
};

// Line-delimited JSON, one object per line with keys `id`, `sentences`,
// `reference`. Blank lines are ignored. Throws ValidationError naming the line
// for malformed records, duplicate ids and empty corpora; IoError if the file
// cannot be read.
Corpus load_corpus(const std::filesystem::path& path, const TokenizerConfig& cfg);
std::vector<CorpusRecord> parse_corpus_records(std::istream& in);

using NGram = std::vector<TokenId>;

struct NGramBag {
  std::size_t n = 0;
  std::map<NGram, std::size_t> counts;
  std::size_t total = 0;
};

NGramBag ngrams(std::span<const TokenId> tokens, std::size_t n);

}  // namespace metaeval
