#include "metaeval/corpus.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>

#include "json.hpp"
#include "metaeval/error.hpp"
#include "metaeval/log.hpp"

namespace metaeval {

namespace {

std::atomic<int> g_log_level{static_cast<int>(LogLevel::warning)};
std::mutex g_log_mutex;

bool is_space(unsigned char c) { return std::isspace(c) != 0; }
bool is_punct(unsigned char c) { return c < 0x80 && std::ispunct(c) != 0; }

}  // namespace

void set_log_level(LogLevel level) { g_log_level = static_cast<int>(level); }

void log_warning(std::string_view message) {
  if (g_log_level < static_cast<int>(LogLevel::warning)) return;
  std::lock_guard lock(g_log_mutex);
  std::cerr << "warning: " << message << '\n';
}

void log_info(std::string_view message) {
  if (g_log_level < static_cast<int>(LogLevel::info)) return;
  std::lock_guard lock(g_log_mutex);
  std::cerr << message << '\n';
}

std::vector<std::string> tokenize(std::string_view text, const TokenizerConfig& cfg) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    std::size_t j = i;
    while (j < text.size() && !is_space(text[j])) ++j;
    if (j == i) break;
    std::string_view word = text.substr(i, j - i);
    i = j;

    if (cfg.strip_punctuation) {
      while (!word.empty() && is_punct(word.front())) word.remove_prefix(1);
      while (!word.empty() && is_punct(word.back())) word.remove_suffix(1);
    }
    if (word.empty()) continue;

    std::string token(word);
    if (cfg.lowercase) {
      for (char& c : token) {
        if (static_cast<unsigned char>(c) < 0x80) c = static_cast<char>(std::tolower(c));
      }
    }
    if (cfg.stemming) token = porter_stem(token);
    if (!token.empty()) tokens.push_back(std::move(token));
  }
  return tokens;
}

TokenId Vocabulary::intern(const std::string& token) {
  auto [it, inserted] = ids_.try_emplace(token, static_cast<TokenId>(spellings_.size()));
  if (inserted) spellings_.push_back(token);
  return it->second;
}

TokenSeq Vocabulary::intern_all(const std::vector<std::string>& tokens) {
  TokenSeq ids;
  ids.reserve(tokens.size());
  for (const auto& t : tokens) ids.push_back(intern(t));
  return ids;
}

TokenSeq Document::all_tokens() const {
  TokenSeq out;
  for (const auto& s : sentence_tokens) out.insert(out.end(), s.begin(), s.end());
  return out;
}

Corpus Corpus::build(const std::vector<CorpusRecord>& records, const TokenizerConfig& cfg) {
  if (records.empty()) throw ValidationError("corpus is empty");
  Corpus corpus;
  corpus.cfg_ = cfg;
  for (std::size_t r = 0; r < records.size(); ++r) {
    const auto& rec = records[r];
    if (rec.id.empty()) throw ValidationError("record " + std::to_string(r + 1) + ": empty id");
    if (corpus.index_.count(rec.id) != 0) throw ValidationError("duplicate document id '" + rec.id + "'");

    Document doc;
    doc.id = rec.id;
    for (const auto& sentence : rec.sentences) {
      auto toks = tokenize(sentence, cfg);
      if (toks.empty()) {
        ++corpus.dropped_sentences_;
        continue;
      }
      doc.sentences.push_back(sentence);
      doc.sentence_tokens.push_back(corpus.vocab_.intern_all(toks));
    }
    if (doc.sentences.empty()) {
      throw ValidationError("document '" + rec.id + "' has no sentence with at least one token");
    }

    Reference ref;
    ref.doc_id = rec.id;
    ref.text = rec.reference;
    ref.tokens = corpus.vocab_.intern_all(tokenize(rec.reference, cfg));
    if (ref.tokens.empty()) throw ValidationError("document '" + rec.id + "' has an empty reference");
    ref.vocab = ref.tokens;
    std::sort(ref.vocab.begin(), ref.vocab.end());
    ref.vocab.erase(std::unique(ref.vocab.begin(), ref.vocab.end()), ref.vocab.end());

    corpus.index_.emplace(rec.id, corpus.documents_.size());
    corpus.documents_.push_back(std::move(doc));
    corpus.references_.push_back(std::move(ref));
  }
  if (corpus.dropped_sentences_ > 0) {
    log_warning("dropped " + std::to_string(corpus.dropped_sentences_) + " sentence(s) with no tokens");
  }
  return corpus;
}

std::size_t Corpus::find(std::string_view id) const {
  auto it = index_.find(id);
  return it == index_.end() ? documents_.size() : it->second;
}

std::vector<CorpusRecord> parse_corpus_records(std::istream& in) {
  using nlohmann::json;
  std::vector<CorpusRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); })) continue;
    const auto where = "line " + std::to_string(line_no) + ": ";
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ValidationError(where + "malformed JSON (" + e.what() + ")");
    }
    if (!j.is_object()) throw ValidationError(where + "record is not an object");
    CorpusRecord rec;
    try {
      rec.id = j.at("id").get<std::string>();
      rec.sentences = j.at("sentences").get<std::vector<std::string>>();
      rec.reference = j.at("reference").get<std::string>();
    } catch (const json::exception&) {
      throw ValidationError(where + "expected string `id`, string array `sentences` and string `reference`");
    }
    if (rec.id.empty()) throw ValidationError(where + "empty id");
    if (rec.id.find_first_of(",\"\n\r") != std::string::npos) {
      throw ValidationError(where + "id '" + rec.id + "' contains a comma, quote or newline");
    }
    records.push_back(std::move(rec));
  }
  return records;
}

Corpus load_corpus(const std::filesystem::path& path, const TokenizerConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open corpus file " + path.string());
  auto records = parse_corpus_records(in);
  if (in.bad()) throw IoError("error reading corpus file " + path.string());
  return Corpus::build(records, cfg);
}

NGramBag ngrams(std::span<const TokenId> tokens, std::size_t n) {
  if (n == 0) throw ValidationError("n-gram order must be at least 1");
  NGramBag bag;
  bag.n = n;
  if (tokens.size() < n) return bag;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    ++bag.counts[NGram(tokens.begin() + i, tokens.begin() + i + n)];
    ++bag.total;
  }
  return bag;
}

}  // namespace metaeval
