#include "metaeval/generator.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <numeric>
#include <unordered_map>

#include "metaeval/error.hpp"
#include "metaeval/log.hpp"
#include "metaeval/parallel.hpp"
#include "metaeval/random.hpp"

namespace metaeval {

std::string candidate_id_for(std::span<const std::uint32_t> sorted_indices) {
  std::string id;
  for (std::size_t i = 0; i < sorted_indices.size(); ++i) {
    if (i > 0) id += '-';
    id += std::to_string(sorted_indices[i]);
  }
  return id;
}

std::vector<std::uint32_t> parse_candidate_id(std::string_view id) {
  std::vector<std::uint32_t> indices;
  std::size_t start = 0;
  while (start <= id.size()) {
    auto dash = id.find('-', start);
    auto part = id.substr(start, dash == std::string_view::npos ? std::string_view::npos : dash - start);
    std::uint32_t v = 0;
    auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
    if (part.empty() || ec != std::errc() || ptr != part.data() + part.size()) {
      throw ValidationError("malformed candidate id '" + std::string(id) + "'");
    }
    if (!indices.empty() && v <= indices.back()) {
      throw ValidationError("candidate id '" + std::string(id) + "' is not strictly increasing");
    }
    indices.push_back(v);
    if (dash == std::string_view::npos) break;
    start = dash + 1;
  }
  return indices;
}

Candidate make_candidate(const Document& doc, std::vector<std::uint32_t> sentence_indices) {
  std::sort(sentence_indices.begin(), sentence_indices.end());
  sentence_indices.erase(std::unique(sentence_indices.begin(), sentence_indices.end()), sentence_indices.end());
  if (sentence_indices.empty()) throw ValidationError("candidate for '" + doc.id + "' selects no sentence");
  Candidate cand;
  cand.doc_id = doc.id;
  for (auto i : sentence_indices) {
    if (i >= doc.sentence_count()) {
      throw ValidationError("sentence index " + std::to_string(i) + " out of range for document '" + doc.id + "'");
    }
    const auto& s = doc.sentence_tokens[i];
    cand.tokens.insert(cand.tokens.end(), s.begin(), s.end());
  }
  cand.token_count = cand.tokens.size();
  cand.candidate_id = candidate_id_for(sentence_indices);
  cand.sentence_indices = std::move(sentence_indices);
  return cand;
}

void GenConfig::validate() const {
  if (population_size < 2) throw ValidationError("population size must be at least 2");
  if (generations < 1) throw ValidationError("generation count must be at least 1");
  if (!(elite_fraction > 0.0 && elite_fraction < 1.0)) throw ValidationError("elite fraction must lie in (0, 1)");
  if (tournament_size < 1) throw ValidationError("tournament size must be at least 1");
  if (token_budget < 1 && !budget_from_reference) throw ValidationError("token budget must be at least 1");
  if (mutation_rate && !(*mutation_rate >= 0.0 && *mutation_rate <= 1.0)) {
    throw ValidationError("mutation rate must lie in [0, 1]");
  }
}

namespace {

struct Individual {
  std::string mask;  // one byte per sentence, 0 or 1
  std::size_t tokens = 0;
  double fitness = 0.0;
};

class Evolution {
 public:
  Evolution(const Document& doc, const Reference& ref, NativeMetric metric, const GenConfig& cfg)
      : doc_(doc),
        scorer_(ref.tokens),
        metric_(metric),
        cfg_(cfg),
        budget_(cfg.budget_from_reference ? ref.tokens.size() : cfg.token_budget),
        mutation_rate_(cfg.mutation_rate.value_or(1.0 / static_cast<double>(doc.sentence_count()))),
        rng_(derive_seed(cfg.seed, "generate/" + doc.id + "/" + std::string(metric_name(metric)))) {
    for (std::uint32_t i = 0; i < doc.sentence_count(); ++i) {
      if (doc.sentence_tokens[i].size() <= budget_) feasible_.push_back(i);
    }
    if (feasible_.empty()) {
      throw ValidationError("document '" + doc.id + "': no sentence fits the token budget of " +
                            std::to_string(budget_));
    }
  }

  GeneratedPool run() {
    GeneratedPool out;
    std::vector<Individual> population;
    population.reserve(cfg_.population_size);
    for (std::size_t i = 0; i < cfg_.population_size; ++i) population.push_back(random_individual());
    rank(population);
    out.best_fitness.push_back(population.front().fitness);

    const auto elites = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::floor(cfg_.elite_fraction * static_cast<double>(cfg_.population_size))));
    for (std::size_t g = 0; g < cfg_.generations; ++g) {
      std::vector<Individual> next(population.begin(), population.begin() + static_cast<std::ptrdiff_t>(elites));
      while (next.size() < cfg_.population_size) {
        const auto& a = tournament(population);
        const auto& b = tournament(population);
        next.push_back(offspring(a, b));
      }
      population = std::move(next);
      rank(population);
      out.best_fitness.push_back(population.front().fitness);
    }

    std::map<std::string, const Individual*> unique;
    for (const auto& ind : population) unique.emplace(ind.mask, &ind);
    for (const auto& [mask, ind] : unique) {
      std::vector<std::uint32_t> indices;
      for (std::uint32_t i = 0; i < mask.size(); ++i) {
        if (mask[i]) indices.push_back(i);
      }
      out.candidates.push_back(make_candidate(doc_, std::move(indices)));
    }
    std::sort(out.candidates.begin(), out.candidates.end(),
              [](const Candidate& x, const Candidate& y) { return x.sentence_indices < y.sentence_indices; });
    out.evaluations = cache_.size();
    return out;
  }

 private:
  const Document& doc_;
  ReferenceScorer scorer_;
  NativeMetric metric_;
  const GenConfig& cfg_;
  std::size_t budget_;
  double mutation_rate_;
  Rng rng_;
  std::vector<std::uint32_t> feasible_;
  std::unordered_map<std::string, double> cache_;

  std::size_t sentence_tokens(std::size_t i) const { return doc_.sentence_tokens[i].size(); }

  void evaluate(Individual& ind) {
    auto it = cache_.find(ind.mask);
    if (it != cache_.end()) {
      ind.fitness = it->second;
      return;
    }
    TokenSeq tokens;
    tokens.reserve(ind.tokens);
    for (std::size_t i = 0; i < ind.mask.size(); ++i) {
      if (ind.mask[i]) tokens.insert(tokens.end(), doc_.sentence_tokens[i].begin(), doc_.sentence_tokens[i].end());
    }
    ind.fitness = scorer_.score(metric_, tokens);
    cache_.emplace(ind.mask, ind.fitness);
  }

  Individual random_individual() {
    Individual ind;
    ind.mask.assign(doc_.sentence_count(), 0);
    auto order = feasible_;
    rng_.shuffle(order.begin(), order.end());
    const auto target = 1 + rng_.below(order.size());
    std::size_t added = 0;
    for (auto i : order) {
      if (added == target) break;
      if (ind.tokens + sentence_tokens(i) <= budget_) {
        ind.mask[i] = 1;
        ind.tokens += sentence_tokens(i);
        ++added;
      }
    }
    evaluate(ind);
    return ind;
  }

  // Population is sorted best-first, so the lowest index wins fitness ties.
  const Individual& tournament(const std::vector<Individual>& population) {
    std::size_t best = rng_.below(population.size());
    for (std::size_t t = 1; t < cfg_.tournament_size; ++t) best = std::min(best, rng_.below(population.size()));
    return population[best];
  }

  Individual offspring(const Individual& a, const Individual& b) {
    Individual child;
    child.mask.assign(a.mask.size(), 0);
    for (std::size_t i = 0; i < child.mask.size(); ++i) {
      child.mask[i] = rng_.coin(0.5) ? a.mask[i] : b.mask[i];
      if (rng_.coin(mutation_rate_)) child.mask[i] ^= 1;
      if (child.mask[i]) child.tokens += sentence_tokens(i);
    }
    repair(child);
    evaluate(child);
    return child;
  }

  // Over budget: drop uniformly chosen selected sentences. Empty: add one
  // uniformly chosen sentence that fits on its own.
  void repair(Individual& ind) {
    std::vector<std::uint32_t> selected;
    for (std::uint32_t i = 0; i < ind.mask.size(); ++i) {
      if (ind.mask[i]) selected.push_back(i);
    }
    while (ind.tokens > budget_) {
      auto pick = rng_.below(selected.size());
      auto i = selected[pick];
      ind.mask[i] = 0;
      ind.tokens -= sentence_tokens(i);
      selected.erase(selected.begin() + static_cast<std::ptrdiff_t>(pick));
    }
    if (selected.empty()) {
      auto i = feasible_[rng_.below(feasible_.size())];
      ind.mask[i] = 1;
      ind.tokens = sentence_tokens(i);
    }
  }

  static void rank(std::vector<Individual>& population) {
    std::stable_sort(population.begin(), population.end(),
                     [](const Individual& x, const Individual& y) { return x.fitness > y.fitness; });
  }
};

}  // namespace

GeneratedPool generate_pool(const Document& doc, const Reference& ref, NativeMetric metric, const GenConfig& cfg) {
  cfg.validate();
  if (doc.sentence_count() == 0) throw ValidationError("document '" + doc.id + "' has no sentences");
  return Evolution(doc, ref, metric, cfg).run();
}

GeneratedPool generate_pool(const Document& doc, const Reference& ref, std::string_view metric_name,
                            const GenConfig& cfg) {
  auto metric = parse_native_metric(metric_name);
  if (!metric) {
    throw ValidationError("metric '" + std::string(metric_name) +
                          "' cannot drive generation; fitness must be one of R1, R2, RL, JS2");
  }
  return generate_pool(doc, ref, *metric, cfg);
}

CandidateStore generate_all(const Corpus& corpus, const std::vector<NativeMetric>& metrics, const GenConfig& cfg,
                            std::size_t jobs) {
  if (metrics.empty()) throw ValidationError("generation needs at least one native metric");
  cfg.validate();
  const auto& docs = corpus.documents();
  std::vector<DocumentPool> pools(docs.size());
  std::vector<std::string> errors(docs.size());

  parallel_for(docs.size(), jobs, [&](std::size_t d) {
    DocumentPool pool;
    pool.doc_id = docs[d].id;
    std::map<std::vector<std::uint32_t>, StoredCandidate> merged;
    try {
      for (auto metric : metrics) {
        auto generated = generate_pool(docs[d], corpus.references()[d], metric, cfg);
        pool.generated += generated.candidates.size();
        for (auto& cand : generated.candidates) {
          auto [it, inserted] = merged.try_emplace(cand.sentence_indices);
          if (inserted) {
            it->second.sentence_indices = cand.sentence_indices;
            it->second.candidate_id = cand.candidate_id;
          }
          it->second.provenance.emplace_back(metric_name(metric));
        }
      }
    } catch (const ValidationError& e) {
      errors[d] = e.what();
      return;
    }
    for (auto& [key, cand] : merged) pool.candidates.push_back(std::move(cand));
    pools[d] = std::move(pool);
  });

  CandidateStore store;
  for (std::size_t d = 0; d < docs.size(); ++d) {
    if (!errors[d].empty()) {
      log_warning("skipping document '" + docs[d].id + "': " + errors[d]);
      store.skipped.emplace_back(docs[d].id, errors[d]);
      continue;
    }
    store.documents.push_back(std::move(pools[d]));
  }
  return store;
}

}  // namespace metaeval
