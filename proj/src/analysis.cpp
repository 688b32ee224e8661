#include "metaeval/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "metaeval/error.hpp"
#include "metaeval/parallel.hpp"
#include "metaeval/random.hpp"

namespace metaeval {

BinAssignment bin_summaries(const ScoreMatrix& matrix) {
  const auto n = matrix.candidate_count();
  if (n < 3) {
    throw ValidationError("document '" + matrix.doc_id + "' has " + std::to_string(n) +
                          " candidate(s); binning needs at least 3");
  }
  if (matrix.mean_normalized.size() != n) {
    throw ValidationError("document '" + matrix.doc_id + "' is not normalized");
  }
  const auto [lo_it, hi_it] = std::minmax_element(matrix.mean_normalized.begin(), matrix.mean_normalized.end());
  const double lo = *lo_it;
  const double width = (*hi_it - lo) / 3.0;

  BinAssignment out;
  out.doc_id = matrix.doc_id;
  out.lower_boundary = lo + width;
  out.upper_boundary = lo + 2.0 * width;
  out.degenerate = width == 0.0;
  out.labels.reserve(n);
  for (double v : matrix.mean_normalized) {
    out.labels.push_back(v >= out.upper_boundary ? Bin::T : v >= out.lower_boundary ? Bin::M : Bin::L);
  }
  return out;
}

std::vector<BinAssignment> bin_summaries(const ScoreSet& scores) {
  std::vector<BinAssignment> out;
  out.reserve(scores.documents.size());
  for (const auto& doc : scores.documents) out.push_back(bin_summaries(doc));
  return out;
}

std::string_view bin_spec_name(BinSpec spec) {
  switch (spec) {
    case BinSpec::LMT: return "L+M+T";
    case BinSpec::MT: return "M+T";
    case BinSpec::T: return "T";
    case BinSpec::L: return "L";
    case BinSpec::M: return "M";
  }
  return "?";
}

std::string_view bin_mode_name(BinMode mode) {
  return mode == BinMode::cumulative ? "cumulative" : "noncumulative";
}

std::vector<BinSpec> bin_specs(BinMode mode) {
  if (mode == BinMode::cumulative) return {BinSpec::LMT, BinSpec::MT, BinSpec::T};
  return {BinSpec::L, BinSpec::M, BinSpec::T};
}

bool bin_in_spec(Bin bin, BinSpec spec) {
  switch (spec) {
    case BinSpec::LMT: return true;
    case BinSpec::MT: return bin != Bin::L;
    case BinSpec::T: return bin == Bin::T;
    case BinSpec::L: return bin == Bin::L;
    case BinSpec::M: return bin == Bin::M;
  }
  return false;
}

const CorrelationRow* CorrelationTable::find(std::string_view a, std::string_view b, BinSpec spec) const {
  for (const auto& row : rows) {
    if (row.spec != spec) continue;
    if ((row.metric_a == a && row.metric_b == b) || (row.metric_a == b && row.metric_b == a)) return &row;
  }
  return nullptr;
}

namespace {

enum class TauOutcome : std::uint8_t { kept, insignificant, degenerate, skipped };

struct DocTau {
  TauOutcome outcome = TauOutcome::skipped;
  double tau = 0.0;
};

std::vector<std::pair<std::size_t, std::size_t>> metric_pairs(std::size_t metrics) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t a = 0; a < metrics; ++a) {
    for (std::size_t b = a + 1; b < metrics; ++b) pairs.emplace_back(a, b);
  }
  return pairs;
}

}  // namespace

CorrelationTable correlation_table(const ScoreSet& scores, const std::vector<BinAssignment>& bins, BinMode mode,
                                   double alpha, std::size_t jobs) {
  if (bins.size() != scores.documents.size()) {
    throw ValidationError("bin assignments cover " + std::to_string(bins.size()) + " documents, scores cover " +
                          std::to_string(scores.documents.size()));
  }
  const auto pairs = metric_pairs(scores.metrics.size());
  const auto specs = bin_specs(mode);
  const std::size_t cells = pairs.size() * specs.size();

  // results[doc][pair * specs + spec]
  std::vector<std::vector<DocTau>> results(scores.documents.size());
  parallel_for(scores.documents.size(), jobs, [&](std::size_t d) {
    const auto& doc = scores.documents[d];
    const auto& labels = bins[d].labels;
    if (labels.size() != doc.candidate_count() || bins[d].doc_id != doc.doc_id) {
      throw ValidationError("bin assignment does not match document '" + doc.doc_id + "'");
    }
    results[d].resize(cells);
    for (std::size_t s = 0; s < specs.size(); ++s) {
      std::vector<std::size_t> members;
      for (std::size_t c = 0; c < labels.size(); ++c) {
        if (bin_in_spec(labels[c], specs[s])) members.push_back(c);
      }
      if (members.size() < 2) continue;  // skipped
      std::vector<std::vector<double>> cols(scores.metrics.size(), std::vector<double>(members.size()));
      for (std::size_t m = 0; m < scores.metrics.size(); ++m) {
        for (std::size_t k = 0; k < members.size(); ++k) cols[m][k] = doc.raw[m][members[k]];
      }
      for (std::size_t p = 0; p < pairs.size(); ++p) {
        auto r = kendall_tau(cols[pairs[p].first], cols[pairs[p].second]);
        auto& cell = results[d][p * specs.size() + s];
        if (r.degenerate) {
          cell.outcome = TauOutcome::degenerate;
        } else if (!(r.p_value < alpha)) {
          cell.outcome = TauOutcome::insignificant;
        } else {
          cell.outcome = TauOutcome::kept;
          cell.tau = r.tau;
        }
      }
    }
  });

  CorrelationTable table;
  table.mode = mode;
  table.alpha = alpha;
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    for (std::size_t s = 0; s < specs.size(); ++s) {
      CorrelationRow row;
      row.metric_a = scores.metrics[pairs[p].first];
      row.metric_b = scores.metrics[pairs[p].second];
      row.spec = specs[s];
      double sum = 0.0;
      for (const auto& doc_results : results) {
        const auto& cell = doc_results[p * specs.size() + s];
        switch (cell.outcome) {
          case TauOutcome::kept:
            sum += cell.tau;
            ++row.documents;
            break;
          case TauOutcome::insignificant: ++row.dropped_insignificant; break;
          case TauOutcome::degenerate: ++row.dropped_degenerate; break;
          case TauOutcome::skipped: ++row.skipped; break;
        }
      }
      if (row.documents > 0) row.mean_tau = sum / static_cast<double>(row.documents);
      table.rows.push_back(std::move(row));
    }
  }
  return table;
}

namespace {

struct Entry {
  std::size_t doc;
  std::size_t cand;
};

}  // namespace

std::vector<DisagreementCurve> disagreement(const ScoreSet& scores, const DisagreementConfig& cfg) {
  if (cfg.nbins == 0) throw ValidationError("disagreement needs at least one bin");
  if (scores.metrics.size() < 2) throw ValidationError("disagreement needs at least two metrics");
  const std::size_t anchor = cfg.anchor_metric.empty() ? 0 : scores.metric_index(cfg.anchor_metric);
  if (anchor == scores.metrics.size()) throw ValidationError("unknown anchor metric '" + cfg.anchor_metric + "'");

  std::vector<Entry> entries;
  for (std::size_t d = 0; d < scores.documents.size(); ++d) {
    if (!scores.documents[d].is_normalized()) {
      throw ValidationError("document '" + scores.documents[d].doc_id + "' is not normalized");
    }
    for (std::size_t c = 0; c < scores.documents[d].candidate_count(); ++c) entries.push_back({d, c});
  }
  if (entries.size() < 2) throw ValidationError("disagreement needs at least two scored candidates");

  const auto pairs = metric_pairs(scores.metrics.size());
  std::vector<DisagreementCurve> curves(pairs.size());
  parallel_for(pairs.size(), cfg.jobs, [&](std::size_t p) {
    const auto [ma, mb] = pairs[p];
    Rng rng(derive_seed(cfg.seed, "disagreement/" + scores.metrics[ma] + "/" + scores.metrics[mb]));

    std::vector<double> keys(cfg.pairs);
    std::vector<std::int8_t> verdict(cfg.pairs);  // -1 tied, 0 agree, 1 disagree
    for (std::size_t k = 0; k < cfg.pairs; ++k) {
      const auto i = rng.below(entries.size());
      auto j = rng.below(entries.size() - 1);
      if (j >= i) ++j;
      const auto& ea = entries[i];
      const auto& eb = entries[j];
      const auto& da = scores.documents[ea.doc];
      const auto& db = scores.documents[eb.doc];
      keys[k] = 0.5 * (da.normalized[anchor][ea.cand] + db.normalized[anchor][eb.cand]);
      const double a1 = da.raw[ma][ea.cand];
      const double a2 = db.raw[ma][eb.cand];
      const double b1 = da.raw[mb][ea.cand];
      const double b2 = db.raw[mb][eb.cand];
      if (a1 == a2 || b1 == b2) {
        verdict[k] = -1;
      } else {
        verdict[k] = (a1 > a2) != (b1 > b2) ? 1 : 0;
      }
    }

    DisagreementCurve out;
    out.metric_a = scores.metrics[ma];
    out.metric_b = scores.metrics[mb];
    std::size_t overall_disagree = 0;
    for (auto v : verdict) {
      if (v < 0) continue;
      ++out.overall_count;
      overall_disagree += static_cast<std::size_t>(v);
    }
    if (out.overall_count > 0) {
      out.overall = static_cast<double>(overall_disagree) / static_cast<double>(out.overall_count);
    }

    double kmin = 0.0;
    double kmax = 0.0;
    if (!keys.empty()) {
      const auto [lo, hi] = std::minmax_element(keys.begin(), keys.end());
      kmin = *lo;
      kmax = *hi;
    }
    const double width = (kmax - kmin) / static_cast<double>(cfg.nbins);
    auto threshold = [&](std::size_t i) { return i >= cfg.nbins ? kmax : kmin + static_cast<double>(i) * width; };

    std::vector<std::size_t> counts(cfg.nbins, 0);
    std::vector<std::size_t> disagree(cfg.nbins, 0);
    for (std::size_t k = 0; k < keys.size(); ++k) {
      if (verdict[k] < 0) continue;
      const double key = keys[k];
      if (cfg.mode == BinMode::noncumulative) {
        std::size_t b = 0;
        if (width > 0.0) {
          b = std::min(cfg.nbins - 1, static_cast<std::size_t>(std::floor((key - kmin) / width)));
        }
        ++counts[b];
        disagree[b] += static_cast<std::size_t>(verdict[k]);
        continue;
      }
      for (std::size_t b = 0; b < cfg.nbins; ++b) {
        const bool inside = cfg.accumulation == Accumulation::top_anchored ? key >= threshold(b)
                                                                           : key <= threshold(b + 1);
        if (inside) {
          ++counts[b];
          disagree[b] += static_cast<std::size_t>(verdict[k]);
        }
      }
    }

    for (std::size_t b = 0; b < cfg.nbins; ++b) {
      double position = 0.0;
      if (cfg.mode == BinMode::noncumulative) {
        position = kmin + (static_cast<double>(b) + 0.5) * width;
      } else {
        position = cfg.accumulation == Accumulation::top_anchored ? threshold(b) : threshold(b + 1);
      }
      out.curve.positions.push_back(position);
      out.curve.counts.push_back(counts[b]);
      if (counts[b] > 0) {
        out.curve.values.emplace_back(static_cast<double>(disagree[b]) / static_cast<double>(counts[b]));
      } else {
        out.curve.values.emplace_back(std::nullopt);
      }
    }
    curves[p] = std::move(out);
  });
  return curves;
}

std::vector<AnchorRatio> anchor_ratios(const ScoreMatrix& matrix, const std::vector<std::size_t>& anchors) {
  if (matrix.metric_count() < 2) throw ValidationError("F/N ratios need at least two metrics");
  if (matrix.mean_normalized.size() != matrix.candidate_count()) {
    throw ValidationError("document '" + matrix.doc_id + "' is not normalized");
  }
  std::vector<AnchorRatio> out;
  out.reserve(anchors.size());
  const auto n = matrix.candidate_count();
  for (auto s : anchors) {
    AnchorRatio r;
    r.anchor_mean = matrix.mean_normalized.at(s);
    for (std::size_t x = 0; x < n; ++x) {
      if (x == s) continue;
      bool all_above = true;
      bool any_above = false;
      bool all_below = true;
      bool any_below = false;
      for (const auto& col : matrix.raw) {
        const bool above = col[x] > col[s];
        const bool below = col[x] < col[s];
        all_above = all_above && above;
        any_above = any_above || above;
        all_below = all_below && below;
        any_below = any_below || below;
      }
      r.above_all += all_above;
      r.above_any += any_above;
      r.below_all += all_below;
      r.below_any += any_below;
    }
    out.push_back(r);
  }
  return out;
}

RatioCurves ratio_curves(const ScoreSet& scores, const RatioConfig& cfg) {
  if (scores.metrics.size() < 2) throw ValidationError("F/N ratios need at least two metrics");
  if (cfg.nbins == 0) throw ValidationError("F/N ratios need at least one bin");

  std::vector<std::vector<AnchorRatio>> per_doc(scores.documents.size());
  parallel_for(scores.documents.size(), cfg.jobs, [&](std::size_t d) {
    const auto& doc = scores.documents[d];
    if (doc.candidate_count() < 2) {
      throw ValidationError("document '" + doc.doc_id + "' needs at least two candidates for F/N ratios");
    }
    std::vector<std::size_t> anchors(doc.candidate_count());
    std::iota(anchors.begin(), anchors.end(), 0);
    if (cfg.anchors_per_document && *cfg.anchors_per_document < anchors.size()) {
      Rng rng(derive_seed(cfg.seed, "ratio/" + doc.doc_id));
      rng.shuffle(anchors.begin(), anchors.end());
      anchors.resize(*cfg.anchors_per_document);
      std::sort(anchors.begin(), anchors.end());
    }
    per_doc[d] = anchor_ratios(doc, anchors);
  });

  std::vector<double> fn_sum(cfg.nbins, 0.0);
  std::vector<double> fp_sum(cfg.nbins, 0.0);
  std::vector<std::size_t> fn_count(cfg.nbins, 0);
  std::vector<std::size_t> fp_count(cfg.nbins, 0);
  for (const auto& doc_ratios : per_doc) {
    for (const auto& r : doc_ratios) {
      const auto b = std::min(cfg.nbins - 1,
                              static_cast<std::size_t>(std::floor(r.anchor_mean * static_cast<double>(cfg.nbins))));
      if (r.above_any > 0) {
        fn_sum[b] += static_cast<double>(r.above_all) / static_cast<double>(r.above_any);
        ++fn_count[b];
      }
      if (r.below_any > 0) {
        fp_sum[b] += static_cast<double>(r.below_all) / static_cast<double>(r.below_any);
        ++fp_count[b];
      }
    }
  }

  RatioCurves out;
  for (std::size_t b = 0; b < cfg.nbins; ++b) {
    const double center = (static_cast<double>(b) + 0.5) / static_cast<double>(cfg.nbins);
    out.fn.positions.push_back(center);
    out.fprime.positions.push_back(center);
    out.fn.counts.push_back(fn_count[b]);
    out.fprime.counts.push_back(fp_count[b]);
    out.fn.values.push_back(fn_count[b] ? std::optional(fn_sum[b] / static_cast<double>(fn_count[b])) : std::nullopt);
    out.fprime.values.push_back(fp_count[b] ? std::optional(fp_sum[b] / static_cast<double>(fp_count[b]))
                                            : std::nullopt);
  }
  return out;
}

Curve fn_ratio(const ScoreSet& scores, const RatioConfig& cfg) { return ratio_curves(scores, cfg).fn; }
Curve fprime_ratio(const ScoreSet& scores, const RatioConfig& cfg) { return ratio_curves(scores, cfg).fprime; }

ScoreSet random_metric_baseline(std::size_t n_docs, std::size_t n_candidates, std::size_t n_metrics,
                                std::uint64_t seed) {
  if (n_docs == 0 || n_candidates == 0 || n_metrics == 0) {
    throw ValidationError("random baseline needs at least one document, candidate and metric");
  }
  ScoreSet scores;
  for (std::size_t m = 0; m < n_metrics; ++m) scores.metrics.push_back("U" + std::to_string(m + 1));
  Rng rng(derive_seed(seed, "random-baseline"));
  char buf[32];
  for (std::size_t d = 0; d < n_docs; ++d) {
    ScoreMatrix doc;
    std::snprintf(buf, sizeof buf, "random-%05zu", d);
    doc.doc_id = buf;
    doc.raw.assign(n_metrics, std::vector<double>(n_candidates));
    for (std::size_t c = 0; c < n_candidates; ++c) {
      std::snprintf(buf, sizeof buf, "c%04zu", c);
      doc.candidate_ids.emplace_back(buf);
      for (std::size_t m = 0; m < n_metrics; ++m) doc.raw[m][c] = rng.uniform();
    }
    if (n_candidates >= 2) normalize(doc);
    scores.documents.push_back(std::move(doc));
  }
  return scores;
}

}  // namespace metaeval
