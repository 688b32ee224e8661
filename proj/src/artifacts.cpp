#include "metaeval/artifacts.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>

#include "metaeval/error.hpp"
#include "metaeval/random.hpp"

namespace metaeval {

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, sep)) fields.push_back(field);
  if (!line.empty() && line.back() == sep) fields.emplace_back();
  return fields;
}

std::string join(const std::vector<std::string>& parts, char sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += sep;
    out += parts[i];
  }
  return out;
}

double parse_double(const std::string& s, const std::string& where) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw ValidationError(where + "expected a number, got '" + s + "'");
  }
  return v;
}

bool next_data_line(std::istream& in, std::string& line, std::size_t& line_no) {
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty() && line.front() != '#') return true;
  }
  return false;
}

std::string optional_real(const std::optional<double>& v) { return v ? format_real(*v) : std::string(); }

}  // namespace

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string format_real(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

std::uint64_t file_digest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return fnv1a64(bytes);
}

void write_provenance(std::ostream& out, const Provenance& p) {
  out << "# metaeval " << p.kind << '\n';
  out << "# config_hash=" << p.config_hash << '\n';
  if (!p.upstream_hash.empty()) out << "# upstream_hash=" << p.upstream_hash << '\n';
  out << "# seed=" << p.seed << '\n';
  if (!p.config_json.empty()) out << "# config=" << p.config_json << '\n';
}

Provenance read_provenance(std::istream& in, const std::string& expected_kind, const std::string& source) {
  Provenance p;
  std::string line;
  bool first = true;
  while (in.peek() == '#') {
    std::getline(in, line);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (first) {
      const std::string prefix = "# metaeval ";
      if (line.rfind(prefix, 0) != 0) throw ValidationError(source + ": not a metaeval artifact");
      p.kind = line.substr(prefix.size());
      first = false;
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos || line.size() < 2) continue;
    const auto key = line.substr(2, eq - 2);
    const auto value = line.substr(eq + 1);
    if (key == "config_hash") {
      p.config_hash = value;
    } else if (key == "upstream_hash") {
      p.upstream_hash = value;
    } else if (key == "seed") {
      auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), p.seed);
      if (ec != std::errc() || ptr != value.data() + value.size()) throw ValidationError(source + ": malformed seed");
    } else if (key == "config") {
      p.config_json = value;
    }
  }
  if (first) throw ValidationError(source + ": missing metaeval provenance header");
  if (p.kind != expected_kind) {
    throw ValidationError(source + ": expected a " + expected_kind + ", found a " + p.kind);
  }
  return p;
}

void write_candidate_store(std::ostream& out, const CandidateStore& store, const Provenance& p) {
  write_provenance(out, p);
  for (const auto& [doc, reason] : store.skipped) out << "# skipped=" << doc << ": " << reason << '\n';
  out << "doc_id,candidate_id,sentences,provenance\n";
  for (const auto& doc : store.documents) {
    for (const auto& c : doc.candidates) {
      std::vector<std::string> idx;
      for (auto i : c.sentence_indices) idx.push_back(std::to_string(i));
      out << doc.doc_id << ',' << c.candidate_id << ',' << join(idx, ' ') << ',' << join(c.provenance, ';') << '\n';
    }
  }
}

CandidateStore read_candidate_store(std::istream& in, Provenance& p, const std::string& source) {
  p = read_provenance(in, "candidate-store", source);
  CandidateStore store;
  std::string line;
  std::size_t line_no = 0;
  if (!next_data_line(in, line, line_no) || line != "doc_id,candidate_id,sentences,provenance") {
    throw ValidationError(source + ": missing header doc_id,candidate_id,sentences,provenance");
  }
  while (next_data_line(in, line, line_no)) {
    const auto where = source + ": data line " + std::to_string(line_no) + ": ";
    auto f = split(line, ',');
    if (f.size() != 4) throw ValidationError(where + "expected 4 fields");
    StoredCandidate c;
    c.candidate_id = f[1];
    try {
      c.sentence_indices = parse_candidate_id(f[1]);
    } catch (const ValidationError& e) {
      throw ValidationError(where + e.what());
    }
    c.provenance = split(f[3], ';');
    if (store.documents.empty() || store.documents.back().doc_id != f[0]) {
      store.documents.push_back(DocumentPool{f[0], {}, 0});
    }
    store.documents.back().candidates.push_back(std::move(c));
  }
  for (auto& doc : store.documents) {
    for (const auto& c : doc.candidates) doc.generated += c.provenance.size();
  }
  return store;
}

void write_score_set(std::ostream& out, const ScoreSet& scores, const Provenance& p) {
  write_provenance(out, p);
  out << "doc_id,candidate_id";
  for (const auto& m : scores.metrics) out << ',' << m;
  for (const auto& m : scores.metrics) out << ",norm:" << m;
  out << ",mean_normalized\n";
  for (const auto& doc : scores.documents) {
    for (std::size_t c = 0; c < doc.candidate_count(); ++c) {
      out << doc.doc_id << ',' << doc.candidate_ids[c];
      for (const auto& col : doc.raw) out << ',' << format_real(col[c], 17);
      for (const auto& col : doc.normalized) out << ',' << format_real(col[c], 17);
      out << ',' << (doc.mean_normalized.empty() ? std::string() : format_real(doc.mean_normalized[c], 17)) << '\n';
    }
  }
}

ScoreSet read_score_set(std::istream& in, Provenance& p, const std::string& source) {
  p = read_provenance(in, "score-matrix", source);
  std::string line;
  std::size_t line_no = 0;
  if (!next_data_line(in, line, line_no)) throw ValidationError(source + ": missing header");
  auto header = split(line, ',');
  if (header.size() < 3 || header[0] != "doc_id" || header[1] != "candidate_id" ||
      header.back() != "mean_normalized") {
    throw ValidationError(source + ": malformed header");
  }
  ScoreSet scores;
  for (std::size_t i = 2; i + 1 < header.size() && header[i].rfind("norm:", 0) != 0; ++i) {
    scores.metrics.push_back(header[i]);
  }
  const std::size_t m = scores.metrics.size();
  if (header.size() != 2 + 2 * m + 1) throw ValidationError(source + ": malformed header");

  while (next_data_line(in, line, line_no)) {
    const auto where = source + ": data line " + std::to_string(line_no) + ": ";
    auto f = split(line, ',');
    if (f.size() != header.size()) throw ValidationError(where + "expected " + std::to_string(header.size()) + " fields");
    if (scores.documents.empty() || scores.documents.back().doc_id != f[0]) {
      ScoreMatrix doc;
      doc.doc_id = f[0];
      doc.raw.assign(m, {});
      scores.documents.push_back(std::move(doc));
    }
    auto& doc = scores.documents.back();
    doc.candidate_ids.push_back(f[1]);
    for (std::size_t k = 0; k < m; ++k) doc.raw[k].push_back(parse_double(f[2 + k], where));
  }
  validate_rectangular(scores);
  normalize(scores);
  return scores;
}

void write_correlation_table(std::ostream& out, const CorrelationTable& table, const Provenance& p) {
  write_provenance(out, p);
  out << "# mode=" << bin_mode_name(table.mode) << '\n';
  out << "# alpha=" << format_real(table.alpha) << '\n';
  out << "metric_a,metric_b,bin,mean_tau,documents,dropped_insignificant,dropped_degenerate,skipped\n";
  for (const auto& r : table.rows) {
    out << r.metric_a << ',' << r.metric_b << ',' << bin_spec_name(r.spec) << ',' << optional_real(r.mean_tau) << ','
        << r.documents << ',' << r.dropped_insignificant << ',' << r.dropped_degenerate << ',' << r.skipped << '\n';
  }
}

void write_disagreement(std::ostream& out, const std::vector<DisagreementCurve>& curves, const Provenance& p) {
  write_provenance(out, p);
  out << "metric_a,metric_b,threshold_or_center,value,count\n";
  for (const auto& c : curves) {
    for (std::size_t b = 0; b < c.curve.positions.size(); ++b) {
      out << c.metric_a << ',' << c.metric_b << ',' << format_real(c.curve.positions[b]) << ','
          << optional_real(c.curve.values[b]) << ',' << c.curve.counts[b] << '\n';
    }
  }
}

void write_curve(std::ostream& out, const Curve& curve, const Provenance& p) {
  write_provenance(out, p);
  out << "threshold_or_center,value,count\n";
  for (std::size_t b = 0; b < curve.positions.size(); ++b) {
    out << format_real(curve.positions[b]) << ',' << optional_real(curve.values[b]) << ',' << curve.counts[b] << '\n';
  }
}

void write_properties(std::ostream& out, const std::vector<PropertyRecord>& records, const Provenance& p) {
  write_provenance(out, p);
  out << "doc_id,eos,abstractiveness,coverage\n";
  for (const auto& r : records) {
    out << r.doc_id << ',' << format_real(r.eos) << ',' << format_real(r.abstractiveness) << ','
        << format_real(r.coverage) << '\n';
  }
}

void write_scatter(std::ostream& out, const std::vector<PropertyRecord>& records, const std::vector<Scatter>& scatters,
                   const Provenance& p) {
  write_provenance(out, p);
  std::map<std::string, const PropertyRecord*> by_doc;
  for (const auto& r : records) by_doc.emplace(r.doc_id, &r);
  out << "doc_id,eos,abstractiveness,coverage,metric_a,metric_b,tau\n";
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& s : scatters) {
    // Significance does not depend on the property, so one scatter per pair suffices.
    if (!seen.emplace(s.metric_a, s.metric_b).second) continue;
    std::vector<const ScatterRow*> rows;
    for (const auto& row : s.rows) rows.push_back(&row);
    std::sort(rows.begin(), rows.end(), [](const ScatterRow* a, const ScatterRow* b) { return a->doc_id < b->doc_id; });
    for (const auto* row : rows) {
      const auto& rec = *by_doc.at(row->doc_id);
      out << rec.doc_id << ',' << format_real(rec.eos) << ',' << format_real(rec.abstractiveness) << ','
          << format_real(rec.coverage) << ',' << s.metric_a << ',' << s.metric_b << ',' << format_real(row->tau)
          << '\n';
    }
  }
}

void write_trend(std::ostream& out, const std::vector<Scatter>& scatters, const Provenance& p) {
  write_provenance(out, p);
  out << "property,metric_a,metric_b,doc_id,value,tau,moving_average\n";
  for (const auto& s : scatters) {
    for (const auto& row : s.rows) {
      out << property_name(s.property) << ',' << s.metric_a << ',' << s.metric_b << ',' << row.doc_id << ','
          << format_real(row.property_value) << ',' << format_real(row.tau) << ',' << optional_real(row.trend) << '\n';
    }
  }
}

void write_correlation_markdown(std::ostream& out, const CorrelationTable& table,
                                const std::vector<std::string>& metrics) {
  if (metrics.size() < 2) return;
  out << "| Metric | Bin |";
  for (std::size_t b = 1; b < metrics.size(); ++b) out << ' ' << metrics[b] << " |";
  out << "\n|---|---|";
  for (std::size_t b = 1; b < metrics.size(); ++b) out << "---|";
  out << '\n';
  for (std::size_t a = 0; a + 1 < metrics.size(); ++a) {
    for (auto spec : bin_specs(table.mode)) {
      out << "| " << metrics[a] << " | " << bin_spec_name(spec) << " |";
      for (std::size_t b = 1; b < metrics.size(); ++b) {
        std::string cell;
        if (b > a) {
          if (const auto* row = table.find(metrics[a], metrics[b], spec); row && row->mean_tau) {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.2f", *row->mean_tau);
            cell = buf;
          } else {
            cell = "n/a";
          }
        }
        out << ' ' << cell << " |";
      }
      out << '\n';
    }
  }
}

}  // namespace metaeval
