// SPDX-License-Identifier: Apache-2.0
#include "citeaccel/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace citeaccel {

using nlohmann::json;

std::size_t Dataset::author_count() const {
  std::size_t n = 0;
  for (const auto& [_, records] : cohorts) n += records.size();
  return n;
}

void validate(const Dataset& dataset) {
  if (dataset.format_version != kFormatVersion)
    throw SchemaError("format_version", "unknown format_version '" + dataset.format_version + "'");
  std::set<std::string> ids;
  for (const auto& [label, records] : dataset.cohorts) {
    for (std::size_t i = 0; i < records.size(); ++i) {
      const auto path = "cohorts." + label + "[" + std::to_string(i) + "]";
      if (!ids.insert(records[i].author_id).second)
        throw SchemaError(path + ".author_id", "duplicate author_id '" + records[i].author_id + "'");
      const auto violations = citeaccel::validate(records[i]);
      if (!violations.empty())
        throw SchemaError(path, violations.front().kind + ": " + violations.front().message);
    }
  }
}

// ---------------------------------------------------------------------------
// CSV ingest

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const auto comma = line.find(',', pos);
    out.push_back(trim(line.substr(pos, comma == std::string_view::npos ? line.npos : comma - pos)));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

template <typename T>
T parse_number(std::string_view text, std::size_t line, std::string_view field) {
  T value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc{} || ptr != end)
    throw DataError("line " + std::to_string(line) + ": invalid " + std::string(field) + " '" +
                    std::string(text) + "'");
  return value;
}

struct PendingAuthor {
  AuthorRecord record;
  std::map<std::string, std::size_t> paper_index;
};

}  // namespace

IngestResult ingest_csv(std::istream& in, const IngestOptions& options) {
  IngestResult result;
  std::vector<PendingAuthor> authors;
  std::map<std::string, std::size_t> author_index;
  std::string raw;
  std::size_t line_no = 0;
  bool seen_row = false;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    if (!seen_row && line.starts_with("author_id")) {
      seen_row = true;
      continue;
    }
    seen_row = true;
    const auto fields = split(line);
    if (fields.size() != 5 && fields.size() != 3)
      throw DataError("line " + std::to_string(line_no) + ": expected 5 fields (author_id,paper_id,"
                      "pub_year,cite_year,count) or 3 fields (author_id,year,citations), got " +
                      std::to_string(fields.size()));
    const std::string author_id(fields[0]);
    if (author_id.empty()) throw DataError("line " + std::to_string(line_no) + ": empty author_id");
    const auto granularity = fields.size() == 5 ? Granularity::per_paper : Granularity::aggregate;
    auto [it, inserted] = author_index.try_emplace(author_id, authors.size());
    if (inserted) {
      PendingAuthor pending;
      pending.record.author_id = author_id;
      pending.record.granularity = granularity;
      authors.push_back(std::move(pending));
    }
    auto& pending = authors[it->second];
    if (pending.record.granularity != granularity)
      throw DataError("line " + std::to_string(line_no) + ": author '" + author_id +
                      "' mixes per-paper and aggregate rows");

    if (granularity == Granularity::aggregate) {
      const int year = parse_number<int>(fields[1], line_no, "year");
      const auto citations = parse_number<double>(fields[2], line_no, "citations");
      if (!(citations >= 0) || citations != std::floor(citations))
        throw DataError("line " + std::to_string(line_no) +
                        ": citations must be a non-negative integer");
      pending.record.yearly_citations[year] += citations;
      continue;
    }

    const std::string paper_id(fields[1]);
    const int pub_year = parse_number<int>(fields[2], line_no, "pub_year");
    int cite_year = parse_number<int>(fields[3], line_no, "cite_year");
    const auto count = parse_number<std::int64_t>(fields[4], line_no, "count");
    if (count < 0) throw DataError("line " + std::to_string(line_no) + ": negative count");
    if (cite_year < pub_year) {
      if (!options.clamp_pre_publication)
        throw DataError("line " + std::to_string(line_no) + ": citation precedes publication (" +
                        std::to_string(cite_year) + " < " + std::to_string(pub_year) + ")");
      result.warnings.push_back("line " + std::to_string(line_no) + ": citation year " +
                                std::to_string(cite_year) + " clamped to publication year " +
                                std::to_string(pub_year));
      cite_year = pub_year;
    }
    auto [pit, fresh] = pending.paper_index.try_emplace(paper_id, pending.record.papers.size());
    if (fresh) pending.record.papers.push_back({paper_id, pub_year, {}});
    auto& paper = pending.record.papers[pit->second];
    if (paper.pub_year != pub_year)
      throw DataError("line " + std::to_string(line_no) + ": paper '" + paper_id +
                      "' has conflicting pub_year " + std::to_string(pub_year) + " vs " +
                      std::to_string(paper.pub_year));
    paper.citations_by_year[cite_year] += count;
  }

  auto& cohort = result.dataset.cohorts[options.cohort];
  for (auto& pending : authors) {
    require_valid(pending.record);
    cohort.push_back(std::move(pending.record));
  }
  if (cohort.empty()) {
    result.dataset.cohorts.clear();
    result.warnings.push_back("empty input: no data rows");
  }
  return result;
}

IngestResult ingest_csv(const std::filesystem::path& path, const IngestOptions& options) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  auto result = ingest_csv(in, options);
  result.dataset.provenance.push_back("ingested from " + path.filename().string());
  return result;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

json record_to_json(const AuthorRecord& r) {
  json j;
  j["author_id"] = r.author_id;
  j["display_name"] = r.display_name;
  j["granularity"] = std::string(to_string(r.granularity));
  j["synthetic"] = r.synthetic;
  if (r.career_start_year) j["career_start_year"] = *r.career_start_year;
  if (r.observed_to) j["observed_to"] = *r.observed_to;
  if (r.granularity == Granularity::per_paper) {
    j["papers"] = json::array();
    for (const auto& p : r.papers) {
      json citations = json::object();
      for (const auto& [year, count] : p.citations_by_year) citations[std::to_string(year)] = count;
      j["papers"].push_back({{"paper_id", p.paper_id}, {"pub_year", p.pub_year}, {"citations", citations}});
    }
  } else {
    json yearly = json::object();
    for (const auto& [year, value] : r.yearly_citations) yearly[std::to_string(year)] = value;
    j["yearly_citations"] = yearly;
  }
  return j;
}

const json& field(const json& j, const std::string& key, const std::string& path) {
  const auto it = j.find(key);
  if (it == j.end()) throw SchemaError(path + "." + key, "missing field");
  return *it;
}

void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& path) {
  for (const auto& [key, _] : j.items())
    if (!known.contains(key)) throw SchemaError(path + "." + key, "unknown field");
}

std::string as_string(const json& j, const std::string& path) {
  if (!j.is_string()) throw SchemaError(path, "expected a string");
  return j.get<std::string>();
}

int as_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw SchemaError(path, "expected an integer");
  return j.get<int>();
}

int year_key(const std::string& key, const std::string& path) {
  int year = 0;
  const auto* end = key.data() + key.size();
  const auto [ptr, ec] = std::from_chars(key.data(), end, year);
  if (key.empty() || ec != std::errc{} || ptr != end) throw SchemaError(path, "year key must be an integer");
  return year;
}

AuthorRecord record_from_json(const json& j, const std::string& path) {
  if (!j.is_object()) throw SchemaError(path, "expected an object");
  reject_unknown(j, {"author_id", "display_name", "granularity", "synthetic", "career_start_year",
                     "observed_to", "papers", "yearly_citations"},
                 path);
  AuthorRecord r;
  r.author_id = as_string(field(j, "author_id", path), path + ".author_id");
  if (j.contains("display_name")) r.display_name = as_string(j["display_name"], path + ".display_name");
  const auto granularity = as_string(field(j, "granularity", path), path + ".granularity");
  if (granularity == "per-paper")
    r.granularity = Granularity::per_paper;
  else if (granularity == "aggregate")
    r.granularity = Granularity::aggregate;
  else
    throw SchemaError(path + ".granularity", "expected 'per-paper' or 'aggregate'");
  if (j.contains("synthetic")) {
    if (!j["synthetic"].is_boolean()) throw SchemaError(path + ".synthetic", "expected a boolean");
    r.synthetic = j["synthetic"].get<bool>();
  }
  if (j.contains("career_start_year"))
    r.career_start_year = as_int(j["career_start_year"], path + ".career_start_year");
  if (j.contains("observed_to")) r.observed_to = as_int(j["observed_to"], path + ".observed_to");

  if (r.granularity == Granularity::per_paper) {
    if (j.contains("yearly_citations"))
      throw SchemaError(path + ".yearly_citations", "not allowed on a per-paper record");
    const auto& papers = field(j, "papers", path);
    if (!papers.is_array()) throw SchemaError(path + ".papers", "expected an array");
    for (std::size_t i = 0; i < papers.size(); ++i) {
      const auto ppath = path + ".papers[" + std::to_string(i) + "]";
      const auto& pj = papers[i];
      if (!pj.is_object()) throw SchemaError(ppath, "expected an object");
      reject_unknown(pj, {"paper_id", "pub_year", "citations"}, ppath);
      PaperRecord p;
      p.paper_id = as_string(field(pj, "paper_id", ppath), ppath + ".paper_id");
      p.pub_year = as_int(field(pj, "pub_year", ppath), ppath + ".pub_year");
      const auto& citations = field(pj, "citations", ppath);
      if (!citations.is_object()) throw SchemaError(ppath + ".citations", "expected an object");
      for (const auto& [key, value] : citations.items()) {
        const auto cpath = ppath + ".citations." + key;
        const int year = year_key(key, cpath);
        if (!value.is_number_integer()) throw SchemaError(cpath, "count must be an integer");
        const auto count = value.get<std::int64_t>();
        if (count < 0) throw SchemaError(cpath, "negative count");
        if (year < p.pub_year) throw SchemaError(cpath, "citation precedes publication");
        p.citations_by_year[year] = count;
      }
      r.papers.push_back(std::move(p));
    }
  } else {
    if (j.contains("papers")) throw SchemaError(path + ".papers", "not allowed on an aggregate record");
    const auto& yearly = field(j, "yearly_citations", path);
    if (!yearly.is_object()) throw SchemaError(path + ".yearly_citations", "expected an object");
    for (const auto& [key, value] : yearly.items()) {
      const auto ypath = path + ".yearly_citations." + key;
      const int year = year_key(key, ypath);
      if (!value.is_number()) throw SchemaError(ypath, "expected a number");
      const auto v = value.get<double>();
      if (!(v >= 0) || !std::isfinite(v)) throw SchemaError(ypath, "negative count");
      if (!r.synthetic && v != std::floor(v))
        throw SchemaError(ypath, "fractional count on an empirical record");
      r.yearly_citations[year] = v;
    }
  }
  const auto violations = validate(r);
  if (!violations.empty()) throw SchemaError(path, violations.front().kind + ": " + violations.front().message);
  return r;
}

}  // namespace

std::string dataset_to_json(const Dataset& dataset) {
  json j;
  j["format_version"] = dataset.format_version;
  j["provenance"] = dataset.provenance;
  json cohorts = json::object();
  for (const auto& [label, records] : dataset.cohorts) {
    json arr = json::array();
    for (const auto& r : records) arr.push_back(record_to_json(r));
    cohorts[label] = std::move(arr);
  }
  j["cohorts"] = std::move(cohorts);
  return j.dump(2) + "\n";
}

Dataset dataset_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError("$", std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw SchemaError("$", "expected an object");
  reject_unknown(j, {"format_version", "cohorts", "provenance"}, "$");
  Dataset d;
  d.format_version = as_string(field(j, "format_version", "$"), "format_version");
  if (d.format_version != kFormatVersion)
    throw SchemaError("format_version", "unknown format_version '" + d.format_version + "'");
  if (j.contains("provenance")) {
    const auto& prov = j["provenance"];
    if (!prov.is_array()) throw SchemaError("provenance", "expected an array");
    for (std::size_t i = 0; i < prov.size(); ++i)
      d.provenance.push_back(as_string(prov[i], "provenance[" + std::to_string(i) + "]"));
  }
  const auto& cohorts = field(j, "cohorts", "$");
  if (!cohorts.is_object()) throw SchemaError("cohorts", "expected an object");
  for (const auto& [label, records] : cohorts.items()) {
    const auto cpath = "cohorts." + label;
    if (!records.is_array()) throw SchemaError(cpath, "expected an array");
    auto& out = d.cohorts[label];
    for (std::size_t i = 0; i < records.size(); ++i)
      out.push_back(record_from_json(records[i], cpath + "[" + std::to_string(i) + "]"));
  }
  validate(d);
  return d;
}

Dataset read_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return dataset_from_json(buf.str());
}

void write_dataset(const Dataset& dataset, const std::filesystem::path& path) {
  validate(dataset);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << dataset_to_json(dataset);
  if (!out) throw DataError("write failed for '" + path.string() + "'");
}

// ---------------------------------------------------------------------------
// CSV output

std::string format_value(double value) {
  if (value == 0) value = 0;  // no "-0"
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", value);
  return buf;
}

std::string csv_field(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void write_measures_csv(std::ostream& os, const std::vector<MeasureRow>& rows,
                        const CareerPolicy& policy) {
  os << "author_id,career_year,calendar_year,measure,params,value,career_start\n";
  const auto start = policy.str();
  for (const auto& r : rows)
    os << csv_field(r.author_id) << ',' << r.career_year << ',' << r.calendar_year << ','
       << to_string(r.measure) << ',' << describe_params(r.measure, r.params) << ','
       << format_value(r.value) << ',' << start << '\n';
}

void write_axioms_csv(std::ostream& os, const AxiomTable& table) {
  os << "axiom,measure,params,verdict,evidence\n";
  for (std::size_t r = 0; r < table.axioms.size(); ++r)
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      const auto& cell = table.at(r, c);
      os << to_string(table.axioms[r]) << ',' << table.columns[c].label << ','
         << csv_field(describe_params(cell.measure, cell.params)) << ',' << to_string(cell.verdict)
         << ',' << csv_field(cell.evidence) << '\n';
    }
}

void write_regression_csv(std::ostream& os, const RegressionResult& result,
                          const MeasureChoice& measure, const CareerPolicy& policy) {
  os << "author_id,x,y,measure,params,career_start\n";
  const auto params = describe_params(measure.id, measure.params);
  for (const auto& p : result.points)
    os << csv_field(p.author_id) << ',' << format_value(p.x) << ',' << format_value(p.y) << ','
       << to_string(measure.id) << ',' << params << ',' << policy.str() << '\n';
}

std::string regression_summary(const RegressionResult& result) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "n=%zu slope=%.15g intercept=%.15g r_squared=%.15g", result.n,
                result.slope, result.intercept, result.r_squared);
  return buf;
}

void write_cohorts_csv(std::ostream& os, const std::vector<CohortRow>& rows,
                       const MeasureChoice& measure, const CareerPolicy& policy) {
  os << "cohort,author_id,measure,params,value,career_start\n";
  const auto params = describe_params(measure.id, measure.params);
  for (const auto& r : rows)
    os << csv_field(r.cohort) << ',' << csv_field(r.author_id) << ',' << to_string(measure.id) << ','
       << params << ',' << format_value(r.value) << ',' << policy.str() << '\n';
}

void write_stats_csv(std::ostream& os, const std::vector<StatsRow>& rows, const CareerPolicy& policy) {
  os << "author_id,measure,params,window,n,mean,sd,career_start\n";
  for (const auto& r : rows)
    os << csv_field(r.author_id) << ',' << to_string(r.measure) << ','
       << describe_params(r.measure, r.params) << ',' << r.window.lo << ':' << r.window.hi << ','
       << r.stats.n << ',' << format_value(r.stats.mean) << ','
       << (r.stats.sd ? format_value(*r.stats.sd) : std::string()) << ',' << policy.str() << '\n';
}

}  // namespace citeaccel
