// SPDX-License-Identifier: Apache-2.0
#include "citeaccel/core.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <limits>
#include <set>
#include <sstream>

namespace citeaccel {

std::string_view to_string(Granularity g) {
  return g == Granularity::per_paper ? "per-paper" : "aggregate";
}

std::vector<Violation> validate(const AuthorRecord& record) {
  std::vector<Violation> out;
  auto report = [&](std::string kind, std::string message) {
    out.push_back({std::move(kind), std::move(message)});
  };

  if (record.granularity == Granularity::per_paper) {
    if (!record.yearly_citations.empty())
      report("granularity mismatch", "per-paper record also carries yearly_citations");
    std::set<std::string> ids;
    for (const auto& paper : record.papers) {
      if (!ids.insert(paper.paper_id).second)
        report("duplicate paper_id", "paper_id '" + paper.paper_id + "' appears more than once");
      for (const auto& [year, count] : paper.citations_by_year) {
        if (count < 0)
          report("negative count", "paper '" + paper.paper_id + "' has count " +
                                       std::to_string(count) + " in " + std::to_string(year));
        if (year < paper.pub_year)
          report("citation precedes publication",
                 "paper '" + paper.paper_id + "' published " + std::to_string(paper.pub_year) +
                     " cited in " + std::to_string(year));
      }
    }
  } else {
    if (!record.papers.empty())
      report("granularity mismatch", "aggregate record also carries papers");
    for (const auto& [year, value] : record.yearly_citations) {
      if (!std::isfinite(value)) {
        report("non-finite value", "yearly citation value in " + std::to_string(year));
        continue;
      }
      if (value < 0)
        report("negative count", "yearly citations negative in " + std::to_string(year));
      if (!record.synthetic && value != std::floor(value))
        report("non-integer count",
               "empirical record has fractional citations in " + std::to_string(year));
    }
  }
  if (record.career_start_year && record.observed_to &&
      *record.observed_to < *record.career_start_year)
    report("empty observation window", "observed_to precedes career_start_year");
  return out;
}

void require_valid(const AuthorRecord& record) {
  const auto violations = validate(record);
  if (violations.empty()) return;
  std::string msg = "invalid record '" + record.author_id + "':";
  for (const auto& v : violations) msg += " [" + v.kind + "] " + v.message + ";";
  throw DataError(msg);
}

bool has_citation_data(const AuthorRecord& record) {
  return record.granularity == Granularity::per_paper ? !record.papers.empty()
                                                      : !record.yearly_citations.empty();
}

int career_start_year(const AuthorRecord& record) {
  if (record.career_start_year) return *record.career_start_year;
  if (!has_citation_data(record)) throw DataError("no citation data");
  if (record.granularity == Granularity::aggregate) return record.yearly_citations.begin()->first;
  int first = std::numeric_limits<int>::max();
  for (const auto& paper : record.papers) first = std::min(first, paper.pub_year);
  return first;
}

int last_observed_year(const AuthorRecord& record) {
  if (record.observed_to) return *record.observed_to;
  if (!has_citation_data(record)) throw DataError("no citation data");
  if (record.granularity == Granularity::aggregate) return record.yearly_citations.rbegin()->first;
  int last = std::numeric_limits<int>::min();
  for (const auto& paper : record.papers) {
    last = std::max(last, paper.pub_year);
    if (!paper.citations_by_year.empty())
      last = std::max(last, paper.citations_by_year.rbegin()->first);
  }
  return last;
}

int career_horizon(const AuthorRecord& record) {
  return last_observed_year(record) - career_start_year(record);
}

AuthorRecord with_career_start(AuthorRecord record, int year) {
  if (!record.observed_to && has_citation_data(record)) record.observed_to = last_observed_year(record);
  record.career_start_year = year;
  return record;
}

AuthorRecord to_aggregate(const AuthorRecord& record) {
  if (record.granularity == Granularity::aggregate) return record;
  AuthorRecord out;
  out.author_id = record.author_id;
  out.display_name = record.display_name;
  out.granularity = Granularity::aggregate;
  out.synthetic = record.synthetic;
  if (has_citation_data(record)) {
    out.career_start_year = career_start_year(record);
    out.observed_to = last_observed_year(record);
  }
  for (const auto& paper : record.papers)
    for (const auto& [year, count] : paper.citations_by_year)
      out.yearly_citations[year] += static_cast<double>(count);
  return out;
}

// ---------------------------------------------------------------------------

namespace {

Dimensions dims(Rational c, Rational y, Rational p) { return {c, y, p}; }

// h counts papers, so every h-derived measure carries a papers exponent.
const std::array<MeasureDescriptor, 14>& registry() {
  using G = Granularity;
  static const std::array<MeasureDescriptor, 14> table{{
      {MeasureId::w, "w", G::aggregate, dims(1, -2, 0), {}, kUnboundedSupport},
      {MeasureId::W, "W", G::aggregate, dims(1, -2, 0), {}, 3},
      {MeasureId::W_delta, "W_delta", G::aggregate, dims(1, -2, 0), {{"delta", 1, true}}, 3},
      {MeasureId::W_sg, "W_sg", G::aggregate, dims(1, -2, 0), {{"k", 2, true}}, 5},
      {MeasureId::m, "m", G::per_paper, dims(0, -1, 1), {}, kUnboundedSupport},
      {MeasureId::alpha1, "alpha1", G::per_paper, dims(Rational(-1, 2), 0, 1), {}, kUnboundedSupport},
      {MeasureId::alpha2, "alpha2", G::per_paper, dims(0, Rational(-1, 2), 1), {}, kUnboundedSupport},
      {MeasureId::h, "h", G::per_paper, dims(0, 0, 1), {}, kUnboundedSupport},
      {MeasureId::hc, "hc", G::per_paper, dims(0, 0, 1), {{"gamma", 1, false}, {"delta", 1, false}}, kUnboundedSupport},
      {MeasureId::ht, "ht", G::per_paper, dims(0, 0, 1), {{"gamma", 1, false}, {"delta", 1, false}}, kUnboundedSupport},
      {MeasureId::A, "A", G::per_paper, dims(1, -1, 0), {}, kUnboundedSupport},
      {MeasureId::mu, "mu", G::aggregate, dims(1, -1, 0), {}, kUnboundedSupport},
      {MeasureId::N, "N", G::aggregate, dims(1, 0, 0), {}, kUnboundedSupport},
      {MeasureId::P, "P", G::per_paper, dims(0, 0, 1), {}, kUnboundedSupport},
  }};
  return table;
}

}  // namespace

std::string Dimensions::str() const {
  return "citations^" + citations.str() + " years^" + years.str() + " papers^" + papers.str();
}

std::span<const MeasureDescriptor> measure_registry() { return registry(); }

const MeasureDescriptor& descriptor(MeasureId id) {
  return registry()[static_cast<std::size_t>(id)];
}

std::string_view to_string(MeasureId id) { return descriptor(id).name; }

std::optional<MeasureId> parse_measure_id(std::string_view name) {
  for (const auto& d : registry())
    if (d.name == name) return d.id;
  return std::nullopt;
}

void validate_params(MeasureId id, const MeasureParams& params) {
  switch (id) {
    case MeasureId::W_delta:
      if (!(params.delta >= 1) || params.delta != std::floor(params.delta))
        throw ParameterError("W_delta needs a positive integer delta, got " +
                             std::to_string(params.delta));
      break;
    case MeasureId::W_sg:
      if (params.k < 2) throw ParameterError("W_sg needs k >= 2, got " + std::to_string(params.k));
      break;
    case MeasureId::hc:
    case MeasureId::ht:
      if (!(params.gamma > 0) || !std::isfinite(params.gamma))
        throw ParameterError("gamma must be positive, got " + std::to_string(params.gamma));
      if (!(params.delta >= 0) || !std::isfinite(params.delta))
        throw ParameterError("delta must be non-negative, got " + std::to_string(params.delta));
      break;
    default:
      break;
  }
}

int support_width(MeasureId id, const MeasureParams& params) {
  switch (id) {
    case MeasureId::W_delta:
      return 2 * static_cast<int>(params.delta) + 1;
    case MeasureId::W_sg:
      return 2 * params.k + 1;
    default:
      return descriptor(id).support_width;
  }
}

namespace {

std::string fmt_param(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

std::string describe_params(MeasureId id, const MeasureParams& params) {
  switch (id) {
    case MeasureId::W_delta:
      return "delta=" + fmt_param(params.delta);
    case MeasureId::W_sg:
      return "k=" + std::to_string(params.k);
    case MeasureId::hc:
    case MeasureId::ht:
      return "gamma=" + fmt_param(params.gamma) + ";delta=" + fmt_param(params.delta);
    default:
      return "";
  }
}

}  // namespace citeaccel
