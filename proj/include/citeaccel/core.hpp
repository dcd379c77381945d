// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include <Eigen/Dense>

#include "citeaccel/error.hpp"
#include "citeaccel/rational.hpp"

namespace citeaccel {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

enum class Granularity { per_paper, aggregate };

std::string_view to_string(Granularity g);

// One publication. Years are calendar years; counts are citations received in
// that year. Years missing from the map are zero-count years.
struct PaperRecord {
  std::string paper_id;
  int pub_year = 0;
  std::map<int, std::int64_t> citations_by_year;

  bool operator==(const PaperRecord&) const = default;
};

// An author's citation history at one of two granularities. Exactly one of
// `papers` / `yearly_citations` is meaningful, selected by `granularity`.
//
// `career_start_year` pins the calendar year of career year t = 0; when absent
// it defaults to the earliest publication (per-paper) or the earliest citation
// year (aggregate). `observed_to` pins the last observed calendar year; when
// absent it is the latest year present in the data.
struct AuthorRecord {
  std::string author_id;
  std::string display_name;
  Granularity granularity = Granularity::per_paper;
  std::vector<PaperRecord> papers;
  std::map<int, double> yearly_citations;
  bool synthetic = false;
  std::optional<int> career_start_year;
  std::optional<int> observed_to;

  bool operator==(const AuthorRecord&) const = default;
};

struct Violation {
  std::string kind;
  std::string message;
};

// All invariant violations of `record`; empty iff the record is valid.
std::vector<Violation> validate(const AuthorRecord& record);

// Throws DataError listing the violations, if any.
void require_valid(const AuthorRecord& record);

bool has_citation_data(const AuthorRecord& record);

// Calendar year of t = 0. Throws DataError("no citation data") on an empty record.
int career_start_year(const AuthorRecord& record);

// Last observed calendar year. Throws DataError on an empty record.
int last_observed_year(const AuthorRecord& record);

// Largest admissible career year t for the record.
int career_horizon(const AuthorRecord& record);

AuthorRecord with_career_start(AuthorRecord record, int year);

// Collapses a per-paper record to its yearly totals.
AuthorRecord to_aggregate(const AuthorRecord& record);

// ---------------------------------------------------------------------------
// Cumulative series

// A non-decreasing series indexed by career year t = 0, 1, 2, ...
template <typename Scalar>
struct BasicCumulativeSeries {
  int start_year = 0;
  Vector<Scalar> values;

  Eigen::Index size() const { return values.size(); }
  int last_t() const { return static_cast<int>(values.size()) - 1; }
  Scalar operator[](Eigen::Index t) const { return values(t); }

  bool operator==(const BasicCumulativeSeries& o) const {
    return start_year == o.start_year && values.size() == o.values.size() &&
           values == o.values;
  }
};

using CumulativeSeries = BasicCumulativeSeries<double>;

namespace detail {

template <typename Scalar>
Scalar checked_cast(double v) {
  if constexpr (std::is_integral_v<Scalar>) {
    if (v != std::floor(v))
      throw DataError("non-integer citation value " + std::to_string(v) +
                      " in an integer series");
  }
  return static_cast<Scalar>(v);
}

}  // namespace detail

// N(t): citations received up to calendar year start + t, for t = 0..horizon.
// Citations dated before the career start are folded into N(0). A record with
// no citations but an explicit career_start_year/observed_to gives N = 0.
template <typename Scalar = double>
BasicCumulativeSeries<Scalar> cumulative_citations(const AuthorRecord& record) {
  if (!has_citation_data(record) && !(record.career_start_year && record.observed_to))
    throw DataError("no citation data");
  const int start = career_start_year(record);
  const int last = last_observed_year(record);
  BasicCumulativeSeries<Scalar> out;
  out.start_year = start;
  out.values = Vector<Scalar>::Zero(std::max(0, last - start + 1));
  auto add = [&](int year, Scalar count) {
    if (year > last) return;
    out.values(std::max(0, year - start)) += count;
  };
  if (record.granularity == Granularity::per_paper) {
    for (const auto& paper : record.papers)
      for (const auto& [year, count] : paper.citations_by_year)
        add(year, static_cast<Scalar>(count));
  } else {
    for (const auto& [year, value] : record.yearly_citations)
      add(year, detail::checked_cast<Scalar>(value));
  }
  for (Eigen::Index t = 1; t < out.values.size(); ++t) out.values(t) += out.values(t - 1);
  return out;
}

// P(t): number of papers with pub_year <= start + t.
template <typename Scalar = double>
BasicCumulativeSeries<Scalar> paper_count(const AuthorRecord& record) {
  if (record.granularity != Granularity::per_paper)
    throw GranularityError("P unavailable at aggregate granularity");
  if (record.papers.empty()) throw DataError("no papers");
  const int start = career_start_year(record);
  const int last = last_observed_year(record);
  BasicCumulativeSeries<Scalar> out;
  out.start_year = start;
  out.values = Vector<Scalar>::Zero(std::max(0, last - start + 1));
  for (const auto& paper : record.papers)
    if (paper.pub_year <= last) out.values(std::max(0, paper.pub_year - start)) += Scalar{1};
  for (Eigen::Index t = 1; t < out.values.size(); ++t) out.values(t) += out.values(t - 1);
  return out;
}

// ---------------------------------------------------------------------------
// Dense per-paper history

// Yearly citation counts as a papers x years matrix. Column 0 is `first_year`,
// which is at or before both the career start and every publication.
template <typename Scalar>
struct BasicCitationHistory {
  int first_year = 0;
  int career_start = 0;
  int last_year = 0;
  Eigen::VectorXi pub_year;
  Matrix<Scalar> yearly;

  Eigen::Index papers() const { return yearly.rows(); }
  // Column holding calendar year `start + t`.
  Eigen::Index column(int t) const { return career_start + t - first_year; }
  int horizon() const { return last_year - career_start; }
};

using CitationHistory = BasicCitationHistory<double>;

template <typename Scalar = double>
BasicCitationHistory<Scalar> citation_history(const AuthorRecord& record) {
  if (record.granularity != Granularity::per_paper)
    throw GranularityError("per-paper citation data unavailable at aggregate granularity");
  BasicCitationHistory<Scalar> h;
  h.career_start = career_start_year(record);
  h.last_year = last_observed_year(record);
  h.first_year = h.career_start;
  for (const auto& paper : record.papers) {
    h.first_year = std::min(h.first_year, paper.pub_year);
    if (!paper.citations_by_year.empty())
      h.first_year = std::min(h.first_year, paper.citations_by_year.begin()->first);
  }
  const auto years = std::max(0, h.last_year - h.first_year + 1);
  const auto n = static_cast<Eigen::Index>(record.papers.size());
  h.pub_year.resize(n);
  h.yearly = Matrix<Scalar>::Zero(n, years);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& paper = record.papers[static_cast<std::size_t>(i)];
    h.pub_year(i) = paper.pub_year;
    for (const auto& [year, count] : paper.citations_by_year)
      if (year <= h.last_year) h.yearly(i, year - h.first_year) += static_cast<Scalar>(count);
  }
  return h;
}

// ---------------------------------------------------------------------------
// Measure registry

enum class MeasureId { w, W, W_delta, W_sg, m, alpha1, alpha2, h, hc, ht, A, mu, N, P };

std::string_view to_string(MeasureId id);
std::optional<MeasureId> parse_measure_id(std::string_view name);

// Exponents over the base units (citations, years, papers).
struct Dimensions {
  Rational citations;
  Rational years;
  Rational papers;

  bool operator==(const Dimensions&) const = default;
  std::string str() const;
};

// Dimensions of a citation acceleration.
inline constexpr Dimensions kAccelerationDims{Rational{1}, Rational{-2}, Rational{0}};

struct FreeParam {
  std::string name;
  double default_value = 0;
  // false when no principled choice of the value is known
  bool principled = true;
};

inline constexpr int kUnboundedSupport = -1;

struct MeasureDescriptor {
  MeasureId id{};
  std::string_view name;
  Granularity granularity_needed = Granularity::aggregate;
  Dimensions dims;
  std::vector<FreeParam> free_params;
  // trailing yearly samples read at default parameters; kUnboundedSupport for
  // measures that read the whole cumulative history
  int support_width = kUnboundedSupport;
};

std::span<const MeasureDescriptor> measure_registry();
const MeasureDescriptor& descriptor(MeasureId id);

// Free parameters shared by all measures; each measure reads only its own.
// gamma/delta weight hc and ht, delta is also the W_delta step, k the SG half-width.
struct MeasureParams {
  double gamma = 1.0;
  double delta = 1.0;
  int k = 2;

  bool operator==(const MeasureParams&) const = default;
};

// Throws ParameterError when `params` are not admissible for `id`.
void validate_params(MeasureId id, const MeasureParams& params);

// Support width of `id` evaluated at `params`.
int support_width(MeasureId id, const MeasureParams& params);

// "gamma=1;delta=1" style rendering of the parameters `id` actually reads.
std::string describe_params(MeasureId id, const MeasureParams& params);

}  // namespace citeaccel
