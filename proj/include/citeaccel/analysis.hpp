// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "citeaccel/core.hpp"
#include "citeaccel/measures.hpp"

namespace citeaccel {

// `recorded` keeps a record's stored career_start_year and falls back to the
// first publication.
enum class CareerStartMode { first_publication, citation_threshold, recorded };

struct CareerPolicy {
  CareerStartMode mode = CareerStartMode::first_publication;
  int threshold = 10;

  // "first-pub", "threshold:N" or "recorded"
  static CareerPolicy parse(std::string_view text);
  std::string str() const;

  bool operator==(const CareerPolicy&) const = default;
};

struct CareerStart {
  int year = 0;
  std::vector<std::string> warnings;
};

// Calendar year assigned to career year t = 0 under `policy`. Throws
// DataError("career start undefined under policy") when the threshold is
// never reached.
CareerStart career_start(const AuthorRecord& record, const CareerPolicy& policy);

// Copy of `record` rebased so that t = 0 is its career start under `policy`.
AuthorRecord normalize_career(const AuthorRecord& record, const CareerPolicy& policy,
                              std::vector<std::string>* warnings = nullptr);

enum class SdConvention { sample, population };

struct WindowStats {
  double mean = 0;
  std::optional<double> sd;  // absent with fewer than two values (sample convention)
  std::size_t n = 0;
};

// Mean and standard deviation of the defined values with lo <= t <= hi.
// Throws DataError on an empty window.
WindowStats window_stats(const MeasureSeries& series, int lo, int hi,
                         SdConvention convention = SdConvention::sample);

struct RegressionPoint {
  std::string author_id;
  double x = 0;
  double y = 0;
};

struct RegressionResult {
  double slope = 0;
  double intercept = 0;
  double r_squared = 0;
  std::size_t n = 0;
  std::vector<RegressionPoint> points;
  std::vector<std::string> warnings;
};

// Least-squares line through (x, y). Throws DataError for n < 3 or constant x.
RegressionResult ols(std::span<const std::pair<double, double>> points);
RegressionResult ols(std::vector<RegressionPoint> points);

struct Window {
  int lo = 0;
  int hi = 0;

  // "lo:hi"; either side may be empty when `open` bounds are allowed
  static Window parse(std::string_view text, int open_lo = 0, int open_hi = 1 << 20);
  bool operator==(const Window&) const = default;
};

struct MeasureChoice {
  MeasureId id = MeasureId::W;
  MeasureParams params;
};

// Mean of the measure over `early` predicts the mean over `late`, one point
// per author. Authors without full coverage of both windows, or excluded by
// id, are dropped with a warning. Throws DataError with fewer than 3 left.
RegressionResult predictive_study(std::span<const AuthorRecord> records, const MeasureChoice& measure,
                                  Window early, Window late, const std::set<std::string>& exclusions = {},
                                  const CareerPolicy& policy = {});

struct CohortRow {
  std::string cohort;
  std::string author_id;
  double value = 0;
};

struct CohortExport {
  std::vector<CohortRow> rows;
  std::vector<std::string> warnings;
};

// One row per author: windowed mean of the measure. Rows ordered by cohort
// label, then author id.
CohortExport cohort_export(const std::map<std::string, std::vector<AuthorRecord>>& cohorts,
                           const MeasureChoice& measure, Window window, const CareerPolicy& policy = {});

}  // namespace citeaccel
