// SPDX-License-Identifier: Apache-2.0
#include "citeaccel/analysis.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

namespace citeaccel {

namespace {

int parse_int(std::string_view text, std::string_view what) {
  int value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end)
    throw ParameterError("invalid " + std::string(what) + " '" + std::string(text) + "'");
  return value;
}

std::map<int, double> yearly_totals(const AuthorRecord& record) {
  std::map<int, double> totals;
  if (record.granularity == Granularity::aggregate) return record.yearly_citations;
  for (const auto& paper : record.papers)
    for (const auto& [year, count] : paper.citations_by_year) totals[year] += static_cast<double>(count);
  return totals;
}

}  // namespace

CareerPolicy CareerPolicy::parse(std::string_view text) {
  if (text == "first-pub" || text == "first-publication") return {CareerStartMode::first_publication, 10};
  if (text == "recorded") return {CareerStartMode::recorded, 10};
  constexpr std::string_view prefix = "threshold:";
  if (text.starts_with(prefix)) {
    const int threshold = parse_int(text.substr(prefix.size()), "threshold");
    if (threshold < 1) throw ParameterError("career-start threshold must be >= 1");
    return {CareerStartMode::citation_threshold, threshold};
  }
  if (text == "threshold") return {CareerStartMode::citation_threshold, 10};
  throw ParameterError("unknown career-start policy '" + std::string(text) +
                       "' (expected first-pub, threshold:N or recorded)");
}

std::string CareerPolicy::str() const {
  switch (mode) {
    case CareerStartMode::first_publication: return "first-pub";
    case CareerStartMode::citation_threshold: return "threshold:" + std::to_string(threshold);
    case CareerStartMode::recorded: return "recorded";
  }
  return "?";
}

CareerStart career_start(const AuthorRecord& record, const CareerPolicy& policy) {
  if (!has_citation_data(record)) throw DataError("no citation data");
  CareerStart out;
  switch (policy.mode) {
    case CareerStartMode::recorded:
      if (record.career_start_year) {
        out.year = *record.career_start_year;
        return out;
      }
      [[fallthrough]];
    case CareerStartMode::first_publication:
      if (record.granularity == Granularity::per_paper) {
        out.year = std::numeric_limits<int>::max();
        for (const auto& p : record.papers) out.year = std::min(out.year, p.pub_year);
        return out;
      }
      out.warnings.push_back("record '" + record.author_id +
                             "' is aggregate: career start taken as first citation year");
      for (const auto& [year, value] : record.yearly_citations)
        if (value > 0) {
          out.year = year;
          return out;
        }
      out.year = record.yearly_citations.begin()->first;
      return out;
    case CareerStartMode::citation_threshold: {
      if (policy.threshold < 1) throw ParameterError("career-start threshold must be >= 1");
      double running = 0;
      for (const auto& [year, value] : yearly_totals(record)) {
        running += value;
        if (running >= policy.threshold) {
          out.year = year;
          return out;
        }
      }
      throw DataError("career start undefined under policy " + policy.str() + " for record '" +
                      record.author_id + "'");
    }
  }
  return out;
}

AuthorRecord normalize_career(const AuthorRecord& record, const CareerPolicy& policy,
                              std::vector<std::string>* warnings) {
  auto start = career_start(record, policy);
  if (warnings) warnings->insert(warnings->end(), start.warnings.begin(), start.warnings.end());
  return with_career_start(record, start.year);
}

WindowStats window_stats(const MeasureSeries& series, int lo, int hi, SdConvention convention) {
  std::vector<double> values;
  for (auto it = series.values.lower_bound(lo); it != series.values.end() && it->first <= hi; ++it)
    values.push_back(it->second);
  if (values.empty())
    throw DataError("empty window " + std::to_string(lo) + ":" + std::to_string(hi));
  WindowStats out;
  out.n = values.size();
  double sum = 0;
  for (double v : values) sum += v;
  out.mean = sum / static_cast<double>(out.n);
  const std::size_t dof = convention == SdConvention::sample ? out.n - 1 : out.n;
  if (dof > 0) {
    double ss = 0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    out.sd = std::sqrt(ss / static_cast<double>(dof));
  }
  return out;
}

RegressionResult ols(std::vector<RegressionPoint> points) {
  const std::size_t n = points.size();
  if (n < 3) throw DataError("regression needs at least 3 points, got " + std::to_string(n));
  double sx = 0, sy = 0;
  for (const auto& p : points) {
    sx += p.x;
    sy += p.y;
  }
  const double mx = sx / static_cast<double>(n), my = sy / static_cast<double>(n);
  double sxx = 0, sxy = 0, syy = 0;
  for (const auto& p : points) {
    sxx += (p.x - mx) * (p.x - mx);
    sxy += (p.x - mx) * (p.y - my);
    syy += (p.y - my) * (p.y - my);
  }
  if (sxx == 0) throw DataError("regression x values are all equal");
  RegressionResult out;
  out.n = n;
  out.slope = sxy / sxx;
  out.intercept = my - out.slope * mx;
  double ss_res = 0;
  for (const auto& p : points) {
    const double r = p.y - (out.intercept + out.slope * p.x);
    ss_res += r * r;
  }
  out.r_squared = syy == 0 ? 1.0 : std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
  out.points = std::move(points);
  return out;
}

RegressionResult ols(std::span<const std::pair<double, double>> points) {
  std::vector<RegressionPoint> pts;
  pts.reserve(points.size());
  for (const auto& [x, y] : points) pts.push_back({"", x, y});
  return ols(std::move(pts));
}

Window Window::parse(std::string_view text, int open_lo, int open_hi) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos)
    throw ParameterError("window '" + std::string(text) + "' must look like lo:hi");
  const auto lo_text = text.substr(0, colon);
  const auto hi_text = text.substr(colon + 1);
  Window w{lo_text.empty() ? open_lo : parse_int(lo_text, "window bound"),
           hi_text.empty() ? open_hi : parse_int(hi_text, "window bound")};
  if (w.lo > w.hi) throw ParameterError("window '" + std::string(text) + "' has lo > hi");
  return w;
}

namespace {

std::optional<double> window_mean(const MeasureSeries& series, Window w, bool require_full) {
  std::size_t n = 0;
  double sum = 0;
  for (int t = w.lo; t <= w.hi; ++t) {
    const auto it = series.values.find(t);
    if (it == series.values.end()) {
      if (require_full) return std::nullopt;
      continue;
    }
    sum += it->second;
    ++n;
  }
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

}  // namespace

RegressionResult predictive_study(std::span<const AuthorRecord> records, const MeasureChoice& measure,
                                  Window early, Window late, const std::set<std::string>& exclusions,
                                  const CareerPolicy& policy) {
  std::vector<RegressionPoint> points;
  std::vector<std::string> warnings;
  for (const auto& record : records) {
    if (exclusions.contains(record.author_id)) {
      warnings.push_back("author '" + record.author_id + "' excluded by id");
      continue;
    }
    require_granularity(record, measure.id);
    AuthorRecord normalized;
    try {
      normalized = normalize_career(record, policy, &warnings);
    } catch (const DataError& e) {
      warnings.push_back("author '" + record.author_id + "' skipped: " + e.what());
      continue;
    }
    const auto series = measure_series(normalized, measure.id, measure.params,
                                       std::min(early.lo, late.lo), std::max(early.hi, late.hi));
    const auto x = window_mean(series, early, true);
    const auto y = window_mean(series, late, true);
    if (!x || !y) {
      warnings.push_back("author '" + record.author_id + "' excluded: measure not defined over " +
                         std::string(!x ? "early" : "late") + " window");
      continue;
    }
    points.push_back({record.author_id, *x, *y});
  }
  if (points.size() < 3)
    throw DataError("predictive study needs at least 3 usable authors, got " +
                    std::to_string(points.size()));
  auto result = ols(std::move(points));
  result.warnings = std::move(warnings);
  return result;
}

CohortExport cohort_export(const std::map<std::string, std::vector<AuthorRecord>>& cohorts,
                           const MeasureChoice& measure, Window window, const CareerPolicy& policy) {
  CohortExport out;
  for (const auto& [label, records] : cohorts) {
    if (records.empty()) {
      out.warnings.push_back("cohort '" + label + "' is empty");
      continue;
    }
    std::vector<const AuthorRecord*> sorted;
    for (const auto& r : records) sorted.push_back(&r);
    std::sort(sorted.begin(), sorted.end(),
              [](const auto* a, const auto* b) { return a->author_id < b->author_id; });
    for (const auto* record : sorted) {
      require_granularity(*record, measure.id);
      AuthorRecord normalized;
      try {
        normalized = normalize_career(*record, policy, &out.warnings);
      } catch (const DataError& e) {
        out.warnings.push_back("author '" + record->author_id + "' skipped: " + e.what());
        continue;
      }
      const auto series = measure_series(normalized, measure.id, measure.params, window.lo, window.hi);
      const auto mean = window_mean(series, window, false);
      if (!mean) {
        out.warnings.push_back("author '" + record->author_id + "' has no values in window");
        continue;
      }
      out.rows.push_back({label, record->author_id, *mean});
    }
  }
  return out;
}

}  // namespace citeaccel
