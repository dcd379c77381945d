// SPDX-License-Identifier: Apache-2.0
#include <fstream>
#include <random>

#include <Eigen/QR>
#include <catch2/catch_amalgamated.hpp>
#include <json.hpp>

#include "citeaccel/analysis.hpp"
#include "citeaccel/io.hpp"
#include "citeaccel/models.hpp"
#include "helpers.hpp"

using namespace citeaccel;
using Catch::Approx;
using Catch::Matchers::ContainsSubstring;
using citeaccel::testing::per_paper;

namespace {

AuthorRecord yearly(std::map<int, double> counts, std::string id = "y") {
  AuthorRecord r;
  r.author_id = std::move(id);
  r.granularity = Granularity::aggregate;
  r.yearly_citations = std::move(counts);
  return r;
}

MeasureSeries series_of(std::vector<double> v, int from = 0) {
  MeasureSeries s;
  for (std::size_t i = 0; i < v.size(); ++i) s.values[from + static_cast<int>(i)] = v[i];
  return s;
}

AuthorRecord model_author(double p, double c, std::string id, int horizon = 12) {
  return simulate_simple({p, c, std::nullopt, horizon, SamplingMode::continuous_exact}, {std::move(id), 2000});
}

const CareerPolicy kRecorded{CareerStartMode::recorded, 10};

}  // namespace

// ---------------------------------------------------------------------------
// Career start

TEST_CASE("threshold start is the first year the running total reaches it", "[career]") {
  const auto r = yearly({{2000, 4}, {2001, 5}, {2002, 8}});
  // running totals 4, 9, 17
  CHECK(career_start(r, CareerPolicy::parse("threshold:10")).year == 2002);
  CHECK(career_start(r, CareerPolicy::parse("threshold:9")).year == 2001);
  CHECK(career_start(r, CareerPolicy::parse("threshold:1")).year == 2000);
  const auto late = yearly({{1998, 0}, {1999, 0}, {2000, 2}});
  CHECK(career_start(late, {CareerStartMode::citation_threshold, 1}).year == 2000);
}

TEST_CASE("threshold start fails when never reached", "[career]") {
  const auto zeros = yearly({{2000, 0}, {2001, 0}});
  CHECK_THROWS_AS(career_start(zeros, CareerPolicy::parse("threshold:10")), DataError);
  CHECK_THROWS_WITH(career_start(zeros, CareerPolicy::parse("threshold:10")),
                    ContainsSubstring("career start undefined under policy threshold:10"));
}

TEST_CASE("first-publication start", "[career]") {
  const auto r = per_paper({{2003, {{2004, 1}}}, {2001, {}}});
  CHECK(career_start(r, CareerPolicy::parse("first-pub")).year == 2001);
  const auto agg = career_start(yearly({{1999, 0}, {2000, 3}}), CareerPolicy::parse("first-pub"));
  CHECK(agg.year == 2000);
  REQUIRE(agg.warnings.size() == 1);
  CHECK_THAT(agg.warnings[0], ContainsSubstring("aggregate"));
}

TEST_CASE("recorded start keeps the stored anchor", "[career]") {
  const auto r = model_author(1, 1, "m");
  CHECK(career_start(r, kRecorded).year == 2000);
  const auto p = per_paper({{2003, {}}});
  CHECK(career_start(p, kRecorded).year == 2003);
}

TEST_CASE("policy strings round trip and reject junk", "[career]") {
  for (const auto* text : {"first-pub", "threshold:10", "threshold:3", "recorded"})
    CHECK(CareerPolicy::parse(text).str() == text);
  CHECK_THROWS_AS(CareerPolicy::parse("threshold:0"), ParameterError);
  CHECK_THROWS_AS(CareerPolicy::parse("threshold:x"), ParameterError);
  CHECK_THROWS_AS(CareerPolicy::parse("birthday"), ParameterError);
}

TEST_CASE("threshold start is monotone in the threshold", "[career][property]") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    std::map<int, double> counts;
    for (int y = 1990; y < 2010; ++y) counts[y] = static_cast<double>(rng() % 6);
    const auto r = yearly(counts);
    int previous = 0;
    for (int threshold = 1; threshold <= 60; ++threshold) {
      int year;
      try {
        year = career_start(r, {CareerStartMode::citation_threshold, threshold}).year;
      } catch (const DataError&) {
        break;
      }
      CHECK(year >= previous);
      previous = year;
    }
  }
}

TEST_CASE("normalization rebases t = 0", "[career]") {
  const auto r = yearly({{2000, 4}, {2001, 5}, {2002, 8}, {2003, 1}});
  const auto n = normalize_career(r, CareerPolicy::parse("threshold:10"));
  CHECK(career_start_year(n) == 2002);
  const auto cum = cumulative_citations(n);
  CHECK(cum.values.size() == 2);
  CHECK(cum[0] == 17);  // earlier citations fold into N(0)
  CHECK(cum[1] == 18);
}

// ---------------------------------------------------------------------------
// Window statistics

TEST_CASE("window stats use the n-1 convention", "[stats]") {
  const auto s = window_stats(series_of({2, 4, 6}), 0, 2);
  CHECK(s.mean == 4.0);
  REQUIRE(s.sd);
  CHECK(*s.sd == 2.0);
  CHECK(s.n == 3);
  const auto pop = window_stats(series_of({2, 4, 6}), 0, 2, SdConvention::population);
  CHECK(*pop.sd == Approx(std::sqrt(8.0 / 3.0)));
}

TEST_CASE("window stats edge cases", "[stats]") {
  CHECK(*window_stats(series_of({3, 3, 3, 3}), 0, 3).sd == 0.0);
  const auto one = window_stats(series_of({7}), 0, 0);
  CHECK(one.mean == 7.0);
  CHECK_FALSE(one.sd);
  CHECK_THROWS_AS(window_stats(series_of({1, 2}), 5, 9), DataError);
  // only defined values inside [lo, hi] count
  CHECK(window_stats(series_of({1, 2, 3, 100}, 4), 0, 6).mean == 2.0);
}

TEST_CASE("window stats are translation equivariant", "[stats][property]") {
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> u(-50, 50);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> v(2 + rng() % 10);
    for (auto& x : v) x = u(rng);
    const double shift = u(rng);
    auto shifted = v;
    for (auto& x : shifted) x += shift;
    const int hi = static_cast<int>(v.size()) - 1;
    const auto a = window_stats(series_of(v), 0, hi), b = window_stats(series_of(shifted), 0, hi);
    CHECK(b.mean == Approx(a.mean + shift).margin(1e-9));
    CHECK(*b.sd == Approx(*a.sd).margin(1e-9));
  }
}

// ---------------------------------------------------------------------------
// OLS

TEST_CASE("ols fits an exact line", "[ols]") {
  const std::vector<std::pair<double, double>> pts{{0, 1}, {1, 3}, {2, 5}, {5, 11}};
  const auto r = ols(pts);
  CHECK(r.slope == Approx(2.0));
  CHECK(r.intercept == Approx(1.0));
  CHECK(r.r_squared == Approx(1.0));
  CHECK(r.n == 4);
}

TEST_CASE("ols on a tent has zero slope and zero R^2", "[ols]") {
  const std::vector<std::pair<double, double>> pts{{0, 0}, {1, 1}, {2, 0}};
  const auto r = ols(pts);
  CHECK(r.slope == Approx(0.0).margin(1e-15));
  CHECK(r.intercept == Approx(1.0 / 3.0));
  CHECK(r.r_squared == Approx(0.0).margin(1e-15));
}

TEST_CASE("ols guards", "[ols]") {
  const std::vector<std::pair<double, double>> two{{0, 0}, {1, 1}};
  CHECK_THROWS_AS(ols(two), DataError);
  const std::vector<std::pair<double, double>> flat_x{{1, 0}, {1, 1}, {1, 2}};
  CHECK_THROWS_AS(ols(flat_x), DataError);
}

TEST_CASE("ols agrees with a QR least-squares oracle", "[ols][oracle]") {
  std::mt19937_64 rng(41);
  std::normal_distribution<double> noise(0, 3);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 3 + static_cast<int>(rng() % 30);
    Eigen::MatrixXd a(n, 2);
    Eigen::VectorXd y(n);
    std::vector<std::pair<double, double>> pts;
    for (int i = 0; i < n; ++i) {
      const double x = i + noise(rng);
      a.row(i) << 1.0, x;
      y(i) = 0.7 * x - 4 + noise(rng);
      pts.emplace_back(x, y(i));
    }
    const Eigen::Vector2d beta = a.colPivHouseholderQr().solve(y);
    const Eigen::VectorXd resid = y - a * beta;
    const double r2 = 1 - resid.squaredNorm() / (y.array() - y.mean()).square().sum();
    const auto r = ols(pts);
    CHECK(r.intercept == Approx(beta(0)).margin(1e-9));
    CHECK(r.slope == Approx(beta(1)).margin(1e-9));
    CHECK(r.r_squared == Approx(r2).margin(1e-9));
  }
}

TEST_CASE("ols R^2 is invariant under affine rescaling", "[ols][property]") {
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> u(-10, 10);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::pair<double, double>> pts, sx, sy;
    const double ax = u(rng) + 20, bx = u(rng), ay = -(u(rng) + 20), by = u(rng);
    for (int i = 0; i < 12; ++i) {
      const double x = u(rng), y = 0.5 * x + u(rng);
      pts.emplace_back(x, y);
      sx.emplace_back(ax * x + bx, y);
      sy.emplace_back(x, ay * y + by);
    }
    const double r2 = ols(pts).r_squared;
    CHECK(ols(sx).r_squared == Approx(r2).margin(1e-9));
    CHECK(ols(sy).r_squared == Approx(r2).margin(1e-9));
  }
}

// ---------------------------------------------------------------------------
// Predictive study and cohorts

TEST_CASE("exact model authors predict themselves", "[study]") {
  std::vector<AuthorRecord> authors{model_author(1, 1, "a"), model_author(2, 3, "b"), model_author(4, 2, "c"),
                                    model_author(5, 5, "d")};
  // W5 needs t >= 4, so its windows start later
  for (auto [id, early, late] : {std::tuple{MeasureId::W, Window{3, 5}, Window{6, 8}},
                                 {MeasureId::w, Window{3, 5}, Window{6, 8}},
                                 {MeasureId::W_sg, Window{4, 6}, Window{7, 9}}}) {
    const auto r = predictive_study(authors, {id, {}}, early, late, {}, kRecorded);
    CHECK(r.n == 4);
    CHECK(std::abs(r.slope - 1) < 1e-9);
    CHECK(std::abs(r.intercept) < 1e-9);
    CHECK(std::abs(r.r_squared - 1) < 1e-9);
  }
}

TEST_CASE("study drops incomplete and excluded authors", "[study]") {
  std::vector<AuthorRecord> authors{model_author(1, 1, "a"), model_author(2, 3, "b"), model_author(4, 2, "c"),
                                    model_author(3, 3, "short", 7), model_author(9, 9, "outlier")};
  const auto r = predictive_study(authors, {MeasureId::W, {}}, {3, 5}, {6, 8}, {"outlier"}, kRecorded);
  CHECK(r.n == 3);
  REQUIRE(r.warnings.size() == 2);
  CHECK_THAT(r.warnings[0], ContainsSubstring("short"));
  CHECK_THAT(r.warnings[1], ContainsSubstring("outlier"));
  for (const auto& p : r.points) CHECK((p.author_id != "short" && p.author_id != "outlier"));
  CHECK_THROWS_AS(predictive_study(authors, {MeasureId::W, {}}, {3, 5}, {6, 8}, {"a", "outlier"}, kRecorded),
                  DataError);
  CHECK_THROWS_AS(predictive_study(authors, {MeasureId::h, {}}, {3, 5}, {6, 8}, {}, kRecorded),
                  GranularityError);
}

TEST_CASE("study reproduces the bundled noisy fixture oracle", "[study][oracle]") {
  const auto dataset = read_dataset(std::string(CITEACCEL_FIXTURES) + "/noisy_cohort.json");
  std::ifstream in(std::string(CITEACCEL_FIXTURES) + "/noisy_cohort_oracle.json");
  const auto oracle = nlohmann::json::parse(in);
  std::vector<AuthorRecord> authors;
  for (const auto& [_, records] : dataset.cohorts) authors.insert(authors.end(), records.begin(), records.end());
  const auto exclude = oracle["exclude"].get<std::vector<std::string>>();
  const auto r = predictive_study(authors, {MeasureId::W, {}}, Window::parse(oracle["early"].get<std::string>()),
                                  Window::parse(oracle["late"].get<std::string>()),
                                  {exclude.begin(), exclude.end()},
                                  CareerPolicy::parse(oracle["career_start"].get<std::string>()));
  CHECK(r.n == oracle["n"].get<std::size_t>());
  CHECK(std::abs(r.slope - oracle["slope"].get<double>()) < 1e-9);
  CHECK(std::abs(r.intercept - oracle["intercept"].get<double>()) < 1e-9);
  CHECK(std::abs(r.r_squared - oracle["r_squared"].get<double>()) < 1e-9);
}

TEST_CASE("cohort export orders rows and separates cohorts", "[cohorts]") {
  std::map<std::string, std::vector<AuthorRecord>> cohorts;
  cohorts["B"] = {model_author(2, 4, "b2"), model_author(4, 2, "b1")};
  cohorts["A"] = {model_author(1, 2, "a2"), model_author(2, 1, "a1"), model_author(1, 2, "a3")};
  cohorts["empty"] = {};
  const auto out = cohort_export(cohorts, {MeasureId::W, {}}, {5, 10}, kRecorded);
  REQUIRE(out.rows.size() == 5);
  CHECK(out.rows[0].cohort == "A");
  CHECK(out.rows[0].author_id == "a1");
  CHECK(out.rows[2].author_id == "a3");
  CHECK(out.rows[3].author_id == "b1");
  double max_a = 0, min_b = 1e9;
  for (const auto& row : out.rows) {
    if (row.cohort == "A") max_a = std::max(max_a, row.value);
    if (row.cohort == "B") min_b = std::min(min_b, row.value);
  }
  CHECK(max_a == Approx(2.0));
  CHECK(min_b == Approx(8.0));
  CHECK(min_b > max_a);
  REQUIRE(out.warnings.size() == 1);
  CHECK_THAT(out.warnings[0], ContainsSubstring("empty"));

  std::map<std::string, std::vector<AuthorRecord>> single{{"solo", {model_author(3, 1, "s")}}};
  CHECK(cohort_export(single, {MeasureId::W, {}}, {5, 10}, kRecorded).rows.size() == 1);
}

TEST_CASE("windows parse with open ends", "[windows]") {
  CHECK(Window::parse("3:5") == Window{3, 5});
  CHECK(Window::parse("5:", 0, 99) == Window{5, 99});
  CHECK(Window::parse(":4", 0, 99) == Window{0, 4});
  CHECK_THROWS_AS(Window::parse("5"), ParameterError);
  CHECK_THROWS_AS(Window::parse("6:2"), ParameterError);
}
