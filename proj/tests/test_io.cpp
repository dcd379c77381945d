// SPDX-License-Identifier: Apache-2.0
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <catch2/catch_amalgamated.hpp>
#include <json.hpp>

#include "citeaccel/io.hpp"
#include "citeaccel/models.hpp"

using namespace citeaccel;
using Catch::Matchers::ContainsSubstring;

namespace {

IngestResult ingest_text(const std::string& text, IngestOptions options = {}) {
  std::istringstream in(text);
  return ingest_csv(in, options);
}

std::string schema_path(const std::string& text) {
  try {
    dataset_from_json(text);
  } catch (const SchemaError& e) {
    return e.path();
  }
  return "<no error>";
}

Dataset random_dataset(std::mt19937_64& rng) {
  Dataset d;
  int next = 0;
  for (const auto* label : {"alpha", "beta"}) {
    auto& cohort = d.cohorts[label];
    for (int a = 0; a < 3; ++a) {
      AuthorRecord r;
      r.author_id = "au" + std::to_string(next++);
      r.display_name = "Author, \"" + r.author_id + "\"";
      if (rng() % 2) {
        r.granularity = Granularity::per_paper;
        for (int p = 0; p < 1 + static_cast<int>(rng() % 4); ++p) {
          PaperRecord paper{"p" + std::to_string(p), 2000 + static_cast<int>(rng() % 5), {}};
          for (int y = paper.pub_year; y < 2008; ++y)
            if (rng() % 2) paper.citations_by_year[y] = static_cast<std::int64_t>(rng() % 50);
          r.papers.push_back(paper);
        }
      } else {
        r.granularity = Granularity::aggregate;
        r.synthetic = rng() % 2;
        std::uniform_real_distribution<double> u(0, 100);
        for (int y = 2000; y < 2008; ++y)
          r.yearly_citations[y] = r.synthetic ? u(rng) : static_cast<double>(rng() % 100);
      }
      if (rng() % 2) r.career_start_year = 1999;
      if (rng() % 2) r.observed_to = 2012;
      cohort.push_back(r);
    }
  }
  d.provenance = {"random", "seeded"};
  return d;
}

}  // namespace

// ---------------------------------------------------------------------------
// CSV ingest

TEST_CASE("per-paper rows fold into one paper", "[ingest]") {
  const auto result = ingest_text("a1,p1,2000,2001,3\na1,p1,2000,2002,2\n");
  REQUIRE(result.dataset.author_count() == 1);
  const auto& r = result.dataset.cohorts.at("default").at(0);
  REQUIRE(r.papers.size() == 1);
  const auto n = cumulative_citations(r);
  CHECK(std::vector<double>(n.values.begin(), n.values.end()) == std::vector<double>{0, 3, 5});
  CHECK(result.warnings.empty());
}

TEST_CASE("citations before publication are rejected with the line number", "[ingest]") {
  CHECK_THROWS_WITH(ingest_text("a1,p1,2000,2001,3\na1,p1,2000,1999,1\n"), ContainsSubstring("line 2"));
  CHECK_THROWS_AS(ingest_text("a1,p1,2000,1999,1\n"), DataError);
}

TEST_CASE("clamping moves early citations to the publication year", "[ingest]") {
  const auto result = ingest_text("a1,p1,2000,1999,4\na1,p1,2000,2000,1\n", {"c", true});
  REQUIRE(result.warnings.size() == 1);
  CHECK_THAT(result.warnings[0], ContainsSubstring("line 1"));
  const auto& paper = result.dataset.cohorts.at("c").at(0).papers.at(0);
  CHECK(paper.citations_by_year == std::map<int, std::int64_t>{{2000, 5}});
}

TEST_CASE("an empty file gives an empty dataset and a warning", "[ingest]") {
  const auto result = ingest_text("");
  CHECK(result.dataset.author_count() == 0);
  REQUIRE(result.warnings.size() == 1);
  CHECK_THAT(result.warnings[0], ContainsSubstring("empty"));
  CHECK(ingest_text("author_id,paper_id,pub_year,cite_year,count\n# nothing\n").warnings.size() == 1);
}

TEST_CASE("malformed rows name their line", "[ingest]") {
  CHECK_THROWS_WITH(ingest_text("a1,p1,2000,2001,3\n\na1,p1,2000\n"), ContainsSubstring("line 3"));
  CHECK_THROWS_WITH(ingest_text("a1,p1,20x0,2001,3\n"), ContainsSubstring("line 1"));
  CHECK_THROWS_WITH(ingest_text("a1,p1,2000,2001,-3\n"), ContainsSubstring("negative"));
  CHECK_THROWS_WITH(ingest_text("a1,2000,1.5\n"), ContainsSubstring("line 1"));
  CHECK_THROWS_WITH(ingest_text("a1,p1,2000,2001,3\na1,p1,2001,2002,1\n"), ContainsSubstring("pub_year"));
}

TEST_CASE("mixed granularity for one author is an error", "[ingest]") {
  CHECK_THROWS_WITH(ingest_text("a1,p1,2000,2001,3\na1,2001,4\n"),
                    ContainsSubstring("line 2") && ContainsSubstring("mixes"));
  CHECK_NOTHROW(ingest_text("a1,p1,2000,2001,3\na2,2001,4\n"));
}

TEST_CASE("aggregate rows, headers and comments", "[ingest]") {
  const auto result = ingest_text("author_id,year,citations\r\n# exported\r\nz,2001,4\r\nz,2000,1\r\nz,2001,2\r\n");
  const auto& r = result.dataset.cohorts.at("default").at(0);
  CHECK(r.granularity == Granularity::aggregate);
  CHECK(r.yearly_citations == std::map<int, double>{{2000, 1}, {2001, 6}});
  CHECK_FALSE(r.synthetic);
}

TEST_CASE("authors keep first-appearance order", "[ingest]") {
  const auto result = ingest_text("zed,p,2000,2000,1\namy,p,2000,2000,1\nzed,q,2001,2001,1\n");
  const auto& c = result.dataset.cohorts.at("default");
  REQUIRE(c.size() == 2);
  CHECK(c[0].author_id == "zed");
  CHECK(c[0].papers.size() == 2);
  CHECK(c[1].author_id == "amy");
}

// ---------------------------------------------------------------------------
// Canonical JSON

TEST_CASE("dataset round trip is lossless", "[json][property]") {
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 100; ++trial) {
    const auto d = random_dataset(rng);
    const auto text = dataset_to_json(d);
    const auto back = dataset_from_json(text);
    CHECK(back == d);
    CHECK(dataset_to_json(back) == text);
  }
}

TEST_CASE("synthetic model records keep fractional values", "[json]") {
  Dataset d;
  d.cohorts["m"] = {simulate_simple({0.3, 0.7, std::nullopt, 9, SamplingMode::continuous_exact}, {"x", 2000})};
  const auto back = dataset_from_json(dataset_to_json(d));
  CHECK(back == d);
  const auto& y = back.cohorts.at("m")[0].yearly_citations;
  CHECK(y.at(2001) == d.cohorts.at("m")[0].yearly_citations.at(2001));
  CHECK(y.at(2001) != std::floor(y.at(2001)));
}

TEST_CASE("written files round trip and are deterministic", "[json]") {
  std::mt19937_64 rng(53);
  const auto d = random_dataset(rng);
  const auto dir = std::filesystem::temp_directory_path() / "citeaccel_io_test";
  std::filesystem::create_directories(dir);
  write_dataset(d, dir / "a.json");
  write_dataset(read_dataset(dir / "a.json"), dir / "b.json");
  CHECK(read_dataset(dir / "a.json") == d);
  std::ifstream a(dir / "a.json"), b(dir / "b.json");
  std::stringstream sa, sb;
  sa << a.rdbuf();
  sb << b.rdbuf();
  CHECK(sa.str() == sb.str());
  CHECK_THROWS_AS(read_dataset(dir / "missing.json"), DataError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("JSON keys are sorted", "[json]") {
  std::mt19937_64 rng(59);
  const auto text = dataset_to_json(random_dataset(rng));
  CHECK(text.find("\"cohorts\"") < text.find("\"format_version\""));
  CHECK(text.find("\"format_version\"") < text.find("\"provenance\""));
}

TEST_CASE("schema errors name the offending field", "[json][errors]") {
  const std::string negative = R"({"format_version": "citeaccel-dataset/1", "cohorts": {"A": [
    {"author_id": "x", "granularity": "per-paper", "papers": [
      {"paper_id": "p", "pub_year": 2000, "citations": {"2001": 1}},
      {"paper_id": "q", "pub_year": 2000, "citations": {"2001": -4}}]}]}})";
  CHECK(schema_path(negative) == "cohorts.A[0].papers[1].citations.2001");

  CHECK(schema_path(R"({"format_version": "citeaccel-dataset/9", "cohorts": {}})") == "format_version");
  CHECK(schema_path(R"({"cohorts": {}})") == "$.format_version");
  CHECK(schema_path(R"({"format_version": "citeaccel-dataset/1", "cohorts": {"A": [
    {"author_id": "x", "granularity": "aggregate", "yearly_citations": {"2000": 1}},
    {"author_id": "x", "granularity": "aggregate", "yearly_citations": {"2000": 2}}]}})") ==
        "cohorts.A[1].author_id");
  CHECK(schema_path(R"({"format_version": "citeaccel-dataset/1", "cohorts": {"A": [
    {"author_id": "x", "granularity": "aggregate", "yearly": {}}]}})") == "cohorts.A[0].yearly");
  CHECK(schema_path(R"({"format_version": "citeaccel-dataset/1", "cohorts": {"A": [
    {"author_id": "x", "granularity": "aggregate", "yearly_citations": {"2000": 1.5}}]}})") ==
        "cohorts.A[0].yearly_citations.2000");
  CHECK(schema_path(R"({"format_version": "citeaccel-dataset/1", "cohorts": {"A": [
    {"author_id": "x", "granularity": "per-paper", "papers": [
      {"paper_id": "p", "pub_year": 2000, "citations": {"1999": 1}}]}]}})") ==
        "cohorts.A[0].papers[0].citations.1999");
  CHECK(schema_path("{not json") == "$");
}

// ---------------------------------------------------------------------------
// CSV output

TEST_CASE("values are written with six significant digits", "[csv]") {
  CHECK(format_value(6.0) == "6");
  CHECK(format_value(1.0 / 3.0) == "0.333333");
  CHECK(format_value(1234567.0) == "1.23457e+06");
  CHECK(format_value(-0.0) == "0");
  CHECK(format_value(-2.5) == "-2.5");
}

TEST_CASE("fields are quoted only when needed", "[csv]") {
  CHECK(csv_field("plain") == "plain");
  CHECK(csv_field("a,b") == "\"a,b\"");
  CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
}

TEST_CASE("measure rows carry measure, parameters and career-start policy", "[csv]") {
  std::ostringstream os;
  write_measures_csv(os, {{"a", 3, 2003, MeasureId::W_sg, {1, 1, 2}, 1.5}, {"a", 3, 2003, MeasureId::hc, {1, 2, 2}, 4}},
                     CareerPolicy::parse("threshold:10"));
  CHECK(os.str() ==
        "author_id,career_year,calendar_year,measure,params,value,career_start\n"
        "a,3,2003,W_sg,k=2,1.5,threshold:10\n"
        "a,3,2003,hc,gamma=1;delta=2,4,threshold:10\n");
}

TEST_CASE("other writers emit self-describing headers", "[csv]") {
  const CareerPolicy policy = CareerPolicy::parse("first-pub");
  RegressionResult reg;
  reg.points = {{"a", 1, 2}};
  reg.n = 1;
  std::ostringstream r, c, s;
  write_regression_csv(r, reg, {MeasureId::W, {}}, policy);
  CHECK(r.str() == "author_id,x,y,measure,params,career_start\na,1,2,W,,first-pub\n");
  write_cohorts_csv(c, {{"fields", "a", 2.25}}, {MeasureId::W, {}}, policy);
  CHECK(c.str() == "cohort,author_id,measure,params,value,career_start\nfields,a,W,,2.25,first-pub\n");
  write_stats_csv(s, {{"a", MeasureId::W, {}, {5, 9}, {4, std::nullopt, 1}}}, policy);
  CHECK(s.str() == "author_id,measure,params,window,n,mean,sd,career_start\na,W,,5:9,1,4,,first-pub\n");
  reg.slope = 0.5;
  reg.intercept = 1.0 / 3.0;
  reg.r_squared = 0.744;
  CHECK(regression_summary(reg) == "n=1 slope=0.5 intercept=0.333333333333333 r_squared=0.744");
}
