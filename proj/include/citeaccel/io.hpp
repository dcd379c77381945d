// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "citeaccel/analysis.hpp"
#include "citeaccel/axioms.hpp"
#include "citeaccel/core.hpp"

namespace citeaccel {

inline constexpr std::string_view kFormatVersion = "citeaccel-dataset/1";

struct Dataset {
  std::string format_version{kFormatVersion};
  std::map<std::string, std::vector<AuthorRecord>> cohorts;
  std::vector<std::string> provenance;

  bool operator==(const Dataset&) const = default;
  std::size_t author_count() const;
};

// Throws SchemaError on duplicate author ids or invalid records.
void validate(const Dataset& dataset);

struct IngestOptions {
  std::string cohort = "default";
  // Move citations dated before publication to the publication year instead
  // of rejecting the row.
  bool clamp_pre_publication = false;
};

struct IngestResult {
  Dataset dataset;
  std::vector<std::string> warnings;
};

// Rows are either `author_id,paper_id,pub_year,cite_year,count` (per-paper) or
// `author_id,year,citations` (aggregate). A leading header row starting with
// "author_id" is skipped, as are blank lines and lines starting with '#'.
IngestResult ingest_csv(std::istream& in, const IngestOptions& options = {});
IngestResult ingest_csv(const std::filesystem::path& path, const IngestOptions& options = {});

// Canonical JSON document. Output is deterministic: sorted keys, two-space indent.
std::string dataset_to_json(const Dataset& dataset);
Dataset dataset_from_json(std::string_view text);

Dataset read_dataset(const std::filesystem::path& path);
void write_dataset(const Dataset& dataset, const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// CSV output

// Measure values are written with 6 significant digits.
std::string format_value(double value);

// Quotes the field when it contains a comma, quote or newline.
std::string csv_field(std::string_view field);

struct MeasureRow {
  std::string author_id;
  int career_year = 0;
  int calendar_year = 0;
  MeasureId measure{};
  MeasureParams params;
  double value = 0;
};

void write_measures_csv(std::ostream& os, const std::vector<MeasureRow>& rows,
                        const CareerPolicy& policy);

void write_axioms_csv(std::ostream& os, const AxiomTable& table);

void write_regression_csv(std::ostream& os, const RegressionResult& result,
                          const MeasureChoice& measure, const CareerPolicy& policy);
std::string regression_summary(const RegressionResult& result);

void write_cohorts_csv(std::ostream& os, const std::vector<CohortRow>& rows,
                       const MeasureChoice& measure, const CareerPolicy& policy);

struct StatsRow {
  std::string author_id;
  MeasureId measure{};
  MeasureParams params;
  Window window;
  WindowStats stats;
};

void write_stats_csv(std::ostream& os, const std::vector<StatsRow>& rows, const CareerPolicy& policy);

}  // namespace citeaccel
