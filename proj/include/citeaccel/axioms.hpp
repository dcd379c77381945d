// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "citeaccel/core.hpp"
#include "citeaccel/models.hpp"

namespace citeaccel {

enum class Axiom { computability, units, locality, constancy, end_of_career, packaging_independence };
enum class Verdict { pass, fail, not_checkable };

std::string_view to_string(Axiom axiom);
std::string_view to_string(Verdict verdict);

// Witness of a failed axiom, complete enough to be replayed in isolation.
// `record` (and `variant` for packaging) hold the data the measure was
// evaluated on; analytic witnesses carry `model` instead.
struct Counterexample {
  std::string fixture;
  std::optional<AuthorRecord> record;
  std::optional<AuthorRecord> variant;
  std::optional<ModelParams> model;
  int t = 0;
  std::optional<int> t_other;
  double value = 0;
  double other_value = 0;
};

struct AxiomVerdict {
  Axiom axiom{};
  MeasureId measure{};
  MeasureParams params;
  Verdict verdict = Verdict::not_checkable;
  std::string evidence;
  std::optional<Counterexample> counterexample;
};

// True iff the stored counterexample still violates the axiom when
// re-evaluated from scratch. False for verdicts without a counterexample.
bool replay_fails(const AxiomVerdict& verdict);

// ---------------------------------------------------------------------------
// Fixtures

// Papers active in years 0..4, no citations in years 5..14.
AuthorRecord locality_fixture();
// Several papers over several publication years; base for random repackaging.
AuthorRecord packaging_fixture();
// 10 papers x 100 citations, and the same citations on a single book.
std::pair<AuthorRecord, AuthorRecord> book_merge_pair();
// Two records with identical N(t) whose citations sit on papers of different ages.
std::pair<AuthorRecord, AuthorRecord> cross_year_pair();

// Random reallocation of every citation event of `record` onto a fresh set of
// papers with random publication years. Per-year citation totals, the career
// start and the observed range are preserved, hence so is N(t).
AuthorRecord repackage(const AuthorRecord& record, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Checks

AxiomVerdict check_computability(MeasureId id, const MeasureParams& params = {});
AxiomVerdict check_units(MeasureId id, const MeasureParams& params = {});
AxiomVerdict check_locality(MeasureId id, const MeasureParams& params = {});

struct ConstancyOptions {
  std::vector<std::pair<int, int>> grid{{1, 1}, {2, 3}, {3, 2}, {5, 5}};
  int t_from = 1;
  int t_to = 200;
  double analytic_tolerance = 1e-9;
  double discrete_tolerance = 0.05;
};

AxiomVerdict check_constancy(MeasureId id, const MeasureParams& params = {},
                             const ConstancyOptions& options = {});

ModelParams default_retirement_model();  // p=1, c=2, T=10, horizon 30

AxiomVerdict check_end_of_career(MeasureId id, const MeasureParams& params = {},
                                 const ModelParams& model = default_retirement_model());

struct PackagingOptions {
  int trials = 1000;
  std::uint64_t seed = 20200201;
};

// Runs the book-merge and cross-year witnesses, then `trials` random
// repackagings of `fixture`. Throws DataError if the fixture has fewer than
// 3 papers or spans fewer than 3 publication years.
AxiomVerdict check_packaging(MeasureId id, const MeasureParams& params = {},
                             const PackagingOptions& options = {},
                             const AuthorRecord& fixture = packaging_fixture());

// ---------------------------------------------------------------------------
// Table

// A measure column: the measure plus the parameters it is evaluated at.
struct MeasureColumn {
  std::string label;
  MeasureId id{};
  MeasureParams params;
};

// w, W, W5, m, alpha1, hc, ht, A, mu at default parameters.
std::vector<MeasureColumn> standard_columns();
std::vector<Axiom> all_axioms();

struct AxiomTableOptions {
  MeasureParams constancy_h_params{1.0, 2.0, 2};  // gamma, delta for hc/ht constancy
  ConstancyOptions constancy;
  PackagingOptions packaging;
  ModelParams retirement = default_retirement_model();
};

struct AxiomTable {
  std::vector<Axiom> axioms;
  std::vector<MeasureColumn> columns;
  std::vector<AxiomVerdict> cells;  // row-major: axiom x column
  AxiomTableOptions options;

  const AxiomVerdict& at(std::size_t axiom_row, std::size_t column) const {
    return cells.at(axiom_row * columns.size() + column);
  }
};

AxiomTable axiom_table(const std::vector<MeasureColumn>& columns = standard_columns(),
                       const AxiomTableOptions& options = {});

// Aligned text rendering with check / cross marks.
std::string format_table(const AxiomTable& table);

}  // namespace citeaccel
