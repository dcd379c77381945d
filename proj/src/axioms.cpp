// SPDX-License-Identifier: Apache-2.0
#include "citeaccel/axioms.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <set>
#include <sstream>

#include "citeaccel/measures.hpp"

namespace citeaccel {

std::string_view to_string(Axiom axiom) {
  switch (axiom) {
    case Axiom::computability: return "computability";
    case Axiom::units: return "units";
    case Axiom::locality: return "locality";
    case Axiom::constancy: return "constancy";
    case Axiom::end_of_career: return "end_of_career";
    case Axiom::packaging_independence: return "packaging_independence";
  }
  return "?";
}

std::string_view to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::not_checkable: return "not-checkable";
  }
  return "?";
}

namespace {

constexpr double kZeroTolerance = 1e-9;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string name_of(MeasureId id, const MeasureParams& params) {
  std::string s(to_string(id));
  if (auto p = describe_params(id, params); !p.empty()) s += "(" + p + ")";
  return s;
}

PaperRecord paper(std::string id, int pub, std::map<int, std::int64_t> citations) {
  return {std::move(id), pub, std::move(citations)};
}

AuthorRecord fixture_record(std::string id, int start, int last, std::vector<PaperRecord> papers) {
  AuthorRecord r;
  r.author_id = std::move(id);
  r.granularity = Granularity::per_paper;
  r.papers = std::move(papers);
  r.career_start_year = start;
  r.observed_to = last;
  return r;
}

double relative_spread(double lo, double hi) {
  const double scale = std::max(std::abs(lo), std::abs(hi));
  return scale == 0 ? 0.0 : (hi - lo) / scale;
}

// Witness time: `preferred` when it is among the failures, else the first.
int pick_witness(const std::vector<int>& failing, int preferred) {
  return std::find(failing.begin(), failing.end(), preferred) != failing.end() ? preferred
                                                                               : failing.front();
}

AxiomVerdict make(Axiom axiom, MeasureId id, const MeasureParams& params) {
  AxiomVerdict v;
  v.axiom = axiom;
  v.measure = id;
  v.params = params;
  return v;
}

// Value of `id` on a model: analytic where a closed form exists, simulated otherwise.
struct ModelProbe {
  MeasureId id;
  MeasureParams params;
  ModelParams model;
  std::optional<AuthorRecord> record;
  std::optional<MeasureEvaluator> eval;

  ModelProbe(MeasureId id_, const MeasureParams& params_, ModelParams model_, bool force_record)
      : id(id_), params(params_), model(model_) {
    if (force_record || !analytic_supported(id)) {
      record = simulate(model);
      eval.emplace(*record);
    }
  }

  std::optional<double> at(int t) const {
    if (eval) return eval->try_value(id, params, t);
    return analytic_value(id, model, t, params);
  }
};

// The "zero from here on" offset: a trailing stencil must lie entirely in
// the quiet interval before it can read zero.
int quiet_lag(MeasureId id, const MeasureParams& params) {
  const int width = support_width(id, params);
  return width == kUnboundedSupport ? 0 : width - 1;
}

// Quadratic N(t) = 3t^2 + 2t + 1 whose second derivative is 6.
AuthorRecord quadratic_probe_record() {
  AuthorRecord r;
  r.author_id = "quadratic-probe";
  r.granularity = Granularity::aggregate;
  r.career_start_year = 0;
  double prev = 0;
  for (int t = 0; t <= 20; ++t) {
    const double n = 3.0 * t * t + 2.0 * t + 1.0;
    r.yearly_citations[t] = n - prev;
    prev = n;
  }
  return r;
}

constexpr int kProbeT = 12;

bool w_family(MeasureId id) {
  return id == MeasureId::W || id == MeasureId::W_delta || id == MeasureId::W_sg;
}

// Second-derivative estimates of the W family on the quadratic probe across
// step sizes / window widths.
std::vector<std::pair<std::string, double>> scale_probe(MeasureId id) {
  const MeasureEvaluator eval(quadratic_probe_record());
  std::vector<std::pair<std::string, double>> out;
  if (id == MeasureId::W_sg) {
    for (int k = 2; k <= 4; ++k)
      out.emplace_back("k=" + std::to_string(k), eval.value(MeasureId::W_sg, {1, 1, k}, kProbeT));
  } else {
    for (int d = 1; d <= 3; ++d)
      out.emplace_back("delta=" + std::to_string(d),
                       eval.value(MeasureId::W_delta, {1, static_cast<double>(d), 2}, kProbeT));
  }
  return out;
}

bool series_identical(const MeasureSeries& a, const MeasureSeries& b, int* where, double* va,
                      double* vb) {
  std::set<int> ts;
  for (const auto& [t, _] : a.values) ts.insert(t);
  for (const auto& [t, _] : b.values) ts.insert(t);
  for (int t : ts) {
    const auto ia = a.values.find(t);
    const auto ib = b.values.find(t);
    const bool both = ia != a.values.end() && ib != b.values.end();
    if (!both || ia->second != ib->second) {
      *where = t;
      *va = ia != a.values.end() ? ia->second : std::nan("");
      *vb = ib != b.values.end() ? ib->second : std::nan("");
      return false;
    }
  }
  return true;
}

}  // namespace

// ---------------------------------------------------------------------------
// Fixtures

AuthorRecord locality_fixture() {
  std::vector<PaperRecord> papers;
  for (int i = 0; i < 5; ++i) {
    std::map<int, std::int64_t> c;
    for (int y = 2000 + i; y <= 2004; ++y) c[y] = 30;
    papers.push_back(paper("q" + std::to_string(i + 1), 2000 + i, std::move(c)));
  }
  return fixture_record("locality", 2000, 2014, std::move(papers));
}

AuthorRecord packaging_fixture() {
  return fixture_record(
      "packaging", 2000, 2010,
      {
          paper("p1", 2000, {{2001, 3}, {2002, 5}, {2003, 4}, {2005, 2}, {2008, 1}}),
          paper("p2", 2001, {{2001, 1}, {2002, 6}, {2003, 7}, {2004, 3}, {2006, 2}}),
          paper("p3", 2002, {{2003, 2}, {2004, 8}, {2005, 9}, {2006, 4}, {2009, 3}}),
          paper("p4", 2002, {{2004, 1}, {2007, 5}, {2010, 6}}),
          paper("p5", 2004, {{2005, 4}, {2006, 6}, {2007, 7}, {2008, 2}}),
          paper("p6", 2006, {{2007, 3}, {2008, 5}, {2009, 8}, {2010, 4}}),
      });
}

std::pair<AuthorRecord, AuthorRecord> book_merge_pair() {
  std::map<int, std::int64_t> ten_per_year, hundred_per_year;
  for (int y = 2001; y <= 2010; ++y) {
    ten_per_year[y] = 10;
    hundred_per_year[y] = 100;
  }
  std::vector<PaperRecord> papers;
  for (int i = 1; i <= 10; ++i) papers.push_back(paper("paper" + std::to_string(i), 2000, ten_per_year));
  return {fixture_record("ten-papers", 2000, 2010, std::move(papers)),
          fixture_record("one-book", 2000, 2010, {paper("book", 2000, hundred_per_year)})};
}

std::pair<AuthorRecord, AuthorRecord> cross_year_pair() {
  return {fixture_record("old-paper-cited", 2000, 2006,
                         {paper("old", 2000, {{2005, 10}}), paper("new", 2004, {})}),
          fixture_record("new-paper-cited", 2000, 2006,
                         {paper("old", 2000, {}), paper("new", 2004, {{2005, 10}})})};
}

AuthorRecord repackage(const AuthorRecord& record, std::uint64_t seed) {
  if (record.granularity != Granularity::per_paper)
    throw GranularityError("repackaging needs a per-paper record");
  std::mt19937_64 rng(seed);
  auto below = [&](std::uint64_t n) { return static_cast<std::int64_t>(rng() % n); };

  const int start = career_start_year(record);
  const int last = last_observed_year(record);
  std::map<int, std::int64_t> totals;
  int first_cite = start;
  for (const auto& p : record.papers)
    for (const auto& [year, count] : p.citations_by_year) {
      totals[year] += count;
      if (count > 0) first_cite = std::min(first_cite, year);
    }

  const auto n_papers = 1 + below(2 * record.papers.size() + 2);
  std::vector<int> pubs(static_cast<std::size_t>(n_papers));
  pubs[0] = std::min(start, first_cite);
  for (std::size_t i = 1; i < pubs.size(); ++i)
    pubs[i] = start + static_cast<int>(below(static_cast<std::uint64_t>(last - start + 1)));
  std::sort(pubs.begin(), pubs.end());

  AuthorRecord out = record;
  out.papers.clear();
  for (std::size_t i = 0; i < pubs.size(); ++i)
    out.papers.push_back(paper("r" + std::to_string(i + 1), pubs[i], {}));
  out.career_start_year = start;
  out.observed_to = last;

  for (const auto& [year, count] : totals) {
    // papers [0, eligible) are published by `year`
    const auto eligible = static_cast<std::uint64_t>(
        std::upper_bound(pubs.begin(), pubs.end(), year) - pubs.begin());
    for (std::int64_t unit = 0; unit < count; ++unit)
      ++out.papers[static_cast<std::size_t>(below(std::max<std::uint64_t>(eligible, 1)))]
            .citations_by_year[year];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Checks

AxiomVerdict check_computability(MeasureId id, const MeasureParams& params) {
  auto v = make(Axiom::computability, id, params);
  std::vector<std::string> unresolved;
  for (const auto& p : descriptor(id).free_params)
    if (!p.principled) unresolved.push_back(p.name);
  if (unresolved.empty()) {
    v.verdict = Verdict::pass;
    v.evidence = "declared metadata: computable from citation counts, paper counts and career age";
    return v;
  }
  std::string names;
  for (const auto& n : unresolved) names += (names.empty() ? "" : ", ") + n;
  v.verdict = Verdict::fail;
  v.evidence = "declared metadata: free parameters without a principled value: " + names;
  v.counterexample = Counterexample{"registry:" + std::string(to_string(id)) + " free_params=" + names};
  return v;
}

AxiomVerdict check_units(MeasureId id, const MeasureParams& params) {
  auto v = make(Axiom::units, id, params);
  const auto& d = descriptor(id);
  if (d.dims != kAccelerationDims) {
    v.verdict = Verdict::fail;
    v.evidence = "dimensions " + d.dims.str() + " differ from " + kAccelerationDims.str();
    v.counterexample = Counterexample{"registry:" + std::string(d.name) + " dims=" + d.dims.str()};
    return v;
  }
  v.verdict = Verdict::pass;
  v.evidence = "dimensions " + d.dims.str();
  if (w_family(id)) {
    const auto probe = scale_probe(id);
    std::string trace;
    double lo = probe.front().second, hi = lo;
    for (const auto& [label, value] : probe) {
      trace += (trace.empty() ? "" : ", ") + label + ":" + num(value);
      lo = std::min(lo, value);
      hi = std::max(hi, value);
    }
    v.evidence += "; scale probe on N=3t^2+2t+1 at t=12: " + trace;
    if (hi - lo > kZeroTolerance) {
      v.verdict = Verdict::fail;
      v.counterexample = Counterexample{"quadratic-probe", quadratic_probe_record(), {}, {}, kProbeT};
      v.counterexample->value = lo;
      v.counterexample->other_value = hi;
    }
  }
  return v;
}

AxiomVerdict check_locality(MeasureId id, const MeasureParams& params) {
  auto v = make(Axiom::locality, id, params);
  const auto fixture = locality_fixture();
  const MeasureEvaluator eval(fixture);
  const int from = 5 + quiet_lag(id, params);
  std::vector<int> failing;
  std::map<int, double> values;
  for (int t = from; t <= 14; ++t) {
    const auto value = eval.try_value(id, params, t);
    values[t] = value.value_or(std::nan(""));
    if (!value || std::abs(*value) > kZeroTolerance) failing.push_back(t);
  }
  const std::string where = " on fixture 'locality' (citations only in years 0..4)";
  if (failing.empty()) {
    v.verdict = Verdict::pass;
    v.evidence = name_of(id, params) + " = 0 for t = " + std::to_string(from) + "..14" + where;
    return v;
  }
  const int t = pick_witness(failing, 10);
  v.verdict = Verdict::fail;
  v.evidence = name_of(id, params) + "(" + std::to_string(t) + ") = " + num(values[t]) + where;
  v.counterexample = Counterexample{"locality", fixture, {}, {}, t};
  v.counterexample->value = values[t];
  return v;
}

AxiomVerdict check_constancy(MeasureId id, const MeasureParams& params,
                             const ConstancyOptions& options) {
  auto v = make(Axiom::constancy, id, params);
  const bool analytic = analytic_supported(id);
  const double tol = analytic ? options.analytic_tolerance : options.discrete_tolerance;
  std::string values;
  for (const auto& [p, c] : options.grid) {
    ModelParams model;
    model.p = p;
    model.c = c;
    model.horizon = options.t_to;
    model.mode = analytic ? SamplingMode::continuous_exact : SamplingMode::discrete_event;
    const ModelProbe probe(id, params, model, false);
    std::optional<std::pair<int, double>> lo, hi;
    for (int t = options.t_from; t <= options.t_to; ++t) {
      const auto value = probe.at(t);
      if (!value) continue;
      if (!lo || *value < lo->second) lo = {t, *value};
      if (!hi || *value > hi->second) hi = {t, *value};
    }
    if (!lo) continue;
    const double spread = relative_spread(lo->second, hi->second);
    if (spread > tol) {
      v.verdict = Verdict::fail;
      v.evidence = name_of(id, params) + " on " + std::string(to_string(model.mode)) +
                   " simple model p=" + std::to_string(p) + " c=" + std::to_string(c) + ": " +
                   num(lo->second) + " at t=" + std::to_string(lo->first) + " vs " +
                   num(hi->second) + " at t=" + std::to_string(hi->first);
      if (id == MeasureId::hc || id == MeasureId::ht)
        v.evidence += " (delta-dependent cell, evaluated at delta=" + num(params.delta) + ")";
      Counterexample ce{"simple-model"};
      if (probe.record) ce.record = *probe.record;
      ce.model = model;
      ce.t = lo->first;
      ce.t_other = hi->first;
      ce.value = lo->second;
      ce.other_value = hi->second;
      v.counterexample = std::move(ce);
      return v;
    }
    values += (values.empty() ? "" : ", ") + ("p=" + std::to_string(p) + ",c=" + std::to_string(c) +
                                               ":" + num(lo->second));
  }
  v.verdict = Verdict::pass;
  v.evidence = name_of(id, params) + " constant on t=" + std::to_string(options.t_from) + ".." +
               std::to_string(options.t_to) + " (" + (analytic ? "closed form" : "discrete events") +
               "): " + values;
  return v;
}

ModelParams default_retirement_model() {
  ModelParams m;
  m.p = 1;
  m.c = 2;
  m.retirement = 10;
  m.horizon = 30;
  m.mode = SamplingMode::continuous_exact;
  return m;
}

AxiomVerdict check_end_of_career(MeasureId id, const MeasureParams& params,
                                 const ModelParams& model) {
  auto v = make(Axiom::end_of_career, id, params);
  if (!model.retirement) throw ParameterError("end-of-career check needs a retirement year T");
  const int T = *model.retirement;
  ModelParams m = model;
  // aggregate measures read the continuous-exact series; per-paper measures
  // use closed forms, or discrete events where none exists
  const bool aggregate = descriptor(id).granularity_needed == Granularity::aggregate;
  m.mode = aggregate || analytic_supported(id) ? SamplingMode::continuous_exact
                                               : SamplingMode::discrete_event;
  const ModelProbe probe(id, params, m, aggregate);
  const int lag = quiet_lag(id, params);
  const int from = T + std::max(1, lag);
  std::vector<int> failing;
  std::map<int, double> values;
  for (int t = from; t <= m.horizon; ++t) {
    const auto value = probe.at(t);
    values[t] = value.value_or(std::nan(""));
    if (!value || std::abs(*value) > kZeroTolerance) failing.push_back(t);
  }
  const std::string where = " on retirement model p=" + num(m.p) + " c=" + num(m.c) +
                            " T=" + std::to_string(T) + " (" + std::string(to_string(m.mode)) + ")";
  if (failing.empty()) {
    v.verdict = Verdict::pass;
    v.evidence = name_of(id, params) + " = 0 for t = " + std::to_string(from) + ".." +
                 std::to_string(m.horizon) + where;
    return v;
  }
  const int t = pick_witness(failing, 2 * T);
  v.verdict = Verdict::fail;
  v.evidence = name_of(id, params) + "(" + std::to_string(t) + ") = " + num(values[t]) + where;
  Counterexample ce{"retirement-model"};
  if (probe.record) ce.record = *probe.record;
  ce.model = m;
  ce.t = t;
  ce.value = values[t];
  v.counterexample = std::move(ce);
  return v;
}

AxiomVerdict check_packaging(MeasureId id, const MeasureParams& params,
                             const PackagingOptions& options, const AuthorRecord& fixture) {
  auto v = make(Axiom::packaging_independence, id, params);
  std::set<int> pub_years;
  for (const auto& p : fixture.papers) pub_years.insert(p.pub_year);
  if (fixture.granularity != Granularity::per_paper || fixture.papers.size() < 3 ||
      pub_years.size() < 3)
    throw DataError("fixture too small to repackage: need >= 3 papers over >= 3 publication years");

  auto compare = [&](const AuthorRecord& a, const AuthorRecord& b,
                     const std::string& label) -> bool {
    const auto sa = measure_series(a, id, params, 0, career_horizon(a));
    const auto sb = measure_series(b, id, params, 0, career_horizon(b));
    int t = 0;
    double va = 0, vb = 0;
    if (series_identical(sa, sb, &t, &va, &vb)) return true;
    v.verdict = Verdict::fail;
    v.evidence = name_of(id, params) + "(" + std::to_string(t) + ") = " + num(va) + " on '" +
                 a.author_id + "' vs " + num(vb) + " on '" + b.author_id + "' (" + label +
                 ", identical N(t))";
    Counterexample ce{label, a, b};
    ce.t = t;
    ce.value = va;
    ce.other_value = vb;
    v.counterexample = std::move(ce);
    return false;
  };

  const auto [papers, book] = book_merge_pair();
  if (!compare(papers, book, "book-merge")) return v;
  const auto [old_cited, new_cited] = cross_year_pair();
  if (!compare(old_cited, new_cited, "cross-year")) return v;
  for (int trial = 0; trial < options.trials; ++trial) {
    const auto variant = repackage(fixture, options.seed + static_cast<std::uint64_t>(trial));
    if (!compare(fixture, variant, "random repackaging #" + std::to_string(trial))) return v;
  }
  v.verdict = Verdict::pass;
  v.evidence = name_of(id, params) + " unchanged under book-merge, cross-year and " +
               std::to_string(options.trials) + " random repackagings (seed " +
               std::to_string(options.seed) + ")";
  return v;
}

bool replay_fails(const AxiomVerdict& verdict) {
  if (verdict.verdict != Verdict::fail || !verdict.counterexample) return false;
  const auto& ce = *verdict.counterexample;
  const MeasureId id = verdict.measure;
  const auto& params = verdict.params;
  switch (verdict.axiom) {
    case Axiom::computability:
      return check_computability(id, params).verdict == Verdict::fail;
    case Axiom::units: {
      if (descriptor(id).dims != kAccelerationDims) return true;
      if (!ce.record) return false;
      const auto probe = scale_probe(id);
      double lo = probe.front().second, hi = lo;
      for (const auto& [_, value] : probe) {
        lo = std::min(lo, value);
        hi = std::max(hi, value);
      }
      return hi - lo > kZeroTolerance;
    }
    case Axiom::locality:
    case Axiom::end_of_career: {
      std::optional<double> value;
      if (ce.record)
        value = MeasureEvaluator(*ce.record).try_value(id, params, ce.t);
      else if (ce.model)
        value = analytic_value(id, *ce.model, ce.t, params);
      else
        return false;
      return !value || std::abs(*value) > kZeroTolerance;
    }
    case Axiom::constancy: {
      if (!ce.t_other || !ce.model) return false;
      std::optional<double> a, b;
      double tol = ConstancyOptions{}.analytic_tolerance;
      if (ce.record) {
        const MeasureEvaluator eval(*ce.record);
        a = eval.try_value(id, params, ce.t);
        b = eval.try_value(id, params, *ce.t_other);
        tol = ConstancyOptions{}.discrete_tolerance;
      } else {
        a = analytic_value(id, *ce.model, ce.t, params);
        b = analytic_value(id, *ce.model, *ce.t_other, params);
      }
      if (!a || !b) return false;
      return relative_spread(std::min(*a, *b), std::max(*a, *b)) > tol;
    }
    case Axiom::packaging_independence: {
      if (!ce.record || !ce.variant) return false;
      if (cumulative_citations(*ce.record) != cumulative_citations(*ce.variant)) return false;
      const auto a = MeasureEvaluator(*ce.record).try_value(id, params, ce.t);
      const auto b = MeasureEvaluator(*ce.variant).try_value(id, params, ce.t);
      return a.has_value() != b.has_value() || (a && *a != *b);
    }
  }
  return false;
}

// ---------------------------------------------------------------------------
// Table

std::vector<MeasureColumn> standard_columns() {
  return {
      {"w", MeasureId::w, {}},       {"W", MeasureId::W, {}},   {"W5", MeasureId::W_sg, {1, 1, 2}},
      {"m", MeasureId::m, {}},       {"alpha1", MeasureId::alpha1, {}},
      {"hc", MeasureId::hc, {}},     {"ht", MeasureId::ht, {}}, {"A", MeasureId::A, {}},
      {"mu", MeasureId::mu, {}},
  };
}

std::vector<Axiom> all_axioms() {
  return {Axiom::computability, Axiom::units,         Axiom::locality,
          Axiom::constancy,     Axiom::end_of_career, Axiom::packaging_independence};
}

AxiomTable axiom_table(const std::vector<MeasureColumn>& columns, const AxiomTableOptions& options) {
  AxiomTable table;
  table.axioms = all_axioms();
  table.columns = columns;
  table.options = options;
  for (Axiom axiom : table.axioms) {
    for (const auto& col : columns) {
      switch (axiom) {
        case Axiom::computability:
          table.cells.push_back(check_computability(col.id, col.params));
          break;
        case Axiom::units:
          table.cells.push_back(check_units(col.id, col.params));
          break;
        case Axiom::locality:
          table.cells.push_back(check_locality(col.id, col.params));
          break;
        case Axiom::constancy: {
          const bool h_weighted = col.id == MeasureId::hc || col.id == MeasureId::ht;
          table.cells.push_back(check_constancy(
              col.id, h_weighted ? options.constancy_h_params : col.params, options.constancy));
          break;
        }
        case Axiom::end_of_career:
          table.cells.push_back(check_end_of_career(col.id, col.params, options.retirement));
          break;
        case Axiom::packaging_independence:
          table.cells.push_back(check_packaging(col.id, col.params, options.packaging));
          break;
      }
    }
  }
  return table;
}

std::string format_table(const AxiomTable& table) {
  std::size_t first = std::string_view("Axiom \\ Measure").size();
  for (Axiom a : table.axioms) first = std::max(first, to_string(a).size());
  std::size_t width = 4;
  for (const auto& c : table.columns) width = std::max(width, c.label.size());
  std::ostringstream os;
  auto pad = [&](std::string_view s, std::size_t w) {
    os << s << std::string(w > s.size() ? w - s.size() : 0, ' ');
  };
  pad("Axiom \\ Measure", first);
  for (const auto& c : table.columns) {
    os << "  ";
    pad(c.label, width);
  }
  os << '\n';
  for (std::size_t r = 0; r < table.axioms.size(); ++r) {
    pad(to_string(table.axioms[r]), first);
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      os << "  ";
      const auto verdict = table.at(r, c).verdict;
      pad(verdict == Verdict::not_checkable ? "n/a" : to_string(verdict), width);
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace citeaccel
