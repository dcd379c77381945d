// SPDX-License-Identifier: Apache-2.0
#include "citeaccel/cli.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "citeaccel/analysis.hpp"
#include "citeaccel/axioms.hpp"
#include "citeaccel/io.hpp"
#include "citeaccel/measures.hpp"
#include "citeaccel/models.hpp"

namespace citeaccel {

namespace {

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

// "W5", "W7", ... select the Savitzky-Golay estimator of half-width k.
MeasureChoice parse_measure(const std::string& name, const MeasureParams& base) {
  MeasureChoice choice{MeasureId::W, base};
  if (name.size() > 1 && name[0] == 'W' && std::isdigit(static_cast<unsigned char>(name[1]))) {
    int width = 0;
    const auto* end = name.data() + name.size();
    const auto [ptr, ec] = std::from_chars(name.data() + 1, end, width);
    if (ec != std::errc{} || ptr != end || width < 5 || width % 2 == 0)
      throw ParameterError("measure alias '" + name + "' must be W followed by an odd width >= 5");
    choice.id = MeasureId::W_sg;
    choice.params.k = (width - 1) / 2;
  } else if (const auto id = parse_measure_id(name)) {
    choice.id = *id;
  } else {
    std::string known;
    for (const auto& d : measure_registry()) known += " " + std::string(d.name);
    throw ParameterError("unknown measure '" + name + "' (known:" + known + ", or W5, W7, ...)");
  }
  validate_params(choice.id, choice.params);
  return choice;
}

Dataset load_input(const std::string& path, std::ostream& err) {
  if (std::filesystem::path(path).extension() == ".csv") {
    auto result = ingest_csv(std::filesystem::path(path));
    for (const auto& w : result.warnings) err << "warning: " << w << '\n';
    return std::move(result.dataset);
  }
  return read_dataset(path);
}

void emit(const std::string& path, const std::string& content, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << content;
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw DataError("cannot write '" + path + "'");
  file << content;
  if (!file) throw DataError("write failed for '" + path + "'");
}

void warn_all(const std::vector<std::string>& warnings, std::ostream& err) {
  for (const auto& w : warnings) err << "warning: " << w << '\n';
}

struct Options {
  std::string input, output, cohort = "default", career = "recorded";
  bool clamp = false;

  std::string measures = "W", stats_measures = "W,W5", measure = "W";
  double gamma = 1.0, delta = 1.0;
  int k = 2;
  int from_year = 0, to_year = 1 << 20;

  double p = 1.0, c = 1.0;
  int retirement = 0, horizon = 20, base_year = 2000;
  std::string mode = "continuous-exact", author_id = "model";
  bool append = false;

  int trials = 1000;
  std::uint64_t seed = 20200201;
  std::string csv;

  std::string window, early = "3:5", late = "6:8", exclude;
  bool population_sd = false;
};

MeasureParams base_params(const Options& o) { return {o.gamma, o.delta, o.k}; }

void run_ingest(const Options& o, std::ostream& out, std::ostream& err) {
  auto result = ingest_csv(std::filesystem::path(o.input), {o.cohort, o.clamp});
  warn_all(result.warnings, err);
  emit(o.output, dataset_to_json(result.dataset), out);
}

void run_measures(const Options& o, std::ostream& out, std::ostream& err) {
  const auto dataset = load_input(o.input, err);
  const auto policy = CareerPolicy::parse(o.career);
  std::vector<MeasureChoice> choices;
  for (const auto& name : split_list(o.measures)) choices.push_back(parse_measure(name, base_params(o)));
  if (choices.empty()) throw ParameterError("--measures is empty");

  std::vector<MeasureRow> rows;
  std::vector<std::string> warnings;
  for (const auto& [label, records] : dataset.cohorts) {
    for (const auto& record : records) {
      for (const auto& choice : choices) require_granularity(record, choice.id);
      const auto normalized = normalize_career(record, policy, &warnings);
      const int start = career_start_year(normalized);
      const MeasureEvaluator eval(normalized);
      std::vector<MeasureSeries> series;
      for (const auto& choice : choices)
        series.push_back(measure_series(eval, choice.id, choice.params, o.from_year, o.to_year));
      const int last = std::min(o.to_year, eval.horizon());
      for (int t = std::max(o.from_year, 0); t <= last; ++t)
        for (const auto& s : series)
          if (const auto it = s.values.find(t); it != s.values.end())
            rows.push_back({record.author_id, t, start + t, s.id, s.params, it->second});
    }
  }
  warn_all(warnings, err);
  std::ostringstream csv;
  write_measures_csv(csv, rows, policy);
  emit(o.output, csv.str(), out);
}

void run_simulate(const Options& o, std::ostream& out) {
  ModelParams params;
  params.p = o.p;
  params.c = o.c;
  params.horizon = o.horizon;
  if (o.retirement > 0) params.retirement = o.retirement;
  const auto mode = parse_sampling_mode(o.mode);
  if (!mode) throw ParameterError("unknown --mode '" + o.mode + "' (continuous-exact or discrete-event)");
  params.mode = *mode;
  const auto record = simulate(params, {o.author_id, o.base_year});

  Dataset dataset;
  if (o.append && !o.output.empty() && std::filesystem::exists(o.output)) dataset = read_dataset(o.output);
  dataset.cohorts[o.cohort].push_back(record);
  std::ostringstream note;
  note << "simulate " << record.author_id << ": p=" << format_value(o.p) << " c=" << format_value(o.c)
       << " T=" << (params.retirement ? std::to_string(*params.retirement) : "none")
       << " horizon=" << o.horizon << " mode=" << to_string(params.mode);
  dataset.provenance.push_back(note.str());
  validate(dataset);
  emit(o.output, dataset_to_json(dataset), out);
}

void run_axioms(const Options& o, std::ostream& out) {
  AxiomTableOptions options;
  options.packaging.trials = o.trials;
  options.packaging.seed = o.seed;
  const auto table = axiom_table(standard_columns(), options);
  out << format_table(table);
  if (!o.csv.empty()) {
    std::ostringstream csv;
    write_axioms_csv(csv, table);
    emit(o.csv, csv.str(), out);
  }
}

void run_stats(const Options& o, std::ostream& out, std::ostream& err) {
  const auto dataset = load_input(o.input, err);
  const auto policy = CareerPolicy::parse(o.career);
  const auto window = Window::parse(o.window.empty() ? "5:" : o.window);
  const auto convention = o.population_sd ? SdConvention::population : SdConvention::sample;
  std::vector<MeasureChoice> choices;
  for (const auto& name : split_list(o.stats_measures))
    choices.push_back(parse_measure(name, base_params(o)));

  std::vector<StatsRow> rows;
  std::vector<std::string> warnings;
  for (const auto& [label, records] : dataset.cohorts)
    for (const auto& record : records) {
      for (const auto& choice : choices) require_granularity(record, choice.id);
      const auto normalized = normalize_career(record, policy, &warnings);
      const MeasureEvaluator eval(normalized);
      for (const auto& choice : choices) {
        const auto series = measure_series(eval, choice.id, choice.params, window.lo, window.hi);
        if (series.values.empty()) {
          warnings.push_back("author '" + record.author_id + "' has no " +
                             std::string(to_string(choice.id)) + " values in window");
          continue;
        }
        Window used{window.lo, std::min(window.hi, eval.horizon())};
        rows.push_back({record.author_id, choice.id, choice.params, used,
                        window_stats(series, window.lo, window.hi, convention)});
      }
    }
  warn_all(warnings, err);
  std::ostringstream csv;
  write_stats_csv(csv, rows, policy);
  emit(o.output, csv.str(), out);
}

void run_regress(const Options& o, std::ostream& out, std::ostream& err) {
  const auto dataset = load_input(o.input, err);
  const auto policy = CareerPolicy::parse(o.career);
  const auto measure = parse_measure(o.measure, base_params(o));
  const auto early = Window::parse(o.early);
  const auto late = Window::parse(o.late);
  const auto excluded = split_list(o.exclude);
  const std::set<std::string> exclusions(excluded.begin(), excluded.end());

  std::vector<AuthorRecord> records;
  for (const auto& [label, cohort] : dataset.cohorts) records.insert(records.end(), cohort.begin(), cohort.end());
  const auto result = predictive_study(records, measure, early, late, exclusions, policy);
  warn_all(result.warnings, err);
  std::ostringstream csv;
  write_regression_csv(csv, result, measure, policy);
  emit(o.output, csv.str(), out);
  out << "summary: " << regression_summary(result) << '\n';
}

void run_cohorts(const Options& o, std::ostream& out, std::ostream& err) {
  const auto dataset = load_input(o.input, err);
  const auto policy = CareerPolicy::parse(o.career);
  const auto measure = parse_measure(o.measure, base_params(o));
  const auto window = Window::parse(o.window.empty() ? "5:" : o.window);
  const auto result = cohort_export(dataset.cohorts, measure, window, policy);
  warn_all(result.warnings, err);
  std::ostringstream csv;
  write_cohorts_csv(csv, result.rows, measure, policy);
  emit(o.output, csv.str(), out);
}

}  // namespace

int cli_run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Citation acceleration measures, models and axioms", "citeaccel"};
  app.require_subcommand(1, 1);
  Options o;

  const auto add_career = [&](CLI::App* sub) {
    sub->add_option("--career-start", o.career, "first-pub, threshold:N or recorded")->capture_default_str();
  };
  const auto add_params = [&](CLI::App* sub) {
    sub->add_option("--gamma", o.gamma, "hc/ht gamma")->capture_default_str();
    sub->add_option("--delta", o.delta, "W_delta step, hc/ht delta")->capture_default_str();
    sub->add_option("--k", o.k, "W_sg half-width")->capture_default_str();
  };

  auto* ingest = app.add_subcommand("ingest", "Convert citation CSV rows to a dataset file");
  ingest->add_option("--input", o.input, "CSV file")->required();
  ingest->add_option("--output", o.output, "dataset JSON (stdout if omitted)");
  ingest->add_option("--cohort", o.cohort, "cohort label")->capture_default_str();
  ingest->add_flag("--clamp", o.clamp, "clamp citations dated before publication");

  auto* measures = app.add_subcommand("measures", "Per-author, per-year measure values");
  measures->add_option("--input", o.input, "dataset JSON or citation CSV")->required();
  measures->add_option("--measures", o.measures, "comma list, e.g. w,W,W5,h,A")->capture_default_str();
  add_params(measures);
  add_career(measures);
  measures->add_option("--from-year", o.from_year, "first career year");
  measures->add_option("--to-year", o.to_year, "last career year");
  measures->add_option("--output", o.output, "CSV file (stdout if omitted)");

  auto* sim = app.add_subcommand("simulate", "Generate a model author");
  sim->add_option("--p", o.p, "papers per year")->capture_default_str();
  sim->add_option("--c", o.c, "citations per paper per year")->capture_default_str();
  sim->add_option("--T", o.retirement, "retirement year (0: none)");
  sim->add_option("--horizon", o.horizon, "last career year")->capture_default_str();
  sim->add_option("--mode", o.mode, "continuous-exact or discrete-event")->capture_default_str();
  sim->add_option("--author-id", o.author_id)->capture_default_str();
  sim->add_option("--cohort", o.cohort)->capture_default_str();
  sim->add_option("--base-year", o.base_year, "calendar year of t = 0")->capture_default_str();
  sim->add_option("--output", o.output, "dataset JSON (stdout if omitted)");
  sim->add_flag("--append", o.append, "add to an existing --output dataset");

  auto* axioms = app.add_subcommand("axioms", "Evaluate every measure against every axiom");
  axioms->add_option("--trials", o.trials, "random repackagings")->capture_default_str();
  axioms->add_option("--seed", o.seed, "repackaging seed")->capture_default_str();
  axioms->add_option("--csv", o.csv, "also write machine-readable rows here");

  auto* stats = app.add_subcommand("stats", "Windowed mean and SD per author");
  stats->add_option("--input", o.input, "dataset JSON or citation CSV")->required();
  stats->add_option("--measures", o.stats_measures, "comma list")->capture_default_str();
  add_params(stats);
  stats->add_option("--window", o.window, "career years lo:hi, either side open (default 5:)");
  add_career(stats);
  stats->add_flag("--population-sd", o.population_sd, "divide by n instead of n - 1");
  stats->add_option("--output", o.output, "CSV file (stdout if omitted)");

  auto* regress = app.add_subcommand("regress", "Early-window mean predicts late-window mean");
  regress->add_option("--input", o.input, "dataset JSON or citation CSV")->required();
  regress->add_option("--measure", o.measure)->capture_default_str();
  add_params(regress);
  regress->add_option("--early", o.early)->capture_default_str();
  regress->add_option("--late", o.late)->capture_default_str();
  regress->add_option("--exclude", o.exclude, "comma list of author ids");
  add_career(regress);
  regress->add_option("--output", o.output, "CSV file (stdout if omitted)");

  auto* cohorts = app.add_subcommand("cohorts", "Windowed measure mean per author, by cohort");
  cohorts->add_option("--input", o.input, "dataset JSON or citation CSV")->required();
  cohorts->add_option("--measure", o.measure)->capture_default_str();
  add_params(cohorts);
  cohorts->add_option("--window", o.window, "career years lo:hi (default 5:)");
  add_career(cohorts);
  cohorts->add_option("--output", o.output, "CSV file (stdout if omitted)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n";
    const auto* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    err << sub->help();
    return 1;
  }

  try {
    if (ingest->parsed()) run_ingest(o, out, err);
    else if (measures->parsed()) run_measures(o, out, err);
    else if (sim->parsed()) run_simulate(o, out);
    else if (axioms->parsed()) run_axioms(o, out);
    else if (stats->parsed()) run_stats(o, out, err);
    else if (regress->parsed()) run_regress(o, out, err);
    else if (cohorts->parsed()) run_cohorts(o, out, err);
    return 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace citeaccel
