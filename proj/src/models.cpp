// SPDX-License-Identifier: Apache-2.0
#include "citeaccel/models.hpp"

#include <cmath>

#include "citeaccel/measures.hpp"

namespace citeaccel {

std::string_view to_string(SamplingMode mode) {
  return mode == SamplingMode::continuous_exact ? "continuous-exact" : "discrete-event";
}

std::optional<SamplingMode> parse_sampling_mode(std::string_view name) {
  if (name == "continuous-exact") return SamplingMode::continuous_exact;
  if (name == "discrete-event") return SamplingMode::discrete_event;
  return std::nullopt;
}

void validate(const ModelParams& params) {
  if (!(params.p > 0) || !std::isfinite(params.p)) throw ParameterError("p must be positive");
  if (!(params.c > 0) || !std::isfinite(params.c)) throw ParameterError("c must be positive");
  if (params.horizon < 2) throw ParameterError("horizon must be >= 2");
  if (params.retirement) {
    if (*params.retirement < 1) throw ParameterError("T must be a positive integer");
    if (*params.retirement >= params.horizon) throw ParameterError("T must be below the horizon");
  }
  if (params.mode == SamplingMode::discrete_event &&
      (params.p != std::floor(params.p) || params.c != std::floor(params.c)))
    throw ParameterError("discrete-event mode needs integer p and c");
}

double model_citations(const ModelParams& params, double t) {
  if (t <= 0) return 0.0;
  const double pc = params.p * params.c;
  if (params.retirement && t > *params.retirement) {
    const double T = *params.retirement;
    return pc * T * (t - T / 2.0);
  }
  return pc * t * t / 2.0;
}

double model_h(const ModelParams& params, double t) {
  if (t <= 0) return 0.0;
  const double p = params.p, c = params.c;
  if (params.retirement) {
    const double T = *params.retirement;
    if (t >= T * (1.0 + p / c)) return p * T;
  }
  return p * c * t / (p + c);
}

namespace {

AuthorRecord base_record(const ModelParams& params, const SimulationLabels& labels) {
  AuthorRecord record;
  record.author_id = labels.author_id;
  record.synthetic = true;
  record.career_start_year = labels.base_year;
  record.observed_to = labels.base_year + params.horizon;
  return record;
}

AuthorRecord simulate_model(const ModelParams& params, const SimulationLabels& labels) {
  validate(params);
  AuthorRecord record = base_record(params, labels);
  const int horizon = params.horizon;
  if (params.mode == SamplingMode::continuous_exact) {
    record.granularity = Granularity::aggregate;
    double previous = 0.0;
    for (int t = 0; t <= horizon; ++t) {
      const double n = model_citations(params, t);
      record.yearly_citations[labels.base_year + t] = n - previous;
      previous = n;
    }
    return record;
  }
  record.granularity = Granularity::per_paper;
  const int per_year = static_cast<int>(params.p);
  const auto rate = static_cast<std::int64_t>(params.c);
  const int last_pub = params.retirement.value_or(horizon);
  for (int u = 1; u <= last_pub; ++u) {
    for (int j = 0; j < per_year; ++j) {
      PaperRecord paper;
      paper.paper_id = "y" + std::to_string(u) + "-" + std::to_string(j + 1);
      paper.pub_year = labels.base_year + u;
      for (int v = u + 1; v <= horizon; ++v) paper.citations_by_year[labels.base_year + v] = rate;
      record.papers.push_back(std::move(paper));
    }
  }
  return record;
}

}  // namespace

AuthorRecord simulate_simple(const ModelParams& params, const SimulationLabels& labels) {
  if (params.retirement) throw ParameterError("simple model takes no retirement year");
  return simulate_model(params, labels);
}

AuthorRecord simulate_retirement(const ModelParams& params, const SimulationLabels& labels) {
  if (!params.retirement) throw ParameterError("retirement model needs T");
  return simulate_model(params, labels);
}

AuthorRecord simulate(const ModelParams& params, const SimulationLabels& labels) {
  return simulate_model(params, labels);
}

bool analytic_supported(MeasureId id) { return id != MeasureId::hc && id != MeasureId::ht; }

std::optional<double> analytic_value(MeasureId id, const ModelParams& params, double t,
                                     const MeasureParams& measure_params) {
  if (!analytic_supported(id)) return std::nullopt;
  const double n = model_citations(params, t);
  const double h = model_h(params, t);
  const double pc = params.p * params.c;
  auto stencil = [&](int delta) -> std::optional<double> {
    if (t < 2.0 * delta) return std::nullopt;
    return (n - 2.0 * model_citations(params, t - delta) + model_citations(params, t - 2.0 * delta)) /
           (static_cast<double>(delta) * delta);
  };
  switch (id) {
    case MeasureId::N:
      return n;
    case MeasureId::P:
      return params.p * (params.retirement ? std::min<double>(t, *params.retirement) : t);
    case MeasureId::w:
      if (t <= 0) return std::nullopt;
      return 2.0 * n / (t * t);
    case MeasureId::mu:
      if (t <= 0) return std::nullopt;
      return n / t;
    case MeasureId::W:
      return stencil(1);
    case MeasureId::W_delta:
      if (measure_params.delta < 1 || measure_params.delta != std::floor(measure_params.delta))
        return std::nullopt;
      return stencil(static_cast<int>(measure_params.delta));
    case MeasureId::W_sg: {
      const int k = measure_params.k;
      if (k < 2 || t < 2.0 * k || t != std::floor(t)) return std::nullopt;
      Vector<double> window(2 * k + 1);
      for (int j = 0; j <= 2 * k; ++j) window(j) = model_citations(params, t - 2 * k + j);
      return sg_weights<double>(k).dot(window);
    }
    case MeasureId::h:
      return h;
    case MeasureId::m:
      if (t <= 0) return std::nullopt;
      return h / t;
    case MeasureId::alpha1:
      if (n <= 0) return std::nullopt;
      return h / std::sqrt(n);
    case MeasureId::alpha2:
      if (t <= 0) return std::nullopt;
      return h / std::sqrt(t);
    case MeasureId::A:
      // each paper contributes its citation rate c once it exists
      return pc * (params.retirement ? std::min<double>(t, *params.retirement) : t);
    default:
      return std::nullopt;
  }
}

double beta_coefficient(const ModelParams& params) {
  return std::sqrt(2.0 * params.p * params.c) / (params.p + params.c);
}

}  // namespace citeaccel
