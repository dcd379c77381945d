// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>

#include "citeaccel/core.hpp"

namespace citeaccel {

enum class SamplingMode { continuous_exact, discrete_event };

std::string_view to_string(SamplingMode mode);
std::optional<SamplingMode> parse_sampling_mode(std::string_view name);

// Constant-rate career model: p papers per year, c citations per paper per
// year. With `retirement` set, publication stops after that career year.
struct ModelParams {
  double p = 1.0;
  double c = 1.0;
  std::optional<int> retirement;
  int horizon = 20;
  SamplingMode mode = SamplingMode::continuous_exact;

  bool operator==(const ModelParams&) const = default;
};

void validate(const ModelParams& params);

struct SimulationLabels {
  std::string author_id = "model";
  int base_year = 2000;  // calendar year of career year 0
};

// continuous-exact: aggregate record sampling N(t) = p c t^2 / 2 at integer t.
// discrete-event: p papers at each year u >= 1, each earning c citations in
// every later year, so N(t) = p c t (t - 1) / 2.
AuthorRecord simulate_simple(const ModelParams& params, const SimulationLabels& labels = {});

// As simulate_simple, with publication stopping after year T. In continuous
// mode N(t) = p c T (t - T/2) for t > T.
AuthorRecord simulate_retirement(const ModelParams& params, const SimulationLabels& labels = {});

// Dispatches on params.retirement.
AuthorRecord simulate(const ModelParams& params, const SimulationLabels& labels = {});

// Closed-form cumulative citations and (real-valued) h-index of the
// continuous model.
double model_citations(const ModelParams& params, double t);
double model_h(const ModelParams& params, double t);

bool analytic_supported(MeasureId id);

// Model-theoretic value of a measure at t. Finite-difference measures are the
// stencil applied to the closed-form N at integer t. nullopt for measures
// without a closed form (hc, ht) and where the measure is undefined.
std::optional<double> analytic_value(MeasureId id, const ModelParams& params, double t,
                                     const MeasureParams& measure_params = {});

// beta = sqrt(2pc)/(p+c), so that h = beta sqrt(N) in the simple model.
// Published empirical fits sit near 0.53-0.54; beta <= sqrt(2)/2 always.
double beta_coefficient(const ModelParams& params);

}  // namespace citeaccel
