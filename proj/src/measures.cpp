// SPDX-License-Identifier: Apache-2.0
#include "citeaccel/measures.hpp"

#include <numeric>
#include <string>

namespace citeaccel {

std::vector<Rational> sg_second_derivative_weights(int k) {
  if (k < 2) throw DomainError("Savitzky-Golay weights need k >= 2, got " + std::to_string(k));
  const std::int64_t width = 2 * k + 1;
  Rational sum_sq = 0;
  for (std::int64_t i = -k; i <= k; ++i) sum_sq += i * i;
  const Rational mean_sq = sum_sq / width;
  Rational spread = 0;
  for (std::int64_t i = -k; i <= k; ++i) {
    const Rational d = Rational(i * i) - mean_sq;
    spread += d * d;
  }
  std::vector<Rational> weights;
  weights.reserve(static_cast<std::size_t>(width));
  for (std::int64_t i = -k; i <= k; ++i) weights.push_back(Rational(2) * (Rational(i * i) - mean_sq) / spread);
  return weights;
}

IntegerWeights sg_integer_weights(int k) {
  const auto exact = sg_second_derivative_weights(k);
  IntegerWeights out;
  for (const auto& w : exact) out.denominator = std::lcm(out.denominator, w.den());
  out.numerators.resize(static_cast<Eigen::Index>(exact.size()));
  for (std::size_t i = 0; i < exact.size(); ++i)
    out.numerators(static_cast<Eigen::Index>(i)) = exact[i].num() * (out.denominator / exact[i].den());
  return out;
}

// ---------------------------------------------------------------------------

void require_granularity(const AuthorRecord& record, MeasureId id) {
  if (descriptor(id).granularity_needed == Granularity::per_paper &&
      record.granularity != Granularity::per_paper)
    throw GranularityError("measure " + std::string(to_string(id)) +
                           " needs per-paper data; record '" + record.author_id +
                           "' is aggregate");
}

MeasureEvaluator::MeasureEvaluator(const AuthorRecord& record)
    : record_(record), n_(cumulative_citations<double>(record)) {
  require_valid(record);
  if (record.granularity == Granularity::per_paper) history_ = citation_history<double>(record);
}

const CitationHistory& MeasureEvaluator::history() const {
  if (!history_)
    throw GranularityError("record '" + record_.author_id + "' has no per-paper data");
  return *history_;
}

void MeasureEvaluator::require_t(int t) const {
  if (t < 0 || t > horizon())
    throw DomainError("career year " + std::to_string(t) + " outside observed range 0.." +
                      std::to_string(horizon()));
}

std::vector<double> MeasureEvaluator::paper_citations(int t) const {
  require_t(t);
  const auto& h = history();
  const int year = h.career_start + t;
  const Eigen::Index col = h.column(t);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(h.papers()));
  for (Eigen::Index i = 0; i < h.papers(); ++i)
    if (h.pub_year(i) <= year) out.push_back(h.yearly.row(i).head(col + 1).sum());
  return out;
}

int MeasureEvaluator::h_index(int t) const {
  const auto c = paper_citations(t);
  return h_of<double>(c);
}

double MeasureEvaluator::awcr(int t) const {
  require_t(t);
  const auto& h = history();
  const int year = h.career_start + t;
  const Eigen::Index col = h.column(t);
  // Citations are pooled per publication year before dividing, so merging
  // same-year papers leaves the value bit-identical.
  std::map<int, double> by_pub_year;
  for (Eigen::Index i = 0; i < h.papers(); ++i)
    if (h.pub_year(i) <= year) by_pub_year[h.pub_year(i)] += h.yearly.row(i).head(col + 1).sum();
  double total = 0;
  for (const auto& [pub, citations] : by_pub_year)
    total += citations / static_cast<double>(std::max(1, year - pub + 1));
  return total;
}

int MeasureEvaluator::contemporary_h(int t, double gamma, double delta) const {
  MeasureParams p{gamma, delta, 2};
  validate_params(MeasureId::hc, p);
  require_t(t);
  const auto& h = history();
  const int year = h.career_start + t;
  const Eigen::Index col = h.column(t);
  std::vector<double> weights;
  for (Eigen::Index i = 0; i < h.papers(); ++i) {
    if (h.pub_year(i) > year) continue;
    const double age = std::max(1, year - h.pub_year(i) + 1);
    weights.push_back(gamma * h.yearly.row(i).head(col + 1).sum() / std::pow(age, delta));
  }
  return h_of<double>(weights);
}

int MeasureEvaluator::trend_h(int t, double gamma, double delta) const {
  MeasureParams p{gamma, delta, 2};
  validate_params(MeasureId::ht, p);
  require_t(t);
  const auto& h = history();
  const int year = h.career_start + t;
  const Eigen::Index col = h.column(t);
  std::vector<double> weights;
  for (Eigen::Index i = 0; i < h.papers(); ++i) {
    if (h.pub_year(i) > year) continue;
    double weight = 0;
    for (Eigen::Index j = 0; j <= col; ++j) {
      const double count = h.yearly(i, j);
      if (count == 0) continue;
      const int cite_year = h.first_year + static_cast<int>(j);
      weight += gamma * count / std::pow(std::max(1, year - cite_year + 1), delta);
    }
    weights.push_back(weight);
  }
  return h_of<double>(weights);
}

std::optional<double> MeasureEvaluator::try_value(MeasureId id, const MeasureParams& params,
                                                  int t) const {
  require_granularity(record_, id);
  validate_params(id, params);
  if (t < 0 || t > horizon()) return std::nullopt;
  const double n_t = n_[t];
  switch (id) {
    case MeasureId::N:
      return n_t;
    case MeasureId::P: {
      const auto& h = history();
      const int year = h.career_start + t;
      return static_cast<double>((h.pub_year.array() <= year).count());
    }
    case MeasureId::w:
      if (t < 1) return std::nullopt;
      return 2.0 * n_t / (static_cast<double>(t) * t);
    case MeasureId::mu:
      if (t < 1) return std::nullopt;
      return n_t / t;
    case MeasureId::W:
      if (t < 2) return std::nullopt;
      return second_difference(n_.values, t, 1);
    case MeasureId::W_delta: {
      const auto delta = static_cast<Eigen::Index>(params.delta);
      if (t < 2 * delta) return std::nullopt;
      return second_difference(n_.values, t, delta) / static_cast<double>(delta * delta);
    }
    case MeasureId::W_sg:
      if (t < 2 * params.k) return std::nullopt;
      return sg_second_derivative(n_.values, t, params.k);
    case MeasureId::h:
      return h_index(t);
    case MeasureId::m:
      if (t < 1) return std::nullopt;
      return static_cast<double>(h_index(t)) / t;
    case MeasureId::alpha1:
      if (n_t <= 0) return std::nullopt;
      return h_index(t) / std::sqrt(n_t);
    case MeasureId::alpha2:
      if (t < 1) return std::nullopt;
      return h_index(t) / std::sqrt(static_cast<double>(t));
    case MeasureId::A:
      return awcr(t);
    case MeasureId::hc:
      return contemporary_h(t, params.gamma, params.delta);
    case MeasureId::ht:
      return trend_h(t, params.gamma, params.delta);
  }
  return std::nullopt;
}

double MeasureEvaluator::value(MeasureId id, const MeasureParams& params, int t) const {
  if (auto v = try_value(id, params, t)) return *v;
  throw DomainError("measure " + std::string(to_string(id)) + " undefined at t=" +
                    std::to_string(t) + " for record '" + record_.author_id + "'");
}

// ---------------------------------------------------------------------------

namespace {

double eval(const AuthorRecord& record, MeasureId id, int t, MeasureParams params = {}) {
  require_granularity(record, id);
  return MeasureEvaluator(record).value(id, params, t);
}

}  // namespace

int h_index(const AuthorRecord& record, int t) {
  require_granularity(record, MeasureId::h);
  return MeasureEvaluator(record).h_index(t);
}

double w_measure(const AuthorRecord& record, int t) { return eval(record, MeasureId::w, t); }
double W_measure(const AuthorRecord& record, int t) { return eval(record, MeasureId::W, t); }

double W_delta(const AuthorRecord& record, int t, int delta) {
  return eval(record, MeasureId::W_delta, t, {1.0, static_cast<double>(delta), 2});
}

double W_sg(const AuthorRecord& record, int t, int k) {
  if (k < 2) throw DomainError("W_sg needs k >= 2, got " + std::to_string(k));
  return eval(record, MeasureId::W_sg, t, {1.0, 1.0, k});
}

double m_index(const AuthorRecord& record, int t) { return eval(record, MeasureId::m, t); }
double alpha1(const AuthorRecord& record, int t) { return eval(record, MeasureId::alpha1, t); }
double alpha2(const AuthorRecord& record, int t) { return eval(record, MeasureId::alpha2, t); }
double mu_measure(const AuthorRecord& record, int t) { return eval(record, MeasureId::mu, t); }

double awcr(const AuthorRecord& record, int t) {
  require_granularity(record, MeasureId::A);
  return MeasureEvaluator(record).awcr(t);
}

int contemporary_h(const AuthorRecord& record, int t, double gamma, double delta) {
  require_granularity(record, MeasureId::hc);
  return MeasureEvaluator(record).contemporary_h(t, gamma, delta);
}

int trend_h(const AuthorRecord& record, int t, double gamma, double delta) {
  require_granularity(record, MeasureId::ht);
  return MeasureEvaluator(record).trend_h(t, gamma, delta);
}

MeasureSeries measure_series(const MeasureEvaluator& eval, MeasureId id,
                             const MeasureParams& params, int t_from, int t_to) {
  require_granularity(eval.record(), id);
  validate_params(id, params);
  MeasureSeries out{id, params, {}};
  for (int t = std::max(0, t_from); t <= std::min(t_to, eval.horizon()); ++t)
    if (auto v = eval.try_value(id, params, t)) out.values.emplace(t, *v);
  return out;
}

MeasureSeries measure_series(const AuthorRecord& record, MeasureId id,
                             const MeasureParams& params, int t_from, int t_to) {
  require_granularity(record, id);
  validate_params(id, params);
  if (t_from > t_to) return {id, params, {}};
  return measure_series(MeasureEvaluator(record), id, params, t_from, t_to);
}

}  // namespace citeaccel
