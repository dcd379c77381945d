// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstdint>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "citeaccel/core.hpp"

namespace citeaccel {

// ---------------------------------------------------------------------------
// Series kernels. These operate on any Eigen column vector of cumulative
// values indexed by career year, so integer series give exact integer results.

// N(t) - 2 N(t - delta) + N(t - 2 delta), without the delta^2 normalization.
template <typename Derived>
typename Derived::Scalar second_difference(const Eigen::MatrixBase<Derived>& n, Eigen::Index t,
                                           Eigen::Index delta = 1) {
  if (delta < 1) throw DomainError("second difference needs delta >= 1");
  if (t < 2 * delta || t >= n.size())
    throw DomainError("second difference at t=" + std::to_string(t) + " needs t >= 2*delta");
  return n(t) - 2 * n(t - delta) + n(t - 2 * delta);
}

// Exact weights of the least-squares quadratic second-derivative filter over
// 2k+1 unit-spaced points, ordered for offsets i = -k..k.
std::vector<Rational> sg_second_derivative_weights(int k);

template <typename Scalar = double>
Vector<Scalar> sg_weights(int k) {
  const auto exact = sg_second_derivative_weights(k);
  Vector<Scalar> out(static_cast<Eigen::Index>(exact.size()));
  for (std::size_t i = 0; i < exact.size(); ++i)
    out(static_cast<Eigen::Index>(i)) = exact[i].template as<Scalar>();
  return out;
}

// The same weights as integer numerators over one common denominator.
struct IntegerWeights {
  Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1> numerators;
  std::int64_t denominator = 1;
};
IntegerWeights sg_integer_weights(int k);

// Filter applied to the trailing window n(t-2k)..n(t). The fitted second
// derivative is constant across the window, so the value is assigned to t.
// Accumulating integer numerators first keeps results on integer data exact
// before the single final division.
template <typename Derived>
double sg_second_derivative(const Eigen::MatrixBase<Derived>& n, Eigen::Index t, int k) {
  if (k < 2) throw DomainError("Savitzky-Golay filter needs k >= 2");
  const Eigen::Index width = 2 * k + 1;
  if (t < 2 * k || t >= n.size())
    throw DomainError("W_sg at t=" + std::to_string(t) + " needs t >= 2k");
  const auto w = sg_integer_weights(k);
  // numerators(j) is offset j - k; N(t - i) takes offset k - i, i.e. numerators(2k - i),
  // so the window in time order pairs directly with the weights.
  const double sum = w.numerators.template cast<double>().dot(
      n.segment(t - width + 1, width).template cast<double>());
  return sum / static_cast<double>(w.denominator);
}

// Greatest h such that at least h entries are >= h.
template <typename Scalar>
int h_of(std::span<const Scalar> values) {
  std::vector<Scalar> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  int h = 0;
  while (h < static_cast<int>(sorted.size()) && sorted[static_cast<std::size_t>(h)] >= Scalar(h + 1))
    ++h;
  return h;
}

// ---------------------------------------------------------------------------
// Evaluation against one record

// Caches the derived series of one record and evaluates any registered
// measure at career year t. Cheap to copy around by const reference; holds no
// mutable state.
class MeasureEvaluator {
 public:
  explicit MeasureEvaluator(const AuthorRecord& record);

  const CumulativeSeries& citations() const { return n_; }
  bool per_paper() const { return history_.has_value(); }
  int horizon() const { return n_.last_t(); }
  const AuthorRecord& record() const { return record_; }

  // Value at t, or nullopt where the measure is undefined. Throws
  // GranularityError / ParameterError for unusable requests.
  std::optional<double> try_value(MeasureId id, const MeasureParams& params, int t) const;

  // As try_value but throws DomainError where undefined.
  double value(MeasureId id, const MeasureParams& params, int t) const;

  // Per-paper building blocks at career year t.
  std::vector<double> paper_citations(int t) const;
  int h_index(int t) const;
  double awcr(int t) const;
  int contemporary_h(int t, double gamma, double delta) const;
  int trend_h(int t, double gamma, double delta) const;

 private:
  const CitationHistory& history() const;
  void require_t(int t) const;

  AuthorRecord record_;
  CumulativeSeries n_;
  std::optional<CitationHistory> history_;
};

// Record-level operations. Each builds a MeasureEvaluator; use one directly
// when evaluating many (measure, t) pairs.
int h_index(const AuthorRecord& record, int t);
double w_measure(const AuthorRecord& record, int t);
double W_measure(const AuthorRecord& record, int t);
double W_delta(const AuthorRecord& record, int t, int delta);
double W_sg(const AuthorRecord& record, int t, int k);
double m_index(const AuthorRecord& record, int t);
double alpha1(const AuthorRecord& record, int t);
double alpha2(const AuthorRecord& record, int t);
double mu_measure(const AuthorRecord& record, int t);
double awcr(const AuthorRecord& record, int t);
int contemporary_h(const AuthorRecord& record, int t, double gamma = 1.0, double delta = 1.0);
int trend_h(const AuthorRecord& record, int t, double gamma = 1.0, double delta = 1.0);

struct MeasureSeries {
  MeasureId id{};
  MeasureParams params;
  std::map<int, double> values;  // t -> value; undefined years absent

  bool operator==(const MeasureSeries&) const = default;
};

// Measure over t in [t_from, t_to] intersected with the observed range.
MeasureSeries measure_series(const MeasureEvaluator& eval, MeasureId id,
                             const MeasureParams& params, int t_from, int t_to);
MeasureSeries measure_series(const AuthorRecord& record, MeasureId id,
                             const MeasureParams& params, int t_from, int t_to);

// Throws GranularityError if `record` lacks the data `id` needs.
void require_granularity(const AuthorRecord& record, MeasureId id);

}  // namespace citeaccel
