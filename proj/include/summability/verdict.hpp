#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "summability/point.hpp"
#include "summability/policy.hpp"

namespace summability {

enum class Outcome { ConvergesTo, Diverges, Inconclusive };

inline std::string outcome_name(Outcome o) {
  switch (o) {
    case Outcome::ConvergesTo: return "ConvergesTo";
    case Outcome::Diverges: return "Diverges";
    default: return "Inconclusive";
  }
}

/// The output of every limit-detection operation: an outcome plus the
/// checkpoint evidence it was decided on. A ConvergesTo is a truncation-scale
/// certificate, not a proof; Diverges is only issued on monotone growth past
/// the divergence threshold.
template <typename T>
struct Verdict {
  Outcome outcome = Outcome::Inconclusive;
  std::optional<Point<T>> limit;                        // set iff ConvergesTo
  std::optional<Point<T>> reference;                    // the L residuals were measured against
  std::vector<std::pair<std::uint64_t, T>> evidence;    // (n, monitored value)
  std::string note;
  std::optional<Rational> cluster_mass;                 // densest-cluster mass, statistical ops

  bool converges() const { return outcome == Outcome::ConvergesTo; }
  bool diverges() const { return outcome == Outcome::Diverges; }

  const T& final_value() const { return evidence.back().second; }
};

namespace detail {

template <typename T>
bool strictly_increasing_tail(const std::vector<std::pair<std::uint64_t, T>>& ev) {
  const std::size_t n = ev.size();
  return n >= 3 && ev[n - 3].second < ev[n - 2].second && ev[n - 2].second < ev[n - 1].second;
}

template <typename T>
bool nonincreasing_tail(const std::vector<std::pair<std::uint64_t, T>>& ev) {
  const std::size_t n = ev.size();
  return n >= 3 && ev[n - 3].second >= ev[n - 2].second && ev[n - 2].second >= ev[n - 1].second;
}

}  // namespace detail

// Classifies a residual table (values that should decay to zero when the
// sequence converges to L):
//   ConvergesTo  final < abs_tol and final/first < decay_ratio
//   Diverges     final > div_threshold and strictly increasing over the last 3
template <typename T>
Verdict<T> classify_residual(std::vector<std::pair<std::uint64_t, T>> table,
                             const CheckpointPolicy& policy, Point<T> reference) {
  Verdict<T> v;
  v.evidence = std::move(table);
  v.reference = reference;
  const T& first = v.evidence.front().second;
  const T& final = v.evidence.back().second;
  const T abs_tol = scalar_traits<T>::from_rational(policy.abs_tol);
  const T div_threshold = scalar_traits<T>::from_rational(policy.div_threshold);
  const T decay = scalar_traits<T>::from_rational(policy.decay_ratio);

  const bool ratio_ok = (final == T{}) || (first != T{} && final < decay * first);
  if (final < abs_tol && ratio_ok) {
    v.outcome = Outcome::ConvergesTo;
    v.limit = std::move(reference);
  } else if (final > div_threshold && detail::strictly_increasing_tail(v.evidence)) {
    v.outcome = Outcome::Diverges;
  }
  return v;
}

// Classifies a scalar table with an unknown limit (densities, H bounds,
// partial sums, Cesàro means): a plateau of the last 3 checkpoints within
// `band` of the final value converges to it; monotone growth past
// div_threshold diverges (+inf direction only).
template <typename T>
Verdict<T> classify_scalar_limit(std::vector<std::pair<std::uint64_t, T>> table,
                                 const CheckpointPolicy& policy) {
  Verdict<T> v;
  v.evidence = std::move(table);
  const std::size_t n = v.evidence.size();
  const T band = scalar_traits<T>::from_rational(policy.band);
  const T div_threshold = scalar_traits<T>::from_rational(policy.div_threshold);
  const T& c = v.evidence[n - 1].second;

  const auto within = [&](const T& x) { return scalar_traits<T>::abs(x - c) <= band; };
  if (n >= 3 && within(v.evidence[n - 2].second) && within(v.evidence[n - 3].second)) {
    v.outcome = Outcome::ConvergesTo;
    v.limit = Point<T>::scalar(c);
  } else if (c > div_threshold && detail::strictly_increasing_tail(v.evidence)) {
    v.outcome = Outcome::Diverges;
  }
  return v;
}

}  // namespace summability
