#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "summability/sequence.hpp"
#include "summability/verdict.hpp"

namespace summability {

/// A subset of the positive integers given by a pure membership rule.
/// Structured rules carry a closed-form prefix count and density limit, which
/// double as oracles for the checkpoint estimator.
struct IndexSet {
  std::string desc;
  std::function<bool(std::uint64_t)> member;                      // k >= 1
  std::function<std::function<bool()>()> stream;                  // emits member(1), member(2), ...
  std::function<std::uint64_t(std::uint64_t)> count_leq;          // closed form, may be null
  std::optional<Rational> density_limit;                          // closed form, may be absent

  std::function<bool()> member_stream() const {
    if (stream) return stream();
    auto rule = member;
    return [rule, k = std::uint64_t{0}]() mutable { return rule(++k); };
  }
};

inline IndexSet set_cubes() {
  IndexSet s;
  s.desc = "cubes";
  s.member = [](std::uint64_t k) {
    const std::uint64_t r = icbrt(k);
    return r * r * r == k;
  };
  s.count_leq = [](std::uint64_t n) { return icbrt(n); };
  s.density_limit = Rational(0);
  return s;
}

inline IndexSet set_squares() {
  IndexSet s;
  s.desc = "squares";
  s.member = [](std::uint64_t k) {
    const std::uint64_t j = isqrt(k);
    return j * j == k;
  };
  s.count_leq = [](std::uint64_t n) { return isqrt(n); };
  s.density_limit = Rational(0);
  return s;
}

inline IndexSet set_evens() {
  IndexSet s;
  s.desc = "evens";
  s.member = [](std::uint64_t k) { return k % 2 == 0; };
  s.count_leq = [](std::uint64_t n) { return n / 2; };
  s.density_limit = Rational(1, 2);
  return s;
}

inline IndexSet set_odds() {
  IndexSet s;
  s.desc = "odds";
  s.member = [](std::uint64_t k) { return k % 2 == 1; };
  s.count_leq = [](std::uint64_t n) { return (n + 1) / 2; };
  s.density_limit = Rational(1, 2);
  return s;
}

// {a, a+step, a+2*step, ...}
inline IndexSet set_arithmetic_progression(std::uint64_t a, std::uint64_t step) {
  if (a < 1 || step < 1) throw PreconditionError("arithmetic progression needs a >= 1, step >= 1");
  IndexSet s;
  s.desc = "ap:a=" + std::to_string(a) + ",step=" + std::to_string(step);
  s.member = [a, step](std::uint64_t k) { return k >= a && (k - a) % step == 0; };
  s.count_leq = [a, step](std::uint64_t n) { return n < a ? 0 : (n - a) / step + 1; };
  s.density_limit = Rational(1, step);
  return s;
}

inline IndexSet set_explicit(std::vector<std::uint64_t> items) {
  std::sort(items.begin(), items.end());
  items.erase(std::unique(items.begin(), items.end()), items.end());
  auto data = std::make_shared<std::vector<std::uint64_t>>(std::move(items));
  IndexSet s;
  s.desc = "list[" + std::to_string(data->size()) + "]";
  s.member = [data](std::uint64_t k) {
    return std::binary_search(data->begin(), data->end(), k);
  };
  s.count_leq = [data](std::uint64_t n) {
    return static_cast<std::uint64_t>(std::upper_bound(data->begin(), data->end(), n) -
                                      data->begin());
  };
  s.density_limit = Rational(0);
  return s;
}

// {k : ||x_k - L|| >= eps}; the comparison never needs a root, so it is exact
// in exact mode for both norms.
template <typename T>
IndexSet set_exceed(const Sequence<T>& seq, Point<T> L, const Rational& eps, Norm norm) {
  if (!(eps > 0)) throw PreconditionError("exceed set needs eps > 0");
  const T e = scalar_traits<T>::from_rational(eps);
  IndexSet s;
  s.desc = "exceed:seq=(" + seq.desc() + "),L=" + format_point(L) + ",eps=" + format_rational(eps);
  s.member = [seq, L, e, norm](std::uint64_t k) { return norm_ge(seq.at(k) - L, norm, e); };
  s.stream = [seq, L, e, norm] {
    return [cur = seq.stream(), L, e, norm]() mutable { return norm_ge(cur() - L, norm, e); };
  };
  return s;
}

// Scalar indicator of a set: `on` at members, `off` elsewhere.
template <typename T>
Sequence<T> indicator_sequence(const IndexSet& set, T on, T off) {
  auto at = [set, on, off](std::uint64_t k) {
    return Point<T>::scalar(set.member(k) ? on : off);
  };
  auto stream = [set, on, off] {
    return [cur = set.member_stream(), on, off]() mutable {
      return Point<T>::scalar(cur() ? on : off);
    };
  };
  return Sequence<T>(1, "indicator(" + set.desc + ")", at, stream);
}

// card{k <= n : k in A} / n, exact.
inline Rational prefix_density(const IndexSet& set, std::uint64_t n) {
  if (n < 1) throw PreconditionError("prefix density needs n >= 1");
  std::uint64_t count = 0;
  if (set.count_leq) {
    count = set.count_leq(n);
  } else {
    auto cur = set.member_stream();
    for (std::uint64_t k = 1; k <= n; ++k)
      if (cur()) ++count;
  }
  return Rational(count, n);
}

struct DensityEstimate {
  std::vector<std::pair<std::uint64_t, Rational>> table;  // (n, d_n)
  Verdict<Rational> verdict;
};

namespace detail {

// Shared classification of a density table so the multi-eps statistical scan
// can reuse it without re-streaming.
inline Verdict<Rational> classify_density_table(
    std::vector<std::pair<std::uint64_t, Rational>> table, const CheckpointPolicy& policy,
    const std::optional<Rational>& closed_form) {
  const std::size_t n = table.size();
  const Rational band = policy.band;
  if (closed_form) {
    const Rational& c = *closed_form;
    bool ok = n >= 3;
    for (std::size_t i = n - 3; ok && i < n; ++i) ok = abs(table[i].second - c) <= band;
    Verdict<Rational> v;
    v.evidence = std::move(table);
    if (ok) {
      v.outcome = Outcome::ConvergesTo;
      v.limit = Point<Rational>::scalar(c);
    } else {
      v.note = "prefix table does not stabilize at the closed-form density";
    }
    return v;
  }

  // density-zero rule: tiny final value, still shrinking
  if (n >= 3 && table[n - 1].second < Rational(1, 100) &&
      table[n - 3].second >= table[n - 2].second && table[n - 2].second >= table[n - 1].second) {
    Verdict<Rational> v;
    v.evidence = std::move(table);
    v.outcome = Outcome::ConvergesTo;
    v.limit = Point<Rational>::scalar(Rational(0));
    return v;
  }
  return classify_scalar_limit(std::move(table), policy);
}

}  // namespace detail

// Estimates d(A) across the policy checkpoints. Structured rules are checked
// against their closed form; a verdict never claims a limit the prefix table
// contradicts.
inline DensityEstimate density_verdict(const IndexSet& set, const CheckpointPolicy& policy) {
  const auto cps = policy.checkpoints();
  DensityEstimate est;
  est.table.reserve(cps.size());
  if (set.count_leq) {
    for (auto n : cps) est.table.emplace_back(n, Rational(set.count_leq(n), n));
  } else {
    auto cur = set.member_stream();
    std::uint64_t count = 0;
    std::size_t next = 0;
    for (std::uint64_t k = 1; k <= cps.back(); ++k) {
      if (cur()) ++count;
      if (k == cps[next]) {
        est.table.emplace_back(k, Rational(count, k));
        ++next;
      }
    }
  }
  est.verdict = detail::classify_density_table(est.table, policy, set.density_limit);
  return est;
}

}  // namespace summability
