#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "summability/density.hpp"
#include "summability/verdict.hpp"

namespace summability {

template <typename T>
Point<T> divided_by(Point<T> p, const T& d) {
  for (auto& c : p.c) c /= d;
  return p;
}

// (1/n) * sum_{k<=n} x_k
template <typename T>
Point<T> cesaro_mean(const Sequence<T>& seq, std::uint64_t n) {
  if (n < 1) throw PreconditionError("cesaro_mean needs n >= 1");
  auto cur = seq.stream();
  Point<T> sum(seq.dim());
  for (std::uint64_t k = 1; k <= n; ++k) {
    Point<T> x = cur();
    if (!x.is_zero()) sum += x;
  }
  return divided_by(std::move(sum), scalar_traits<T>::from_int(static_cast<std::int64_t>(n)));
}

// Cesàro means sampled at each checkpoint, in one pass.
template <typename T>
std::vector<std::pair<std::uint64_t, Point<T>>> cesaro_mean_table(
    const Sequence<T>& seq, const std::vector<std::uint64_t>& checkpoints) {
  auto cur = seq.stream();
  Point<T> sum(seq.dim());
  std::vector<std::pair<std::uint64_t, Point<T>>> out;
  out.reserve(checkpoints.size());
  std::size_t next = 0;
  for (std::uint64_t k = 1; k <= checkpoints.back(); ++k) {
    Point<T> x = cur();
    if (!x.is_zero()) sum += x;
    if (k == checkpoints[next]) {
      out.emplace_back(k, divided_by(sum, scalar_traits<T>::from_int(static_cast<std::int64_t>(k))));
      ++next;
    }
  }
  return out;
}

// (1/n) * sum_{k<=n} ||x_k - L||^p
template <typename T>
T strong_p_residual(const Sequence<T>& seq, const Point<T>& L, const Rational& p, std::uint64_t n,
                    Norm norm = Norm::Max) {
  if (n < 1) throw PreconditionError("strong_p_residual needs n >= 1");
  if (!(p > 0)) throw PreconditionError("strong_p_residual needs p > 0");
  auto cur = seq.stream();
  T acc{};
  for (std::uint64_t k = 1; k <= n; ++k) {
    Point<T> diff = cur() - L;
    if (!diff.is_zero()) acc += norm_pow(diff, norm, p);
  }
  return acc / scalar_traits<T>::from_int(static_cast<std::int64_t>(n));
}

template <typename T>
std::vector<std::pair<std::uint64_t, T>> residual_table(const Sequence<T>& seq, const Point<T>& L,
                                                        const Rational& p,
                                                        const std::vector<std::uint64_t>& checkpoints,
                                                        Norm norm = Norm::Max) {
  auto cur = seq.stream();
  T acc{};
  std::vector<std::pair<std::uint64_t, T>> out;
  out.reserve(checkpoints.size());
  std::size_t next = 0;
  for (std::uint64_t k = 1; k <= checkpoints.back(); ++k) {
    Point<T> diff = cur() - L;
    if (!diff.is_zero()) acc += norm_pow(diff, norm, p);
    if (k == checkpoints[next]) {
      out.emplace_back(k, acc / scalar_traits<T>::from_int(static_cast<std::int64_t>(k)));
      ++next;
    }
  }
  return out;
}

namespace detail {

template <typename T>
struct Cluster {
  std::optional<Point<T>> centroid;
  Rational mass{0};  // in-ball count / window size
};

template <typename T>
T distance_key(const Point<T>& diff, Norm norm) {
  return norm == Norm::Max ? max_abs(diff) : sum_squares(diff);
}

// Smallest-ball candidate search over a tail window: sort by first coordinate,
// take the maximal-count spans of width 2r, refine each by an in-ball count
// around its centroid. Ties break toward the smaller cluster radius, then the
// smaller first coordinate.
template <typename T>
Cluster<T> find_cluster(std::vector<Point<T>> window, const T& radius, const Rational& band,
                        Norm norm) {
  Cluster<T> result;
  if (window.empty()) return result;
  std::sort(window.begin(), window.end(),
            [](const Point<T>& a, const Point<T>& b) { return a[0] < b[0]; });
  const std::size_t n = window.size();
  const T width = radius + radius;

  std::size_t best_count = 0;
  std::vector<std::pair<std::size_t, std::size_t>> spans;  // [i, j] inclusive
  for (std::size_t i = 0, j = 0; i < n; ++i) {
    if (j < i) j = i;
    while (j + 1 < n && window[j + 1][0] - window[i][0] <= width) ++j;
    const std::size_t count = j - i + 1;
    if (count > best_count) {
      best_count = count;
      spans.clear();
    }
    if (count == best_count && (spans.empty() || spans.back().second != j)) {
      if (spans.size() < 32) spans.emplace_back(i, j);
    }
  }

  const T eps_key = norm == Norm::Max ? radius : radius * radius;
  std::size_t best_inball = 0;
  std::optional<T> best_radius_key;
  std::optional<Point<T>> best_centroid;
  for (const auto& [i, j] : spans) {
    Point<T> centroid(window[0].dim());
    for (std::size_t t = i; t <= j; ++t) centroid += window[t];
    centroid = divided_by(std::move(centroid),
                          scalar_traits<T>::from_int(static_cast<std::int64_t>(j - i + 1)));

    std::size_t inball = 0;
    Point<T> inball_sum(window[0].dim());
    T radius_key{};
    for (const auto& x : window) {
      T key = distance_key(x - centroid, norm);
      if (key <= eps_key) {
        ++inball;
        inball_sum += x;
        if (key > radius_key) radius_key = key;
      }
    }
    if (inball == 0) continue;
    Point<T> refined = divided_by(std::move(inball_sum),
                                  scalar_traits<T>::from_int(static_cast<std::int64_t>(inball)));
    const bool better =
        inball > best_inball ||
        (inball == best_inball && best_radius_key &&
         (radius_key < *best_radius_key ||
          (radius_key == *best_radius_key && best_centroid && refined[0] < (*best_centroid)[0])));
    if (better) {
      best_inball = inball;
      best_radius_key = radius_key;
      best_centroid = std::move(refined);
    }
  }

  result.mass = Rational(best_inball, n);
  if (best_centroid && result.mass >= Rational(1) - band) result.centroid = best_centroid;
  return result;
}

// Tail-window scan feeding the cluster search: keeps {x_k : n/2 < k <= n}.
template <typename T>
Cluster<T> discover_candidate(const Sequence<T>& seq, const CheckpointPolicy& policy,
                              const Rational& radius, Norm norm) {
  const std::uint64_t n_max = policy.final_checkpoint();
  const std::uint64_t start = n_max / 2 + 1;
  std::vector<Point<T>> window;
  window.reserve(n_max - start + 1);
  auto cur = seq.stream();
  for (std::uint64_t k = 1; k <= n_max; ++k) {
    Point<T> x = cur();
    if (k >= start) window.push_back(std::move(x));
  }
  return find_cluster(std::move(window), scalar_traits<T>::from_rational(radius), policy.band,
                      norm);
}

}  // namespace detail

inline std::vector<Rational> default_eps_schedule() {
  return {Rational(1), Rational(1, 2), Rational(1, 4), Rational(1, 8)};
}

template <typename T>
struct StatResult {
  Verdict<T> verdict;
  std::optional<Point<T>> candidate;  // cluster centroid, present even if a density check fails
  Rational cluster_mass{0};
  std::vector<Rational> eps_schedule;
  std::vector<DensityEstimate> eps_evidence;  // parallel to eps_schedule
};

/// Statistical convergence test: discovers the candidate L as the dominant
/// tail cluster, then requires every eps-exceedance set to get a density-zero
/// verdict. Statistical divergence is never asserted; a failed test is
/// Inconclusive with the densest-cluster mass attached.
template <typename T>
StatResult<T> statistical_verdict(const Sequence<T>& seq, const CheckpointPolicy& policy,
                                  std::vector<Rational> eps_schedule = default_eps_schedule(),
                                  Norm norm = Norm::Max) {
  if (eps_schedule.empty()) throw PreconditionError("eps schedule must be nonempty");
  for (std::size_t i = 0; i < eps_schedule.size(); ++i) {
    if (!(eps_schedule[i] > 0)) throw PreconditionError("eps schedule must be positive");
    if (i && !(eps_schedule[i] < eps_schedule[i - 1]))
      throw PreconditionError("eps schedule must be strictly decreasing");
  }

  StatResult<T> res;
  res.eps_schedule = eps_schedule;
  auto cluster = detail::discover_candidate(seq, policy, eps_schedule.back(), norm);
  res.cluster_mass = cluster.mass;
  res.verdict.cluster_mass = cluster.mass;
  if (!cluster.centroid) {
    res.verdict.note = "no cluster of mass >= 1 - band at radius " +
                       format_rational(eps_schedule.back()) + "; densest mass " +
                       format_rational(cluster.mass);
    return res;
  }
  res.candidate = cluster.centroid;
  res.verdict.reference = cluster.centroid;

  // one pass, all eps exceedance counts at every checkpoint
  const auto cps = policy.checkpoints();
  const Point<T>& L = *cluster.centroid;
  std::vector<T> eps_keys;
  for (const auto& e : eps_schedule) {
    T v = scalar_traits<T>::from_rational(e);
    eps_keys.push_back(norm == Norm::Max ? v : v * v);
  }
  std::vector<std::uint64_t> counts(eps_schedule.size(), 0);
  std::vector<std::vector<std::pair<std::uint64_t, Rational>>> tables(eps_schedule.size());
  auto cur = seq.stream();
  std::size_t next = 0;
  for (std::uint64_t k = 1; k <= cps.back(); ++k) {
    const T key = detail::distance_key(cur() - L, norm);
    for (std::size_t i = 0; i < eps_keys.size(); ++i)
      if (key >= eps_keys[i]) ++counts[i];
    if (k == cps[next]) {
      for (std::size_t i = 0; i < counts.size(); ++i) tables[i].emplace_back(k, Rational(counts[i], k));
      ++next;
    }
  }

  bool all_zero = true;
  std::string failing;
  for (std::size_t i = 0; i < eps_schedule.size(); ++i) {
    DensityEstimate est;
    est.table = tables[i];
    est.verdict = detail::classify_density_table(std::move(tables[i]), policy, std::nullopt);
    const bool zero = est.verdict.converges() && est.verdict.limit->is_zero();
    if (!zero && all_zero) {
      all_zero = false;
      failing = format_rational(eps_schedule[i]);
    }
    res.eps_evidence.push_back(std::move(est));
  }

  // evidence shown on the verdict: the exceedance densities at the tightest eps
  for (const auto& [n, d] : res.eps_evidence.back().table)
    res.verdict.evidence.emplace_back(n, scalar_traits<T>::from_rational(d));

  if (all_zero) {
    res.verdict.outcome = Outcome::ConvergesTo;
    res.verdict.limit = res.candidate;
  } else {
    res.verdict.note = "exceedance set at eps=" + failing + " is not density-zero";
  }
  return res;
}

/// Strong p-Cesàro verdict. When no L is supplied the candidate is taken from
/// the statistical tail cluster; the residual table is then classified against
/// the policy thresholds.
template <typename T>
Verdict<T> wp_verdict(const Sequence<T>& seq, const Rational& p, const CheckpointPolicy& policy,
                      std::optional<Point<T>> L_hint = {}, Norm norm = Norm::Max) {
  if (!(p > 0)) throw PreconditionError("wp_verdict needs p > 0");
  std::optional<Point<T>> L = std::move(L_hint);
  std::optional<Rational> mass;
  if (!L) {
    auto cluster = detail::discover_candidate(seq, policy, default_eps_schedule().back(), norm);
    mass = cluster.mass;
    if (!cluster.centroid) {
      Verdict<T> v;
      v.cluster_mass = cluster.mass;
      v.note = "no statistical candidate for L (densest cluster mass " +
               format_rational(cluster.mass) + "); supply an explicit L";
      return v;
    }
    L = cluster.centroid;
  }
  auto verdict = classify_residual(residual_table(seq, *L, p, policy.checkpoints(), norm), policy, *L);
  verdict.cluster_mass = mass;
  return verdict;
}

template <typename T>
struct CauchyReport {
  std::optional<std::uint64_t> found_p0;
  Rational min_density{1};  // smallest final-checkpoint exceedance density seen
  std::uint64_t candidates_scanned = 0;
  std::optional<DensityEstimate> evidence;  // for the found anchor
};

/// Statistical Cauchy test: looks for an anchor p0 >= n whose eps-exceedance
/// set has density zero. Anchors are drawn from {n, ..., n + n0} and the
/// checkpoints beyond.
template <typename T>
CauchyReport<T> statistical_cauchy_check(const Sequence<T>& seq, const Rational& eps,
                                         std::uint64_t n, const CheckpointPolicy& policy,
                                         Norm norm = Norm::Max) {
  if (!(eps > 0)) throw PreconditionError("statistical_cauchy_check needs eps > 0");
  if (n < 1) throw PreconditionError("statistical_cauchy_check needs n >= 1");
  std::vector<std::uint64_t> anchors;
  for (std::uint64_t p0 = n; p0 <= n + policy.n0; ++p0) anchors.push_back(p0);
  for (auto cp : policy.checkpoints())
    if (cp > n + policy.n0) anchors.push_back(cp);

  CauchyReport<T> report;
  for (auto p0 : anchors) {
    const Point<T> anchor = seq.at(p0);
    auto est = density_verdict(set_exceed(seq, anchor, eps, norm), policy);
    ++report.candidates_scanned;
    const Rational final_density = est.table.back().second;
    if (final_density < report.min_density) report.min_density = final_density;
    if (est.verdict.converges() && est.verdict.limit->is_zero()) {
      report.found_p0 = p0;
      report.evidence = std::move(est);
      break;
    }
  }
  return report;
}

template <typename T>
struct ConsistencyReport {
  Verdict<T> stat;
  Verdict<T> wp;
  bool bounded_flag = false;
  double sample_sup = 0.0;                                 // sup ||x_k|| over the sampled prefix
  std::uint64_t sample_limit = 0;
  std::vector<std::pair<std::uint64_t, double>> sup_table;
  bool consistent = true;
  std::string note;
};

/// Runs the statistical and strong p-Cesàro verdicts against the same
/// candidate L and checks them against each other. Boundedness is estimated
/// from the growth of the prefix sup: a sup that at least doubled and is still
/// setting new highs across the last three checkpoints counts as unbounded.
template <typename T>
ConsistencyReport<T> connor_cross_check(const Sequence<T>& seq, const Rational& p,
                                        const CheckpointPolicy& policy, Norm norm = Norm::Max) {
  ConsistencyReport<T> rep;
  auto stat = statistical_verdict(seq, policy, default_eps_schedule(), norm);
  rep.stat = stat.verdict;
  if (stat.candidate) {
    rep.wp = wp_verdict(seq, p, policy, stat.candidate, norm);
  } else {
    rep.wp.note = "no statistical candidate for L";
    rep.wp.cluster_mass = stat.cluster_mass;
  }

  const auto cps = policy.checkpoints();
  rep.sample_limit = cps.back();
  auto cur = seq.stream();
  T sup_key{};
  std::vector<T> sup_keys;
  std::size_t next = 0;
  for (std::uint64_t k = 1; k <= cps.back(); ++k) {
    T key = detail::distance_key(cur(), norm);
    if (key > sup_key) sup_key = std::move(key);
    if (k == cps[next]) {
      sup_keys.push_back(sup_key);
      ++next;
    }
  }
  const auto key_to_norm = [norm](const T& key) {
    double v = scalar_traits<T>::to_double(key);
    return norm == Norm::Max ? v : std::sqrt(v);
  };
  for (std::size_t i = 0; i < sup_keys.size(); ++i)
    rep.sup_table.emplace_back(cps[i], key_to_norm(sup_keys[i]));
  rep.sample_sup = rep.sup_table.back().second;

  const std::size_t m = sup_keys.size();
  const T doubling = norm == Norm::Max ? scalar_traits<T>::from_int(2) : scalar_traits<T>::from_int(4);
  const bool still_growing = sup_keys[m - 1] > sup_keys[m - 2] && sup_keys[m - 2] > sup_keys[m - 3];
  const bool doubled = sup_keys[m - 1] >= doubling * sup_keys[0];
  rep.bounded_flag = !(still_growing && doubled);

  if (rep.bounded_flag && rep.stat.converges() && rep.wp.diverges()) {
    rep.consistent = false;
    rep.note = "bounded sequence with statistical convergence but strong p-Cesàro divergence";
  } else if (!rep.bounded_flag && rep.stat.outcome != rep.wp.outcome) {
    rep.note = "verdicts differ on an unbounded sample: boundedness is necessary for the converse";
  }
  return rep;
}

template <typename T>
struct DivergenceWitness {
  std::string rule;  // "squares" | "cubes" | "checkpoints"
  std::vector<std::pair<std::uint64_t, T>> values;  // (n_j, (1/n_j) sum ||x_k||^p)
};

/// Searches for a subsequence along which (1/n_j) sum_{k<=n_j} ||x_k||^p grows
/// past the divergence threshold. A returned witness is a sound certificate
/// that the sequence is not strongly p-Cesàro summable to any L. Structured
/// rules are preferred over raw checkpoints when several qualify.
template <typename T>
std::optional<DivergenceWitness<T>> divergence_witness(const Sequence<T>& seq, const Rational& p,
                                                       const CheckpointPolicy& policy,
                                                       Norm norm = Norm::Max) {
  if (!(p > 0)) throw PreconditionError("divergence_witness needs p > 0");
  const auto cps = policy.checkpoints();
  const std::uint64_t n_max = cps.back();

  std::vector<std::pair<std::uint64_t, T>> squares, cubes, checks;
  auto cur = seq.stream();
  T acc{};
  std::uint64_t next_sq = 1, sq_root = 1, next_cb = 1, cb_root = 1;
  std::size_t next_cp = 0;
  for (std::uint64_t k = 1; k <= n_max; ++k) {
    Point<T> x = cur();
    if (!x.is_zero()) acc += norm_pow(x, norm, p);
    const auto snapshot = [&](std::vector<std::pair<std::uint64_t, T>>& dst) {
      dst.emplace_back(k, acc / scalar_traits<T>::from_int(static_cast<std::int64_t>(k)));
    };
    if (k == next_sq) {
      snapshot(squares);
      ++sq_root;
      next_sq = sq_root * sq_root;
    }
    if (k == next_cb) {
      snapshot(cubes);
      ++cb_root;
      next_cb = cb_root * cb_root * cb_root;
    }
    if (k == cps[next_cp]) {
      snapshot(checks);
      if (next_cp + 1 < cps.size()) ++next_cp;
    }
  }

  const T threshold = scalar_traits<T>::from_rational(policy.div_threshold);
  const auto certify =
      [&](const std::vector<std::pair<std::uint64_t, T>>& values,
          const std::string& rule) -> std::optional<DivergenceWitness<T>> {
    for (std::size_t i = 2; i < values.size(); ++i) {
      if (values[i].second > threshold && values[i - 2].second < values[i - 1].second &&
          values[i - 1].second < values[i].second) {
        DivergenceWitness<T> w;
        w.rule = rule;
        w.values.assign(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(i + 1));
        return w;
      }
    }
    return std::nullopt;
  };
  if (auto w = certify(squares, "squares")) return w;
  if (auto w = certify(cubes, "cubes")) return w;
  if (auto w = certify(checks, "checkpoints")) return w;
  return std::nullopt;
}

template <typename T>
struct StolzReport {
  Verdict<T> series;         // behaviour of the partial sums S_k themselves
  Verdict<T> mean_of_sums;   // behaviour of (1/n) sum_{k<=n} S_k
  bool consistent = true;
  std::string note;
};

/// Checks the Stolz-Cesàro relation on a scalar partial-sum sequence: if the
/// partial sums settle at L, their arithmetic means must settle at the same L;
/// if they blow up, the means must blow up too.
template <typename T>
StolzReport<T> stolz_cesaro_check(const Sequence<T>& partial_sums, const CheckpointPolicy& policy) {
  if (partial_sums.dim() != 1)
    throw PreconditionError("stolz_cesaro_check expects a scalar partial-sum sequence");
  const auto cps = policy.checkpoints();
  std::vector<std::pair<std::uint64_t, T>> sums_table, means_table;
  auto cur = partial_sums.stream();
  T acc{};
  T latest{};
  std::size_t next = 0;
  for (std::uint64_t k = 1; k <= cps.back(); ++k) {
    latest = cur()[0];
    acc += latest;
    if (k == cps[next]) {
      sums_table.emplace_back(k, latest);
      means_table.emplace_back(k, acc / scalar_traits<T>::from_int(static_cast<std::int64_t>(k)));
      ++next;
    }
  }

  StolzReport<T> rep;
  rep.series = classify_scalar_limit(std::move(sums_table), policy);
  rep.mean_of_sums = classify_scalar_limit(std::move(means_table), policy);

  const T abs_tol = scalar_traits<T>::from_rational(policy.abs_tol);
  const T div_threshold = scalar_traits<T>::from_rational(policy.div_threshold);
  if (rep.series.converges() && rep.mean_of_sums.converges()) {
    const T gap = scalar_traits<T>::abs((*rep.series.limit)[0] - (*rep.mean_of_sums.limit)[0]);
    if (gap > abs_tol) {
      rep.consistent = false;
      rep.note = "partial sums and their means settle at different values";
    }
  } else if (rep.series.diverges() && rep.mean_of_sums.final_value() < div_threshold) {
    rep.consistent = false;
    rep.note = "partial sums blow up while their means stay bounded";
  }
  return rep;
}

}  // namespace summability
