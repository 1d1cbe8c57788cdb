#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "summability/cesaro.hpp"
#include "summability/density.hpp"
#include "summability/rng.hpp"

namespace summability {

/// A series sum_i x_i given by the same pure index->point machinery as
/// sequences. Builtin constructions carry their closed-form absolute
/// convergence classification, which doubles as an oracle for the wuc verdict.
template <typename T>
struct Series {
  Sequence<T> terms;
  Norm norm = Norm::Max;
  std::optional<bool> abs_convergent;   // coordinatewise absolute convergence, when known
  std::optional<Rational> h_limit;      // closed-form H under the max norm, when known

  std::size_t dim() const { return terms.dim(); }
  const std::string& desc() const { return terms.desc(); }
};

/// A bounded coefficient sequence (a_i) with its declared sup-norm bound.
template <typename T>
struct Coefficients {
  std::string desc;
  std::function<T(std::uint64_t)> at;
  std::function<std::function<T()>()> stream_factory;  // optional; defaults to at()
  Rational bound{1};
  bool bound_validated = false;  // builtins are validated by construction

  std::function<T()> stream() const {
    if (stream_factory) return stream_factory();
    auto rule = at;
    return [rule, i = std::uint64_t{0}]() mutable { return rule(++i); };
  }
};

// Samples |a_i| <= bound over a prefix; builtins skip this by construction.
template <typename T>
void validate_coefficients(const Coefficients<T>& c, std::uint64_t sample_limit = 100'000) {
  if (c.bound_validated) return;
  const T bound = scalar_traits<T>::from_rational(c.bound);
  auto cur = c.stream();
  for (std::uint64_t i = 1; i <= sample_limit; ++i) {
    if (scalar_traits<T>::abs(cur()) > bound)
      throw PreconditionError("coefficient spec '" + c.desc + "' violates its declared bound " +
                              format_rational(c.bound) + " at index " + std::to_string(i));
  }
}

/// A linear functional on R^d, represented by its coefficient vector.
template <typename T>
struct Functional {
  std::string desc;
  Point<T> coeffs;

  T operator()(const Point<T>& v) const {
    T out{};
    for (std::size_t j = 0; j < v.dim(); ++j) out += coeffs[j] * v[j];
    return out;
  }
};

template <typename T>
T dot(const Point<T>& a, const Point<T>& b) {
  T out{};
  for (std::size_t j = 0; j < a.dim(); ++j) out += a[j] * b[j];
  return out;
}

// ---------------------------------------------------------------------------
// builders

// Terms x_i = scale * base^i * dir.
template <typename T>
Series<T> series_geometric(const Rational& base, const Rational& scale,
                           const std::vector<Rational>& dir, Norm norm = Norm::Max) {
  Point<T> d(dir.size());
  Rational dir_max = 0;
  bool dir_zero = true;
  for (std::size_t j = 0; j < dir.size(); ++j) {
    d[j] = scalar_traits<T>::from_rational(dir[j]);
    if (abs(dir[j]) > dir_max) dir_max = abs(dir[j]);
    dir_zero = dir_zero && dir[j] == 0;
  }
  Series<T> s;
  s.terms = seq_geometric<T>(base, scale, std::move(d));
  s.norm = norm;
  const Rational b = abs(base);
  const bool trivial = dir_zero || scale == 0 || b == 0;
  s.abs_convergent = b < 1 || trivial;
  if (*s.abs_convergent && norm == Norm::Max)
    s.h_limit = trivial ? Rational(0) : abs(scale) * dir_max * b / (Rational(1) - b);
  return s;
}

template <typename T>
Series<T> series_harmonic(Point<T> dir, Norm norm = Norm::Max) {
  const bool zero = dir.is_zero();
  auto at = [dir](std::uint64_t i) {
    Point<T> p = dir;
    return divided_by(std::move(p), scalar_traits<T>::from_int(static_cast<std::int64_t>(i)));
  };
  Series<T> s;
  s.terms = Sequence<T>(dir.dim(), "harmonic:dir=" + format_point(dir), at);
  s.norm = norm;
  s.abs_convergent = zero;
  if (zero) s.h_limit = Rational(0);
  return s;
}

template <typename T>
Series<T> series_altharmonic(Point<T> dir, Norm norm = Norm::Max) {
  const bool zero = dir.is_zero();
  auto at = [dir](std::uint64_t i) {
    Point<T> p = dir;
    p = divided_by(std::move(p), scalar_traits<T>::from_int(static_cast<std::int64_t>(i)));
    if (i % 2 == 1) p *= scalar_traits<T>::from_int(-1);
    return p;
  };
  Series<T> s;
  s.terms = Sequence<T>(dir.dim(), "altharmonic:dir=" + format_point(dir), at);
  s.norm = norm;
  s.abs_convergent = zero;  // |x_i| is harmonic unless dir = 0
  if (zero) s.h_limit = Rational(0);
  return s;
}

template <typename T>
Series<T> series_constant(Point<T> value, Norm norm = Norm::Max) {
  Series<T> s;
  const bool zero = value.is_zero();
  s.terms = seq_constant<T>(std::move(value), "");
  s.norm = norm;
  s.abs_convergent = zero;
  if (zero) s.h_limit = Rational(0);
  return s;
}

// Finitely many explicit terms, zero afterwards.
template <typename T>
Series<T> series_from_points(std::vector<Point<T>> points, Norm norm = Norm::Max) {
  auto data = std::make_shared<std::vector<Point<T>>>(std::move(points));
  const std::size_t dim = data->empty() ? 1 : data->front().dim();
  auto at = [data, dim](std::uint64_t i) {
    if (i <= data->size()) return (*data)[i - 1];
    return Point<T>(dim);
  };
  Series<T> s;
  s.terms = Sequence<T>(dim, "points[" + std::to_string(data->size()) + "]", at);
  s.norm = norm;
  s.abs_convergent = true;
  return s;
}

// File-backed series are finite: terms past the end of the file are zero, so
// membership scans remain well-defined at any truncation.
template <typename T>
Series<T> series_from_file(const std::string& path, FileFormat format, Norm norm = Norm::Max) {
  auto data = detail::load_sequence_file<T>(path, format);
  std::vector<Point<T>> pts(data->begin(), data->end());
  Series<T> s = series_from_points<T>(std::move(pts), norm);
  s.terms = Sequence<T>(s.terms.dim(), "file:" + path,
                        [inner = s.terms](std::uint64_t i) { return inner.at(i); });
  return s;
}

template <typename T>
Coefficients<T> coeff_const(const Rational& v) {
  Coefficients<T> c;
  c.desc = "const:" + format_rational(v);
  const T value = scalar_traits<T>::from_rational(v);
  c.at = [value](std::uint64_t) { return value; };
  c.bound = abs(v);
  c.bound_validated = true;
  return c;
}

template <typename T>
Coefficients<T> coeff_altsign() {
  Coefficients<T> c;
  c.desc = "altsign";
  c.at = [](std::uint64_t i) { return scalar_traits<T>::from_int(i % 2 == 0 ? 1 : -1); };
  c.bound = 1;
  c.bound_validated = true;
  return c;
}

template <typename T>
Coefficients<T> coeff_reciprocal() {
  Coefficients<T> c;
  c.desc = "reciprocal";
  c.at = [](std::uint64_t i) {
    return scalar_traits<T>::from_int(1) / scalar_traits<T>::from_int(static_cast<std::int64_t>(i));
  };
  c.bound = 1;
  c.bound_validated = true;
  return c;
}

template <typename T>
Coefficients<T> coeff_geometric(const Rational& q) {
  if (!(abs(q) <= 1)) throw PreconditionError("geometric coefficients need |q| <= 1");
  Coefficients<T> c;
  c.desc = "geom:" + format_rational(q);
  const T qq = scalar_traits<T>::from_rational(q);
  c.at = [qq](std::uint64_t i) {
    if constexpr (scalar_traits<T>::exact)
      return scalar_traits<T>::pow_p(qq, Rational(i));
    else
      return std::pow(qq, static_cast<double>(i));
  };
  c.stream_factory = [qq] {
    return [qq, acc = scalar_traits<T>::from_int(1)]() mutable {
      acc *= qq;
      return acc;
    };
  };
  c.bound = abs(q);
  c.bound_validated = true;
  return c;
}

// Coefficients past the end of the file are zero; the declared bound is the
// file's own max |a_i|.
template <typename T>
Coefficients<T> coeff_from_file(const std::string& path) {
  auto data = detail::load_sequence_file<T>(path, FileFormat::ScalarLines);
  Rational bound = 0;
  for (const auto& p : *data) {
    if constexpr (scalar_traits<T>::exact) {
      Rational a = abs(Rational(p[0]));
      if (a > bound) bound = a;
    } else {
      Rational a = parse_rational(scalar_traits<T>::format(std::fabs(p[0])));
      if (a > bound) bound = a;
    }
  }
  Coefficients<T> c;
  c.desc = "file:" + path;
  c.at = [data](std::uint64_t i) { return i <= data->size() ? (*data)[i - 1][0] : T{}; };
  c.bound = bound;
  c.bound_validated = true;
  return c;
}

// Deterministic seeded coefficients, uniform in [-bound, bound].
template <typename T>
Coefficients<T> coeff_seeded_random(std::uint64_t seed, const Rational& bound) {
  Coefficients<T> c;
  c.desc = "seeded:0x" + [seed] {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%llx", static_cast<unsigned long long>(seed));
    return std::string(buf);
  }();
  const T b = scalar_traits<T>::from_rational(bound);
  c.at = [seed, b](std::uint64_t i) {
    const auto h = static_cast<std::int64_t>(hash_index(seed, i) >> 34);  // 30 bits
    const T u = scalar_traits<T>::from_int(h) / scalar_traits<T>::from_int(1 << 29);  // [0, 2)
    return (u - scalar_traits<T>::from_int(1)) * b;
  };
  c.bound = bound;
  c.bound_validated = true;
  return c;
}

template <typename T>
Coefficients<T> coeff_add(const Coefficients<T>& a, const Coefficients<T>& b) {
  Coefficients<T> c;
  c.desc = a.desc + "+" + b.desc;
  c.at = [fa = a.at, fb = b.at](std::uint64_t i) { return fa(i) + fb(i); };
  c.stream_factory = [a, b] {
    return [sa = a.stream(), sb = b.stream()]() mutable { return sa() + sb(); };
  };
  c.bound = a.bound + b.bound;
  c.bound_validated = a.bound_validated && b.bound_validated;
  return c;
}

// ---------------------------------------------------------------------------
// partial sums

// sum_{i<=n} a_i x_i
template <typename T>
Point<T> partial_sum(const Series<T>& series, const Coefficients<T>& coeffs, std::uint64_t n) {
  if (n < 1) throw PreconditionError("partial_sum needs n >= 1");
  auto terms = series.terms.stream();
  auto as = coeffs.stream();
  Point<T> sum(series.dim());
  for (std::uint64_t i = 1; i <= n; ++i) {
    Point<T> x = terms();
    const T a = as();
    if (a != T{} && !x.is_zero()) sum += x * a;
  }
  return sum;
}

// The partial sums S_n as a derived sequence; streaming keeps verdict passes
// O(1) per step, random access costs O(k).
template <typename T>
Sequence<T> partial_sum_sequence(const Series<T>& series, const Coefficients<T>& coeffs) {
  auto at = [series, coeffs](std::uint64_t k) { return partial_sum(series, coeffs, k); };
  auto stream = [series, coeffs] {
    return [terms = series.terms.stream(), as = coeffs.stream(),
            sum = Point<T>(series.dim())]() mutable {
      Point<T> x = terms();
      const T a = as();
      if (a != T{} && !x.is_zero()) sum += x * a;
      return sum;
    };
  };
  return Sequence<T>(series.dim(), "S(" + series.desc() + ";" + coeffs.desc + ")", at, stream);
}

// Scalar partial sums sum_{i<=n} a_i <x_i, vec>: the image of S_n under a
// functional, or the values of a dual series at a test point.
template <typename T>
Sequence<T> scalar_partial_sums(const Series<T>& series, const Coefficients<T>& coeffs,
                                const Point<T>& vec, const std::string& label) {
  auto at = [series, coeffs, vec](std::uint64_t k) {
    auto terms = series.terms.stream();
    auto as = coeffs.stream();
    T sum{};
    for (std::uint64_t i = 1; i <= k; ++i) sum += as() * dot(terms(), vec);
    return Point<T>::scalar(sum);
  };
  auto stream = [series, coeffs, vec] {
    return [terms = series.terms.stream(), as = coeffs.stream(), vec, sum = T{}]() mutable {
      sum += as() * dot(terms(), vec);
      return Point<T>::scalar(sum);
    };
  };
  return Sequence<T>(1, label, at, stream);
}

// Scalar partial sums over an index subset: sum_{i<=n, i in M} <f_i, x>.
template <typename T>
Sequence<T> subset_partial_sums(const Series<T>& dual_series, const IndexSet& M,
                                const Point<T>& x) {
  auto at = [dual_series, M, x](std::uint64_t k) {
    auto terms = dual_series.terms.stream();
    auto gate = M.member_stream();
    T sum{};
    for (std::uint64_t i = 1; i <= k; ++i) {
      Point<T> f = terms();
      if (gate()) sum += dot(f, x);
    }
    return Point<T>::scalar(sum);
  };
  auto stream = [dual_series, M, x] {
    return [terms = dual_series.terms.stream(), gate = M.member_stream(), x, sum = T{}]() mutable {
      Point<T> f = terms();
      if (gate()) sum += dot(f, x);
      return Point<T>::scalar(sum);
    };
  };
  return Sequence<T>(1, "subset(" + dual_series.desc() + ";" + M.desc + ";" + format_point(x) + ")",
                     at, stream);
}

// ---------------------------------------------------------------------------
// the wuc bound H

// sup{ ||sum_{i<=m} a_i x_i|| : |a_i| <= 1, m <= n }. Under the max norm the
// box supremum decouples per coordinate and equals max_j sum_{i<=n} |x_i[j]|,
// computed in O(n d). Other norms fall back to sign-pattern enumeration and
// are refused beyond n = 20.
template <typename T>
T h_bound(const Series<T>& series, std::uint64_t n) {
  if (n < 1) throw PreconditionError("h_bound needs n >= 1");
  const std::size_t d = series.dim();
  if (series.norm == Norm::Max) {
    std::vector<T> sums(d, T{});
    auto terms = series.terms.stream();
    for (std::uint64_t i = 1; i <= n; ++i) {
      Point<T> x = terms();
      for (std::size_t j = 0; j < d; ++j) sums[j] += scalar_traits<T>::abs(x[j]);
    }
    T best{};
    for (auto& s : sums)
      if (s > best) best = s;
    return best;
  }
  if (d > 3 || n > 20)
    throw PreconditionError(
        "h_bound under the euclidean norm is exponential; need d <= 3 and n <= 20");
  std::vector<Point<T>> xs;
  xs.reserve(n);
  auto terms = series.terms.stream();
  for (std::uint64_t i = 1; i <= n; ++i) xs.push_back(terms());
  // gray-code walk over sign patterns
  Point<T> sum(d);
  for (const auto& x : xs) sum += x;
  std::vector<int> sign(n, 1);
  T best_key = sum_squares(sum);
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t g = 1; g < total; ++g) {
    unsigned bit = 0;
    while (!((g >> bit) & 1)) ++bit;
    const T two = scalar_traits<T>::from_int(2 * sign[bit]);
    sum -= xs[bit] * two;
    sign[bit] = -sign[bit];
    T key = sum_squares(sum);
    if (key > best_key) best_key = key;
  }
  return scalar_traits<T>::pow_p(best_key, Rational(1, 2));
}

template <typename T>
std::vector<std::pair<std::uint64_t, T>> h_table(const Series<T>& series,
                                                 const std::vector<std::uint64_t>& checkpoints) {
  const std::size_t d = series.dim();
  std::vector<T> sums(d, T{});
  std::vector<std::pair<std::uint64_t, T>> out;
  out.reserve(checkpoints.size());
  auto terms = series.terms.stream();
  std::size_t next = 0;
  for (std::uint64_t i = 1; i <= checkpoints.back(); ++i) {
    Point<T> x = terms();
    if (!x.is_zero())
      for (std::size_t j = 0; j < d; ++j) sums[j] += scalar_traits<T>::abs(x[j]);
    if (i == checkpoints[next]) {
      T best{};
      for (auto& s : sums)
        if (s > best) best = s;
      out.emplace_back(i, best);
      ++next;
    }
  }
  return out;
}

/// Weak unconditional Cauchyness at truncation scale: the H bound sequence
/// either stabilizes (wuc, with limit H) or keeps growing past the divergence
/// threshold. Builtin series carry a closed-form classification the verdict is
/// reconciled with.
template <typename T>
Verdict<T> wuc_verdict(const Series<T>& series, const CheckpointPolicy& policy) {
  if (series.norm != Norm::Max)
    throw PreconditionError("wuc_verdict needs the max norm (closed-form H)");
  auto verdict = classify_scalar_limit(h_table(series, policy.checkpoints()), policy);
  if (series.h_limit && verdict.converges())
    verdict.limit = Point<T>::scalar(scalar_traits<T>::from_rational(*series.h_limit));
  if (series.abs_convergent) {
    const bool should_converge = *series.abs_convergent;
    if (should_converge && verdict.outcome == Outcome::Diverges) {
      verdict.outcome = Outcome::Inconclusive;
      verdict.note = "table classification contradicts the closed-form (absolutely convergent)";
    } else if (!should_converge && verdict.converges()) {
      verdict.outcome = Outcome::Diverges;
      verdict.limit.reset();
      verdict.note = "closed-form override: coordinate absolute sums diverge";
    }
  }
  return verdict;
}

// ---------------------------------------------------------------------------
// membership

template <typename T>
struct MembershipResult {
  Verdict<T> verdict;
  std::optional<DivergenceWitness<T>> witness;
  std::string certificate;  // "truncation-scale" | "divergence-witness" | "residual-growth" | "none"
};

// Verdict on a scalar or vector sequence with the witness fallback: a
// ConvergesTo is a truncation-scale certificate, a witness is a sound
// asymptotic negative.
template <typename T>
MembershipResult<T> sequence_membership(const Sequence<T>& s, const Rational& p,
                                        const CheckpointPolicy& policy, Norm norm) {
  MembershipResult<T> res;
  res.verdict = wp_verdict(s, p, policy, {}, norm);
  if (res.verdict.converges()) {
    res.certificate = "truncation-scale";
    return res;
  }
  res.witness = divergence_witness(s, p, policy, norm);
  if (res.witness) {
    res.verdict.outcome = Outcome::Diverges;
    res.verdict.limit.reset();
    if (!res.verdict.note.empty()) res.verdict.note += "; ";
    res.verdict.note += "divergence witness along " + res.witness->rule;
    res.certificate = "divergence-witness";
  } else if (res.verdict.diverges()) {
    res.certificate = "residual-growth";
  } else {
    res.certificate = "none";
  }
  return res;
}

/// Membership of (a_i) in the summability space of the series: builds the
/// partial sums S_n and classifies their strong p-Cesàro behaviour.
template <typename T>
MembershipResult<T> swp_membership(const Series<T>& series, const Coefficients<T>& coeffs,
                                   const Rational& p, const CheckpointPolicy& policy) {
  validate_coefficients(coeffs);
  return sequence_membership(partial_sum_sequence(series, coeffs), p, policy, series.norm);
}

// ---------------------------------------------------------------------------
// blockwise divergent-coefficient construction

struct BlockRow {
  std::uint64_t m_end = 0;        // last index of the block
  Rational coeff_magnitude{0};    // 2^-t
  Rational threshold{0};          // 4^t, strict
  double abs_sum = 0.0;           // sum of |f_i| over the block
  double weighted_sum = 0.0;      // sum of a_i f_i over the block (> 2^t)
  std::string abs_sum_exact;      // exact value in exact mode
  std::string weighted_sum_exact;
};

struct BlockTable {
  std::vector<BlockRow> rows;          // the first num_blocks completed blocks
  std::vector<std::uint64_t> boundaries;  // every completed block boundary found
  std::uint64_t budget = 0;
  bool budget_exhausted = false;
  std::uint64_t last_index = 0;        // where the scan stopped
  double last_prefix_sum = 0.0;        // block-local |f| sum at the stop point
};

template <typename T>
struct ConstructResult {
  Coefficients<T> coeffs;
  BlockTable table;
};

/// Builds the c_0 coefficient sequence that defeats a non-wuc series: block t
/// ends at the first m_t whose block sum of |f_i| strictly exceeds 2^t * 2^t,
/// and carries coefficients sign(f_i) * 2^-t (sign(0) := +1), so every a_i f_i
/// is nonnegative and each block contributes more than 2^t.
template <typename T>
ConstructResult<T> construct_divergent_coeffs(const Sequence<T>& f_values, unsigned num_blocks,
                                              std::uint64_t budget = 10'000'000) {
  if (f_values.dim() != 1)
    throw PreconditionError("construct_divergent_coeffs expects a scalar sequence");
  if (num_blocks < 1) throw PreconditionError("need at least one block");

  // boundary detection runs in double; completed reported blocks are
  // re-verified exactly in exact mode below
  BlockTable table;
  table.budget = budget;
  const std::uint64_t horizon_floor = std::uint64_t{1} << 21;
  std::vector<std::uint64_t> boundaries;
  {
    auto cur = f_values.stream();
    double block_sum = 0.0;
    double target = 4.0;
    std::uint64_t i = 0;
    while (i < budget) {
      ++i;
      block_sum += std::fabs(scalar_traits<T>::to_double(cur()[0]));
      if (block_sum > target) {
        boundaries.push_back(i);
        block_sum = 0.0;
        target *= 4.0;
        if (boundaries.size() >= 32 ||
            (boundaries.size() >= num_blocks && i >= horizon_floor))
          break;
      }
    }
    table.last_index = i;
    table.last_prefix_sum = block_sum;
  }
  table.boundaries = boundaries;
  table.budget_exhausted = boundaries.size() < num_blocks;
  if (boundaries.empty())
    throw BudgetError("index budget " + std::to_string(budget) +
                      " exhausted before the first block completed; block |f| sum reached " +
                      scalar_traits<double>::format(table.last_prefix_sum));

  // exact sums for the reported rows
  const unsigned reported = std::min<unsigned>(num_blocks, static_cast<unsigned>(boundaries.size()));
  {
    auto cur = f_values.stream();
    std::uint64_t i = 0;
    for (unsigned t = 1; t <= reported; ++t) {
      BlockRow row;
      row.m_end = boundaries[t - 1];
      row.coeff_magnitude = Rational(1, BigInt(1) << t);
      row.threshold = Rational(BigInt(1) << (2 * t));
      T abs_sum{};
      while (i < row.m_end) {
        ++i;
        abs_sum += scalar_traits<T>::abs(cur()[0]);
      }
      if constexpr (scalar_traits<T>::exact) {
        const Rational exact_sum(abs_sum);
        if (!(exact_sum > row.threshold))
          throw ModeError("block " + std::to_string(t) +
                          " boundary from the floating scan fails the strict exact inequality; "
                          "rerun in floating mode");
        row.abs_sum_exact = format_rational(exact_sum);
        row.weighted_sum_exact = format_rational(exact_sum * row.coeff_magnitude);
      }
      row.abs_sum = scalar_traits<T>::to_double(abs_sum);
      row.weighted_sum = row.abs_sum * to_double(row.coeff_magnitude);
      table.rows.push_back(std::move(row));
    }
  }

  auto bounds = std::make_shared<std::vector<std::uint64_t>>(std::move(boundaries));
  Coefficients<T> coeffs;
  coeffs.desc = "constructed(" + f_values.desc() + ")";
  coeffs.bound = Rational(1, 2);
  coeffs.bound_validated = true;
  const auto magnitude = [bounds](std::uint64_t i) {
    const auto block = static_cast<unsigned>(
        std::upper_bound(bounds->begin(), bounds->end(), i - 1) - bounds->begin() + 1);
    return scalar_traits<T>::from_rational(Rational(1, BigInt(1) << block));
  };
  coeffs.at = [f_values, magnitude, budget](std::uint64_t i) {
    if (i > budget)
      throw OutOfRangeError("constructed coefficients are defined up to the index budget " +
                            std::to_string(budget));
    const T f = f_values.at(i)[0];
    T a = magnitude(i);
    if (f < T{}) a = -a;  // sign(0) := +1
    return a;
  };
  coeffs.stream_factory = [f_values, bounds, budget] {
    return [cur = f_values.stream(), bounds, budget, i = std::uint64_t{0}, block = std::size_t{0},
            mag = scalar_traits<T>::from_rational(Rational(1, 2))]() mutable {
      ++i;
      if (i > budget)
        throw OutOfRangeError("constructed coefficients are defined up to the index budget " +
                              std::to_string(budget));
      if (block < bounds->size() && i > (*bounds)[block]) {
        ++block;
        mag /= scalar_traits<T>::from_int(2);
      }
      const T f = cur()[0];
      return f < T{} ? -mag : mag;
    };
  };
  return {std::move(coeffs), std::move(table)};
}

// ---------------------------------------------------------------------------
// weak and weak* membership

template <typename T>
std::vector<Functional<T>> coordinate_functionals(std::size_t d) {
  std::vector<Functional<T>> out;
  for (std::size_t j = 0; j < d; ++j) {
    Point<T> e(d);
    e[j] = scalar_traits<T>::from_int(1);
    out.push_back({"e" + std::to_string(j + 1), std::move(e)});
  }
  return out;
}

namespace detail {

// Random integer direction normalized to unit dual/primal norm with rational
// entries: l1 for the max-norm dual, a ceil-sqrt l2 bound otherwise.
template <typename T>
Point<T> seeded_unit_vector(std::size_t d, Norm norm, bool dual, SplitMix64& gen) {
  std::vector<std::int64_t> ints(d, 0);
  bool nonzero = false;
  for (auto& v : ints) {
    v = gen.range(-8, 8);
    nonzero = nonzero || v != 0;
  }
  if (!nonzero) ints[0] = 1;
  std::int64_t scale = 0;
  const bool l1 = (norm == Norm::Max) == dual;  // dual of max is l1; primal max normalizes by max
  if (l1) {
    for (auto v : ints) scale += std::abs(v);
  } else if (norm == Norm::Max) {
    for (auto v : ints) scale = std::max(scale, std::abs(v));
  } else {
    std::int64_t ss = 0;
    for (auto v : ints) ss += v * v;
    scale = static_cast<std::int64_t>(isqrt(static_cast<std::uint64_t>(ss)));
    if (scale * scale < ss) ++scale;
  }
  Point<T> p(d);
  for (std::size_t j = 0; j < d; ++j)
    p[j] = scalar_traits<T>::from_rational(Rational(ints[j], scale));
  return p;
}

}  // namespace detail

// The d coordinate functionals plus 8 seeded random unit functionals.
template <typename T>
std::vector<Functional<T>> default_functionals(std::size_t d, Norm norm,
                                               std::uint64_t seed = kDefaultSeed) {
  auto out = coordinate_functionals<T>(d);
  SplitMix64 gen(seed);
  for (int i = 0; i < 8; ++i) {
    Point<T> v = detail::seeded_unit_vector<T>(d, norm, /*dual=*/true, gen);
    out.push_back({"u" + std::to_string(i + 1) + "=" + format_point(v), std::move(v)});
  }
  return out;
}

// Standard basis points plus 8 seeded random unit points.
template <typename T>
std::vector<Point<T>> default_test_points(std::size_t d, Norm norm,
                                          std::uint64_t seed = kDefaultSeed) {
  std::vector<Point<T>> out;
  for (std::size_t j = 0; j < d; ++j) {
    Point<T> e(d);
    e[j] = scalar_traits<T>::from_int(1);
    out.push_back(std::move(e));
  }
  SplitMix64 gen(seed);
  for (int i = 0; i < 8; ++i) out.push_back(detail::seeded_unit_vector<T>(d, norm, false, gen));
  return out;
}

template <typename T>
struct PanelRow {
  std::string desc;
  Point<T> vec;  // functional coefficients, or the test point
  MembershipResult<T> result;
};

template <typename T>
struct PanelReport {
  std::vector<PanelRow<T>> rows;
  Verdict<T> aggregate;
};

namespace detail {

// Aggregates per-row scalar limits into a single L: every row must converge,
// the rows at the standard basis vectors determine L, and every other row
// must agree with it within abs_tol. <vec, L> = limit holds in both the weak
// and the weak* reading.
template <typename T>
Verdict<T> aggregate_panel(const std::vector<PanelRow<T>>& rows, std::size_t d,
                           const CheckpointPolicy& policy) {
  Verdict<T> agg;
  for (const auto& row : rows) {
    if (row.result.verdict.diverges()) {
      agg.outcome = Outcome::Diverges;
      agg.note = "row '" + row.desc + "' diverges";
      return agg;
    }
  }
  for (const auto& row : rows) {
    if (!row.result.verdict.converges()) {
      agg.note = "row '" + row.desc + "' is inconclusive";
      return agg;
    }
  }

  std::vector<std::optional<T>> basis_limits(d);
  for (const auto& row : rows) {
    for (std::size_t j = 0; j < d; ++j) {
      bool is_ej = true;
      for (std::size_t t = 0; t < d && is_ej; ++t) {
        const T want = scalar_traits<T>::from_int(t == j ? 1 : 0);
        is_ej = row.vec[t] == want;
      }
      if (is_ej && !basis_limits[j]) basis_limits[j] = (*row.result.verdict.limit)[0];
    }
  }
  bool have_basis = true;
  for (const auto& b : basis_limits) have_basis = have_basis && b.has_value();
  if (!have_basis) {
    agg.outcome = Outcome::ConvergesTo;
    agg.note = "panel does not include the standard basis; limit not recoverable";
    return agg;
  }

  Point<T> L(d);
  for (std::size_t j = 0; j < d; ++j) L[j] = *basis_limits[j];
  const T abs_tol = scalar_traits<T>::from_rational(policy.abs_tol);
  for (const auto& row : rows) {
    const T predicted = dot(row.vec, L);
    const T got = (*row.result.verdict.limit)[0];
    if (scalar_traits<T>::abs(predicted - got) > abs_tol) {
      agg.note = "row '" + row.desc + "' limit is inconsistent with a single L";
      return agg;
    }
  }
  agg.outcome = Outcome::ConvergesTo;
  agg.limit = std::move(L);
  return agg;
}

}  // namespace detail

/// Weak strong-p-Cesàro membership: classifies f(S_n) for every functional in
/// the panel and aggregates the limits into a single L.
template <typename T>
PanelReport<T> weak_wp_membership(const Series<T>& series, const Coefficients<T>& coeffs,
                                  std::vector<Functional<T>> functionals, const Rational& p,
                                  const CheckpointPolicy& policy) {
  if (functionals.empty()) throw PreconditionError("weak membership needs at least one functional");
  validate_coefficients(coeffs);
  PanelReport<T> report;
  for (auto& f : functionals) {
    PanelRow<T> row;
    row.desc = f.desc;
    row.vec = f.coeffs;
    auto seq = scalar_partial_sums(series, coeffs, f.coeffs,
                                   "f(" + f.desc + ")(S(" + series.desc() + "))");
    row.result = sequence_membership(seq, p, policy, Norm::Max);
    report.rows.push_back(std::move(row));
  }
  report.aggregate = detail::aggregate_panel(report.rows, series.dim(), policy);
  return report;
}

/// Weak* membership of a dual series: classifies sum a_i f_i(x) at every test
/// point and recovers the limit functional from the basis points.
template <typename T>
PanelReport<T> weak_star_wp_membership(const Series<T>& dual_series, const Coefficients<T>& coeffs,
                                       std::vector<Point<T>> test_points, const Rational& p,
                                       const CheckpointPolicy& policy) {
  if (test_points.empty()) throw PreconditionError("weak* membership needs at least one test point");
  validate_coefficients(coeffs);
  PanelReport<T> report;
  std::size_t idx = 0;
  for (auto& x : test_points) {
    PanelRow<T> row;
    row.desc = "x" + std::to_string(++idx) + "=" + format_point(x);
    row.vec = x;
    auto seq = scalar_partial_sums(dual_series, coeffs, x, "sum a_i f_i" + row.desc);
    row.result = sequence_membership(seq, p, policy, Norm::Max);
    report.rows.push_back(std::move(row));
  }
  report.aggregate = detail::aggregate_panel(report.rows, dual_series.dim(), policy);
  return report;
}

/// Membership of the subseries sum_{i in M} f_i(x).
template <typename T>
MembershipResult<T> subset_sum_wp(const Series<T>& dual_series, const IndexSet& M,
                                  const Point<T>& x, const Rational& p,
                                  const CheckpointPolicy& policy) {
  return sequence_membership(subset_partial_sums(dual_series, M, x), p, policy, Norm::Max);
}

// ---------------------------------------------------------------------------
// operator bound

template <typename T>
struct OperatorSample {
  std::string desc;
  Rational coeff_bound;
  Outcome outcome;
  double t_norm = 0.0;  // ||T(a)||
  bool bound_ok = false;
};

template <typename T>
struct OperatorReport {
  T H{};
  Verdict<T> wuc;
  std::vector<OperatorSample<T>> samples;
  bool all_ok = true;
};

/// Checks ||T(a)|| <= H ||a||_inf + abs_tol on each sample whose membership
/// converges. Requires a wuc series; T is not defined on all of l_inf
/// otherwise.
template <typename T>
OperatorReport<T> operator_norm_check(const Series<T>& series,
                                      const std::vector<Coefficients<T>>& samples,
                                      const Rational& p, const CheckpointPolicy& policy) {
  OperatorReport<T> report;
  report.wuc = wuc_verdict(series, policy);
  if (!report.wuc.converges())
    throw PreconditionError("operator_norm_check: series is not wuc at desk scale; T((a_i)) is "
                            "not defined on all of l_inf");
  report.H = h_bound(series, policy.final_checkpoint());
  const T abs_tol = scalar_traits<T>::from_rational(policy.abs_tol);
  for (const auto& a : samples) {
    OperatorSample<T> row;
    row.desc = a.desc;
    row.coeff_bound = a.bound;
    auto mem = swp_membership(series, a, p, policy);
    row.outcome = mem.verdict.outcome;
    if (mem.verdict.converges()) {
      const T t_norm = max_abs(*mem.verdict.limit);
      row.t_norm = scalar_traits<T>::to_double(t_norm);
      row.bound_ok = t_norm <= report.H * scalar_traits<T>::from_rational(a.bound) + abs_tol;
    } else {
      row.bound_ok = false;
    }
    report.all_ok = report.all_ok && row.bound_ok;
    report.samples.push_back(std::move(row));
  }
  return report;
}

}  // namespace summability
