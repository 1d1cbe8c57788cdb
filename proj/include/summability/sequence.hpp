#pragma once

#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "summability/point.hpp"

namespace summability {

inline std::uint64_t isqrt(std::uint64_t n) {
  if (n == 0) return 0;
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

inline std::uint64_t icbrt(std::uint64_t n) {
  if (n == 0) return 0;
  auto r = static_cast<std::uint64_t>(std::cbrt(static_cast<double>(n)));
  while (r > 0 && r * r * r > n) --r;
  while ((r + 1) * (r + 1) * (r + 1) <= n) ++r;
  return r;
}

/// A deterministic index -> point rule. Evaluation is pure: the same k always
/// yields the same point, and no prefix is ever materialized. `stream()`
/// returns a stateful cursor emitting x_1, x_2, ... so that derived rules
/// (partial sums, exceedance scans) stay O(1) per step.
template <typename T>
class Sequence {
 public:
  using Stream = std::function<Point<T>()>;

  Sequence() = default;
  Sequence(std::size_t dim, std::string desc, std::function<Point<T>(std::uint64_t)> at,
           std::function<Stream()> stream = {})
      : dim_(dim), desc_(std::move(desc)), at_(std::move(at)), stream_(std::move(stream)) {}

  std::size_t dim() const { return dim_; }
  const std::string& desc() const { return desc_; }

  Point<T> at(std::uint64_t k) const {
    if (k < 1) throw PreconditionError("sequence index must be >= 1");
    return at_(k);
  }

  Stream stream() const {
    if (stream_) return stream_();
    auto rule = at_;
    return [rule, k = std::uint64_t{0}]() mutable { return rule(++k); };
  }

 private:
  std::size_t dim_ = 1;
  std::string desc_;
  std::function<Point<T>(std::uint64_t)> at_;
  std::function<Stream()> stream_;
};

// x_k = r when k = r^3, 0 otherwise. Unbounded, vanishing averages.
template <typename T>
Sequence<T> seq_cube_spike() {
  auto at = [](std::uint64_t k) {
    const std::uint64_t r = icbrt(k);
    return Point<T>::scalar(r * r * r == k ? scalar_traits<T>::from_int(static_cast<std::int64_t>(r))
                                           : T{});
  };
  auto stream = [] {
    return [r = std::uint64_t{1}, k = std::uint64_t{0}]() mutable {
      ++k;
      if (k == r * r * r) {
        auto v = Point<T>::scalar(scalar_traits<T>::from_int(static_cast<std::int64_t>(r)));
        ++r;
        return v;
      }
      return Point<T>::scalar(T{});
    };
  };
  return Sequence<T>(1, "cube-spike", at, stream);
}

// x_k = r^2 when k = r^3, 0 otherwise.
template <typename T>
Sequence<T> seq_cube_spike_squared() {
  auto at = [](std::uint64_t k) {
    const std::uint64_t r = icbrt(k);
    return Point<T>::scalar(
        r * r * r == k ? scalar_traits<T>::from_int(static_cast<std::int64_t>(r * r)) : T{});
  };
  auto stream = [] {
    return [r = std::uint64_t{1}, k = std::uint64_t{0}]() mutable {
      ++k;
      if (k == r * r * r) {
        auto v = Point<T>::scalar(scalar_traits<T>::from_int(static_cast<std::int64_t>(r * r)));
        ++r;
        return v;
      }
      return Point<T>::scalar(T{});
    };
  };
  return Sequence<T>(1, "cube-spike-squared", at, stream);
}

// x_k = -1 for odd k, 0 for even k.
template <typename T>
Sequence<T> seq_alt_neg() {
  auto at = [](std::uint64_t k) {
    return Point<T>::scalar(k % 2 == 1 ? scalar_traits<T>::from_int(-1) : T{});
  };
  return Sequence<T>(1, "alt-neg", at);
}

namespace detail {

template <typename T>
T spike_power_value(std::uint64_t j, const Rational& exponent);

template <>
inline double spike_power_value<double>(std::uint64_t j, const Rational& exponent) {
  return std::pow(static_cast<double>(j), to_double(exponent));
}

template <>
inline Rational spike_power_value<Rational>(std::uint64_t j, const Rational& exponent) {
  // construction enforces an integral exponent in exact mode
  return Rational(boost::multiprecision::pow(BigInt(j),
                                             static_cast<unsigned>(numerator(exponent))));
}

}  // namespace detail

// x_k = j^(2/p) when k = j^2, 0 otherwise. Exact mode is available only when
// 2/p is a positive integer.
template <typename T>
Sequence<T> seq_power_square_spike(const Rational& p) {
  if (!(p > 0)) throw PreconditionError("power-square-spike: p must be positive");
  const Rational exponent = Rational(2) / p;
  if (scalar_traits<T>::exact && denominator(exponent) != 1)
    throw ModeError("power-square-spike with non-integer 2/p requires floating mode (p=" +
                    format_rational(p) + ")");
  auto at = [exponent](std::uint64_t k) {
    const std::uint64_t j = isqrt(k);
    return Point<T>::scalar(j * j == k ? detail::spike_power_value<T>(j, exponent) : T{});
  };
  auto stream = [exponent] {
    return [exponent, j = std::uint64_t{1}, k = std::uint64_t{0}]() mutable {
      ++k;
      if (k == j * j) {
        auto v = Point<T>::scalar(detail::spike_power_value<T>(j, exponent));
        ++j;
        return v;
      }
      return Point<T>::scalar(T{});
    };
  };
  return Sequence<T>(1, "power-square-spike:p=" + format_rational(p), at, stream);
}

template <typename T>
Sequence<T> seq_constant(Point<T> value, std::string desc = "") {
  if (desc.empty()) desc = "constant:value=" + format_point(value);
  auto at = [value](std::uint64_t) { return value; };
  return Sequence<T>(value.dim(), std::move(desc), at);
}

// x_k = scale * base^k * dir
template <typename T>
Sequence<T> seq_geometric(const Rational& base, const Rational& scale, Point<T> dir) {
  const T b = scalar_traits<T>::from_rational(base);
  const T s = scalar_traits<T>::from_rational(scale);
  auto at = [b, s, dir](std::uint64_t k) {
    T factor = s;
    if constexpr (scalar_traits<T>::exact) {
      factor *= scalar_traits<T>::pow_p(b, Rational(k));
    } else {
      factor *= std::pow(b, static_cast<double>(k));
    }
    return dir * factor;
  };
  auto stream = [b, s, dir] {
    return [b, dir, acc = s]() mutable {
      acc *= b;
      return dir * acc;
    };
  };
  std::string desc = "geom:base=" + format_rational(base) + ",scale=" + format_rational(scale) +
                     ",dir=" + format_point(dir);
  return Sequence<T>(dir.dim(), std::move(desc), at, stream);
}

enum class FileFormat { ScalarLines, VectorCsv };

namespace detail {

template <typename T>
std::shared_ptr<std::vector<Point<T>>> load_sequence_file(const std::string& path,
                                                          FileFormat format) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open sequence file: " + path);
  auto data = std::make_shared<std::vector<Point<T>>>();
  std::string line;
  std::size_t lineno = 0;
  std::size_t dim = 0;
  while (std::getline(in, line)) {
    ++lineno;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (line.empty()) continue;
    Point<T> p;
    try {
      if (format == FileFormat::ScalarLines) {
        p = Point<T>::scalar(scalar_traits<T>::from_rational(parse_rational(line)));
      } else {
        std::stringstream row(line);
        std::string cell;
        while (std::getline(row, cell, ','))
          p.c.push_back(scalar_traits<T>::from_rational(parse_rational(cell)));
      }
    } catch (const ParseError& e) {
      throw ParseError(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
    if (dim == 0)
      dim = p.dim();
    else if (p.dim() != dim)
      throw ParseError(path + ":" + std::to_string(lineno) + ": expected " + std::to_string(dim) +
                       " columns, got " + std::to_string(p.dim()));
    data->push_back(std::move(p));
  }
  if (data->empty()) throw ParseError("sequence file is empty: " + path);
  return data;
}

}  // namespace detail

template <typename T>
Sequence<T> seq_from_file(const std::string& path, FileFormat format) {
  auto data = detail::load_sequence_file<T>(path, format);
  const std::size_t dim = data->front().dim();
  auto at = [data, path](std::uint64_t k) {
    if (k > data->size())
      throw OutOfRangeError("index " + std::to_string(k) + " beyond file length " +
                            std::to_string(data->size()) + " (" + path + ")");
    return (*data)[k - 1];
  };
  return Sequence<T>(dim, "file:" + path, at);
}

// Pointwise image of another rule; the image shares the source's streaming.
template <typename T>
Sequence<T> map_sequence(const Sequence<T>& src, std::size_t dim, std::string desc,
                         std::function<Point<T>(const Point<T>&)> f) {
  auto at = [src, f](std::uint64_t k) { return f(src.at(k)); };
  auto stream = [src, f] {
    return [cur = src.stream(), f]() mutable { return f(cur()); };
  };
  return Sequence<T>(dim, std::move(desc), at, stream);
}

// Named-parameter constructor used by the DSL front end.
template <typename T>
Sequence<T> make_builtin(const std::string& name,
                         const std::map<std::string, std::string>& params = {}) {
  const auto require = [&](const std::string& key) -> const std::string& {
    auto it = params.find(key);
    if (it == params.end())
      throw ParseError("generator '" + name + "' is missing required param '" + key + "'");
    return it->second;
  };
  if (name == "cube-spike") return seq_cube_spike<T>();
  if (name == "cube-spike-squared") return seq_cube_spike_squared<T>();
  if (name == "alt-neg") return seq_alt_neg<T>();
  if (name == "power-square-spike") return seq_power_square_spike<T>(parse_rational(require("p")));
  if (name == "constant") {
    Point<T> v = Point<T>::scalar(scalar_traits<T>::from_rational(parse_rational(require("value"))));
    return seq_constant<T>(std::move(v));
  }
  if (name == "geometric" || name == "geom") {
    const Rational base = parse_rational(require("base"));
    const Rational scale = params.count("scale") ? parse_rational(params.at("scale")) : Rational(1);
    Point<T> dir = Point<T>::scalar(scalar_traits<T>::from_int(1));
    return seq_geometric<T>(base, scale, std::move(dir));
  }
  if (name == "file") {
    FileFormat fmt = FileFormat::ScalarLines;
    if (params.count("format")) {
      const auto& f = params.at("format");
      if (f == "csv" || f == "vector-csv")
        fmt = FileFormat::VectorCsv;
      else if (f != "lines" && f != "scalar-lines")
        throw ParseError("unknown sequence file format: " + f);
    }
    return seq_from_file<T>(require("path"), fmt);
  }
  throw ParseError("unknown generator: '" + name + "'");
}

}  // namespace summability
