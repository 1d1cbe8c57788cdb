#pragma once

#include <charconv>
#include <cmath>
#include <cstdio>
#include <string>

#include "summability/rational.hpp"

namespace summability {

/// Numeric backend abstraction. The whole library is templated on the scalar
/// type: Rational gives bit-exact arithmetic, double gives fast IEEE-754
/// evaluation at desk scale. Mixing the two in one analysis is not supported.
template <typename T>
struct scalar_traits;

template <>
struct scalar_traits<double> {
  static constexpr bool exact = false;
  static double from_rational(const Rational& q) { return to_double(q); }
  static double from_int(std::int64_t v) { return static_cast<double>(v); }
  static double abs(double x) { return std::fabs(x); }
  static double to_double(double x) { return x; }

  // x^p for x >= 0.
  static double pow_p(double x, const Rational& p) {
    return std::pow(x, summability::to_double(p));
  }

  // Shortest decimal that round-trips.
  static std::string format(double x) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    if (ec != std::errc{}) return "nan";
    return std::string(buf, ptr);
  }
};

template <>
struct scalar_traits<Rational> {
  static constexpr bool exact = true;
  static Rational from_rational(const Rational& q) { return q; }
  static Rational from_int(std::int64_t v) { return Rational(v); }
  static Rational abs(const Rational& x) { return summability::abs(x); }
  static double to_double(const Rational& x) { return summability::to_double(x); }

  static Rational pow_p(const Rational& x, const Rational& p) {
    if (auto r = pow_exact(x, p)) return *r;
    throw ModeError("exact mode cannot represent " + format_rational(x) + "^" +
                    format_rational(p) + "; rerun in floating mode");
  }

  static std::string format(const Rational& x) { return format_rational(x); }
};

template <typename T>
std::string mode_name() {
  return scalar_traits<T>::exact ? "exact" : "float";
}

}  // namespace summability
