#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "summability/errors.hpp"

namespace summability {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt numerator(const Rational& q) { return boost::multiprecision::numerator(q); }
inline BigInt denominator(const Rational& q) { return boost::multiprecision::denominator(q); }

inline double to_double(const Rational& q) { return q.template convert_to<double>(); }

// "num/den" when the value is not an integer, plain integer otherwise.
inline std::string format_rational(const Rational& q) {
  if (denominator(q) == 1) return numerator(q).str();
  return numerator(q).str() + "/" + denominator(q).str();
}

// Accepts "a/b", integers, and plain decimals ("0.25", "-3.5").
inline Rational parse_rational(std::string_view text) {
  const std::string s{text};
  if (s.empty()) throw ParseError("empty numeric literal");
  const auto bad = [&] { return ParseError("malformed numeric literal: '" + s + "'"); };
  const auto parse_int = [&](std::string_view part) -> BigInt {
    if (part.empty()) throw bad();
    std::size_t start = (part[0] == '+' || part[0] == '-') ? 1 : 0;
    if (start == part.size()) throw bad();
    for (std::size_t i = start; i < part.size(); ++i)
      if (part[i] < '0' || part[i] > '9') throw bad();
    return BigInt(std::string{part});
  };

  if (auto slash = s.find('/'); slash != std::string::npos) {
    const BigInt num = parse_int(std::string_view{s}.substr(0, slash));
    const BigInt den = parse_int(std::string_view{s}.substr(slash + 1));
    if (den == 0) throw ParseError("zero denominator in '" + s + "'");
    return Rational(num, den);
  }
  if (auto dot = s.find('.'); dot != std::string::npos) {
    std::string_view head = std::string_view{s}.substr(0, dot);
    std::string_view frac = std::string_view{s}.substr(dot + 1);
    if (frac.empty()) throw bad();
    for (char c : frac)
      if (c < '0' || c > '9') throw bad();
    const bool negative = !head.empty() && head[0] == '-';
    BigInt whole = (head.empty() || head == "-" || head == "+") ? BigInt(0) : parse_int(head);
    if (negative && whole < 0) whole = -whole;
    BigInt scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    const BigInt value = whole * scale + BigInt(std::string{frac});
    return Rational(negative ? -value : value, scale);
  }
  return Rational(parse_int(s), 1);
}

// Largest r with r^n <= x; exact for arbitrary magnitude.
inline BigInt integer_nth_root_floor(const BigInt& x, unsigned n) {
  if (x < 0) throw PreconditionError("nth root of negative integer");
  if (n == 0) throw PreconditionError("zeroth root");
  if (x == 0 || x == 1 || n == 1) return x;
  const unsigned bits = static_cast<unsigned>(boost::multiprecision::msb(x)) + 1;
  BigInt hi = BigInt(1) << (bits / n + 1);
  BigInt lo = 0;
  while (lo < hi) {  // invariant: lo^n <= x < (hi+1)^n
    const BigInt mid = (lo + hi + 1) / 2;
    if (boost::multiprecision::pow(mid, n) <= x)
      lo = mid;
    else
      hi = mid - 1;
  }
  return lo;
}

inline std::optional<BigInt> integer_nth_root_exact(const BigInt& x, unsigned n) {
  BigInt r = integer_nth_root_floor(x, n);
  if (boost::multiprecision::pow(r, n) == x) return r;
  return std::nullopt;
}

// base^exp when the result is rational; nullopt otherwise. Requires base >= 0
// unless exp is an integer.
inline std::optional<Rational> pow_exact(const Rational& base, const Rational& exp) {
  BigInt e_num = numerator(exp);
  const BigInt e_den = denominator(exp);
  bool invert = false;
  if (e_num < 0) {
    if (base == 0) return std::nullopt;
    invert = true;
    e_num = -e_num;
  }
  if (base < 0 && e_den != 1) return std::nullopt;
  if (e_num > 1'000'000 || e_den > 64) return std::nullopt;  // absurd exponents
  const auto e = static_cast<unsigned>(e_num);
  BigInt num = boost::multiprecision::pow(numerator(base), e);
  BigInt den = boost::multiprecision::pow(denominator(base), e);
  if (e_den != 1) {
    const auto root = static_cast<unsigned>(e_den);
    const bool negative = num < 0;
    auto rn = integer_nth_root_exact(negative ? BigInt(-num) : num, root);
    auto rd = integer_nth_root_exact(den, root);
    if (!rn || !rd || negative) return std::nullopt;
    num = *rn;
    den = *rd;
  }
  Rational out(num, den);
  if (invert) out = Rational(1) / out;
  return out;
}

inline Rational abs(const Rational& q) { return q < 0 ? Rational(-q) : q; }

}  // namespace summability
