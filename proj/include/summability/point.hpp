#pragma once

#include <boost/container/small_vector.hpp>

#include <cmath>
#include <initializer_list>
#include <string>

#include "summability/scalar.hpp"

namespace summability {

enum class Norm { Max, Euclidean };

inline std::string norm_name(Norm n) { return n == Norm::Max ? "max" : "euclidean"; }

/// A value in R^d. d is fixed per analysis; all points in one sequence share it.
template <typename T>
struct Point {
  using Coords = boost::container::small_vector<T, 4>;
  Coords c;

  Point() = default;
  explicit Point(std::size_t dim) : c(dim, T{}) {}
  Point(std::initializer_list<T> init) : c(init) {}
  explicit Point(Coords coords) : c(std::move(coords)) {}

  static Point scalar(T v) {
    Point p;
    p.c.push_back(std::move(v));
    return p;
  }

  std::size_t dim() const { return c.size(); }
  const T& operator[](std::size_t i) const { return c[i]; }
  T& operator[](std::size_t i) { return c[i]; }

  Point& operator+=(const Point& o) {
    for (std::size_t i = 0; i < c.size(); ++i) c[i] += o.c[i];
    return *this;
  }
  Point& operator-=(const Point& o) {
    for (std::size_t i = 0; i < c.size(); ++i) c[i] -= o.c[i];
    return *this;
  }
  Point& operator*=(const T& s) {
    for (auto& x : c) x *= s;
    return *this;
  }

  friend Point operator+(Point a, const Point& b) { return a += b; }
  friend Point operator-(Point a, const Point& b) { return a -= b; }
  friend Point operator*(Point a, const T& s) { return a *= s; }
  friend Point operator*(const T& s, Point a) { return a *= s; }
  friend bool operator==(const Point& a, const Point& b) { return a.c == b.c; }

  bool is_zero() const {
    for (const auto& x : c)
      if (x != T{}) return false;
    return true;
  }
};

template <typename T>
T max_abs(const Point<T>& v) {
  T m{};
  for (const auto& x : v.c) {
    T a = scalar_traits<T>::abs(x);
    if (a > m) m = a;
  }
  return m;
}

template <typename T>
T sum_squares(const Point<T>& v) {
  T s{};
  for (const auto& x : v.c) s += x * x;
  return s;
}

// ||v||^p without ever forming an irrational intermediate: under the max norm
// this is (max|v_i|)^p, under the euclidean norm (sum v_i^2)^(p/2).
template <typename T>
T norm_pow(const Point<T>& v, Norm norm, const Rational& p) {
  if (norm == Norm::Max) return scalar_traits<T>::pow_p(max_abs(v), p);
  return scalar_traits<T>::pow_p(sum_squares(v), p / 2);
}

// ||v|| >= eps, decided exactly in exact mode (squared comparison for the
// euclidean norm).
template <typename T>
bool norm_ge(const Point<T>& v, Norm norm, const T& eps) {
  if (norm == Norm::Max) return max_abs(v) >= eps;
  return sum_squares(v) >= eps * eps;
}

template <typename T>
bool norm_le(const Point<T>& v, Norm norm, const T& bound) {
  if (norm == Norm::Max) return max_abs(v) <= bound;
  return sum_squares(v) <= bound * bound;
}

// Numeric norm value for reports; exact only under the max norm.
template <typename T>
double norm_value(const Point<T>& v, Norm norm) {
  if (norm == Norm::Max) return scalar_traits<T>::to_double(max_abs(v));
  return std::sqrt(scalar_traits<T>::to_double(sum_squares(v)));
}

template <typename T>
Point<double> to_double_point(const Point<T>& v) {
  Point<double> out(v.dim());
  for (std::size_t i = 0; i < v.dim(); ++i) out[i] = scalar_traits<T>::to_double(v[i]);
  return out;
}

template <typename T>
std::string format_point(const Point<T>& v) {
  if (v.dim() == 1) return scalar_traits<T>::format(v[0]);
  std::string out = "(";
  for (std::size_t i = 0; i < v.dim(); ++i) {
    if (i) out += ",";
    out += scalar_traits<T>::format(v[i]);
  }
  return out + ")";
}

}  // namespace summability
