#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <vector>

namespace qpend {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;
using Float50 = boost::multiprecision::cpp_bin_float_50;

inline double to_double(const BigRat& r) {
  // Convert through a 50-digit float so huge numerator/denominator pairs
  // (factorial ratios) do not overflow an intermediate double.
  return static_cast<double>(static_cast<Float50>(r));
}

inline BigInt factorial(unsigned n) {
  // Return by value: the cache reallocates as it grows, so handing out a
  // reference would dangle when a larger argument appears later in the same
  // expression.  thread_local keeps the parallel eta scans race-free.
  thread_local std::vector<BigInt> cache{BigInt(1)};
  while (cache.size() <= n) {
    cache.push_back(cache.back() * BigInt(cache.size()));
  }
  return cache[n];
}

// Exact value of the form q * sqrt(p) with q, p rational, p >= 0.
// Closed under multiplication; squaring gives back a plain rational.
struct SqrtRat {
  BigRat q{0};
  BigRat p{0};

  static SqrtRat zero() { return {BigRat(0), BigRat(0)}; }
  static SqrtRat rational(const BigRat& r) { return {r, BigRat(1)}; }

  bool is_zero() const { return q == 0 || p == 0; }
  BigRat squared() const { return q * q * p; }

  double value() const {
    if (is_zero()) return 0.0;
    Float50 v = static_cast<Float50>(q) * sqrt(static_cast<Float50>(p));
    return static_cast<double>(v);
  }

  friend SqrtRat operator*(const SqrtRat& a, const SqrtRat& b) {
    if (a.is_zero() || b.is_zero()) return zero();
    return {a.q * b.q, a.p * b.p};
  }
  friend SqrtRat operator*(const BigRat& c, const SqrtRat& a) {
    if (c == 0 || a.is_zero()) return zero();
    return {c * a.q, a.p};
  }
};

}  // namespace qpend
