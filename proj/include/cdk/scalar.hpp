#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "cdk/errors.hpp"

namespace cdk {

// Exact arithmetic backend. Arbitrary precision, so simplex pivots and
// repeated renormalizations never overflow or round.
using rational = boost::multiprecision::cpp_rational;
using bigint = boost::multiprecision::cpp_int;

template <class S>
struct scalar_traits;

template <>
struct scalar_traits<double> {
  static constexpr bool is_exact = false;
  static constexpr const char* name = "float";
  static double to_double(double v) { return v; }
  static double from_double(double v) { return v; }
  static double from_int(long long v) { return static_cast<double>(v); }
  static double ratio(long long n, long long d) {
    return static_cast<double>(n) / static_cast<double>(d);
  }
};

template <>
struct scalar_traits<rational> {
  static constexpr bool is_exact = true;
  static constexpr const char* name = "exact";
  static double to_double(const rational& v) { return v.template convert_to<double>(); }
  // Every finite double is a dyadic rational; this conversion is exact.
  static rational from_double(double v) {
    if (v == 0.0) return rational(0);
    if (!std::isfinite(v)) throw structural_error("cannot convert non-finite value to rational");
    int exp = 0;
    double mant = std::frexp(v, &exp);            // v = mant * 2^exp, |mant| in [1/2, 1)
    auto imant = static_cast<long long>(std::ldexp(mant, 53));
    int e = exp - 53;
    if (e >= 0) return rational(bigint(imant) << e);
    return rational(bigint(imant), bigint(1) << (-e));
  }
  static rational from_int(long long v) { return rational(v); }
  static rational ratio(long long n, long long d) { return rational(n, d); }
};

template <class S>
inline double to_double(const S& v) {
  return scalar_traits<S>::to_double(v);
}

template <class S>
inline S from_double(double v) {
  return scalar_traits<S>::from_double(v);
}

template <class S>
inline S ratio(long long n, long long d) {
  return scalar_traits<S>::ratio(n, d);
}

template <class S>
inline S abs_value(const S& v) {
  using std::abs;
  return v < S(0) ? S(-v) : v;
}

// |v| <= tol, with tol interpreted exactly for exact scalars.
template <class S>
inline bool abs_le(const S& v, double tol) {
  if constexpr (scalar_traits<S>::is_exact) {
    if (tol == 0.0) return v == 0;
    return abs_value(v) <= scalar_traits<S>::from_double(tol);
  } else {
    return std::abs(v) <= tol;
  }
}

// True when v equals k/2^e for integers k, e with |e| <= max_bits and |k| small
// enough to trust as deliberate input. Used to gate exact-mode arithmetic.
inline bool is_small_dyadic(double v, int max_bits = 24) {
  if (!std::isfinite(v)) return false;
  if (v == 0.0) return true;
  if (std::abs(v) > std::ldexp(1.0, 40)) return false;
  double scaled = std::ldexp(v, max_bits);
  return scaled == std::floor(scaled);
}

// Round to 12 significant digits; reports print floats through this so that
// identical runs are byte-identical regardless of accumulated noise.
inline double round_sig12(double v) {
  if (!std::isfinite(v)) return v;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return std::strtod(buf, nullptr);
}

}  // namespace cdk
