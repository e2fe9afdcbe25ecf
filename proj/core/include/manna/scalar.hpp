#pragma once

#include <cmath>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace manna {

/// Exact rational used by the enumerators' golden paths. Expression templates
/// are disabled so the type behaves like a plain value in generic code.
using Rational = boost::multiprecision::number<boost::multiprecision::cpp_rational_backend,
                                               boost::multiprecision::et_off>;

template <class T>
struct ScalarTraits;

template <>
struct ScalarTraits<double> {
  static constexpr bool exact = false;
  static double to_double(double v) { return v; }
  static double from_double(double v) { return v; }
};

template <>
struct ScalarTraits<Rational> {
  static constexpr bool exact = true;
  static double to_double(const Rational& v) { return v.convert_to<double>(); }
  static Rational from_double(double v);
};

template <class T>
double to_double(const T& v) {
  return ScalarTraits<T>::to_double(v);
}

inline double abs_value(double v) { return std::fabs(v); }
inline Rational abs_value(const Rational& v) { return v < 0 ? Rational(-v) : v; }

/// Parses "p/q", an integer, or a decimal literal ("0.125", "-1e-3") exactly.
/// Throws std::invalid_argument on malformed input or a zero denominator.
Rational parse_rational(std::string_view text);

/// Canonical text: "p/q" in lowest terms, or "p" when the denominator is 1.
std::string format_rational(const Rational& v);

/// The shortest decimal that round-trips `v`, read back exactly.
Rational rational_from_double(double v);

inline Rational ScalarTraits<Rational>::from_double(double v) { return rational_from_double(v); }

}  // namespace manna
