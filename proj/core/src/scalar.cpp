#include "manna/scalar.hpp"

#include <charconv>
#include <stdexcept>
#include <string>

namespace manna {
namespace {

using boost::multiprecision::cpp_int;

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

cpp_int parse_integer(std::string_view s) {
  bool negative = false;
  if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) throw std::invalid_argument("not an integer: " + std::string(s));
  s.remove_prefix(std::min(s.find_first_not_of('0'), s.size()));
  if (s.empty()) return cpp_int(0);
  cpp_int v{std::string(s)};
  return negative ? cpp_int(-v) : v;
}

cpp_int pow10(long e) {
  cpp_int r = 1;
  for (long k = 0; k < e; ++k) r *= 10;
  return r;
}

// Decimal literal with optional fraction and exponent.
Rational parse_decimal(std::string_view s) {
  bool negative = false;
  if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  long exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_text = s.substr(e + 1);
    if (!exp_text.empty() && exp_text.front() == '+') exp_text.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(exp_text.data(), exp_text.data() + exp_text.size(), exponent);
    if (ec != std::errc{} || ptr != exp_text.data() + exp_text.size())
      throw std::invalid_argument("bad exponent in number");
    s = s.substr(0, e);
  }
  std::string digits;
  long frac_digits = 0;
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view whole = s.substr(0, dot);
    std::string_view frac = s.substr(dot + 1);
    if ((!whole.empty() && !all_digits(whole)) || (!frac.empty() && !all_digits(frac)) ||
        (whole.empty() && frac.empty()))
      throw std::invalid_argument("bad decimal literal");
    digits = std::string(whole) + std::string(frac);
    frac_digits = static_cast<long>(frac.size());
  } else {
    if (!all_digits(s)) throw std::invalid_argument("bad number literal");
    digits = std::string(s);
  }
  // cpp_int reads a leading 0 as an octal prefix.
  digits.erase(0, std::min(digits.find_first_not_of('0'), digits.size()));
  cpp_int mantissa = digits.empty() ? cpp_int(0) : cpp_int(digits);
  if (negative) mantissa = -mantissa;
  long shift = exponent - frac_digits;
  if (shift >= 0) return Rational(mantissa * pow10(shift));
  return Rational(mantissa, pow10(-shift));
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = trim(text);
  if (s.empty()) throw std::invalid_argument("empty number");
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    cpp_int num = parse_integer(trim(s.substr(0, slash)));
    cpp_int den = parse_integer(trim(s.substr(slash + 1)));
    if (den == 0) throw std::invalid_argument("zero denominator");
    return Rational(num, den);
  }
  return parse_decimal(s);
}

std::string format_rational(const Rational& v) {
  cpp_int num = boost::multiprecision::numerator(v);
  cpp_int den = boost::multiprecision::denominator(v);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

Rational rational_from_double(double v) {
  if (!std::isfinite(v)) throw std::invalid_argument("non-finite value");
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc{}) throw std::invalid_argument("cannot format double");
  return parse_decimal(std::string_view(buf, static_cast<std::size_t>(ptr - buf)));
}

}  // namespace manna
