#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

#include "seqalloc/errors.hpp"

namespace seqalloc {

// All values and bundle utilities are exact rationals. Nothing in the library
// ever rounds through floating point.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// Canonical text form: "p" when the denominator is 1, otherwise "p/q".
inline std::string to_string(const Rational& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

namespace detail {
inline BigInt parse_bigint(const std::string& text, const std::string& whole) {
  try {
    return BigInt(text);
  } catch (const std::runtime_error&) {
    throw ValidationError("bad rational: '" + whole + "'");
  }
}
}  // namespace detail

/// Parses "p" or "p/q". Rejects empty parts, zero denominators and garbage.
inline Rational parse_rational(const std::string& text) {
  const auto slash = text.find('/');
  if (slash == std::string::npos) {
    return Rational(detail::parse_bigint(text, text));
  }
  const std::string num = text.substr(0, slash);
  const std::string den = text.substr(slash + 1);
  if (num.empty() || den.empty()) throw ValidationError("bad rational: '" + text + "'");
  BigInt d = detail::parse_bigint(den, text);
  if (d == 0) throw ValidationError("zero denominator in rational: '" + text + "'");
  return Rational(detail::parse_bigint(num, text), d);
}

}  // namespace seqalloc
