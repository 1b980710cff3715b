#pragma once

#include <cstdint>
#include <cstdio>
#include <string>

#include <boost/rational.hpp>

#include "fran/error.hpp"

// Under C++20 rewritten comparisons, boost::rational's mixed (rational, integer)
// operator== resolves to its own reversed form and recurses. Exact
// non-template overloads take precedence.
namespace boost {
#define FRAN_RATIONAL_EQ(T)                                                                                   \
  constexpr bool operator==(const rational<std::int64_t>& a, T b) { return a == rational<std::int64_t>(b); } \
  constexpr bool operator==(T b, const rational<std::int64_t>& a) { return a == rational<std::int64_t>(b); } \
  constexpr bool operator!=(const rational<std::int64_t>& a, T b) { return !(a == rational<std::int64_t>(b)); } \
  constexpr bool operator!=(T b, const rational<std::int64_t>& a) { return !(a == rational<std::int64_t>(b)); }
FRAN_RATIONAL_EQ(int)
FRAN_RATIONAL_EQ(long)
FRAN_RATIONAL_EQ(long long)
#undef FRAN_RATIONAL_EQ
}  // namespace boost

namespace fran {

using Rational = boost::rational<std::int64_t>;

inline bool is_integer(const Rational& q) { return q.denominator() == 1; }

inline std::int64_t floor_of(const Rational& q) {
  std::int64_t f = q.numerator() / q.denominator();
  if (q.numerator() < 0 && f * q.denominator() != q.numerator()) --f;
  return f;
}

inline std::int64_t ceil_of(const Rational& q) {
  return is_integer(q) ? q.numerator() : floor_of(q) + 1;
}

// "p/q", or just "p" for integers.
inline std::string to_exact_string(const Rational& q) {
  std::string s = std::to_string(q.numerator());
  if (q.denominator() != 1) s += "/" + std::to_string(q.denominator());
  return s;
}

// Twelve significant digits, shortest form ("1.875", "0.75", "0").
inline std::string to_decimal_string(const Rational& q) {
  long double v = static_cast<long double>(q.numerator()) / static_cast<long double>(q.denominator());
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12Lg", v);
  return buf;
}

// Accepts "p", "p/q", or a finite decimal such as "0.5" or "2.25".
inline Rational parse_rational(const std::string& text) {
  auto fail = [&] { return Error(Errc::InvalidParams, "cannot parse rational '" + text + "'"); };
  if (text.empty()) throw fail();
  try {
    if (auto slash = text.find('/'); slash != std::string::npos) {
      std::size_t used = 0;
      std::int64_t p = std::stoll(text.substr(0, slash), &used);
      if (used != slash) throw fail();
      std::string den = text.substr(slash + 1);
      std::int64_t q = std::stoll(den, &used);
      if (used != den.size() || q == 0) throw fail();
      return Rational(p, q);
    }
    if (auto dot = text.find('.'); dot != std::string::npos) {
      std::string whole = text.substr(0, dot);
      std::string frac = text.substr(dot + 1);
      if (frac.empty() || frac.size() > 12) throw fail();
      for (char c : frac)
        if (c < '0' || c > '9') throw fail();
      bool negative = !whole.empty() && whole[0] == '-';
      std::int64_t w = (whole.empty() || whole == "-") ? 0 : std::stoll(whole);
      std::int64_t scale = 1;
      for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
      Rational f(std::stoll(frac), scale);
      return negative ? Rational(w) - f : Rational(w) + f;
    }
    std::size_t used = 0;
    std::int64_t p = std::stoll(text, &used);
    if (used != text.size()) throw fail();
    return Rational(p);
  } catch (const std::logic_error&) {
    throw fail();
  }
}

}  // namespace fran
