#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>

#include "error.hpp"

namespace codesparse {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt numerator_of(const Rational& r) { return boost::multiprecision::numerator(r); }
inline BigInt denominator_of(const Rational& r) { return boost::multiprecision::denominator(r); }

/// Always "num/den", including integers ("3/1").
inline std::string to_fraction_string(const Rational& r) {
  return numerator_of(r).str() + "/" + denominator_of(r).str();
}

/// Truncated decimal rendering for display only.
inline std::string to_decimal_string(const Rational& r, unsigned digits = 6) {
  BigInt num = numerator_of(r);
  BigInt den = denominator_of(r);
  bool neg = num < 0;
  if (neg) num = -num;
  BigInt scale = boost::multiprecision::pow(BigInt(10), digits);
  BigInt scaled = (num * scale + den / 2) / den;
  BigInt whole = scaled / scale;
  BigInt frac = scaled % scale;
  std::string f = frac.str();
  if (f.size() < digits) f.insert(0, digits - f.size(), '0');
  std::string out = (neg && scaled != 0 ? "-" : "") + whole.str();
  if (digits > 0) out += "." + f;
  return out;
}

namespace detail {
inline bool parse_bigint(std::string_view s, BigInt& out) {
  if (s.empty()) return false;
  std::size_t i = 0;
  bool neg = false;
  if (s[0] == '-' || s[0] == '+') {
    neg = s[0] == '-';
    i = 1;
  }
  if (i == s.size()) return false;
  BigInt v = 0;
  for (; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') return false;
    v = v * 10 + (s[i] - '0');
  }
  out = neg ? BigInt(-v) : v;
  return true;
}
}  // namespace detail

/// Accepts "a", "a/b" and exact decimals such as "0.25". Throws ParseError.
inline Rational parse_rational(std::string_view s) {
  auto fail = [&]() -> Rational { throw Error(Errc::ParseError, "not a rational: '" + std::string(s) + "'"); };
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    BigInt a, b;
    if (!detail::parse_bigint(s.substr(0, slash), a) || !detail::parse_bigint(s.substr(slash + 1), b)) return fail();
    if (b == 0) throw Error(Errc::DivisionByZero, "zero denominator in '" + std::string(s) + "'");
    return Rational(a, b);
  }
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string digits(s.substr(0, dot));
    std::string_view frac = s.substr(dot + 1);
    if (frac.empty() || frac.find_first_not_of("0123456789") != std::string_view::npos) return fail();
    bool neg = !digits.empty() && digits[0] == '-';
    if (digits.empty() || digits == "-" || digits == "+") digits += "0";
    BigInt whole, f;
    if (!detail::parse_bigint(digits, whole) || !detail::parse_bigint(frac, f)) return fail();
    BigInt den = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(frac.size()));
    Rational r = Rational(whole < 0 ? BigInt(-whole) : whole) + Rational(f, den);
    return neg ? Rational(-r) : r;
  }
  BigInt a;
  if (!detail::parse_bigint(s, a)) return fail();
  return Rational(a);
}

inline BigInt floor_of(const Rational& r) {
  BigInt n = numerator_of(r), d = denominator_of(r);
  BigInt q = n / d;
  if (n < 0 && q * d != n) q -= 1;
  return q;
}

inline BigInt ceil_of(const Rational& r) { return -floor_of(-r); }

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

inline constexpr int kDyadicBits = 20;

/// Rounds x to the nearest multiple of 2^-20.
inline Rational dyadic(double x) {
  double scaled = std::nearbyint(std::ldexp(x, kDyadicBits));
  return Rational(BigInt(static_cast<long long>(scaled)), BigInt(1) << kDyadicBits);
}

/// Base-2 logarithm at 2^-20 precision. Exact for powers of two.
inline Rational log2_dyadic(const Rational& x) {
  if (x <= 0) throw Error(Errc::InvalidArgument, "log of non-positive value");
  // Split off the integer part of the exponent so huge rationals stay finite.
  BigInt n = numerator_of(x), d = denominator_of(x);
  long long shift = static_cast<long long>(boost::multiprecision::msb(n)) -
                    static_cast<long long>(boost::multiprecision::msb(d));
  Rational m = shift >= 0 ? x / Rational(BigInt(1) << shift) : x * Rational(BigInt(1) << -shift);
  return Rational(shift) + dyadic(std::log2(to_double(m)));
}

inline Rational log2_dyadic(std::uint64_t x) { return log2_dyadic(Rational(x)); }

/// log2(log2(x)) clamped below at 1; the formulas that use it degenerate to 0 at x = 2.
inline Rational loglog2_clamped(const Rational& x) {
  Rational l = log2_dyadic(x);
  if (l <= 2) return Rational(1);
  Rational ll = log2_dyadic(l);
  return ll < 1 ? Rational(1) : ll;
}

inline BigInt isqrt(const BigInt& v) { return boost::multiprecision::sqrt(v); }

inline BigInt binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  BigInt r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace codesparse
