#pragma once

#include <cstdint>
#include <string>

#include "error.hpp"

namespace codesparse {

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t d = 3; d * d <= n; d += 2)
    if (n % d == 0) return false;
  return true;
}

/// Least prime q >= k. By Bertrand's postulate q <= 2k.
inline std::uint64_t smallest_prime_at_least(std::uint64_t k) {
  if (k < 2) throw Error(Errc::InvalidArgument, "smallest_prime_at_least needs k >= 2");
  std::uint64_t q = k;
  while (!is_prime(q)) ++q;
  return q;
}

class PrimeField {
 public:
  static constexpr std::uint64_t kMaxModulus = 1ULL << 31;

  explicit PrimeField(std::uint64_t p) : p_(static_cast<std::uint32_t>(p)) {
    if (p > kMaxModulus || !is_prime(p))
      throw Error(Errc::InvalidArgument, "modulus " + std::to_string(p) + " is not a prime <= 2^31");
  }

  std::uint32_t modulus() const noexcept { return p_; }

  std::uint32_t reduce(std::int64_t v) const noexcept {
    std::int64_t r = v % static_cast<std::int64_t>(p_);
    return static_cast<std::uint32_t>(r < 0 ? r + p_ : r);
  }
  std::uint32_t add(std::uint32_t a, std::uint32_t b) const noexcept {
    std::uint64_t s = static_cast<std::uint64_t>(a) + b;
    return static_cast<std::uint32_t>(s >= p_ ? s - p_ : s);
  }
  std::uint32_t sub(std::uint32_t a, std::uint32_t b) const noexcept { return a >= b ? a - b : a + (p_ - b); }
  std::uint32_t neg(std::uint32_t a) const noexcept { return a == 0 ? 0 : p_ - a; }
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const noexcept {
    return static_cast<std::uint32_t>(static_cast<std::uint64_t>(a) * b % p_);
  }
  std::uint32_t pow(std::uint32_t a, std::uint64_t e) const noexcept {
    std::uint32_t r = 1 % p_;
    while (e) {
      if (e & 1) r = mul(r, a);
      a = mul(a, a);
      e >>= 1;
    }
    return r;
  }
  std::uint32_t inv(std::uint32_t a) const {
    if (a % p_ == 0) throw Error(Errc::DivisionByZero, "inverse of zero in F_" + std::to_string(p_));
    return pow(a, p_ - 2);
  }

  friend bool operator==(const PrimeField&, const PrimeField&) = default;

 private:
  std::uint32_t p_;
};

/// Canonical representative in [0, p) paired with its field.
class FieldElement {
 public:
  FieldElement(const PrimeField& f, std::int64_t v) : f_(f), v_(f.reduce(v)) {}

  std::uint32_t value() const noexcept { return v_; }
  const PrimeField& field() const noexcept { return f_; }

  FieldElement operator+(const FieldElement& o) const { return raw(f_.add(v_, same(o).v_)); }
  FieldElement operator-(const FieldElement& o) const { return raw(f_.sub(v_, same(o).v_)); }
  FieldElement operator*(const FieldElement& o) const { return raw(f_.mul(v_, same(o).v_)); }
  FieldElement operator-() const { return raw(f_.neg(v_)); }
  FieldElement inv() const { return raw(f_.inv(v_)); }
  FieldElement pow(std::uint64_t e) const { return raw(f_.pow(v_, e)); }

  friend bool operator==(const FieldElement& a, const FieldElement& b) {
    return a.f_ == b.f_ && a.v_ == b.v_;
  }

 private:
  FieldElement raw(std::uint32_t v) const { return FieldElement(f_, v); }
  const FieldElement& same(const FieldElement& o) const {
    if (!(o.f_ == f_))
      throw Error(Errc::MixedFields, "F_" + std::to_string(f_.modulus()) + " vs F_" + std::to_string(o.f_.modulus()));
    return o;
  }

  PrimeField f_;
  std::uint32_t v_;
};

}  // namespace codesparse
