#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "code.hpp"
#include "error.hpp"
#include "rational.hpp"
#include "sparsify.hpp"

namespace codesparse {

/// Cayley graph on F_2^k. Generator bit j is coordinate j.
struct CayleySpec {
  std::size_t k = 0;
  std::vector<std::uint64_t> generators;
  std::vector<Rational> weights;  // empty means unit weights

  Rational weight(std::size_t i) const { return weights.empty() ? Rational(1) : weights[i]; }

  void validate() const {
    if (k > 63) throw Error(Errc::InvalidArgument, "k must be at most 63");
    if (!weights.empty() && weights.size() != generators.size())
      throw Error(Errc::DimensionMismatch, "generator weights vs generators");
    std::set<std::uint64_t> seen;
    for (std::size_t i = 0; i < generators.size(); ++i) {
      if (generators[i] == 0) throw Error(Errc::InvalidArgument, "generator " + std::to_string(i) + " is zero");
      if (generators[i] >> k) throw Error(Errc::IndexOutOfRange, "generator " + std::to_string(i) + " exceeds k bits");
      if (!seen.insert(generators[i]).second)
        throw Error(Errc::InvalidArgument, "generator " + std::to_string(i) + " repeated");
      if (weight(i) <= 0) throw Error(Errc::InvalidArgument, "generator " + std::to_string(i) + " weight");
    }
  }
  friend bool operator==(const CayleySpec&, const CayleySpec&) = default;
};

namespace cayley {

/// Every nonzero vector of F_2^k; its generator code is the simplex code.
inline CayleySpec complete(std::size_t k) {
  CayleySpec s{k, {}, {}};
  for (std::uint64_t v = 1; v < (1ULL << k); ++v) s.generators.push_back(v);
  return s;
}

inline CayleySpec hypercube(std::size_t k) {
  CayleySpec s{k, {}, {}};
  for (std::size_t j = 0; j < k; ++j) s.generators.push_back(1ULL << j);
  return s;
}

}  // namespace cayley

inline GeneratorMatrix generator_code(const CayleySpec& s) {
  s.validate();
  GeneratorMatrix g(PrimeField(2), s.generators.size(), s.k);
  for (std::size_t i = 0; i < s.generators.size(); ++i)
    for (std::size_t j = 0; j < s.k; ++j) g.set(i, j, (s.generators[i] >> j) & 1);
  return g;
}

inline CoordinateWeights generator_weights(const CayleySpec& s) {
  std::vector<Rational> w;
  for (std::size_t i = 0; i < s.generators.size(); ++i) w.push_back(s.weight(i));
  return CoordinateWeights(std::move(w));
}

/// lambda_x = 2 wt_w(G x), indexed by x read as an integer.
inline std::vector<Rational> laplacian_spectrum(const CayleySpec& s, std::uint64_t budget = kDefaultEnumerationBudget) {
  GeneratorMatrix g = generator_code(s);
  CoordinateWeights w = generator_weights(s);
  if (saturating_power(2, s.k) > budget) throw Error(Errc::BudgetExceeded, "2^k exceeds the enumeration budget");
  std::vector<Rational> out;
  out.reserve(std::size_t{1} << s.k);
  Vec x(s.k);
  for (std::uint64_t xi = 0; xi < (1ULL << s.k); ++xi) {
    for (std::size_t j = 0; j < s.k; ++j) x[j] = (xi >> j) & 1;
    out.push_back(2 * weight(encode(g, x), w));
  }
  return out;
}

/// lambda_x = sum_r w_r (1 - (-1)^<x, r>).
inline std::vector<Rational> laplacian_spectrum_characters(const CayleySpec& s,
                                                           std::uint64_t budget = kDefaultEnumerationBudget) {
  s.validate();
  if (saturating_power(2, s.k) > budget) throw Error(Errc::BudgetExceeded, "2^k exceeds the enumeration budget");
  std::vector<Rational> out;
  out.reserve(std::size_t{1} << s.k);
  for (std::uint64_t x = 0; x < (1ULL << s.k); ++x) {
    Rational l = 0;
    for (std::size_t i = 0; i < s.generators.size(); ++i) {
      int chi = (std::popcount(x & s.generators[i]) % 2) ? -1 : 1;
      l += s.weight(i) * (1 - chi);
    }
    out.push_back(l);
  }
  return out;
}

/// Compares spectra entry by entry: zero must stay zero, the rest within (1 +- eps).
inline VerificationReport verify_spectrum(const std::vector<Rational>& base, const std::vector<Rational>& approx,
                                          const Rational& eps) {
  if (base.size() != approx.size()) throw Error(Errc::DimensionMismatch, "spectrum sizes differ");
  VerificationReport rep;
  for (std::size_t x = 0; x < base.size(); ++x) {
    ++rep.checked;
    bool ok;
    if (base[x] == 0) {
      ok = approx[x] == 0;
    } else {
      Rational rel = abs(approx[x] - base[x]) / base[x];
      if (rel > rep.max_relative_error) rep.max_relative_error = rel;
      ok = rel <= eps;
    }
    if (!ok && rep.pass) {
      rep.pass = false;
      rep.witness = "x=" + std::to_string(x) + ": eigenvalue " + to_fraction_string(base[x]) + " became " +
                    to_fraction_string(approx[x]);
    }
  }
  return rep;
}

struct CayleySparsifyResult {
  CayleySpec sparsifier;
  std::vector<std::size_t> origin;
};

inline CayleySparsifyResult sparsify_cayley(const CayleySpec& s, const SparsifyParams& p) {
  s.validate();
  if (s.k < 1) throw Error(Errc::InvalidArgument, "k must be at least 1");
  Sparsifier sp = final_code_sparsify(generator_code(s), generator_weights(s), p);
  CayleySparsifyResult res;
  res.sparsifier.k = s.k;
  for (std::size_t t = 0; t < sp.size(); ++t) {
    res.sparsifier.generators.push_back(s.generators[sp.coords[t]]);
    res.sparsifier.weights.push_back(sp.weights[t]);
    res.origin.push_back(sp.coords[t]);
  }
  return res;
}

}  // namespace codesparse
