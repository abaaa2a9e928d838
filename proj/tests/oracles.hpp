#pragma once

// Brute-force reference implementations. Deliberately naive: no incremental updates, no
// elimination, no shared code with the library beyond the data types.

#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "codesparse/codesparse.hpp"

namespace oracle {

using codesparse::CoordinateWeights;
using codesparse::GeneratorMatrix;
using codesparse::Rational;
using codesparse::Sparsifier;
using codesparse::Vec;

inline std::uint64_t ipow(std::uint64_t b, std::size_t e) {
  std::uint64_t r = 1;
  while (e--) r *= b;
  return r;
}

inline Vec message(std::uint64_t idx, std::uint32_t p, std::size_t k) {
  Vec x(k);
  for (std::size_t j = 0; j < k; ++j) {
    x[j] = static_cast<std::uint32_t>(idx % p);
    idx /= p;
  }
  return x;
}

inline Vec naive_encode(const GeneratorMatrix& g, const Vec& x) {
  Vec c(g.rows());
  for (std::size_t i = 0; i < g.rows(); ++i) {
    std::uint64_t s = 0;
    for (std::size_t j = 0; j < g.cols(); ++j) s += static_cast<std::uint64_t>(g(i, j)) * x[j];
    c[i] = static_cast<std::uint32_t>(s % g.q());
  }
  return c;
}

/// Every distinct codeword, from all p^k messages.
inline std::set<Vec> codewords(const GeneratorMatrix& g) {
  std::set<Vec> out;
  const std::uint64_t total = ipow(g.q(), g.cols());
  for (std::uint64_t t = 0; t < total; ++t) out.insert(naive_encode(g, message(t, g.q(), g.cols())));
  return out;
}

inline std::size_t hamming(const Vec& c) {
  std::size_t w = 0;
  for (auto v : c) w += v != 0;
  return w;
}

inline Rational weighted(const Vec& c, const std::vector<Rational>& w) {
  Rational s = 0;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (c[i]) s += w[i];
  return s;
}

/// log_p of the number of distinct codewords.
inline std::size_t rank(const GeneratorMatrix& g) {
  std::size_t n = codewords(g).size(), r = 0;
  while (n > 1) {
    n /= g.q();
    ++r;
  }
  return r;
}

inline std::map<std::size_t, std::uint64_t> histogram(const GeneratorMatrix& g) {
  std::map<std::size_t, std::uint64_t> h;
  for (const auto& c : codewords(g)) ++h[hamming(c)];
  return h;
}

/// Max density over subcodes C_T = {c : supp(c) within T}, trying every T (n <= 14).
inline Rational max_density(const GeneratorMatrix& g) {
  auto all = codewords(g);
  Rational best = 0;
  for (std::uint64_t t = 1; t < (1ULL << g.rows()); ++t) {
    std::size_t cnt = 0;
    std::uint64_t supp = 0;
    for (const auto& c : all) {
      std::uint64_t s = 0;
      for (std::size_t i = 0; i < c.size(); ++i)
        if (c[i]) s |= 1ULL << i;
      if ((s & ~t) == 0) {
        ++cnt;
        supp |= s;
      }
    }
    std::size_t dim = 0;
    while (cnt > 1) {
      cnt /= g.q();
      ++dim;
    }
    if (dim == 0) continue;
    Rational d(static_cast<long long>(dim), static_cast<long long>(std::popcount(supp)));
    if (d > best) best = d;
  }
  return best;
}

/// Number of distinct nonzero codewords of weight <= bound.
inline std::uint64_t light_count(const GeneratorMatrix& g, std::uint64_t bound) {
  std::uint64_t n = 0;
  for (const auto& c : codewords(g)) {
    std::size_t w = hamming(c);
    if (w > 0 && w <= bound) ++n;
  }
  return n;
}

/// Exhaustive (1 +- eps) check with plain rational sums.
inline bool sparsifier_ok(const GeneratorMatrix& g, const std::vector<Rational>& base, const Sparsifier& sp,
                          const Rational& eps) {
  std::vector<Rational> spw(g.rows(), Rational(0));
  for (std::size_t t = 0; t < sp.size(); ++t) spw[sp.coords[t]] = sp.weights[t];
  for (const auto& c : codewords(g)) {
    Rational a = weighted(c, base), b = weighted(c, spw);
    if (b < (1 - eps) * a || b > (1 + eps) * a) return false;
  }
  return true;
}

inline Rational cut(const codesparse::Graph& g, std::uint64_t mask) {
  Rational s = 0;
  for (const auto& e : g.edges)
    if (((mask >> e.u) & 1) != ((mask >> e.v) & 1)) s += e.w;
  return s;
}

inline Rational min_cut(const codesparse::Graph& g) {
  Rational best = -1;
  for (std::uint64_t m = 1; m + 1 < (1ULL << g.n); ++m) {
    Rational c = cut(g, m);
    if (best < 0 || c < best) best = c;
  }
  return best;
}

inline Rational hypercut(const codesparse::Hypergraph& h, std::uint64_t mask) {
  Rational s = 0;
  for (std::size_t e = 0; e < h.edges.size(); ++e) {
    std::size_t in = 0;
    for (auto v : h.edges[e]) in += (mask >> v) & 1;
    if (in > 0 && in < h.edges[e].size()) s += h.weight(e);
  }
  return s;
}

/// Eigenvalue of the character chi_x, read off the dense Laplacian row-by-row.
inline Rational laplacian_eigenvalue(const codesparse::CayleySpec& s, std::uint64_t x) {
  const std::uint64_t N = 1ULL << s.k;
  auto chi = [&](std::uint64_t v) { return (std::popcount(v & x) % 2) ? -1 : 1; };
  auto w = [&](std::size_t i) { return s.weights.empty() ? Rational(1) : s.weights[i]; };
  std::optional<Rational> lambda;
  for (std::uint64_t v = 0; v < N; ++v) {
    // (L chi)(v) = deg(v) chi(v) - sum_g w_g chi(v + g)
    Rational lv = 0;
    for (std::size_t i = 0; i < s.generators.size(); ++i) lv += w(i) * (chi(v) - chi(v ^ s.generators[i]));
    Rational l = lv / chi(v);
    if (!lambda) lambda = l;
    else if (*lambda != l) return Rational(-1);
  }
  return *lambda;
}

}  // namespace oracle
