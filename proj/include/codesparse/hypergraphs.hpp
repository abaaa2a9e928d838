#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "code.hpp"
#include "counting.hpp"
#include "error.hpp"
#include "field.hpp"
#include "graphs.hpp"
#include "random.hpp"
#include "rational.hpp"
#include "sparsify.hpp"

namespace codesparse {

struct Hypergraph {
  std::size_t n = 0;
  std::vector<std::vector<std::size_t>> edges;  // each sorted, distinct members
  std::vector<Rational> weights;                // empty means unit weights

  Rational weight(std::size_t e) const { return weights.empty() ? Rational(1) : weights[e]; }

  void validate() const {
    if (!weights.empty() && weights.size() != edges.size())
      throw Error(Errc::DimensionMismatch, "hyperedge weights vs hyperedges");
    for (std::size_t e = 0; e < edges.size(); ++e) {
      const auto& ed = edges[e];
      if (ed.size() < 2) throw Error(Errc::InvalidArgument, "hyperedge " + std::to_string(e) + " has fewer than 2 vertices");
      for (std::size_t t = 0; t < ed.size(); ++t) {
        if (ed[t] >= n) throw Error(Errc::IndexOutOfRange, "hyperedge " + std::to_string(e) + " vertex");
        if (t && ed[t] <= ed[t - 1])
          throw Error(Errc::InvalidArgument, "hyperedge " + std::to_string(e) + " not strictly increasing");
      }
      if (weight(e) <= 0) throw Error(Errc::InvalidArgument, "hyperedge " + std::to_string(e) + " weight");
    }
  }
  friend bool operator==(const Hypergraph&, const Hypergraph&) = default;
};

namespace hypergraphs {

/// m hyperedges, sizes uniform in [min_size, max_size], members uniform without replacement.
inline Hypergraph random(std::size_t n, std::size_t m, std::size_t min_size, std::size_t max_size, std::uint64_t seed) {
  Rng rng(seed);
  Hypergraph h{n, {}, {}};
  max_size = std::min(max_size, n);
  for (std::size_t e = 0; e < m; ++e) {
    std::size_t sz = min_size + static_cast<std::size_t>(rng.below(max_size - min_size + 1));
    std::vector<std::size_t> perm(n);
    for (std::size_t v = 0; v < n; ++v) perm[v] = v;
    for (std::size_t t = 0; t < sz; ++t) std::swap(perm[t], perm[t + rng.below(n - t)]);
    std::vector<std::size_t> ed(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(sz));
    std::sort(ed.begin(), ed.end());
    h.edges.push_back(std::move(ed));
  }
  return h;
}

}  // namespace hypergraphs

inline Rational hypergraph_cut_value(const Hypergraph& h, const std::vector<bool>& in_s) {
  if (in_s.size() != h.n) throw Error(Errc::DimensionMismatch, "side vector vs n");
  Rational s = 0;
  for (std::size_t e = 0; e < h.edges.size(); ++e) {
    std::size_t in = 0;
    for (auto v : h.edges[e]) in += in_s[v];
    if (in && in < h.edges[e].size()) s += h.weight(e);
  }
  return s;
}

/// Row per hyperedge: 1 on all members but the largest, q - |e| + 1 on the largest. A row
/// vanishes on 1_S exactly when the hyperedge is not cut.
inline GeneratorMatrix hypergraph_code_over(const Hypergraph& h, std::uint32_t q) {
  h.validate();
  PrimeField f(q);
  GeneratorMatrix g(f, h.edges.size(), h.n);
  for (std::size_t e = 0; e < h.edges.size(); ++e) {
    const auto& ed = h.edges[e];
    if (ed.size() > q)
      throw Error(Errc::HyperedgeTooLarge, "hyperedge " + std::to_string(e) + " has " + std::to_string(ed.size()) +
                                               " members but q=" + std::to_string(q));
    for (std::size_t t = 0; t + 1 < ed.size(); ++t) g.set(e, ed[t], 1);
    g.set(e, ed.back(), f.reduce(static_cast<std::int64_t>(q) - static_cast<std::int64_t>(ed.size()) + 1));
  }
  return g;
}

struct HypergraphCode {
  GeneratorMatrix g;
  std::uint32_t q;
  bool fallback;  // q lowered to fit the enumeration budget
};

/// q = smallest prime >= n. When q^rank is beyond the enumeration budget, the smallest prime
/// >= the largest hyperedge keeps the encoding sound and is used instead.
inline HypergraphCode hypergraph_code(const Hypergraph& h, std::uint64_t budget = kDefaultEnumerationBudget) {
  h.validate();
  std::uint32_t q = static_cast<std::uint32_t>(smallest_prime_at_least(std::max<std::size_t>(h.n, 2)));
  GeneratorMatrix g = hypergraph_code_over(h, q);
  if (saturating_power(q, rank(g)) <= budget) return {g, q, false};
  std::size_t largest = 2;
  for (const auto& e : h.edges) largest = std::max(largest, e.size());
  std::uint32_t q2 = static_cast<std::uint32_t>(smallest_prime_at_least(largest));
  if (q2 >= q) return {g, q, false};
  GeneratorMatrix g2 = hypergraph_code_over(h, q2);
  return {g2, q2, true};
}

inline CoordinateWeights hyperedge_weights(const Hypergraph& h) {
  std::vector<Rational> w;
  for (std::size_t e = 0; e < h.edges.size(); ++e) w.push_back(h.weight(e));
  return CoordinateWeights(std::move(w));
}

/// Exhaustive (1 +- eps) comparison of every cut of h and hs (same vertex set).
inline VerificationReport verify_hypergraph_sparsifier(const Hypergraph& h, const Hypergraph& hs, const Rational& eps) {
  if (h.n != hs.n) throw Error(Errc::DimensionMismatch, "vertex counts differ");
  if (h.n > 24) throw Error(Errc::BudgetExceeded, "too many vertices for exhaustive cut check");
  VerificationReport rep;
  if (h.n < 2) return rep;
  auto scaled = [](const Hypergraph& x) {
    std::vector<Rational> w;
    for (std::size_t e = 0; e < x.edges.size(); ++e) w.push_back(x.weight(e));
    return detail::ScaledWeights(w);
  };
  detail::ScaledWeights ws = scaled(h), wt = scaled(hs);
  const Hypergraph* parts[2] = {&h, &hs};
  std::vector<std::vector<std::pair<int, std::size_t>>> inc(h.n);
  std::vector<std::size_t> cnt[2] = {std::vector<std::size_t>(h.edges.size(), 0),
                                     std::vector<std::size_t>(hs.edges.size(), 0)};
  for (int which = 0; which < 2; ++which)
    for (std::size_t e = 0; e < parts[which]->edges.size(); ++e)
      for (auto v : parts[which]->edges[e]) inc[v].push_back({which, e});
  std::vector<bool> side(h.n, false);
  BigInt sum[2] = {0, 0};
  const BigInt lo = denominator_of(eps) - numerator_of(eps), hi = denominator_of(eps) + numerator_of(eps),
               ed = denominator_of(eps);
  detail::walk_cuts(
      h.n,
      [&](std::size_t v) {
        side[v] = !side[v];
        for (auto [which, e] : inc[v]) {
          std::size_t size = parts[which]->edges[e].size();
          std::size_t& c = cnt[which][e];
          bool was = c > 0 && c < size;
          c = side[v] ? c + 1 : c - 1;
          bool now = c > 0 && c < size;
          const BigInt& w = which ? wt.num[e] : ws.num[e];
          if (was && !now) sum[which] -= w;
          if (!was && now) sum[which] += w;
        }
      },
      [&]() {
        ++rep.checked;
        BigInt base = sum[0] * wt.den, sp = sum[1] * ws.den;
        if (base == 0) {
          if (sp != 0 && rep.pass) {
            rep.pass = false;
            rep.witness = "uncut vertex set is cut in the sparsifier";
          }
          return;
        }
        BigInt diff = sp > base ? BigInt(sp - base) : BigInt(base - sp);
        if (diff * denominator_of(rep.max_relative_error) > numerator_of(rep.max_relative_error) * base)
          rep.max_relative_error = Rational(diff, base);
        if (!(lo * base <= ed * sp && ed * sp <= hi * base) && rep.pass) {
          rep.pass = false;
          std::string s;
          for (std::size_t v = 0; v < h.n; ++v)
            if (side[v]) s += (s.empty() ? "" : ",") + std::to_string(v);
          rep.witness = "S={" + s + "}: cut " + to_fraction_string(Rational(sum[0], ws.den)) + " vs sparsifier " +
                        to_fraction_string(Rational(sum[1], wt.den));
        }
      });
  return rep;
}

struct HypergraphSparsifyResult {
  Hypergraph sparsifier;
  std::vector<std::size_t> origin;  // source hyperedge per retained hyperedge
  std::uint32_t q = 0;
  bool field_fallback = false;
};

inline HypergraphSparsifyResult sparsify_hypergraph(const Hypergraph& h, const SparsifyParams& p) {
  h.validate();
  if (h.n < 2) throw Error(Errc::InvalidArgument, "hypergraph needs at least 2 vertices");
  HypergraphCode hc = hypergraph_code(h, p.enumeration_budget);
  Sparsifier sp = final_code_sparsify(hc.g, hyperedge_weights(h), p);
  HypergraphSparsifyResult res;
  res.q = hc.q;
  res.field_fallback = hc.fallback;
  res.sparsifier.n = h.n;
  for (std::size_t t = 0; t < sp.size(); ++t) {
    res.sparsifier.edges.push_back(h.edges[sp.coords[t]]);
    res.sparsifier.weights.push_back(sp.weights[t]);
    res.origin.push_back(sp.coords[t]);
  }
  return res;
}

struct CutCountEntry {
  std::size_t alpha;
  std::uint64_t observed;  // distinct nonempty cut edge-sets with at most alpha d hyperedges
  BigInt bound;            // (2n)^(2 alpha)
  bool pass;
};

/// Distinct nonempty cut edge-sets (unweighted sizes) of h, as sorted sizes.
inline std::vector<std::size_t> distinct_cut_sizes(const Hypergraph& h) {
  std::set<std::vector<bool>> seen;
  std::vector<std::size_t> sizes;
  if (h.n < 2) return sizes;
  if (h.n > 24) throw Error(Errc::BudgetExceeded, "too many vertices for cut enumeration");
  std::vector<bool> side(h.n, false);
  detail::walk_cuts(
      h.n, [&](std::size_t v) { side[v] = !side[v]; },
      [&]() {
        std::vector<bool> cut(h.edges.size());
        std::size_t c = 0;
        for (std::size_t e = 0; e < h.edges.size(); ++e) {
          std::size_t in = 0;
          for (auto v : h.edges[e]) in += side[v];
          cut[e] = in && in < h.edges[e].size();
          c += cut[e];
        }
        if (c && seen.insert(cut).second) sizes.push_back(c);
      });
  std::sort(sizes.begin(), sizes.end());
  return sizes;
}

struct HypergraphDecomposition {
  std::vector<std::size_t> removed;
  Hypergraph residual;
  std::vector<CutCountEntry> report;
  std::uint32_t q = 0;
  DecompositionStage stage = DecompositionStage::AlreadySatisfied;

  bool pass() const {
    return std::all_of(report.begin(), report.end(), [](const auto& e) { return e.pass; });
  }
};

/// code_decomposition on the hypergraph code; removed coordinates are removed hyperedges.
inline HypergraphDecomposition hypergraph_decomposition(const Hypergraph& h, std::uint64_t d,
                                                        const DecompositionOptions& opt = {}) {
  HypergraphCode hc = hypergraph_code(h, opt.enumeration_budget);
  DecompositionResult dec = code_decomposition(hc.g, d, opt);
  HypergraphDecomposition res;
  res.q = hc.q;
  res.removed = dec.removed;
  res.stage = dec.stage;
  res.residual.n = h.n;
  for (auto e : dec.kept) {
    res.residual.edges.push_back(h.edges[e]);
    if (!h.weights.empty()) res.residual.weights.push_back(h.weights[e]);
  }
  std::vector<std::size_t> sizes = distinct_cut_sizes(res.residual);
  for (std::size_t a = 1; a <= std::max<std::size_t>(h.n, 1); ++a) {
    std::uint64_t obs = static_cast<std::uint64_t>(std::upper_bound(sizes.begin(), sizes.end(), a * d) - sizes.begin());
    BigInt bound = boost::multiprecision::pow(BigInt(2 * h.n), static_cast<unsigned>(2 * a));
    res.report.push_back({a, obs, bound, BigInt(obs) <= bound});
  }
  return res;
}

}  // namespace codesparse
