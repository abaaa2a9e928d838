#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "code.hpp"
#include "error.hpp"
#include "random.hpp"
#include "rational.hpp"

namespace codesparse {

struct Edge {
  std::size_t u, v;
  Rational w{1};
  friend bool operator==(const Edge&, const Edge&) = default;
};

struct Graph {
  std::size_t n = 0;
  std::vector<Edge> edges;

  void validate() const {
    for (std::size_t e = 0; e < edges.size(); ++e) {
      const auto& ed = edges[e];
      if (ed.u >= n || ed.v >= n) throw Error(Errc::IndexOutOfRange, "edge " + std::to_string(e) + " endpoint");
      if (ed.u == ed.v) throw Error(Errc::InvalidArgument, "edge " + std::to_string(e) + " is a self-loop");
      if (ed.w <= 0) throw Error(Errc::InvalidArgument, "edge " + std::to_string(e) + " has non-positive weight");
    }
  }
  bool unweighted() const {
    return std::all_of(edges.begin(), edges.end(), [](const Edge& e) { return e.w == 1; });
  }
  /// No parallel edges.
  bool simple() const {
    std::vector<std::pair<std::size_t, std::size_t>> es;
    for (const auto& e : edges) es.emplace_back(std::min(e.u, e.v), std::max(e.u, e.v));
    std::sort(es.begin(), es.end());
    return std::adjacent_find(es.begin(), es.end()) == es.end();
  }
  friend bool operator==(const Graph&, const Graph&) = default;
};

namespace graphs {

inline Graph complete(std::size_t n) {
  Graph g{n, {}};
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v) g.edges.push_back({u, v});
  return g;
}

inline Graph cycle(std::size_t n) {
  Graph g{n, {}};
  for (std::size_t u = 0; u < n; ++u) g.edges.push_back({std::min(u, (u + 1) % n), std::max(u, (u + 1) % n)});
  return g;
}

inline Graph path(std::size_t n) {
  Graph g{n, {}};
  for (std::size_t u = 0; u + 1 < n; ++u) g.edges.push_back({u, u + 1});
  return g;
}

inline Graph hypercube(std::size_t dim) {
  Graph g{std::size_t{1} << dim, {}};
  for (std::size_t v = 0; v < g.n; ++v)
    for (std::size_t b = 0; b < dim; ++b)
      if (!((v >> b) & 1)) g.edges.push_back({v, v | (std::size_t{1} << b)});
  return g;
}

/// G(n, p) with p = num/den, edges in lexicographic order.
inline Graph gnp(std::size_t n, const Rational& p, std::uint64_t seed) {
  Rng rng(seed);
  Graph g{n, {}};
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v)
      if (rng.bernoulli(p)) g.edges.push_back({u, v});
  return g;
}

}  // namespace graphs

/// One F_2 row per edge with 1s at its endpoints; wt(G 1_S) = |delta(S)|.
inline GeneratorMatrix cut_code(const Graph& g) {
  g.validate();
  GeneratorMatrix m(PrimeField(2), g.edges.size(), g.n);
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    m.set(e, g.edges[e].u, 1);
    m.set(e, g.edges[e].v, 1);
  }
  return m;
}

inline CoordinateWeights edge_weights(const Graph& g) {
  std::vector<Rational> w;
  for (const auto& e : g.edges) w.push_back(e.w);
  return CoordinateWeights(std::move(w));
}

/// Total weight of edges with exactly one endpoint in S.
inline Rational cut_value(const Graph& g, const std::vector<bool>& in_s) {
  if (in_s.size() != g.n) throw Error(Errc::DimensionMismatch, "side vector vs n");
  Rational s = 0;
  for (const auto& e : g.edges)
    if (in_s[e.u] != in_s[e.v]) s += e.w;
  return s;
}

/// Sums parallel edges into one edge per vertex pair, ordered by (u, v).
inline Graph merge_parallel(const Graph& g) {
  std::map<std::pair<std::size_t, std::size_t>, Rational> m;
  for (const auto& e : g.edges) m[{std::min(e.u, e.v), std::max(e.u, e.v)}] += e.w;
  Graph out{g.n, {}};
  for (auto& [k, w] : m) out.edges.push_back({k.first, k.second, w});
  return out;
}

namespace detail {

/// Visits every nonempty proper S with vertex n-1 outside S in Gray-code order.
/// `flip(v)` is called before each visit with the vertex that changed side.
template <class Flip, class Visit>
void walk_cuts(std::size_t n, Flip&& flip, Visit&& visit) {
  if (n < 2) return;
  const std::uint64_t count = 1ULL << (n - 1);
  for (std::uint64_t t = 1; t < count; ++t) {
    std::size_t v = static_cast<std::size_t>(__builtin_ctzll(t));
    flip(v);
    visit();
  }
}

}  // namespace detail

inline constexpr std::size_t kMaxVerifyVertices = 24;

/// Exhaustive check of (1-eps)|delta_G(S)| <= |delta_H(S)| <= (1+eps)|delta_G(S)| over all cuts.
inline VerificationReport verify_cut_sparsifier(const Graph& g, const Graph& h, const Rational& eps) {
  if (g.n != h.n) throw Error(Errc::DimensionMismatch, "vertex counts differ");
  if (g.n > kMaxVerifyVertices) throw Error(Errc::BudgetExceeded, "too many vertices for exhaustive cut check");
  std::vector<Rational> gw, hw;
  for (const auto& e : g.edges) gw.push_back(e.w);
  for (const auto& e : h.edges) hw.push_back(e.w);
  detail::ScaledWeights gs(gw), hs(hw);
  std::vector<std::vector<std::pair<std::size_t, bool>>> inc(g.n);  // (edge, belongs to h)
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    inc[g.edges[e].u].push_back({e, false});
    inc[g.edges[e].v].push_back({e, false});
  }
  for (std::size_t e = 0; e < h.edges.size(); ++e) {
    inc[h.edges[e].u].push_back({e, true});
    inc[h.edges[e].v].push_back({e, true});
  }
  std::vector<bool> side(g.n, false);
  BigInt a = 0, b = 0;
  const BigInt lo = denominator_of(eps) - numerator_of(eps), hi = denominator_of(eps) + numerator_of(eps),
               ed = denominator_of(eps);
  VerificationReport rep;
  detail::walk_cuts(
      g.n,
      [&](std::size_t v) {
        side[v] = !side[v];
        for (auto [e, in_h] : inc[v]) {
          const Edge& ed2 = in_h ? h.edges[e] : g.edges[e];
          std::size_t other = ed2.u == v ? ed2.v : ed2.u;
          bool crossing = side[v] != side[other];
          BigInt& acc = in_h ? b : a;
          const BigInt& w = in_h ? hs.num[e] : gs.num[e];
          if (crossing)
            acc += w;
          else
            acc -= w;
        }
      },
      [&]() {
        ++rep.checked;
        BigInt base = a * hs.den, sp = b * gs.den;
        if (base == 0) {
          if (sp != 0 && rep.pass) {
            rep.pass = false;
            rep.witness = "empty cut in G is nonempty in the sparsifier";
          }
          return;
        }
        BigInt diff = sp > base ? BigInt(sp - base) : BigInt(base - sp);
        if (diff * denominator_of(rep.max_relative_error) > numerator_of(rep.max_relative_error) * base)
          rep.max_relative_error = Rational(diff, base);
        if (!(lo * base <= ed * sp && ed * sp <= hi * base) && rep.pass) {
          rep.pass = false;
          std::string s;
          for (std::size_t v = 0; v < g.n; ++v)
            if (side[v]) s += (s.empty() ? "" : ",") + std::to_string(v);
          rep.witness = "S={" + s + "}: cut " + to_fraction_string(Rational(a, gs.den)) + " vs sparsifier " +
                        to_fraction_string(Rational(b, hs.den));
        }
      });
  return rep;
}

struct MinCut {
  std::int64_t value = 0;
  std::vector<bool> side;  // one shore, over the given vertex list
};

/// Stoer-Wagner on a symmetric integer weight matrix (at least 2 vertices).
inline MinCut stoer_wagner(std::vector<std::vector<std::int64_t>> w) {
  const std::size_t n = w.size();
  std::vector<std::vector<std::size_t>> groups(n);
  for (std::size_t v = 0; v < n; ++v) groups[v] = {v};
  std::vector<bool> merged(n, false);
  MinCut best{std::numeric_limits<std::int64_t>::max(), {}};
  for (std::size_t phase = 1; phase < n; ++phase) {
    std::vector<std::int64_t> key(n, 0);
    std::vector<bool> added(n, false);
    std::size_t prev = n, last = n;
    for (std::size_t it = 0; it + phase <= n; ++it) {
      std::size_t sel = n;
      for (std::size_t v = 0; v < n; ++v)
        if (!merged[v] && !added[v] && (sel == n || key[v] > key[sel])) sel = v;
      added[sel] = true;
      prev = last;
      last = sel;
      for (std::size_t v = 0; v < n; ++v)
        if (!merged[v] && !added[v]) key[v] += w[sel][v];
    }
    std::int64_t cut = key[last];
    if (cut < best.value) {
      best.value = cut;
      best.side.assign(n, false);
      for (auto v : groups[last]) best.side[v] = true;
    }
    groups[prev].insert(groups[prev].end(), groups[last].begin(), groups[last].end());
    for (std::size_t v = 0; v < n; ++v) {
      w[prev][v] += w[last][v];
      w[v][prev] = w[prev][v];
    }
    merged[last] = true;
  }
  return best;
}

namespace detail {

inline std::vector<std::vector<std::size_t>> components(std::size_t n, const std::vector<Edge>& edges,
                                                        const std::vector<bool>& alive) {
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t e = 0; e < edges.size(); ++e)
    if (alive[e]) parent[find(edges[e].u)] = find(edges[e].v);
  std::map<std::size_t, std::vector<std::size_t>> by_root;
  for (std::size_t v = 0; v < n; ++v) by_root[find(v)].push_back(v);
  std::vector<std::vector<std::size_t>> out;
  for (auto& [r, vs] : by_root) out.push_back(std::move(vs));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace detail

/// Exact global min cut (edge count) of an unweighted multigraph.
inline std::int64_t min_cut_value(const Graph& g) {
  if (g.n < 2) return 0;
  std::vector<std::vector<std::int64_t>> w(g.n, std::vector<std::int64_t>(g.n, 0));
  for (const auto& e : g.edges) {
    ++w[e.u][e.v];
    ++w[e.v][e.u];
  }
  return stoer_wagner(std::move(w)).value;
}

struct PeelResult {
  std::vector<std::size_t> removed;  // edge indices, increasing
  Graph residual;
  std::size_t cuts_removed = 0;
};

/// Removes min cuts of size <= threshold, component by component, until every component's
/// min cut exceeds the threshold. Cut sizes count edges.
inline PeelResult peel_small_cuts(const Graph& g, const Rational& threshold) {
  g.validate();
  if (threshold < 0) throw Error(Errc::InvalidArgument, "negative threshold");
  std::vector<bool> alive(g.edges.size(), true);
  PeelResult res;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& comp : detail::components(g.n, g.edges, alive)) {
      if (comp.size() < 2) continue;
      std::vector<std::size_t> local(g.n, g.n);
      for (std::size_t t = 0; t < comp.size(); ++t) local[comp[t]] = t;
      std::vector<std::vector<std::int64_t>> w(comp.size(), std::vector<std::int64_t>(comp.size(), 0));
      for (std::size_t e = 0; e < g.edges.size(); ++e) {
        if (!alive[e] || local[g.edges[e].u] == g.n) continue;
        ++w[local[g.edges[e].u]][local[g.edges[e].v]];
        ++w[local[g.edges[e].v]][local[g.edges[e].u]];
      }
      MinCut mc = stoer_wagner(std::move(w));
      if (Rational(mc.value) > threshold) continue;
      for (std::size_t e = 0; e < g.edges.size(); ++e) {
        if (!alive[e] || local[g.edges[e].u] == g.n) continue;
        if (mc.side[local[g.edges[e].u]] != mc.side[local[g.edges[e].v]]) {
          alive[e] = false;
          res.removed.push_back(e);
        }
      }
      ++res.cuts_removed;
      changed = true;
    }
  }
  std::sort(res.removed.begin(), res.removed.end());
  res.residual.n = g.n;
  for (std::size_t e = 0; e < g.edges.size(); ++e)
    if (alive[e]) res.residual.edges.push_back(g.edges[e]);
  return res;
}

struct AppendixOptions {
  std::optional<Rational> c;  // gamma(n) = C log n; default 100 / eps^2
  /// Multiplies the n log n / eps^2 edge floor of the base case; 1 reproduces the algorithm.
  Rational base_edge_factor{1};
};

struct PeelLevel {
  unsigned i;
  Rational threshold;
  std::size_t edges_in;
  std::size_t removed;
  std::size_t sampled;
};

struct AppendixResult {
  Graph sparsifier;
  std::vector<PeelLevel> levels;
};

namespace detail {

inline Rational root_power(std::size_t n, unsigned i) {
  // n^(1/2^i) to 2^-20
  return dyadic(std::pow(static_cast<double>(n), 1.0 / std::ldexp(1.0, static_cast<int>(i))));
}

inline void appendix_recurse(const Graph& g, unsigned i, const Rational& factor, std::uint64_t seed,
                             const Rational& eps, const Rational& c, const Rational& edge_floor,
                             const Rational& loglog_n, std::vector<Edge>& out, std::vector<PeelLevel>& levels) {
  const std::size_t n = g.n;
  if (Rational(i) >= loglog_n || Rational(g.edges.size()) <= edge_floor) {
    for (const auto& e : g.edges) out.push_back({e.u, e.v, e.w * factor});
    return;
  }
  Rational root = root_power(n, i);
  Rational threshold = c * log2_dyadic(static_cast<std::uint64_t>(n)) * root;
  PeelResult peel = peel_small_cuts(g, threshold);
  Graph g1{n, {}};
  for (auto e : peel.removed) g1.edges.push_back(g.edges[e]);
  Rng rng(derive_seed(seed, "sample"));
  Rational p = 1 / root;
  Graph g2{n, {}};
  for (const auto& e : peel.residual.edges)
    if (rng.bernoulli(p)) g2.edges.push_back(e);
  levels.push_back({i, threshold, g.edges.size(), peel.removed.size(), g2.edges.size()});
  appendix_recurse(g1, i + 1, factor, derive_seed(seed, "g1"), eps, c, edge_floor, loglog_n, out, levels);
  appendix_recurse(g2, i + 1, factor * root, derive_seed(seed, "g2"), eps, c, edge_floor, loglog_n, out, levels);
}

}  // namespace detail

/// Recursive cut sparsifier for unweighted graphs: peel cuts of size <= C log n n^(1/2^i),
/// sample the rest at n^(-1/2^i), recurse on both halves starting from i = 1.
inline AppendixResult graph_sparsify_appendix_detailed(const Graph& g, const Rational& eps, std::uint64_t seed,
                                                       const AppendixOptions& opt = {}) {
  g.validate();
  if (!g.unweighted()) throw Error(Errc::InvalidArgument, "the recursive graph sparsifier takes unweighted graphs");
  if (eps <= 0 || eps >= 1) throw Error(Errc::InvalidArgument, "epsilon must lie in (0,1)");
  AppendixResult res;
  res.sparsifier.n = g.n;
  if (g.n < 2) {
    res.sparsifier = g;
    return res;
  }
  Rational c = opt.c ? *opt.c : Rational(100) / (eps * eps);
  Rational logn = log2_dyadic(static_cast<std::uint64_t>(g.n));
  Rational edge_floor = opt.base_edge_factor * Rational(g.n) * logn / (eps * eps);
  Rational loglog_n = logn > 0 ? log2_dyadic(logn) : Rational(0);
  std::vector<Edge> out;
  detail::appendix_recurse(g, 1, Rational(1), seed, eps, c, edge_floor, loglog_n, out, res.levels);
  res.sparsifier = merge_parallel(Graph{g.n, out});
  return res;
}

inline Graph graph_sparsify_appendix(const Graph& g, const Rational& eps, std::uint64_t seed,
                                     std::optional<Rational> c_override = std::nullopt) {
  AppendixOptions opt;
  opt.c = c_override;
  return graph_sparsify_appendix_detailed(g, eps, seed, opt).sparsifier;
}

/// Retained cut-code rows read back as weighted edges.
inline Graph graph_from_sparsifier(const Graph& g, const Sparsifier& sp) {
  Graph h{g.n, {}};
  for (std::size_t t = 0; t < sp.size(); ++t) {
    const Edge& e = g.edges.at(sp.coords[t]);
    h.edges.push_back({e.u, e.v, sp.weights[t]});
  }
  return h;
}

}  // namespace codesparse
