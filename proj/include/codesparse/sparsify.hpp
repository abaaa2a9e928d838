#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "code.hpp"
#include "counting.hpp"
#include "error.hpp"
#include "random.hpp"
#include "rational.hpp"

namespace codesparse {

struct SparsifyParams {
  Rational epsilon{1, 2};
  std::optional<Rational> eta;  // default: 100 (log(k/eps) loglog q)^2
  std::uint64_t seed = 0;
  Rational base_case_multiplier{100};
  /// Replaces eta so that eta log k log q / eps^2 equals aggressive_budget, which makes
  /// desk-scale inputs large enough to actually be sampled.
  bool aggressive = false;
  Rational aggressive_budget{4};
  std::uint64_t enumeration_budget = kDefaultEnumerationBudget;
  std::uint64_t node_budget = kDefaultNodeBudget;

  void validate() const {
    if (epsilon <= 0 || epsilon >= 1) throw Error(Errc::InvalidArgument, "epsilon must lie in (0,1)");
    if (eta && *eta <= 0) throw Error(Errc::InvalidArgument, "eta must be positive");
    if (base_case_multiplier <= 0 || aggressive_budget <= 0)
      throw Error(Errc::InvalidArgument, "multipliers must be positive");
  }
};

/// log2 of max(k, 2), so rank-1 blocks do not zero out the formulas.
inline Rational log2_dim(std::size_t k) { return log2_dyadic(static_cast<std::uint64_t>(std::max<std::size_t>(k, 2))); }

inline Rational default_eta(std::size_t k, const Rational& eps, std::uint32_t q) {
  Rational l = log2_dyadic(Rational(std::max<std::size_t>(k, 1)) / eps);
  Rational ll = loglog2_clamped(Rational(q));
  return 100 * (l * ll) * (l * ll);
}

inline Rational aggressive_eta(std::size_t k, const Rational& eps, std::uint32_t q, const Rational& budget) {
  return budget * eps * eps / (log2_dim(k) * log2_dyadic(static_cast<std::uint64_t>(q)));
}

/// floor(2 loglog max(n,4)) + 2.
inline unsigned recursion_depth_cap(const BigInt& n) {
  Rational l = log2_dyadic(Rational(n < 4 ? BigInt(4) : n));
  Rational ll = log2_dyadic(l);
  return static_cast<unsigned>(floor_of(2 * ll)) + 2;
}

struct SparsifyStats {
  std::size_t levels = 0;        // deepest recursion level reached
  std::size_t decompositions = 0;
  std::size_t peeled_rows = 0;   // distinct rows placed in S across all levels
  std::size_t sampled_calls = 0;
  std::size_t depth_cap_hits = 0;
};

namespace detail {

struct SparsifyContext {
  std::size_t k;
  std::uint32_t q;
  Rational eps;
  Rational eta;
  Rational budget_t;    // eta log k log q / eps^2
  Rational base_bound;  // base_case_multiplier k budget_t
  unsigned depth_cap;
  DecompositionOptions dec;
};

inline SparsifyContext make_context(std::size_t k, std::uint32_t q, const Rational& eps, const Rational& eta,
                                    const SparsifyParams& p, const BigInt& n) {
  SparsifyContext c{k, q, eps, eta, 0, 0, recursion_depth_cap(n), {p.enumeration_budget, p.node_budget, true}};
  c.budget_t = eta * log2_dim(k) * log2_dyadic(static_cast<std::uint64_t>(q)) / (eps * eps);
  c.base_bound = p.base_case_multiplier * Rational(k) * c.budget_t;
  return c;
}

/// Recursive sparsification of a code whose row i stands for mult[i] identical unweighted
/// coordinates. Emits (origin[i], multiplicity x accumulated factor) pairs.
inline void sparsify_counted(const GeneratorMatrix& g, const std::vector<std::uint64_t>& mult,
                             const std::vector<std::size_t>& origin, const BigInt& factor, unsigned depth,
                             std::uint64_t seed, const SparsifyContext& ctx,
                             std::vector<std::pair<std::size_t, BigInt>>& out, SparsifyStats& stats) {
  stats.levels = std::max<std::size_t>(stats.levels, depth + 1);
  BigInt n = 0;
  for (auto m : mult) n += m;
  auto emit_all = [&]() {
    for (std::size_t i = 0; i < g.rows(); ++i)
      if (mult[i]) out.emplace_back(origin[i], BigInt(mult[i]) * factor);
  };
  if (Rational(n) <= ctx.base_bound) return emit_all();
  if (depth >= ctx.depth_cap) {
    ++stats.depth_cap_hits;
    return emit_all();
  }
  // d = n eps^2 / (eta k log k log q); sample at 1/sqrt(d), with sqrt(d) rounded down
  Rational d = Rational(n) / (Rational(ctx.k) * ctx.budget_t);
  BigInt s = isqrt(floor_of(d));
  if (s <= 1) return emit_all();
  BigInt thr = floor_of(Rational(s) * ctx.budget_t);
  if (thr < 1) thr = 1;

  ++stats.decompositions;
  DecompositionResult dec = decompose_counted(g, mult, static_cast<std::uint64_t>(thr), ctx.dec);
  stats.peeled_rows += dec.removed.size();

  if (!dec.removed.empty()) {
    std::vector<std::uint64_t> m;
    std::vector<std::size_t> o;
    for (auto i : dec.removed) {
      m.push_back(mult[i]);
      o.push_back(origin[i]);
    }
    sparsify_counted(puncture(g, dec.removed), m, o, factor, depth + 1, derive_seed(seed, "kept"), ctx, out, stats);
  }
  if (dec.kept.empty()) return;

  ++stats.sampled_calls;
  Rng rng(derive_seed(seed, "sample"));
  const std::uint64_t rate = static_cast<std::uint64_t>(s);
  std::vector<std::size_t> rows;
  std::vector<std::uint64_t> m;
  std::vector<std::size_t> o;
  for (auto i : dec.kept) {
    std::uint64_t kept = rng.binomial_inverse(mult[i], rate);
    if (!kept) continue;
    rows.push_back(i);
    m.push_back(kept);
    o.push_back(origin[i]);
  }
  if (rows.empty()) return;
  sparsify_counted(puncture(g, rows), m, o, factor * s, depth + 1, derive_seed(seed, "rest"), ctx, out, stats);
}

inline Sparsifier to_sparsifier(const std::vector<std::pair<std::size_t, BigInt>>& items, const Rational& scale) {
  std::vector<std::pair<std::size_t, Rational>> v;
  v.reserve(items.size());
  for (const auto& [c, w] : items) v.emplace_back(c, Rational(w) * scale);
  return merge_to_sparsifier(std::move(v));
}

}  // namespace detail

struct CodeSparsifyResult {
  Sparsifier sparsifier;
  SparsifyStats stats;
  Rational eta;
};

/// Recursive sparsifier for an unweighted code: peel a light part, keep it, sample the rest at
/// 1/sqrt(d) with weight sqrt(d), recurse on both.
inline CodeSparsifyResult code_sparsify_detailed(const GeneratorMatrix& g, const SparsifyParams& p) {
  p.validate();
  const std::size_t k = std::max<std::size_t>(rank(g), 1);
  Rational eta = p.aggressive ? aggressive_eta(k, p.epsilon, g.q(), p.aggressive_budget)
                              : (p.eta ? *p.eta : default_eta(k, p.epsilon, g.q()));
  std::vector<std::uint64_t> mult(g.rows(), 1);
  std::vector<std::size_t> origin(g.rows());
  for (std::size_t i = 0; i < g.rows(); ++i) origin[i] = i;
  auto ctx = detail::make_context(k, g.q(), p.epsilon, eta, p, BigInt(g.rows()));
  CodeSparsifyResult res;
  res.eta = eta;
  std::vector<std::pair<std::size_t, BigInt>> out;
  detail::sparsify_counted(g, mult, origin, BigInt(1), 0, p.seed, ctx, out, res.stats);
  res.sparsifier = detail::to_sparsifier(out, Rational(1));
  return res;
}

inline Sparsifier code_sparsify(const GeneratorMatrix& g, const SparsifyParams& p) {
  return code_sparsify_detailed(g, p).sparsifier;
}

/// W_i = least weighted weight of a codeword nonzero at i; empty for identically zero rows.
inline std::vector<std::optional<Rational>> min_weight_through(const GeneratorMatrix& g, const CoordinateWeights& w,
                                                               std::uint64_t budget = kDefaultEnumerationBudget) {
  if (w.size() != g.rows()) throw Error(Errc::DimensionMismatch, "weights vs n");
  detail::ScaledWeights sw(w.values());
  std::vector<std::optional<BigInt>> best(g.rows());
  BigInt cur = 0;
  walk_codewords(
      g,
      [&](std::size_t i, bool, bool now) {
        if (now)
          cur += sw.num[i];
        else
          cur -= sw.num[i];
      },
      [&](const Vec& c, const Vec&) {
        for (std::size_t i = 0; i < c.size(); ++i)
          if (c[i] && (!best[i] || cur < *best[i])) best[i] = cur;
      },
      budget);
  std::vector<std::optional<Rational>> res(g.rows());
  for (std::size_t i = 0; i < g.rows(); ++i)
    if (best[i]) res[i] = Rational(*best[i], sw.den);
  return res;
}

struct QuadraticResult {
  Sparsifier sparsifier;
  std::vector<Rational> probability;  // per coordinate, 0 for zero rows
  Rational expected_size = 0;
};

/// Keeps coordinate i with probability min(1, 10 k log q w_i / (eps^2 W_i)) and weight w_i / p_i.
/// With unit weights this is the textbook rule min(1, 10 k log q / (eps^2 W_i)).
inline QuadraticResult quadratic_sparsify_detailed(const GeneratorMatrix& g, const CoordinateWeights& w,
                                                   const Rational& eps, std::uint64_t seed,
                                                   std::uint64_t budget = kDefaultEnumerationBudget) {
  const std::size_t k = rank(g);
  if (k == 0) throw Error(Errc::ZeroCode, "quadratic_sparsify on the zero code");
  if (eps <= 0) throw Error(Errc::InvalidArgument, "epsilon must be positive");
  auto mins = min_weight_through(g, w, budget);
  const Rational a = 10 * Rational(k) * log2_dyadic(static_cast<std::uint64_t>(g.q())) / (eps * eps);
  Rng rng(seed);
  QuadraticResult res;
  res.probability.assign(g.rows(), Rational(0));
  std::vector<std::pair<std::size_t, Rational>> kept;
  for (std::size_t i = 0; i < g.rows(); ++i) {
    if (!mins[i]) continue;
    Rational pi = a * w[i] / *mins[i];
    if (pi > 1) pi = 1;
    res.probability[i] = pi;
    res.expected_size += pi;
    if (rng.bernoulli(pi)) kept.emplace_back(i, w[i] / pi);
  }
  res.sparsifier = merge_to_sparsifier(std::move(kept));
  return res;
}

inline Sparsifier quadratic_sparsify(const GeneratorMatrix& g, const Rational& eps, std::uint64_t seed) {
  return quadratic_sparsify_detailed(g, CoordinateWeights::unit(g.rows()), eps, seed).sparsifier;
}

struct WeightClassPartition {
  Rational alpha;
  Rational unit = 1;                                // weights are read relative to this
  std::map<int, std::vector<std::size_t>> classes;  // i -> E_i
  std::vector<std::size_t> odd_union, even_union;
};

/// Class of a normalized weight u >= 1: the i with alpha^(i-1) <= u < alpha^i.
inline int weight_class_of(const Rational& u, const Rational& alpha) {
  if (u < 1) throw Error(Errc::WeightOutOfBand, "normalized weight below 1");
  int i = 1;
  Rational upper = alpha;
  while (u >= upper) {
    upper *= alpha;
    ++i;
  }
  return i;
}

/// Bands [alpha^(i-1), alpha^i) after dividing by `unit`.
inline WeightClassPartition partition_by_weight(const std::vector<std::size_t>& coords,
                                                const std::vector<Rational>& weights, const Rational& alpha,
                                                const Rational& unit) {
  if (alpha <= 1) throw Error(Errc::InvalidArgument, "alpha must exceed 1");
  WeightClassPartition part;
  part.alpha = alpha;
  part.unit = unit;
  for (std::size_t t = 0; t < coords.size(); ++t) part.classes[weight_class_of(weights[t] / unit, alpha)].push_back(coords[t]);
  for (auto& [i, e] : part.classes) {
    auto& dst = (i % 2) ? part.odd_union : part.even_union;
    dst.insert(dst.end(), e.begin(), e.end());
  }
  std::sort(part.odd_union.begin(), part.odd_union.end());
  std::sort(part.even_union.begin(), part.even_union.end());
  return part;
}

inline Rational weight_class_alpha(std::size_t k, std::uint32_t q, const Rational& eps) {
  Rational kk(std::max<std::size_t>(k, 1));
  return kk * kk * kk * log2_dyadic(static_cast<std::uint64_t>(q)) / (eps * eps * eps);
}

struct WeightClassDecomposition {
  Sparsifier retained;  // quadratic sparsifier at eps/4
  WeightClassPartition partition;

  /// Weight of each retained coordinate, indexed by coordinate.
  std::map<std::size_t, Rational> weight_map() const {
    std::map<std::size_t, Rational> m;
    for (std::size_t t = 0; t < retained.size(); ++t) m[retained.coords[t]] = retained.weights[t];
    return m;
  }
};

inline WeightClassDecomposition weight_class_decomposition(const GeneratorMatrix& g, const CoordinateWeights& w,
                                                           const Rational& eps, std::size_t k, std::uint64_t seed,
                                                           std::uint64_t budget = kDefaultEnumerationBudget) {
  WeightClassDecomposition res;
  res.retained = quadratic_sparsify_detailed(g, w, eps / 4, seed, budget).sparsifier;
  Rational unit = res.retained.size() ? *std::min_element(res.retained.weights.begin(), res.retained.weights.end())
                                      : Rational(1);
  res.partition = partition_by_weight(res.retained.coords, res.retained.weights, weight_class_alpha(k, g.q(), eps), unit);
  return res;
}

struct SpanBlock {
  int cls;
  std::vector<std::size_t> rows;  // E_i, as row indices of the input
  GeneratorMatrix h;              // E_i rows, k' independent columns
  std::vector<std::size_t> residual_rows;  // rows of lower classes still in play
  GeneratorMatrix residual;                // those rows, cancelled columns only
};

/// Heaviest class first: pick independent columns on E_i, cancel every other column on E_i,
/// keep the pivot block and continue on the span of the cancelled columns over lower classes.
inline std::vector<SpanBlock> span_decomposition(const GeneratorMatrix& d, const std::vector<int>& labels) {
  if (labels.size() != d.rows()) throw Error(Errc::DimensionMismatch, "labels vs rows");
  const auto& f = d.field();
  std::vector<std::size_t> rows(d.rows());
  for (std::size_t i = 0; i < d.rows(); ++i) rows[i] = i;
  // reduce to a column basis so the working matrix has full column rank
  GeneratorMatrix cur = select_columns(d, column_basis(d));
  std::vector<SpanBlock> blocks;
  while (!rows.empty() && cur.cols() > 0) {
    int top = labels[rows[0]];
    for (auto r : rows) top = std::max(top, labels[r]);
    std::vector<std::size_t> in_e, below;  // positions within `rows`
    for (std::size_t t = 0; t < rows.size(); ++t) (labels[rows[t]] == top ? in_e : below).push_back(t);
    GeneratorMatrix e = puncture(cur, in_e);
    Echelon ech = reduced_echelon(e);
    std::vector<bool> pivot(cur.cols(), false);
    for (auto c : ech.pivots) pivot[c] = true;
    // column b of e equals sum_r ech.rows[r][b] * (pivot column r), so subtracting that
    // combination zeroes b on E_i
    std::vector<std::size_t> rest_cols;
    for (std::size_t b = 0; b < cur.cols(); ++b)
      if (!pivot[b]) rest_cols.push_back(b);
    GeneratorMatrix cancelled(f, below.size(), rest_cols.size());
    for (std::size_t t = 0; t < below.size(); ++t) {
      for (std::size_t u = 0; u < rest_cols.size(); ++u) {
        std::size_t b = rest_cols[u];
        std::uint32_t v = cur(below[t], b);
        for (std::size_t r = 0; r < ech.pivots.size(); ++r) {
          std::uint32_t coef = ech.rows[r][b];
          if (coef) v = f.sub(v, f.mul(coef, cur(below[t], ech.pivots[r])));
        }
        cancelled.set(t, u, v);
      }
    }
    SpanBlock blk{top, {}, select_columns(e, ech.pivots), {}, cancelled};
    for (auto t : in_e) blk.rows.push_back(rows[t]);
    std::vector<std::size_t> next;
    for (auto t : below) next.push_back(rows[t]);
    blk.residual_rows = next;
    blocks.push_back(std::move(blk));
    rows.swap(next);
    cur = blocks.back().residual;
  }
  return blocks;
}

struct UnweightedBlock {
  std::vector<std::uint64_t> copies;
  Rational scale;  // alpha^(i-1) eps / 10

  GeneratorMatrix expand(const GeneratorMatrix& h) const {
    return UnweightedExpansion{copies, scale}.expand(h);
  }
};

/// Weights in [alpha^(i-1), alpha^i] are divided by alpha^(i-1) and each row is repeated
/// floor(10 w / eps) times.
inline UnweightedBlock make_unweighted(const std::vector<Rational>& weights, const Rational& alpha, int i,
                                       const Rational& eps) {
  if (eps <= 0) throw Error(Errc::InvalidArgument, "epsilon must be positive");
  Rational low = boost::multiprecision::pow(numerator_of(alpha), static_cast<unsigned>(i - 1));
  low /= Rational(boost::multiprecision::pow(denominator_of(alpha), static_cast<unsigned>(i - 1)));
  Rational high = low * alpha;
  UnweightedBlock out;
  out.scale = low * eps / 10;
  for (const auto& w : weights) {
    if (w < low || w > high)
      throw Error(Errc::WeightOutOfBand, "weight " + to_fraction_string(w) + " outside band " + std::to_string(i));
    out.copies.push_back(static_cast<std::uint64_t>(floor_of(10 * (w / low) / eps)));
  }
  return out;
}

struct FinalBlockTrace {
  bool even;
  int cls;
  std::size_t rows;
  std::size_t rank;
  BigInt copies;  // total multiplicity after unweighting
  std::size_t retained;
};

struct FinalSparsifyResult {
  Sparsifier sparsifier;
  WeightClassPartition partition;
  std::size_t quadratic_retained = 0;
  std::vector<FinalBlockTrace> blocks;
  SparsifyStats stats;
};

/// Weighted pipeline: quadratic sparsify at eps/4, weight classes, span decomposition of each
/// parity, unweight every block at eps/8 and sparsify it at eps/80, then rescale and merge.
inline FinalSparsifyResult final_code_sparsify_detailed(const GeneratorMatrix& g, const CoordinateWeights& w,
                                                        const SparsifyParams& p) {
  p.validate();
  if (w.size() != g.rows()) throw Error(Errc::DimensionMismatch, "weights vs n");
  FinalSparsifyResult res;
  const std::size_t k = rank(g);
  if (k == 0) return res;
  const Rational& eps = p.epsilon;
  WeightClassDecomposition wcd = weight_class_decomposition(g, w, eps, k, derive_seed(p.seed, "quadratic"),
                                                            p.enumeration_budget);
  res.partition = wcd.partition;
  res.quadratic_retained = wcd.retained.size();
  auto wmap = wcd.weight_map();
  const Rational inner_eps = eps / 80;
  const Rational unweight_eps = eps / 8;
  const Rational eta_default = p.eta ? *p.eta : default_eta(k, eps, g.q());

  std::vector<std::pair<std::size_t, Rational>> merged;
  for (bool even : {false, true}) {
    const auto& coords = even ? wcd.partition.even_union : wcd.partition.odd_union;
    if (coords.empty()) continue;
    GeneratorMatrix dmat = puncture(g, coords);
    std::vector<int> labels;
    std::vector<Rational> normalized;
    for (auto c : coords) {
      normalized.push_back(wmap.at(c) / wcd.partition.unit);
      labels.push_back(weight_class_of(normalized.back(), wcd.partition.alpha));
    }
    for (const SpanBlock& blk : span_decomposition(dmat, labels)) {
      if (blk.h.cols() == 0) continue;
      std::vector<Rational> bw;
      std::vector<std::size_t> origin;
      for (auto r : blk.rows) {
        bw.push_back(normalized[r]);
        origin.push_back(coords[r]);
      }
      UnweightedBlock ub = make_unweighted(bw, wcd.partition.alpha, blk.cls, unweight_eps);
      std::vector<std::uint64_t> mult = ub.copies;
      BigInt total = 0;
      for (auto m : mult) total += m;
      const std::size_t kb = blk.h.cols();
      Rational eta = p.aggressive ? aggressive_eta(kb, inner_eps, g.q(), p.aggressive_budget) : eta_default;
      auto ctx = detail::make_context(kb, g.q(), inner_eps, eta, p, total);
      std::vector<std::pair<std::size_t, BigInt>> out;
      std::string tag = std::string(even ? "even" : "odd") + std::to_string(blk.cls);
      detail::sparsify_counted(blk.h, mult, origin, BigInt(1), 0, derive_seed(p.seed, tag), ctx, out, res.stats);
      Rational scale = ub.scale * wcd.partition.unit;
      std::size_t before = merged.size();
      for (auto& [c, m] : out) merged.emplace_back(c, Rational(m) * scale);
      std::vector<std::size_t> distinct;
      for (std::size_t t = before; t < merged.size(); ++t) distinct.push_back(merged[t].first);
      std::sort(distinct.begin(), distinct.end());
      distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
      res.blocks.push_back({even, blk.cls, blk.rows.size(), kb, total, distinct.size()});
    }
  }
  res.sparsifier = merge_to_sparsifier(std::move(merged));
  return res;
}

inline Sparsifier final_code_sparsify(const GeneratorMatrix& g, const CoordinateWeights& w, const SparsifyParams& p) {
  return final_code_sparsify_detailed(g, w, p).sparsifier;
}

}  // namespace codesparse
