#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "code.hpp"
#include "error.hpp"
#include "random.hpp"
#include "rational.hpp"

namespace codesparse {

/// Zeroes coordinate j: eliminate against the first column a with G[j,a] != 0, then drop column a.
inline GeneratorMatrix contract_step(const GeneratorMatrix& g, std::size_t j) {
  if (j >= g.rows()) throw Error(Errc::IndexOutOfRange, "coordinate " + std::to_string(j));
  const auto& f = g.field();
  std::size_t a = 0;
  while (a < g.cols() && !g(j, a)) ++a;
  if (a == g.cols()) throw Error(Errc::ZeroCoordinate, "row " + std::to_string(j) + " is identically zero");
  const std::uint32_t inv = f.inv(g(j, a));
  GeneratorMatrix out(f, g.rows(), g.cols() - 1);
  std::size_t t = 0;
  for (std::size_t b = 0; b < g.cols(); ++b) {
    if (b == a) continue;
    const std::uint32_t coef = f.neg(f.mul(inv, g(j, b)));
    for (std::size_t i = 0; i < g.rows(); ++i) out.set(i, t, f.add(g(i, b), f.mul(coef, g(i, a))));
    ++t;
  }
  return out;
}

struct ContractionTrace {
  std::vector<std::size_t> chosen_coordinates;
  GeneratorMatrix final_matrix;
  std::uint64_t seed;
};

/// Contracts uniformly random nonzero coordinates until at most alpha columns remain
/// or every row is zero.
inline ContractionTrace contract(const GeneratorMatrix& g, std::size_t alpha, std::uint64_t seed) {
  Rng rng(seed);
  ContractionTrace tr{{}, g, seed};
  std::vector<std::size_t> nz;
  while (tr.final_matrix.cols() > alpha) {
    nz = support(tr.final_matrix);
    if (nz.empty()) break;
    std::size_t j = nz[rng.below(nz.size())];
    tr.chosen_coordinates.push_back(j);
    tr.final_matrix = contract_step(tr.final_matrix, j);
  }
  return tr;
}

struct SurvivalEstimate {
  std::uint64_t survived = 0;
  std::uint64_t trials = 0;
  double rate() const { return trials ? static_cast<double>(survived) / static_cast<double>(trials) : 0.0; }
};

/// Fraction of independent contraction runs (down to alpha columns) whose final span contains c.
inline SurvivalEstimate survival_experiment(const GeneratorMatrix& g, const Vec& c, std::size_t alpha,
                                            std::uint64_t trials, std::uint64_t seed) {
  if (trials == 0) throw Error(Errc::InvalidArgument, "trials must be >= 1");
  if (!in_column_span(g, c)) throw Error(Errc::NotACodeword, "vector is not in the column span");
  SurvivalEstimate est;
  est.trials = trials;
  for (std::uint64_t t = 0; t < trials; ++t) {
    ContractionTrace tr = contract(g, alpha, derive_seed(seed, t));
    if (in_column_span(tr.final_matrix, c)) ++est.survived;
  }
  return est;
}

struct CountingBoundEntry {
  std::size_t alpha;
  std::uint64_t observed;  // distinct nonzero codewords of weight <= alpha d
  BigInt bound;            // q^alpha C(k, alpha)
  bool pass;
};

struct CountingBoundReport {
  std::uint64_t d = 1;
  std::size_t k = 0;
  std::uint32_t q = 2;
  std::vector<CountingBoundEntry> per_alpha;

  bool pass() const {
    return std::all_of(per_alpha.begin(), per_alpha.end(), [](const auto& e) { return e.pass; });
  }
  /// Smallest failing alpha, or 0.
  std::size_t first_failure() const {
    for (const auto& e : per_alpha)
      if (!e.pass) return e.alpha;
    return 0;
  }
};

namespace detail {

/// Sorted weights of every distinct nonzero codeword, coordinate i counting mult[i].
inline std::vector<std::uint64_t> nonzero_codeword_weights(const GeneratorMatrix& g, const std::vector<std::uint64_t>& mult,
                                                           std::uint64_t budget) {
  std::vector<std::uint64_t> ws;
  std::uint64_t w = 0;
  bool first = true;
  walk_codewords(
      g, [&](std::size_t i, bool, bool now) { now ? w += mult[i] : w -= mult[i]; },
      [&](const Vec&, const Vec&) {
        if (!first) ws.push_back(w);
        first = false;
      },
      budget);
  std::sort(ws.begin(), ws.end());
  return ws;
}

inline CountingBoundReport counting_bound_from_weights(const std::vector<std::uint64_t>& sorted, std::size_t k,
                                                       std::uint32_t q, std::uint64_t d) {
  CountingBoundReport rep;
  rep.d = d;
  rep.k = k;
  rep.q = q;
  for (std::size_t a = 1; a <= k; ++a) {
    std::uint64_t limit = a * d;
    std::uint64_t obs = static_cast<std::uint64_t>(std::upper_bound(sorted.begin(), sorted.end(), limit) - sorted.begin());
    BigInt bound = boost::multiprecision::pow(BigInt(q), static_cast<unsigned>(a)) * binomial(k, a);
    rep.per_alpha.push_back({a, obs, bound, BigInt(obs) <= bound});
  }
  return rep;
}

inline CountingBoundReport check_counting_bound_counted(const GeneratorMatrix& g, const std::vector<std::uint64_t>& mult,
                                                        std::uint64_t d, std::uint64_t budget) {
  return counting_bound_from_weights(nonzero_codeword_weights(g, mult, budget), g.cols(), g.q(), d);
}

}  // namespace detail

/// For alpha = 1..k (k = column count): distinct nonzero codewords of weight <= alpha d vs q^alpha C(k, alpha).
inline CountingBoundReport check_counting_bound(const GeneratorMatrix& g, std::uint64_t d,
                                                std::uint64_t budget = kDefaultEnumerationBudget) {
  if (d == 0) throw Error(Errc::InvalidArgument, "d must be >= 1");
  return detail::check_counting_bound_counted(g, std::vector<std::uint64_t>(g.rows(), 1), d, budget);
}

/// Generator of C_T = {c in span(G) : supp(c) within T}.
inline GeneratorMatrix subcode_within(const GeneratorMatrix& g, const std::vector<std::size_t>& t) {
  std::vector<bool> in_t(g.rows(), false);
  for (auto i : t) {
    if (i >= g.rows()) throw Error(Errc::IndexOutOfRange, "coordinate " + std::to_string(i));
    in_t[i] = true;
  }
  std::vector<std::size_t> outside;
  for (std::size_t i = 0; i < g.rows(); ++i)
    if (!in_t[i]) outside.push_back(i);
  std::vector<Vec> ker = kernel_basis(puncture(g, outside));
  const auto& f = g.field();
  GeneratorMatrix out(f, g.rows(), ker.size());
  for (std::size_t c = 0; c < ker.size(); ++c) {
    Vec col = encode(g, ker[c]);
    for (std::size_t i = 0; i < g.rows(); ++i) out.set(i, c, col[i]);
  }
  return out;
}

struct DenseSubcode {
  std::vector<std::size_t> coords;  // T: the subcode's support
  std::size_t dim = 0;
  Rational density = 0;
  std::uint64_t nodes = 0;  // flats visited
};

inline constexpr std::uint64_t kDefaultNodeBudget = 1ULL << 20;

namespace detail {

/// Exact maximum density over all subcodes. The support of C_T is T minus the row-span
/// closure of the complement, so the optimum sits on the complement of a flat F of the row
/// matroid: density (rank - rank F) / (weight outside F). Flats are enumerated by closure.
inline DenseSubcode densest_subcode_counted(const GeneratorMatrix& g, const std::vector<std::uint64_t>& mult,
                                            std::uint64_t node_budget) {
  const auto& f = g.field();
  const std::size_t k = g.cols();
  const std::size_t full = rank(g);
  DenseSubcode best;
  if (full == 0) return best;

  // projective classes of nonzero rows
  std::map<Vec, std::size_t> index;
  std::vector<Vec> reps;
  std::vector<std::uint64_t> gw;
  std::vector<std::vector<std::size_t>> members;
  for (std::size_t i = 0; i < g.rows(); ++i) {
    Vec r = g.row(i);
    std::size_t lead = 0;
    while (lead < k && !r[lead]) ++lead;
    if (lead == k) continue;
    std::uint32_t inv = f.inv(r[lead]);
    for (auto& v : r) v = f.mul(v, inv);
    auto [it, fresh] = index.emplace(r, reps.size());
    if (fresh) {
      reps.push_back(r);
      gw.push_back(0);
      members.emplace_back();
    }
    gw[it->second] += mult[i];
    members[it->second].push_back(i);
  }
  const std::size_t m = reps.size();
  std::uint64_t total = 0;
  for (auto w : gw) total += w;

  struct Flat {
    std::vector<bool> in;
    std::vector<std::size_t> basis;
    std::uint64_t weight;
  };
  auto close = [&](const std::vector<std::size_t>& gens) {
    RowSpace rs(f, k);
    Flat fl{std::vector<bool>(m, false), {}, 0};
    for (auto gi : gens)
      if (rs.insert(reps[gi])) fl.basis.push_back(gi);
    for (std::size_t gi = 0; gi < m; ++gi)
      if (rs.contains(reps[gi])) {
        fl.in[gi] = true;
        fl.weight += gw[gi];
      }
    return fl;
  };

  std::set<std::vector<bool>> seen;
  std::deque<Flat> queue;
  queue.push_back(close({}));
  seen.insert(queue.back().in);
  bool have = false;
  Flat best_flat;
  while (!queue.empty()) {
    Flat cur = std::move(queue.front());
    queue.pop_front();
    if (++best.nodes > node_budget)
      throw Error(Errc::BudgetExceeded, "densest subcode search exceeded " + std::to_string(node_budget) + " flats");
    Rational dens(full - cur.basis.size(), total - cur.weight);
    if (!have || dens > best.density) {
      have = true;
      best.density = dens;
      best.dim = full - cur.basis.size();
      best_flat = cur;
    }
    if (cur.basis.size() + 1 >= full) continue;
    for (std::size_t gi = 0; gi < m; ++gi) {
      if (cur.in[gi]) continue;
      std::vector<std::size_t> gens = cur.basis;
      gens.push_back(gi);
      Flat nxt = close(gens);
      if (seen.insert(nxt.in).second) queue.push_back(std::move(nxt));
    }
  }
  for (std::size_t gi = 0; gi < m; ++gi)
    if (!best_flat.in[gi]) best.coords.insert(best.coords.end(), members[gi].begin(), members[gi].end());
  std::sort(best.coords.begin(), best.coords.end());
  return best;
}

}  // namespace detail

/// Exact densest subcode (coordinate set, dimension, density) within a flat-count budget.
inline DenseSubcode densest_subcode_exact(const GeneratorMatrix& g, std::uint64_t node_budget = kDefaultNodeBudget) {
  return detail::densest_subcode_counted(g, std::vector<std::uint64_t>(g.rows(), 1), node_budget);
}

enum class DecompositionStage { AlreadySatisfied, Peeling, DenseRemoval, Escalation };

inline const char* stage_name(DecompositionStage s) {
  switch (s) {
    case DecompositionStage::AlreadySatisfied: return "already_satisfied";
    case DecompositionStage::Peeling: return "peeling";
    case DecompositionStage::DenseRemoval: return "dense_removal";
    case DecompositionStage::Escalation: return "escalation";
  }
  return "unknown";
}

struct DecompositionResult {
  std::vector<std::size_t> removed;  // S
  std::vector<std::size_t> kept;     // [n] \ S, increasing
  GeneratorMatrix residual;          // puncture(G, kept)
  CountingBoundReport report;        // on the residual at d
  DecompositionStage stage = DecompositionStage::AlreadySatisfied;
  std::size_t peels = 0;
  std::size_t dense_removals = 0;
  std::size_t escalations = 0;
  std::uint64_t threshold = 0;  // final peel threshold
};

struct DecompositionOptions {
  std::uint64_t enumeration_budget = kDefaultEnumerationBudget;
  std::uint64_t node_budget = kDefaultNodeBudget;
  bool allow_dense_removal = true;
};

namespace detail {

/// Minimum-weight nonzero codeword of the code on `alive` rows; weight 0 if the code is zero.
inline std::pair<std::uint64_t, Vec> lightest_codeword(const GeneratorMatrix& g, const std::vector<std::uint64_t>& mult,
                                                       std::uint64_t budget) {
  std::uint64_t w = 0, best = 0;
  Vec best_c;
  bool first = true;
  walk_codewords(
      g, [&](std::size_t i, bool, bool now) { now ? w += mult[i] : w -= mult[i]; },
      [&](const Vec& c, const Vec&) {
        if (!first && (best_c.empty() || w < best)) {
          best = w;
          best_c = c;
        }
        first = false;
      },
      budget);
  return {best, best_c};
}

inline DecompositionResult decompose_counted(const GeneratorMatrix& g, const std::vector<std::uint64_t>& mult,
                                             std::uint64_t d, const DecompositionOptions& opt) {
  if (d == 0) throw Error(Errc::InvalidArgument, "d must be >= 1");
  DecompositionResult res{{}, {}, g, {}, DecompositionStage::AlreadySatisfied, 0, 0, 0, d};
  std::vector<std::size_t> alive(g.rows());
  for (std::size_t i = 0; i < g.rows(); ++i) alive[i] = i;
  std::vector<bool> removed(g.rows(), false);
  auto sub_mult = [&]() {
    std::vector<std::uint64_t> m;
    m.reserve(alive.size());
    for (auto i : alive) m.push_back(mult[i]);
    return m;
  };
  auto drop = [&](const std::vector<std::size_t>& local) {
    for (auto t : local) removed[alive[t]] = true;
    std::vector<std::size_t> next;
    for (auto i : alive)
      if (!removed[i]) next.push_back(i);
    alive.swap(next);
  };

  std::uint64_t threshold = d;
  for (;;) {
    // peel light codewords
    for (;;) {
      GeneratorMatrix cur = puncture(g, alive);
      std::vector<std::uint64_t> m = sub_mult();
      auto [w, c] = lightest_codeword(cur, m, opt.enumeration_budget);
      if (c.empty() || w > threshold) break;
      std::vector<std::size_t> supp;
      for (std::size_t t = 0; t < c.size(); ++t)
        if (c[t]) supp.push_back(t);
      drop(supp);
      ++res.peels;
    }
    GeneratorMatrix cur = puncture(g, alive);
    std::vector<std::uint64_t> m = sub_mult();
    res.report = check_counting_bound_counted(cur, m, d, opt.enumeration_budget);
    if (res.report.pass()) break;
    if (!opt.allow_dense_removal) {
      threshold *= 2;
      ++res.escalations;
      continue;
    }
    try {
      DenseSubcode ds = densest_subcode_counted(cur, m, opt.node_budget);
      if (ds.density * d <= 1)
        throw Error(Errc::InternalInconsistency,
                    "counting bound fails at d=" + std::to_string(d) + " but the densest subcode has density " +
                        to_fraction_string(ds.density));
      drop(ds.coords);
      ++res.dense_removals;
    } catch (const Error& e) {
      if (e.code() != Errc::BudgetExceeded) throw;
      threshold *= 2;
      ++res.escalations;
    }
  }
  res.threshold = threshold;
  res.kept = alive;
  for (std::size_t i = 0; i < g.rows(); ++i)
    if (removed[i]) res.removed.push_back(i);
  res.residual = puncture(g, alive);
  if (res.escalations)
    res.stage = DecompositionStage::Escalation;
  else if (res.dense_removals)
    res.stage = DecompositionStage::DenseRemoval;
  else if (res.peels)
    res.stage = DecompositionStage::Peeling;
  return res;
}

}  // namespace detail

/// Removes a coordinate set S so that the rest has no nonzero codeword of weight <= d and
/// satisfies the counting bound at d. Layered: peel light codewords, check the bound, remove
/// the densest subcode's support on failure, and double the peel threshold if that search
/// runs out of budget.
inline DecompositionResult code_decomposition(const GeneratorMatrix& g, std::uint64_t d,
                                              const DecompositionOptions& opt = {}) {
  return detail::decompose_counted(g, std::vector<std::uint64_t>(g.rows(), 1), d, opt);
}

}  // namespace codesparse
