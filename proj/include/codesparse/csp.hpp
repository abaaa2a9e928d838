#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "code.hpp"
#include "error.hpp"
#include "field.hpp"
#include "rational.hpp"
#include "sparsify.hpp"

namespace codesparse {

/// Boolean predicate. table[idx] is the value at the assignment whose binary numeral
/// b_1 b_2 ... b_r equals idx (b_1 most significant).
struct Predicate {
  unsigned arity = 0;
  std::vector<bool> table;

  static Predicate from_bits(const std::string& bits) {
    std::size_t r = 0;
    while ((std::size_t{1} << r) < bits.size()) ++r;
    if (bits.empty() || (std::size_t{1} << r) != bits.size())
      throw Error(Errc::InvalidArgument, "truth table length " + std::to_string(bits.size()) + " is not a power of two");
    Predicate p{static_cast<unsigned>(r), std::vector<bool>(bits.size())};
    // leftmost character is the highest index
    for (std::size_t t = 0; t < bits.size(); ++t) {
      if (bits[t] != '0' && bits[t] != '1') throw Error(Errc::InvalidArgument, "truth table must be 0/1");
      p.table[bits.size() - 1 - t] = bits[t] == '1';
    }
    return p;
  }
  static Predicate from_index(unsigned arity, std::uint64_t mask) {
    Predicate p{arity, std::vector<bool>(std::size_t{1} << arity)};
    for (std::size_t i = 0; i < p.table.size(); ++i) p.table[i] = (mask >> i) & 1;
    return p;
  }
  std::string bits() const {
    std::string s;
    for (std::size_t t = table.size(); t-- > 0;) s += table[t] ? '1' : '0';
    return s;
  }
  bool eval(std::uint64_t idx) const { return table.at(idx); }
  /// Value at b (b[0] is b_1).
  bool eval(const std::vector<int>& b) const {
    std::uint64_t idx = 0;
    for (int v : b) idx = (idx << 1) | (v & 1);
    return eval(idx);
  }
  std::size_t satisfying_count() const { return static_cast<std::size_t>(std::count(table.begin(), table.end(), true)); }

  friend bool operator==(const Predicate&, const Predicate&) = default;
};

/// Unsatisfied exactly when a_0 + sum a_i b_i = 0 in F_p.
struct AffinePredicate {
  std::uint32_t p = 2;
  std::vector<std::uint32_t> a;  // a_0, a_1, ..., a_r

  unsigned arity() const { return static_cast<unsigned>(a.size() - 1); }
  bool eval(std::uint64_t idx) const {
    std::uint64_t s = a[0];
    const unsigned r = arity();
    for (unsigned i = 0; i < r; ++i)
      if ((idx >> (r - 1 - i)) & 1) s += a[i + 1];
    return s % p != 0;
  }
  Predicate to_predicate() const {
    Predicate out{arity(), std::vector<bool>(std::size_t{1} << arity())};
    for (std::size_t i = 0; i < out.table.size(); ++i) out.table[i] = eval(i);
    return out;
  }
  void validate() const {
    if (!is_prime(p)) throw Error(Errc::InvalidArgument, "affine predicate modulus is not prime");
    if (a.empty()) throw Error(Errc::InvalidArgument, "affine predicate needs a_0");
    for (auto v : a)
      if (v >= p) throw Error(Errc::InvalidArgument, "affine coefficient outside [0,p)");
  }
  friend bool operator==(const AffinePredicate&, const AffinePredicate&) = default;
};

struct Constraint {
  std::variant<AffinePredicate, Predicate> pred;
  std::vector<std::size_t> vars;
  Rational weight{1};

  unsigned arity() const {
    return std::holds_alternative<AffinePredicate>(pred) ? std::get<AffinePredicate>(pred).arity()
                                                         : std::get<Predicate>(pred).arity;
  }
  bool satisfied(std::uint64_t assignment) const {
    std::uint64_t idx = 0;
    for (auto v : vars) idx = (idx << 1) | ((assignment >> v) & 1);
    return std::holds_alternative<AffinePredicate>(pred) ? std::get<AffinePredicate>(pred).eval(idx)
                                                         : std::get<Predicate>(pred).eval(idx);
  }
  friend bool operator==(const Constraint&, const Constraint&) = default;
};

/// Assignments are bit masks: variable v is bit v.
struct CSPInstance {
  std::size_t k = 0;
  std::optional<std::uint32_t> p;  // declared modulus, if any
  std::vector<Constraint> constraints;

  void validate() const {
    for (std::size_t c = 0; c < constraints.size(); ++c) {
      const auto& con = constraints[c];
      if (con.vars.size() != con.arity())
        throw Error(Errc::DimensionMismatch, "constraint " + std::to_string(c) + " tuple length vs arity");
      for (auto v : con.vars)
        if (v >= k) throw Error(Errc::IndexOutOfRange, "constraint " + std::to_string(c) + " variable " + std::to_string(v));
      if (con.weight <= 0) throw Error(Errc::InvalidArgument, "constraint " + std::to_string(c) + " weight");
      if (auto* ap = std::get_if<AffinePredicate>(&con.pred)) ap->validate();
    }
  }
  friend bool operator==(const CSPInstance&, const CSPInstance&) = default;
};

namespace csps {

/// x_i + x_j over F_2 for every pair: the cut CSP of K_k.
inline CSPInstance xor2_complete(std::size_t k) {
  CSPInstance inst{k, 2u, {}};
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j) inst.constraints.push_back({AffinePredicate{2, {0, 1, 1}}, {i, j}, 1});
  return inst;
}

}  // namespace csps

inline Rational satisfied_weight(const CSPInstance& inst, std::uint64_t assignment) {
  Rational s = 0;
  for (const auto& c : inst.constraints)
    if (c.satisfied(assignment)) s += c.weight;
  return s;
}

/// Homogenized code: column 0 carries a_0, column 1 + v carries the coefficient of variable v.
inline std::pair<GeneratorMatrix, CoordinateWeights> affine_csp_to_code(const CSPInstance& inst) {
  inst.validate();
  std::optional<std::uint32_t> p = inst.p;
  for (std::size_t c = 0; c < inst.constraints.size(); ++c) {
    const auto* ap = std::get_if<AffinePredicate>(&inst.constraints[c].pred);
    if (!ap) throw Error(Errc::NonAffinePredicate, "constraint " + std::to_string(c) + " is a truth table");
    if (p && *p != ap->p)
      throw Error(Errc::MixedPrimes, "constraint " + std::to_string(c) + " uses p=" + std::to_string(ap->p) +
                                         " but the instance uses p=" + std::to_string(*p));
    p = ap->p;
  }
  PrimeField f(p ? *p : 2);
  GeneratorMatrix g(f, inst.constraints.size(), inst.k + 1);
  std::vector<Rational> w;
  for (std::size_t c = 0; c < inst.constraints.size(); ++c) {
    const auto& con = inst.constraints[c];
    const auto& ap = std::get<AffinePredicate>(con.pred);
    g.set(c, 0, ap.a[0]);
    for (std::size_t t = 0; t < con.vars.size(); ++t) g.set(c, 1 + con.vars[t], f.add(g(c, 1 + con.vars[t]), ap.a[t + 1]));
    w.push_back(con.weight);
  }
  return {g, CoordinateWeights(std::move(w))};
}

/// First coefficient vector (lexicographic in a_0..a_r) over F_p whose zero set on {0,1}^r is
/// exactly P's unsatisfying set.
inline std::optional<AffinePredicate> find_linear_representation_over(const Predicate& pred, std::uint32_t p) {
  if (pred.arity > 5) throw Error(Errc::ArityTooLarge, "linear representation search supports arity <= 5");
  const unsigned len = pred.arity + 1;
  AffinePredicate ap{p, std::vector<std::uint32_t>(len, 0)};
  for (;;) {
    bool ok = true;
    for (std::size_t idx = 0; idx < pred.table.size() && ok; ++idx) ok = ap.eval(idx) == pred.table[idx];
    if (ok) return ap;
    unsigned j = len;
    while (j-- > 0) {
      if (++ap.a[j] < p) break;
      ap.a[j] = 0;
      if (j == 0) return std::nullopt;
    }
  }
}

inline constexpr std::array<std::uint32_t, 4> kRepresentationPrimes = {2, 3, 5, 7};

inline std::optional<AffinePredicate> find_linear_representation(const Predicate& pred) {
  for (auto p : kRepresentationPrimes)
    if (auto r = find_linear_representation_over(pred, p)) return r;
  return std::nullopt;
}

enum class Literal { Zero, One, X, NotX, Y, NotY };

inline const char* literal_name(Literal l) {
  switch (l) {
    case Literal::Zero: return "0";
    case Literal::One: return "1";
    case Literal::X: return "x";
    case Literal::NotX: return "!x";
    case Literal::Y: return "y";
    case Literal::NotY: return "!y";
  }
  return "?";
}

/// Searches pi in {0,1,x,!x,y,!y}^r with P(pi) = x AND y on all four (x, y); no output negation.
inline std::optional<std::vector<Literal>> has_affine_projection_to_and(const Predicate& pred) {
  if (pred.arity > 8) throw Error(Errc::ArityTooLarge, "projection search supports arity <= 8");
  const unsigned r = pred.arity;
  std::vector<int> digit(r, 0);
  for (;;) {
    bool ok = true;
    for (int x = 0; x < 2 && ok; ++x)
      for (int y = 0; y < 2 && ok; ++y) {
        std::uint64_t idx = 0;
        for (unsigned i = 0; i < r; ++i) {
          int b = 0;
          switch (static_cast<Literal>(digit[i])) {
            case Literal::Zero: b = 0; break;
            case Literal::One: b = 1; break;
            case Literal::X: b = x; break;
            case Literal::NotX: b = 1 - x; break;
            case Literal::Y: b = y; break;
            case Literal::NotY: b = 1 - y; break;
          }
          idx = (idx << 1) | static_cast<std::uint64_t>(b);
        }
        ok = pred.eval(idx) == (x && y);
      }
    if (ok) {
      std::vector<Literal> w;
      for (int d : digit) w.push_back(static_cast<Literal>(d));
      return w;
    }
    unsigned j = r;
    bool done = true;
    while (j-- > 0) {
      if (++digit[j] < 6) {
        done = false;
        break;
      }
      digit[j] = 0;
    }
    if (done) return std::nullopt;
  }
}

struct TernaryClassification {
  enum class Verdict { SparsifiableLinear, RequiresQuadratic };
  Verdict verdict;
  std::optional<AffinePredicate> representation;
  std::optional<std::vector<Literal>> projection;
};

inline const char* verdict_name(TernaryClassification::Verdict v) {
  return v == TernaryClassification::Verdict::SparsifiableLinear ? "sparsifiable_linear" : "requires_quadratic";
}

/// Exactly one of the two searches must succeed on a ternary predicate.
inline TernaryClassification ternary_classify(const Predicate& pred) {
  if (pred.arity != 3) throw Error(Errc::InvalidArgument, "ternary_classify needs arity 3");
  auto proj = has_affine_projection_to_and(pred);
  auto rep = find_linear_representation(pred);
  if (proj.has_value() == rep.has_value())
    throw Error(Errc::InternalInconsistency, "predicate " + pred.bits() + ": projection search and representation search " +
                                                 (proj ? "both succeed" : "both fail"));
  if (proj) return {TernaryClassification::Verdict::RequiresQuadratic, std::nullopt, proj};
  return {TernaryClassification::Verdict::SparsifiableLinear, rep, std::nullopt};
}

/// Rewrites truth-table constraints as affine predicates over one common prime (the declared
/// one, else the first of 2, 3, 5, 7 that represents every constraint).
inline CSPInstance linearize(const CSPInstance& inst) {
  inst.validate();
  std::vector<std::uint32_t> candidates;
  if (inst.p) {
    candidates = {*inst.p};
  } else {
    std::optional<std::uint32_t> fixed;
    for (const auto& c : inst.constraints)
      if (auto* ap = std::get_if<AffinePredicate>(&c.pred)) {
        if (fixed && *fixed != ap->p) throw Error(Errc::MixedPrimes, "affine constraints over different primes");
        fixed = ap->p;
      }
    if (fixed)
      candidates = {*fixed};
    else
      candidates.assign(kRepresentationPrimes.begin(), kRepresentationPrimes.end());
  }
  for (auto p : candidates) {
    CSPInstance out{inst.k, p, {}};
    bool ok = true;
    for (const auto& c : inst.constraints) {
      if (auto* ap = std::get_if<AffinePredicate>(&c.pred)) {
        if (ap->p != p) throw Error(Errc::MixedPrimes, "affine constraint over p=" + std::to_string(ap->p));
        out.constraints.push_back(c);
        continue;
      }
      auto rep = find_linear_representation_over(std::get<Predicate>(c.pred), p);
      if (!rep) {
        ok = false;
        break;
      }
      out.constraints.push_back({*rep, c.vars, c.weight});
    }
    if (ok) return out;
  }
  throw Error(Errc::NonAffinePredicate, "some truth-table constraint has no affine form over a common prime");
}

struct CSPSparsifyResult {
  CSPInstance sparsifier;
  std::vector<std::size_t> origin;
};

inline CSPSparsifyResult sparsify_affine_csp(const CSPInstance& inst, const SparsifyParams& p) {
  auto [g, w] = affine_csp_to_code(inst);
  Sparsifier sp = final_code_sparsify(g, w, p);
  CSPSparsifyResult res;
  res.sparsifier.k = inst.k;
  res.sparsifier.p = g.q();
  for (std::size_t t = 0; t < sp.size(); ++t) {
    Constraint c = inst.constraints[sp.coords[t]];
    c.weight = sp.weights[t];
    res.sparsifier.constraints.push_back(std::move(c));
    res.origin.push_back(sp.coords[t]);
  }
  return res;
}

/// Exhaustive (1 +- eps) comparison of satisfied weight over all 2^k assignments.
inline VerificationReport verify_csp_sparsifier(const CSPInstance& base, const CSPInstance& sp, const Rational& eps) {
  if (base.k != sp.k) throw Error(Errc::DimensionMismatch, "variable counts differ");
  if (base.k > 24) throw Error(Errc::BudgetExceeded, "too many variables for exhaustive check");
  VerificationReport rep;
  for (std::uint64_t x = 0; x < (1ULL << base.k); ++x) {
    ++rep.checked;
    Rational a = satisfied_weight(base, x), b = satisfied_weight(sp, x);
    bool ok;
    if (a == 0) {
      ok = b == 0;
    } else {
      Rational rel = abs(b - a) / a;
      if (rel > rep.max_relative_error) rep.max_relative_error = rel;
      ok = rel <= eps;
    }
    if (!ok && rep.pass) {
      rep.pass = false;
      rep.witness = "assignment " + std::to_string(x) + ": satisfied weight " + to_fraction_string(a) + " became " +
                    to_fraction_string(b);
    }
  }
  return rep;
}

}  // namespace codesparse
