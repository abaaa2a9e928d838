#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "field.hpp"
#include "random.hpp"
#include "rational.hpp"

namespace codesparse {

using Vec = std::vector<std::uint32_t>;

inline constexpr std::uint64_t kDefaultEnumerationBudget = 1ULL << 24;

/// n x k matrix over F_p; codewords are G x for messages x in F_p^k.
class GeneratorMatrix {
 public:
  GeneratorMatrix(PrimeField f, std::size_t n, std::size_t k) : f_(f), n_(n), k_(k), a_(n * k, 0) {}

  /// Rows are reduced mod p. Every row must have length k.
  static GeneratorMatrix from_rows(PrimeField f, std::size_t k, const std::vector<std::vector<std::int64_t>>& rows) {
    GeneratorMatrix g(f, rows.size(), k);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != k)
        throw Error(Errc::DimensionMismatch, "row " + std::to_string(i) + " has " + std::to_string(rows[i].size()) +
                                                 " entries, expected " + std::to_string(k));
      for (std::size_t j = 0; j < k; ++j) g.set(i, j, f.reduce(rows[i][j]));
    }
    return g;
  }

  const PrimeField& field() const noexcept { return f_; }
  std::uint32_t q() const noexcept { return f_.modulus(); }
  std::size_t rows() const noexcept { return n_; }
  std::size_t cols() const noexcept { return k_; }

  std::uint32_t operator()(std::size_t i, std::size_t j) const noexcept { return a_[i * k_ + j]; }
  std::uint32_t at(std::size_t i, std::size_t j) const {
    if (i >= n_ || j >= k_) throw Error(Errc::IndexOutOfRange, "entry (" + std::to_string(i) + "," + std::to_string(j) + ")");
    return (*this)(i, j);
  }
  void set(std::size_t i, std::size_t j, std::uint32_t v) { a_[i * k_ + j] = f_.reduce(v); }

  Vec row(std::size_t i) const { return Vec(a_.begin() + i * k_, a_.begin() + (i + 1) * k_); }
  Vec column(std::size_t j) const {
    Vec c(n_);
    for (std::size_t i = 0; i < n_; ++i) c[i] = (*this)(i, j);
    return c;
  }
  bool row_is_zero(std::size_t i) const {
    for (std::size_t j = 0; j < k_; ++j)
      if ((*this)(i, j)) return false;
    return true;
  }

  void append_row(const Vec& r) {
    if (r.size() != k_) throw Error(Errc::DimensionMismatch, "row length");
    a_.insert(a_.end(), r.begin(), r.end());
    ++n_;
  }

  friend bool operator==(const GeneratorMatrix& a, const GeneratorMatrix& b) {
    return a.f_ == b.f_ && a.n_ == b.n_ && a.k_ == b.k_ && a.a_ == b.a_;
  }

 private:
  PrimeField f_;
  std::size_t n_, k_;
  std::vector<std::uint32_t> a_;
};

namespace codes {

inline GeneratorMatrix identity(PrimeField f, std::size_t k) {
  GeneratorMatrix g(f, k, k);
  for (std::size_t i = 0; i < k; ++i) g.set(i, i, 1);
  return g;
}

inline GeneratorMatrix repetition(PrimeField f, std::size_t n) {
  GeneratorMatrix g(f, n, 1);
  for (std::size_t i = 0; i < n; ++i) g.set(i, 0, 1);
  return g;
}

/// Systematic [7,4] Hamming code over F_2.
inline GeneratorMatrix hamming74() {
  return GeneratorMatrix::from_rows(PrimeField(2), 4,
                                    {{1, 0, 0, 0},
                                     {0, 1, 0, 0},
                                     {0, 0, 1, 0},
                                     {0, 0, 0, 1},
                                     {1, 1, 0, 1},
                                     {1, 0, 1, 1},
                                     {0, 1, 1, 1}});
}

/// All nonzero vectors of F_2^k as rows, in increasing integer order (bit j is column j).
inline GeneratorMatrix simplex(std::size_t k) {
  GeneratorMatrix g(PrimeField(2), (std::size_t{1} << k) - 1, k);
  for (std::size_t v = 1; v < (std::size_t{1} << k); ++v)
    for (std::size_t j = 0; j < k; ++j) g.set(v - 1, j, (v >> j) & 1);
  return g;
}

/// Uniform random entries.
inline GeneratorMatrix random(PrimeField f, std::size_t n, std::size_t k, std::uint64_t seed) {
  Rng rng(seed);
  GeneratorMatrix g(f, n, k);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < k; ++j) g.set(i, j, static_cast<std::uint32_t>(rng.below(f.modulus())));
  return g;
}

/// Identity on the first k rows; every further row is either a copy of a random identity row
/// or a random nonzero combination, with equal odds.
inline GeneratorMatrix identity_plus_redundancy(PrimeField f, std::size_t k, std::size_t n, std::uint64_t seed) {
  if (n < k) throw Error(Errc::InvalidArgument, "n must be at least k");
  Rng rng(seed);
  GeneratorMatrix g = identity(f, k);
  for (std::size_t i = k; i < n; ++i) {
    Vec r(k, 0);
    if (rng.below(2) == 0) {
      r[rng.below(k)] = 1;
    } else {
      while (std::all_of(r.begin(), r.end(), [](std::uint32_t v) { return v == 0; }))
        for (auto& v : r) v = static_cast<std::uint32_t>(rng.below(f.modulus()));
    }
    g.append_row(r);
  }
  return g;
}

}  // namespace codes

inline Vec encode(const GeneratorMatrix& g, const Vec& x) {
  if (x.size() != g.cols())
    throw Error(Errc::DimensionMismatch, "message length " + std::to_string(x.size()) + " vs k=" + std::to_string(g.cols()));
  const auto& f = g.field();
  Vec c(g.rows(), 0);
  for (std::size_t i = 0; i < g.rows(); ++i) {
    std::uint64_t acc = 0;
    for (std::size_t j = 0; j < g.cols(); ++j) acc = (acc + static_cast<std::uint64_t>(g(i, j)) * f.reduce(x[j])) % f.modulus();
    c[i] = static_cast<std::uint32_t>(acc);
  }
  return c;
}

/// Positive rational weight per coordinate.
class CoordinateWeights {
 public:
  CoordinateWeights() = default;
  explicit CoordinateWeights(std::vector<Rational> w) : w_(std::move(w)) {
    for (std::size_t i = 0; i < w_.size(); ++i)
      if (w_[i] <= 0) throw Error(Errc::InvalidArgument, "weight " + std::to_string(i) + " is not positive");
  }
  static CoordinateWeights unit(std::size_t n) { return CoordinateWeights(std::vector<Rational>(n, Rational(1))); }

  std::size_t size() const noexcept { return w_.size(); }
  const Rational& operator[](std::size_t i) const { return w_[i]; }
  const std::vector<Rational>& values() const noexcept { return w_; }
  bool all_unit() const {
    return std::all_of(w_.begin(), w_.end(), [](const Rational& r) { return r == 1; });
  }
  Rational min() const {
    if (w_.empty()) throw Error(Errc::EmptyCode, "no weights");
    return *std::min_element(w_.begin(), w_.end());
  }

  friend bool operator==(const CoordinateWeights&, const CoordinateWeights&) = default;

 private:
  std::vector<Rational> w_;
};

/// Retained coordinates (strictly increasing) with positive weights.
struct Sparsifier {
  std::vector<std::size_t> coords;
  std::vector<Rational> weights;

  std::size_t size() const noexcept { return coords.size(); }

  void validate(std::size_t n) const {
    if (coords.size() != weights.size()) throw Error(Errc::DimensionMismatch, "coords/weights length");
    for (std::size_t i = 0; i < coords.size(); ++i) {
      if (coords[i] >= n) throw Error(Errc::IndexOutOfRange, "coordinate " + std::to_string(coords[i]));
      if (i && coords[i] <= coords[i - 1]) throw Error(Errc::InvalidArgument, "coordinates not strictly increasing");
      if (weights[i] <= 0) throw Error(Errc::InvalidArgument, "non-positive sparsifier weight");
    }
  }

  static Sparsifier identity(const CoordinateWeights& w) {
    Sparsifier s;
    for (std::size_t i = 0; i < w.size(); ++i) {
      s.coords.push_back(i);
      s.weights.push_back(w[i]);
    }
    return s;
  }

  friend bool operator==(const Sparsifier&, const Sparsifier&) = default;
};

/// Builds a Sparsifier from (coordinate, weight) pairs, adding weights of repeats.
inline Sparsifier merge_to_sparsifier(std::vector<std::pair<std::size_t, Rational>> items) {
  std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  Sparsifier s;
  for (auto& [c, w] : items) {
    if (!s.coords.empty() && s.coords.back() == c) {
      s.weights.back() += w;
    } else {
      s.coords.push_back(c);
      s.weights.push_back(w);
    }
  }
  return s;
}

inline std::size_t weight(const Vec& c) {
  return static_cast<std::size_t>(std::count_if(c.begin(), c.end(), [](std::uint32_t v) { return v != 0; }));
}

inline Rational weight(const Vec& c, const CoordinateWeights& w) {
  if (w.size() != c.size()) throw Error(Errc::DimensionMismatch, "codeword and weight lengths differ");
  Rational s = 0;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (c[i]) s += w[i];
  return s;
}

/// Weighted weight of c restricted to the sparsifier's coordinates.
inline Rational weight(const Vec& c, const Sparsifier& sp) {
  Rational s = 0;
  for (std::size_t t = 0; t < sp.coords.size(); ++t) {
    if (sp.coords[t] >= c.size()) throw Error(Errc::IndexOutOfRange, "sparsifier coordinate");
    if (c[sp.coords[t]]) s += sp.weights[t];
  }
  return s;
}

inline GeneratorMatrix puncture(const GeneratorMatrix& g, const std::vector<std::size_t>& s) {
  GeneratorMatrix out(g.field(), s.size(), g.cols());
  for (std::size_t t = 0; t < s.size(); ++t) {
    if (s[t] >= g.rows()) throw Error(Errc::IndexOutOfRange, "coordinate " + std::to_string(s[t]));
    for (std::size_t j = 0; j < g.cols(); ++j) out.set(t, j, g(s[t], j));
  }
  return out;
}

inline GeneratorMatrix select_columns(const GeneratorMatrix& g, const std::vector<std::size_t>& cols) {
  GeneratorMatrix out(g.field(), g.rows(), cols.size());
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t t = 0; t < cols.size(); ++t) out.set(i, t, g(i, cols[t]));
  return out;
}

/// Incrementally built row space with normalized pivots.
class RowSpace {
 public:
  RowSpace(PrimeField f, std::size_t dim) : f_(f), dim_(dim) {}

  std::size_t rank() const noexcept { return basis_.size(); }

  /// Reduces v in place against the basis; returns the first nonzero index or dim.
  std::size_t reduce(Vec& v) const {
    for (std::size_t b = 0; b < basis_.size(); ++b) {
      std::uint32_t c = v[pivots_[b]];
      if (!c) continue;
      const Vec& row = basis_[b];
      for (std::size_t j = pivots_[b]; j < dim_; ++j)
        if (row[j]) v[j] = f_.sub(v[j], f_.mul(c, row[j]));
    }
    for (std::size_t j = 0; j < dim_; ++j)
      if (v[j]) return j;
    return dim_;
  }

  bool contains(Vec v) const { return reduce(v) == dim_; }

  /// Adds v; returns false when v was already in the span.
  bool insert(Vec v) {
    std::size_t piv = reduce(v);
    if (piv == dim_) return false;
    std::uint32_t inv = f_.inv(v[piv]);
    for (std::size_t j = piv; j < dim_; ++j) v[j] = f_.mul(v[j], inv);
    basis_.push_back(std::move(v));
    pivots_.push_back(piv);
    return true;
  }

 private:
  PrimeField f_;
  std::size_t dim_;
  std::vector<Vec> basis_;
  std::vector<std::size_t> pivots_;
};

/// Reduced row echelon form of the n x k matrix, with its pivot columns.
struct Echelon {
  std::vector<Vec> rows;  // rank rows, each of length k
  std::vector<std::size_t> pivots;
};

inline Echelon reduced_echelon(const GeneratorMatrix& g) {
  const auto& f = g.field();
  std::vector<Vec> m;
  m.reserve(g.rows());
  for (std::size_t i = 0; i < g.rows(); ++i) m.push_back(g.row(i));
  Echelon e;
  std::size_t r = 0;
  for (std::size_t c = 0; c < g.cols() && r < m.size(); ++c) {
    std::size_t piv = r;
    while (piv < m.size() && !m[piv][c]) ++piv;
    if (piv == m.size()) continue;
    std::swap(m[r], m[piv]);
    std::uint32_t inv = f.inv(m[r][c]);
    for (auto& v : m[r]) v = f.mul(v, inv);
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i == r || !m[i][c]) continue;
      std::uint32_t factor = m[i][c];
      for (std::size_t j = c; j < g.cols(); ++j)
        if (m[r][j]) m[i][j] = f.sub(m[i][j], f.mul(factor, m[r][j]));
    }
    e.pivots.push_back(c);
    ++r;
  }
  m.resize(r);
  e.rows = std::move(m);
  return e;
}

inline std::size_t rank(const GeneratorMatrix& g) {
  RowSpace rs(g.field(), g.cols());
  for (std::size_t i = 0; i < g.rows() && rs.rank() < g.cols(); ++i) rs.insert(g.row(i));
  return rs.rank();
}

/// Indices of a maximal linearly independent set of columns (leftmost choice).
inline std::vector<std::size_t> column_basis(const GeneratorMatrix& g) { return reduced_echelon(g).pivots; }

/// Basis of {x : G x = 0}; rank + size = k.
inline std::vector<Vec> kernel_basis(const GeneratorMatrix& g) {
  const auto& f = g.field();
  Echelon e = reduced_echelon(g);
  std::vector<bool> is_pivot(g.cols(), false);
  for (auto c : e.pivots) is_pivot[c] = true;
  std::vector<Vec> out;
  for (std::size_t fc = 0; fc < g.cols(); ++fc) {
    if (is_pivot[fc]) continue;
    Vec x(g.cols(), 0);
    x[fc] = 1;
    for (std::size_t r = 0; r < e.pivots.size(); ++r) x[e.pivots[r]] = f.neg(e.rows[r][fc]);
    out.push_back(std::move(x));
  }
  return out;
}

inline bool in_column_span(const GeneratorMatrix& g, const Vec& c) {
  if (c.size() != g.rows()) throw Error(Errc::DimensionMismatch, "vector length vs n");
  RowSpace rs(g.field(), g.rows());
  for (std::size_t j = 0; j < g.cols(); ++j) rs.insert(g.column(j));
  return rs.contains(c);
}

/// p^r as a saturating 64-bit count.
inline std::uint64_t saturating_power(std::uint64_t p, std::size_t r) {
  std::uint64_t v = 1;
  for (std::size_t i = 0; i < r; ++i) {
    if (v > std::numeric_limits<std::uint64_t>::max() / p) return std::numeric_limits<std::uint64_t>::max();
    v *= p;
  }
  return v;
}

/// Walks every distinct codeword once (p^rank of them) by counting over the
/// coefficients of a column basis. `update(i, was_nonzero, now_nonzero)` fires for every
/// coordinate whose zero/nonzero status flips; `visit(c, x)` sees the codeword and a message
/// producing it. The zero codeword is visited first.
template <class Update, class Visit>
void walk_codewords(const GeneratorMatrix& g, Update&& update, Visit&& visit,
                    std::uint64_t budget = kDefaultEnumerationBudget) {
  const auto& f = g.field();
  const std::uint32_t p = f.modulus();
  std::vector<std::size_t> basis = column_basis(g);
  const std::size_t r = basis.size();
  if (saturating_power(p, r) > budget)
    throw Error(Errc::BudgetExceeded, std::to_string(p) + "^" + std::to_string(r) + " codewords exceed budget " +
                                          std::to_string(budget));
  std::vector<std::vector<std::pair<std::size_t, std::uint32_t>>> cols(r);
  for (std::size_t t = 0; t < r; ++t)
    for (std::size_t i = 0; i < g.rows(); ++i)
      if (g(i, basis[t])) cols[t].emplace_back(i, g(i, basis[t]));
  Vec c(g.rows(), 0), x(g.cols(), 0), digits(r, 0);
  visit(static_cast<const Vec&>(c), static_cast<const Vec&>(x));
  for (;;) {
    std::size_t j = 0;
    for (; j < r; ++j) {
      for (auto [i, v] : cols[j]) {
        std::uint32_t old = c[i];
        c[i] = f.add(old, v);
        if ((old != 0) != (c[i] != 0)) update(i, old != 0, c[i] != 0);
      }
      if (++digits[j] == p) {
        digits[j] = 0;
        x[basis[j]] = 0;
        continue;
      }
      x[basis[j]] = digits[j];
      break;
    }
    if (j == r) return;
    visit(static_cast<const Vec&>(c), static_cast<const Vec&>(x));
  }
}

template <class Visit>
void for_each_codeword(const GeneratorMatrix& g, Visit&& visit, std::uint64_t budget = kDefaultEnumerationBudget) {
  walk_codewords(g, [](std::size_t, bool, bool) {}, std::forward<Visit>(visit), budget);
}

inline std::vector<Vec> enumerate_codewords(const GeneratorMatrix& g, std::uint64_t budget = kDefaultEnumerationBudget) {
  std::vector<Vec> out;
  for_each_codeword(g, [&](const Vec& c, const Vec&) { out.push_back(c); }, budget);
  return out;
}

/// Histogram: weight -> number of distinct codewords of that weight.
inline std::vector<std::uint64_t> weight_distribution(const GeneratorMatrix& g,
                                                      std::uint64_t budget = kDefaultEnumerationBudget) {
  std::vector<std::uint64_t> hist(g.rows() + 1, 0);
  std::size_t w = 0;
  walk_codewords(
      g, [&](std::size_t, bool was, bool now) { w = w + now - was; }, [&](const Vec&, const Vec&) { ++hist[w]; },
      budget);
  return hist;
}

inline std::vector<std::size_t> support(const GeneratorMatrix& g) {
  std::vector<std::size_t> s;
  for (std::size_t i = 0; i < g.rows(); ++i)
    if (!g.row_is_zero(i)) s.push_back(i);
  return s;
}

/// rank / |support|; the empty code has density 0.
inline Rational density(const GeneratorMatrix& g) {
  std::size_t r = rank(g);
  if (r == 0) return Rational(0);
  return Rational(r, support(g).size());
}

inline std::size_t min_distance(const GeneratorMatrix& g, std::uint64_t budget = kDefaultEnumerationBudget) {
  if (rank(g) == 0) throw Error(Errc::ZeroCode, "min_distance of the zero code");
  std::size_t w = 0, best = g.rows() + 1;
  bool first = true;
  walk_codewords(
      g, [&](std::size_t, bool was, bool now) { w = w + now - was; },
      [&](const Vec&, const Vec&) {
        if (!first && w < best) best = w;
        first = false;
      },
      budget);
  return best;
}

struct VerificationReport {
  bool pass = true;
  Rational max_relative_error = 0;
  std::string witness;  // set on failure
  std::uint64_t checked = 0;
};

namespace detail {

/// Weights as integer numerators over one common denominator.
struct ScaledWeights {
  std::vector<BigInt> num;
  BigInt den = 1;
  bool fits_i64 = true;
  std::vector<std::int64_t> small;

  explicit ScaledWeights(const std::vector<Rational>& w) {
    for (const auto& r : w) den = boost::multiprecision::lcm(den, denominator_of(r));
    BigInt total = 0;
    num.reserve(w.size());
    for (const auto& r : w) {
      num.push_back(numerator_of(r) * (den / denominator_of(r)));
      total += num.back();
    }
    fits_i64 = total < (BigInt(1) << 62);
    if (fits_i64)
      for (const auto& v : num) small.push_back(static_cast<std::int64_t>(v));
  }
};

inline std::string render_vec(const Vec& v) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  os << ")";
  return os.str();
}

}  // namespace detail

/// Checks (1-eps) wt_base(c) <= wt_sp(c|_S) <= (1+eps) wt_base(c) for every distinct codeword.
inline VerificationReport verify_sparsifier(const GeneratorMatrix& g, const CoordinateWeights& base,
                                            const Sparsifier& sp, const Rational& eps,
                                            std::uint64_t budget = kDefaultEnumerationBudget) {
  if (base.size() != g.rows()) throw Error(Errc::DimensionMismatch, "base weights vs n");
  sp.validate(g.rows());
  std::vector<Rational> spw(g.rows(), Rational(0));
  for (std::size_t t = 0; t < sp.size(); ++t) spw[sp.coords[t]] = sp.weights[t];
  detail::ScaledWeights bw(base.values());
  // zero entries are fine here: only the sum matters
  detail::ScaledWeights sw(spw);
  const bool fast = bw.fits_i64 && sw.fits_i64;
  std::int64_t bsum = 0, ssum = 0;
  BigInt bbig = 0, sbig = 0;
  const BigInt lo = denominator_of(eps) - numerator_of(eps);
  const BigInt hi = denominator_of(eps) + numerator_of(eps);
  const BigInt ed = denominator_of(eps);

  VerificationReport rep;
  rep.pass = true;
  walk_codewords(
      g,
      [&](std::size_t i, bool, bool now) {
        if (fast) {
          bsum += now ? bw.small[i] : -bw.small[i];
          ssum += now ? sw.small[i] : -sw.small[i];
        } else {
          if (now) {
            bbig += bw.num[i];
            sbig += sw.num[i];
          } else {
            bbig -= bw.num[i];
            sbig -= sw.num[i];
          }
        }
      },
      [&](const Vec& c, const Vec& x) {
        ++rep.checked;
        BigInt b = fast ? BigInt(bsum) : bbig;
        BigInt s = fast ? BigInt(ssum) : sbig;
        // compare s/sw.den against b/bw.den
        BigInt bs = b * sw.den;  // base, on the sparsifier's scale
        BigInt ss = s * bw.den;
        if (b == 0) {
          if (s != 0) {
            rep.pass = false;
            if (rep.witness.empty())
              rep.witness = "codeword " + detail::render_vec(c) + " has base weight 0 but sparsified weight > 0";
          }
          return;
        }
        BigInt diff = ss > bs ? BigInt(ss - bs) : BigInt(bs - ss);
        // diff/bs > current max?
        if (diff * denominator_of(rep.max_relative_error) > numerator_of(rep.max_relative_error) * bs)
          rep.max_relative_error = Rational(diff, bs);
        bool ok = lo * bs <= ed * ss && ed * ss <= hi * bs;
        if (!ok) {
          if (rep.pass) {
            rep.witness = "message " + detail::render_vec(x) + " codeword " + detail::render_vec(c) +
                          ": base weight " + to_fraction_string(Rational(b, bw.den)) + ", sparsified weight " +
                          to_fraction_string(Rational(s, sw.den)) + ", outside (1+-" + to_fraction_string(eps) + ")";
          }
          rep.pass = false;
        }
      },
      budget);
  return rep;
}

/// Row i repeated floor(100 w_i / (eps w_min)) times; every copy carries `scale` = w_min eps / 100.
struct UnweightedExpansion {
  std::vector<std::uint64_t> copies;
  Rational scale;

  GeneratorMatrix expand(const GeneratorMatrix& g) const {
    GeneratorMatrix out(g.field(), 0, g.cols());
    for (std::size_t i = 0; i < copies.size(); ++i)
      for (std::uint64_t t = 0; t < copies[i]; ++t) out.append_row(g.row(i));
    return out;
  }
  std::vector<std::size_t> origin() const {
    std::vector<std::size_t> o;
    for (std::size_t i = 0; i < copies.size(); ++i) o.insert(o.end(), copies[i], i);
    return o;
  }
};

inline UnweightedExpansion weighted_to_unweighted(const CoordinateWeights& w, const Rational& eps) {
  if (w.size() == 0) throw Error(Errc::EmptyCode, "weighted_to_unweighted on an empty code");
  if (eps <= 0) throw Error(Errc::InvalidArgument, "epsilon must be positive");
  Rational wmin = w.min();
  UnweightedExpansion u;
  u.scale = wmin * eps / 100;
  for (std::size_t i = 0; i < w.size(); ++i) u.copies.push_back(static_cast<std::uint64_t>(floor_of(100 * w[i] / (eps * wmin))));
  return u;
}

inline std::pair<GeneratorMatrix, Rational> weighted_to_unweighted(const GeneratorMatrix& g, const CoordinateWeights& w,
                                                                   const Rational& eps) {
  if (w.size() != g.rows()) throw Error(Errc::DimensionMismatch, "weights vs n");
  UnweightedExpansion u = weighted_to_unweighted(w, eps);
  return {u.expand(g), u.scale};
}

}  // namespace codesparse
