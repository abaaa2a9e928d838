#pragma once

#include <cstddef>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "cayley.hpp"
#include "code.hpp"
#include "csp.hpp"
#include "error.hpp"
#include "graphs.hpp"
#include "hypergraphs.hpp"
#include "rational.hpp"

namespace codesparse::io {

struct Token {
  std::string text;
  std::size_t line, col;  // 1-based
};

/// Whitespace tokenizer over lines; blank lines and lines starting with '#' are skipped.
class Lines {
 public:
  explicit Lines(std::string_view text, std::string source = "input") : source_(std::move(source)) {
    std::size_t line = 1, pos = 0;
    while (pos <= text.size()) {
      std::size_t end = text.find('\n', pos);
      if (end == std::string_view::npos) end = text.size();
      std::string_view l = text.substr(pos, end - pos);
      std::vector<Token> toks;
      std::size_t i = 0;
      while (i < l.size()) {
        while (i < l.size() && (l[i] == ' ' || l[i] == '\t' || l[i] == '\r')) ++i;
        std::size_t s = i;
        while (i < l.size() && l[i] != ' ' && l[i] != '\t' && l[i] != '\r') ++i;
        if (i > s) toks.push_back({std::string(l.substr(s, i - s)), line, s + 1});
      }
      if (!toks.empty() && toks[0].text[0] != '#') lines_.push_back(std::move(toks));
      last_line_ = line;
      ++line;
      pos = end + 1;
    }
  }

  bool done() const { return next_ >= lines_.size(); }
  const std::vector<Token>& next(const char* what) {
    if (done()) fail(last_line_, 1, std::string("unexpected end of file, expected ") + what);
    return lines_[next_++];
  }
  const std::vector<Token>* peek() const { return done() ? nullptr : &lines_[next_]; }

  [[noreturn]] void fail(std::size_t line, std::size_t col, const std::string& msg) const {
    throw Error(Errc::ParseError, source_ + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + msg);
  }
  [[noreturn]] void fail(const Token& t, const std::string& msg) const { fail(t.line, t.col, msg); }

  std::uint64_t integer(const Token& t) const {
    if (t.text.empty() || t.text.find_first_not_of("0123456789") != std::string::npos) fail(t, "expected a non-negative integer, got '" + t.text + "'");
    try {
      return std::stoull(t.text);
    } catch (...) {
      fail(t, "integer out of range");
    }
  }
  Rational rational(const Token& t) const {
    Rational r;
    try {
      r = parse_rational(t.text);
    } catch (const Error&) {
      fail(t, "expected a rational, got '" + t.text + "'");
    }
    if (r <= 0) fail(t, "weight must be positive");
    return r;
  }
  void expect(const Token& t, std::string_view word) const {
    if (t.text != word) fail(t, "expected '" + std::string(word) + "', got '" + t.text + "'");
  }
  void arity(const std::vector<Token>& l, std::size_t want, const char* what) const {
    if (l.size() != want) fail(l.front(), std::string(what) + ": expected " + std::to_string(want) + " fields, got " + std::to_string(l.size()));
  }

 private:
  std::string source_;
  std::vector<std::vector<Token>> lines_;
  std::size_t next_ = 0;
  std::size_t last_line_ = 1;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::ParseError, path + ":0:0: cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct CodeFile {
  GeneratorMatrix g;
  std::optional<CoordinateWeights> weights;
  friend bool operator==(const CodeFile&, const CodeFile&) = default;
};

inline CodeFile parse_code(std::string_view text, const std::string& source = "code") {
  Lines in(text, source);
  const auto& h = in.next("header");
  in.arity(h, 4, "header");
  in.expect(h[0], "code");
  std::uint64_t p = in.integer(h[1]), n = in.integer(h[2]), k = in.integer(h[3]);
  if (!is_prime(p) || p > PrimeField::kMaxModulus) in.fail(h[1], "modulus must be a prime <= 2^31");
  if (k == 0) in.fail(h[3], "k must be at least 1");
  PrimeField f(p);
  GeneratorMatrix g(f, n, k);
  for (std::uint64_t i = 0; i < n; ++i) {
    const auto& l = in.next("matrix row");
    if (l[0].text == "weights") in.fail(l[0], "expected " + std::to_string(n) + " matrix rows before weights");
    in.arity(l, k, "matrix row");
    for (std::uint64_t j = 0; j < k; ++j) {
      std::uint64_t v = in.integer(l[j]);
      if (v >= p) in.fail(l[j], "entry " + l[j].text + " not in [0," + std::to_string(p) + ")");
      g.set(i, j, static_cast<std::uint32_t>(v));
    }
  }
  CodeFile cf{g, std::nullopt};
  if (!in.done()) {
    const auto& l = in.next("weights");
    in.expect(l[0], "weights");
    if (l.size() != n + 1) in.fail(l[0], "expected " + std::to_string(n) + " weights, got " + std::to_string(l.size() - 1));
    std::vector<Rational> w;
    for (std::size_t t = 1; t < l.size(); ++t) w.push_back(in.rational(l[t]));
    cf.weights = CoordinateWeights(std::move(w));
  }
  if (!in.done()) in.fail(in.peek()->front(), "trailing content");
  return cf;
}

inline std::string render_weights_line(const CoordinateWeights& w) {
  std::string s = "weights";
  for (const auto& r : w.values()) s += " " + to_fraction_string(r);
  return s + "\n";
}

inline std::string render_code(const GeneratorMatrix& g, const std::optional<CoordinateWeights>& w = std::nullopt) {
  std::ostringstream os;
  os << "code " << g.q() << " " << g.rows() << " " << g.cols() << "\n";
  for (std::size_t i = 0; i < g.rows(); ++i) {
    for (std::size_t j = 0; j < g.cols(); ++j) os << (j ? " " : "") << g(i, j);
    os << "\n";
  }
  if (w) os << render_weights_line(*w);
  return os.str();
}

/// Standalone weights file: rationals separated by whitespace, optionally after "weights".
inline CoordinateWeights parse_weights(std::string_view text, std::size_t n, const std::string& source = "weights") {
  Lines in(text, source);
  std::vector<Rational> w;
  bool first = true;
  while (!in.done()) {
    const auto& l = in.next("weights");
    for (std::size_t t = 0; t < l.size(); ++t) {
      if (first && t == 0 && l[t].text == "weights") continue;
      w.push_back(in.rational(l[t]));
    }
    first = false;
  }
  if (w.size() != n)
    throw Error(Errc::ParseError, source + ":1:1: expected " + std::to_string(n) + " weights, got " + std::to_string(w.size()));
  return CoordinateWeights(std::move(w));
}

inline nlohmann::json sparsifier_json(const Sparsifier& sp) {
  nlohmann::json j;
  j["coords"] = sp.coords;
  std::vector<std::string> w;
  for (const auto& r : sp.weights) w.push_back(to_fraction_string(r));
  j["weights"] = w;
  return j;
}

inline Sparsifier parse_sparsifier(std::string_view text, const std::string& source = "sparsifier") {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    // byte offset -> line/column
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw Error(Errc::ParseError, source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": invalid JSON");
  }
  auto fail = [&](const std::string& m) -> Sparsifier { throw Error(Errc::ParseError, source + ":1:1: " + m); };
  if (!j.is_object() || !j.contains("coords") || !j.contains("weights")) return fail("expected {\"coords\":[...],\"weights\":[...]}");
  Sparsifier sp;
  for (const auto& c : j["coords"]) {
    if (!c.is_number_unsigned()) return fail("coords must be non-negative integers");
    sp.coords.push_back(c.get<std::size_t>());
  }
  for (const auto& w : j["weights"]) {
    if (!w.is_string()) return fail("weights must be \"num/den\" strings");
    sp.weights.push_back(parse_rational(w.get<std::string>()));
  }
  if (sp.coords.size() != sp.weights.size()) return fail("coords and weights differ in length");
  return sp;
}

namespace detail {
/// Splits a trailing "w=..." token off a line.
inline std::optional<Rational> take_weight(const Lines& in, std::vector<Token>& toks) {
  if (toks.empty() || toks.back().text.rfind("w=", 0) != 0) return std::nullopt;
  Token t = toks.back();
  toks.pop_back();
  Token v{t.text.substr(2), t.line, t.col + 2};
  return in.rational(v);
}
}  // namespace detail

inline Graph parse_graph(std::string_view text, const std::string& source = "graph") {
  Lines in(text, source);
  const auto& h = in.next("header");
  in.arity(h, 3, "header");
  in.expect(h[0], "graph");
  Graph g{in.integer(h[1]), {}};
  std::uint64_t m = in.integer(h[2]);
  for (std::uint64_t e = 0; e < m; ++e) {
    const auto& l = in.next("edge");
    if (l.size() != 2 && l.size() != 3) in.fail(l[0], "edge: expected 'u v [num/den]'");
    Edge ed{in.integer(l[0]), in.integer(l[1]), 1};
    if (ed.u >= g.n) in.fail(l[0], "vertex out of range");
    if (ed.v >= g.n) in.fail(l[1], "vertex out of range");
    if (ed.u == ed.v) in.fail(l[1], "self-loop");
    if (l.size() == 3) ed.w = in.rational(l[2]);
    g.edges.push_back(ed);
  }
  if (!in.done()) in.fail(in.peek()->front(), "trailing content");
  return g;
}

inline std::string render_graph(const Graph& g) {
  std::ostringstream os;
  os << "graph " << g.n << " " << g.edges.size() << "\n";
  for (const auto& e : g.edges) {
    os << e.u << " " << e.v;
    if (e.w != 1) os << " " << to_fraction_string(e.w);
    os << "\n";
  }
  return os.str();
}

inline Hypergraph parse_hypergraph(std::string_view text, const std::string& source = "hypergraph") {
  Lines in(text, source);
  const auto& h = in.next("header");
  in.arity(h, 3, "header");
  in.expect(h[0], "hypergraph");
  Hypergraph hg{in.integer(h[1]), {}, {}};
  std::uint64_t m = in.integer(h[2]);
  std::vector<Rational> w;
  bool any_weight = false;
  for (std::uint64_t e = 0; e < m; ++e) {
    std::vector<Token> l = in.next("hyperedge");
    auto wt = detail::take_weight(in, l);
    any_weight |= wt.has_value();
    w.push_back(wt ? *wt : Rational(1));
    if (l.size() < 2) in.fail(l.empty() ? Token{"", 1, 1} : l[0], "hyperedge needs at least 2 vertices");
    std::vector<std::size_t> ed;
    for (const auto& t : l) {
      std::uint64_t v = in.integer(t);
      if (v >= hg.n) in.fail(t, "vertex out of range");
      ed.push_back(v);
    }
    std::sort(ed.begin(), ed.end());
    if (std::adjacent_find(ed.begin(), ed.end()) != ed.end()) in.fail(l[0], "repeated vertex in hyperedge");
    hg.edges.push_back(std::move(ed));
  }
  if (any_weight) hg.weights = std::move(w);
  if (!in.done()) in.fail(in.peek()->front(), "trailing content");
  return hg;
}

inline std::string render_hypergraph(const Hypergraph& h) {
  std::ostringstream os;
  os << "hypergraph " << h.n << " " << h.edges.size() << "\n";
  for (std::size_t e = 0; e < h.edges.size(); ++e) {
    for (std::size_t t = 0; t < h.edges[e].size(); ++t) os << (t ? " " : "") << h.edges[e][t];
    if (!h.weights.empty()) os << " w=" << to_fraction_string(h.weights[e]);
    os << "\n";
  }
  return os.str();
}

inline std::string bit_string(std::uint64_t v, std::size_t k) {
  std::string s;
  for (std::size_t j = 0; j < k; ++j) s += ((v >> j) & 1) ? '1' : '0';
  return s;
}

inline CayleySpec parse_cayley(std::string_view text, const std::string& source = "cayley") {
  Lines in(text, source);
  const auto& h = in.next("header");
  in.arity(h, 3, "header");
  in.expect(h[0], "cayley");
  CayleySpec s{in.integer(h[1]), {}, {}};
  if (s.k > 63) in.fail(h[1], "k must be at most 63");
  std::uint64_t m = in.integer(h[2]);
  std::vector<Rational> w;
  bool any_weight = false;
  for (std::uint64_t e = 0; e < m; ++e) {
    const auto& l = in.next("generator");
    if (l.size() != 1 && l.size() != 2) in.fail(l[0], "generator: expected 'bits [num/den]'");
    if (l[0].text.size() != s.k || l[0].text.find_first_not_of("01") != std::string::npos)
      in.fail(l[0], "expected a " + std::to_string(s.k) + "-bit string");
    std::uint64_t v = 0;
    for (std::size_t j = 0; j < s.k; ++j)
      if (l[0].text[j] == '1') v |= 1ULL << j;
    if (v == 0) in.fail(l[0], "zero generator");
    if (std::find(s.generators.begin(), s.generators.end(), v) != s.generators.end()) in.fail(l[0], "repeated generator");
    s.generators.push_back(v);
    if (l.size() == 2) {
      std::string wt = l[1].text.rfind("w=", 0) == 0 ? l[1].text.substr(2) : l[1].text;
      w.push_back(in.rational(Token{wt, l[1].line, l[1].col}));
      any_weight = true;
    } else {
      w.push_back(1);
    }
  }
  if (any_weight) s.weights = std::move(w);
  if (!in.done()) in.fail(in.peek()->front(), "trailing content");
  return s;
}

inline std::string render_cayley(const CayleySpec& s) {
  std::ostringstream os;
  os << "cayley " << s.k << " " << s.generators.size() << "\n";
  for (std::size_t i = 0; i < s.generators.size(); ++i) {
    os << bit_string(s.generators[i], s.k);
    if (!s.weights.empty()) os << " " << to_fraction_string(s.weights[i]);
    os << "\n";
  }
  return os.str();
}

inline CSPInstance parse_csp(std::string_view text, const std::string& source = "csp") {
  Lines in(text, source);
  const auto& h = in.next("header");
  in.arity(h, 4, "header");
  in.expect(h[0], "csp");
  CSPInstance inst;
  if (h[1].text != "-") {
    std::uint64_t p = in.integer(h[1]);
    if (!is_prime(p)) in.fail(h[1], "modulus must be prime");
    inst.p = static_cast<std::uint32_t>(p);
  }
  inst.k = in.integer(h[2]);
  if (inst.k > 63) in.fail(h[2], "at most 63 variables");
  std::uint64_t m = in.integer(h[3]);
  for (std::uint64_t c = 0; c < m; ++c) {
    std::vector<Token> l = in.next("constraint");
    auto wt = detail::take_weight(in, l);
    auto colon = std::find_if(l.begin(), l.end(), [](const Token& t) { return t.text == ":"; });
    if (colon == l.end()) in.fail(l[0], "constraint: missing ':' before the variable list");
    std::size_t split = static_cast<std::size_t>(colon - l.begin());
    Constraint con;
    con.weight = wt ? *wt : Rational(1);
    std::size_t arity = 0;
    if (l[0].text == "affine") {
      if (split < 3) in.fail(l[0], "affine: expected 'affine p a0 ... ar'");
      std::uint64_t p = in.integer(l[1]);
      if (!is_prime(p)) in.fail(l[1], "modulus must be prime");
      if (inst.p && *inst.p != p) in.fail(l[1], "MixedPrimes: constraint prime differs from the header");
      AffinePredicate ap{static_cast<std::uint32_t>(p), {}};
      for (std::size_t t = 2; t < split; ++t) {
        std::uint64_t a = in.integer(l[t]);
        if (a >= p) in.fail(l[t], "coefficient not in [0,p)");
        ap.a.push_back(static_cast<std::uint32_t>(a));
      }
      arity = ap.arity();
      con.pred = ap;
    } else if (l[0].text == "table") {
      if (split != 3) in.fail(l[0], "table: expected 'table r bits'");
      arity = in.integer(l[1]);
      if (arity > 16) in.fail(l[1], "arity too large");
      if (l[2].text.size() != (std::size_t{1} << arity) || l[2].text.find_first_not_of("01") != std::string::npos)
        in.fail(l[2], "expected " + std::to_string(std::size_t{1} << arity) + " table bits");
      con.pred = Predicate::from_bits(l[2].text);
    } else {
      in.fail(l[0], "expected 'affine' or 'table', got '" + l[0].text + "'");
    }
    if (l.size() - split - 1 != arity)
      in.fail(*colon, "expected " + std::to_string(arity) + " variables, got " + std::to_string(l.size() - split - 1));
    for (std::size_t t = split + 1; t < l.size(); ++t) {
      std::uint64_t v = in.integer(l[t]);
      if (v >= inst.k) in.fail(l[t], "variable out of range");
      con.vars.push_back(v);
    }
    inst.constraints.push_back(std::move(con));
  }
  if (!in.done()) in.fail(in.peek()->front(), "trailing content");
  return inst;
}

inline std::string render_csp(const CSPInstance& inst) {
  std::ostringstream os;
  os << "csp " << (inst.p ? std::to_string(*inst.p) : std::string("-")) << " " << inst.k << " "
     << inst.constraints.size() << "\n";
  for (const auto& c : inst.constraints) {
    if (auto* ap = std::get_if<AffinePredicate>(&c.pred)) {
      os << "affine " << ap->p;
      for (auto a : ap->a) os << " " << a;
    } else {
      const auto& pr = std::get<Predicate>(c.pred);
      os << "table " << pr.arity << " " << pr.bits();
    }
    os << " :";
    for (auto v : c.vars) os << " " << v;
    if (c.weight != 1) os << " w=" << to_fraction_string(c.weight);
    os << "\n";
  }
  return os.str();
}

}  // namespace codesparse::io
