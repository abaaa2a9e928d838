// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iomanip>
#include <map>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "codesparse/codesparse.hpp"
#include "oracles.hpp"

using namespace codesparse;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

struct CorpusCode {
  GeneratorMatrix g;
  std::string label;
};

// q in {2,3,5}, k <= 5, n <= 18. Half uniform random rows, half identity plus
// redundancy (duplicated unit rows), which is where dense subcodes live.
std::vector<CorpusCode> small_corpus() {
  std::vector<CorpusCode> out;
  const std::uint32_t qs[] = {2, 3, 5};
  for (std::uint64_t i = 0; i < 240; ++i) {
    PrimeField f(qs[i % 3]);
    std::size_t k = 1 + (i / 3) % 5;
    Rng rng(derive_seed(0xC0DE, i));
    std::size_t n = k + rng.below(18 - k + 1);
    GeneratorMatrix g = (i / 15) % 2 ? codes::identity_plus_redundancy(f, k, n, derive_seed(0xC0DE, i))
                                     : codes::random(f, n, k, derive_seed(0xC0DE, i));
    out.push_back({g, "q=" + std::to_string(f.modulus()) + " k=" + std::to_string(k) + " n=" + std::to_string(n) +
                          " #" + std::to_string(i)});
  }
  return out;
}

Outcome criterion1() {
  auto corpus = small_corpus();
  std::size_t failures = 0, counterexamples = 0;
  std::string first;
  for (const auto& c : corpus)
    for (std::uint64_t d = 1; d <= 6; ++d) {
      if (check_counting_bound(c.g, d).pass()) continue;
      ++failures;
      DenseSubcode ds = densest_subcode_exact(c.g);
      if (!(ds.density > Rational(1, static_cast<long long>(d)))) {
        ++counterexamples;
        if (first.empty()) first = c.label + " d=" + std::to_string(d);
      }
    }
  std::ostringstream os;
  os << corpus.size() << " codes x d=1..6; bound failed " << failures << " times; counterexamples " << counterexamples;
  if (!first.empty()) os << " (first: " << first << ")";
  return {counterexamples == 0 && corpus.size() >= 200, os.str()};
}

Outcome criterion2() {
  auto corpus = small_corpus();
  std::size_t cases = 0, peel_only = 0, ok = 0;
  std::map<std::string, std::size_t> stages;
  std::string first;
  for (const auto& c : corpus)
    for (std::uint64_t d = 1; d <= 6; ++d) {
      ++cases;
      DecompositionResult r = code_decomposition(c.g, d);
      ++stages[stage_name(r.stage)];
      bool good = r.removed.size() <= c.g.cols() * d && r.report.pass();
      if (good) ++ok;
      else if (first.empty()) first = c.label + " d=" + std::to_string(d);
      if (good && (r.stage == DecompositionStage::AlreadySatisfied || r.stage == DecompositionStage::Peeling)) ++peel_only;
    }
  std::ostringstream os;
  os << cases << " cases; valid " << ok << "; by peeling alone " << peel_only << " ("
     << std::fixed << std::setprecision(2) << 100.0 * peel_only / cases << "%); stages:";
  for (const auto& [k, v] : stages) os << " " << k << "=" << v;
  if (!first.empty()) os << "; first invalid: " << first;
  return {ok == cases && peel_only * 100 >= 99 * cases, os.str()};
}

Outcome criterion3() {
  struct Named {
    std::string name;
    Graph g;
  };
  std::vector<Named> gs = {{"C4", graphs::cycle(4)}, {"K4", graphs::complete(4)}, {"Q3", graphs::hypercube(3)}};
  const std::uint64_t trials = 10000;
  std::size_t checks = 0, bad = 0;
  std::string first;
  double worst_margin = 1e9;
  for (const auto& [name, graph] : gs) {
    GeneratorMatrix g = cut_code(graph);
    std::uint64_t c = static_cast<std::uint64_t>(min_cut_value(graph));
    std::uint64_t d = std::max<std::uint64_t>(c / 2, 1);
    const std::size_t k = g.cols();
    auto words = enumerate_codewords(g);
    for (std::size_t alpha = 1; alpha < k; ++alpha) {
      std::vector<Vec> light;
      for (const auto& w : words)
        if (weight(w) > 0 && weight(w) <= alpha * d) light.push_back(w);
      if (light.empty()) continue;
      // shared trials: the same seeded runs survival_experiment would make
      std::vector<std::uint64_t> survived(light.size(), 0);
      for (std::uint64_t t = 0; t < trials; ++t) {
        ContractionTrace tr = contract(g, alpha, derive_seed(0x5EED + alpha, t));
        for (std::size_t u = 0; u < light.size(); ++u) survived[u] += in_column_span(tr.final_matrix, light[u]);
      }
      double p = 1.0 / static_cast<double>(binomial(k, alpha));
      double sigma = std::sqrt(p * (1 - p) / static_cast<double>(trials));
      for (std::size_t u = 0; u < light.size(); ++u) {
        ++checks;
        double rate = static_cast<double>(survived[u]) / static_cast<double>(trials);
        worst_margin = std::min(worst_margin, (rate - (p - 3 * sigma)));
        if (rate < p - 3 * sigma) {
          ++bad;
          if (first.empty()) first = name + " alpha=" + std::to_string(alpha) + " rate=" + std::to_string(rate);
        }
      }
    }
  }
  std::ostringstream os;
  os << checks << " (graph, alpha, codeword) checks over 10^4 trials; below bound-3sigma: " << bad
     << "; smallest margin " << std::setprecision(4) << worst_margin;
  if (!first.empty()) os << " (first: " << first << ")";
  return {bad == 0 && checks > 0, os.str()};
}

bool connected(const Graph& g) {
  return detail::components(g.n, g.edges, std::vector<bool>(g.edges.size(), true)).size() == 1;
}

Outcome criterion4() {
  std::size_t graphs_done = 0, bad = 0;
  std::string first;
  for (std::uint64_t s = 0; graphs_done < 50; ++s) {
    std::size_t n = 4 + s % 9;
    Graph g = graphs::gnp(n, Rational(1, 2), derive_seed(0x4A, s));
    if (g.edges.empty() || !connected(g)) continue;
    ++graphs_done;
    GeneratorMatrix code = cut_code(g);
    std::uint64_t c = static_cast<std::uint64_t>(min_cut_value(g));
    std::uint64_t d = std::max<std::uint64_t>(c / 2, 1);
    bool ok = check_counting_bound(code, d).pass();
    auto weights = weight_distribution(code);
    for (std::size_t alpha = 1; alpha <= n; ++alpha) {
      std::uint64_t cnt = 0;
      for (std::size_t w = 1; w < weights.size() && w <= alpha * c; ++w) cnt += weights[w];
      if (BigInt(cnt) > boost::multiprecision::pow(BigInt(n), static_cast<unsigned>(2 * alpha))) ok = false;
    }
    if (!ok) {
      ++bad;
      if (first.empty()) first = "seed " + std::to_string(s);
    }
  }
  std::ostringstream os;
  os << graphs_done << " connected G(n,1/2), n in 4..12; violations " << bad;
  if (!first.empty()) os << " (first: " << first << ")";
  return {bad == 0, os.str()};
}

// Weights m * 10^e / 10 for e in 0..6, with 1 and 10^6 always present.
CoordinateWeights spread_weights(std::size_t n, Rng& rng) {
  std::vector<Rational> w;
  for (std::size_t i = 0; i < n; ++i) {
    long long e = static_cast<long long>(rng.below(7));
    long long m = 10 + static_cast<long long>(rng.below(90));
    BigInt scale = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(e));
    w.push_back(Rational(BigInt(m) * scale, BigInt(100)));
  }
  w[0] = 1;
  if (n > 1) w[1] = 1000000;
  return CoordinateWeights(w);
}

Outcome criterion5() {
  const std::uint32_t qs[] = {2, 3, 5};
  std::size_t pass = 0, runs = 0, witnesses = 0, retained = 0, total = 0;
  std::string first;
  for (std::uint64_t r = 0; r < 100; ++r) {
    Rng rng(derive_seed(0x55, r));
    PrimeField f(qs[r % 3]);
    std::size_t k = 1 + rng.below(f.modulus() == 5 ? 5 : 6);
    if (f.modulus() == 2) k = 1 + rng.below(6);
    std::size_t n = 50 + rng.below(451);
    GeneratorMatrix g = codes::random(f, n, k, derive_seed(0x55, r));
    CoordinateWeights w = spread_weights(n, rng);
    SparsifyParams p;
    p.epsilon = Rational(1, 2);
    p.seed = derive_seed(0x5A, r);
    p.aggressive = true;
    Sparsifier sp = final_code_sparsify(g, w, p);
    VerificationReport v = verify_sparsifier(g, w, sp, p.epsilon);
    ++runs;
    retained += sp.size();
    total += n;
    if (v.pass) ++pass;
    else {
      witnesses += !v.witness.empty();
      if (first.empty()) first = "run " + std::to_string(r) + ": " + v.witness;
    }
  }
  std::ostringstream os;
  os << pass << "/" << runs << " verified; failures with witness " << witnesses << "/" << runs - pass
     << "; retained " << retained << " of " << total << " coordinates overall";
  if (!first.empty()) os << "; first failure " << first;
  return {pass >= 95 && witnesses == runs - pass, os.str()};
}

Outcome criterion6() {
  auto corpus = small_corpus();
  std::size_t sum_ok = 0, size_ok = 0, runs = 0, zero = 0;
  const Rational eps(1, 2);
  auto check = [&](const GeneratorMatrix& g, std::uint64_t seed) {
    auto mins = min_weight_through(g, CoordinateWeights::unit(g.rows()));
    Rational s = 0;
    for (const auto& m : mins)
      if (m) s += 1 / *m;
    const std::size_t k = rank(g);
    if (s <= Rational(k)) ++sum_ok;
    ++runs;
    if (k == 0) {
      // nothing to sample; quadratic_sparsify rejects the zero code
      ++zero;
      ++size_ok;
      return;
    }
    Sparsifier sp = quadratic_sparsify(g, eps, seed);
    Rational cap = 2 * 10 * Rational(k * k) * log2_dyadic(static_cast<std::uint64_t>(g.q())) / (eps * eps);
    if (Rational(sp.size()) <= cap) ++size_ok;
  };
  for (std::size_t i = 0; i < corpus.size(); ++i) check(corpus[i].g, derive_seed(0x66, i));
  // longer codes, where the retained count is actually below n
  const std::uint32_t qs[] = {2, 3, 5};
  for (std::uint64_t i = 0; i < 60; ++i) {
    PrimeField f(qs[i % 3]);
    std::size_t k = 1 + i % 4;
    check(codes::random(f, 4000, k, derive_seed(0x67, i)), derive_seed(0x68, i));
  }
  std::ostringstream os;
  os << "sum 1/W_i <= k on " << sum_ok << "/" << runs << "; retained <= 20 k^2 log q / eps^2 on " << size_ok << "/" << runs
     << " (" << zero << " zero codes count as empty)";
  return {sum_ok == runs && size_ok * 100 >= 95 * runs, os.str()};
}

Outcome criterion7() {
  PrimeField f2(2);
  GeneratorMatrix g = codes::identity_plus_redundancy(f2, 8, 10000, 0x77);
  SparsifyParams p;
  p.epsilon = Rational(1, 2);
  p.seed = 0x77;
  p.aggressive = true;
  Sparsifier sp = final_code_sparsify(g, CoordinateWeights::unit(g.rows()), p);
  VerificationReport v = verify_sparsifier(g, CoordinateWeights::unit(g.rows()), sp, p.epsilon);
  std::ostringstream os;
  os << "n=10000 k=8: retained " << sp.size() << " (limit 1000); verification " << (v.pass ? "pass" : "fail")
     << ", max relative error " << to_decimal_string(v.max_relative_error, 4);
  if (!v.pass) os << "; " << v.witness;
  return {v.pass && sp.size() <= 1000, os.str()};
}

Outcome criterion8() {
  std::size_t pass = 0, decomp_ok = 0, fallbacks = 0;
  std::string first;
  for (std::uint64_t s = 0; s < 50; ++s) {
    std::size_t n = 4 + s % 7;
    Hypergraph h = hypergraphs::random(n, 3 * n, 2, 4, derive_seed(0x88, s));
    SparsifyParams p;
    p.epsilon = Rational(1, 2);
    p.seed = derive_seed(0x89, s);
    p.aggressive = true;
    HypergraphSparsifyResult r = sparsify_hypergraph(h, p);
    fallbacks += r.field_fallback;
    VerificationReport v = verify_hypergraph_sparsifier(h, r.sparsifier, p.epsilon);
    if (v.pass) ++pass;
    else if (first.empty()) first = "sparsify seed " + std::to_string(s) + ": " + v.witness;
    std::uint64_t d = 1 + s % 2;
    HypergraphDecomposition dec = hypergraph_decomposition(h, d);
    if (dec.removed.size() <= n * d && dec.pass()) ++decomp_ok;
    else if (first.empty()) first = "decomposition seed " + std::to_string(s);
  }
  std::ostringstream os;
  os << "cuts preserved on " << pass << "/50; decomposition within n*d and (2n)^(2 alpha) on " << decomp_ok
     << "/50; field fallbacks " << fallbacks;
  if (!first.empty()) os << "; first failure " << first;
  return {pass == 50 && decomp_ok == 50, os.str()};
}

Outcome criterion9() {
  std::size_t agree = 0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    Rng rng(derive_seed(0x99, s));
    CayleySpec spec;
    spec.k = 1 + rng.below(10);
    std::size_t m = 1 + rng.below(2 * spec.k + 4);
    m = std::min<std::size_t>(m, (1ULL << spec.k) - 1);
    while (spec.generators.size() < m) {
      std::uint64_t v = 1 + rng.below((1ULL << spec.k) - 1);
      if (std::find(spec.generators.begin(), spec.generators.end(), v) != spec.generators.end()) continue;
      spec.generators.push_back(v);
      spec.weights.push_back(Rational(static_cast<long long>(1 + rng.below(20)), static_cast<long long>(1 + rng.below(5))));
    }
    if (laplacian_spectrum(spec) == laplacian_spectrum_characters(spec)) ++agree;
  }
  std::size_t spectral_pass = 0, retained = 0;
  CayleySpec simplex = cayley::complete(6);
  auto base = laplacian_spectrum(simplex);
  for (std::uint64_t s = 0; s < 100; ++s) {
    SparsifyParams p;
    p.epsilon = Rational(1, 2);
    p.seed = derive_seed(0x9A, s);
    p.aggressive = true;
    CayleySparsifyResult r = sparsify_cayley(simplex, p);
    retained += r.sparsifier.generators.size();
    if (verify_spectrum(base, laplacian_spectrum(r.sparsifier), p.epsilon).pass) ++spectral_pass;
  }
  auto k4 = laplacian_spectrum(cayley::complete(2));
  std::vector<Rational> expect_k4 = {0, 4, 4, 4};
  bool k4_ok = k4 == expect_k4;
  std::ostringstream os;
  os << "formulas agree on " << agree << "/100; simplex k=6 spectrum within 1/2 on " << spectral_pass
     << "/100 seeds (mean retained " << retained / 100.0 << " of 63); K4 spectrum " << (k4_ok ? "{0,4,4,4}" : "wrong");
  return {agree == 100 && spectral_pass >= 90 && k4_ok, os.str()};
}

Outcome criterion10() {
  std::size_t linear = 0, quadratic = 0, inconsistent = 0, class_bad = 0;
  for (std::uint64_t mask = 0; mask < 256; ++mask) {
    Predicate pr = Predicate::from_index(3, mask);
    try {
      TernaryClassification c = ternary_classify(pr);
      bool lin = c.verdict == TernaryClassification::Verdict::SparsifiableLinear;
      (lin ? linear : quadratic)++;
      std::size_t sat = pr.satisfying_count();
      if ((sat >= 1 && sat <= 3 && lin) || ((sat == 0 || sat >= 6) && !lin)) ++class_bad;
    } catch (const Error&) {
      ++inconsistent;
    }
  }
  CSPInstance inst = csps::xor2_complete(10);
  SparsifyParams p;
  p.epsilon = Rational(1, 2);
  p.seed = 0x10;
  p.aggressive = true;
  CSPSparsifyResult r = sparsify_affine_csp(inst, p);
  VerificationReport v = verify_csp_sparsifier(inst, r.sparsifier, p.epsilon);
  std::ostringstream os;
  os << "256 predicates: sparsifiable_linear " << linear << ", requires_quadratic " << quadratic << ", inconsistent "
     << inconsistent << ", class-rule violations " << class_bad << "; XOR-2 on K10 keeps " << r.sparsifier.constraints.size()
     << "/45, verification " << (v.pass ? "pass" : "fail");
  return {inconsistent == 0 && class_bad == 0 && v.pass, os.str()};
}

Outcome criterion11() {
  struct Named {
    std::string name;
    Graph g;
  };
  std::vector<Named> gs = {{"K10", graphs::complete(10)}, {"G(12,1/2)", graphs::gnp(12, Rational(1, 2), 0xB)}};
  const Rational eps(1, 2);
  AppendixOptions opt;
  opt.c = Rational(1);          // relaxed from 100/eps^2
  opt.base_edge_factor = 0;     // let the peel/sample level run at this size
  std::ostringstream os;
  bool all = true;
  for (const auto& [name, g] : gs) {
    std::size_t pass = 0, peel_bad = 0, peeled = 0, sampled = 0;
    for (std::uint64_t s = 0; s < 100; ++s) {
      AppendixResult r = graph_sparsify_appendix_detailed(g, eps, derive_seed(0xB1, s), opt);
      if (verify_cut_sparsifier(g, r.sparsifier, eps).pass) ++pass;
      for (const auto& l : r.levels) {
        peeled += l.removed;
        sampled += l.sampled;
        if (Rational(l.removed) > Rational(g.n - 1) * l.threshold) ++peel_bad;
      }
    }
    all = all && pass >= 90 && peel_bad == 0;
    os << name << ": " << pass << "/100 within 1/2, peel-bound violations " << peel_bad << ", edges peeled "
       << peeled << " sampled " << sampled << "; ";
  }
  os << "C=1, base guard off";
  // info only: the default constants return both graphs unchanged; a smaller C forces sampling
  for (const auto& [name, g] : gs) {
    AppendixResult def = graph_sparsify_appendix_detailed(g, eps, 1);
    AppendixOptions stress;
    stress.c = Rational(1, 8);
    stress.base_edge_factor = 0;
    std::size_t pass = 0, sampled = 0;
    for (std::uint64_t s = 0; s < 100; ++s) {
      AppendixResult r = graph_sparsify_appendix_detailed(g, eps, derive_seed(0xB2, s), stress);
      pass += verify_cut_sparsifier(g, r.sparsifier, eps).pass;
      for (const auto& l : r.levels) sampled += l.sampled;
    }
    os << "; [info] " << name << " default constants: " << (def.sparsifier == merge_parallel(g) ? "unchanged" : "changed")
       << ", C=1/8: " << pass << "/100 within 1/2 with " << sampled << " sampled edges";
  }
  return {all, os.str()};
}

Outcome criterion12() {
  std::vector<std::string> diverged;
  auto same = [&](const std::string& name, auto f) {
    if (!(f() == f())) diverged.push_back(name);
  };
  PrimeField f3(3);
  GeneratorMatrix g = codes::random(f3, 300, 4, 12);
  Rng rng(12);
  CoordinateWeights w = spread_weights(300, rng);
  SparsifyParams p;
  p.epsilon = Rational(1, 2);
  p.seed = 1212;
  p.aggressive = true;
  same("final_code_sparsify", [&] { return final_code_sparsify(g, w, p); });
  same("code_sparsify", [&] { return code_sparsify(g, p); });
  same("quadratic_sparsify", [&] { return quadratic_sparsify(g, Rational(1, 2), 1212); });
  same("contract", [&] { return contract(g, 2, 1212).chosen_coordinates; });
  same("survival_experiment", [&] { return survival_experiment(g, Vec(300, 0), 2, 50, 1212).survived; });
  Graph k10 = graphs::complete(10);
  AppendixOptions opt;
  opt.c = Rational(1, 4);
  opt.base_edge_factor = 0;
  same("graph_sparsify_appendix", [&] { return graph_sparsify_appendix_detailed(k10, Rational(1, 2), 1212, opt).sparsifier; });
  same("gnp", [&] { return graphs::gnp(12, Rational(1, 2), 1212); });
  Hypergraph h = hypergraphs::random(8, 20, 2, 4, 1212);
  same("sparsify_hypergraph", [&] { return sparsify_hypergraph(h, p).sparsifier; });
  same("sparsify_cayley", [&] { return sparsify_cayley(cayley::complete(6), p).sparsifier.generators; });
  same("sparsify_affine_csp", [&] { return sparsify_affine_csp(csps::xor2_complete(8), p).sparsifier; });
  std::ostringstream os;
  os << "10 randomized pipelines run twice; diverged: " << diverged.size();
  for (const auto& d : diverged) os << " " << d;
  return {diverged.empty(), os.str()};
}

}  // namespace

int main() {
  std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"either/or counting bound", criterion1},
      {"decomposition", criterion2},
      {"contraction survival", criterion3},
      {"cut counting on graphs", criterion4},
      {"sparsifier correctness", criterion5},
      {"quadratic sparsifier", criterion6},
      {"genuine compression", criterion7},
      {"hypergraph cuts", criterion8},
      {"Cayley spectra", criterion9},
      {"CSP classification and sparsification", criterion10},
      {"recursive graph sparsifier", criterion11},
      {"determinism", criterion12},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failed += !o.pass;
    std::printf("[%s] criterion %zu (%s): %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed ? 1 : 0;
}
