#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <functional>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <json.hpp>

#include "cayley.hpp"
#include "code.hpp"
#include "counting.hpp"
#include "csp.hpp"
#include "graphs.hpp"
#include "hypergraphs.hpp"
#include "io.hpp"
#include "sparsify.hpp"

namespace codesparse::cli {

using Json = nlohmann::ordered_json;

inline std::string sha256_hex(std::string_view data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr);
  std::ostringstream os;
  for (unsigned i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return os.str();
}

/// Exit statuses.
inline constexpr int kOk = 0;
inline constexpr int kInputError = 1;
inline constexpr int kVerificationFailed = 2;

struct RunReport {
  std::string command;
  std::string input_digest;
  std::optional<std::uint64_t> seed;
  std::optional<Rational> epsilon;
  Json sizes = Json::object();
  std::optional<VerificationReport> verification;
  std::int64_t wall_time_us = 0;

  Json to_json() const {
    Json j;
    j["command"] = command;
    j["input_digest"] = input_digest;
    j["seed"] = seed ? Json(*seed) : Json(nullptr);
    j["epsilon"] = epsilon ? Json(to_fraction_string(*epsilon)) : Json(nullptr);
    j["sizes"] = sizes;
    if (verification) {
      j["verification"] = {{"verdict", verification->pass ? "pass" : "fail"},
                           {"max_relative_error", to_decimal_string(verification->max_relative_error, 6)},
                           {"max_relative_error_exact", to_fraction_string(verification->max_relative_error)},
                           {"checked", verification->checked},
                           {"witness", verification->pass ? Json(nullptr) : Json(verification->witness)}};
    } else {
      j["verification"] = nullptr;
    }
    j["wall_time_us"] = wall_time_us;
    return j;
  }
};

namespace detail {

inline Json edge_list_json(const Graph& g) {
  Json edges = Json::array();
  for (const auto& e : g.edges) edges.push_back(Json::array({e.u, e.v, to_fraction_string(e.w)}));
  return edges;
}

inline Json counting_report_json(const CountingBoundReport& r) {
  Json per = Json::array();
  for (const auto& e : r.per_alpha)
    per.push_back({{"alpha", e.alpha}, {"observed", e.observed}, {"bound", e.bound.str()}, {"pass", e.pass}});
  return {{"d", r.d}, {"k", r.k}, {"q", r.q}, {"pass", r.pass()}, {"per_alpha", per}};
}

inline Json matrix_json(const GeneratorMatrix& g) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < g.rows(); ++i) rows.push_back(g.row(i));
  return {{"q", g.q()}, {"n", g.rows()}, {"k", g.cols()}, {"rows", rows}};
}

struct Inputs {
  std::string blob;
  void add(const std::string& text) {
    blob += text;
    blob.push_back('\0');
  }
};

}  // namespace detail

/// Parses args (without the program name), writes JSON to out and diagnostics to err.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Linear-code sparsification toolkit"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");
  std::string format = "json";
  app.add_option("--format", format, "output format (json only)")->check(CLI::IsMember({"json"}));

  std::string code_path, weights_path, sparsifier_path, graph_path, hyper_path, cayley_path, csp_path, table;
  std::string eps_s = "1/2", eta_s, budget_s = "4", c_s, p_s = "1/2", model = "gnp", kind, family = "random";
  std::uint64_t seed = 0, d = 1, alpha = 1, q = 2, k = 4, n = 8, m = 0, min_size = 2, max_size = 3;
  bool aggressive = false, verify = false, via_code = false;

  auto add_eps = [&](CLI::App* s, bool required = true) {
    auto* o = s->add_option("--epsilon", eps_s, "accuracy, rational or decimal");
    if (required) o->required();
  };
  auto add_sparsify_opts = [&](CLI::App* s) {
    add_eps(s);
    s->add_option("--seed", seed, "64-bit seed")->required();
    s->add_option("--eta", eta_s, "override eta");
    s->add_flag("--aggressive", aggressive, "rescale eta so desk-scale inputs are actually sampled");
    s->add_option("--aggressive-budget", budget_s, "eta log k log q / eps^2 under --aggressive (default 4)");
    s->add_flag("--verify", verify, "exhaustively verify the output");
  };

  auto* sc = app.add_subcommand("sparsify-code", "sparsify a (weighted) linear code");
  sc->add_option("--code", code_path)->required();
  sc->add_option("--weights", weights_path);
  add_sparsify_opts(sc);

  auto* sg = app.add_subcommand("sparsify-graph", "cut sparsifier for a graph");
  sg->add_option("--graph", graph_path)->required();
  add_sparsify_opts(sg);
  sg->add_flag("--via-code", via_code, "route through the cut code pipeline");
  sg->add_option("--c", c_s, "override C in gamma(n) = C log n");

  auto* sh = app.add_subcommand("sparsify-hypergraph", "hypergraph cut sparsifier");
  sh->add_option("--hypergraph", hyper_path)->required();
  add_sparsify_opts(sh);

  auto* dh = app.add_subcommand("decompose-hypergraph", "remove hyperedges in light cuts");
  dh->add_option("--hypergraph", hyper_path)->required();
  dh->add_option("--d", d)->required();

  auto* sy = app.add_subcommand("sparsify-cayley", "spectral sparsifier for a Cayley graph over F_2^k");
  sy->add_option("--cayley", cayley_path)->required();
  add_sparsify_opts(sy);

  auto* sp = app.add_subcommand("spectrum", "Laplacian eigenvalues of a Cayley graph");
  sp->add_option("--cayley", cayley_path)->required();

  auto* ss = app.add_subcommand("sparsify-csp", "sparsify an affine CSP instance");
  ss->add_option("--csp", csp_path)->required();
  add_sparsify_opts(ss);

  auto* cp = app.add_subcommand("classify-predicate", "ternary predicate classification");
  cp->add_option("--table", table, "truth table, most significant assignment first")->required();

  auto* cb = app.add_subcommand("count-bound", "check the codeword counting bound");
  cb->add_option("--code", code_path)->required();
  cb->add_option("--d", d)->required();

  auto* ct = app.add_subcommand("contract", "random contraction trace");
  ct->add_option("--code", code_path)->required();
  ct->add_option("--alpha", alpha)->required();
  ct->add_option("--seed", seed)->required();

  auto* gc = app.add_subcommand("gen-corpus", "write a deterministic fixture to stdout");
  gc->add_option("corpus", kind, "code | graph | hypergraph | cayley | csp")->required();
  gc->add_option("--family", family, "code: random|hamming|repetition|identity|simplex|redundant; cayley: complete|hypercube|random");
  gc->add_option("--q", q);
  gc->add_option("--k", k);
  gc->add_option("--n", n);
  gc->add_option("--m", m);
  gc->add_option("--p", p_s, "edge probability");
  gc->add_option("--model", model, "graph: gnp|complete|cycle|path|hypercube");
  gc->add_option("--kind", family, "csp: xor2-complete|random-xor3");
  gc->add_option("--min-size", min_size);
  gc->add_option("--max-size", max_size);
  gc->add_option("--seed", seed);

  auto* vf = app.add_subcommand("verify", "verify a sparsifier against a code");
  vf->add_option("--code", code_path)->required();
  vf->add_option("--sparsifier", sparsifier_path)->required();
  vf->add_option("--weights", weights_path);
  add_eps(vf);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }

  const auto t0 = std::chrono::steady_clock::now();
  detail::Inputs inputs;
  RunReport report;
  Json result;
  int status = kOk;

  auto params = [&]() {
    SparsifyParams p;
    p.epsilon = parse_rational(eps_s);
    p.seed = seed;
    p.aggressive = aggressive;
    p.aggressive_budget = parse_rational(budget_s);
    if (!eta_s.empty()) p.eta = parse_rational(eta_s);
    p.validate();
    report.seed = seed;
    report.epsilon = p.epsilon;
    return p;
  };
  auto load = [&](const std::string& path) {
    std::string text = io::read_file(path);
    inputs.add(text);
    return text;
  };
  auto load_code = [&]() {
    io::CodeFile cf = io::parse_code(load(code_path), code_path);
    CoordinateWeights w = cf.weights ? *cf.weights : CoordinateWeights::unit(cf.g.rows());
    if (!weights_path.empty()) w = io::parse_weights(load(weights_path), cf.g.rows(), weights_path);
    return std::make_pair(cf.g, w);
  };
  auto set_verification = [&](const VerificationReport& v) {
    report.verification = v;
    if (!v.pass) status = kVerificationFailed;
  };

  try {
    if (sc->parsed()) {
      report.command = "sparsify-code";
      auto [g, w] = load_code();
      SparsifyParams p = params();
      FinalSparsifyResult r = final_code_sparsify_detailed(g, w, p);
      result["sparsifier"] = io::sparsifier_json(r.sparsifier);
      result["quadratic_retained"] = r.quadratic_retained;
      report.sizes = {{"input_coordinates", g.rows()}, {"retained_coordinates", r.sparsifier.size()}};
      if (verify) set_verification(verify_sparsifier(g, w, r.sparsifier, p.epsilon, p.enumeration_budget));
    } else if (sg->parsed()) {
      report.command = "sparsify-graph";
      Graph g = io::parse_graph(load(graph_path), graph_path);
      g.validate();
      SparsifyParams p = params();
      Graph h;
      if (via_code) {
        Sparsifier s = final_code_sparsify(cut_code(g), edge_weights(g), p);
        h = merge_parallel(graph_from_sparsifier(g, s));
      } else {
        AppendixOptions opt;
        if (!c_s.empty()) opt.c = parse_rational(c_s);
        AppendixResult r = graph_sparsify_appendix_detailed(g, p.epsilon, seed, opt);
        h = r.sparsifier;
        Json levels = Json::array();
        for (const auto& l : r.levels)
          levels.push_back({{"i", l.i}, {"threshold", to_fraction_string(l.threshold)}, {"edges_in", l.edges_in},
                            {"peeled", l.removed}, {"sampled", l.sampled}});
        result["levels"] = levels;
      }
      result["route"] = via_code ? "cut_code" : "recursive_peel_and_sample";
      result["graph"] = {{"n", h.n}, {"edges", detail::edge_list_json(h)}};
      report.sizes = {{"input_edges", g.edges.size()}, {"retained_edges", h.edges.size()}};
      if (verify) set_verification(verify_cut_sparsifier(g, h, p.epsilon));
    } else if (sh->parsed()) {
      report.command = "sparsify-hypergraph";
      Hypergraph h = io::parse_hypergraph(load(hyper_path), hyper_path);
      SparsifyParams p = params();
      HypergraphSparsifyResult r = sparsify_hypergraph(h, p);
      Json edges = Json::array();
      for (std::size_t e = 0; e < r.sparsifier.edges.size(); ++e)
        edges.push_back({{"vertices", r.sparsifier.edges[e]}, {"weight", to_fraction_string(r.sparsifier.weights[e])},
                         {"source", r.origin[e]}});
      result["q"] = r.q;
      result["hyperedges"] = edges;
      report.sizes = {{"input_hyperedges", h.edges.size()}, {"retained_hyperedges", r.sparsifier.edges.size()}};
      if (verify) set_verification(verify_hypergraph_sparsifier(h, r.sparsifier, p.epsilon));
    } else if (dh->parsed()) {
      report.command = "decompose-hypergraph";
      Hypergraph h = io::parse_hypergraph(load(hyper_path), hyper_path);
      HypergraphDecomposition r = hypergraph_decomposition(h, d);
      Json per = Json::array();
      for (const auto& e : r.report)
        per.push_back({{"alpha", e.alpha}, {"observed", e.observed}, {"bound", e.bound.str()}, {"pass", e.pass}});
      result = {{"d", d}, {"q", r.q}, {"removed", r.removed}, {"strategy", stage_name(r.stage)},
                {"cut_counts", per}, {"pass", r.pass()}};
      report.sizes = {{"input_hyperedges", h.edges.size()}, {"removed_hyperedges", r.removed.size()}};
    } else if (sy->parsed()) {
      report.command = "sparsify-cayley";
      CayleySpec s = io::parse_cayley(load(cayley_path), cayley_path);
      SparsifyParams p = params();
      CayleySparsifyResult r = sparsify_cayley(s, p);
      Json gens = Json::array();
      for (std::size_t i = 0; i < r.sparsifier.generators.size(); ++i)
        gens.push_back({{"bits", io::bit_string(r.sparsifier.generators[i], s.k)},
                        {"weight", to_fraction_string(r.sparsifier.weights[i])}});
      result["generators"] = gens;
      report.sizes = {{"input_generators", s.generators.size()}, {"retained_generators", r.sparsifier.generators.size()}};
      if (verify) set_verification(verify_spectrum(laplacian_spectrum(s), laplacian_spectrum(r.sparsifier), p.epsilon));
    } else if (sp->parsed()) {
      report.command = "spectrum";
      CayleySpec s = io::parse_cayley(load(cayley_path), cayley_path);
      auto a = laplacian_spectrum(s);
      auto b = laplacian_spectrum_characters(s);
      Json eig = Json::array();
      for (std::size_t x = 0; x < a.size(); ++x)
        eig.push_back({{"x", io::bit_string(x, s.k)}, {"eigenvalue", to_fraction_string(a[x])}});
      result["eigenvalues"] = eig;
      result["formulas_agree"] = a == b;
      report.sizes = {{"generators", s.generators.size()}, {"eigenvalues", a.size()}};
      if (a != b) throw Error(Errc::InternalInconsistency, "codeword and character formulas disagree");
    } else if (ss->parsed()) {
      report.command = "sparsify-csp";
      CSPInstance inst = io::parse_csp(load(csp_path), csp_path);
      SparsifyParams p = params();
      CSPInstance lin = linearize(inst);
      CSPSparsifyResult r = sparsify_affine_csp(lin, p);
      // report in the caller's predicate form
      CSPInstance outi{inst.k, inst.p, {}};
      for (std::size_t t = 0; t < r.origin.size(); ++t) {
        Constraint c = inst.constraints[r.origin[t]];
        c.weight = r.sparsifier.constraints[t].weight;
        outi.constraints.push_back(std::move(c));
      }
      result["p"] = lin.p ? Json(*lin.p) : Json(nullptr);
      result["instance"] = io::render_csp(outi);
      report.sizes = {{"input_constraints", inst.constraints.size()}, {"retained_constraints", outi.constraints.size()}};
      if (verify) set_verification(verify_csp_sparsifier(inst, outi, p.epsilon));
    } else if (cp->parsed()) {
      report.command = "classify-predicate";
      inputs.add(table);
      Predicate pr = Predicate::from_bits(table);
      TernaryClassification c = ternary_classify(pr);
      result["verdict"] = verdict_name(c.verdict);
      result["satisfying"] = pr.satisfying_count();
      if (c.representation)
        result["representation"] = {{"p", c.representation->p}, {"a", c.representation->a}};
      if (c.projection) {
        Json pi = Json::array();
        for (auto l : *c.projection) pi.push_back(literal_name(l));
        result["projection"] = pi;
      }
    } else if (cb->parsed()) {
      report.command = "count-bound";
      auto [g, w] = load_code();
      CountingBoundReport r = check_counting_bound(g, d);
      result = detail::counting_report_json(r);
      report.sizes = {{"n", g.rows()}, {"k", g.cols()}};
    } else if (ct->parsed()) {
      report.command = "contract";
      auto [g, w] = load_code();
      ContractionTrace tr = contract(g, alpha, seed);
      report.seed = seed;
      result = {{"chosen_coordinates", tr.chosen_coordinates}, {"seed", tr.seed}, {"final_matrix", detail::matrix_json(tr.final_matrix)}};
      report.sizes = {{"contractions", tr.chosen_coordinates.size()}, {"final_columns", tr.final_matrix.cols()}};
    } else if (gc->parsed()) {
      std::string text;
      if (kind == "code") {
        PrimeField f(q);
        GeneratorMatrix g =
            family == "random"       ? codes::random(f, n, k, seed)
            : family == "hamming"    ? codes::hamming74()
            : family == "repetition" ? codes::repetition(f, n)
            : family == "identity"   ? codes::identity(f, k)
            : family == "simplex"    ? codes::simplex(k)
            : family == "redundant"  ? codes::identity_plus_redundancy(f, k, n, seed)
                                     : throw Error(Errc::InvalidArgument, "unknown code family '" + family + "'");
        text = io::render_code(g);
      } else if (kind == "graph") {
        Graph g = model == "gnp"         ? graphs::gnp(n, parse_rational(p_s), seed)
                  : model == "complete"  ? graphs::complete(n)
                  : model == "cycle"     ? graphs::cycle(n)
                  : model == "path"      ? graphs::path(n)
                  : model == "hypercube" ? graphs::hypercube(k)
                                         : throw Error(Errc::InvalidArgument, "unknown graph model '" + model + "'");
        text = io::render_graph(g);
      } else if (kind == "hypergraph") {
        text = io::render_hypergraph(hypergraphs::random(n, m, min_size, max_size, seed));
      } else if (kind == "cayley") {
        CayleySpec s;
        if (family == "complete" || family == "random" && m == 0) {
          s = cayley::complete(k);
        } else if (family == "hypercube") {
          s = cayley::hypercube(k);
        } else if (family == "random") {
          Rng rng(seed);
          s.k = k;
          while (s.generators.size() < m && s.generators.size() + 1 < (1ULL << k)) {
            std::uint64_t v = 1 + rng.below((1ULL << k) - 1);
            if (std::find(s.generators.begin(), s.generators.end(), v) == s.generators.end()) s.generators.push_back(v);
          }
        } else {
          throw Error(Errc::InvalidArgument, "unknown cayley family '" + family + "'");
        }
        text = io::render_cayley(s);
      } else if (kind == "csp") {
        CSPInstance inst;
        if (family == "xor2-complete") {
          inst = csps::xor2_complete(k);
        } else if (family == "random-xor3") {
          Rng rng(seed);
          inst = CSPInstance{k, 2u, {}};
          for (std::uint64_t c = 0; c < m; ++c) {
            std::vector<std::size_t> vars;
            while (vars.size() < 3) {
              std::size_t v = rng.below(k);
              if (std::find(vars.begin(), vars.end(), v) == vars.end()) vars.push_back(v);
            }
            inst.constraints.push_back({AffinePredicate{2, {static_cast<std::uint32_t>(rng.below(2)), 1, 1, 1}}, vars, 1});
          }
        } else {
          throw Error(Errc::InvalidArgument, "unknown csp kind '" + family + "'");
        }
        text = io::render_csp(inst);
      } else {
        throw Error(Errc::InvalidArgument, "unknown corpus kind '" + kind + "'");
      }
      out << text;
      return kOk;
    } else if (vf->parsed()) {
      report.command = "verify";
      auto [g, w] = load_code();
      Sparsifier s = io::parse_sparsifier(load(sparsifier_path), sparsifier_path);
      Rational eps = parse_rational(eps_s);
      if (eps < 0) throw Error(Errc::InvalidArgument, "epsilon must be non-negative");
      report.epsilon = eps;
      set_verification(verify_sparsifier(g, w, s, eps));
      report.sizes = {{"input_coordinates", g.rows()}, {"retained_coordinates", s.size()}};
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }

  report.input_digest = "sha256:" + sha256_hex(inputs.blob);
  report.wall_time_us =
      std::chrono::duration_cast<std::chrono::microseconds>(std::chrono::steady_clock::now() - t0).count();
  Json j;
  j["report"] = report.to_json();
  j["result"] = result;
  out << j.dump(2) << "\n";
  return status;
}

}  // namespace codesparse::cli
