#include <gtest/gtest.h>

#include "codesparse/sparsify.hpp"
#include "oracles.hpp"

using namespace codesparse;

namespace {

SparsifyParams aggressive(std::uint64_t seed, Rational eps = Rational(1, 2)) {
  SparsifyParams p;
  p.epsilon = eps;
  p.seed = seed;
  p.aggressive = true;
  return p;
}

}  // namespace

TEST(Params, Validation) {
  SparsifyParams p;
  p.epsilon = 0;
  EXPECT_THROW(p.validate(), Error);
  p.epsilon = 1;
  EXPECT_THROW(p.validate(), Error);
  p.epsilon = Rational(1, 2);
  p.eta = Rational(-1);
  EXPECT_THROW(p.validate(), Error);
}

TEST(Params, Formulas) {
  // aggressive eta pins eta log k log q / eps^2 to the budget
  Rational eta = aggressive_eta(8, Rational(1, 2), 2, Rational(4));
  EXPECT_EQ(eta * log2_dim(8) * 1 / Rational(1, 4), Rational(4));
  EXPECT_EQ(recursion_depth_cap(BigInt(4)), 4u);  // 2 * loglog 4 + 2
  EXPECT_EQ(recursion_depth_cap(BigInt(1)), 4u);
  EXPECT_EQ(recursion_depth_cap(BigInt(65536)), 10u);
  EXPECT_GT(default_eta(6, Rational(1, 2), 2), Rational(0));
}

TEST(CodeSparsify, BaseCaseIsIdentity) {
  auto g = codes::random(PrimeField(3), 200, 4, 1);
  SparsifyParams p;
  p.seed = 5;
  auto r = code_sparsify_detailed(g, p);
  EXPECT_EQ(r.sparsifier, Sparsifier::identity(CoordinateWeights::unit(200)));
  EXPECT_EQ(r.stats.decompositions, 0u);
}

TEST(CodeSparsify, IdentityKeepsEveryCoordinate) {
  PrimeField f2(2);
  for (std::size_t k : {1u, 3u, 6u}) {
    auto g = codes::identity(f2, k);
    auto sp = code_sparsify(g, aggressive(k));
    EXPECT_EQ(sp, Sparsifier::identity(CoordinateWeights::unit(k)));
  }
  // past the base case: every unit row is its own light codeword, so peeling keeps them all
  SparsifyParams p = aggressive(3);
  p.base_case_multiplier = Rational(1, 100);
  p.aggressive_budget = Rational(1, 10);
  auto r = code_sparsify_detailed(codes::identity(f2, 20), p);
  EXPECT_EQ(r.sparsifier, Sparsifier::identity(CoordinateWeights::unit(20)));
  EXPECT_GT(r.stats.decompositions, 0u);
}

TEST(CodeSparsify, RandomF2CodesVerify) {
  PrimeField f2(2);
  std::size_t pass = 0, smaller = 0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    auto g = codes::random(f2, 4096, 6, 1000 + s);
    auto r = code_sparsify_detailed(g, aggressive(s));
    auto unit = CoordinateWeights::unit(g.rows());
    pass += verify_sparsifier(g, unit, r.sparsifier, Rational(1, 2)).pass;
    smaller += r.sparsifier.size() < g.rows();
  }
  EXPECT_GE(pass, 95u);
  EXPECT_EQ(smaller, 100u);
}

TEST(CodeSparsify, MatchesNaiveVerification) {
  auto g = codes::random(PrimeField(3), 3000, 3, 77);
  auto sp = code_sparsify(g, aggressive(77));
  auto unit = CoordinateWeights::unit(g.rows());
  EXPECT_EQ(verify_sparsifier(g, unit, sp, Rational(1, 2)).pass,
            oracle::sparsifier_ok(g, unit.values(), sp, Rational(1, 2)));
}

TEST(Quadratic, IdentityKeepsAll) {
  for (std::size_t k : {1u, 4u, 7u}) {
    auto g = codes::identity(PrimeField(5), k);
    for (Rational eps : {Rational(1, 10), Rational(1, 2), Rational(1)}) {
      auto r = quadratic_sparsify_detailed(g, CoordinateWeights::unit(k), eps, 1);
      EXPECT_EQ(r.sparsifier, Sparsifier::identity(CoordinateWeights::unit(k)));
      for (const auto& p : r.probability) EXPECT_EQ(p, Rational(1));
    }
  }
}

TEST(Quadratic, HammingMinWeightsAreThree) {
  auto mins = min_weight_through(codes::hamming74(), CoordinateWeights::unit(7));
  for (const auto& m : mins) EXPECT_EQ(m, Rational(3));
}

TEST(Quadratic, MinWeightThroughMatchesOracle) {
  const std::uint32_t qs[] = {2, 3, 5};
  for (std::uint64_t s = 0; s < 30; ++s) {
    PrimeField f(qs[s % 3]);
    auto g = codes::random(f, 8, 1 + s % 4, s);
    Rng rng(s);
    std::vector<Rational> w;
    for (int i = 0; i < 8; ++i) w.push_back(Rational(1 + rng.below(10), 1 + rng.below(3)));
    auto mins = min_weight_through(g, CoordinateWeights(w));
    auto all = oracle::codewords(g);
    for (std::size_t i = 0; i < 8; ++i) {
      std::optional<Rational> best;
      for (const auto& c : all)
        if (c[i]) {
          Rational v = oracle::weighted(c, w);
          if (!best || v < *best) best = v;
        }
      EXPECT_EQ(mins[i], best);
    }
  }
}

TEST(Quadratic, RepetitionCodeConcentrates) {
  // W_i = 10^4 everywhere; expected size 10 k log q / eps^2 = 40
  auto g = codes::repetition(PrimeField(2), 10000);
  double total = 0;
  for (std::uint64_t s = 0; s < 50; ++s) {
    auto r = quadratic_sparsify_detailed(g, CoordinateWeights::unit(10000), Rational(1, 2), s);
    EXPECT_EQ(r.expected_size, Rational(40));
    EXPECT_NEAR(static_cast<double>(r.sparsifier.size()), 40.0, 4 * std::sqrt(40.0));
    for (const auto& w : r.sparsifier.weights) EXPECT_EQ(w, Rational(250));
    total += r.sparsifier.size();
  }
  EXPECT_NEAR(total / 50, 40.0, 3.0);
}

TEST(Quadratic, SumOfReciprocalsAtMostRank) {
  const std::uint32_t qs[] = {2, 3, 5};
  for (std::uint64_t s = 0; s < 60; ++s) {
    PrimeField f(qs[s % 3]);
    auto g = codes::random(f, 5 + s % 30, 1 + s % 5, s);
    Rational sum = 0;
    for (const auto& m : min_weight_through(g, CoordinateWeights::unit(g.rows())))
      if (m) sum += 1 / *m;
    EXPECT_LE(sum, Rational(rank(g)));
  }
}

TEST(Quadratic, ZeroCode) {
  try {
    quadratic_sparsify(GeneratorMatrix(PrimeField(2), 4, 2), Rational(1, 2), 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::ZeroCode);
  }
}

TEST(WeightClasses, Examples) {
  Rational alpha(10);
  auto one = partition_by_weight({0, 1, 2}, {Rational(1), Rational(1), Rational(1)}, alpha, Rational(1));
  EXPECT_EQ(one.classes.size(), 1u);
  EXPECT_EQ(one.classes.at(1), (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_TRUE(one.even_union.empty());

  auto three = partition_by_weight({0, 1, 2}, {Rational(1), alpha, alpha * alpha}, alpha, Rational(1));
  EXPECT_EQ(three.classes.at(1), (std::vector<std::size_t>{0}));
  EXPECT_EQ(three.classes.at(2), (std::vector<std::size_t>{1}));
  EXPECT_EQ(three.classes.at(3), (std::vector<std::size_t>{2}));
  EXPECT_EQ(three.odd_union, (std::vector<std::size_t>{0, 2}));
  EXPECT_EQ(three.even_union, (std::vector<std::size_t>{1}));

  // half-open bands: just below alpha stays in E_1, alpha itself opens E_2
  EXPECT_EQ(weight_class_of(alpha - Rational(1, 1000), alpha), 1);
  EXPECT_EQ(weight_class_of(alpha, alpha), 2);
  EXPECT_THROW(weight_class_of(Rational(1, 2), alpha), Error);
}

TEST(WeightClasses, AlphaFormula) {
  EXPECT_EQ(weight_class_alpha(2, 2, Rational(1, 2)), Rational(64));
}

TEST(WeightClasses, DecompositionCoversRetained) {
  auto g = codes::random(PrimeField(2), 60, 4, 3);
  Rng rng(3);
  std::vector<Rational> w;
  for (int i = 0; i < 60; ++i) w.push_back(Rational(static_cast<long long>(1) << (2 * rng.below(12))));
  auto d = weight_class_decomposition(g, CoordinateWeights(w), Rational(1, 2), rank(g), 9);
  std::vector<std::size_t> all = d.partition.odd_union;
  all.insert(all.end(), d.partition.even_union.begin(), d.partition.even_union.end());
  std::sort(all.begin(), all.end());
  EXPECT_EQ(all, d.retained.coords);
  for (const auto& [i, e] : d.partition.classes)
    for (auto c : e) {
      Rational u = d.weight_map().at(c) / d.partition.unit;
      EXPECT_EQ(weight_class_of(u, d.partition.alpha), i);
    }
}

TEST(SpanDecomposition, SingleClassIsWholeCode) {
  auto g = codes::random(PrimeField(3), 12, 4, 8);
  ASSERT_EQ(rank(g), 4u);
  auto blocks = span_decomposition(g, std::vector<int>(12, 1));
  ASSERT_EQ(blocks.size(), 1u);
  EXPECT_EQ(oracle::codewords(blocks[0].h), oracle::codewords(g));
  EXPECT_EQ(blocks[0].rows.size(), 12u);
}

TEST(SpanDecomposition, BlockDiagonal) {
  PrimeField f2(2);
  auto a = codes::random(f2, 6, 2, 1), b = codes::random(f2, 7, 3, 2);
  GeneratorMatrix d(f2, 13, 5);
  std::vector<int> labels;
  for (std::size_t i = 0; i < 6; ++i) {
    for (std::size_t j = 0; j < 2; ++j) d.set(i, j, a(i, j));
    labels.push_back(4);
  }
  for (std::size_t i = 0; i < 7; ++i) {
    for (std::size_t j = 0; j < 3; ++j) d.set(6 + i, 2 + j, b(i, j));
    labels.push_back(2);
  }
  auto blocks = span_decomposition(d, labels);
  ASSERT_EQ(blocks.size(), 2u);
  EXPECT_EQ(blocks[0].cls, 4);
  EXPECT_EQ(blocks[1].cls, 2);
  EXPECT_EQ(blocks[0].h.cols() + blocks[1].h.cols(), rank(d));
}

// After class j is processed, a codeword vanishing on every class >= j lives in the residual.
TEST(SpanDecomposition, ResidualCarriesCleanCodewords) {
  const std::uint32_t qs[] = {2, 3, 5};
  for (std::uint64_t s = 0; s < 40; ++s) {
    PrimeField f(qs[s % 3]);
    std::size_t k = 1 + s % 5;
    if (f.modulus() == 5) k = std::min<std::size_t>(k, 4);
    auto d = codes::random(f, 10, k, s);
    Rng rng(s);
    std::vector<int> labels;
    for (int i = 0; i < 10; ++i) labels.push_back(1 + static_cast<int>(rng.below(4)));
    auto blocks = span_decomposition(d, labels);
    std::size_t total = 0;
    for (const auto& b : blocks) total += b.h.cols();
    EXPECT_EQ(total, rank(d));
    auto all = oracle::codewords(d);
    for (const auto& b : blocks) {
      auto res = oracle::codewords(b.residual);
      for (const auto& c : all) {
        bool clean = true;
        for (std::size_t i = 0; i < 10; ++i)
          if (labels[i] >= b.cls && c[i]) clean = false;
        if (!clean) continue;
        Vec r;
        for (auto i : b.residual_rows) r.push_back(c[i]);
        EXPECT_TRUE(res.count(r)) << s;
      }
    }
  }
}

TEST(MakeUnweighted, Examples) {
  Rational alpha(64);
  auto a = make_unweighted({Rational(1)}, alpha, 1, Rational(1, 2));
  EXPECT_EQ(a.copies[0], 20u);
  EXPECT_EQ(Rational(a.copies[0]) * a.scale, Rational(1));
  auto b = make_unweighted({Rational(5, 2)}, alpha, 1, Rational(1, 2));
  EXPECT_EQ(b.copies[0], 50u);
  EXPECT_EQ(b.scale, Rational(1, 20));
  auto c = make_unweighted({Rational(128)}, alpha, 2, Rational(1, 2));
  EXPECT_EQ(c.copies[0], 40u);
  EXPECT_EQ(Rational(c.copies[0]) * c.scale, Rational(128));
  EXPECT_THROW(make_unweighted({Rational(65)}, alpha, 1, Rational(1, 2)), Error);
}

TEST(MakeUnweighted, FloorBounds) {
  Rational alpha(1000), eps(1, 3);
  Rng rng(5);
  std::vector<Rational> w;
  for (int i = 0; i < 200; ++i) w.push_back(Rational(1000 + rng.below(999001), 1000));
  auto u = make_unweighted(w, alpha, 1, eps);
  for (std::size_t i = 0; i < w.size(); ++i) {
    Rational r = Rational(u.copies[i]) * u.scale;
    EXPECT_LE(r, w[i]);
    EXPECT_GT(r, w[i] - eps / 10);
  }
}

TEST(FinalSparsify, SmallUnweightedCodeIsIdentity) {
  auto g = codes::random(PrimeField(2), 30, 4, 1);
  SparsifyParams p;
  p.seed = 2;
  auto unit = CoordinateWeights::unit(30);
  std::vector<std::size_t> nz = support(g);
  Sparsifier expect;
  for (auto i : nz) {
    expect.coords.push_back(i);
    expect.weights.push_back(1);
  }
  EXPECT_EQ(final_code_sparsify(g, unit, p), expect);
}

TEST(FinalSparsify, IdentityExact) {
  for (std::size_t k : {1u, 5u, 9u}) {
    auto unit = CoordinateWeights::unit(k);
    EXPECT_EQ(final_code_sparsify(codes::identity(PrimeField(3), k), unit, aggressive(k)), Sparsifier::identity(unit));
  }
}

TEST(FinalSparsify, WeightedRandomCodes) {
  std::size_t pass = 0;
  for (std::uint64_t s = 0; s < 25; ++s) {
    auto g = codes::random(PrimeField(s % 2 ? 2 : 3), 500, 5, s);
    Rng rng(s);
    std::vector<Rational> w;
    for (int i = 0; i < 500; ++i) w.push_back(Rational(static_cast<long long>(std::pow(10.0, 6 * rng.unit())) + 1));
    CoordinateWeights cw(w);
    auto r = final_code_sparsify_detailed(g, cw, aggressive(s));
    auto v = verify_sparsifier(g, cw, r.sparsifier, Rational(1, 2));
    pass += v.pass;
    if (!v.pass) EXPECT_FALSE(v.witness.empty());
  }
  EXPECT_GE(pass, 24u);
}

TEST(FinalSparsify, ZeroCodeGivesEmpty) {
  auto r = final_code_sparsify(GeneratorMatrix(PrimeField(2), 5, 3), CoordinateWeights::unit(5), aggressive(1));
  EXPECT_EQ(r.size(), 0u);
}

TEST(Determinism, SameSeedSameOutput) {
  auto g = codes::random(PrimeField(5), 2000, 3, 4);
  auto unit = CoordinateWeights::unit(2000);
  EXPECT_EQ(code_sparsify(g, aggressive(9)), code_sparsify(g, aggressive(9)));
  EXPECT_EQ(final_code_sparsify(g, unit, aggressive(9)), final_code_sparsify(g, unit, aggressive(9)));
  EXPECT_EQ(quadratic_sparsify(g, Rational(1, 2), 9), quadratic_sparsify(g, Rational(1, 2), 9));
  EXPECT_NE(code_sparsify(g, aggressive(9)), code_sparsify(g, aggressive(10)));
}
