#include <gtest/gtest.h>

#include <random>

#include "nearzero/coloring.hpp"
#include "nearzero/errors.hpp"
#include "nearzero/phj.hpp"
#include "oracles.hpp"

using nearzero::Alphabet;
using nearzero::BigInt;
using nearzero::Exhausted;
using nearzero::PhjPoint;
using nearzero::PhjWitness;
using nearzero::Rational;
using nearzero::SearchBudget;
using nearzero::Tensor;

namespace {

Rational q(long long n, long long d) { return Rational(BigInt(n), BigInt(d)); }

PhjPoint random_point(std::mt19937_64& rng, std::size_t d, std::size_t N, const std::vector<Rational>& values) {
  PhjPoint p(d, N);
  for (std::size_t j = 1; j <= d; ++j) {
    for (const auto& idx : oracle::tuples(N, j)) {
      if (rng() % 2) p.set(j, idx, values[rng() % values.size()]);
    }
  }
  return p;
}

std::vector<std::size_t> random_gamma(std::mt19937_64& rng, std::size_t N) {
  std::vector<std::size_t> g;
  while (g.empty()) {
    for (std::size_t i = 1; i <= N; ++i) {
      if (rng() % 2) g.push_back(i);
    }
  }
  return g;
}

PhjPoint zero_on_gamma(PhjPoint p, const std::vector<std::size_t>& gamma) {
  std::vector<Rational> zeros(p.degree(), Rational(0));
  return nearzero::oplus(p, gamma, zeros);
}

}  // namespace

TEST(Tensor, FlatIndexIsLexicographicRank) {
  for (std::size_t j = 1; j <= 4; ++j) {
    Tensor t(j, 3);
    EXPECT_EQ(t.dense(), j <= 2);
    auto all = oracle::tuples(3, j);
    ASSERT_EQ(all.size(), t.size());
    for (std::uint64_t f = 0; f < all.size(); ++f) {
      EXPECT_EQ(t.flat(all[f]), f);
      EXPECT_EQ(t.unflat(f), all[f]);
    }
  }
}

TEST(Tensor, SparseAndDenseAgreeOnValues) {
  Tensor s(3, 2);
  s.set(5, q(1, 2));
  EXPECT_EQ(s.get(5), q(1, 2));
  EXPECT_EQ(s.get(4), Rational(0));
  s.set(5, Rational(0));
  Tensor empty(3, 2);
  EXPECT_EQ(s, empty);
  EXPECT_EQ(s.sum(), Rational(0));
}

TEST(Tensor, RejectsBadIndices) {
  Tensor t(2, 3);
  EXPECT_THROW(t.flat({1}), nearzero::InvalidInput);
  EXPECT_THROW(t.flat({0, 1}), nearzero::InvalidInput);
  EXPECT_THROW(t.flat({1, 4}), nearzero::InvalidInput);
}

TEST(Oplus, Examples) {
  PhjPoint a(1, 2);
  std::vector<std::size_t> g2{2};
  std::vector<Rational> half{q(1, 2)};
  auto b = nearzero::oplus(a, g2, half);
  EXPECT_EQ(b.at(1, {1}), Rational(0));
  EXPECT_EQ(b.at(1, {2}), q(1, 2));

  PhjPoint z(2, 2);
  std::vector<std::size_t> g1{1};
  std::vector<Rational> xs{q(1, 2), q(1, 3)};
  auto c = nearzero::oplus(z, g1, xs);
  EXPECT_EQ(c.at(1, {1}), q(1, 2));
  EXPECT_EQ(c.at(1, {2}), Rational(0));
  EXPECT_EQ(c.at(2, {1, 1}), q(1, 3));
  EXPECT_EQ(c.at(2, {1, 2}), Rational(0));
  EXPECT_EQ(c.at(2, {2, 1}), Rational(0));
  EXPECT_EQ(c.at(2, {2, 2}), Rational(0));

  PhjPoint w(2, 3);
  w.set(1, {3}, q(1, 5));
  w.set(2, {1, 3}, q(-1, 5));
  std::vector<std::size_t> g12{1, 2};
  std::vector<Rational> zeros{Rational(0), Rational(0)};
  EXPECT_EQ(nearzero::oplus(w, g12, zeros), w);
}

TEST(OplusProperty, MatchesDefinitionAndIsIdempotent) {
  std::mt19937_64 rng(17);
  const std::vector<Rational> values{q(1, 2), q(-1, 3), q(2, 7), Rational(1)};
  for (int i = 0; i < 300; ++i) {
    std::size_t d = rng() % 3 + 1;
    std::size_t N = rng() % 4 + 1;
    auto a = random_point(rng, d, N, values);
    auto g = random_gamma(rng, N);
    std::vector<Rational> xs;
    for (std::size_t j = 0; j < d; ++j) xs.push_back(values[rng() % values.size()]);
    auto b = nearzero::oplus(a, g, xs);
    EXPECT_EQ(b, oracle::oplus_by_definition(a, g, xs));
    EXPECT_EQ(nearzero::oplus(b, g, xs), b);
    // the off-gamma part is untouched
    EXPECT_EQ(nearzero::off_gamma_sum(b, g), nearzero::off_gamma_sum(a, g));
    EXPECT_EQ(b.entry_sum(), oracle::entry_sum_by_definition(b));
  }
}

TEST(Oplus, RejectsBadGamma) {
  PhjPoint a(1, 2);
  std::vector<Rational> xs{q(1, 2)};
  std::vector<std::size_t> none;
  std::vector<std::size_t> outside{3};
  EXPECT_THROW(nearzero::oplus(a, none, xs), nearzero::InvalidInput);
  EXPECT_THROW(nearzero::oplus(a, outside, xs), nearzero::InvalidInput);
  std::vector<Rational> too_many{q(1, 2), q(1, 2)};
  std::vector<std::size_t> g{1};
  EXPECT_THROW(nearzero::oplus(a, g, too_many), nearzero::InvalidInput);
}

TEST(PhjGeneratedSet, Examples) {
  std::vector<std::size_t> g1{1};
  EXPECT_EQ(nearzero::phj_generated_set(PhjPoint(1, 1), g1, Alphabet({Rational(0), q(1, 2)})).size(), 2u);

  PhjPoint a(1, 2);
  a.set(1, {2}, Rational(0));
  auto only = nearzero::phj_generated_set(a, g1, Alphabet({Rational(0)}));
  EXPECT_EQ(only, std::set<PhjPoint>{a});

  std::vector<std::size_t> g12{1, 2};
  EXPECT_EQ(nearzero::phj_generated_set(PhjPoint(2, 2), g12, Alphabet({Rational(0), q(1, 2)})).size(), 4u);
}

TEST(PhjGeneratedSet, RejectsInvalidStructure) {
  PhjPoint a(1, 2);
  a.set(1, {1}, q(1, 2));
  std::vector<std::size_t> g1{1};
  Alphabet alpha({Rational(0), q(1, 2)});
  EXPECT_THROW(nearzero::phj_generated_set(a, g1, alpha), nearzero::PreconditionViolation);
  PhjPoint b(1, 2);
  b.set(1, {2}, q(1, 3));
  EXPECT_THROW(nearzero::phj_generated_set(b, g1, alpha), nearzero::PreconditionViolation);
}

TEST(PhjGeneratedSetProperty, SizeIsAlphabetPowerWhenLettersDiffer) {
  std::mt19937_64 rng(23);
  const std::vector<Rational> letters{q(1, 2), q(-1, 3), q(1, 5)};
  for (int i = 0; i < 60; ++i) {
    std::size_t d = rng() % 3 + 1;
    std::size_t N = rng() % 3 + 1;
    Alphabet alpha(letters);
    auto g = random_gamma(rng, N);
    auto a = zero_on_gamma(random_point(rng, d, N, letters), g);
    auto s = nearzero::phj_generated_set(a, g, alpha);
    std::size_t expect = 1;
    for (std::size_t j = 0; j < d; ++j) expect *= letters.size();
    EXPECT_EQ(s.size(), expect);
  }
}

TEST(FindPhjWitness, ConstantColoring) {
  Alphabet alpha({Rational(0), q(1, 2), q(-1, 3)});
  auto out = nearzero::find_phj_witness([](const PhjPoint&) { return 1; }, alpha, 1, 1, 4, SearchBudget{});
  ASSERT_TRUE(std::holds_alternative<PhjWitness>(out));
  const auto& w = std::get<PhjWitness>(out);
  EXPECT_EQ(w.base, PhjPoint(1, 1));
  EXPECT_EQ(w.gamma, (std::vector<std::size_t>{1}));
}

TEST(FindPhjWitness, SumParityColoringMatchesOracle) {
  auto col = [](const PhjPoint& u) {
    Rational s = u.entry_sum();
    return static_cast<int>(1 + (s.num() + s.den()) % 2);
  };
  Alphabet alpha({Rational(0), q(1, 2)});
  auto out = nearzero::find_phj_witness(col, alpha, 1, 1, 3, SearchBudget{});
  ASSERT_TRUE(std::holds_alternative<PhjWitness>(out));
  const auto& w = std::get<PhjWitness>(out);
  // frozen: 0 and 1/2 both have odd numerator plus denominator
  EXPECT_EQ(w.base, PhjPoint(1, 1));
  EXPECT_EQ(w.gamma, (std::vector<std::size_t>{1}));
  EXPECT_EQ(w.color, 2);
  auto best = oracle::brute_phj(col, alpha, 1, 3);
  ASSERT_TRUE(best);
  EXPECT_EQ(best->N, 1u);
  EXPECT_EQ(best->gamma, w.gamma);
  EXPECT_EQ(best->base, oracle::flatten(w.base));
}

TEST(FindPhjWitness, SigmaColoringsMatchOracle) {
  // colorings of the shape color_of(1/4 + sum of entries), full support
  nearzero::PhjSearchLimits full{64, 1 << 20};
  int found = 0;
  for (const char* spec_text : {"modsum:2", "modnum:3", "threshold:1/4", "modsum:3", "interval:3:1/5,1/4"}) {
    auto spec = nearzero::parse_coloring(spec_text);
    auto col = [&](const PhjPoint& u) { return spec.color_of(q(1, 4) + u.entry_sum()); };
    for (std::size_t d = 1; d <= 2; ++d) {
      const std::size_t N_max = d == 1 ? 3 : 2;
      Alphabet alpha({Rational(0), q(1, 32), q(-1, 64)});
      auto out = nearzero::find_phj_witness(col, alpha, d, 1, N_max, SearchBudget{}, {}, full);
      auto best = oracle::brute_phj(col, alpha, d, N_max);
      ASSERT_EQ(std::holds_alternative<PhjWitness>(out), best.has_value()) << spec_text << " d=" << d;
      if (!best) continue;
      ++found;
      const auto& w = std::get<PhjWitness>(out);
      EXPECT_EQ(best->N, w.base.side()) << spec_text;
      EXPECT_EQ(best->gamma, w.gamma) << spec_text;
      EXPECT_EQ(best->base, oracle::flatten(w.base)) << spec_text;
      for (const auto& p : nearzero::phj_generated_set(w.base, w.gamma, alpha)) EXPECT_EQ(col(p), w.color);
    }
  }
  EXPECT_GT(found, 0);
}

TEST(FindPhjWitness, ZeroBudgetIsExhausted) {
  SearchBudget b;
  b.max_nodes = 0;
  Alphabet alpha({Rational(0), q(1, 2)});
  auto out = nearzero::find_phj_witness([](const PhjPoint&) { return 1; }, alpha, 1, 1, 3, b);
  ASSERT_TRUE(std::holds_alternative<Exhausted>(out));
  EXPECT_EQ(std::get<Exhausted>(out).nodes_visited, 0u);
}

TEST(FindPhjWitness, SupportLimitBoundsBasePoints) {
  Alphabet alpha({q(1, 2)});
  std::size_t seen = 0;
  nearzero::Sink<nearzero::PhjCandidate> sink = [&](nearzero::PhjCandidate c) {
    std::size_t nz = 0;
    for (std::size_t j = 1; j <= c.base.degree(); ++j) c.base.tensor(j).for_each_nonzero([&](std::uint64_t, const Rational&) { ++nz; });
    EXPECT_LE(nz, 1u);
    ++seen;
    return true;
  };
  nearzero::detail::enumerate_phj_candidates(2, 2, alpha, {1, 1 << 20}, sink);
  // gamma {1}: 4 free slots, gamma {2}: 4, gamma {1,2}: 0; each with 1 + (free) choices
  EXPECT_EQ(seen, 5u + 5u + 1u);
}
