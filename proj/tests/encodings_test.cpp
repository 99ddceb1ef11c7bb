#include <gtest/gtest.h>

#include <random>

#include "nearzero/encodings.hpp"
#include "nearzero/errors.hpp"
#include "oracles.hpp"

using nearzero::Alphabet;
using nearzero::ApBlock;
using nearzero::BigInt;
using nearzero::BmWitness;
using nearzero::PhjPoint;
using nearzero::Rational;
using nearzero::Word;

namespace {

Rational q(long long n, long long d) { return Rational(BigInt(n), BigInt(d)); }

// (1/P) * prod_t (t/M)^{alpha(t)} by plain rational products.
Rational f_by_product(const Word& w, long long P, long long M) {
  Rational v = q(1, P);
  for (std::size_t t = 1; t <= w.size(); ++t) {
    for (int e = 0; e < w.at(t); ++e) v *= q(static_cast<long long>(t), M);
  }
  return v;
}

}  // namespace

TEST(FEncode, Examples) {
  const Rational eps = q(1, 2);
  EXPECT_EQ(nearzero::f_encode(Word(1, {0, 0}), 3, 5, eps), q(1, 3));
  EXPECT_EQ(nearzero::f_encode(Word(1, {1, 0, 0}), 3, 7, eps), q(1, 21));
  EXPECT_EQ(nearzero::f_encode_unchecked(Word(1, {1, 0, 0}), 2, 4), q(1, 8));
  EXPECT_EQ(nearzero::f_encode(Word(1, {1, 1}), 3, 5, eps), q(2, 75));
}

TEST(FEncode, ChecksParameters) {
  // 1/P < eps and N/M < eps are both required
  EXPECT_THROW(nearzero::f_encode(Word(1, {1, 0, 0}), 2, 4, q(1, 2)), nearzero::InvalidInput);
  EXPECT_THROW(nearzero::f_encode(Word(1, {1, 0}), 3, 4, q(1, 2)), nearzero::InvalidInput);
  EXPECT_THROW(nearzero::f_encode(Word(1, {1, 0}), 3, 5, Rational(1)), nearzero::InvalidInput);
}

TEST(FEncode, SmallestParameters) {
  EXPECT_EQ(nearzero::smallest_P(q(1, 2)), 3);
  EXPECT_EQ(nearzero::smallest_P(q(2, 5)), 3);
  EXPECT_EQ(nearzero::smallest_P(q(1, 10)), 11);
  EXPECT_EQ(nearzero::smallest_M(2, q(1, 2)), 5);
  EXPECT_EQ(nearzero::smallest_M(3, q(1, 10)), 31);
}

TEST(FEncodeProperty, AgreesWithProductAndIsInjectiveOnSmallCubes) {
  const Rational eps = q(1, 2);
  for (std::size_t N = 1; N <= 5; ++N) {
    const long long M = 2 * static_cast<long long>(N) + 1;
    std::set<Rational> seen;
    std::size_t count = 0;
    std::vector<std::uint8_t> letters(N, 0);
    while (true) {
      Word w(2, letters);
      Rational v = nearzero::f_encode(w, 3, M, eps);
      EXPECT_EQ(v, f_by_product(w, 3, M));
      EXPECT_TRUE(nearzero::in_open_interval(v, Rational(0), eps));
      seen.insert(v);
      ++count;
      std::size_t i = 0;
      while (i < N && letters[i] == 2) letters[i++] = 0;
      if (i == N) break;
      ++letters[i];
    }
    // injective only when the exponent vector can be read back: true for N <= 3 here
    if (N <= 3) {
      EXPECT_EQ(seen.size(), count) << N;
    }
  }
}

TEST(ExtractGeoParams, Examples) {
  BmWitness one{1, Word(1, {0, 0}), {{1, 1}}, 0};
  auto g = nearzero::extract_geo_params(one, 2, 4);
  EXPECT_EQ(g.B, q(1, 2));
  EXPECT_EQ(g.A, q(1, 4));
  EXPECT_EQ(g.D, q(1, 4));
  for (int j = 0; j <= 1; ++j) {
    for (int qq = 0; qq <= 1; ++qq) {
      EXPECT_EQ(f_by_product(nearzero::geo_slice_word(one, j, qq), 2, 4), g.B * nearzero::pow(g.A + Rational(j) * g.D, qq));
    }
  }

  // single-point blocks {1} and {3} in [3]
  BmWitness two{0, Word(0, {0, 0, 0}), {{1, 1}, {3, 1}}, 0};
  auto h = nearzero::extract_geo_params(two, 3, 7);
  EXPECT_EQ(h.B, q(1, 3));
  EXPECT_EQ(h.A, q(3, 49));
  EXPECT_EQ(h.D, q(3, 49));
  EXPECT_EQ(f_by_product(nearzero::geo_slice_word(two, 0, 0), 3, 7), h.B);
}

TEST(ExtractGeoParams, RejectsInvalidStructure) {
  BmWitness bad{1, Word(1, {1, 0}), {{1, 1}}, 0};
  EXPECT_THROW(nearzero::extract_geo_params(bad, 3, 5), nearzero::PreconditionViolation);
}

TEST(GeoIdentityProperty, RandomWitnesses) {
  std::mt19937_64 rng(29);
  int checked = 0;
  while (checked < 300) {
    int k = static_cast<int>(rng() % 4);
    std::size_t N = rng() % 8 + 1;
    auto fam = nearzero::ap_blocks(N, k);
    std::vector<ApBlock> chain;
    std::size_t min_start = 1;
    for (const auto& b : fam) {
      if (b.start >= min_start && rng() % 3 == 0) {
        chain.push_back(b);
        min_start = b.last(k) + 1;
      }
    }
    if (chain.empty()) continue;
    std::vector<std::uint8_t> letters(N);
    for (auto& c : letters) c = static_cast<std::uint8_t>(rng() % (k + 1));
    for (const auto& b : chain) {
      for (int j = 0; j <= k; ++j) letters[b.element(j) - 1] = 0;
    }
    BmWitness wit{k, Word(k, letters), chain, 0};
    const long long P = static_cast<long long>(rng() % 20 + 2);
    const long long M = static_cast<long long>(N + rng() % 20 + 1);
    auto g = nearzero::extract_geo_params(wit, P, M);
    for (int j = 0; j <= k; ++j) {
      for (int qq = 0; qq <= k; ++qq) {
        EXPECT_EQ(f_by_product(nearzero::geo_slice_word(wit, j, qq), P, M), g.B * nearzero::pow(g.A + Rational(j) * g.D, qq));
      }
    }
    ++checked;
  }
}

TEST(GeoPoints, CollapseDuplicatesInFirstSeenOrder) {
  nearzero::GeoParams g{q(1, 3), q(1, 5), q(1, 5)};
  auto pts = nearzero::geo_points(g, 1);
  // i = 0: B, B*A; i = 1: B, B*(A+D)
  EXPECT_EQ(pts, (std::vector<Rational>{q(1, 3), q(1, 15), q(2, 15)}));
  EXPECT_EQ(nearzero::geo_points(g, 0), (std::vector<Rational>{q(1, 3)}));
}

TEST(SigmaEncode, Examples) {
  EXPECT_EQ(nearzero::sigma_encode(PhjPoint(2, 3), q(1, 4)), q(1, 4));
  PhjPoint u(1, 2);
  u.set(1, {1}, q(1, 8));
  u.set(1, {2}, q(-1, 8));
  EXPECT_EQ(nearzero::sigma_encode(u, q(1, 4)), q(1, 4));
  PhjPoint v(2, 2);
  v.set(1, {1}, q(1, 8));
  EXPECT_EQ(nearzero::sigma_encode(v, q(1, 4)), q(3, 8));
}

TEST(SigmaEncoder, ValidatesParameters) {
  Alphabet alpha({Rational(0), q(1, 17)});
  EXPECT_NO_THROW(nearzero::SigmaEncoder(alpha, 2, 1, q(1, 2), q(3, 16)));
  // shift must lie in (eps/4, eps/2)
  EXPECT_THROW(nearzero::SigmaEncoder(alpha, 2, 1, q(1, 2), q(1, 8)), nearzero::InvalidInput);
  EXPECT_THROW(nearzero::SigmaEncoder(alpha, 2, 1, q(1, 2), q(1, 4)), nearzero::InvalidInput);
  // 2 positions at 1/16 reach eps/4 exactly
  EXPECT_THROW(nearzero::SigmaEncoder(Alphabet({q(1, 16)}), 2, 1, q(1, 2), q(3, 16)), nearzero::InvalidInput);
  nearzero::SigmaEncoder enc(alpha, 2, 1, q(1, 2), q(3, 16));
  EXPECT_THROW(enc(PhjPoint(2, 2)), nearzero::InvalidInput);
}

TEST(SigmaIdentityProperty, RandomPoints) {
  std::mt19937_64 rng(31);
  const std::vector<Rational> letters{q(1, 97), q(-2, 97), q(3, 1000), q(-1, 500), Rational(0)};
  for (int i = 0; i < 300; ++i) {
    std::size_t d = rng() % 3 + 1;
    std::size_t N = rng() % 4 + 1;
    std::vector<std::size_t> g;
    while (g.empty()) {
      for (std::size_t t = 1; t <= N; ++t) {
        if (rng() % 2) g.push_back(t);
      }
    }
    PhjPoint u(d, N);
    for (std::size_t j = 1; j <= d; ++j) {
      for (const auto& idx : oracle::tuples(N, j)) {
        bool on = std::all_of(idx.begin(), idx.end(), [&](std::size_t t) { return std::count(g.begin(), g.end(), t) > 0; });
        if (!on && rng() % 2) u.set(j, idx, letters[rng() % letters.size()]);
      }
    }
    std::vector<Rational> xs;
    for (std::size_t j = 0; j < d; ++j) xs.push_back(letters[rng() % letters.size()]);
    const Rational r = q(3, 16);
    Rational s = nearzero::off_gamma_sum(u, g);
    Rational rhs = r + s;
    for (std::size_t j = 1; j <= d; ++j) rhs += xs[j - 1] * nearzero::pow(Rational(static_cast<long long>(g.size())), static_cast<unsigned>(j));
    EXPECT_EQ(nearzero::sigma_encode(nearzero::oplus(u, g, xs), r), rhs);
    EXPECT_EQ(r + oracle::entry_sum_by_definition(oracle::oplus_by_definition(u, g, xs)), rhs);
  }
}
