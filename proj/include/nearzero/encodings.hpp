#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

#include "nearzero/errors.hpp"
#include "nearzero/phj.hpp"
#include "nearzero/rational.hpp"
#include "nearzero/words.hpp"

namespace nearzero {

// ---------------------------------------------------------------------------
// Words to (0, eps): f(alpha) = (1/P) * prod_{t in [N]} (t/M)^{alpha(t)}.
// ---------------------------------------------------------------------------

/// Checks 1/P < eps and N/M < eps < 1; throws InvalidInput otherwise.
inline void check_word_encoding(std::size_t N, const BigInt& P, const BigInt& M, const Rational& eps) {
  if (!(eps > Rational(0) && eps < Rational(1))) throw InvalidInput("epsilon must lie in (0, 1)");
  if (P < 1 || M < 1) throw InvalidInput("P and M must be positive integers");
  if (!(Rational(BigInt(1), P) < eps)) throw InvalidInput("need 1/P < epsilon");
  if (!(Rational(BigInt(N), M) < eps)) throw InvalidInput("need N/M < epsilon");
}

/// Exact f(alpha) for parameters already checked by check_word_encoding.
inline Rational f_encode_unchecked(const Word& alpha, const BigInt& P, const BigInt& M) {
  BigInt num = 1;
  unsigned total = 0;
  for (std::size_t t = 1; t <= alpha.size(); ++t) {
    unsigned e = alpha.letters[t - 1];
    if (e == 0) continue;
    num *= boost::multiprecision::pow(BigInt(t), e);
    total += e;
  }
  return Rational(num, P * boost::multiprecision::pow(M, total));
}

/// f(alpha); lies in (0, eps) because every factor t/M is below 1.
inline Rational f_encode(const Word& alpha, const BigInt& P, const BigInt& M, const Rational& eps) {
  check_word_encoding(alpha.size(), P, M, eps);
  return f_encode_unchecked(alpha, P, M);
}

/// Smallest P with 1/P < eps.
inline BigInt smallest_P(const Rational& eps) { return floor_plus_one(Rational(1) / eps); }

/// Smallest M with N/M < eps.
inline BigInt smallest_M(std::size_t N, const Rational& eps) { return floor_plus_one(Rational(BigInt(N)) / eps); }

struct GeoParams {
  Rational B;
  Rational A;
  Rational D;
  friend bool operator==(const GeoParams&, const GeoParams&) = default;
};

/// (B, A, D) with f(alpha_{j,q}) = B (A + jD)^q, where
/// alpha_{j,q} = w^{{a_1 + j b_1, a_2, ..., a_l}}(q).
inline GeoParams extract_geo_params(const BmWitness& wit, const BigInt& P, const BigInt& M) {
  check_bm_structure(wit.w, wit.blocks, wit.k);
  if (P < 1 || M < 1) throw InvalidInput("P and M must be positive integers");
  // u_t = 0 on every block, so B is just f(w).
  Rational B = f_encode_unchecked(wit.w, P, M);
  Rational tail(1);
  for (std::size_t i = 1; i < wit.blocks.size(); ++i) tail *= Rational(BigInt(wit.blocks[i].start), M);
  Rational A = Rational(BigInt(wit.blocks[0].start), M) * tail;
  Rational D = Rational(BigInt(wit.blocks[0].step), M) * tail;
  return {B, A, D};
}

/// The word alpha_{j,q} = w^{{a_1 + j b_1, a_2, ..., a_l}}(q).
inline Word geo_slice_word(const BmWitness& wit, int j, int q) {
  std::vector<std::size_t> positions;
  positions.push_back(wit.blocks[0].element(j));
  for (std::size_t i = 1; i < wit.blocks.size(); ++i) positions.push_back(wit.blocks[i].start);
  return substitute(wit.w, positions, q);
}

/// B (A + iD)^j for i, j in {0..k}, i-major, duplicates collapsed in first-seen order.
inline std::vector<Rational> geo_points(const GeoParams& g, int k) {
  std::vector<Rational> out;
  for (int i = 0; i <= k; ++i) {
    Rational base = g.A + Rational(i) * g.D;
    for (int j = 0; j <= k; ++j) {
      Rational v = g.B * pow(base, static_cast<unsigned>(j));
      if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(std::move(v));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Points of Q(N) to (0, eps): sigma(u) = shift + sum of all entries.
// ---------------------------------------------------------------------------

inline Rational sigma_encode(const PhjPoint& u, const Rational& shift) { return shift + u.entry_sum(); }

/// sigma bound to one (alphabet, d, N, eps). Construction checks that
/// shift is in (eps/4, eps/2) and max|x| * sum_j N^j < eps/4, which keeps
/// every encoded point inside (0, eps).
class SigmaEncoder {
 public:
  SigmaEncoder(const Alphabet& alphabet, std::size_t d, std::size_t N, Rational eps, Rational shift)
      : eps_(std::move(eps)), shift_(std::move(shift)), d_(d), N_(N) {
    if (!(eps_ > Rational(0) && eps_ < Rational(1))) throw InvalidInput("epsilon must lie in (0, 1)");
    const Rational quarter = eps_ / Rational(4);
    if (!(shift_ > quarter && shift_ < eps_ / Rational(2))) throw InvalidInput("shift must lie in (eps/4, eps/2)");
    Rational bound;
    for (const auto& x : alphabet.entries()) {
      if (abs(x) > bound) bound = abs(x);
    }
    BigInt positions = 0;
    BigInt side = N;
    BigInt power = 1;
    for (std::size_t j = 1; j <= d; ++j) {
      power *= side;
      positions += power;
    }
    if (!(bound * Rational(positions) < quarter)) throw InvalidInput("alphabet too large: max|x| * sum N^j must be below eps/4");
  }

  Rational operator()(const PhjPoint& u) const {
    if (u.degree() != d_ || u.side() != N_) throw InvalidInput("point shape differs from the encoder's");
    return sigma_encode(u, shift_);
  }

  const Rational& shift() const noexcept { return shift_; }
  const Rational& eps() const noexcept { return eps_; }

 private:
  Rational eps_;
  Rational shift_;
  std::size_t d_;
  std::size_t N_;
};

}  // namespace nearzero
