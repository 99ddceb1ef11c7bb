#pragma once

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <functional>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "nearzero/coloring.hpp"
#include "nearzero/encodings.hpp"
#include "nearzero/engine.hpp"
#include "nearzero/errors.hpp"
#include "nearzero/phj.hpp"
#include "nearzero/polynomial.hpp"
#include "nearzero/rational.hpp"
#include "nearzero/vdw.hpp"
#include "nearzero/words.hpp"

namespace nearzero {

// ---------------------------------------------------------------------------
// Replay
// ---------------------------------------------------------------------------

struct ReplayFailure {
  std::size_t index = 0;  // 0-based position in the point list
  Rational point;
  std::string reason;
};

/// Checks that every point lies in (0, eps) and that all share one color
/// under spec. Returns the first failure, or nullopt with `color` set.
inline std::optional<ReplayFailure> replay_points(std::span<const Rational> points, const ColoringSpec& spec,
                                                  const Rational& eps, int* color = nullptr) {
  if (points.empty()) return ReplayFailure{0, Rational(0), "empty configuration"};
  int first = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Rational& x = points[i];
    if (!in_open_interval(x, Rational(0), eps)) return ReplayFailure{i, x, "outside (0, " + eps.str() + ")"};
    int c = spec.color_of(x);
    if (i == 0) first = c;
    else if (c != first) {
      return ReplayFailure{i, x, "color " + std::to_string(c) + " differs from color " + std::to_string(first) + " of the first point"};
    }
  }
  if (color) *color = first;
  return std::nullopt;
}

inline void check_epsilon(const Rational& eps) {
  if (!(eps > Rational(0) && eps < Rational(1))) throw InvalidInput("epsilon must lie in (0, 1)");
}

inline void check_colors(const ColoringSpec& spec, int r) {
  if (r != spec.colors()) {
    throw InvalidInput("coloring has " + std::to_string(spec.colors()) + " colors but r = " + std::to_string(r));
  }
}

// Memoized color_of, keyed on the reduced rational.
class MemoColoring {
 public:
  explicit MemoColoring(const ColoringSpec& spec, std::size_t capacity = 1 << 18) : spec_(spec), cache_(capacity) {}
  int operator()(const Rational& x) const {
    return cache_.get(x, [&](const Rational& y) { return spec_.color_of(y); });
  }

 private:
  const ColoringSpec& spec_;
  mutable MemoCache<Rational, int> cache_;
};

// ---------------------------------------------------------------------------
// Arithmetic progressions near zero
// ---------------------------------------------------------------------------

struct ApWitness {
  Rational a;
  Rational d;
  int k = 0;
  int color = 0;
  std::size_t n = 0;  // interval [1, n] that was colored
  BigInt M;           // smallest integer above n / eps
};

/// a, a+d, ..., a+kd.
inline std::vector<Rational> ap_points(const Rational& a, const Rational& d, int k) {
  std::vector<Rational> out;
  for (int i = 0; i <= k; ++i) out.push_back(a + Rational(i) * d);
  return out;
}

using IntervalApSearcher = std::function<std::optional<IntervalAp>(std::span<const int>, int)>;

/// For n = 1, 2, ... colors t -> color_of(t / M) on [1, n] with M the
/// smallest integer above n / eps, and returns the first monochromatic
/// (k+1)-term progression found, scaled back by 1/M. Each n is one node.
inline SearchOutcome<ApWitness> ap_near_zero(const ColoringSpec& spec, int r, int k, const Rational& eps,
                                             const SearchBudget& budget, const SearchOptions& options = {},
                                             const IntervalApSearcher& searcher = find_ap_in_interval) {
  check_epsilon(eps);
  check_colors(spec, r);
  if (k < 0) throw InvalidInput("k must be nonnegative");
  MemoColoring color(spec);
  auto interval_colors = [&](std::size_t n, const BigInt& M) {
    std::vector<int> cs(n);
    for (std::size_t t = 1; t <= n; ++t) cs[t - 1] = color(Rational(BigInt(t), M));
    return cs;
  };
  auto enumerate = [&](const Sink<std::size_t>& sink) {
    for (std::size_t n = 1; n <= budget.max_N; ++n) {
      if (!sink(n)) return;
    }
  };
  auto accept = [&](std::size_t n) {
    BigInt M = floor_plus_one(Rational(BigInt(n)) / eps);
    return searcher(interval_colors(n, M), k).has_value();
  };
  auto depth = [](std::size_t n) { return static_cast<std::uint64_t>(n); };
  auto result = run_search<std::size_t>(enumerate, accept, depth, budget, options);
  if (auto* ex = std::get_if<Exhausted>(&result)) return *ex;

  const std::size_t n = std::get<Accepted<std::size_t>>(result).candidate;
  BigInt M = floor_plus_one(Rational(BigInt(n)) / eps);
  auto found = searcher(interval_colors(n, M), k);
  if (!found) throw WitnessRejected("interval search is not repeatable");
  if (found->a < 1 || found->d < 1 || found->a + static_cast<std::size_t>(k) * found->d > n) {
    throw WitnessRejected("interval search returned a progression outside [1, n]");
  }
  ApWitness wit{Rational(BigInt(found->a), M), Rational(BigInt(found->d), M), k, 0, n, M};
  if (auto fail = replay_points(ap_points(wit.a, wit.d, k), spec, eps, &wit.color)) {
    throw WitnessRejected("progression failed replay at " + fail->point.str() + ": " + fail->reason);
  }
  return wit;
}

// ---------------------------------------------------------------------------
// Geo-arithmetic progressions near zero
// ---------------------------------------------------------------------------

struct GeoWitness {
  GeoParams params;
  int k = 0;
  int color = 0;
  BmWitness structure;
  BigInt P;
  BigInt M;
};

using BmSearcher = std::function<SearchOutcome<BmWitness>(const WordColoring&, int k, std::size_t N_lo,
                                                          std::size_t N_hi, const SearchBudget&, const SearchOptions&)>;

inline SearchOutcome<BmWitness> default_bm_searcher(const WordColoring& coloring, int k, std::size_t lo, std::size_t hi,
                                                    const SearchBudget& budget, const SearchOptions& options) {
  return find_bm_witness(coloring, k, lo, hi, budget, options);
}

/// Colors {0..k}^N by color_of(f(w)) with P, M the smallest integers with
/// 1/P < eps and N/M < eps, searches for a monochromatic structure, and
/// reads (B, A, D) off it. The geo-arithmetic set is replayed before return.
inline SearchOutcome<GeoWitness> geo_arith_near_zero(const ColoringSpec& spec, int r, int k, const Rational& eps,
                                                     const SearchBudget& budget, const SearchOptions& options = {},
                                                     const BmSearcher& searcher = default_bm_searcher) {
  check_epsilon(eps);
  check_colors(spec, r);
  if (k < 0 || k > 9) throw InvalidInput("k must lie in [0, 9]");
  const BigInt P = smallest_P(eps);
  MemoColoring color(spec);
  WordColoring psi = [&](const Word& w) { return color(f_encode_unchecked(w, P, smallest_M(w.size(), eps))); };

  auto outcome = searcher(psi, k, 1, budget.max_N, budget, options);
  if (auto* ex = std::get_if<Exhausted>(&outcome)) return *ex;
  const BmWitness& bm = std::get<BmWitness>(outcome);
  if (bm.k != k) throw WitnessRejected("structure has the wrong alphabet");
  const BigInt M = smallest_M(bm.N(), eps);
  GeoParams g;
  try {
    g = extract_geo_params(bm, P, M);
  } catch (const PreconditionViolation& e) {
    throw WitnessRejected(std::string("malformed structure: ") + e.what());
  }
  GeoWitness wit{g, k, 0, bm, P, M};
  if (auto fail = replay_points(geo_points(g, k), spec, eps, &wit.color)) {
    throw WitnessRejected("geo-arithmetic set failed replay at " + fail->point.str() + ": " + fail->reason);
  }
  return wit;
}

// ---------------------------------------------------------------------------
// Polynomial configurations near zero
// ---------------------------------------------------------------------------

struct PolyWitness {
  Rational a;
  Rational alpha;
  std::vector<Polynomial> polys;
  int color = 0;
  // Provenance when produced through Q(N); absent for the direct oracle.
  std::optional<PhjWitness> structure;
  std::size_t N = 0;
  BigInt b;
  Rational shift;
};

/// a, a + P_1(alpha), ..., a + P_n(alpha).
inline std::vector<Rational> poly_points(const Rational& a, const Rational& alpha, std::span<const Polynomial> polys) {
  std::vector<Rational> out{a};
  for (const auto& p : polys) out.push_back(a + p(alpha));
  return out;
}

/// The parameters the polynomial pipeline derives at one side length N.
struct PolyEncoding {
  std::size_t d = 1;
  Rational m;  // max |a^i_j|
  BigInt b;
  Alphabet alphabet;
  Rational shift;
};

/// d = max degree, m = max |a^i_j|, b the smallest positive integer with
/// m * sum_{j<=d} N^j / b < eps/4, A = {a^i_j / b^j} plus 0, shift = 3 eps / 8.
inline PolyEncoding poly_encoding(std::span<const Polynomial> polys, std::size_t N, const Rational& eps) {
  PolyEncoding enc;
  enc.d = 1;
  for (const auto& p : polys) enc.d = std::max(enc.d, p.degree());
  for (const auto& p : polys) {
    for (std::size_t j = 1; j <= enc.d; ++j) {
      if (abs(p.coeff(j)) > enc.m) enc.m = abs(p.coeff(j));
    }
  }
  BigInt positions = 0;
  BigInt power = 1;
  for (std::size_t j = 1; j <= enc.d; ++j) {
    power *= N;
    positions += power;
  }
  enc.b = enc.m.is_zero() ? BigInt(1) : floor_plus_one(Rational(4) * enc.m * Rational(positions) / eps);
  std::vector<Rational> letters{Rational(0)};
  for (const auto& p : polys) {
    for (std::size_t j = 1; j <= enc.d; ++j) {
      letters.push_back(p.coeff(j) / Rational(boost::multiprecision::pow(enc.b, static_cast<unsigned>(j))));
    }
  }
  enc.alphabet = Alphabet(std::move(letters));
  enc.shift = Rational(3) * eps / Rational(8);
  return enc;
}

using PhjSearcher = std::function<SearchOutcome<PhjWitness>(const PointColoring&, const Alphabet&, std::size_t d,
                                                            std::size_t N_lo, std::size_t N_hi, const SearchBudget&,
                                                            const SearchOptions&)>;

inline PhjSearcher make_phj_searcher(PhjSearchLimits limits = {}) {
  return [limits](const PointColoring& coloring, const Alphabet& alphabet, std::size_t d, std::size_t lo,
                  std::size_t hi, const SearchBudget& budget, const SearchOptions& options) {
    return find_phj_witness(coloring, alphabet, d, lo, hi, budget, options, limits);
  };
}

inline void check_polys(std::span<const Polynomial> polys) {
  if (polys.empty()) throw InvalidInput("at least one polynomial is required");
}

/// For N = 1, 2, ... colors Q(N) over the alphabet from poly_encoding by
/// color_of(sigma(u)), searches for a monochromatic (u, gamma), and returns
/// a = shift + s, alpha = |gamma| / b where s is u's off-gamma sum. The
/// configuration is replayed before return.
inline SearchOutcome<PolyWitness> poly_vdw_near_zero(const std::vector<Polynomial>& polys, const ColoringSpec& spec,
                                                     int k_colors, const Rational& eps, const SearchBudget& budget,
                                                     const SearchOptions& options = {},
                                                     const PhjSearcher& searcher = make_phj_searcher()) {
  check_polys(polys);
  check_epsilon(eps);
  check_colors(spec, k_colors);
  using Clock = std::chrono::steady_clock;
  const auto started = Clock::now();
  MemoColoring color(spec);
  std::uint64_t used = 0;
  std::uint64_t reached = 0;
  bool timed_out = false;

  for (std::size_t N = 1; N <= budget.max_N; ++N) {
    SearchBudget rest = remaining_budget(budget, used, started);
    if (rest.max_nodes == 0 || (rest.wall_time && rest.wall_time->count() == 0)) {
      timed_out = rest.max_nodes != 0;
      break;
    }
    PolyEncoding enc = poly_encoding(polys, N, eps);
    SigmaEncoder sigma(enc.alphabet, enc.d, N, eps, enc.shift);
    PointColoring coloring = [&](const PhjPoint& u) { return color(sigma(u)); };

    auto outcome = searcher(coloring, enc.alphabet, enc.d, N, N, rest, options);
    if (auto* ex = std::get_if<Exhausted>(&outcome)) {
      used += ex->nodes_visited;
      reached = std::max(reached, ex->max_N_reached);
      if (ex->timed_out) {
        timed_out = true;
        break;
      }
      continue;
    }
    const PhjWitness& phj = std::get<PhjWitness>(outcome);
    if (phj.base.side() != N || phj.base.degree() != enc.d) throw WitnessRejected("point has the wrong shape");
    try {
      check_phj_structure(phj.base, phj.gamma, enc.alphabet);
    } catch (const PreconditionViolation& e) {
      throw WitnessRejected(std::string("malformed point structure: ") + e.what());
    }
    PolyWitness wit;
    wit.alpha = Rational(BigInt(phj.gamma.size()), enc.b);
    wit.a = enc.shift + off_gamma_sum(phj.base, phj.gamma);
    wit.polys = polys;
    wit.structure = phj;
    wit.N = N;
    wit.b = enc.b;
    wit.shift = enc.shift;
    if (auto fail = replay_points(poly_points(wit.a, wit.alpha, polys), spec, eps, &wit.color)) {
      throw WitnessRejected("polynomial configuration failed replay at " + fail->point.str() + ": " + fail->reason);
    }
    return wit;
  }
  return Exhausted{used, reached, timed_out};
}

// ---------------------------------------------------------------------------
// Direct oracle
// ---------------------------------------------------------------------------

/// Every rational of height at most h, either sign, sorted in height order.
inline std::vector<Rational> rationals_up_to_height(std::size_t h) {
  std::vector<Rational> out;
  for (std::size_t den = 1; den <= h; ++den) {
    for (long long n = -static_cast<long long>(h); n <= static_cast<long long>(h); ++n) {
      if (std::gcd(static_cast<unsigned long long>(n < 0 ? -n : n), den) != 1) continue;
      out.emplace_back(BigInt(n), BigInt(den));
    }
  }
  std::sort(out.begin(), out.end(), HeightLess{});
  return out;
}

/// First pair (a, alpha) with alpha != 0 whose configuration lies in
/// (0, eps) and is monochromatic. Pairs are ordered by the larger of the
/// two heights, then a in height order, then alpha in height order; both
/// heights are at most height_bound.
inline std::optional<PolyWitness> direct_poly_witness(const std::vector<Polynomial>& polys, const ColoringSpec& spec,
                                                      const Rational& eps, std::size_t height_bound) {
  check_polys(polys);
  check_epsilon(eps);
  const auto all = rationals_up_to_height(height_bound);
  std::vector<Rational> as;
  std::vector<Rational> alphas;
  for (const auto& x : all) {
    if (in_open_interval(x, Rational(0), eps)) as.push_back(x);
    if (!x.is_zero()) alphas.push_back(x);
  }
  auto height_of = [](const Rational& x) { return static_cast<std::size_t>(x.height()); };
  // alphas of height exactly h occupy [first[h], first[h+1])
  std::vector<std::size_t> first(height_bound + 2, alphas.size());
  for (std::size_t i = alphas.size(); i > 0; --i) first[height_of(alphas[i - 1])] = i - 1;
  for (std::size_t h = height_bound; h > 0; --h) first[h] = std::min(first[h], first[h + 1]);
  first[0] = 0;

  MemoColoring color(spec);
  auto try_pair = [&](const Rational& a, const Rational& alpha) -> std::optional<PolyWitness> {
    int c0 = color(a);
    for (const auto& p : polys) {
      Rational y = a + p(alpha);
      if (!in_open_interval(y, Rational(0), eps) || color(y) != c0) return std::nullopt;
    }
    PolyWitness w;
    w.a = a;
    w.alpha = alpha;
    w.polys = polys;
    w.color = c0;
    return w;
  };

  for (std::size_t h = 1; h <= height_bound; ++h) {
    for (const auto& a : as) {
      const std::size_t ha = height_of(a);
      if (ha > h) break;
      // when a is below level h, alpha must sit exactly at level h
      const std::size_t lo = ha == h ? 0 : first[h];
      const std::size_t hi = first[h + 1];
      for (std::size_t i = lo; i < hi; ++i) {
        if (auto w = try_pair(a, alphas[i])) {
          if (replay_points(poly_points(w->a, w->alpha, polys), spec, eps)) throw WitnessRejected("direct oracle replay failed");
          return w;
        }
      }
    }
  }
  return std::nullopt;
}

}  // namespace nearzero
