#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "nearzero/engine.hpp"
#include "nearzero/errors.hpp"
#include "nearzero/rational.hpp"

namespace nearzero {

/// Finite set of rationals, kept distinct and sorted in height order.
class Alphabet {
 public:
  Alphabet() = default;
  explicit Alphabet(std::vector<Rational> entries) : entries_(std::move(entries)) {
    std::sort(entries_.begin(), entries_.end(), HeightLess{});
    entries_.erase(std::unique(entries_.begin(), entries_.end()), entries_.end());
  }

  const std::vector<Rational>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool contains(const Rational& x) const { return std::binary_search(entries_.begin(), entries_.end(), x, HeightLess{}); }
  bool contains_zero() const { return contains(Rational(0)); }

  friend bool operator==(const Alphabet&, const Alphabet&) = default;

 private:
  std::vector<Rational> entries_;
};

using IndexTuple = std::vector<std::size_t>;  // 1-based, lexicographic order

/// One factor [q]^{N^j} of Q(N). Dense for j <= 2, sparse (absent = 0) above.
/// Entries are addressed by flat index: the rank of the index tuple in
/// lexicographic order.
class Tensor {
 public:
  Tensor(std::size_t degree, std::size_t side) : degree_(degree), side_(side), size_(1) {
    for (std::size_t i = 0; i < degree; ++i) {
      if (side != 0 && size_ > UINT64_MAX / side) throw InvalidInput("tensor too large");
      size_ *= side;
    }
    if (degree <= 2) storage_ = std::vector<Rational>(size_);
    else storage_ = std::map<std::uint64_t, Rational>{};
  }

  std::size_t degree() const noexcept { return degree_; }
  std::size_t side() const noexcept { return side_; }
  std::uint64_t size() const noexcept { return size_; }
  bool dense() const noexcept { return std::holds_alternative<std::vector<Rational>>(storage_); }

  std::uint64_t flat(const IndexTuple& idx) const {
    if (idx.size() != degree_) throw InvalidInput("index tuple length differs from tensor degree");
    std::uint64_t f = 0;
    for (std::size_t i : idx) {
      if (i < 1 || i > side_) throw InvalidInput("index outside [1, N]");
      f = f * side_ + (i - 1);
    }
    return f;
  }

  IndexTuple unflat(std::uint64_t f) const {
    IndexTuple idx(degree_);
    for (std::size_t m = degree_; m > 0; --m) {
      idx[m - 1] = static_cast<std::size_t>(f % side_) + 1;
      f /= side_;
    }
    return idx;
  }

  Rational get(std::uint64_t f) const {
    if (auto* d = std::get_if<std::vector<Rational>>(&storage_)) return (*d)[f];
    const auto& s = std::get<std::map<std::uint64_t, Rational>>(storage_);
    auto it = s.find(f);
    return it == s.end() ? Rational(0) : it->second;
  }

  void set(std::uint64_t f, const Rational& v) {
    if (f >= size_) throw InvalidInput("flat index out of range");
    if (auto* d = std::get_if<std::vector<Rational>>(&storage_)) {
      (*d)[f] = v;
      return;
    }
    auto& s = std::get<std::map<std::uint64_t, Rational>>(storage_);
    if (v.is_zero()) s.erase(f);
    else s[f] = v;
  }

  /// Calls fn(flat, value) for every nonzero entry in flat order.
  template <class Fn>
  void for_each_nonzero(Fn&& fn) const {
    if (auto* d = std::get_if<std::vector<Rational>>(&storage_)) {
      for (std::uint64_t f = 0; f < d->size(); ++f) {
        if (!(*d)[f].is_zero()) fn(f, (*d)[f]);
      }
      return;
    }
    for (const auto& [f, v] : std::get<std::map<std::uint64_t, Rational>>(storage_)) fn(f, v);
  }

  Rational sum() const {
    Rational s;
    for_each_nonzero([&](std::uint64_t, const Rational& v) { s += v; });
    return s;
  }

  friend bool operator==(const Tensor& x, const Tensor& y) {
    return x.degree_ == y.degree_ && x.side_ == y.side_ && x.storage_ == y.storage_;
  }

  // Lexicographic over flat positions, values in height order.
  friend std::strong_ordering operator<=>(const Tensor& x, const Tensor& y) {
    if (x.side_ != y.side_) return x.side_ <=> y.side_;
    if (x.degree_ != y.degree_) return x.degree_ <=> y.degree_;
    if (x.dense()) {
      const auto& a = std::get<std::vector<Rational>>(x.storage_);
      const auto& b = std::get<std::vector<Rational>>(y.storage_);
      for (std::size_t i = 0; i < a.size(); ++i) {
        auto c = height_compare(a[i], b[i]);
        if (c != 0) return c;
      }
      return std::strong_ordering::equal;
    }
    // First differing position is the least key present in either map whose values differ.
    const auto& a = std::get<std::map<std::uint64_t, Rational>>(x.storage_);
    const auto& b = std::get<std::map<std::uint64_t, Rational>>(y.storage_);
    auto ia = a.begin();
    auto ib = b.begin();
    const Rational zero;
    while (ia != a.end() || ib != b.end()) {
      std::uint64_t fa = ia == a.end() ? UINT64_MAX : ia->first;
      std::uint64_t fb = ib == b.end() ? UINT64_MAX : ib->first;
      std::uint64_t f = std::min(fa, fb);
      const Rational& va = fa == f ? ia->second : zero;
      const Rational& vb = fb == f ? ib->second : zero;
      auto c = height_compare(va, vb);
      if (c != 0) return c;
      if (fa == f) ++ia;
      if (fb == f) ++ib;
    }
    return std::strong_ordering::equal;
  }

 private:
  std::size_t degree_;
  std::size_t side_;
  std::uint64_t size_;
  std::variant<std::vector<Rational>, std::map<std::uint64_t, Rational>> storage_;
};

/// A point of Q(N) = A^N x A^{N^2} x ... x A^{N^d}; every entry starts at 0.
class PhjPoint {
 public:
  PhjPoint(std::size_t d, std::size_t N) : d_(d), N_(N) {
    if (d < 1) throw InvalidInput("degree must be at least 1");
    if (N < 1) throw InvalidInput("side length must be at least 1");
    for (std::size_t j = 1; j <= d; ++j) tensors_.emplace_back(j, N);
  }

  std::size_t degree() const noexcept { return d_; }
  std::size_t side() const noexcept { return N_; }

  const Tensor& tensor(std::size_t j) const { return tensors_.at(j - 1); }
  Tensor& tensor(std::size_t j) { return tensors_.at(j - 1); }

  Rational at(std::size_t j, const IndexTuple& idx) const { return tensor(j).get(tensor(j).flat(idx)); }
  void set(std::size_t j, const IndexTuple& idx, const Rational& v) { tensor(j).set(tensor(j).flat(idx), v); }

  /// Sum of every entry of every tensor.
  Rational entry_sum() const {
    Rational s;
    for (const auto& t : tensors_) s += t.sum();
    return s;
  }

  friend bool operator==(const PhjPoint&, const PhjPoint&) = default;
  friend std::strong_ordering operator<=>(const PhjPoint& x, const PhjPoint& y) {
    if (x.d_ != y.d_) return x.d_ <=> y.d_;
    if (x.N_ != y.N_) return x.N_ <=> y.N_;
    for (std::size_t j = 0; j < x.tensors_.size(); ++j) {
      auto c = x.tensors_[j] <=> y.tensors_[j];
      if (c != 0) return c;
    }
    return std::strong_ordering::equal;
  }

 private:
  std::size_t d_;
  std::size_t N_;
  std::vector<Tensor> tensors_;
};

/// Sorted, deduplicated copy of gamma; throws unless it is a nonempty subset of [N].
inline std::vector<std::size_t> normalize_gamma(std::span<const std::size_t> gamma, std::size_t N) {
  if (gamma.empty()) throw InvalidInput("gamma must be nonempty");
  std::vector<std::size_t> g(gamma.begin(), gamma.end());
  std::sort(g.begin(), g.end());
  g.erase(std::unique(g.begin(), g.end()), g.end());
  if (g.front() < 1 || g.back() > N) throw InvalidInput("gamma must be a subset of [1, N]");
  return g;
}

/// Calls fn(flat) for every tuple of gamma^j, in lexicographic order.
template <class Fn>
void for_each_gamma_power(const Tensor& t, std::span<const std::size_t> gamma, Fn&& fn) {
  const std::size_t j = t.degree();
  std::vector<std::size_t> pos(j, 0);
  while (true) {
    std::uint64_t f = 0;
    for (std::size_t m = 0; m < j; ++m) f = f * t.side() + (gamma[pos[m]] - 1);
    fn(f);
    std::size_t m = j;
    while (m > 0) {
      --m;
      if (++pos[m] < gamma.size()) break;
      pos[m] = 0;
      if (m == 0) return;
    }
  }
}

/// a (+) x_1 gamma (+) x_2 gamma^2 (+) ... (+) x_d gamma^d.
inline PhjPoint oplus(const PhjPoint& a, std::span<const std::size_t> gamma, std::span<const Rational> xs) {
  auto g = normalize_gamma(gamma, a.side());
  if (xs.size() != a.degree()) throw InvalidInput("need exactly one value per degree");
  PhjPoint b = a;
  for (std::size_t j = 1; j <= a.degree(); ++j) {
    Tensor& t = b.tensor(j);
    for_each_gamma_power(t, g, [&](std::uint64_t f) { t.set(f, xs[j - 1]); });
  }
  return b;
}

/// Sum of the entries of a lying off gamma^j, over every j.
inline Rational off_gamma_sum(const PhjPoint& a, std::span<const std::size_t> gamma) {
  auto g = normalize_gamma(gamma, a.side());
  Rational s;
  for (std::size_t j = 1; j <= a.degree(); ++j) {
    const Tensor& t = a.tensor(j);
    t.for_each_nonzero([&](std::uint64_t f, const Rational& v) {
      IndexTuple idx = t.unflat(f);
      bool on = std::all_of(idx.begin(), idx.end(), [&](std::size_t i) { return std::binary_search(g.begin(), g.end(), i); });
      if (!on) s += v;
    });
  }
  return s;
}

struct PhjWitness {
  PhjPoint base;
  std::vector<std::size_t> gamma;
  Alphabet alphabet;
  int color = 0;
};

/// Throws PreconditionViolation unless a is zero on every gamma^j and every
/// entry of a is 0 or an alphabet letter.
inline void check_phj_structure(const PhjPoint& a, std::span<const std::size_t> gamma, const Alphabet& alphabet) {
  std::vector<std::size_t> g;
  try {
    g = normalize_gamma(gamma, a.side());
  } catch (const InvalidInput& e) {
    throw PreconditionViolation(e.what());
  }
  if (alphabet.size() == 0) throw PreconditionViolation("alphabet must be nonempty");
  for (std::size_t j = 1; j <= a.degree(); ++j) {
    const Tensor& t = a.tensor(j);
    for_each_gamma_power(t, g, [&](std::uint64_t f) {
      if (!t.get(f).is_zero()) throw PreconditionViolation("base point is nonzero on gamma^" + std::to_string(j));
    });
    t.for_each_nonzero([&](std::uint64_t, const Rational& v) {
      if (!alphabet.contains(v)) throw PreconditionViolation("base point entry " + v.str() + " is not in the alphabet");
    });
  }
}

namespace detail {

// Calls fn(xs) for xs in alphabet^d, odometer order (last slot fastest).
template <class Fn>
bool for_each_assignment(const Alphabet& alphabet, std::size_t d, Fn&& fn) {
  const auto& letters = alphabet.entries();
  std::vector<std::size_t> pos(d, 0);
  std::vector<Rational> xs(d, letters.front());
  while (true) {
    if (!fn(std::as_const(xs))) return false;
    std::size_t m = d;
    while (m > 0) {
      --m;
      if (++pos[m] < letters.size()) {
        xs[m] = letters[pos[m]];
        break;
      }
      pos[m] = 0;
      xs[m] = letters[0];
      if (m == 0) return true;
    }
  }
}

}  // namespace detail

/// { a (+) x_1 gamma (+) ... (+) x_d gamma^d : x_j in alphabet }, duplicates collapsed.
inline std::set<PhjPoint> phj_generated_set(const PhjPoint& a, std::span<const std::size_t> gamma, const Alphabet& alphabet) {
  check_phj_structure(a, gamma, alphabet);
  std::set<PhjPoint> out;
  detail::for_each_assignment(alphabet, a.degree(), [&](const std::vector<Rational>& xs) {
    out.insert(oplus(a, gamma, xs));
    return true;
  });
  return out;
}

template <class PointColoring>
bool phj_monochromatic(const PhjPoint& a, std::span<const std::size_t> gamma, const Alphabet& alphabet,
                       PointColoring&& coloring, int& color) {
  bool first = true;
  return detail::for_each_assignment(alphabet, a.degree(), [&](const std::vector<Rational>& xs) {
    int c = coloring(oplus(a, gamma, xs));
    if (first) {
      color = c;
      first = false;
      return true;
    }
    return c == color;
  });
}

using PointColoring = std::function<int(const PhjPoint&)>;

struct PhjSearchLimits {
  // Base points have at most this many nonzero entries off gamma^j.
  std::size_t max_support = 2;
  // Refuse sides N whose point has more positions than this.
  std::uint64_t max_positions = 1 << 20;
};

struct PhjCandidate {
  PhjPoint base;
  std::vector<std::size_t> gamma;
};

namespace detail {

// Pushes (gamma, base) candidates for one N: gamma by size then lexicographic;
// base points lexicographic over flat positions with entries in height order.
inline bool enumerate_phj_candidates(std::size_t d, std::size_t N, const Alphabet& alphabet,
                                     const PhjSearchLimits& limits, const Sink<PhjCandidate>& sink) {
  std::vector<Rational> values = alphabet.entries();
  values.push_back(Rational(0));
  std::sort(values.begin(), values.end(), HeightLess{});
  values.erase(std::unique(values.begin(), values.end()), values.end());

  PhjPoint zero(d, N);
  std::uint64_t positions = 0;
  for (std::size_t j = 1; j <= d; ++j) positions += zero.tensor(j).size();
  if (positions > limits.max_positions) throw InvalidInput("Q(N) too large to enumerate at N = " + std::to_string(N));

  for (std::size_t c = 1; c <= N; ++c) {
    std::vector<std::size_t> gamma(c);
    for (std::size_t i = 0; i < c; ++i) gamma[i] = i + 1;
    while (true) {
      // free positions: (j, flat) off gamma^j, in lexicographic order
      std::vector<std::pair<std::size_t, std::uint64_t>> free;
      for (std::size_t j = 1; j <= d; ++j) {
        const Tensor& t = zero.tensor(j);
        std::vector<char> on(t.size(), 0);
        for_each_gamma_power(t, gamma, [&](std::uint64_t f) { on[f] = 1; });
        for (std::uint64_t f = 0; f < t.size(); ++f) {
          if (!on[f]) free.emplace_back(j, f);
        }
      }
      PhjPoint base = zero;
      std::function<bool(std::size_t, std::size_t)> fill = [&](std::size_t p, std::size_t support) -> bool {
        if (p == free.size()) return sink(PhjCandidate{base, gamma});
        auto [j, f] = free[p];
        for (const auto& v : values) {
          if (v.is_zero()) {
            if (!fill(p + 1, support)) return false;
            continue;
          }
          if (support == 0) continue;
          base.tensor(j).set(f, v);
          bool go = fill(p + 1, support - 1);
          base.tensor(j).set(f, Rational(0));
          if (!go) return false;
        }
        return true;
      };
      if (!fill(0, limits.max_support)) return false;

      // next c-subset of [N] in lexicographic order
      std::size_t i = c;
      while (i > 0 && gamma[i - 1] == N - c + i) --i;
      if (i == 0) break;
      ++gamma[i - 1];
      for (std::size_t m = i; m < c; ++m) gamma[m] = gamma[m - 1] + 1;
    }
  }
  return true;
}

}  // namespace detail

/// Searches N = N_lo .. min(N_hi, budget.max_N) for the canonically minimal
/// (N, gamma, base point) whose generated set is monochromatic under
/// point_coloring. Base points range over those with at most
/// limits.max_support nonzero entries. The witness is re-colored before return.
inline SearchOutcome<PhjWitness> find_phj_witness(const PointColoring& point_coloring, const Alphabet& alphabet,
                                                  std::size_t d, std::size_t N_lo, std::size_t N_hi,
                                                  const SearchBudget& budget, const SearchOptions& options = {},
                                                  const PhjSearchLimits& limits = {}) {
  if (alphabet.size() == 0) throw InvalidInput("alphabet must be nonempty");
  if (d < 1) throw InvalidInput("degree must be at least 1");
  const std::size_t hi = std::min<std::uint64_t>(N_hi, budget.max_N);
  auto enumerate = [&](const Sink<PhjCandidate>& sink) {
    for (std::size_t N = std::max<std::size_t>(N_lo, 1); N <= hi; ++N) {
      if (!detail::enumerate_phj_candidates(d, N, alphabet, limits, sink)) return;
    }
  };
  auto accept = [&](const PhjCandidate& c) {
    int color = 0;
    return phj_monochromatic(c.base, c.gamma, alphabet, point_coloring, color);
  };
  auto depth = [](const PhjCandidate& c) { return static_cast<std::uint64_t>(c.base.side()); };
  auto result = run_search<PhjCandidate>(enumerate, accept, depth, budget, options);
  if (auto* ex = std::get_if<Exhausted>(&result)) return *ex;
  auto& acc = std::get<Accepted<PhjCandidate>>(result);
  PhjWitness wit{acc.candidate.base, acc.candidate.gamma, alphabet, 0};
  check_phj_structure(wit.base, wit.gamma, alphabet);
  int color = 0;
  if (!phj_monochromatic(wit.base, wit.gamma, alphabet, point_coloring, color)) {
    throw WitnessRejected("point search accepted a non-monochromatic candidate");
  }
  wit.color = color;
  return wit;
}

}  // namespace nearzero
