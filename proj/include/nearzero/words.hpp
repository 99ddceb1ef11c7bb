#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nearzero/engine.hpp"
#include "nearzero/errors.hpp"

namespace nearzero {

/// A word in {0, ..., k}^N. Positions are 1-indexed in every public API.
struct Word {
  int k = 0;
  std::vector<std::uint8_t> letters;

  Word() = default;
  Word(int alphabet_bound, std::vector<std::uint8_t> ls) : k(alphabet_bound), letters(std::move(ls)) {
    if (k < 0 || k > 255) throw InvalidInput("word alphabet bound out of range");
    for (auto c : letters) {
      if (c > k) throw InvalidInput("word letter exceeds alphabet bound");
    }
  }

  static Word zeros(int alphabet_bound, std::size_t n) {
    return Word(alphabet_bound, std::vector<std::uint8_t>(n, 0));
  }

  std::size_t size() const noexcept { return letters.size(); }
  int at(std::size_t position) const { return letters.at(position - 1); }

  // Lexicographic on letters (k compared first; words are only compared within one cube).
  auto operator<=>(const Word&) const = default;

  /// Digit string; requires k <= 9.
  std::string str() const {
    if (k > 9) throw InvalidInput("digit-string form needs k <= 9");
    std::string s;
    s.reserve(letters.size());
    for (auto c : letters) s.push_back(static_cast<char>('0' + c));
    return s;
  }

  static Word parse(std::string_view digits, int alphabet_bound) {
    if (alphabet_bound < 0 || alphabet_bound > 9) throw InvalidInput("digit-string form needs 0 <= k <= 9");
    std::vector<std::uint8_t> ls;
    for (std::size_t i = 0; i < digits.size(); ++i) {
      char c = digits[i];
      if (c < '0' || c - '0' > alphabet_bound) throw ParseError(std::string("bad letter '") + c + "'", i);
      ls.push_back(static_cast<std::uint8_t>(c - '0'));
    }
    return Word(alphabet_bound, std::move(ls));
  }
};

/// w^alpha(t): letter t written at every position of alpha.
/// Requires alpha nonempty, inside [1, N], and w zero on alpha.
inline Word substitute(const Word& w, std::span<const std::size_t> alpha, int t) {
  if (alpha.empty()) throw PreconditionViolation("substitution set must be nonempty");
  if (t < 0 || t > w.k) throw InvalidInput("substituted letter " + std::to_string(t) + " outside {0.." + std::to_string(w.k) + "}");
  Word out = w;
  for (std::size_t p : alpha) {
    if (p < 1 || p > w.size()) throw PreconditionViolation("position " + std::to_string(p) + " outside [1, N]");
    if (w.letters[p - 1] != 0) throw PreconditionViolation("position " + std::to_string(p) + " carries a nonzero letter");
    out.letters[p - 1] = static_cast<std::uint8_t>(t);
  }
  return out;
}

/// The (k+1)-term progression {start, start+step, ..., start+k*step}.
struct ApBlock {
  std::size_t start = 1;
  std::size_t step = 1;

  std::size_t last(int k) const { return start + static_cast<std::size_t>(k) * step; }
  std::size_t element(int j) const { return start + static_cast<std::size_t>(j) * step; }

  auto operator<=>(const ApBlock&) const = default;
};

/// Every (k+1)-term progression inside [N], ordered by (start, step).
/// For k = 0 a block is a single point and only step 1 is listed.
inline std::vector<ApBlock> ap_blocks(std::size_t N, int k) {
  std::vector<ApBlock> out;
  if (k < 0) throw InvalidInput("k must be nonnegative");
  for (std::size_t a = 1; a <= N; ++a) {
    if (k == 0) {
      out.push_back({a, 1});
      continue;
    }
    for (std::size_t b = 1; a + static_cast<std::size_t>(k) * b <= N; ++b) out.push_back({a, b});
  }
  return out;
}

using BlockFamily = std::function<std::vector<ApBlock>(std::size_t N, int k)>;

/// The monochromatic structure: a base word w and blocks beta_1 < ... < beta_l.
struct BmWitness {
  int k = 0;
  Word w;
  std::vector<ApBlock> blocks;
  int color = 0;

  std::size_t N() const noexcept { return w.size(); }
  friend bool operator==(const BmWitness&, const BmWitness&) = default;
};

/// Throws PreconditionViolation unless (w, blocks) is a valid structure:
/// l >= 1, blocks inside [N] and strictly increasing, w zero on every block.
inline void check_bm_structure(const Word& w, std::span<const ApBlock> blocks, int k) {
  if (w.k != k) throw PreconditionViolation("word alphabet bound differs from k");
  if (blocks.empty()) throw PreconditionViolation("at least one block is required");
  std::size_t prev_max = 0;
  for (const auto& b : blocks) {
    if (b.start < 1 || b.step < 1) throw PreconditionViolation("block start and step must be positive");
    if (b.last(k) > w.size()) throw PreconditionViolation("block leaves [1, N]");
    if (b.start <= prev_max) throw PreconditionViolation("blocks must satisfy max(beta_i) < min(beta_{i+1})");
    for (int j = 0; j <= k; ++j) {
      if (w.at(b.element(j)) != 0) throw PreconditionViolation("base word is nonzero on a block position");
    }
    prev_max = b.last(k);
  }
}

namespace detail {

// Calls fn(word) for w^{j_1..j_l}(t) over all choices; stops early when fn returns false.
template <class Fn>
bool for_each_bm_word(const Word& w, std::span<const ApBlock> blocks, int k, Fn&& fn) {
  if (!fn(w)) return false;
  const std::size_t l = blocks.size();
  std::vector<int> choice(l, 0);
  Word cur = w;
  while (true) {
    for (int t = 1; t <= k; ++t) {
      for (std::size_t i = 0; i < l; ++i) cur.letters[blocks[i].element(choice[i]) - 1] = static_cast<std::uint8_t>(t);
      if (!fn(std::as_const(cur))) return false;
    }
    for (std::size_t i = 0; i < l; ++i) cur.letters[blocks[i].element(choice[i]) - 1] = 0;
    // odometer over choices, last block fastest
    std::size_t i = l;
    while (i > 0) {
      --i;
      if (++choice[i] <= k) break;
      choice[i] = 0;
      if (i == 0) return true;
    }
    if (k == 0) return true;
  }
}

}  // namespace detail

/// { w^{j_1,...,j_l}(t) : j_i in beta_i, 0 <= t <= k }, duplicates collapsed.
inline std::set<Word> bm_generated_set(const Word& w, std::span<const ApBlock> blocks, int k) {
  check_bm_structure(w, blocks, k);
  std::set<Word> out;
  detail::for_each_bm_word(w, blocks, k, [&](const Word& x) {
    out.insert(x);
    return true;
  });
  return out;
}

/// True when every word generated by (w, blocks) has color `color`.
template <class WordColoring>
bool bm_monochromatic(const Word& w, std::span<const ApBlock> blocks, int k, WordColoring&& coloring, int& color) {
  color = coloring(w);
  const int c0 = color;
  return detail::for_each_bm_word(w, blocks, k, [&](const Word& x) { return coloring(x) == c0; });
}

struct BmCandidate {
  Word w;
  std::vector<ApBlock> blocks;
};

using WordColoring = std::function<int(const Word&)>;

namespace detail {

// Pushes candidates for one N in canonical order: l ascending, block tuples
// lexicographic, then base word lexicographic. Returns false once the sink stops.
inline bool enumerate_bm_candidates(std::size_t N, int k, const std::vector<ApBlock>& family,
                                    const Sink<BmCandidate>& sink) {
  std::vector<ApBlock> chain;
  std::vector<char> in_block(N + 1, 0);

  auto emit_words = [&]() -> bool {
    std::vector<std::size_t> free;
    for (std::size_t p = 1; p <= N; ++p) {
      if (!in_block[p]) free.push_back(p);
    }
    Word w = Word::zeros(k, N);
    while (true) {
      if (!sink(BmCandidate{w, chain})) return false;
      // lexicographic successor over the free positions
      std::size_t i = free.size();
      while (i > 0) {
        --i;
        auto& c = w.letters[free[i] - 1];
        if (c < k) {
          ++c;
          break;
        }
        c = 0;
        if (i == 0) return true;
      }
      if (free.empty()) return true;
    }
  };

  std::function<bool(std::size_t, std::size_t, std::size_t)> extend =
      [&](std::size_t from, std::size_t min_start, std::size_t remaining) -> bool {
    if (remaining == 0) return emit_words();
    for (std::size_t idx = from; idx < family.size(); ++idx) {
      const ApBlock& b = family[idx];
      if (b.start < min_start) continue;
      if (b.last(k) > N) continue;
      chain.push_back(b);
      for (int j = 0; j <= k; ++j) in_block[b.element(j)] = 1;
      bool go = extend(idx + 1, b.last(k) + 1, remaining - 1);
      for (int j = 0; j <= k; ++j) in_block[b.element(j)] = 0;
      chain.pop_back();
      if (!go) return false;
    }
    return true;
  };

  const std::size_t max_l = N / static_cast<std::size_t>(k + 1);
  for (std::size_t l = 1; l <= max_l; ++l) {
    if (!extend(0, 1, l)) return false;
  }
  return true;
}

}  // namespace detail

/// Searches N = N_lo .. min(N_hi, budget.max_N) for the canonically minimal
/// structure (N, then l, then blocks lexicographic, then w lexicographic)
/// whose generated set is monochromatic under word_coloring. The returned
/// witness has been re-colored word by word.
inline SearchOutcome<BmWitness> find_bm_witness(const WordColoring& word_coloring, int k, std::size_t N_lo,
                                                std::size_t N_hi, const SearchBudget& budget,
                                                const SearchOptions& options = {},
                                                const BlockFamily& family = ap_blocks) {
  if (k < 0 || k > 255) throw InvalidInput("k out of range");
  const std::size_t hi = std::min<std::uint64_t>(N_hi, budget.max_N);
  auto enumerate = [&](const Sink<BmCandidate>& sink) {
    for (std::size_t N = std::max<std::size_t>(N_lo, 1); N <= hi; ++N) {
      auto blocks = family(N, k);
      std::sort(blocks.begin(), blocks.end());
      if (!detail::enumerate_bm_candidates(N, k, blocks, sink)) return;
    }
  };
  auto accept = [&](const BmCandidate& c) {
    int color = 0;
    return bm_monochromatic(c.w, c.blocks, k, word_coloring, color);
  };
  auto depth = [](const BmCandidate& c) { return static_cast<std::uint64_t>(c.w.size()); };
  auto result = run_search<BmCandidate>(enumerate, accept, depth, budget, options);
  if (auto* ex = std::get_if<Exhausted>(&result)) return *ex;
  auto& acc = std::get<Accepted<BmCandidate>>(result);
  BmWitness wit{k, acc.candidate.w, acc.candidate.blocks, 0};
  int color = 0;
  if (!bm_monochromatic(wit.w, wit.blocks, k, word_coloring, color)) {
    throw WitnessRejected("structure search accepted a non-monochromatic candidate");
  }
  wit.color = color;
  return wit;
}

}  // namespace nearzero
