#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "nearzero/errors.hpp"

namespace nearzero {

struct IntervalAp {
  std::size_t a = 1;
  std::size_t d = 1;
  friend bool operator==(const IntervalAp&, const IntervalAp&) = default;
};

/// Lexicographically least (a, d), d >= 1, with {a, a+d, ..., a+kd} inside
/// [1, n] and monochromatic. colors[t-1] is the color of t.
inline std::optional<IntervalAp> find_ap_in_interval(std::span<const int> colors, int k) {
  if (k < 0) throw InvalidInput("k must be nonnegative");
  const std::size_t n = colors.size();
  const auto kk = static_cast<std::size_t>(k);
  for (std::size_t a = 1; a <= n; ++a) {
    if (k == 0) return IntervalAp{a, 1};
    for (std::size_t d = 1; a + kk * d <= n; ++d) {
      bool mono = true;
      for (std::size_t j = 1; j <= kk && mono; ++j) mono = colors[a + j * d - 1] == colors[a - 1];
      if (mono) return IntervalAp{a, d};
    }
  }
  return std::nullopt;
}

struct CapExceeded {
  friend bool operator==(const CapExceeded&, const CapExceeded&) = default;
};

namespace detail {

// Depth-first search for an r-coloring of [1, n] with no monochromatic
// (k+1)-term progression. Colors are introduced in order (a new color is
// at most one more than the largest used so far), which loses no
// colorings up to relabeling.
class ApFreeColoringSearch {
 public:
  ApFreeColoringSearch(std::size_t n, int k, int r) : n_(n), k_(static_cast<std::size_t>(k)), r_(r), colors_(n + 1, 0) {}

  bool exists() { return place(1, 0); }
  const std::vector<int>& coloring() const { return colors_; }

 private:
  bool closes_progression(std::size_t p, int c) const {
    if (k_ == 0) return true;
    for (std::size_t d = 1; k_ * d < p; ++d) {
      bool mono = true;
      for (std::size_t j = 1; j <= k_ && mono; ++j) mono = colors_[p - j * d] == c;
      if (mono) return true;
    }
    return false;
  }

  bool place(std::size_t p, int used) {
    if (p > n_) return true;
    const int top = std::min(r_, used + 1);
    for (int c = 1; c <= top; ++c) {
      if (closes_progression(p, c)) continue;
      colors_[p] = c;
      if (place(p + 1, std::max(used, c))) return true;
    }
    colors_[p] = 0;
    return false;
  }

  std::size_t n_;
  std::size_t k_;
  int r_;
  std::vector<int> colors_;
};

}  // namespace detail

/// An r-coloring of [1, n] (colors[t-1] for t) with no monochromatic
/// (k+1)-term progression, if one exists.
inline std::optional<std::vector<int>> ap_free_coloring(std::size_t n, int k, int r) {
  if (k < 0 || r < 1) throw InvalidInput("need k >= 0 and r >= 1");
  detail::ApFreeColoringSearch s(n, k, r);
  if (!s.exists()) return std::nullopt;
  return std::vector<int>(s.coloring().begin() + 1, s.coloring().end());
}

/// Least n <= cap such that every r-coloring of [1, n] contains a
/// monochromatic (k+1)-term progression.
inline std::variant<std::size_t, CapExceeded> vdw_number(int k, int r, std::size_t cap) {
  if (k < 0 || r < 1) throw InvalidInput("need k >= 0 and r >= 1");
  for (std::size_t n = 1; n <= cap; ++n) {
    if (!ap_free_coloring(n, k, r)) return n;
  }
  return CapExceeded{};
}

}  // namespace nearzero
