#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "nearzero/errors.hpp"
#include "nearzero/rational.hpp"

namespace nearzero {

enum class ColoringKind { constant, modsum, modnum, threshold, interval };

/// One of the five primitive colorings of the positive rationals.
/// Colors are 1-indexed: color_of lands in {1, ..., colors}.
struct ColoringRule {
  ColoringKind kind = ColoringKind::constant;
  int colors = 1;
  // constant: the fixed color (== colors).
  // threshold/interval: strictly increasing cut points in (0, 1).
  std::vector<Rational> cuts;

  int color_of(const Rational& x) const {
    switch (kind) {
      case ColoringKind::constant:
        return colors;
      case ColoringKind::modsum:
        return static_cast<int>((x.num() + x.den()) % colors) + 1;
      case ColoringKind::modnum:
        return static_cast<int>(x.num() % colors) + 1;
      case ColoringKind::threshold:
      case ColoringKind::interval: {
        int c = 1;
        for (const auto& q : cuts) {
          if (x >= q) ++c;
        }
        return c;
      }
    }
    return 1;
  }

  std::string str() const {
    switch (kind) {
      case ColoringKind::constant:
        return "constant:" + std::to_string(colors);
      case ColoringKind::modsum:
        return "modsum:" + std::to_string(colors);
      case ColoringKind::modnum:
        return "modnum:" + std::to_string(colors);
      case ColoringKind::threshold:
        return "threshold:" + cuts.front().str();
      case ColoringKind::interval: {
        std::string s = "interval:" + std::to_string(colors) + ":";
        for (std::size_t i = 0; i < cuts.size(); ++i) {
          if (i) s += ",";
          s += cuts[i].str();
        }
        return s;
      }
    }
    return {};
  }
};

/// A coloring of the positive rationals: one primitive rule, or several
/// joined with '*' to form their common refinement. For rules with c_1..c_m
/// colors, the refined color is the mixed-radix combination
/// 1 + sum_i (color_i - 1) * prod_{j>i} c_j, so colors = prod c_i.
class ColoringSpec {
 public:
  explicit ColoringSpec(std::vector<ColoringRule> rules) : rules_(std::move(rules)) {
    if (rules_.empty()) throw InvalidInput("coloring needs at least one rule");
    colors_ = 1;
    for (const auto& r : rules_) colors_ *= r.colors;
  }

  int colors() const noexcept { return colors_; }
  const std::vector<ColoringRule>& rules() const noexcept { return rules_; }

  /// Color of x in {1..colors()}. Throws InvalidInput for x <= 0.
  int color_of(const Rational& x) const {
    if (x.sign() <= 0) throw InvalidInput("color_of requires a positive rational, got " + x.str());
    int c = 0;
    for (const auto& r : rules_) c = c * r.colors + (r.color_of(x) - 1);
    return c + 1;
  }

  std::string str() const {
    std::string s;
    for (std::size_t i = 0; i < rules_.size(); ++i) {
      if (i) s += "*";
      s += rules_[i].str();
    }
    return s;
  }

 private:
  std::vector<ColoringRule> rules_;
  int colors_ = 1;
};

namespace detail {

inline int parse_color_count(std::string_view text, std::size_t offset) {
  if (text.empty()) throw ParseError("expected a color count", offset);
  if (text.size() > 6) throw ParseError("color count too large", offset);
  int v = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c < '0' || c > '9') throw ParseError(std::string("unexpected character '") + c + "'", offset + i);
    v = v * 10 + (c - '0');
  }
  if (v < 1) throw InvalidInput("color count must be at least 1 (position " + std::to_string(offset) + ")");
  return v;
}

inline Rational parse_cut(std::string_view text, std::size_t offset) {
  Rational q;
  try {
    q = Rational::parse(text);
  } catch (const ParseError& e) {
    throw ParseError("malformed rational", offset + e.position());
  }
  if (!(q > Rational(0) && q < Rational(1))) {
    throw InvalidInput("cut point " + q.str() + " outside (0,1) (position " + std::to_string(offset) + ")");
  }
  return q;
}

inline ColoringRule parse_rule(std::string_view text, std::size_t offset) {
  auto colon = text.find(':');
  if (colon == std::string_view::npos) throw ParseError("expected ':' after coloring kind", offset + text.size());
  std::string_view kind = text.substr(0, colon);
  std::string_view rest = text.substr(colon + 1);
  std::size_t rest_at = offset + colon + 1;
  ColoringRule rule;
  if (kind == "constant") {
    rule.kind = ColoringKind::constant;
    rule.colors = parse_color_count(rest, rest_at);
  } else if (kind == "modsum") {
    rule.kind = ColoringKind::modsum;
    rule.colors = parse_color_count(rest, rest_at);
  } else if (kind == "modnum") {
    rule.kind = ColoringKind::modnum;
    rule.colors = parse_color_count(rest, rest_at);
  } else if (kind == "threshold") {
    rule.kind = ColoringKind::threshold;
    rule.colors = 2;
    rule.cuts.push_back(parse_cut(rest, rest_at));
  } else if (kind == "interval") {
    rule.kind = ColoringKind::interval;
    auto colon2 = rest.find(':');
    if (colon2 == std::string_view::npos) throw ParseError("expected ':' after interval color count", rest_at + rest.size());
    rule.colors = parse_color_count(rest.substr(0, colon2), rest_at);
    std::string_view list = rest.substr(colon2 + 1);
    std::size_t at = rest_at + colon2 + 1;
    if (rule.colors > 1) {
      std::size_t start = 0;
      while (true) {
        auto comma = list.find(',', start);
        std::string_view item = list.substr(start, comma == std::string_view::npos ? list.size() - start : comma - start);
        rule.cuts.push_back(parse_cut(item, at + start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
      }
    } else if (!list.empty()) {
      throw ParseError("interval:1 takes an empty cut list", at);
    }
    if (static_cast<int>(rule.cuts.size()) != rule.colors - 1) {
      throw InvalidInput("interval:" + std::to_string(rule.colors) + " needs exactly " +
                         std::to_string(rule.colors - 1) + " cut points");
    }
    for (std::size_t i = 1; i < rule.cuts.size(); ++i) {
      if (!(rule.cuts[i - 1] < rule.cuts[i])) throw InvalidInput("interval cut points must be strictly increasing");
    }
  } else {
    throw ParseError("unknown coloring kind '" + std::string(kind) + "'", offset);
  }
  return rule;
}

}  // namespace detail

/// Parses the coloring grammar (see docs/formats.md):
///   spec := rule ('*' rule)*
///   rule := constant:<c> | modsum:<r> | modnum:<r> | threshold:<q>
///         | interval:<r>:<q1>,...,<q_{r-1}>
inline ColoringSpec parse_coloring(std::string_view text) {
  if (text.empty()) throw ParseError("empty coloring spec", 0);
  std::vector<ColoringRule> rules;
  std::size_t start = 0;
  while (true) {
    auto star = text.find('*', start);
    std::size_t len = star == std::string_view::npos ? text.size() - start : star - start;
    if (len == 0) throw ParseError("empty coloring rule", start);
    rules.push_back(detail::parse_rule(text.substr(start, len), start));
    if (star == std::string_view::npos) break;
    start = star + 1;
  }
  return ColoringSpec(std::move(rules));
}

}  // namespace nearzero
