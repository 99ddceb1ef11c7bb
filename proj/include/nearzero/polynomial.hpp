#pragma once

#include <cctype>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "nearzero/errors.hpp"
#include "nearzero/rational.hpp"

namespace nearzero {

/// P(x) = a_1 x + a_2 x^2 + ... + a_d x^d over the rationals. The constant
/// term is always zero; trailing zero coefficients are trimmed.
class Polynomial {
 public:
  Polynomial() = default;

  /// coeffs[0] is a_1.
  explicit Polynomial(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

  /// Largest j with a_j != 0; 0 for the zero polynomial.
  std::size_t degree() const noexcept { return coeffs_.size(); }

  /// a_j for j >= 1; zero past the degree.
  Rational coeff(std::size_t j) const {
    if (j == 0) return Rational(0);
    return j <= coeffs_.size() ? coeffs_[j - 1] : Rational(0);
  }

  Rational operator()(const Rational& x) const {
    Rational acc;
    for (std::size_t j = coeffs_.size(); j > 0; --j) acc = (acc + coeffs_[j - 1]) * x;
    return acc;
  }

  bool is_zero() const noexcept { return coeffs_.empty(); }

  /// Canonical text, highest degree first: "1/2*x^2 - 3*x", "x", "0".
  std::string str() const {
    if (coeffs_.empty()) return "0";
    std::string s;
    bool first = true;
    for (std::size_t j = coeffs_.size(); j > 0; --j) {
      const Rational& c = coeffs_[j - 1];
      if (c.is_zero()) continue;
      Rational mag = abs(c);
      if (first) {
        if (c.sign() < 0) s += "-";
      } else {
        s += c.sign() < 0 ? " - " : " + ";
      }
      first = false;
      if (mag != Rational(1)) s += mag.str() + "*";
      s += "x";
      if (j > 1) s += "^" + std::to_string(j);
    }
    return s;
  }

  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  void trim() {
    while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
  }

  std::vector<Rational> coeffs_;
};

namespace detail {

class PolyParser {
 public:
  PolyParser(std::string_view text, std::size_t offset) : text_(text), offset_(offset) {}

  Polynomial parse() {
    std::vector<Rational> coeffs;
    skip_ws();
    if (pos_ == text_.size()) fail("empty polynomial");
    bool first = true;
    while (true) {
      skip_ws();
      int sign = 1;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) {
        sign = text_[pos_] == '-' ? -1 : 1;
        ++pos_;
        skip_ws();
      } else if (!first) {
        fail("expected '+' or '-'");
      }
      first = false;
      auto [coef, power] = term();
      if (coeffs.size() < power) coeffs.resize(power);
      coeffs[power - 1] += sign < 0 ? -coef : coef;
      skip_ws();
      if (pos_ == text_.size()) break;
    }
    return Polynomial(std::move(coeffs));
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, offset_ + pos_); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  std::string_view digits() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    return text_.substr(start, pos_ - start);
  }

  // term := [rational ['*']] 'x' ['^' int]
  std::pair<Rational, std::size_t> term() {
    Rational coef(1);
    std::size_t term_start = pos_;
    if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      std::string_view n = digits();
      std::string lit(n);
      if (pos_ < text_.size() && text_[pos_] == '/') {
        ++pos_;
        std::string_view d = digits();
        if (d.empty()) fail("expected denominator");
        lit += "/" + std::string(d);
      }
      try {
        coef = Rational::parse(lit);
      } catch (const ParseError&) {
        pos_ = term_start;
        fail("malformed coefficient");
      }
      skip_ws();
      if (pos_ < text_.size() && text_[pos_] == '*') {
        ++pos_;
        skip_ws();
      }
    }
    if (pos_ >= text_.size() || text_[pos_] != 'x') {
      if (pos_ != term_start && coef.is_zero()) return {Rational(0), 1};
      if (pos_ != term_start) {
        pos_ = term_start;
        throw ParseError("constant terms are not allowed", offset_ + term_start);
      }
      fail("expected a term in x");
    }
    ++pos_;
    std::size_t power = 1;
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == '^') {
      ++pos_;
      skip_ws();
      std::size_t at = pos_;
      std::string_view e = digits();
      if (e.empty()) fail("expected exponent");
      if (e.size() > 3) throw ParseError("exponent too large", offset_ + at);
      power = std::stoul(std::string(e));
      if (power == 0) throw ParseError("constant terms are not allowed", offset_ + at);
    }
    return {coef, power};
  }

  std::string_view text_;
  std::size_t offset_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses one polynomial such as "1/2*x^2 - 3*x" or "x". Constant terms are rejected.
inline Polynomial parse_polynomial(std::string_view text, std::size_t offset = 0) {
  return detail::PolyParser(text, offset).parse();
}

/// Comma-separated list of polynomials, e.g. "x, x^2".
inline std::vector<Polynomial> parse_polynomials(std::string_view text) {
  std::vector<Polynomial> out;
  std::size_t start = 0;
  while (true) {
    auto comma = text.find(',', start);
    std::size_t len = comma == std::string_view::npos ? text.size() - start : comma - start;
    out.push_back(parse_polynomial(text.substr(start, len), start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

inline std::string polynomials_str(const std::vector<Polynomial>& polys) {
  std::string s;
  for (std::size_t i = 0; i < polys.size(); ++i) {
    if (i) s += ", ";
    s += polys[i].str();
  }
  return s;
}

}  // namespace nearzero
