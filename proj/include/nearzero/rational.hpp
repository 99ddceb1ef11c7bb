#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>

#include <boost/functional/hash.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include "nearzero/errors.hpp"

namespace nearzero {

using BigInt = boost::multiprecision::cpp_int;

/// Exact rational number kept in canonical form: gcd(|num|, den) = 1,
/// den >= 1, zero stored as 0/1. Every constructor and operator returns a
/// canonical value, so structural equality is numeric equality.
class Rational {
 public:
  Rational() : num_(0), den_(1) {}
  Rational(long long n) : num_(n), den_(1) {}  // NOLINT(google-explicit-constructor)
  explicit Rational(BigInt n) : num_(std::move(n)), den_(1) {}

  /// Reduced n/d. Throws InvalidInput when d == 0.
  Rational(BigInt n, BigInt d) : num_(std::move(n)), den_(std::move(d)) {
    if (den_ == 0) throw InvalidInput("rational with zero denominator");
    normalize();
  }

  const BigInt& num() const noexcept { return num_; }
  const BigInt& den() const noexcept { return den_; }

  bool is_zero() const noexcept { return num_ == 0; }
  bool is_integer() const noexcept { return den_ == 1; }
  int sign() const noexcept { return num_.sign(); }

  /// max(|num|, den); the primary key of the height order.
  BigInt height() const {
    BigInt a = abs(num_);
    return a > den_ ? a : den_;
  }

  Rational operator-() const {
    Rational r;
    r.num_ = -num_;
    r.den_ = den_;
    return r;
  }

  friend Rational operator+(const Rational& x, const Rational& y) {
    if (x.den_ == y.den_) return Rational(x.num_ + y.num_, x.den_);
    return Rational(x.num_ * y.den_ + y.num_ * x.den_, x.den_ * y.den_);
  }
  friend Rational operator-(const Rational& x, const Rational& y) { return x + (-y); }
  friend Rational operator*(const Rational& x, const Rational& y) {
    return Rational(x.num_ * y.num_, x.den_ * y.den_);
  }
  friend Rational operator/(const Rational& x, const Rational& y) {
    if (y.is_zero()) throw InvalidInput("division by zero rational");
    return Rational(x.num_ * y.den_, x.den_ * y.num_);
  }

  Rational& operator+=(const Rational& y) { return *this = *this + y; }
  Rational& operator-=(const Rational& y) { return *this = *this - y; }
  Rational& operator*=(const Rational& y) { return *this = *this * y; }
  Rational& operator/=(const Rational& y) { return *this = *this / y; }

  friend bool operator==(const Rational& x, const Rational& y) {
    return x.num_ == y.num_ && x.den_ == y.den_;
  }

  // Numeric order, by cross-multiplication (denominators are positive).
  friend std::strong_ordering operator<=>(const Rational& x, const Rational& y) {
    BigInt lhs = x.num_ * y.den_;
    BigInt rhs = y.num_ * x.den_;
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  /// "n/d", or "n" when the denominator is 1.
  std::string str() const {
    if (den_ == 1) return num_.str();
    return num_.str() + "/" + den_.str();
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& x) { return os << x.str(); }

  /// Parses "n/d" or "n" with an optional leading '-' or '+'. The result is
  /// reduced. Throws ParseError on anything else.
  static Rational parse(std::string_view text);

  std::size_t hash() const {
    std::size_t seed = 0;
    boost::hash_combine(seed, num_);
    boost::hash_combine(seed, den_);
    return seed;
  }

 private:
  void normalize() {
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    if (num_ == 0) {
      den_ = 1;
      return;
    }
    BigInt g = gcd(abs(num_), den_);
    if (g != 1) {
      num_ /= g;
      den_ /= g;
    }
  }

  BigInt num_;
  BigInt den_;
};

/// Canonical reduced form of n/d; throws InvalidInput when d == 0.
inline Rational reduce(const BigInt& n, const BigInt& d) { return Rational(n, d); }

/// Exact x^e; pow(x, 0) = 1.
inline Rational pow(const Rational& x, unsigned e) {
  return Rational(boost::multiprecision::pow(x.num(), e), boost::multiprecision::pow(x.den(), e));
}

inline Rational abs(const Rational& x) { return x.sign() < 0 ? -x : x; }

/// Strictly inside (lo, hi).
inline bool in_open_interval(const Rational& x, const Rational& lo, const Rational& hi) {
  return lo < x && x < hi;
}

/// Height order: max(|num|, den), then denominator, then numerator.
/// A total order used wherever a canonical minimal choice is needed.
inline std::strong_ordering height_compare(const Rational& x, const Rational& y) {
  BigInt hx = x.height();
  BigInt hy = y.height();
  if (hx != hy) return hx < hy ? std::strong_ordering::less : std::strong_ordering::greater;
  if (x.den() != y.den()) return x.den() < y.den() ? std::strong_ordering::less : std::strong_ordering::greater;
  if (x.num() != y.num()) return x.num() < y.num() ? std::strong_ordering::less : std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

struct HeightLess {
  bool operator()(const Rational& x, const Rational& y) const { return height_compare(x, y) < 0; }
};

namespace detail {

inline BigInt parse_integer(std::string_view text, std::size_t offset, bool allow_sign) {
  std::size_t i = 0;
  bool negative = false;
  if (allow_sign && i < text.size() && (text[i] == '-' || text[i] == '+')) {
    negative = text[i] == '-';
    ++i;
  }
  if (i == text.size()) throw ParseError("expected digits", offset + i);
  BigInt value = 0;
  for (; i < text.size(); ++i) {
    char c = text[i];
    if (c < '0' || c > '9') throw ParseError(std::string("unexpected character '") + c + "'", offset + i);
    value = value * 10 + (c - '0');
  }
  return negative ? BigInt(-value) : value;
}

}  // namespace detail

inline Rational Rational::parse(std::string_view text) {
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(detail::parse_integer(text, 0, true));
  BigInt n = detail::parse_integer(text.substr(0, slash), 0, true);
  BigInt d = detail::parse_integer(text.substr(slash + 1), slash + 1, false);
  if (d == 0) throw ParseError("zero denominator", slash + 1);
  return Rational(std::move(n), std::move(d));
}

/// Smallest integer strictly greater than x.
inline BigInt floor_plus_one(const Rational& x) {
  // Integer division truncates toward zero; adjust for negatives.
  BigInt q = x.num() / x.den();
  if (x.num() < 0 && q * x.den() != x.num()) q -= 1;
  return q + 1;
}

}  // namespace nearzero

template <>
struct std::hash<nearzero::Rational> {
  std::size_t operator()(const nearzero::Rational& x) const { return x.hash(); }
};
