#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nearzero/coloring.hpp"
#include "nearzero/encodings.hpp"
#include "nearzero/errors.hpp"
#include "nearzero/phj.hpp"
#include "nearzero/pipelines.hpp"
#include "nearzero/polynomial.hpp"
#include "nearzero/rational.hpp"
#include "nearzero/words.hpp"

namespace nearzero {

enum class CertificateKind { ap, geo, poly, bm, phj };

inline std::string kind_name(CertificateKind k) {
  switch (k) {
    case CertificateKind::ap: return "ap";
    case CertificateKind::geo: return "geo";
    case CertificateKind::poly: return "poly";
    case CertificateKind::bm: return "bm";
    case CertificateKind::phj: return "phj";
  }
  return {};
}

inline std::optional<CertificateKind> parse_kind(std::string_view s) {
  if (s == "ap") return CertificateKind::ap;
  if (s == "geo") return CertificateKind::geo;
  if (s == "poly") return CertificateKind::poly;
  if (s == "bm") return CertificateKind::bm;
  if (s == "phj") return CertificateKind::phj;
  return std::nullopt;
}

struct CertifiedPoint {
  Rational value;
  int color = 0;
  friend bool operator==(const CertifiedPoint&, const CertifiedPoint&) = default;
};

/// Line-oriented witness certificate (grammar in docs/formats.md):
///
///   <kind> <k> <r> <epsilon>
///   point <rational> color <int>      one per configuration point
///   param <name> <value...>           witness parameters
struct Certificate {
  CertificateKind kind = CertificateKind::ap;
  int k = 0;
  int r = 1;
  Rational eps;
  std::vector<CertifiedPoint> points;
  std::vector<std::pair<std::string, std::string>> params;

  void add(std::string name, std::string value) { params.emplace_back(std::move(name), std::move(value)); }

  std::optional<std::string> param(std::string_view name) const {
    for (const auto& [n, v] : params) {
      if (n == name) return v;
    }
    return std::nullopt;
  }

  std::vector<std::string> all(std::string_view name) const {
    std::vector<std::string> out;
    for (const auto& [n, v] : params) {
      if (n == name) out.push_back(v);
    }
    return out;
  }

  std::string require(std::string_view name) const {
    auto v = param(name);
    if (!v) throw InvalidInput("certificate lacks parameter '" + std::string(name) + "'");
    return *v;
  }

  std::string str() const {
    std::ostringstream os;
    os << kind_name(kind) << ' ' << k << ' ' << r << ' ' << eps.str() << '\n';
    for (const auto& p : points) os << "point " << p.value.str() << " color " << p.color << '\n';
    for (const auto& [n, v] : params) os << "param " << n << ' ' << v << '\n';
    return os.str();
  }
};

namespace detail {

inline std::vector<std::string> split_ws(std::string_view line) {
  std::vector<std::string> out;
  std::istringstream is{std::string(line)};
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

inline int parse_int_token(const std::string& s, std::size_t line) {
  try {
    std::size_t used = 0;
    int v = std::stoi(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw InvalidInput("line " + std::to_string(line) + ": expected an integer, got '" + s + "'");
  }
}

inline Rational parse_rational_token(const std::string& s, std::size_t line) {
  try {
    return Rational::parse(s);
  } catch (const ParseError&) {
    throw InvalidInput("line " + std::to_string(line) + ": expected a rational, got '" + s + "'");
  }
}

inline std::vector<std::size_t> parse_index_list(const std::string& s) {
  std::vector<std::size_t> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    auto comma = s.find(',', start);
    std::string item = s.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    if (item.empty() || item.find_first_not_of("0123456789") != std::string::npos) {
      throw InvalidInput("malformed index list '" + s + "'");
    }
    out.push_back(std::stoul(item));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

inline std::vector<Rational> parse_rational_list(const std::string& s) {
  std::vector<Rational> out;
  std::size_t start = 0;
  while (true) {
    auto comma = s.find(',', start);
    out.push_back(Rational::parse(s.substr(start, comma == std::string::npos ? std::string::npos : comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

inline std::string index_list_str(const std::vector<std::size_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(v[i]);
  }
  return s;
}

inline std::size_t parse_size(const std::string& s) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) throw InvalidInput("expected a nonnegative integer, got '" + s + "'");
  return std::stoul(s);
}

inline BigInt parse_big(const std::string& s) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) throw InvalidInput("expected a nonnegative integer, got '" + s + "'");
  return BigInt(s);
}

}  // namespace detail

/// Throws InvalidInput on malformed text.
inline Certificate parse_certificate(std::string_view text) {
  Certificate c;
  std::istringstream is{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  bool header = false;
  bool in_params = false;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto toks = detail::split_ws(line);
    if (toks.empty()) continue;
    if (!header) {
      if (toks.size() != 4) throw InvalidInput("line 1: header must be '<kind> <k> <r> <epsilon>'");
      auto kind = parse_kind(toks[0]);
      if (!kind) throw InvalidInput("line 1: unknown certificate kind '" + toks[0] + "'");
      c.kind = *kind;
      c.k = detail::parse_int_token(toks[1], lineno);
      c.r = detail::parse_int_token(toks[2], lineno);
      c.eps = detail::parse_rational_token(toks[3], lineno);
      header = true;
      continue;
    }
    if (toks[0] == "point") {
      if (in_params) throw InvalidInput("line " + std::to_string(lineno) + ": point after param lines");
      if (toks.size() != 4 || toks[2] != "color") throw InvalidInput("line " + std::to_string(lineno) + ": expected 'point <rational> color <int>'");
      c.points.push_back({detail::parse_rational_token(toks[1], lineno), detail::parse_int_token(toks[3], lineno)});
    } else if (toks[0] == "param") {
      in_params = true;
      if (toks.size() < 2) throw InvalidInput("line " + std::to_string(lineno) + ": param without a name");
      // value is the rest of the line after "param <name> "
      auto name_at = line.find(toks[1], line.find("param") + 5);
      std::string value = line.substr(std::min(line.size(), name_at + toks[1].size()));
      auto b = value.find_first_not_of(' ');
      value = b == std::string::npos ? "" : value.substr(b);
      while (!value.empty() && (value.back() == ' ' || value.back() == '\r')) value.pop_back();
      c.add(toks[1], value);
    } else {
      throw InvalidInput("line " + std::to_string(lineno) + ": unknown record '" + toks[0] + "'");
    }
  }
  if (!header) throw InvalidInput("empty certificate");
  return c;
}

// ---------------------------------------------------------------------------
// Building certificates from witnesses
// ---------------------------------------------------------------------------

inline std::vector<CertifiedPoint> color_points(const std::vector<Rational>& values, const ColoringSpec& spec) {
  std::vector<CertifiedPoint> out;
  for (const auto& v : values) out.push_back({v, spec.color_of(v)});
  return out;
}

inline Certificate certify(const ApWitness& w, const ColoringSpec& spec, const Rational& eps) {
  Certificate c{CertificateKind::ap, w.k, spec.colors(), eps, color_points(ap_points(w.a, w.d, w.k), spec), {}};
  c.add("n", std::to_string(w.n));
  c.add("M", w.M.str());
  c.add("a", w.a.str());
  c.add("d", w.d.str());
  return c;
}

inline void add_structure_params(Certificate& c, const BmWitness& bm, const BigInt& P, const BigInt& M) {
  c.add("N", std::to_string(bm.N()));
  c.add("P", P.str());
  c.add("M", M.str());
  c.add("word", bm.w.str());
  for (const auto& b : bm.blocks) c.add("block", std::to_string(b.start) + " " + std::to_string(b.step));
}

inline Certificate certify(const GeoWitness& w, const ColoringSpec& spec, const Rational& eps) {
  Certificate c{CertificateKind::geo, w.k, spec.colors(), eps, color_points(geo_points(w.params, w.k), spec), {}};
  add_structure_params(c, w.structure, w.P, w.M);
  c.add("B", w.params.B.str());
  c.add("A", w.params.A.str());
  c.add("D", w.params.D.str());
  return c;
}

/// f-images of the generated words, in word order, equal values collapsed.
inline std::vector<Rational> bm_points(const BmWitness& bm, const BigInt& P, const BigInt& M) {
  std::vector<Rational> out;
  for (const auto& word : bm_generated_set(bm.w, bm.blocks, bm.k)) {
    Rational v = f_encode_unchecked(word, P, M);
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(std::move(v));
  }
  return out;
}

/// The structure behind a geo witness, as its own certificate.
inline Certificate certify_structure(const GeoWitness& w, const ColoringSpec& spec, const Rational& eps) {
  Certificate c{CertificateKind::bm, w.k, spec.colors(), eps, color_points(bm_points(w.structure, w.P, w.M), spec), {}};
  add_structure_params(c, w.structure, w.P, w.M);
  return c;
}

inline void add_point_params(Certificate& c, const PolyWitness& w) {
  const PhjWitness& phj = *w.structure;
  c.add("N", std::to_string(w.N));
  c.add("d", std::to_string(phj.base.degree()));
  c.add("b", w.b.str());
  c.add("shift", w.shift.str());
  c.add("gamma", detail::index_list_str(phj.gamma));
  for (std::size_t j = 1; j <= phj.base.degree(); ++j) {
    const Tensor& t = phj.base.tensor(j);
    t.for_each_nonzero([&](std::uint64_t f, const Rational& v) {
      c.add("entry", std::to_string(j) + " " + detail::index_list_str(t.unflat(f)) + " " + v.str());
    });
  }
}

inline Certificate certify(const PolyWitness& w, const ColoringSpec& spec, const Rational& eps) {
  Certificate c{CertificateKind::poly, static_cast<int>(w.polys.size()), spec.colors(), eps,
                color_points(poly_points(w.a, w.alpha, w.polys), spec), {}};
  c.add("polys", polynomials_str(w.polys));
  c.add("a", w.a.str());
  c.add("alpha", w.alpha.str());
  if (w.structure) add_point_params(c, w);
  return c;
}

/// sigma-images of the generated points, in point order, equal values collapsed.
inline std::vector<Rational> phj_points(const PhjWitness& phj, const Rational& shift) {
  std::vector<Rational> out;
  for (const auto& p : phj_generated_set(phj.base, phj.gamma, phj.alphabet)) {
    Rational v = sigma_encode(p, shift);
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(std::move(v));
  }
  return out;
}

/// The Q(N) structure behind a pipeline poly witness, as its own certificate.
inline Certificate certify_structure(const PolyWitness& w, const ColoringSpec& spec, const Rational& eps) {
  if (!w.structure) throw InvalidInput("witness carries no point structure");
  Certificate c{CertificateKind::phj, static_cast<int>(w.polys.size()), spec.colors(), eps,
                color_points(phj_points(*w.structure, w.shift), spec), {}};
  c.add("polys", polynomials_str(w.polys));
  std::string alphabet;
  for (const auto& x : w.structure->alphabet.entries()) {
    if (!alphabet.empty()) alphabet += ",";
    alphabet += x.str();
  }
  c.add("alphabet", alphabet);
  add_point_params(c, w);
  return c;
}

// ---------------------------------------------------------------------------
// Verification
// ---------------------------------------------------------------------------

struct VerifyResult {
  bool ok = true;
  std::string message;  // first failure, human readable

  static VerifyResult fail(std::string msg) { return {false, std::move(msg)}; }
};

namespace detail {

inline BmWitness read_structure(const Certificate& c) {
  const std::size_t N = parse_size(c.require("N"));
  if (c.k < 0 || c.k > 9) throw InvalidInput("k must lie in [0, 9]");
  Word w = Word::parse(c.require("word"), c.k);
  if (w.size() != N) throw InvalidInput("word length differs from N");
  std::vector<ApBlock> blocks;
  for (const auto& b : c.all("block")) {
    auto toks = split_ws(b);
    if (toks.size() != 2) throw InvalidInput("block must be '<start> <step>'");
    blocks.push_back({parse_size(toks[0]), parse_size(toks[1])});
  }
  return BmWitness{c.k, w, blocks, 0};
}

inline PhjPoint read_base_point(const Certificate& c, std::size_t d, std::size_t N) {
  PhjPoint base(d, N);
  for (const auto& e : c.all("entry")) {
    auto toks = split_ws(e);
    if (toks.size() != 3) throw InvalidInput("entry must be '<j> <i1,...,ij> <value>'");
    std::size_t j = parse_size(toks[0]);
    if (j < 1 || j > d) throw InvalidInput("entry degree outside [1, d]");
    base.set(j, parse_index_list(toks[1]), parse_rational_token(toks[2], 0));
  }
  return base;
}

inline std::optional<std::string> compare_points(const std::vector<CertifiedPoint>& listed,
                                                 const std::vector<Rational>& regenerated) {
  const std::size_t n = std::max(listed.size(), regenerated.size());
  for (std::size_t i = 0; i < n; ++i) {
    std::string have = i < listed.size() ? listed[i].value.str() : "<missing>";
    std::string want = i < regenerated.size() ? regenerated[i].str() : "<none>";
    if (have != want) {
      return "point " + std::to_string(i + 1) + ": certificate lists " + have + ", witness parameters give " + want;
    }
  }
  return std::nullopt;
}

}  // namespace detail

/// Regenerates the configuration from the certificate's witness parameters.
/// Throws InvalidInput when the parameters are malformed or inconsistent
/// with each other.
inline std::vector<Rational> regenerate_points(const Certificate& c) {
  check_epsilon(c.eps);
  switch (c.kind) {
    case CertificateKind::ap: {
      if (c.k < 0) throw InvalidInput("k must be nonnegative");
      Rational a = Rational::parse(c.require("a"));
      Rational d = Rational::parse(c.require("d"));
      if (d.is_zero()) throw InvalidInput("progression step must be nonzero");
      return ap_points(a, d, c.k);
    }
    case CertificateKind::geo:
    case CertificateKind::bm: {
      BmWitness bm = detail::read_structure(c);
      BigInt P = detail::parse_big(c.require("P"));
      BigInt M = detail::parse_big(c.require("M"));
      check_word_encoding(bm.N(), P, M, c.eps);
      GeoParams g;
      try {
        g = extract_geo_params(bm, P, M);
      } catch (const PreconditionViolation& e) {
        throw InvalidInput(std::string("malformed structure: ") + e.what());
      }
      if (c.kind == CertificateKind::bm) return bm_points(bm, P, M);
      GeoParams listed{Rational::parse(c.require("B")), Rational::parse(c.require("A")), Rational::parse(c.require("D"))};
      if (!(listed == g)) throw InvalidInput("B, A, D disagree with the structure they were read from");
      return geo_points(g, c.k);
    }
    case CertificateKind::poly:
    case CertificateKind::phj: {
      auto polys = parse_polynomials(c.require("polys"));
      if (static_cast<int>(polys.size()) != c.k) throw InvalidInput("k must equal the number of polynomials");
      std::optional<Rational> a;
      std::optional<Rational> alpha;
      if (c.kind == CertificateKind::poly) {
        a = Rational::parse(c.require("a"));
        alpha = Rational::parse(c.require("alpha"));
        if (alpha->is_zero()) throw InvalidInput("alpha must be nonzero");
        if (!c.param("N")) return poly_points(*a, *alpha, polys);
      }
      const std::size_t N = detail::parse_size(c.require("N"));
      PolyEncoding enc = poly_encoding(polys, N, c.eps);
      if (detail::parse_size(c.require("d")) != enc.d) throw InvalidInput("d disagrees with the polynomials");
      if (detail::parse_big(c.require("b")) != enc.b) throw InvalidInput("b disagrees with the polynomials, N and epsilon");
      if (Rational::parse(c.require("shift")) != enc.shift) throw InvalidInput("shift must be 3*epsilon/8");
      PhjPoint base = detail::read_base_point(c, enc.d, N);
      auto gamma = detail::parse_index_list(c.require("gamma"));
      try {
        check_phj_structure(base, gamma, enc.alphabet);
      } catch (const PreconditionViolation& e) {
        throw InvalidInput(std::string("malformed point structure: ") + e.what());
      }
      SigmaEncoder sigma(enc.alphabet, enc.d, N, c.eps, enc.shift);  // checks the range bound
      if (c.kind == CertificateKind::phj) {
        if (auto listed = c.param("alphabet")) {
          if (!(Alphabet(detail::parse_rational_list(*listed)) == enc.alphabet)) {
            throw InvalidInput("alphabet disagrees with the polynomials");
          }
        }
        return phj_points(PhjWitness{base, gamma, enc.alphabet, 0}, enc.shift);
      }
      Rational want_a = enc.shift + off_gamma_sum(base, gamma);
      Rational want_alpha = Rational(BigInt(normalize_gamma(gamma, N).size()), enc.b);
      if (*a != want_a || *alpha != want_alpha) throw InvalidInput("a, alpha disagree with the point structure");
      return poly_points(*a, *alpha, polys);
    }
  }
  return {};
}

/// Replays a certificate against a coloring: every listed point must lie in
/// (0, eps), the list must equal the configuration regenerated from the
/// witness parameters, and every point must have the claimed, common color.
inline VerifyResult verify_certificate(const Certificate& c, const ColoringSpec& spec) {
  if (c.r != spec.colors()) {
    return VerifyResult::fail("certificate is for " + std::to_string(c.r) + " colors, coloring has " + std::to_string(spec.colors()));
  }
  if (!(c.eps > Rational(0) && c.eps < Rational(1))) return VerifyResult::fail("epsilon " + c.eps.str() + " outside (0, 1)");
  if (c.points.empty()) return VerifyResult::fail("certificate lists no points");
  for (std::size_t i = 0; i < c.points.size(); ++i) {
    if (!in_open_interval(c.points[i].value, Rational(0), c.eps)) {
      return VerifyResult::fail("point " + std::to_string(i + 1) + ": " + c.points[i].value.str() + " outside (0, " + c.eps.str() + ")");
    }
  }
  std::vector<Rational> regen;
  try {
    regen = regenerate_points(c);
  } catch (const std::exception& e) {
    return VerifyResult::fail(std::string("witness parameters rejected: ") + e.what());
  }
  if (auto diff = detail::compare_points(c.points, regen)) return VerifyResult::fail(*diff);
  const int first = spec.color_of(c.points.front().value);
  for (std::size_t i = 0; i < c.points.size(); ++i) {
    int actual = spec.color_of(c.points[i].value);
    if (actual != c.points[i].color) {
      return VerifyResult::fail("point " + std::to_string(i + 1) + ": " + c.points[i].value.str() + " claims color " +
                                std::to_string(c.points[i].color) + ", coloring gives " + std::to_string(actual));
    }
    if (actual != first) {
      return VerifyResult::fail("point " + std::to_string(i + 1) + ": " + c.points[i].value.str() + " has color " +
                                std::to_string(actual) + ", point 1 has color " + std::to_string(first));
    }
  }
  return {};
}

}  // namespace nearzero
