#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include <CLI11.hpp>

#include "nearzero/certificate.hpp"
#include "nearzero/coloring.hpp"
#include "nearzero/engine.hpp"
#include "nearzero/errors.hpp"
#include "nearzero/pipelines.hpp"
#include "nearzero/polynomial.hpp"
#include "nearzero/rational.hpp"
#include "nearzero/vdw.hpp"

namespace nearzero::cli {

// Process exit codes.
inline constexpr int kOk = 0;
inline constexpr int kUsage = 1;
inline constexpr int kExhausted = 2;
inline constexpr int kVerifyFailed = 3;

struct FindArgs {
  std::string kind;
  std::string coloring;
  std::string epsilon;
  std::optional<int> k;
  std::optional<int> r;
  std::string polys;
  std::uint64_t max_n = 16;
  std::uint64_t max_nodes = 1'000'000;
  std::optional<std::int64_t> timeout_ms;
  unsigned workers = 1;
  std::size_t max_support = 2;
  std::string out;
};

inline void report_exhausted(const Exhausted& ex, std::ostream& err) {
  err << "exhausted: nodes_visited=" << ex.nodes_visited << " max_n_reached=" << ex.max_N_reached
      << (ex.timed_out ? " (timeout)" : "") << "\n"
      << "no witness within the budget; this is not a proof that none exists\n";
}

/// Runs one pipeline and renders its certificate. Returns the exit code; the
/// certificate text is stored in `cert` on success.
inline int cmd_find(const FindArgs& a, std::string& cert, std::ostream& err) {
  ColoringSpec spec = parse_coloring(a.coloring);
  Rational eps = Rational::parse(a.epsilon);
  check_epsilon(eps);
  const int r = a.r.value_or(spec.colors());
  SearchBudget budget;
  budget.max_N = a.max_n;
  budget.max_nodes = a.max_nodes;
  if (a.timeout_ms) budget.wall_time = std::chrono::milliseconds(*a.timeout_ms);
  SearchOptions options{std::max(1u, a.workers)};

  auto need_k = [&]() {
    if (!a.k) throw InvalidInput("--k is required for find " + a.kind);
    return *a.k;
  };
  auto need_polys = [&]() {
    if (a.polys.empty()) throw InvalidInput("--polys is required for find " + a.kind);
    return parse_polynomials(a.polys);
  };

  auto finish = [&](const auto& outcome, auto&& render) -> int {
    if (auto* ex = std::get_if<Exhausted>(&outcome)) {
      report_exhausted(*ex, err);
      return kExhausted;
    }
    cert = render(std::get<0>(outcome)).str();
    return kOk;
  };

  if (a.kind == "ap") {
    auto outcome = ap_near_zero(spec, r, need_k(), eps, budget, options);
    return finish(outcome, [&](const ApWitness& w) { return certify(w, spec, eps); });
  }
  if (a.kind == "geo" || a.kind == "bm") {
    auto outcome = geo_arith_near_zero(spec, r, need_k(), eps, budget, options);
    if (a.kind == "geo") return finish(outcome, [&](const GeoWitness& w) { return certify(w, spec, eps); });
    return finish(outcome, [&](const GeoWitness& w) { return certify_structure(w, spec, eps); });
  }
  if (a.kind == "poly" || a.kind == "phj") {
    auto polys = need_polys();
    auto outcome = poly_vdw_near_zero(polys, spec, r, eps, budget, options, make_phj_searcher({a.max_support}));
    if (a.kind == "poly") return finish(outcome, [&](const PolyWitness& w) { return certify(w, spec, eps); });
    return finish(outcome, [&](const PolyWitness& w) { return certify_structure(w, spec, eps); });
  }
  throw InvalidInput("unknown kind '" + a.kind + "' (expected ap, geo, poly, bm or phj)");
}

/// Exit 0 when the certificate replays under the coloring, 3 with a diff otherwise.
inline int cmd_verify(const std::string& cert_text, const std::string& coloring, std::ostream& out, std::ostream& err) {
  ColoringSpec spec = parse_coloring(coloring);
  Certificate cert = parse_certificate(cert_text);
  VerifyResult res = verify_certificate(cert, spec);
  if (!res.ok) {
    err << "verification failed: " << res.message << "\n";
    return kVerifyFailed;
  }
  out << "ok: " << cert.points.size() << " points, color " << spec.color_of(cert.points.front().value) << "\n";
  return kOk;
}

inline int cmd_vdw(int k, int r, std::size_t cap, std::ostream& out) {
  auto res = vdw_number(k, r, cap);
  if (std::holds_alternative<CapExceeded>(res)) {
    out << "CapExceeded\n";
    return kExhausted;
  }
  out << std::get<std::size_t>(res) << "\n";
  return kOk;
}

/// Entry point shared by the executable and the tests. args excludes argv[0].
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Monochromatic progressions near zero: search and certificate replay", "nearzero"};
  app.require_subcommand(1);

  FindArgs fa;
  auto* find = app.add_subcommand("find", "search for a witness and print its certificate");
  find->add_option("kind", fa.kind, "ap | geo | poly | bm | phj")->required();
  find->add_option("--coloring", fa.coloring, "coloring spec, e.g. modsum:2")->required();
  find->add_option("--epsilon", fa.epsilon, "rational in (0,1)")->required();
  find->add_option("--k", fa.k, "progression length parameter (ap, geo, bm)");
  find->add_option("--r", fa.r, "number of colors; must match the coloring");
  find->add_option("--polys", fa.polys, "comma-separated polynomials with zero constant term (poly, phj)");
  find->add_option("--max-n", fa.max_n, "largest N searched")->capture_default_str();
  find->add_option("--max-nodes", fa.max_nodes, "largest number of candidates tested")->capture_default_str();
  find->add_option("--timeout", fa.timeout_ms, "wall-clock limit in milliseconds");
  find->add_option("--workers", fa.workers, "worker threads; output does not depend on it")->capture_default_str();
  find->add_option("--max-support", fa.max_support, "nonzero entries allowed in a base point (poly, phj)")->capture_default_str();
  find->add_option("--out", fa.out, "write the certificate here instead of standard output");

  std::string cert_path;
  std::string verify_coloring;
  auto* verify = app.add_subcommand("verify", "replay a certificate against a coloring");
  verify->add_option("certificate", cert_path, "certificate file")->required();
  verify->add_option("--coloring", verify_coloring, "coloring spec")->required();

  int vk = 0;
  int vr = 0;
  std::size_t cap = 0;
  auto* vdw = app.add_subcommand("vdw", "least n forcing a monochromatic (k+1)-term progression in every r-coloring of [1,n]");
  vdw->add_option("--k", vk)->required();
  vdw->add_option("--r", vr)->required();
  vdw->add_option("--cap", cap)->required();

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*find) {
      std::string cert;
      int code = cmd_find(fa, cert, err);
      if (code != kOk) return code;
      if (fa.out.empty()) {
        out << cert;
      } else {
        std::ofstream f(fa.out, std::ios::binary);
        if (!f) {
          err << "cannot write " << fa.out << "\n";
          return kUsage;
        }
        f << cert;
      }
      return kOk;
    }
    if (*verify) {
      std::ifstream f(cert_path, std::ios::binary);
      if (!f) {
        err << "cannot read " << cert_path << "\n";
        return kUsage;
      }
      std::stringstream ss;
      ss << f.rdbuf();
      return cmd_verify(ss.str(), verify_coloring, out, err);
    }
    if (*vdw) return cmd_vdw(vk, vr, cap, out);
  } catch (const WitnessRejected& e) {
    err << "internal error, witness rejected: " << e.what() << "\n";
    return kVerifyFailed;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::logic_error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace nearzero::cli
