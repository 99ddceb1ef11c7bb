#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "nearzero/cli.hpp"

namespace cli = nearzero::cli;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::run(std::move(args), out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
  auto p = std::filesystem::temp_directory_path() / ("nearzero_cli_test_" + name);
  std::ofstream(p, std::ios::binary) << content;
  return p;
}

}  // namespace

TEST(CliFind, ApExample) {
  auto r = run({"find", "ap", "--coloring", "constant:1", "--k", "2", "--epsilon", "1/2"});
  EXPECT_EQ(r.code, cli::kOk) << r.err;
  EXPECT_NE(r.out.find("point 1/7 color 1\npoint 2/7 color 1\npoint 3/7 color 1\n"), std::string::npos) << r.out;
}

TEST(CliFind, PolyExampleHasTwoPoints) {
  auto r = run({"find", "poly", "--polys", "x", "--coloring", "constant:1", "--epsilon", "1/2"});
  EXPECT_EQ(r.code, cli::kOk) << r.err;
  auto c = nearzero::parse_certificate(r.out);
  EXPECT_EQ(c.points.size(), 2u);
}

TEST(CliFind, ZeroNodesIsExhaustedForEveryKind) {
  std::vector<std::vector<std::string>> cmds{
      {"find", "ap", "--coloring", "modsum:2", "--k", "1", "--epsilon", "1/2", "--max-nodes", "0"},
      {"find", "geo", "--coloring", "modsum:2", "--k", "1", "--epsilon", "1/2", "--max-nodes", "0"},
      {"find", "bm", "--coloring", "modsum:2", "--k", "1", "--epsilon", "1/2", "--max-nodes", "0"},
      {"find", "poly", "--coloring", "modsum:2", "--polys", "x", "--epsilon", "1/2", "--max-nodes", "0"},
      {"find", "phj", "--coloring", "modsum:2", "--polys", "x", "--epsilon", "1/2", "--max-nodes", "0"},
  };
  for (auto& c : cmds) {
    auto r = run(c);
    EXPECT_EQ(r.code, cli::kExhausted) << c[1];
    EXPECT_TRUE(r.out.empty()) << c[1];
    EXPECT_NE(r.err.find("exhausted"), std::string::npos) << r.err;
  }
}

TEST(CliFind, UsageErrors) {
  EXPECT_EQ(run({}).code, cli::kUsage);
  EXPECT_EQ(run({"find", "ap", "--coloring", "modsum:2", "--epsilon", "1/2"}).code, cli::kUsage);
  EXPECT_EQ(run({"find", "poly", "--coloring", "modsum:2", "--epsilon", "1/2"}).code, cli::kUsage);
  EXPECT_EQ(run({"find", "nope", "--coloring", "modsum:2", "--k", "1", "--epsilon", "1/2"}).code, cli::kUsage);
  EXPECT_EQ(run({"find", "ap", "--coloring", "modsum:x", "--k", "1", "--epsilon", "1/2"}).code, cli::kUsage);
  EXPECT_EQ(run({"find", "ap", "--coloring", "modsum:2", "--k", "1", "--epsilon", "3/2"}).code, cli::kUsage);
  EXPECT_EQ(run({"find", "ap", "--coloring", "modsum:2", "--k", "1", "--r", "3", "--epsilon", "1/2"}).code, cli::kUsage);
  EXPECT_EQ(run({"find", "poly", "--coloring", "modsum:2", "--polys", "x+1", "--epsilon", "1/2"}).code, cli::kUsage);
  EXPECT_EQ(run({"frobnicate"}).code, cli::kUsage);
}

TEST(CliVerify, RoundTripTamperAndMismatch) {
  auto found = run({"find", "poly", "--coloring", "modnum:3", "--polys", "x, x^2", "--epsilon", "1/2"});
  ASSERT_EQ(found.code, cli::kOk) << found.err;
  auto good = temp_file("good", found.out);
  EXPECT_EQ(run({"verify", good.string(), "--coloring", "modnum:3"}).code, cli::kOk);

  // first point moved to 1 + eps
  auto c = nearzero::parse_certificate(found.out);
  c.points.front().value = nearzero::Rational(3) / nearzero::Rational(2);
  auto bad = temp_file("bad", c.str());
  auto r = run({"verify", bad.string(), "--coloring", "modnum:3"});
  EXPECT_EQ(r.code, cli::kVerifyFailed);
  EXPECT_NE(r.err.find("outside"), std::string::npos) << r.err;

  auto other = run({"verify", good.string(), "--coloring", "modsum:3"});
  EXPECT_EQ(other.code, cli::kVerifyFailed);
  EXPECT_NE(other.err.find("point"), std::string::npos) << other.err;

  auto junk = temp_file("junk", "not a certificate\n");
  EXPECT_EQ(run({"verify", junk.string(), "--coloring", "modnum:3"}).code, cli::kUsage);
  EXPECT_EQ(run({"verify", "/nonexistent/cert", "--coloring", "modnum:3"}).code, cli::kUsage);
  std::filesystem::remove(good);
  std::filesystem::remove(bad);
  std::filesystem::remove(junk);
}

TEST(CliFind, OutFlagWritesTheSameCertificate) {
  auto p = std::filesystem::temp_directory_path() / "nearzero_cli_test_out";
  auto a = run({"find", "geo", "--coloring", "modsum:2", "--k", "1", "--epsilon", "1/2"});
  auto b = run({"find", "geo", "--coloring", "modsum:2", "--k", "1", "--epsilon", "1/2", "--out", p.string()});
  ASSERT_EQ(a.code, cli::kOk);
  ASSERT_EQ(b.code, cli::kOk);
  EXPECT_TRUE(b.out.empty());
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  EXPECT_EQ(ss.str(), a.out);
  std::filesystem::remove(p);
}

TEST(CliFind, WorkersDoNotChangeOutput) {
  for (const char* kind : {"ap", "geo", "bm"}) {
    auto one = run({"find", kind, "--coloring", "interval:3:1/8,1/4", "--k", "2", "--epsilon", "1/2", "--workers", "1"});
    auto four = run({"find", kind, "--coloring", "interval:3:1/8,1/4", "--k", "2", "--epsilon", "1/2", "--workers", "4"});
    ASSERT_EQ(one.code, cli::kOk) << kind;
    EXPECT_EQ(one.out, four.out) << kind;
  }
}

TEST(CliVdw, Examples) {
  auto a = run({"vdw", "--k", "2", "--r", "2", "--cap", "20"});
  EXPECT_EQ(a.code, cli::kOk);
  EXPECT_EQ(a.out, "9\n");
  auto b = run({"vdw", "--k", "2", "--r", "1", "--cap", "5"});
  EXPECT_EQ(b.out, "3\n");
  auto c = run({"vdw", "--k", "3", "--r", "2", "--cap", "10"});
  EXPECT_EQ(c.code, cli::kExhausted);
  EXPECT_EQ(c.out, "CapExceeded\n");
}
