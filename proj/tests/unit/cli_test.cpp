#include <gtest/gtest.h>

#include <nlohmann/json.hpp>
#include <regex>

#include "support/env.hpp"
#include "verdap/dap/protocol.hpp"
#include "verdap/driver/verify.hpp"
#include "verdap/solve/process.hpp"

namespace verdap {
namespace {

using nlohmann::json;
using testing::adapter_path;
using testing::data_path;

solve::ProcessOutput cli(std::vector<std::string> args, const std::string& input = {}) {
  args.insert(args.begin(), adapter_path());
  return solve::run_process(args, input, std::chrono::seconds(60));
}

driver::VerifyOptions bruteforce(int bound = 8) {
  driver::VerifyOptions o;
  o.solver = solve::SolverConfig::bruteforce(bound);
  return o;
}

driver::VerifyOutcome verify(const std::string& file, const driver::VerifyOptions& o = bruteforce()) {
  return driver::verify_source(testing::read_text(data_path(file)), data_path(file), o);
}

TEST(Verify, LibraryVerdicts) {
  for (const char* f : {"abs.mv", "count.mv", "divide.mv", "calls.mv", "sum.mv"}) {
    driver::VerifyOutcome r = verify(f);
    ASSERT_TRUE(r.report) << f;
    EXPECT_EQ(r.exit_code, 0) << f << "\n" << driver::render_human(*r.report);
  }
  driver::VerifyOutcome wrong = verify("abs_wrong.mv");
  ASSERT_TRUE(wrong.report);
  EXPECT_EQ(wrong.exit_code, 1);
  ASSERT_EQ(wrong.report->procedures.size(), 1u);
  EXPECT_EQ(wrong.report->procedures[0].verdict, driver::Verdict::Failed);

  driver::VerifyOutcome af = verify("assert_false.mv");
  ASSERT_TRUE(af.report);
  EXPECT_EQ(af.exit_code, 1);
  EXPECT_EQ(driver::render_human(*af.report).substr(0, 26), "f: failed (assert, line 1)");
}

TEST(Verify, ParseErrorIsExitTwo) {
  driver::VerifyOutcome r = driver::verify_source("proc f( {", "bad.mv", bruteforce());
  EXPECT_FALSE(r.report);
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_FALSE(r.diagnostics.empty());
}

TEST(Verify, FuelExhaustionIsExitThree) {
  driver::VerifyOptions o = bruteforce();
  o.fuel = 2;
  driver::VerifyOutcome r = verify("count.mv", o);
  ASSERT_TRUE(r.report);
  EXPECT_TRUE(r.report->fuel_exhausted);
  EXPECT_EQ(r.exit_code, 3);
}

TEST(Cli, HumanOutputAndExitCodes) {
  auto ok = cli({"verify", "--bruteforce", "8", data_path("abs.mv")});
  EXPECT_EQ(ok.exit_code, 0) << ok.err;
  EXPECT_EQ(ok.out.rfind("abs: verified\n", 0), 0u) << ok.out;

  auto bad = cli({"verify", "--bruteforce", "8", data_path("abs_wrong.mv")});
  EXPECT_EQ(bad.exit_code, 1);
  EXPECT_EQ(bad.out.rfind("abs: failed (ensures, line 2)\n", 0), 0u) << bad.out;
  EXPECT_NE(bad.out.find("x₀ = 0"), std::string::npos) << bad.out;

  std::string broken = ::testing::TempDir() + "broken.mv";
  testing::write_text(broken, "proc f() { x = 1; }");
  auto parse = cli({"verify", "--bruteforce", "8", broken});
  EXPECT_EQ(parse.exit_code, 2);
  EXPECT_NE(parse.err.find("1:12"), std::string::npos) << parse.err;

  auto fuel = cli({"verify", "--bruteforce", "8", "--fuel", "2", data_path("count.mv")});
  EXPECT_EQ(fuel.exit_code, 3) << fuel.out;

  EXPECT_EQ(cli({"verify", "/nonexistent/file.mv"}).exit_code, 2);
  EXPECT_EQ(cli({"bogus"}).exit_code, 2);
  EXPECT_EQ(cli({"verify", "--format", "xml", data_path("abs.mv")}).exit_code, 2);
}

TEST(Cli, JsonOutput) {
  auto r = cli({"verify", "--bruteforce", "8", "--format", "json", data_path("count.mv")});
  ASSERT_EQ(r.exit_code, 0) << r.err;
  json j = json::parse(r.out);
  ASSERT_EQ(j["procedures"].size(), 1u);
  const json& p = j["procedures"][0];
  EXPECT_EQ(p["name"], "count");
  EXPECT_EQ(p["verdict"], "verified");
  std::vector<std::string> kinds;
  for (const auto& o : p["obligations"]) kinds.push_back(o["kind"]);
  EXPECT_EQ(kinds, (std::vector<std::string>{"invariant-init", "invariant-preserve", "assert"}));
}

TEST(Cli, ExternalSolverWhenAvailable) {
  if (!testing::on_path("z3")) GTEST_SKIP() << "z3 not on PATH";
  auto ok = cli({"verify", "--solver", "z3 -in", data_path("divide.mv")});
  EXPECT_EQ(ok.exit_code, 0) << ok.out << ok.err;
  auto bad = cli({"verify", "--solver", "z3 -in", data_path("abs_wrong.mv")});
  EXPECT_EQ(bad.exit_code, 1);
  EXPECT_NE(bad.out.find("x₀ = 0"), std::string::npos) << bad.out;
}

TEST(Cli, DapDisconnectExitsCleanly) {
  std::string req = dap::frame_encode(json{{"seq", 1}, {"type", "request"}, {"command", "disconnect"}});
  auto r = cli({"dap"}, req);
  EXPECT_EQ(r.exit_code, 0);
  auto decoded = dap::frame_decode(r.out);
  ASSERT_TRUE(decoded);
  EXPECT_EQ(decoded->message["request_seq"], 1);

  EXPECT_EQ(cli({"dap"}).exit_code, 0);
  EXPECT_EQ(cli({"dap"}, "Content-Length: abc\r\n\r\n{}").exit_code, 1);
}

TEST(Cli, DapLogRecordsBothDirections) {
  std::string log = ::testing::TempDir() + "verdap_cli_test.log";
  std::remove(log.c_str());
  std::string in = dap::frame_encode(json{{"seq", 1}, {"type", "request"}, {"command", "initialize"}}) +
                   dap::frame_encode(json{{"seq", 2}, {"type", "request"}, {"command", "disconnect"}});
  auto r = cli({"dap", "--log", log}, in);
  ASSERT_EQ(r.exit_code, 0);
  std::istringstream lines(testing::read_text(log));
  std::vector<std::string> prefixes;
  for (std::string line; std::getline(lines, line);) {
    prefixes.push_back(line.substr(0, 3));
    EXPECT_TRUE(json::accept(line.substr(3))) << line;
  }
  EXPECT_EQ(prefixes, (std::vector<std::string>{"-> ", "<- ", "-> ", "<- "}));
}

TEST(Property, BruteForceVerdictsAreDeterministic) {
  static const std::regex elapsed(R"(\d+ ms)");
  for (const char* f : {"abs_wrong.mv", "count.mv", "calls.mv", "divide.mv"}) {
    auto a = cli({"verify", "--bruteforce", "6", data_path(f)});
    auto b = cli({"verify", "--bruteforce", "6", data_path(f)});
    EXPECT_EQ(a.exit_code, b.exit_code) << f;
    EXPECT_EQ(std::regex_replace(a.out, elapsed, "_ ms"), std::regex_replace(b.out, elapsed, "_ ms")) << f;
  }
}

} // namespace
} // namespace verdap
