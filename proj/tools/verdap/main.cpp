#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "verdap/dap/server.hpp"
#include "verdap/driver/verify.hpp"

namespace {

using namespace verdap;

struct VerifyArgs {
  std::string file;
  std::string solver;
  int bruteforce = 0;
  int timeout_ms = 2000;
  std::size_t fuel = 100'000;
  std::string format = "human";
};

int run_verify(const VerifyArgs& args) {
  std::ifstream in(args.file, std::ios::binary);
  if (!in) {
    std::cerr << "verdap: cannot read '" << args.file << "'\n";
    return 2;
  }
  std::ostringstream source;
  source << in.rdbuf();

  driver::VerifyOptions options;
  if (args.bruteforce > 0) {
    options.solver = solve::SolverConfig::bruteforce(args.bruteforce);
  } else if (!args.solver.empty()) {
    options.solver = solve::SolverConfig::external(args.solver);
  } else if (const char* env = std::getenv("VERDAP_SOLVER"); env && *env) {
    options.solver = solve::SolverConfig::external(env);
  }
  options.solver.timeout = std::chrono::milliseconds(args.timeout_ms);
  options.fuel = args.fuel;

  driver::VerifyOutcome outcome = driver::verify_source(source.str(), args.file, options);
  if (!outcome.report) {
    for (const auto& d : outcome.diagnostics) std::cerr << lang::to_string(d) << '\n';
    return outcome.exit_code;
  }
  if (args.format == "json") {
    std::cout << driver::to_json(*outcome.report).dump(2) << '\n';
  } else {
    std::cout << driver::render_human(*outcome.report);
  }
  return outcome.exit_code;
}

int run_dap(const std::string& log_path) {
  std::ios::sync_with_stdio(false);
  std::ofstream log;
  if (!log_path.empty()) {
    log.open(log_path, std::ios::app);
    if (!log) {
      std::cerr << "verdap: cannot open log file '" << log_path << "'\n";
      return 1;
    }
  }
  return dap::serve(std::cin, std::cout, log.is_open() ? &log : nullptr);
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"verdap: symbolic-execution verifier and debug adapter for MiniVer"};
  app.require_subcommand(1);

  VerifyArgs verify;
  auto* verify_cmd = app.add_subcommand("verify", "Verify every procedure of a MiniVer file");
  verify_cmd->add_option("file", verify.file, "Program to verify")->required();
  auto* solver_opt = verify_cmd->add_option("--solver", verify.solver,
                                            "SMT solver command (default: $VERDAP_SOLVER or 'z3 -in')");
  verify_cmd->add_option("--bruteforce", verify.bruteforce, "Use bounded enumeration over [-N, N]")
      ->check(CLI::PositiveNumber)
      ->excludes(solver_opt);
  verify_cmd->add_option("--timeout-ms", verify.timeout_ms, "Per-query solver timeout")
      ->check(CLI::PositiveNumber);
  verify_cmd->add_option("--fuel", verify.fuel, "Maximum number of symbolic steps");
  verify_cmd->add_option("--format", verify.format, "Output format")
      ->check(CLI::IsMember({"human", "json"}));

  std::string log_path;
  auto* dap_cmd = app.add_subcommand("dap", "Serve the Debug Adapter Protocol on stdin/stdout");
  dap_cmd->add_option("--log", log_path, "Append protocol traffic to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (*verify_cmd) return run_verify(verify);
  return run_dap(log_path);
}
