#pragma once

#include <chrono>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace verdap::solve {

class SpawnError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct ProcessOutput {
  int exit_code = -1;
  bool timed_out = false;
  std::string out;
  std::string err;
};

/// Runs argv[0] (searched on PATH) with `input` on its stdin, collecting
/// stdout/stderr until exit. The child is killed once `timeout` elapses.
ProcessOutput run_process(const std::vector<std::string>& argv, std::string_view input,
                          std::chrono::milliseconds timeout);

} // namespace verdap::solve
