#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "qkd/serialize.hpp"

namespace qkd::cli {

/// Resolved run configuration: defaults, then config file, then flags.
struct RunConfig {
  std::string command;
  std::string protocol = "both";
  SystemParams params;
  double l_from = 0.0;
  double l_to = 80.0;
  double l_step = 1.0;
  std::string strategy = "none";
  double epsilon1 = 0.25;
  std::string source = "poisson";
  std::uint64_t rounds = 100000;
  std::uint64_t seed = 1;
  // Execution and output settings; they never change the emitted numbers.
  unsigned workers = 1;
  std::string format;
  std::string out;
};

/// Config keys and values that determine the output. Written back as
/// `key = value` lines it reproduces the run.
Json echo(const RunConfig& cfg);

/// Entry point behind the qkdsim binary. Returns the process exit code:
/// 0 success, 2 invalid configuration, 1 internal error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qkd::cli
