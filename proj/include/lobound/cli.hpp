#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace lobound::cli {

enum class Command { kBound, kOptimize, kCertify, kFindCert, kDualityCheck, kSweepPhase, kSimulate };

const char* command_name(Command c);

struct RunConfig {
  Command command = Command::kBound;
  std::string gate = "ns";
  int n = 2;
  int n_max = -1;  ///< optimize: sweep n..n_max when >= n
  int restarts = 50;
  std::uint64_t seed = 0;
  int grid = 2001;
  int kmax = 500;
  double tol = 1e-10;
  int points = 21;  ///< sweep-phase grid size
  int draws = 100;  ///< duality-check draws
  std::string cert_in;
  std::string cert_out;
  std::vector<double> input;  ///< simulate: real input amplitudes y_0..y_N
  std::string out;            ///< empty: stdout
  std::string format = "json";
  bool timestamp = true;
};

/// Executes one command. Data goes to `out`, progress and errors to `diag`.
/// Exit codes: 0 success, 1 verification failed, 2 invalid input.
int run(const RunConfig& config, std::ostream& out, std::ostream& diag);

/// Parses argv with CLI11 and dispatches to run().
int main_entry(int argc, char** argv);

}  // namespace lobound::cli
