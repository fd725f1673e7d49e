#ifndef FRACCHS_COMMANDS_HPP
#define FRACCHS_COMMANDS_HPP

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "fracchs/config.hpp"

namespace fracchs {

/// Process exit codes of the command-line tool.
enum ExitCode : int { exit_ok = 0, exit_validation = 1, exit_runtime = 2 };

/// Writes <dir>/trajectory.csv and FRACCHS snapshots <dir>/snapshot_<k>_{phi,c}.bin.
int cmd_run(const RunConfig& cfg, std::ostream& log);

enum class SweepAxis { modes, delta, eps };
SweepAxis parse_sweep_axis(const std::string& name);

/// One run per value under <dir>/level_<i>/, plus <dir>/sweep.csv.
int cmd_sweep(const RunConfig& cfg, SweepAxis axis, const std::vector<double>& values, int threads,
              std::ostream& log);

struct VerifyCheck {
    std::string name;
    bool passed = false;
    double worst = 0.0;      ///< worst observed value of the checked quantity
    double threshold = 0.0;  ///< bound it is compared against
};

/// Operator identities, fractional positivity and potential properties.
std::vector<VerifyCheck> verify_suite(std::uint64_t seed);
int cmd_verify(std::uint64_t seed, std::ostream& log);

/// Worker cap from FRACCHS_THREADS (defaults to the hardware concurrency).
int thread_budget();

}  // namespace fracchs

#endif  // FRACCHS_COMMANDS_HPP
