#ifndef QSIM_CLI_HPP
#define QSIM_CLI_HPP

#include <string>
#include <vector>

namespace qsim {

// Runs the command-line front end: builds or loads a scenario, applies
// flag overrides, simulates and writes drops.csv, delivered.csv,
// delay.csv, summary.csv and a manifest into the output directory (one
// subdirectory per scheduler under --all-schedulers). Returns the process
// exit code: 0 success, 1 runtime failure, 2 usage or config error.
int run_cli(const std::vector<std::string>& args);

int run_cli(int argc, char** argv);

} // namespace qsim

#endif // QSIM_CLI_HPP
