#pragma once

#include <optional>
#include <string>
#include <vector>

#include "output.hpp"
#include "run_config.hpp"

namespace combsense::cli {

struct CommandResult {
    OutputSet outputs;
    int exit_code = 0;
    std::vector<std::string> warnings;
};

CommandResult cmd_nbar(const RunConfig& cfg);
CommandResult cmd_qfi_map(const RunConfig& cfg);
CommandResult cmd_advantage_cut(const RunConfig& cfg, const std::vector<double>& temps_mk);
CommandResult cmd_reconstruct(const RunConfig& cfg);
CommandResult cmd_oracle(const RunConfig& cfg);
CommandResult cmd_reproduce_fig2(const RunConfig& cfg);
CommandResult cmd_reproduce_fig3(const RunConfig& cfg);

// Thrown for bad user input found while running a command (missing files,
// inconsistent options). Maps to the usage/config exit code.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace combsense::cli
