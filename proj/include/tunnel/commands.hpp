#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "tunnel/config.hpp"

namespace tunnel {

struct CommandOutput {
    std::vector<std::filesystem::path> files;
    bool confidence_ok = true;
    std::vector<std::string> warnings;
};

CommandOutput cmd_times(const RunConfig& cfg, const std::filesystem::path& out_dir);
CommandOutput cmd_evolve(const RunConfig& cfg, const std::filesystem::path& out_dir);
CommandOutput cmd_hartman(const RunConfig& cfg, const std::filesystem::path& out_dir);
CommandOutput cmd_reshape(const RunConfig& cfg, const std::filesystem::path& out_dir);
CommandOutput cmd_optical(const RunConfig& cfg, const std::filesystem::path& out_dir);
CommandOutput cmd_bohm(const RunConfig& cfg, const std::filesystem::path& out_dir);

const std::vector<std::string>& command_names();
// Throws ConfigError for an unknown command name.
CommandOutput run_command(const std::string& name, const RunConfig& cfg, const std::filesystem::path& out_dir);

}  // namespace tunnel
