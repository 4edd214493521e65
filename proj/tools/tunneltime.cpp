#include <iostream>

#include <CLI11.hpp>

#include "tunnel/commands.hpp"
#include "tunnel/config.hpp"
#include "tunnel/report.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Tunnelling-time calculator"};
    app.set_version_flag("--version", std::string(tunnel::kCodeVersion));
    std::string command, config_path, out_dir = ".";
    std::vector<std::string> overrides;
    bool strict = false;
    app.add_option("command", command, "times | evolve | hartman | reshape | optical | bohm")
        ->required()
        ->check(CLI::IsMember(tunnel::command_names()));
    app.add_option("--config", config_path, "flat key = value configuration file")->required();
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--set", overrides, "key=value override (repeatable)");
    app.add_flag("--strict", strict, "exit with code 3 when any result is flagged low-confidence");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    tunnel::RunConfig cfg;
    try {
        cfg = tunnel::RunConfig::load(config_path);
        for (const auto& s : overrides) cfg.set(s);
    } catch (const tunnel::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    }

    try {
        const tunnel::CommandOutput out = tunnel::run_command(command, cfg, out_dir);
        for (const auto& f : out.files) std::cout << "wrote " << f.string() << '\n';
        for (const auto& w : out.warnings) std::cerr << "warning: " << w << '\n';
        if (strict && !out.confidence_ok) {
            std::cerr << "numerical-confidence check failed\n";
            return 3;
        }
    } catch (const tunnel::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
