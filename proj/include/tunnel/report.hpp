#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tunnel/config.hpp"
#include "tunnel/units.hpp"

namespace tunnel {

struct OutputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr const char* kCodeVersion = "1.0.0";

using Metadata = std::vector<std::pair<std::string, std::string>>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    explicit Table(std::vector<std::string> cols) : columns(std::move(cols)) {}
    void add_row(std::vector<double> row);
    // Throws std::logic_error when the column is missing.
    std::vector<double> column(const std::string& name) const;
};

// Command, code version, constants and every config entry in key order.
Metadata run_metadata(const std::string& command, const RunConfig& cfg, const UnitSystem& units = UnitSystem::electron());

std::string format_number(double v);
std::string format_csv(const Table& table, const Metadata& meta);
void write_text(const std::filesystem::path& path, const std::string& text);
void write_csv(const std::filesystem::path& path, const Table& table, const Metadata& meta);

struct SvgSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

std::string render_svg(const std::string& title, const std::string& x_label, const std::string& y_label,
                       const std::vector<SvgSeries>& series);

}  // namespace tunnel
