#pragma once

#include <array>
#include <filesystem>
#include <json.hpp>
#include <span>
#include <string>
#include <vector>

#include "skewspec/cli.hpp"
#include "skewspec/spectrum.hpp"

namespace skewspec::cli {

/// Shortest round-trip decimal form, locale independent; "inf", "-inf", "nan" for non-finite.
std::string format_double(double v);

/// Non-finite values become the strings "inf"/"-inf"/"nan" (JSON has no literal for them).
nlohmann::json json_number(double v);

nlohmann::json to_json(const RunManifest& m);

/// Writes text to dir/name, throwing std::runtime_error on I/O failure.
void write_file(const std::filesystem::path& dir, const std::string& name, const std::string& text);
void write_json(const std::filesystem::path& dir, const std::string& name, const nlohmann::json& j);

/// CSV with a header row; every row must have header.size() fields.
std::string csv_table(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows);

/// Scatter plot on an 800x800 canvas. `quarter` selects the first-quadrant
/// view with a quarter-circle reference arc; otherwise a full circle centred
/// at the origin. Axes span the reference radius times 1.2.
std::string scatter_svg(std::span<const std::array<double, 2>> points, double reference_radius, bool quarter,
                        const std::string& title);

std::vector<std::array<double, 2>> as_planar(const SkewSpectrum& s);

}  // namespace skewspec::cli
