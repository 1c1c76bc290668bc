#pragma once

#include <span>
#include <string>

#include "trunkload/analysis.hpp"

namespace trunkload {

inline constexpr std::string_view kCsvHeader = "muscle,group,side,case,phase,activation_mean,activation_peak";

/// Machine report (JSON). Full precision, key order fixed.
std::string report_json(const SymmetryReport& report);

/// One row per group-side per report, header kCsvHeader.
std::string reports_csv(std::span<const SymmetryReport> reports);

/// Human summary: assumption header, per-group whole-percent table, flags.
std::string report_text(const SymmetryReport& report);

std::string comparison_text(const ComparisonTable& table);
std::string comparison_json(const ComparisonTable& table, std::span<const SymmetryReport> reports);

/// Grouped bar chart (group-side on x, one bar per column) as SVG.
std::string comparison_svg(const ComparisonTable& table, std::string_view title);

/// Same data as whitespace-separated columns for external plotting.
std::string comparison_columns(const ComparisonTable& table);

}  // namespace trunkload
