#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "aoidl/sim.hpp"
#include "aoidl/system.hpp"

namespace aoidl {

inline constexpr int kSchemaVersion = 1;

/// One output record: the scenario, its analytical report and, optionally,
/// the matching simulation report. `axis` is empty outside sweeps.
struct ResultRow {
    std::string axis;
    double axis_value = 0.0;
    SystemParams params;
    AnalyticalReport analytical;
    std::optional<SimulationReport> simulation;
};

/// Column names, in output order. Stable for a given schema version.
std::vector<std::string> csv_columns();

/// UTF-8 CSV with a header row. Vector-valued fields (stationary vector,
/// histogram, occupancy) are ';'-joined inside one cell. Unbounded AoI is
/// written as "inf"; undefined confidence intervals as "nan".
std::string rows_to_csv(std::span<const ResultRow> rows);
std::vector<ResultRow> rows_from_csv(std::string_view text);

/// {"schema_version": 1, "rows": [...]}. Unbounded values are tagged
/// objects {"unbounded": true}; undefined values are null.
std::string rows_to_json(std::span<const ResultRow> rows);
std::vector<ResultRow> rows_from_json(std::string_view text);

/// Shortest round-trip decimal form.
std::string format_number(double v);

/// Writes through a temporary sibling file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace aoidl
