#pragma once

#include "trajlab/curve.hpp"
#include "trajlab/frenet.hpp"
#include "trajlab/geometry.hpp"
#include "trajlab/theorems.hpp"
#include "trajlab/trajectory.hpp"

#include <json.hpp>

#include <string>
#include <string_view>

namespace trajlab {

// %.17g
std::string format_double(double v);

// Sorted keys, two-space indent, doubles with 17 significant digits,
// non-finite numbers as null, trailing newline.
std::string dump_json(const nlohmann::json& value);

nlohmann::json to_json(const StructureReport& report);
nlohmann::json to_json(const TheoremReport& report);

// Fixed-width residual table for terminals.
std::string structure_table(const StructureReport& report);

// CSV writers: comma separated, header row, LF line endings.
std::string trajectory_csv(const Trajectory& curve);             // t,x1..xd,v1..vd
std::string diagnostics_csv(const DiagnosticsTable& table);      // t,speed,eta*,theta*
std::string apparatus_csv(const FrenetApparatus& apparatus);     // t,kappa*,E*_*,residual

// Inverse of trajectory_csv. q is not stored in the file and is set to 0;
// h is recovered from the time column, which must be uniform.
Trajectory parse_trajectory_csv(std::string_view text);

enum class ExportFormat { kJson, kCsv };

// Throws kIo when the file cannot be written.
void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

// export_report: JSON document or a one-row-per-condition CSV.
void export_report(const TheoremReport& report, ExportFormat format, const std::string& path);

}  // namespace trajlab
