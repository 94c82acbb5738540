#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>

#include <nlohmann/json.hpp>

#include "sofmdim/dynsys.hpp"
#include "sofmdim/mapspace.hpp"
#include "sofmdim/sofic.hpp"
#include "sofmdim/theorems.hpp"

namespace sofmdim {

/// Shortest round-trip decimal form; "inf", "-inf" and "nan" otherwise.
std::string format_double(double v);

/// Finite doubles as numbers, the rest as the strings of format_double.
nlohmann::json json_number(double v);
double number_from_json(const nlohmann::json& j);

/// {"n": int, "dist": [[float]]}
nlohmann::json space_to_json(const FinitePseudometricSpace& space);
FinitePseudometricSpace space_from_json(const nlohmann::json& j);

/// {"d": int, "entries": [{"element": canonical string, "perm": [int]}]}
nlohmann::json sofic_to_json(const SoficApproximation& sigma);
SoficApproximation sofic_from_json(const nlohmann::json& j, const GroupModel& group);

/// {"space": ..., "group": name, "generators": {label: [int]}, "strict_action": bool}
nlohmann::json system_to_json(const DynSystem& sys);
DynSystem system_from_json(const nlohmann::json& j);

/// Columns stage_index,d,count,exactness,value.
std::string stage_series_csv(const StageSeries& series);
/// {"liminf_proxy", "limsup_proxy", "tail_size"}
nlohmann::json stage_summary_json(const StageSeries& series);

struct NumberedReport {
  std::size_t instance_id;
  VerificationReport report;
};

nlohmann::json report_to_json(const VerificationReport& report);

enum class ReportFormat { csv, json };

/// CSV: instance_id,inequality_name,lhs,rhs,slack,pass, one row per check,
/// rows ordered by instance id. JSON: array of full reports.
std::string render_reports(std::span<const NumberedReport> reports, ReportFormat format);

/// Writes through a temporary file in the same directory and renames it
/// into place. Throws Error when the path is not writable.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

/// Throws InvalidArgument on an empty result set.
void emit_report(std::span<const NumberedReport> reports, ReportFormat format,
                 const std::filesystem::path& path);

}  // namespace sofmdim
