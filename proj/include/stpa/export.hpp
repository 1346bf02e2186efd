#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "stpa/integrity.hpp"
#include "stpa/model.hpp"

namespace stpa {

enum class ExportFormat : std::uint8_t { json, csv_matrix, dot, markdown };

/// Accepts json, csv (or csv_matrix), dot, markdown (or md).
std::optional<ExportFormat> parse_export_format(std::string_view token) noexcept;

/// Serializes the model. JSON has sorted keys and is lossless; the CSV is
/// the trigger x SOTIF-retained-scenario incidence matrix; DOT is the
/// control structure; markdown is a readable report.
std::string export_model(const AnalysisModel& model, ExportFormat format);

std::string export_json(const AnalysisModel& model);
std::string export_csv_matrix(const AnalysisModel& model);
std::string export_dot(const AnalysisModel& model);
std::string export_markdown(const AnalysisModel& model);

/// Reads a JSON export back. Structural problems in the document (not an
/// object, missing registries, wrong value types) produce E120; the rest
/// goes through the regular assembly checks.
AssemblyResult import_json(std::string_view text);

}  // namespace stpa
