#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace stpa {

enum class Severity : std::uint8_t { error, warning };

struct SourceSpan {
  std::string file;
  std::uint32_t line = 1;    // 1-based
  std::uint32_t column = 1;  // 1-based, counted in code points
  std::uint32_t length = 0;  // code points

  bool operator==(const SourceSpan&) const = default;
};

struct Diagnostic {
  Severity severity = Severity::error;
  std::string code;  // E001, W101, ...
  std::string message;
  std::optional<SourceSpan> location;

  bool operator==(const Diagnostic&) const = default;
};

Diagnostic make_error(std::string code, std::string message,
                      std::optional<SourceSpan> location = std::nullopt);
Diagnostic make_warning(std::string code, std::string message,
                        std::optional<SourceSpan> location = std::nullopt);

bool has_errors(std::span<const Diagnostic> diags) noexcept;
std::size_t count_errors(std::span<const Diagnostic> diags) noexcept;

std::string_view severity_name(Severity s) noexcept;

}  // namespace stpa
