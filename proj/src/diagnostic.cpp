#include "stpa/diagnostic.hpp"

#include <algorithm>

namespace stpa {

Diagnostic make_error(std::string code, std::string message, std::optional<SourceSpan> location) {
  return Diagnostic{Severity::error, std::move(code), std::move(message), std::move(location)};
}

Diagnostic make_warning(std::string code, std::string message,
                        std::optional<SourceSpan> location) {
  return Diagnostic{Severity::warning, std::move(code), std::move(message), std::move(location)};
}

bool has_errors(std::span<const Diagnostic> diags) noexcept {
  return count_errors(diags) > 0;
}

std::size_t count_errors(std::span<const Diagnostic> diags) noexcept {
  return static_cast<std::size_t>(std::count_if(
      diags.begin(), diags.end(), [](const Diagnostic& d) { return d.severity == Severity::error; }));
}

std::string_view severity_name(Severity s) noexcept {
  return s == Severity::error ? "error" : "warning";
}

}  // namespace stpa
