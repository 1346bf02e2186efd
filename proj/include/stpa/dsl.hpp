#pragma once

// The `.stpa` authoring language.
//
// One declaration per line:
//
//   loss L-1 text "Verlust von Menschenleben oder Verletzung von Menschen"
//   hazard H-1 losses=[L-1] text "..."
//   uca UCA-1 action=CA-2 guide=not_provided behavior=HB-1 status=retained text "..."
//   link TC-1 -> LS-7 via FI-1
//
// `#` starts a comment. Attribute values are bare words, quoted strings or
// `[a, b]` lists. The trailing free text may be written `text "..."` or as a
// bare string.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "stpa/declaration.hpp"
#include "stpa/diagnostic.hpp"
#include "stpa/model.hpp"

namespace stpa {

enum class TokenKind : std::uint8_t {
  keyword,     // declaration keywords plus `text` and `via`
  identifier,  // ids, attribute keys, enum tokens
  string,      // quoted; `text` holds the unescaped value
  equals,
  arrow,
  lbracket,
  rbracket,
  comma,
};

std::string_view token_kind_name(TokenKind k) noexcept;

struct Token {
  TokenKind kind = TokenKind::identifier;
  std::string text;
  SourceSpan span;
};

struct TokenizeResult {
  std::vector<Token> tokens;
  std::vector<Diagnostic> diagnostics;
};

struct ParseResult {
  std::vector<Declaration> declarations;
  std::vector<Diagnostic> diagnostics;
};

TokenizeResult tokenize(std::string_view source, std::string_view file);

/// Parses line by line. A bad line yields exactly one diagnostic and no
/// declaration; parsing always continues with the next line.
ParseResult parse(std::string_view source, std::string_view file);

enum class DiagnosticStyle : std::uint8_t { human, machine };

/// human:   `file:line:col: severity[code]: message`
/// machine: one JSON object per line (file, line, column, severity, code, message)
std::string emit_diagnostics(const std::vector<Diagnostic>& diags, DiagnosticStyle style);

/// Quotes and escapes a string for the DSL.
std::string quote_dsl(std::string_view text);

/// Canonical DSL for a whole model (kind order, then id order, `\n` endings).
std::string to_canonical_dsl(const AnalysisModel& model);

// Single-declaration writers used by the generators.
std::string to_dsl(const UnsafeControlAction& uca);
std::string to_dsl(const LossScenario& scenario);
std::string to_dsl(const CausalFactor& factor);
std::string to_dsl(const TriggerLink& link);

}  // namespace stpa
