#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stpa/diagnostic.hpp"

namespace stpa {

enum class DeclKeyword : std::uint8_t {
  loss,
  hazard,
  behavior,
  controller,
  human,
  sensor,
  actuator,
  process,
  action,
  feedback,
  uca,
  factor,
  context,
  scenario,
  trigger,
  insufficiency,
  link,
};

std::string_view keyword_text(DeclKeyword k) noexcept;
std::optional<DeclKeyword> parse_keyword(std::string_view word) noexcept;

/// One attribute value: a scalar (one item) or a bracketed list.
struct AttrValue {
  std::vector<std::string> items;
  bool is_list = false;
  SourceSpan span;                      // whole value
  std::vector<SourceSpan> item_spans;   // one per item

  bool operator==(const AttrValue&) const = default;
};

/// A structurally well-formed but not yet integrity-checked entity or
/// relation. For `link` the id holds the trigger, and the attributes
/// `scenario` and `insufficiency` hold the other two ends.
struct Declaration {
  DeclKeyword keyword = DeclKeyword::loss;
  std::string id;
  SourceSpan id_span;
  std::map<std::string, AttrValue> attributes;
  SourceSpan span;

  const AttrValue* find(std::string_view key) const;
};

/// Convenience constructor for programmatic declarations (tests, importers).
/// Values written as `[a, b]` become lists; everything else is a scalar.
Declaration make_declaration(DeclKeyword keyword, std::string id,
                             std::vector<std::pair<std::string, std::string>> attributes,
                             SourceSpan span = {});

/// Attribute keys a keyword requires and allows.
const std::vector<std::string_view>& required_attributes(DeclKeyword k);
const std::vector<std::string_view>& allowed_attributes(DeclKeyword k);

}  // namespace stpa
