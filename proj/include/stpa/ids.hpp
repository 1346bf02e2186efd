#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace stpa {

enum class EntityKind : std::uint8_t {
  loss,
  hazard,
  behavior,
  component,
  action,
  feedback,
  uca,
  factor,
  context,
  scenario,
  trigger,
  insufficiency,
};

inline constexpr std::array<EntityKind, 12> kAllEntityKinds = {
    EntityKind::loss,     EntityKind::hazard,  EntityKind::behavior, EntityKind::component,
    EntityKind::action,   EntityKind::feedback, EntityKind::uca,     EntityKind::factor,
    EntityKind::context,  EntityKind::scenario, EntityKind::trigger, EntityKind::insufficiency,
};

/// Canonical id prefix (`L`, `H`, `HB`, ...).
std::string_view id_prefix(EntityKind kind) noexcept;

/// Lower-case kind name as used in JSON and messages.
std::string_view kind_name(EntityKind kind) noexcept;

/// Plural registry name (`losses`, `ucas`, `feedback`, ...).
std::string_view registry_name(EntityKind kind) noexcept;

/// Stable identifier `<PREFIX>-<ordinal>`; ordering is by kind, then ordinal.
struct EntityId {
  EntityKind kind = EntityKind::loss;
  std::uint32_t ordinal = 1;

  auto operator<=>(const EntityId&) const = default;

  std::string str() const;

  /// Accepts only the canonical form: known prefix, '-', positive ordinal
  /// without leading zeros.
  static std::optional<EntityId> parse(std::string_view text);
};

}  // namespace stpa
