#include "stpa/ids.hpp"

#include <charconv>

namespace stpa {

namespace {

struct KindInfo {
  EntityKind kind;
  std::string_view prefix;
  std::string_view name;
  std::string_view plural;
};

constexpr KindInfo kKinds[] = {
    {EntityKind::loss, "L", "loss", "losses"},
    {EntityKind::hazard, "H", "hazard", "hazards"},
    {EntityKind::behavior, "HB", "behavior", "behaviors"},
    {EntityKind::component, "C", "component", "components"},
    {EntityKind::action, "CA", "action", "actions"},
    {EntityKind::feedback, "FB", "feedback", "feedback"},
    {EntityKind::uca, "UCA", "uca", "ucas"},
    {EntityKind::factor, "CF", "factor", "factors"},
    {EntityKind::context, "CTX", "context", "contexts"},
    {EntityKind::scenario, "LS", "scenario", "scenarios"},
    {EntityKind::trigger, "TC", "trigger", "triggers"},
    {EntityKind::insufficiency, "FI", "insufficiency", "insufficiencies"},
};

}  // namespace

std::string_view id_prefix(EntityKind kind) noexcept {
  return kKinds[static_cast<std::size_t>(kind)].prefix;
}

std::string_view kind_name(EntityKind kind) noexcept {
  return kKinds[static_cast<std::size_t>(kind)].name;
}

std::string_view registry_name(EntityKind kind) noexcept {
  return kKinds[static_cast<std::size_t>(kind)].plural;
}

std::string EntityId::str() const {
  std::string out(id_prefix(kind));
  out += '-';
  out += std::to_string(ordinal);
  return out;
}

std::optional<EntityId> EntityId::parse(std::string_view text) {
  const auto dash = text.find('-');
  if (dash == std::string_view::npos) return std::nullopt;
  const auto prefix = text.substr(0, dash);
  const auto digits = text.substr(dash + 1);
  if (digits.empty() || digits.front() == '0') return std::nullopt;
  for (char c : digits) {
    if (c < '0' || c > '9') return std::nullopt;
  }
  std::uint32_t ordinal = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), ordinal);
  if (ec != std::errc{} || ptr != digits.data() + digits.size()) return std::nullopt;
  for (const auto& info : kKinds) {
    if (info.prefix == prefix) return EntityId{info.kind, ordinal};
  }
  return std::nullopt;
}

}  // namespace stpa
