#include "stpa/model.hpp"

#include <algorithm>
#include <array>
#include <utility>

namespace stpa {

namespace {

template <class E, std::size_t N>
using TokenTable = std::array<std::pair<E, std::string_view>, N>;

constexpr TokenTable<ComponentKind, 5> kComponentKinds{{
    {ComponentKind::controller, "controller"},
    {ComponentKind::human_controller, "human_controller"},
    {ComponentKind::sensor, "sensor"},
    {ComponentKind::actuator, "actuator"},
    {ComponentKind::process, "process"},
}};
constexpr TokenTable<LinkKind, 2> kLinkKinds{{
    {LinkKind::feedback, "feedback"},
    {LinkKind::other, "other"},
}};
constexpr TokenTable<GuideWord, 4> kGuideWordTokens{{
    {GuideWord::not_provided, "not_provided"},
    {GuideWord::provided_unsafe, "provided_unsafe"},
    {GuideWord::wrong_timing, "wrong_timing"},
    {GuideWord::wrong_duration, "wrong_duration"},
}};
constexpr TokenTable<UcaStatus, 3> kStatuses{{
    {UcaStatus::candidate, "candidate"},
    {UcaStatus::retained, "retained"},
    {UcaStatus::excluded, "excluded"},
}};
constexpr TokenTable<FactorCategory, 4> kCategories{{
    {FactorCategory::controller, "controller"},
    {FactorCategory::feedback_path, "feedback_path"},
    {FactorCategory::control_path, "control_path"},
    {FactorCategory::process_input, "process_input"},
}};
constexpr TokenTable<DefaultRelevance, 3> kDefaultRelevances{{
    {DefaultRelevance::sotif_candidate, "sotif_candidate"},
    {DefaultRelevance::functional_safety, "functional_safety"},
    {DefaultRelevance::needs_review, "needs_review"},
}};
constexpr TokenTable<Relevance, 3> kRelevances{{
    {Relevance::sotif, "sotif"},
    {Relevance::functional_safety, "functional_safety"},
    {Relevance::needs_review, "needs_review"},
}};

template <class E, std::size_t N>
std::string_view token_of(const TokenTable<E, N>& table, E value) noexcept {
  for (const auto& [v, t] : table) {
    if (v == value) return t;
  }
  return {};
}

template <class E, std::size_t N>
std::optional<E> value_of(const TokenTable<E, N>& table, std::string_view token) noexcept {
  for (const auto& [v, t] : table) {
    if (t == token) return v;
  }
  return std::nullopt;
}

template <class T>
const T* find_in(const Registry<T>& registry, EntityId id) noexcept {
  auto it = registry.find(id);
  return it == registry.end() ? nullptr : &it->second;
}

}  // namespace

std::string_view to_token(ComponentKind v) noexcept { return token_of(kComponentKinds, v); }
std::string_view to_token(LinkKind v) noexcept { return token_of(kLinkKinds, v); }
std::string_view to_token(GuideWord v) noexcept { return token_of(kGuideWordTokens, v); }
std::string_view to_token(UcaStatus v) noexcept { return token_of(kStatuses, v); }
std::string_view to_token(FactorCategory v) noexcept { return token_of(kCategories, v); }
std::string_view to_token(DefaultRelevance v) noexcept { return token_of(kDefaultRelevances, v); }
std::string_view to_token(Relevance v) noexcept { return token_of(kRelevances, v); }

template <>
std::optional<ComponentKind> parse_token<ComponentKind>(std::string_view t) {
  return value_of(kComponentKinds, t);
}
template <>
std::optional<LinkKind> parse_token<LinkKind>(std::string_view t) {
  return value_of(kLinkKinds, t);
}
template <>
std::optional<GuideWord> parse_token<GuideWord>(std::string_view t) {
  return value_of(kGuideWordTokens, t);
}
template <>
std::optional<UcaStatus> parse_token<UcaStatus>(std::string_view t) {
  return value_of(kStatuses, t);
}
template <>
std::optional<FactorCategory> parse_token<FactorCategory>(std::string_view t) {
  return value_of(kCategories, t);
}
template <>
std::optional<DefaultRelevance> parse_token<DefaultRelevance>(std::string_view t) {
  return value_of(kDefaultRelevances, t);
}
template <>
std::optional<Relevance> parse_token<Relevance>(std::string_view t) {
  return value_of(kRelevances, t);
}

std::string_view guide_word_label(GuideWord g) noexcept {
  switch (g) {
    case GuideWord::not_provided: return "Keine Bereitstellung";
    case GuideWord::provided_unsafe: return "Falsche Bereitstellung";
    case GuideWord::wrong_timing: return "Zu frühe oder zu späte Bereitstellung";
    case GuideWord::wrong_duration: return "Zu lange oder zu kurze Bereitstellung";
  }
  return {};
}

std::string_view guide_word_alias(GuideWord g) noexcept {
  switch (g) {
    case GuideWord::not_provided: return "not provided";
    case GuideWord::provided_unsafe: return "provided unsafely";
    case GuideWord::wrong_timing: return "too early or too late";
    case GuideWord::wrong_duration: return "too long or too short";
  }
  return {};
}

Relevance to_relevance(DefaultRelevance d) noexcept {
  switch (d) {
    case DefaultRelevance::sotif_candidate: return Relevance::sotif;
    case DefaultRelevance::functional_safety: return Relevance::functional_safety;
    case DefaultRelevance::needs_review: return Relevance::needs_review;
  }
  return Relevance::needs_review;
}

std::optional<SourceSpan> SourceIndex::declaration(EntityId id) const {
  auto it = declarations.find(id);
  if (it == declarations.end()) return std::nullopt;
  return it->second;
}

std::optional<SourceSpan> SourceIndex::attribute(EntityId id, const std::string& key,
                                                 std::size_t index) const {
  auto it = attributes.find({id, key});
  if (it != attributes.end() && index < it->second.size()) return it->second[index];
  return declaration(id);
}

bool AnalysisModel::operator==(const AnalysisModel& o) const {
  return losses == o.losses && hazards == o.hazards && behaviors == o.behaviors &&
         components == o.components && actions == o.actions && feedback == o.feedback &&
         ucas == o.ucas && factors == o.factors && contexts == o.contexts &&
         scenarios == o.scenarios && triggers == o.triggers &&
         insufficiencies == o.insufficiencies && links == o.links;
}

std::size_t AnalysisModel::count(EntityKind kind) const noexcept {
  switch (kind) {
    case EntityKind::loss: return losses.size();
    case EntityKind::hazard: return hazards.size();
    case EntityKind::behavior: return behaviors.size();
    case EntityKind::component: return components.size();
    case EntityKind::action: return actions.size();
    case EntityKind::feedback: return feedback.size();
    case EntityKind::uca: return ucas.size();
    case EntityKind::factor: return factors.size();
    case EntityKind::context: return contexts.size();
    case EntityKind::scenario: return scenarios.size();
    case EntityKind::trigger: return triggers.size();
    case EntityKind::insufficiency: return insufficiencies.size();
  }
  return 0;
}

bool AnalysisModel::contains(EntityId id) const noexcept { return lookup(*this, id).has_value(); }

bool AnalysisModel::empty() const noexcept {
  return std::all_of(kAllEntityKinds.begin(), kAllEntityKinds.end(),
                     [this](EntityKind k) { return count(k) == 0; }) &&
         links.empty();
}

std::optional<EntityId> AnalysisModel::environment_process() const {
  std::optional<EntityId> designated;
  std::optional<EntityId> only;
  std::size_t processes = 0;
  for (const auto& [id, c] : components) {
    if (c.kind != ComponentKind::process) continue;
    ++processes;
    only = id;
    if (c.environment && !designated) designated = id;
  }
  if (designated) return designated;
  if (processes == 1) return only;
  return std::nullopt;
}

std::uint32_t AnalysisModel::next_ordinal(EntityKind kind) const noexcept {
  auto last = [](const auto& registry) -> std::uint32_t {
    return registry.empty() ? 0u : registry.rbegin()->first.ordinal;
  };
  std::uint32_t max = 0;
  switch (kind) {
    case EntityKind::loss: max = last(losses); break;
    case EntityKind::hazard: max = last(hazards); break;
    case EntityKind::behavior: max = last(behaviors); break;
    case EntityKind::component: max = last(components); break;
    case EntityKind::action: max = last(actions); break;
    case EntityKind::feedback: max = last(feedback); break;
    case EntityKind::uca: max = last(ucas); break;
    case EntityKind::factor: max = last(factors); break;
    case EntityKind::context: max = last(contexts); break;
    case EntityKind::scenario: max = last(scenarios); break;
    case EntityKind::trigger: max = last(triggers); break;
    case EntityKind::insufficiency: max = last(insufficiencies); break;
  }
  return max + 1;
}

std::optional<EntityRef> lookup(const AnalysisModel& m, EntityId id) noexcept {
  auto wrap = [](const auto* p) -> std::optional<EntityRef> {
    if (p == nullptr) return std::nullopt;
    return EntityRef{p};
  };
  switch (id.kind) {
    case EntityKind::loss: return wrap(find_in(m.losses, id));
    case EntityKind::hazard: return wrap(find_in(m.hazards, id));
    case EntityKind::behavior: return wrap(find_in(m.behaviors, id));
    case EntityKind::component: return wrap(find_in(m.components, id));
    case EntityKind::action: return wrap(find_in(m.actions, id));
    case EntityKind::feedback: return wrap(find_in(m.feedback, id));
    case EntityKind::uca: return wrap(find_in(m.ucas, id));
    case EntityKind::factor: return wrap(find_in(m.factors, id));
    case EntityKind::context: return wrap(find_in(m.contexts, id));
    case EntityKind::scenario: return wrap(find_in(m.scenarios, id));
    case EntityKind::trigger: return wrap(find_in(m.triggers, id));
    case EntityKind::insufficiency: return wrap(find_in(m.insufficiencies, id));
  }
  return std::nullopt;
}

std::string entity_text(const AnalysisModel& model, EntityId id) {
  auto ref = lookup(model, id);
  if (!ref) return {};
  return std::visit(
      [](const auto* e) -> std::string {
        using T = std::decay_t<decltype(*e)>;
        if constexpr (std::is_same_v<T, Component> || std::is_same_v<T, ControlAction> ||
                      std::is_same_v<T, FeedbackLink>) {
          return e->name;
        } else if constexpr (std::is_same_v<T, UnsafeControlAction> ||
                             std::is_same_v<T, LossScenario>) {
          return e->narrative;
        } else if constexpr (std::is_same_v<T, CausalFactor>) {
          return e->description.empty() ? e->label : e->description;
        } else {
          return e->description;
        }
      },
      *ref);
}

}  // namespace stpa
