#pragma once

// Entities and relation tables of an STPA analysis documented for SOTIF
// triggering-condition identification.
//
//   Loss <-*-*-> Hazard <-*-*-> HazardousBehavior
//   ControlAction x GuideWord x HazardousBehavior -> UnsafeControlAction
//   UnsafeControlAction + CausalFactor @ Component [+ context] -> LossScenario
//   (TriggeringCondition, LossScenario, FunctionalInsufficiency) -> TriggerLink

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "stpa/diagnostic.hpp"
#include "stpa/ids.hpp"

namespace stpa {

enum class ComponentKind : std::uint8_t { controller, human_controller, sensor, actuator, process };
enum class LinkKind : std::uint8_t { feedback, other };
enum class GuideWord : std::uint8_t { not_provided, provided_unsafe, wrong_timing, wrong_duration };
enum class UcaStatus : std::uint8_t { candidate, retained, excluded };
enum class FactorCategory : std::uint8_t { controller, feedback_path, control_path, process_input };
enum class DefaultRelevance : std::uint8_t { sotif_candidate, functional_safety, needs_review };
enum class Relevance : std::uint8_t { sotif, functional_safety, needs_review };

/// Guide words in catalog order.
inline constexpr GuideWord kGuideWords[] = {GuideWord::not_provided, GuideWord::provided_unsafe,
                                            GuideWord::wrong_timing, GuideWord::wrong_duration};

// Token <-> enum. Tokens are the snake_case enumerator names.
std::string_view to_token(ComponentKind v) noexcept;
std::string_view to_token(LinkKind v) noexcept;
std::string_view to_token(GuideWord v) noexcept;
std::string_view to_token(UcaStatus v) noexcept;
std::string_view to_token(FactorCategory v) noexcept;
std::string_view to_token(DefaultRelevance v) noexcept;
std::string_view to_token(Relevance v) noexcept;

template <class E>
std::optional<E> parse_token(std::string_view token);

/// German catalog label ("Keine Bereitstellung", ...).
std::string_view guide_word_label(GuideWord g) noexcept;
/// English alias used in exports ("not provided", ...).
std::string_view guide_word_alias(GuideWord g) noexcept;

Relevance to_relevance(DefaultRelevance d) noexcept;

struct Loss {
  EntityId id{EntityKind::loss, 1};
  std::string description;
  bool operator==(const Loss&) const = default;
};

struct Hazard {
  EntityId id{EntityKind::hazard, 1};
  std::string description;
  std::vector<EntityId> losses;  // sorted, unique
  bool operator==(const Hazard&) const = default;
};

struct HazardousBehavior {
  EntityId id{EntityKind::behavior, 1};
  std::string description;
  std::vector<EntityId> hazards;  // sorted, unique
  bool operator==(const HazardousBehavior&) const = default;
};

struct Component {
  EntityId id{EntityKind::component, 1};
  std::string name;
  ComponentKind kind = ComponentKind::controller;
  bool environment = false;  // designated "vehicle in its environment" process
  bool operator==(const Component&) const = default;
};

struct ControlAction {
  EntityId id{EntityKind::action, 1};
  std::string name;
  EntityId source{EntityKind::component, 1};
  EntityId target{EntityKind::component, 1};
  std::vector<EntityId> behaviors;  // narrowing for UCA generation; empty = all
  bool operator==(const ControlAction&) const = default;
};

struct FeedbackLink {
  EntityId id{EntityKind::feedback, 1};
  std::string name;
  EntityId source{EntityKind::component, 1};
  EntityId target{EntityKind::component, 1};
  LinkKind kind = LinkKind::feedback;
  bool operator==(const FeedbackLink&) const = default;
};

struct UnsafeControlAction {
  EntityId id{EntityKind::uca, 1};
  EntityId action{EntityKind::action, 1};
  GuideWord guide_word = GuideWord::not_provided;
  EntityId behavior{EntityKind::behavior, 1};
  std::string narrative;
  UcaStatus status = UcaStatus::candidate;
  std::optional<std::string> exclusion_reason;
  bool operator==(const UnsafeControlAction&) const = default;
};

struct CausalFactor {
  EntityId id{EntityKind::factor, 1};
  std::string label;  // stable machine label, e.g. control_algorithm_flaw
  std::string description;
  FactorCategory category = FactorCategory::controller;
  std::vector<ComponentKind> locus_kinds;  // sorted, unique, non-empty
  DefaultRelevance default_relevance = DefaultRelevance::needs_review;
  bool operator==(const CausalFactor&) const = default;
};

struct ScenarioContext {
  EntityId id{EntityKind::context, 1};
  std::string description;
  std::vector<EntityId> applicable_behaviors;  // sorted, unique, non-empty
  bool operator==(const ScenarioContext&) const = default;
};

struct LossScenario {
  EntityId id{EntityKind::scenario, 1};
  EntityId uca{EntityKind::uca, 1};
  EntityId factor{EntityKind::factor, 1};
  EntityId locus{EntityKind::component, 1};
  std::optional<EntityId> context;
  std::string narrative;
  std::optional<Relevance> relevance;  // authored override; absent = factor default
  bool operator==(const LossScenario&) const = default;
};

struct TriggeringCondition {
  EntityId id{EntityKind::trigger, 1};
  std::string description;
  bool operator==(const TriggeringCondition&) const = default;
};

struct FunctionalInsufficiency {
  EntityId id{EntityKind::insufficiency, 1};
  std::string description;
  EntityId locus{EntityKind::component, 1};
  bool operator==(const FunctionalInsufficiency&) const = default;
};

struct TriggerLink {
  EntityId trigger{EntityKind::trigger, 1};
  EntityId scenario{EntityKind::scenario, 1};
  EntityId insufficiency{EntityKind::insufficiency, 1};
  auto operator<=>(const TriggerLink&) const = default;
};

template <class T>
using Registry = std::map<EntityId, T>;

/// Source locations of declarations, kept beside the model so that
/// diagnostics raised after assembly can point into the input text.
struct SourceIndex {
  std::map<EntityId, SourceSpan> declarations;
  std::map<std::pair<EntityId, std::string>, std::vector<SourceSpan>> attributes;
  struct LinkSource {
    SourceSpan declaration, trigger, scenario, insufficiency;
  };
  std::map<TriggerLink, LinkSource> links;

  std::optional<SourceSpan> declaration(EntityId id) const;
  /// Span of the `index`-th value of attribute `key` on entity `id`,
  /// falling back to the declaration span.
  std::optional<SourceSpan> attribute(EntityId id, const std::string& key,
                                      std::size_t index = 0) const;
};

/// Registry of every entity kind plus the trigger-link relation.
/// Immutable once assembled; every operation takes it by const reference.
struct AnalysisModel {
  Registry<Loss> losses;
  Registry<Hazard> hazards;
  Registry<HazardousBehavior> behaviors;
  Registry<Component> components;
  Registry<ControlAction> actions;
  Registry<FeedbackLink> feedback;
  Registry<UnsafeControlAction> ucas;
  Registry<CausalFactor> factors;
  Registry<ScenarioContext> contexts;
  Registry<LossScenario> scenarios;
  Registry<TriggeringCondition> triggers;
  Registry<FunctionalInsufficiency> insufficiencies;
  std::vector<TriggerLink> links;  // sorted, unique

  bool valid = true;    // false iff assembly produced an error diagnostic
  SourceIndex sources;  // not part of structural equality

  /// Structural equality over registries and links.
  bool operator==(const AnalysisModel& other) const;

  std::size_t count(EntityKind kind) const noexcept;
  bool contains(EntityId id) const noexcept;
  bool empty() const noexcept;

  /// The process designated as "vehicle in its environment": the process
  /// flagged environment=true, else the only process.
  std::optional<EntityId> environment_process() const;

  /// Next free ordinal for a kind (max + 1).
  std::uint32_t next_ordinal(EntityKind kind) const noexcept;
};

using EntityRef =
    std::variant<const Loss*, const Hazard*, const HazardousBehavior*, const Component*,
                 const ControlAction*, const FeedbackLink*, const UnsafeControlAction*,
                 const CausalFactor*, const ScenarioContext*, const LossScenario*,
                 const TriggeringCondition*, const FunctionalInsufficiency*>;

/// The unique entity with that id, or nullopt. Never throws.
std::optional<EntityRef> lookup(const AnalysisModel& model, EntityId id) noexcept;

/// Human-readable text of an entity (description, name, narrative or label).
std::string entity_text(const AnalysisModel& model, EntityId id);

/// Thrown for violated preconditions (dangling ids passed to an operation,
/// generation on an invalid model, unknown export format, ...).
class ModelError : public std::runtime_error {
 public:
  ModelError(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}
  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

}  // namespace stpa
