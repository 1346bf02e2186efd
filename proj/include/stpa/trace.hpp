#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "stpa/model.hpp"

namespace stpa {

/// Reachability graph rooted at one entity. Nodes are unique; children are
/// sorted by id. Every edge mirrors a stored relation.
struct TraceTree {
  EntityId root;
  std::vector<EntityId> nodes;  // breadth-first discovery order, root first
  std::map<EntityId, std::vector<EntityId>> children;

  std::size_t edge_count() const noexcept;
  const std::vector<EntityId>& children_of(EntityId id) const;
};

/// loss -> hazards -> behaviors -> UCAs -> scenarios -> (insufficiencies, triggers).
/// Throws ModelError (E002) if the id is not a registered loss.
TraceTree trace_from_loss(const AnalysisModel& model, EntityId loss);

/// trigger -> scenarios -> UCAs -> behaviors -> hazards -> losses.
TraceTree trace_from_trigger(const AnalysisModel& model, EntityId trigger);

/// Indented text rendering; nodes reached a second time are printed once
/// more without their children and marked "(see above)".
std::string render_trace(const AnalysisModel& model, const TraceTree& tree);

/// One bridging chain, trigger down to loss, one line per element.
std::string render_link_chain(const AnalysisModel& model, const TriggerLink& link);

struct StatsReport {
  std::map<EntityKind, std::size_t> entities;
  std::size_t links = 0;

  std::size_t ucas_identified = 0;   // status retained or excluded
  std::size_t ucas_sotif_scope = 0;  // status retained
  std::size_t ucas_excluded = 0;
  std::size_t ucas_candidate = 0;

  std::size_t scenarios_retained = 0;  // sotif + needs_review
  std::size_t scenarios_excluded = 0;  // functional_safety

  std::map<EntityId, std::size_t> links_per_trigger;   // every trigger present
  std::map<EntityId, std::size_t> links_per_scenario;  // every scenario present
  std::size_t max_scenarios_per_trigger = 0;           // distinct scenarios
  std::size_t max_triggers_per_scenario = 0;           // distinct triggers
  std::size_t max_insufficiencies_per_chain = 0;       // per (trigger, scenario)

  bool operator==(const StatsReport&) const = default;
};

StatsReport stats(const AnalysisModel& model);

/// `key: value` lines, stable order.
std::string render_stats(const StatsReport& report);

}  // namespace stpa
