#pragma once

#include <vector>

#include "stpa/diagnostic.hpp"
#include "stpa/model.hpp"

namespace stpa {

/// Ordered causal-factor catalog used to expand loss scenarios.
struct Taxonomy {
  std::vector<CausalFactor> factors;
  bool merge_controller_flaws = false;

  const CausalFactor* find(EntityId id) const noexcept;
};

/// Built-in causal model (12 factors, or 11 with the two controller flaws
/// merged into controller_functional_flaw). Ids are CF-1.. in listed order.
Taxonomy default_taxonomy(bool merge_controller_flaws);

/// The model's declared factors when it has any, else the default
/// taxonomy. With merging, control_algorithm_flaw and process_model_flaw
/// are replaced (at the position of the first) by controller_functional_flaw,
/// reusing a declared factor with that label or taking the next free id.
Taxonomy taxonomy_for(const AnalysisModel& model, bool merge_controller_flaws);

/// One entry per (action, guide word, applicable behavior), action-major,
/// then catalog order, then behavior id. Authored UCAs with the same key are
/// returned as they are; the rest are new candidates numbered from the next
/// free UCA ordinal. Throws ModelError on an invalid model.
std::vector<UnsafeControlAction> enumerate_uca_candidates(const AnalysisModel& model);

/// Authored narrative when present, else the guide word's sentence frame.
/// Throws ModelError if the UCA's references do not resolve.
std::string render_uca_text(const UnsafeControlAction& uca, const AnalysisModel& model);

/// Components around a control action, grouped by the role a causal-factor
/// category looks at.
struct ControlLoop {
  EntityId controller;                 // issuing controller
  std::vector<EntityId> feedback;      // sources of feedback links into it
  std::vector<EntityId> control_path;  // target and downstream path (non-process)
  std::vector<EntityId> processes;     // controlled processes at the end of the path
};

ControlLoop control_loop(const AnalysisModel& model, const ControlAction& action);

struct ScenarioExpansion {
  std::vector<LossScenario> scenarios;
  std::vector<Diagnostic> diagnostics;  // W201 per UCA without applicable loci
};

/// For each retained UCA, each applicable context (or none), each
/// (factor, locus) pair in taxonomy order: one scenario. Authored scenarios
/// with the same (uca, factor, locus, context) are kept; new skeletons get
/// the next free ordinals and no relevance override. Throws on invalid model.
ScenarioExpansion expand_loss_scenarios(const AnalysisModel& model, const Taxonomy& taxonomy);

std::string render_scenario_text(const LossScenario& scenario, const AnalysisModel& model,
                                 const Taxonomy& taxonomy);

}  // namespace stpa
