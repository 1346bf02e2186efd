#pragma once

#include <vector>

#include "stpa/diagnostic.hpp"
#include "stpa/generation.hpp"
#include "stpa/model.hpp"

namespace stpa {

/// Authored override if present, else the factor's default relevance.
/// Throws ModelError when the factor is not in the taxonomy.
Relevance classify_relevance(const LossScenario& scenario, const Taxonomy& taxonomy);

struct SotifPartition {
  std::vector<LossScenario> retained;  // sotif and needs_review
  std::vector<LossScenario> excluded;  // functional_safety
};

SotifPartition filter_sotif(const AnalysisModel& model, const Taxonomy& taxonomy);

struct AttachResult {
  AnalysisModel model;
  std::vector<Diagnostic> diagnostics;
};

/// Copy-on-write: returns a new model with the link added. Dangling ids
/// give E002 and an unchanged copy; a duplicate triple gives W302; linking
/// a functional-safety scenario gives W301 but is stored.
AttachResult attach_trigger(const AnalysisModel& model, EntityId trigger, EntityId scenario,
                            EntityId insufficiency);

}  // namespace stpa
