#include "stpa/classifier.hpp"

#include <algorithm>

namespace stpa {

Relevance classify_relevance(const LossScenario& scenario, const Taxonomy& taxonomy) {
  if (scenario.relevance) return *scenario.relevance;
  const CausalFactor* f = taxonomy.find(scenario.factor);
  if (f == nullptr) {
    throw ModelError("E002", "causal factor \"" + scenario.factor.str() + "\" of scenario " +
                                 scenario.id.str() + " is not in the taxonomy");
  }
  return to_relevance(f->default_relevance);
}

SotifPartition filter_sotif(const AnalysisModel& model, const Taxonomy& taxonomy) {
  SotifPartition p;
  for (const auto& [id, s] : model.scenarios) {
    if (classify_relevance(s, taxonomy) == Relevance::functional_safety) {
      p.excluded.push_back(s);
    } else {
      p.retained.push_back(s);
    }
  }
  return p;
}

AttachResult attach_trigger(const AnalysisModel& model, EntityId trigger, EntityId scenario,
                            EntityId insufficiency) {
  AttachResult r{model, {}};
  const std::pair<EntityId, EntityKind> ends[] = {{trigger, EntityKind::trigger},
                                                  {scenario, EntityKind::scenario},
                                                  {insufficiency, EntityKind::insufficiency}};
  for (const auto& [id, kind] : ends) {
    if (id.kind != kind || !model.contains(id)) {
      r.diagnostics.push_back(make_error("E002", "unknown reference \"" + id.str() + "\""));
    }
  }
  if (!r.diagnostics.empty()) return r;

  TriggerLink link{trigger, scenario, insufficiency};
  auto pos = std::lower_bound(r.model.links.begin(), r.model.links.end(), link);
  if (pos != r.model.links.end() && *pos == link) {
    r.diagnostics.push_back(make_warning("W302", "duplicate trigger link " + trigger.str() +
                                                     " -> " + scenario.str() + " via " +
                                                     insufficiency.str()));
    return r;
  }
  r.model.links.insert(pos, link);

  const Taxonomy taxonomy = taxonomy_for(model, false);
  const LossScenario& s = model.scenarios.at(scenario);
  if (taxonomy.find(s.factor) != nullptr &&
      classify_relevance(s, taxonomy) == Relevance::functional_safety) {
    r.diagnostics.push_back(make_warning(
        "W301", "trigger " + trigger.str() + " linked to functional-safety scenario " +
                    scenario.str()));
  }
  return r;
}

}  // namespace stpa
