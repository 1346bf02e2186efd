#include "stpa/trace.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <set>
#include <sstream>

#include "stpa/classifier.hpp"
#include "stpa/generation.hpp"

namespace stpa {

namespace {

using Expand = std::function<std::vector<EntityId>(EntityId)>;

TraceTree breadth_first(EntityId root, const Expand& expand) {
  TraceTree t;
  t.root = root;
  std::set<EntityId> seen{root};
  std::deque<EntityId> queue{root};
  t.nodes.push_back(root);
  while (!queue.empty()) {
    EntityId id = queue.front();
    queue.pop_front();
    std::vector<EntityId> kids = expand(id);
    std::sort(kids.begin(), kids.end());
    kids.erase(std::unique(kids.begin(), kids.end()), kids.end());
    for (EntityId k : kids) {
      if (seen.insert(k).second) {
        t.nodes.push_back(k);
        queue.push_back(k);
      }
    }
    if (!kids.empty()) t.children[id] = std::move(kids);
  }
  return t;
}

template <class T, class Pred>
std::vector<EntityId> select(const Registry<T>& registry, Pred pred) {
  std::vector<EntityId> out;
  for (const auto& [id, e] : registry) {
    if (pred(e)) out.push_back(id);
  }
  return out;
}

bool has(const std::vector<EntityId>& v, EntityId id) {
  return std::find(v.begin(), v.end(), id) != v.end();
}

void require(const AnalysisModel& model, EntityId id, EntityKind kind) {
  if (id.kind != kind || !model.contains(id)) {
    throw ModelError("E002", "unknown " + std::string(kind_name(kind)) + " \"" + id.str() + "\"");
  }
}

// Display text for one node; UCAs and scenarios without authored text get
// their generated sentence.
std::string node_text(const AnalysisModel& model, EntityId id) {
  std::string text = entity_text(model, id);
  if (!text.empty()) return text;
  try {
    if (id.kind == EntityKind::uca) return render_uca_text(model.ucas.at(id), model);
    if (id.kind == EntityKind::scenario) {
      return render_scenario_text(model.scenarios.at(id), model, taxonomy_for(model, false));
    }
  } catch (const ModelError&) {
  }
  return text;
}

}  // namespace

std::size_t TraceTree::edge_count() const noexcept {
  std::size_t n = 0;
  for (const auto& [id, kids] : children) n += kids.size();
  return n;
}

const std::vector<EntityId>& TraceTree::children_of(EntityId id) const {
  static const std::vector<EntityId> none;
  auto it = children.find(id);
  return it == children.end() ? none : it->second;
}

TraceTree trace_from_loss(const AnalysisModel& m, EntityId loss) {
  require(m, loss, EntityKind::loss);
  return breadth_first(loss, [&m](EntityId id) -> std::vector<EntityId> {
    switch (id.kind) {
      case EntityKind::loss:
        return select(m.hazards, [&](const Hazard& h) { return has(h.losses, id); });
      case EntityKind::hazard:
        return select(m.behaviors, [&](const HazardousBehavior& b) { return has(b.hazards, id); });
      case EntityKind::behavior:
        return select(m.ucas, [&](const UnsafeControlAction& u) { return u.behavior == id; });
      case EntityKind::uca:
        return select(m.scenarios, [&](const LossScenario& s) { return s.uca == id; });
      case EntityKind::scenario: {
        std::vector<EntityId> out;
        for (const auto& l : m.links) {
          if (l.scenario != id) continue;
          out.push_back(l.trigger);
          out.push_back(l.insufficiency);
        }
        return out;
      }
      default: return {};
    }
  });
}

TraceTree trace_from_trigger(const AnalysisModel& m, EntityId trigger) {
  require(m, trigger, EntityKind::trigger);
  return breadth_first(trigger, [&m](EntityId id) -> std::vector<EntityId> {
    std::vector<EntityId> out;
    switch (id.kind) {
      case EntityKind::trigger:
        for (const auto& l : m.links) {
          if (l.trigger == id) out.push_back(l.scenario);
        }
        break;
      case EntityKind::scenario:
        if (auto it = m.scenarios.find(id); it != m.scenarios.end()) out.push_back(it->second.uca);
        break;
      case EntityKind::uca:
        if (auto it = m.ucas.find(id); it != m.ucas.end()) out.push_back(it->second.behavior);
        break;
      case EntityKind::behavior:
        if (auto it = m.behaviors.find(id); it != m.behaviors.end()) out = it->second.hazards;
        break;
      case EntityKind::hazard:
        if (auto it = m.hazards.find(id); it != m.hazards.end()) out = it->second.losses;
        break;
      default: break;
    }
    // Only stored entities become nodes.
    out.erase(std::remove_if(out.begin(), out.end(), [&m](EntityId e) { return !m.contains(e); }),
              out.end());
    return out;
  });
}

std::string render_trace(const AnalysisModel& model, const TraceTree& tree) {
  std::ostringstream out;
  std::set<EntityId> printed;
  std::function<void(EntityId, std::size_t)> visit = [&](EntityId id, std::size_t depth) {
    out << std::string(depth * 2, ' ') << id.str() << ' ' << node_text(model, id);
    if (!printed.insert(id).second) {
      out << " (see above)\n";
      return;
    }
    out << '\n';
    for (EntityId k : tree.children_of(id)) visit(k, depth + 1);
  };
  visit(tree.root, 0);
  return out.str();
}

std::string render_link_chain(const AnalysisModel& model, const TriggerLink& link) {
  require(model, link.trigger, EntityKind::trigger);
  require(model, link.scenario, EntityKind::scenario);
  require(model, link.insufficiency, EntityKind::insufficiency);

  std::ostringstream out;
  auto line = [&](EntityId id) {
    out << kind_name(id.kind) << ' ' << id.str() << ": " << node_text(model, id) << '\n';
  };
  line(link.trigger);
  line(link.insufficiency);
  line(link.scenario);
  const LossScenario& s = model.scenarios.at(link.scenario);
  if (!model.ucas.count(s.uca)) return out.str();
  line(s.uca);
  const EntityId behavior = model.ucas.at(s.uca).behavior;
  if (!model.behaviors.count(behavior)) return out.str();
  line(behavior);
  std::set<EntityId> losses;
  for (EntityId h : model.behaviors.at(behavior).hazards) {
    if (!model.hazards.count(h)) continue;
    line(h);
    for (EntityId l : model.hazards.at(h).losses) losses.insert(l);
  }
  for (EntityId l : losses) {
    if (model.losses.count(l)) line(l);
  }
  return out.str();
}

StatsReport stats(const AnalysisModel& model) {
  StatsReport r;
  for (EntityKind k : kAllEntityKinds) r.entities[k] = model.count(k);
  r.links = model.links.size();

  for (const auto& [id, u] : model.ucas) {
    switch (u.status) {
      case UcaStatus::retained: ++r.ucas_sotif_scope; break;
      case UcaStatus::excluded: ++r.ucas_excluded; break;
      case UcaStatus::candidate: ++r.ucas_candidate; break;
    }
  }
  r.ucas_identified = r.ucas_sotif_scope + r.ucas_excluded;

  const Taxonomy taxonomy = taxonomy_for(model, false);
  for (const auto& [id, s] : model.scenarios) {
    bool excluded = false;
    if (s.relevance) {
      excluded = *s.relevance == Relevance::functional_safety;
    } else if (const CausalFactor* f = taxonomy.find(s.factor)) {
      excluded = f->default_relevance == DefaultRelevance::functional_safety;
    }
    ++(excluded ? r.scenarios_excluded : r.scenarios_retained);
  }

  for (const auto& [id, t] : model.triggers) r.links_per_trigger[id] = 0;
  for (const auto& [id, s] : model.scenarios) r.links_per_scenario[id] = 0;
  std::map<EntityId, std::set<EntityId>> scenarios_of, triggers_of;
  std::map<std::pair<EntityId, EntityId>, std::size_t> chain;
  for (const auto& l : model.links) {
    ++r.links_per_trigger[l.trigger];
    ++r.links_per_scenario[l.scenario];
    scenarios_of[l.trigger].insert(l.scenario);
    triggers_of[l.scenario].insert(l.trigger);
    ++chain[{l.trigger, l.scenario}];
  }
  for (const auto& [id, s] : scenarios_of) {
    r.max_scenarios_per_trigger = std::max(r.max_scenarios_per_trigger, s.size());
  }
  for (const auto& [id, t] : triggers_of) {
    r.max_triggers_per_scenario = std::max(r.max_triggers_per_scenario, t.size());
  }
  for (const auto& [key, n] : chain) {
    r.max_insufficiencies_per_chain = std::max(r.max_insufficiencies_per_chain, n);
  }
  return r;
}

std::string render_stats(const StatsReport& r) {
  std::ostringstream out;
  for (const auto& [kind, n] : r.entities) out << registry_name(kind) << ": " << n << '\n';
  out << "links: " << r.links << '\n'
      << "ucas_identified: " << r.ucas_identified << '\n'
      << "ucas_sotif_scope: " << r.ucas_sotif_scope << '\n'
      << "ucas_excluded: " << r.ucas_excluded << '\n'
      << "ucas_candidate: " << r.ucas_candidate << '\n'
      << "sotif_retained: " << r.scenarios_retained << '\n'
      << "sotif_excluded: " << r.scenarios_excluded << '\n'
      << "max_scenarios_per_trigger: " << r.max_scenarios_per_trigger << '\n'
      << "max_triggers_per_scenario: " << r.max_triggers_per_scenario << '\n'
      << "max_insufficiencies_per_chain: " << r.max_insufficiencies_per_chain << '\n';
  return out.str();
}

}  // namespace stpa
