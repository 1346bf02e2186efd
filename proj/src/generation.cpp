#include "stpa/generation.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <tuple>

namespace stpa {

namespace {

using CK = ComponentKind;

CausalFactor factor(std::uint32_t ordinal, std::string label, FactorCategory category,
                    std::vector<CK> loci, DefaultRelevance relevance, std::string description) {
  std::sort(loci.begin(), loci.end());
  return CausalFactor{EntityId{EntityKind::factor, ordinal}, std::move(label),
                      std::move(description), category, std::move(loci), relevance};
}

constexpr std::string_view kAlgorithmFlaw = "control_algorithm_flaw";
constexpr std::string_view kProcessModelFlaw = "process_model_flaw";
constexpr std::string_view kMergedFlaw = "controller_functional_flaw";

CausalFactor merged_factor(std::uint32_t ordinal, std::vector<CK> loci) {
  return factor(ordinal, std::string(kMergedFlaw), FactorCategory::controller, std::move(loci),
                DefaultRelevance::sotif_candidate,
                "Funktionaler Mangel des Reglers (Algorithmus oder Prozessmodell)");
}

void require_valid(const AnalysisModel& model, const char* operation) {
  if (!model.valid) {
    throw ModelError("E000", std::string(operation) + " refused: the model has errors");
  }
}

template <class T>
const T& resolve(const Registry<T>& registry, EntityId id) {
  auto it = registry.find(id);
  if (it == registry.end()) throw ModelError("E002", "unknown reference \"" + id.str() + "\"");
  return it->second;
}

std::string without_final_period(std::string s) {
  while (!s.empty() && (s.back() == '.' || s.back() == ' ')) s.pop_back();
  return s;
}

std::vector<EntityId> behaviors_for(const AnalysisModel& model, const ControlAction& action) {
  if (!action.behaviors.empty()) return action.behaviors;
  std::vector<EntityId> all;
  for (const auto& [id, b] : model.behaviors) all.push_back(id);
  return all;
}

const std::vector<EntityId>& role_members(const ControlLoop& loop, FactorCategory category,
                                          const std::vector<EntityId>& controller) {
  switch (category) {
    case FactorCategory::controller: return controller;
    case FactorCategory::feedback_path: return loop.feedback;
    case FactorCategory::control_path: return loop.control_path;
    case FactorCategory::process_input: return loop.processes;
  }
  return controller;
}

using ScenarioKey = std::tuple<EntityId, EntityId, EntityId, std::optional<EntityId>>;

}  // namespace

const CausalFactor* Taxonomy::find(EntityId id) const noexcept {
  for (const auto& f : factors) {
    if (f.id == id) return &f;
  }
  return nullptr;
}

Taxonomy default_taxonomy(bool merge_controller_flaws) {
  using FC = FactorCategory;
  using DR = DefaultRelevance;
  Taxonomy t;
  t.merge_controller_flaws = merge_controller_flaws;
  std::uint32_t n = 0;
  auto add = [&](std::string label, FC c, std::vector<CK> loci, DR r, std::string text) {
    t.factors.push_back(factor(++n, std::move(label), c, std::move(loci), r, std::move(text)));
  };
  if (merge_controller_flaws) {
    t.factors.push_back(merged_factor(++n, {CK::controller, CK::human_controller}));
  } else {
    add(std::string(kAlgorithmFlaw), FC::controller, {CK::controller, CK::human_controller},
        DR::sotif_candidate, "Unzulänglicher Regelalgorithmus");
    add(std::string(kProcessModelFlaw), FC::controller, {CK::controller, CK::human_controller},
        DR::sotif_candidate, "Unzutreffendes Prozessmodell des Reglers");
  }
  add("controller_physical_failure", FC::controller, {CK::controller}, DR::functional_safety,
      "Physischer Ausfall des Steuergeräts");
  add("sensor_insufficiency", FC::feedback_path, {CK::sensor}, DR::sotif_candidate,
      "Unzureichende Leistungsfähigkeit der Sensorik");
  add("sensor_physical_failure", FC::feedback_path, {CK::sensor}, DR::functional_safety,
      "Physischer Ausfall eines Sensors");
  add("feedback_transmission_failure", FC::feedback_path, {CK::sensor, CK::controller},
      DR::functional_safety, "Störung bei der Übertragung der Rückführung");
  add("feedback_inadequate", FC::feedback_path, {CK::sensor, CK::controller}, DR::sotif_candidate,
      "Rückführung unvollständig, ungenau oder verspätet");
  add("actuator_physical_failure", FC::control_path, {CK::actuator}, DR::functional_safety,
      "Physischer Ausfall der Aktuatorik");
  add("command_transmission_failure", FC::control_path, {CK::actuator, CK::controller},
      DR::functional_safety, "Störung bei der Übertragung von Befehlen");
  add("actuator_response_inadequate", FC::control_path, {CK::actuator}, DR::sotif_candidate,
      "Aktuatorik setzt Befehle unzureichend um");
  add("process_disturbance", FC::process_input, {CK::process}, DR::sotif_candidate,
      "Störeinfluss aus dem Prozess oder der Umgebung");
  add("other_controller_interference", FC::process_input, {CK::process}, DR::needs_review,
      "Einwirkung eines anderen Reglers auf den Prozess");
  return t;
}

Taxonomy taxonomy_for(const AnalysisModel& model, bool merge_controller_flaws) {
  if (model.factors.empty()) return default_taxonomy(merge_controller_flaws);

  Taxonomy t;
  t.merge_controller_flaws = merge_controller_flaws;
  for (const auto& [id, f] : model.factors) t.factors.push_back(f);
  if (!merge_controller_flaws) return t;

  auto is_pair = [](const CausalFactor& f) {
    return f.label == kAlgorithmFlaw || f.label == kProcessModelFlaw;
  };
  auto first = std::find_if(t.factors.begin(), t.factors.end(), is_pair);
  if (first == t.factors.end()) return t;

  std::vector<CK> loci;
  for (const auto& f : t.factors) {
    if (is_pair(f)) loci.insert(loci.end(), f.locus_kinds.begin(), f.locus_kinds.end());
  }
  std::sort(loci.begin(), loci.end());
  loci.erase(std::unique(loci.begin(), loci.end()), loci.end());

  CausalFactor merged = merged_factor(model.next_ordinal(EntityKind::factor), loci);
  for (const auto& f : t.factors) {
    if (f.label == kMergedFlaw) merged = f;
  }
  std::size_t position = static_cast<std::size_t>(first - t.factors.begin());
  std::vector<CausalFactor> out;
  for (std::size_t i = 0; i < t.factors.size(); ++i) {
    if (i == position) out.push_back(merged);
    if (is_pair(t.factors[i]) || t.factors[i].label == kMergedFlaw) continue;
    out.push_back(t.factors[i]);
  }
  t.factors = std::move(out);
  return t;
}

std::vector<UnsafeControlAction> enumerate_uca_candidates(const AnalysisModel& model) {
  require_valid(model, "UCA generation");

  std::map<std::tuple<EntityId, GuideWord, EntityId>, const UnsafeControlAction*> authored;
  for (const auto& [id, u] : model.ucas) authored.emplace(std::tuple{u.action, u.guide_word, u.behavior}, &u);

  std::vector<UnsafeControlAction> out;
  std::uint32_t next = model.next_ordinal(EntityKind::uca);
  for (const auto& [aid, action] : model.actions) {
    const auto behaviors = behaviors_for(model, action);
    for (GuideWord g : kGuideWords) {
      for (EntityId b : behaviors) {
        if (auto it = authored.find({aid, g, b}); it != authored.end()) {
          out.push_back(*it->second);
          continue;
        }
        UnsafeControlAction u;
        u.id = EntityId{EntityKind::uca, next++};
        u.action = aid;
        u.guide_word = g;
        u.behavior = b;
        u.narrative = render_uca_text(u, model);
        out.push_back(std::move(u));
      }
    }
  }
  return out;
}

std::string render_uca_text(const UnsafeControlAction& uca, const AnalysisModel& model) {
  const ControlAction& action = resolve(model.actions, uca.action);
  const HazardousBehavior& behavior = resolve(model.behaviors, uca.behavior);
  const Component& controller = resolve(model.components, action.source);
  if (!uca.narrative.empty()) return uca.narrative;

  std::string head = "Der " + controller.name + " gibt ";
  switch (uca.guide_word) {
    case GuideWord::not_provided: head += "keinen " + action.name; break;
    case GuideWord::provided_unsafe: head += "einen unsicheren " + action.name; break;
    case GuideWord::wrong_timing: head += "den " + action.name + " zu früh oder zu spät"; break;
    case GuideWord::wrong_duration: head += "den " + action.name + " zu lange oder zu kurz"; break;
  }
  return head + "; Folge: " + without_final_period(behavior.description) + ".";
}

ControlLoop control_loop(const AnalysisModel& model, const ControlAction& action) {
  ControlLoop loop;
  loop.controller = action.source;

  for (const auto& [id, f] : model.feedback) {
    if (f.kind == LinkKind::feedback && f.target == action.source) loop.feedback.push_back(f.source);
  }

  // Walk downstream from the target: controllers pass on through the
  // actions they issue, other components through `other` links, and the
  // walk ends at a process.
  std::set<EntityId> seen{action.source};
  std::deque<EntityId> queue{action.target};
  std::set<EntityId> path, processes;
  while (!queue.empty()) {
    EntityId id = queue.front();
    queue.pop_front();
    if (!seen.insert(id).second) continue;
    auto it = model.components.find(id);
    if (it == model.components.end()) continue;
    const Component& c = it->second;
    if (c.kind == CK::process) {
      processes.insert(id);
      continue;
    }
    path.insert(id);
    if (c.kind == CK::controller || c.kind == CK::human_controller) {
      for (const auto& [aid, a] : model.actions) {
        if (a.source == id) queue.push_back(a.target);
      }
    } else {
      for (const auto& [fid, f] : model.feedback) {
        if (f.kind == LinkKind::other && f.source == id) queue.push_back(f.target);
      }
    }
  }
  if (processes.empty()) {
    if (auto env = model.environment_process()) processes.insert(*env);
  }

  std::sort(loop.feedback.begin(), loop.feedback.end());
  loop.feedback.erase(std::unique(loop.feedback.begin(), loop.feedback.end()), loop.feedback.end());
  loop.control_path.assign(path.begin(), path.end());
  loop.processes.assign(processes.begin(), processes.end());
  return loop;
}

ScenarioExpansion expand_loss_scenarios(const AnalysisModel& model, const Taxonomy& taxonomy) {
  require_valid(model, "scenario expansion");

  std::map<ScenarioKey, const LossScenario*> authored;
  for (const auto& [id, s] : model.scenarios) {
    authored.emplace(ScenarioKey{s.uca, s.factor, s.locus, s.context}, &s);
  }

  ScenarioExpansion out;
  std::uint32_t next = model.next_ordinal(EntityKind::scenario);
  for (const auto& [uid, uca] : model.ucas) {
    if (uca.status != UcaStatus::retained) continue;
    const ControlAction& action = resolve(model.actions, uca.action);
    const ControlLoop loop = control_loop(model, action);
    const std::vector<EntityId> controller{loop.controller};

    std::vector<std::pair<EntityId, EntityId>> pairs;
    for (const auto& f : taxonomy.factors) {
      for (EntityId member : role_members(loop, f.category, controller)) {
        auto c = model.components.find(member);
        if (c == model.components.end()) continue;
        if (std::find(f.locus_kinds.begin(), f.locus_kinds.end(), c->second.kind) !=
            f.locus_kinds.end()) {
          pairs.emplace_back(f.id, member);
        }
      }
    }
    if (pairs.empty()) {
      out.diagnostics.push_back(make_warning(
          "W201", "UCA " + uid.str() + " has no component in its control loop that any causal factor applies to",
          model.sources.declaration(uid)));
      continue;
    }

    std::vector<std::optional<EntityId>> contexts;
    for (const auto& [cid, ctx] : model.contexts) {
      const auto& bs = ctx.applicable_behaviors;
      if (std::find(bs.begin(), bs.end(), uca.behavior) != bs.end()) contexts.emplace_back(cid);
    }
    if (contexts.empty()) contexts.emplace_back(std::nullopt);

    for (const auto& ctx : contexts) {
      for (const auto& [fid, locus] : pairs) {
        if (auto it = authored.find({uid, fid, locus, ctx}); it != authored.end()) {
          out.scenarios.push_back(*it->second);
          continue;
        }
        LossScenario s;
        s.id = EntityId{EntityKind::scenario, next++};
        s.uca = uid;
        s.factor = fid;
        s.locus = locus;
        s.context = ctx;
        s.narrative = render_scenario_text(s, model, taxonomy);
        out.scenarios.push_back(std::move(s));
      }
    }
  }
  return out;
}

std::string render_scenario_text(const LossScenario& scenario, const AnalysisModel& model,
                                 const Taxonomy& taxonomy) {
  if (!scenario.narrative.empty()) return scenario.narrative;
  const CausalFactor* f = taxonomy.find(scenario.factor);
  if (f == nullptr) {
    auto it = model.factors.find(scenario.factor);
    if (it == model.factors.end()) {
      throw ModelError("E002", "unknown reference \"" + scenario.factor.str() + "\"");
    }
    f = &it->second;
  }
  const Component& locus = resolve(model.components, scenario.locus);
  const UnsafeControlAction& uca = resolve(model.ucas, scenario.uca);

  std::string text = "Ursache: " + (f->description.empty() ? f->label : f->description) + " (" +
                     locus.name + ").";
  if (scenario.context) {
    text += " Situation: " +
            without_final_period(resolve(model.contexts, *scenario.context).description) + ".";
  }
  return text + " " + uca.id.str() + ": " + render_uca_text(uca, model);
}

}  // namespace stpa
