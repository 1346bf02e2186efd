#include "stpa/integrity.hpp"

#include <algorithm>
#include <set>
#include <string>

namespace stpa {

namespace {

std::string in_quotes(std::string_view s) {
  std::string out = "\"";
  out += s;
  out += '"';
  return out;
}

std::string located_at(const SourceSpan& s) {
  return s.file + ":" + std::to_string(s.line) + ":" + std::to_string(s.column);
}

std::optional<EntityKind> kind_for(DeclKeyword k) {
  switch (k) {
    case DeclKeyword::loss: return EntityKind::loss;
    case DeclKeyword::hazard: return EntityKind::hazard;
    case DeclKeyword::behavior: return EntityKind::behavior;
    case DeclKeyword::controller:
    case DeclKeyword::human:
    case DeclKeyword::sensor:
    case DeclKeyword::actuator:
    case DeclKeyword::process: return EntityKind::component;
    case DeclKeyword::action: return EntityKind::action;
    case DeclKeyword::feedback: return EntityKind::feedback;
    case DeclKeyword::uca: return EntityKind::uca;
    case DeclKeyword::factor: return EntityKind::factor;
    case DeclKeyword::context: return EntityKind::context;
    case DeclKeyword::scenario: return EntityKind::scenario;
    case DeclKeyword::trigger: return EntityKind::trigger;
    case DeclKeyword::insufficiency: return EntityKind::insufficiency;
    case DeclKeyword::link: return std::nullopt;
  }
  return std::nullopt;
}

ComponentKind component_kind_for(DeclKeyword k) {
  switch (k) {
    case DeclKeyword::human: return ComponentKind::human_controller;
    case DeclKeyword::sensor: return ComponentKind::sensor;
    case DeclKeyword::actuator: return ComponentKind::actuator;
    case DeclKeyword::process: return ComponentKind::process;
    default: return ComponentKind::controller;
  }
}

template <class T>
void sort_unique(std::vector<T>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

// Converts one declaration into an entity. Any failure marks the entity
// as dropped; the first failure is reported and the rest are skipped.
class Builder {
 public:
  AnalysisModel model;
  std::vector<Diagnostic> diagnostics;
  std::set<EntityId> dropped;

  void add(const Declaration& d) {
    if (!check_attribute_names(d)) return;
    if (d.keyword == DeclKeyword::link) {
      add_link(d);
      return;
    }
    const EntityKind kind = *kind_for(d.keyword);
    auto id = EntityId::parse(d.id);
    if (!id || id->kind != kind) {
      error("E006",
            "invalid " + std::string(kind_name(kind)) + " id " + in_quotes(d.id) + " (expected " +
                std::string(id_prefix(kind)) + "-<n>)",
            d.id_span);
      return;
    }
    if (auto first = seen_.find(*id); first != seen_.end()) {
      error("E001", "duplicate id " + in_quotes(d.id) + " (first declared at " +
                        located_at(first->second) + ")",
            d.id_span);
      return;
    }
    seen_.emplace(*id, d.span);
    failed_ = false;
    build(d, *id);
    if (failed_) {
      dropped.insert(*id);
      return;
    }
    model.sources.declarations[*id] = d.span;
    for (const auto& [key, value] : d.attributes) {
      model.sources.attributes[{*id, key}] = spans_in_model_order(value);
    }
  }

  // Reference lists are stored sorted and unique, so their item spans are
  // reordered the same way (first occurrence wins).
  static std::vector<SourceSpan> spans_in_model_order(const AttrValue& value) {
    if (value.item_spans.empty()) return {value.span};
    if (!value.is_list) return value.item_spans;
    std::vector<std::pair<EntityId, std::size_t>> order;
    for (std::size_t i = 0; i < value.items.size(); ++i) {
      auto ref = EntityId::parse(value.items[i]);
      if (!ref) return value.item_spans;
      order.emplace_back(*ref, i);
    }
    std::stable_sort(order.begin(), order.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    order.erase(std::unique(order.begin(), order.end(),
                            [](const auto& a, const auto& b) { return a.first == b.first; }),
                order.end());
    std::vector<SourceSpan> out;
    for (const auto& [ref, i] : order) out.push_back(value.item_spans[i]);
    return out;
  }

  void finish() { sort_unique(model.links); }

 private:
  std::map<EntityId, SourceSpan> seen_;
  std::set<TriggerLink> link_set_;
  bool failed_ = false;

  void error(std::string code, std::string message, const SourceSpan& at) {
    diagnostics.push_back(make_error(std::move(code), std::move(message), at));
  }
  void fail(std::string code, std::string message, const SourceSpan& at) {
    if (!failed_) error(std::move(code), std::move(message), at);
    failed_ = true;
  }

  bool check_attribute_names(const Declaration& d) {
    const auto& allowed = allowed_attributes(d.keyword);
    for (const auto& [key, value] : d.attributes) {
      if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
        error("E114",
              "unknown attribute " + in_quotes(key) + " for " + std::string(keyword_text(d.keyword)),
              value.span);
        return false;
      }
    }
    for (auto key : required_attributes(d.keyword)) {
      if (!d.find(key)) {
        error("E111",
              std::string(keyword_text(d.keyword)) + " " + d.id + " is missing required attribute " +
                  in_quotes(key),
              d.span);
        return false;
      }
    }
    return true;
  }

  // Single-valued attribute; a list must hold exactly one item.
  const std::string* single(const Declaration& d, std::string_view key) {
    const AttrValue* v = d.find(key);
    if (!v) return nullptr;
    if (v->items.size() != 1) {
      fail("E003",
           "attribute " + in_quotes(key) + " takes exactly one value, got " +
               std::to_string(v->items.size()),
           v->span);
      return nullptr;
    }
    return &v->items.front();
  }

  std::string text(const Declaration& d, std::string_view key = "text") {
    const std::string* s = single(d, key);
    return s ? *s : std::string{};
  }

  std::optional<EntityId> reference(const Declaration& d, std::string_view key) {
    const std::string* s = single(d, key);
    if (!s) return std::nullopt;
    auto id = EntityId::parse(*s);
    if (!id) fail("E006", "malformed reference " + in_quotes(*s), d.find(key)->item_spans.front());
    return id;
  }

  std::vector<EntityId> references(const Declaration& d, std::string_view key) {
    std::vector<EntityId> out;
    const AttrValue* v = d.find(key);
    if (!v) return out;
    for (std::size_t i = 0; i < v->items.size(); ++i) {
      auto id = EntityId::parse(v->items[i]);
      if (!id) {
        fail("E006", "malformed reference " + in_quotes(v->items[i]),
             i < v->item_spans.size() ? v->item_spans[i] : v->span);
        continue;
      }
      out.push_back(*id);
    }
    sort_unique(out);
    return out;
  }

  template <class E>
  std::optional<E> enumerated(std::string_view key, const std::string& item, const SourceSpan& at) {
    auto value = parse_token<E>(item);
    if (!value) fail("E005", "invalid value " + in_quotes(item) + " for attribute " + in_quotes(key), at);
    return value;
  }

  template <class E>
  std::optional<E> enumerated(const Declaration& d, std::string_view key) {
    const std::string* s = single(d, key);
    if (!s) return std::nullopt;
    return enumerated<E>(key, *s, d.find(key)->item_spans.front());
  }

  void build(const Declaration& d, EntityId id) {
    switch (d.keyword) {
      case DeclKeyword::loss: {
        Loss l{id, text(d)};
        if (!failed_) model.losses[id] = std::move(l);
        break;
      }
      case DeclKeyword::hazard: {
        Hazard h{id, text(d), references(d, "losses")};
        if (!failed_) model.hazards[id] = std::move(h);
        break;
      }
      case DeclKeyword::behavior: {
        HazardousBehavior b{id, text(d), references(d, "hazards")};
        if (!failed_) model.behaviors[id] = std::move(b);
        break;
      }
      case DeclKeyword::controller:
      case DeclKeyword::human:
      case DeclKeyword::sensor:
      case DeclKeyword::actuator:
      case DeclKeyword::process: {
        Component c{id, text(d), component_kind_for(d.keyword), false};
        if (const std::string* env = single(d, "environment")) {
          if (*env == "true") {
            c.environment = true;
          } else if (*env != "false") {
            fail("E005", "invalid value " + in_quotes(*env) + " for attribute \"environment\"",
                 d.find("environment")->span);
          }
        }
        if (!failed_) model.components[id] = std::move(c);
        break;
      }
      case DeclKeyword::action: {
        ControlAction a;
        a.id = id;
        a.name = text(d);
        auto source = reference(d, "from");
        auto target = reference(d, "to");
        a.behaviors = references(d, "behaviors");
        if (failed_) break;
        a.source = *source;
        a.target = *target;
        model.actions[id] = std::move(a);
        break;
      }
      case DeclKeyword::feedback: {
        FeedbackLink f;
        f.id = id;
        f.name = text(d);
        auto source = reference(d, "from");
        auto target = reference(d, "to");
        if (d.find("kind")) {
          if (auto k = enumerated<LinkKind>(d, "kind")) f.kind = *k;
        }
        if (failed_) break;
        f.source = *source;
        f.target = *target;
        model.feedback[id] = std::move(f);
        break;
      }
      case DeclKeyword::uca: {
        UnsafeControlAction u;
        u.id = id;
        auto action = reference(d, "action");
        auto guide = enumerated<GuideWord>(d, "guide");
        auto behavior = reference(d, "behavior");
        if (d.find("status")) {
          if (auto s = enumerated<UcaStatus>(d, "status")) u.status = *s;
        }
        if (d.find("reason")) u.exclusion_reason = text(d, "reason");
        u.narrative = text(d);
        if (failed_) break;
        u.action = *action;
        u.guide_word = *guide;
        u.behavior = *behavior;
        model.ucas[id] = std::move(u);
        break;
      }
      case DeclKeyword::factor: {
        CausalFactor f;
        f.id = id;
        f.label = text(d, "label");
        f.description = text(d);
        if (auto c = enumerated<FactorCategory>(d, "category")) f.category = *c;
        if (auto r = enumerated<DefaultRelevance>(d, "relevance")) f.default_relevance = *r;
        const AttrValue* loci = d.find("loci");
        for (std::size_t i = 0; i < loci->items.size(); ++i) {
          const SourceSpan& at = i < loci->item_spans.size() ? loci->item_spans[i] : loci->span;
          if (auto k = enumerated<ComponentKind>("loci", loci->items[i], at)) {
            f.locus_kinds.push_back(*k);
          }
        }
        sort_unique(f.locus_kinds);
        if (!failed_) model.factors[id] = std::move(f);
        break;
      }
      case DeclKeyword::context: {
        ScenarioContext c{id, text(d), references(d, "behaviors")};
        if (!failed_) model.contexts[id] = std::move(c);
        break;
      }
      case DeclKeyword::scenario: {
        LossScenario s;
        s.id = id;
        auto uca = reference(d, "uca");
        auto factor = reference(d, "factor");
        auto locus = reference(d, "locus");
        if (d.find("context")) s.context = reference(d, "context");
        if (d.find("relevance")) s.relevance = enumerated<Relevance>(d, "relevance");
        s.narrative = text(d);
        if (failed_) break;
        s.uca = *uca;
        s.factor = *factor;
        s.locus = *locus;
        model.scenarios[id] = std::move(s);
        break;
      }
      case DeclKeyword::trigger: {
        TriggeringCondition t{id, text(d)};
        if (!failed_) model.triggers[id] = std::move(t);
        break;
      }
      case DeclKeyword::insufficiency: {
        FunctionalInsufficiency f;
        f.id = id;
        f.description = text(d);
        auto locus = reference(d, "locus");
        if (failed_) break;
        f.locus = *locus;
        model.insufficiencies[id] = std::move(f);
        break;
      }
      case DeclKeyword::link: break;
    }
  }

  void add_link(const Declaration& d) {
    auto trigger = EntityId::parse(d.id);
    if (!trigger || trigger->kind != EntityKind::trigger) {
      error("E006", "invalid trigger id " + in_quotes(d.id) + " in link (expected TC-<n>)",
            d.id_span);
      return;
    }
    failed_ = false;
    auto scenario = reference(d, "scenario");
    auto insufficiency = reference(d, "insufficiency");
    if (failed_) return;
    TriggerLink link{*trigger, *scenario, *insufficiency};
    if (!link_set_.insert(link).second) {
      diagnostics.push_back(make_warning("W302",
                                         "duplicate trigger link " + trigger->str() + " -> " +
                                             scenario->str() + " via " + insufficiency->str(),
                                         d.span));
      return;
    }
    model.links.push_back(link);
    const AttrValue* s = d.find("scenario");
    const AttrValue* f = d.find("insufficiency");
    model.sources.links[link] = {d.span, d.id_span, s->span, f->span};
  }
};

class Checker {
 public:
  Checker(const AnalysisModel& m, const std::set<EntityId>& dropped) : m_(m), dropped_(dropped) {}

  std::vector<Diagnostic> run() {
    check_losses();
    check_hazards();
    check_behaviors();
    check_components();
    check_actions();
    check_feedback();
    check_ucas();
    check_factors();
    check_contexts();
    check_scenarios();
    check_triggers();
    check_insufficiencies();
    check_links();
    return std::move(out_);
  }

 private:
  const AnalysisModel& m_;
  const std::set<EntityId>& dropped_;
  std::vector<Diagnostic> out_;

  std::optional<SourceSpan> at(EntityId id) const { return m_.sources.declaration(id); }
  std::optional<SourceSpan> at(EntityId id, const char* key, std::size_t index = 0) const {
    return m_.sources.attribute(id, key, index);
  }

  void error(const char* code, std::string message, std::optional<SourceSpan> loc) {
    out_.push_back(make_error(code, std::move(message), std::move(loc)));
  }
  void warning(const char* code, std::string message, std::optional<SourceSpan> loc) {
    out_.push_back(make_warning(code, std::move(message), std::move(loc)));
  }

  // E002 unless the reference resolves to the expected kind. References to
  // entities dropped during assembly were already reported there.
  bool resolves(EntityId ref, EntityKind expected, std::optional<SourceSpan> loc) {
    if (dropped_.count(ref) != 0) return false;
    if (ref.kind != expected) {
      error("E002",
            "reference " + in_quotes(ref.str()) + " is not a " + std::string(kind_name(expected)),
            std::move(loc));
      return false;
    }
    if (!m_.contains(ref)) {
      error("E002", "unknown reference " + in_quotes(ref.str()), std::move(loc));
      return false;
    }
    return true;
  }

  void non_empty(EntityId id, const std::string& text, const char* what) {
    if (text.empty()) {
      error("E007", std::string(kind_name(id.kind)) + " " + id.str() + " has an empty " + what,
            at(id));
    }
  }

  void check_losses() {
    for (const auto& [id, l] : m_.losses) non_empty(id, l.description, "description");
  }

  void check_hazards() {
    std::set<EntityId> with_behavior;
    for (const auto& [bid, b] : m_.behaviors) {
      with_behavior.insert(b.hazards.begin(), b.hazards.end());
    }
    for (const auto& [id, h] : m_.hazards) {
      non_empty(id, h.description, "description");
      for (std::size_t i = 0; i < h.losses.size(); ++i) {
        resolves(h.losses[i], EntityKind::loss, at(id, "losses", i));
      }
      if (h.losses.empty()) {
        warning("W101", "hazard " + id.str() + " is not mapped to any loss", at(id));
      }
      if (with_behavior.count(id) == 0) {
        warning("W103", "hazard " + id.str() + " has no hazardous behavior", at(id));
      }
    }
  }

  void check_behaviors() {
    for (const auto& [id, b] : m_.behaviors) {
      non_empty(id, b.description, "description");
      for (std::size_t i = 0; i < b.hazards.size(); ++i) {
        resolves(b.hazards[i], EntityKind::hazard, at(id, "hazards", i));
      }
      if (b.hazards.empty()) {
        warning("W102", "hazardous behavior " + id.str() + " is not mapped to any hazard", at(id));
      }
    }
  }

  void check_components() {
    bool seen_designated = false;
    for (const auto& [id, c] : m_.components) {
      non_empty(id, c.name, "name");
      if (c.environment && c.kind != ComponentKind::process) {
        error("E004", "component " + id.str() + " is not a process but is marked environment",
              at(id, "environment"));
      } else if (c.environment) {
        if (seen_designated) {
          error("E010", "more than one environment process (" + id.str() + ")",
                at(id, "environment"));
        }
        seen_designated = true;
      }
    }
    if (!m_.components.empty() && !m_.environment_process()) {
      warning("W106", "no environment process designated", std::nullopt);
    }
  }

  const Component* component(EntityId id) const {
    auto it = m_.components.find(id);
    return it == m_.components.end() ? nullptr : &it->second;
  }

  void check_actions() {
    for (const auto& [id, a] : m_.actions) {
      non_empty(id, a.name, "name");
      bool src = resolves(a.source, EntityKind::component, at(id, "from"));
      bool dst = resolves(a.target, EntityKind::component, at(id, "to"));
      for (std::size_t i = 0; i < a.behaviors.size(); ++i) {
        resolves(a.behaviors[i], EntityKind::behavior, at(id, "behaviors", i));
      }
      if (src) {
        auto k = component(a.source)->kind;
        if (k != ComponentKind::controller && k != ComponentKind::human_controller) {
          error("E004",
                "control action " + id.str() + " is issued by " + a.source.str() + " of kind " +
                    std::string(to_token(k)) + "; expected controller or human_controller",
                at(id, "from"));
        }
      }
      if (dst) {
        auto k = component(a.target)->kind;
        if (k != ComponentKind::controller && k != ComponentKind::actuator &&
            k != ComponentKind::process) {
          error("E004",
                "control action " + id.str() + " targets " + a.target.str() + " of kind " +
                    std::string(to_token(k)) + "; expected controller, actuator or process",
                at(id, "to"));
        }
      }
      if (src && dst && a.source == a.target) {
        error("E004", "control action " + id.str() + " has the same source and target",
              at(id, "to"));
      }
    }
  }

  void check_feedback() {
    for (const auto& [id, f] : m_.feedback) {
      non_empty(id, f.name, "name");
      bool src = resolves(f.source, EntityKind::component, at(id, "from"));
      bool dst = resolves(f.target, EntityKind::component, at(id, "to"));
      if (dst && f.kind == LinkKind::feedback) {
        auto k = component(f.target)->kind;
        if (k != ComponentKind::controller && k != ComponentKind::human_controller) {
          error("E004",
                "feedback " + id.str() + " ends at " + f.target.str() + " of kind " +
                    std::string(to_token(k)) + "; feedback must reach a controller",
                at(id, "to"));
        }
      }
      if (src && dst && f.source == f.target) {
        error("E004", "link " + id.str() + " has the same source and target", at(id, "to"));
      }
    }
  }

  void check_ucas() {
    std::set<EntityId> with_scenario;
    for (const auto& [sid, s] : m_.scenarios) with_scenario.insert(s.uca);
    std::map<std::tuple<EntityId, GuideWord, EntityId>, EntityId> keys;
    for (const auto& [id, u] : m_.ucas) {
      resolves(u.action, EntityKind::action, at(id, "action"));
      resolves(u.behavior, EntityKind::behavior, at(id, "behavior"));
      if (u.status == UcaStatus::excluded &&
          (!u.exclusion_reason || u.exclusion_reason->empty())) {
        error("E008", "excluded UCA " + id.str() + " has no exclusion reason", at(id, "status"));
      }
      if (u.status == UcaStatus::retained && with_scenario.count(id) == 0) {
        warning("W104", "retained UCA " + id.str() + " has no loss scenario", at(id));
      }
      auto [it, inserted] = keys.emplace(std::make_tuple(u.action, u.guide_word, u.behavior), id);
      if (!inserted) {
        warning("W107",
                "UCA " + id.str() + " repeats action, guide word and behavior of " +
                    it->second.str(),
                at(id));
      }
    }
  }

  void check_factors() {
    std::map<std::string, EntityId> labels;
    for (const auto& [id, f] : m_.factors) {
      non_empty(id, f.label, "label");
      if (f.locus_kinds.empty()) {
        error("E003", "causal factor " + id.str() + " applies to no component kind",
              at(id, "loci"));
      }
      auto [it, inserted] = labels.emplace(f.label, id);
      if (!inserted && !f.label.empty()) {
        warning("W108", "causal factor " + id.str() + " repeats label " + in_quotes(f.label) +
                            " of " + it->second.str(),
                at(id, "label"));
      }
    }
  }

  void check_contexts() {
    for (const auto& [id, c] : m_.contexts) {
      non_empty(id, c.description, "description");
      if (c.applicable_behaviors.empty()) {
        error("E003", "context " + id.str() + " applies to no hazardous behavior",
              at(id, "behaviors"));
      }
      for (std::size_t i = 0; i < c.applicable_behaviors.size(); ++i) {
        resolves(c.applicable_behaviors[i], EntityKind::behavior, at(id, "behaviors", i));
      }
    }
  }

  void check_scenarios() {
    for (const auto& [id, s] : m_.scenarios) {
      bool uca = resolves(s.uca, EntityKind::uca, at(id, "uca"));
      bool factor = resolves(s.factor, EntityKind::factor, at(id, "factor"));
      bool locus = resolves(s.locus, EntityKind::component, at(id, "locus"));
      bool context = s.context && resolves(*s.context, EntityKind::context, at(id, "context"));
      if (factor && locus) {
        const auto& kinds = m_.factors.at(s.factor).locus_kinds;
        auto k = component(s.locus)->kind;
        if (std::find(kinds.begin(), kinds.end(), k) == kinds.end()) {
          error("E004",
                "scenario " + id.str() + " places factor " + s.factor.str() + " at " +
                    s.locus.str() + " of kind " + std::string(to_token(k)) +
                    ", which the factor does not apply to",
                at(id, "locus"));
        }
      }
      if (uca && context) {
        const auto& behaviors = m_.contexts.at(*s.context).applicable_behaviors;
        auto b = m_.ucas.at(s.uca).behavior;
        if (std::find(behaviors.begin(), behaviors.end(), b) == behaviors.end()) {
          error("E009",
                "context " + s.context->str() + " does not apply to behavior " + b.str() +
                    " of " + s.uca.str(),
                at(id, "context"));
        }
      }
    }
  }

  void check_triggers() {
    std::set<EntityId> linked;
    for (const auto& l : m_.links) linked.insert(l.trigger);
    for (const auto& [id, t] : m_.triggers) {
      non_empty(id, t.description, "description");
      if (linked.count(id) == 0) {
        warning("W105", "triggering condition " + id.str() + " is not linked to any scenario",
                at(id));
      }
    }
  }

  void check_insufficiencies() {
    for (const auto& [id, f] : m_.insufficiencies) {
      non_empty(id, f.description, "description");
      resolves(f.locus, EntityKind::component, at(id, "locus"));
    }
  }

  void check_links() {
    for (const auto& l : m_.links) {
      auto src = m_.sources.links.find(l);
      auto loc = [&](SourceSpan SourceIndex::LinkSource::*member) -> std::optional<SourceSpan> {
        if (src == m_.sources.links.end()) return std::nullopt;
        return src->second.*member;
      };
      resolves(l.trigger, EntityKind::trigger, loc(&SourceIndex::LinkSource::trigger));
      bool scenario_ok =
          resolves(l.scenario, EntityKind::scenario, loc(&SourceIndex::LinkSource::scenario));
      resolves(l.insufficiency, EntityKind::insufficiency,
               loc(&SourceIndex::LinkSource::insufficiency));
      if (scenario_ok && functional_safety(m_.scenarios.at(l.scenario))) {
        warning("W301",
                "trigger " + l.trigger.str() + " is linked to functional-safety scenario " +
                    l.scenario.str(),
                loc(&SourceIndex::LinkSource::declaration));
      }
    }
  }

  bool functional_safety(const LossScenario& s) const {
    if (s.relevance) return *s.relevance == Relevance::functional_safety;
    auto f = m_.factors.find(s.factor);
    return f != m_.factors.end() &&
           f->second.default_relevance == DefaultRelevance::functional_safety;
  }
};

}  // namespace

AssemblyResult assemble_model(std::span<const Declaration> declarations) {
  Builder builder;
  for (const auto& d : declarations) builder.add(d);
  builder.finish();

  AssemblyResult result{std::move(builder.model), std::move(builder.diagnostics)};
  auto findings = Checker(result.model, builder.dropped).run();
  result.diagnostics.insert(result.diagnostics.end(), findings.begin(), findings.end());
  result.model.valid = !has_errors(result.diagnostics);
  return result;
}

std::vector<Diagnostic> validate_integrity(const AnalysisModel& model) {
  static const std::set<EntityId> none;
  return Checker(model, none).run();
}

}  // namespace stpa
