#include "stpa/export.hpp"

#include <map>
#include <set>
#include <sstream>

#include "json.hpp"
#include "stpa/classifier.hpp"
#include "stpa/generation.hpp"
#include "stpa/trace.hpp"

namespace stpa {

namespace {

using nlohmann::json;

constexpr const char* kFormatName = "stpa-analysis-model";
constexpr int kFormatVersion = 1;

json ids(const std::vector<EntityId>& v) {
  json a = json::array();
  for (EntityId id : v) a.push_back(id.str());
  return a;
}

template <class T>
json optional_value(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

json to_json(const Loss& e) { return {{"id", e.id.str()}, {"description", e.description}}; }
json to_json(const Hazard& e) {
  return {{"id", e.id.str()}, {"description", e.description}, {"losses", ids(e.losses)}};
}
json to_json(const HazardousBehavior& e) {
  return {{"id", e.id.str()}, {"description", e.description}, {"hazards", ids(e.hazards)}};
}
json to_json(const Component& e) {
  return {{"id", e.id.str()},
          {"name", e.name},
          {"kind", to_token(e.kind)},
          {"environment", e.environment}};
}
json to_json(const ControlAction& e) {
  return {{"id", e.id.str()},         {"name", e.name},
          {"source", e.source.str()}, {"target", e.target.str()},
          {"behaviors", ids(e.behaviors)}};
}
json to_json(const FeedbackLink& e) {
  return {{"id", e.id.str()},         {"name", e.name},
          {"source", e.source.str()}, {"target", e.target.str()},
          {"kind", to_token(e.kind)}};
}
json to_json(const UnsafeControlAction& e) {
  return {{"id", e.id.str()},
          {"action", e.action.str()},
          {"guide_word", to_token(e.guide_word)},
          {"guide_word_alias", guide_word_alias(e.guide_word)},
          {"behavior", e.behavior.str()},
          {"narrative", e.narrative},
          {"status", to_token(e.status)},
          {"exclusion_reason", optional_value(e.exclusion_reason)}};
}
json to_json(const CausalFactor& e) {
  json loci = json::array();
  for (auto k : e.locus_kinds) loci.push_back(to_token(k));
  return {{"id", e.id.str()},
          {"label", e.label},
          {"description", e.description},
          {"category", to_token(e.category)},
          {"locus_kinds", loci},
          {"default_relevance", to_token(e.default_relevance)}};
}
json to_json(const ScenarioContext& e) {
  return {{"id", e.id.str()},
          {"description", e.description},
          {"applicable_behaviors", ids(e.applicable_behaviors)}};
}
json to_json(const LossScenario& e) {
  json relevance = e.relevance ? json(to_token(*e.relevance)) : json(nullptr);
  json context = e.context ? json(e.context->str()) : json(nullptr);
  return {{"id", e.id.str()},         {"uca", e.uca.str()},     {"factor", e.factor.str()},
          {"locus", e.locus.str()},   {"context", context},     {"narrative", e.narrative},
          {"relevance", relevance}};
}
json to_json(const TriggeringCondition& e) {
  return {{"id", e.id.str()}, {"description", e.description}};
}
json to_json(const FunctionalInsufficiency& e) {
  return {{"id", e.id.str()}, {"description", e.description}, {"locus", e.locus.str()}};
}

template <class T>
json registry_json(const Registry<T>& r) {
  json a = json::array();
  for (const auto& [id, e] : r) a.push_back(to_json(e));
  return a;
}

// ---- import ---------------------------------------------------------------

struct ImportError {
  std::string message;
};

const json& field(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ImportError{where + ": missing field \"" + key + "\""};
  return *it;
}

std::string string_field(const json& obj, const char* key, const std::string& where) {
  const json& v = field(obj, key, where);
  if (!v.is_string()) throw ImportError{where + ": field \"" + key + "\" must be a string"};
  return v.get<std::string>();
}

std::optional<std::string> nullable_string(const json& obj, const char* key,
                                           const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) {
    throw ImportError{where + ": field \"" + key + "\" must be a string or null"};
  }
  return it->get<std::string>();
}

std::vector<std::string> string_list(const json& obj, const char* key, const std::string& where) {
  const json& v = field(obj, key, where);
  if (!v.is_array()) throw ImportError{where + ": field \"" + key + "\" must be an array"};
  std::vector<std::string> out;
  for (const auto& item : v) {
    if (!item.is_string()) {
      throw ImportError{where + ": field \"" + key + "\" must hold strings"};
    }
    out.push_back(item.get<std::string>());
  }
  return out;
}

class Importer {
 public:
  std::vector<Declaration> declarations;

  void run(const json& doc) {
    if (!doc.is_object()) throw ImportError{"document is not a JSON object"};
    each(doc, "losses", [&](const json& e, const std::string& w) {
      start(DeclKeyword::loss, e, w);
      scalar("text", string_field(e, "description", w));
    });
    each(doc, "hazards", [&](const json& e, const std::string& w) {
      start(DeclKeyword::hazard, e, w);
      list("losses", string_list(e, "losses", w));
      scalar("text", string_field(e, "description", w));
    });
    each(doc, "behaviors", [&](const json& e, const std::string& w) {
      start(DeclKeyword::behavior, e, w);
      list("hazards", string_list(e, "hazards", w));
      scalar("text", string_field(e, "description", w));
    });
    each(doc, "components", [&](const json& e, const std::string& w) {
      std::string kind = string_field(e, "kind", w);
      auto k = parse_token<ComponentKind>(kind);
      if (!k) throw ImportError{w + ": unknown component kind \"" + kind + "\""};
      static constexpr DeclKeyword kw[] = {DeclKeyword::controller, DeclKeyword::human,
                                           DeclKeyword::sensor, DeclKeyword::actuator,
                                           DeclKeyword::process};
      start(kw[static_cast<std::size_t>(*k)], e, w);
      const json& env = field(e, "environment", w);
      if (!env.is_boolean()) throw ImportError{w + ": field \"environment\" must be a boolean"};
      if (env.get<bool>()) scalar("environment", "true");
      scalar("text", string_field(e, "name", w));
    });
    each(doc, "actions", [&](const json& e, const std::string& w) {
      start(DeclKeyword::action, e, w);
      scalar("from", string_field(e, "source", w));
      scalar("to", string_field(e, "target", w));
      auto behaviors = string_list(e, "behaviors", w);
      if (!behaviors.empty()) list("behaviors", behaviors);
      scalar("text", string_field(e, "name", w));
    });
    each(doc, "feedback", [&](const json& e, const std::string& w) {
      start(DeclKeyword::feedback, e, w);
      scalar("from", string_field(e, "source", w));
      scalar("to", string_field(e, "target", w));
      scalar("kind", string_field(e, "kind", w));
      scalar("text", string_field(e, "name", w));
    });
    each(doc, "factors", [&](const json& e, const std::string& w) {
      start(DeclKeyword::factor, e, w);
      scalar("label", string_field(e, "label", w));
      scalar("category", string_field(e, "category", w));
      list("loci", string_list(e, "locus_kinds", w));
      scalar("relevance", string_field(e, "default_relevance", w));
      scalar("text", string_field(e, "description", w));
    });
    each(doc, "contexts", [&](const json& e, const std::string& w) {
      start(DeclKeyword::context, e, w);
      list("behaviors", string_list(e, "applicable_behaviors", w));
      scalar("text", string_field(e, "description", w));
    });
    each(doc, "ucas", [&](const json& e, const std::string& w) {
      start(DeclKeyword::uca, e, w);
      scalar("action", string_field(e, "action", w));
      scalar("guide", string_field(e, "guide_word", w));
      scalar("behavior", string_field(e, "behavior", w));
      scalar("status", string_field(e, "status", w));
      if (auto reason = nullable_string(e, "exclusion_reason", w)) scalar("reason", *reason);
      scalar("text", string_field(e, "narrative", w));
    });
    each(doc, "scenarios", [&](const json& e, const std::string& w) {
      start(DeclKeyword::scenario, e, w);
      scalar("uca", string_field(e, "uca", w));
      scalar("factor", string_field(e, "factor", w));
      scalar("locus", string_field(e, "locus", w));
      if (auto ctx = nullable_string(e, "context", w)) scalar("context", *ctx);
      if (auto rel = nullable_string(e, "relevance", w)) scalar("relevance", *rel);
      scalar("text", string_field(e, "narrative", w));
    });
    each(doc, "triggers", [&](const json& e, const std::string& w) {
      start(DeclKeyword::trigger, e, w);
      scalar("text", string_field(e, "description", w));
    });
    each(doc, "insufficiencies", [&](const json& e, const std::string& w) {
      start(DeclKeyword::insufficiency, e, w);
      scalar("locus", string_field(e, "locus", w));
      scalar("text", string_field(e, "description", w));
    });
    each(doc, "trigger_links", [&](const json& e, const std::string& w) {
      Declaration d;
      d.keyword = DeclKeyword::link;
      d.id = string_field(e, "trigger", w);
      d.span = d.id_span = where_span();
      declarations.push_back(std::move(d));
      scalar("scenario", string_field(e, "scenario", w));
      scalar("insufficiency", string_field(e, "insufficiency", w));
    });
  }

 private:
  SourceSpan where_span() const { return SourceSpan{"<json>", 1, 1, 0}; }

  template <class F>
  void each(const json& doc, const char* key, F&& f) {
    const json& arr = field(doc, key, "document");
    if (!arr.is_array()) throw ImportError{std::string("\"") + key + "\" must be an array"};
    for (std::size_t i = 0; i < arr.size(); ++i) {
      std::string where = std::string(key) + "[" + std::to_string(i) + "]";
      if (!arr[i].is_object()) throw ImportError{where + " is not an object"};
      f(arr[i], where);
    }
  }

  void start(DeclKeyword k, const json& e, const std::string& where) {
    Declaration d;
    d.keyword = k;
    d.id = string_field(e, "id", where);
    d.span = d.id_span = where_span();
    declarations.push_back(std::move(d));
  }

  void scalar(const std::string& key, std::string value) {
    AttrValue v;
    v.items.push_back(std::move(value));
    v.span = where_span();
    v.item_spans.push_back(v.span);
    declarations.back().attributes[key] = std::move(v);
  }

  void list(const std::string& key, std::vector<std::string> items) {
    AttrValue v;
    v.is_list = true;
    v.span = where_span();
    v.item_spans.assign(items.size(), v.span);
    v.items = std::move(items);
    declarations.back().attributes[key] = std::move(v);
  }
};

// ---- text formats ---------------------------------------------------------

std::string csv_field(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string dot_string(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  return out + "\"";
}

std::string md_cell(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '|') {
      out += "\\|";
    } else if (c == '\n') {
      out += "<br>";
    } else {
      out += c;
    }
  }
  return out;
}

std::string joined(const std::vector<EntityId>& v, std::string_view sep = ", ") {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += sep;
    out += v[i].str();
  }
  return out;
}

std::string_view dot_shape(ComponentKind k) {
  switch (k) {
    case ComponentKind::controller: return "box";
    case ComponentKind::human_controller: return "box, style=rounded";
    case ComponentKind::sensor: return "box, style=dashed";
    case ComponentKind::actuator: return "box, style=bold";
    case ComponentKind::process: return "box3d";
  }
  return "box";
}

}  // namespace

std::optional<ExportFormat> parse_export_format(std::string_view token) noexcept {
  if (token == "json") return ExportFormat::json;
  if (token == "csv" || token == "csv_matrix") return ExportFormat::csv_matrix;
  if (token == "dot") return ExportFormat::dot;
  if (token == "markdown" || token == "md") return ExportFormat::markdown;
  return std::nullopt;
}

std::string export_model(const AnalysisModel& model, ExportFormat format) {
  switch (format) {
    case ExportFormat::json: return export_json(model);
    case ExportFormat::csv_matrix: return export_csv_matrix(model);
    case ExportFormat::dot: return export_dot(model);
    case ExportFormat::markdown: return export_markdown(model);
  }
  throw ModelError("E121", "unsupported export format");
}

std::string export_json(const AnalysisModel& m) {
  json links = json::array();
  for (const auto& l : m.links) {
    links.push_back({{"trigger", l.trigger.str()},
                     {"scenario", l.scenario.str()},
                     {"insufficiency", l.insufficiency.str()}});
  }
  json doc = {{"format", kFormatName},
              {"version", kFormatVersion},
              {"losses", registry_json(m.losses)},
              {"hazards", registry_json(m.hazards)},
              {"behaviors", registry_json(m.behaviors)},
              {"components", registry_json(m.components)},
              {"actions", registry_json(m.actions)},
              {"feedback", registry_json(m.feedback)},
              {"ucas", registry_json(m.ucas)},
              {"factors", registry_json(m.factors)},
              {"contexts", registry_json(m.contexts)},
              {"scenarios", registry_json(m.scenarios)},
              {"triggers", registry_json(m.triggers)},
              {"insufficiencies", registry_json(m.insufficiencies)},
              {"trigger_links", links}};
  return doc.dump(2) + "\n";
}

AssemblyResult import_json(std::string_view text) {
  auto failed = [](std::string message) {
    AssemblyResult r;
    r.model.valid = false;
    r.diagnostics.push_back(make_error("E120", std::move(message)));
    return r;
  };
  json doc = json::parse(text.begin(), text.end(), nullptr, false);
  if (doc.is_discarded()) return failed("input is not valid JSON");
  Importer importer;
  try {
    if (doc.is_object()) {
      auto fmt = doc.find("format");
      if (fmt == doc.end() || *fmt != kFormatName) {
        throw ImportError{std::string("\"format\" must be \"") + kFormatName + "\""};
      }
      auto version = doc.find("version");
      if (version == doc.end() || *version != kFormatVersion) {
        throw ImportError{"unsupported \"version\" (expected " + std::to_string(kFormatVersion) +
                          ")"};
      }
    }
    importer.run(doc);
  } catch (const ImportError& e) {
    return failed(e.message);
  }
  return assemble_model(importer.declarations);
}

std::string export_csv_matrix(const AnalysisModel& m) {
  const auto columns = filter_sotif(m, taxonomy_for(m, false)).retained;
  std::map<std::pair<EntityId, EntityId>, std::vector<EntityId>> cells;
  for (const auto& l : m.links) cells[{l.trigger, l.scenario}].push_back(l.insufficiency);

  std::ostringstream out;
  out << csv_field("trigger");
  for (const auto& s : columns) out << ',' << csv_field(s.id.str());
  out << "\r\n";
  for (const auto& [tid, t] : m.triggers) {
    out << csv_field(tid.str());
    for (const auto& s : columns) {
      auto it = cells.find({tid, s.id});
      out << ',' << csv_field(it == cells.end() ? "" : joined(it->second, ";"));
    }
    out << "\r\n";
  }
  return out.str();
}

std::string export_dot(const AnalysisModel& m) {
  std::ostringstream out;
  out << "digraph control_structure {\n"
      << "  rankdir=TB;\n"
      << "  node [fontname=\"Helvetica\"];\n";
  for (const auto& [id, c] : m.components) {
    out << "  " << dot_string(id.str()) << " [label=" << dot_string(c.name)
        << ", shape=" << dot_shape(c.kind) << "];\n";
  }
  for (const auto& [id, a] : m.actions) {
    out << "  " << dot_string(a.source.str()) << " -> " << dot_string(a.target.str())
        << " [label=" << dot_string(a.name) << ", style=solid];\n";
  }
  for (const auto& [id, f] : m.feedback) {
    out << "  " << dot_string(f.source.str()) << " -> " << dot_string(f.target.str())
        << " [label=" << dot_string(f.name)
        << ", style=" << (f.kind == LinkKind::feedback ? "dashed" : "dotted") << "];\n";
  }
  out << "}\n";
  return out.str();
}

std::string export_markdown(const AnalysisModel& m) {
  const Taxonomy taxonomy = taxonomy_for(m, false);
  std::ostringstream out;
  auto text_of = [&](EntityId id) { return md_cell(entity_text(m, id)); };

  out << "# STPA analysis report\n";

  out << "\n## Losses\n\n| Id | Description |\n|---|---|\n";
  for (const auto& [id, e] : m.losses) out << "| " << id.str() << " | " << text_of(id) << " |\n";

  out << "\n## Hazards\n\n| Id | Description | Losses |\n|---|---|---|\n";
  for (const auto& [id, e] : m.hazards) {
    out << "| " << id.str() << " | " << text_of(id) << " | " << joined(e.losses) << " |\n";
  }

  out << "\n## Hazardous behaviors\n\n| Id | Description | Hazards |\n|---|---|---|\n";
  for (const auto& [id, e] : m.behaviors) {
    out << "| " << id.str() << " | " << text_of(id) << " | " << joined(e.hazards) << " |\n";
  }

  out << "\n## Control structure\n\n| Id | Component | Kind |\n|---|---|---|\n";
  for (const auto& [id, c] : m.components) {
    out << "| " << id.str() << " | " << text_of(id) << " | " << to_token(c.kind)
        << (c.environment ? " (environment)" : "") << " |\n";
  }
  out << "\n| Id | Link | From | To | Kind |\n|---|---|---|---|---|\n";
  for (const auto& [id, a] : m.actions) {
    out << "| " << id.str() << " | " << text_of(id) << " | " << a.source.str() << " | "
        << a.target.str() << " | control action |\n";
  }
  for (const auto& [id, f] : m.feedback) {
    out << "| " << id.str() << " | " << text_of(id) << " | " << f.source.str() << " | "
        << f.target.str() << " | " << to_token(f.kind) << " |\n";
  }

  out << "\n## Unsafe control actions\n\n"
      << "| Id | Action | Guide word | Behavior | Status | Text |\n|---|---|---|---|---|---|\n";
  for (const auto& [id, u] : m.ucas) {
    std::string text;
    try {
      text = render_uca_text(u, m);
    } catch (const ModelError&) {
      text = u.narrative;
    }
    std::string status(to_token(u.status));
    if (u.exclusion_reason) status += ": " + *u.exclusion_reason;
    out << "| " << id.str() << " | " << u.action.str() << " | " << guide_word_label(u.guide_word)
        << " | " << u.behavior.str() << " | " << md_cell(status) << " | " << md_cell(text)
        << " |\n";
  }

  out << "\n## Loss scenarios\n\n"
      << "| Id | UCA | Factor | Locus | Context | Relevance | Text |\n"
      << "|---|---|---|---|---|---|---|\n";
  for (const auto& [id, s] : m.scenarios) {
    std::string relevance = "unknown";
    if (s.relevance || taxonomy.find(s.factor)) {
      relevance = to_token(classify_relevance(s, taxonomy));
    }
    const CausalFactor* f = taxonomy.find(s.factor);
    out << "| " << id.str() << " | " << s.uca.str() << " | "
        << (f ? s.factor.str() + " " + f->label : s.factor.str()) << " | " << s.locus.str()
        << " | " << (s.context ? s.context->str() : "") << " | " << relevance << " | "
        << md_cell(s.narrative) << " |\n";
  }

  out << "\n## Triggering conditions\n\n| Id | Description | Scenarios |\n|---|---|---|\n";
  for (const auto& [id, t] : m.triggers) {
    std::set<EntityId> linked;
    for (const auto& l : m.links) {
      if (l.trigger == id) linked.insert(l.scenario);
    }
    out << "| " << id.str() << " | " << text_of(id) << " | " << linked.size() << " |\n";
  }

  out << "\n## Functional insufficiencies\n\n| Id | Description | Locus |\n|---|---|---|\n";
  for (const auto& [id, f] : m.insufficiencies) {
    out << "| " << id.str() << " | " << text_of(id) << " | " << f.locus.str() << " |\n";
  }

  out << "\n## Trigger links\n\n| Trigger | Scenario | Insufficiency |\n|---|---|---|\n";
  for (const auto& l : m.links) {
    out << "| " << l.trigger.str() << " | " << l.scenario.str() << " | "
        << l.insufficiency.str() << " |\n";
  }

  out << "\n## Summary\n\n```\n" << render_stats(stats(m)) << "```\n";
  return out.str();
}

}  // namespace stpa
