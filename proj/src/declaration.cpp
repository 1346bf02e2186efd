#include "stpa/declaration.hpp"

#include <array>

namespace stpa {

namespace {

constexpr std::array<std::string_view, 17> kKeywords = {
    "loss",   "hazard", "behavior", "controller", "human", "sensor",
    "actuator", "process", "action", "feedback", "uca",  "factor",
    "context", "scenario", "trigger", "insufficiency", "link",
};

using Keys = std::vector<std::string_view>;

struct AttributeRule {
  Keys required;
  Keys allowed;
};

const AttributeRule& rule_for(DeclKeyword k) {
  static const AttributeRule text_only{{"text"}, {"text"}};
  static const AttributeRule hazard{{"text"}, {"losses", "text"}};
  static const AttributeRule behavior{{"text"}, {"hazards", "text"}};
  static const AttributeRule process{{"text"}, {"environment", "text"}};
  static const AttributeRule action{{"from", "to", "text"}, {"from", "to", "behaviors", "text"}};
  static const AttributeRule feedback{{"from", "to", "text"}, {"from", "to", "kind", "text"}};
  static const AttributeRule uca{{"action", "guide", "behavior"},
                                 {"action", "guide", "behavior", "status", "reason", "text"}};
  static const AttributeRule factor{{"label", "category", "loci", "relevance"},
                                    {"label", "category", "loci", "relevance", "text"}};
  static const AttributeRule context{{"behaviors", "text"}, {"behaviors", "text"}};
  static const AttributeRule scenario{
      {"uca", "factor", "locus"}, {"uca", "factor", "locus", "context", "relevance", "text"}};
  static const AttributeRule insufficiency{{"locus", "text"}, {"locus", "text"}};
  static const AttributeRule link{{"scenario", "insufficiency"}, {"scenario", "insufficiency"}};

  switch (k) {
    case DeclKeyword::hazard: return hazard;
    case DeclKeyword::behavior: return behavior;
    case DeclKeyword::process: return process;
    case DeclKeyword::action: return action;
    case DeclKeyword::feedback: return feedback;
    case DeclKeyword::uca: return uca;
    case DeclKeyword::factor: return factor;
    case DeclKeyword::context: return context;
    case DeclKeyword::scenario: return scenario;
    case DeclKeyword::insufficiency: return insufficiency;
    case DeclKeyword::link: return link;
    default: return text_only;
  }
}

}  // namespace

std::string_view keyword_text(DeclKeyword k) noexcept {
  return kKeywords[static_cast<std::size_t>(k)];
}

std::optional<DeclKeyword> parse_keyword(std::string_view word) noexcept {
  for (std::size_t i = 0; i < kKeywords.size(); ++i) {
    if (kKeywords[i] == word) return static_cast<DeclKeyword>(i);
  }
  return std::nullopt;
}

const AttrValue* Declaration::find(std::string_view key) const {
  auto it = attributes.find(std::string(key));
  return it == attributes.end() ? nullptr : &it->second;
}

Declaration make_declaration(DeclKeyword keyword, std::string id,
                             std::vector<std::pair<std::string, std::string>> attributes,
                             SourceSpan span) {
  Declaration d;
  d.keyword = keyword;
  d.id = std::move(id);
  d.id_span = span;
  d.span = span;
  for (auto& [key, raw] : attributes) {
    AttrValue v;
    v.span = span;
    if (raw.size() >= 2 && raw.front() == '[' && raw.back() == ']') {
      v.is_list = true;
      std::string_view body(raw);
      body = body.substr(1, body.size() - 2);
      while (!body.empty()) {
        auto comma = body.find(',');
        auto item = body.substr(0, comma);
        while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
        while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
        if (!item.empty()) {
          v.items.emplace_back(item);
          v.item_spans.push_back(span);
        }
        if (comma == std::string_view::npos) break;
        body.remove_prefix(comma + 1);
      }
    } else {
      v.items.push_back(std::move(raw));
      v.item_spans.push_back(span);
    }
    d.attributes[key] = std::move(v);
  }
  return d;
}

const std::vector<std::string_view>& required_attributes(DeclKeyword k) {
  return rule_for(k).required;
}

const std::vector<std::string_view>& allowed_attributes(DeclKeyword k) {
  return rule_for(k).allowed;
}

}  // namespace stpa
