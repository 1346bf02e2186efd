#include "stpa/dsl.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <variant>

#include "json.hpp"

namespace stpa {

namespace {

bool is_word_start(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
}

bool is_word_char(char c) { return is_word_start(c) || c == '-'; }

bool is_continuation(char c) { return (static_cast<unsigned char>(c) & 0xC0) == 0x80; }

bool is_reserved_word(std::string_view w) {
  return parse_keyword(w).has_value() || w == "text" || w == "via";
}

std::string in_quotes(std::string_view s) { return "\"" + std::string(s) + "\""; }

class Lexer {
 public:
  Lexer(std::string_view src, std::string_view file) : src_(src), file_(file) {
    if (src_.substr(0, 3) == "\xEF\xBB\xBF") pos_ = 3;
  }

  TokenizeResult run() {
    TokenizeResult out;
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '\n') {
        ++line_;
        column_ = 1;
        ++pos_;
      } else if (c == ' ' || c == '\t' || c == '\r') {
        advance();
      } else if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (c == '"') {
        string_token(out);
      } else if (c == '-' && peek(1) == '>') {
        punct(out, TokenKind::arrow, 2);
      } else if (c == '=') {
        punct(out, TokenKind::equals, 1);
      } else if (c == '[') {
        punct(out, TokenKind::lbracket, 1);
      } else if (c == ']') {
        punct(out, TokenKind::rbracket, 1);
      } else if (c == ',') {
        punct(out, TokenKind::comma, 1);
      } else if (is_word_start(c)) {
        word(out);
      } else {
        SourceSpan at = here(1);
        std::size_t start = pos_;
        advance();
        std::string shown(src_.substr(start, pos_ - start));
        out.diagnostics.push_back(
            make_error("E101", "illegal character " + in_quotes(shown), std::move(at)));
      }
    }
    return out;
  }

 private:
  std::string_view src_;
  std::string file_;
  std::size_t pos_ = 0;
  std::uint32_t line_ = 1;
  std::uint32_t column_ = 1;

  char peek(std::size_t ahead) const {
    return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
  }

  // Moves past one code point.
  void advance() {
    ++pos_;
    while (pos_ < src_.size() && is_continuation(src_[pos_])) ++pos_;
    ++column_;
  }

  SourceSpan here(std::uint32_t length) const { return SourceSpan{file_, line_, column_, length}; }

  void punct(TokenizeResult& out, TokenKind kind, std::size_t width) {
    out.tokens.push_back(Token{kind, std::string(src_.substr(pos_, width)),
                               here(static_cast<std::uint32_t>(width))});
    pos_ += width;
    column_ += static_cast<std::uint32_t>(width);
  }

  void word(TokenizeResult& out) {
    SourceSpan span = here(0);
    std::size_t start = pos_;
    while (pos_ < src_.size() && is_word_char(src_[pos_])) {
      if (src_[pos_] == '-' && peek(1) == '>') break;
      ++pos_;
      ++column_;
    }
    std::string text(src_.substr(start, pos_ - start));
    span.length = static_cast<std::uint32_t>(text.size());
    TokenKind kind = is_reserved_word(text) ? TokenKind::keyword : TokenKind::identifier;
    out.tokens.push_back(Token{kind, std::move(text), std::move(span)});
  }

  void string_token(TokenizeResult& out) {
    SourceSpan span = here(0);
    advance();  // opening quote
    std::string value;
    while (pos_ < src_.size() && src_[pos_] != '\n') {
      char c = src_[pos_];
      if (c == '"') {
        advance();
        span.length = column_ - span.column;
        out.tokens.push_back(Token{TokenKind::string, std::move(value), std::move(span)});
        return;
      }
      if (c == '\\' && pos_ + 1 < src_.size() && src_[pos_ + 1] != '\n') {
        char e = src_[pos_ + 1];
        if (e == '"' || e == '\\') {
          value += e;
          pos_ += 2;
          column_ += 2;
          continue;
        }
        if (e == 'n') {
          value += '\n';
          pos_ += 2;
          column_ += 2;
          continue;
        }
      }
      std::size_t from = pos_;
      advance();
      value.append(src_.substr(from, pos_ - from));
    }
    // Unterminated: the rest of the line is consumed. A trailing '\r' is not
    // part of the string.
    std::uint32_t length = column_ - span.column;
    if (pos_ > 0 && pos_ <= src_.size() && src_[pos_ - 1] == '\r') --length;
    span.length = length;
    out.diagnostics.push_back(make_error("E100", "unterminated string", std::move(span)));
  }
};

SourceSpan cover(const SourceSpan& first, const SourceSpan& last) {
  SourceSpan s = first;
  s.length = last.column + last.length - first.column;
  return s;
}

struct LineError {
  std::string code;
  std::string message;
  SourceSpan at;
};

// Parses the tokens of one line into a declaration.
class LineParser {
 public:
  explicit LineParser(const std::vector<Token>& tokens) : t_(tokens) {}

  std::variant<Declaration, LineError> run() {
    try {
      return parse_line();
    } catch (LineError& e) {
      return std::move(e);
    }
  }

 private:
  const std::vector<Token>& t_;
  std::size_t i_ = 0;

  [[noreturn]] void fail(std::string code, std::string message, const SourceSpan& at) {
    throw LineError{std::move(code), std::move(message), at};
  }

  bool at_end() const { return i_ >= t_.size(); }
  const Token& cur() const { return t_[i_]; }
  SourceSpan end_span() const {
    const SourceSpan& last = t_.back().span;
    return SourceSpan{last.file, last.line, last.column + last.length, 0};
  }

  const Token& expect(TokenKind kind, const char* what) {
    if (at_end()) fail("E113", std::string("expected ") + what + " at end of line", end_span());
    if (cur().kind != kind) {
      fail("E113", std::string("expected ") + what + ", found " + in_quotes(cur().text), cur().span);
    }
    return t_[i_++];
  }

  Declaration parse_line() {
    const Token& head = t_.front();
    auto keyword = head.kind == TokenKind::keyword ? parse_keyword(head.text) : std::nullopt;
    if (!keyword) fail("E110", "unknown keyword " + in_quotes(head.text), head.span);
    ++i_;

    Declaration d;
    d.keyword = *keyword;
    d.span = cover(head.span, t_.back().span);
    if (at_end() || cur().kind != TokenKind::identifier) {
      fail("E113", "expected an id after " + in_quotes(head.text),
           at_end() ? end_span() : cur().span);
    }
    d.id = cur().text;
    d.id_span = cur().span;
    ++i_;

    if (d.keyword == DeclKeyword::link) {
      parse_link(d);
    } else {
      parse_attributes(d);
    }

    for (const auto& [key, value] : d.attributes) {
      const auto& allowed = allowed_attributes(d.keyword);
      if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
        fail("E114", "unknown attribute " + in_quotes(key) + " for " + in_quotes(head.text),
             value.span);
      }
    }
    for (auto key : required_attributes(d.keyword)) {
      if (!d.find(key)) {
        fail("E111", in_quotes(head.text) + " " + d.id + " is missing required attribute " +
                         in_quotes(key),
             head.span);
      }
    }
    return d;
  }

  void set_scalar(Declaration& d, std::string key, const Token& value) {
    AttrValue v;
    v.items.push_back(value.text);
    v.span = value.span;
    v.item_spans.push_back(value.span);
    d.attributes[std::move(key)] = std::move(v);
  }

  void parse_link(Declaration& d) {
    expect(TokenKind::arrow, "\"->\"");
    const Token& scenario = expect(TokenKind::identifier, "a scenario id");
    const Token& via = expect(TokenKind::keyword, "\"via\"");
    if (via.text != "via") fail("E113", "expected \"via\", found " + in_quotes(via.text), via.span);
    const Token& insufficiency = expect(TokenKind::identifier, "an insufficiency id");
    if (!at_end()) fail("E113", "unexpected " + in_quotes(cur().text) + " after link", cur().span);
    set_scalar(d, "scenario", scenario);
    set_scalar(d, "insufficiency", insufficiency);
  }

  void parse_attributes(Declaration& d) {
    while (!at_end()) {
      const Token& tok = cur();
      if (tok.kind == TokenKind::string) {
        add(d, "text", tok, [&] { set_scalar(d, "text", tok); });
        ++i_;
        continue;
      }
      if (tok.kind == TokenKind::keyword && tok.text == "text" && i_ + 1 < t_.size() &&
          t_[i_ + 1].kind == TokenKind::string) {
        const Token& value = t_[i_ + 1];
        add(d, "text", tok, [&] { set_scalar(d, "text", value); });
        i_ += 2;
        continue;
      }
      if (tok.kind == TokenKind::keyword && tok.text == "text" &&
          (i_ + 1 >= t_.size() || t_[i_ + 1].kind != TokenKind::equals)) {
        fail("E113", "expected a quoted string after \"text\"",
             i_ + 1 < t_.size() ? t_[i_ + 1].span : end_span());
      }
      if (tok.kind != TokenKind::identifier && tok.kind != TokenKind::keyword) {
        fail("E113", "expected an attribute, found " + in_quotes(tok.text), tok.span);
      }
      ++i_;
      expect(TokenKind::equals, "\"=\"");
      if (at_end()) fail("E113", "missing value for attribute " + in_quotes(tok.text), end_span());
      if (cur().kind == TokenKind::lbracket) {
        AttrValue v = parse_list();
        add(d, tok.text, tok, [&] { d.attributes[tok.text] = std::move(v); });
      } else if (cur().kind == TokenKind::identifier || cur().kind == TokenKind::keyword ||
                 cur().kind == TokenKind::string) {
        const Token& value = cur();
        add(d, tok.text, tok, [&] { set_scalar(d, tok.text, value); });
        ++i_;
      } else {
        fail("E113", "expected a value for attribute " + in_quotes(tok.text) + ", found " +
                         in_quotes(cur().text),
             cur().span);
      }
    }
  }

  template <class F>
  void add(Declaration& d, const std::string& key, const Token& at, F&& store) {
    if (d.attributes.count(key) != 0) fail("E113", "duplicate attribute " + in_quotes(key), at.span);
    store();
  }

  AttrValue parse_list() {
    const Token& open = t_[i_++];
    AttrValue v;
    v.is_list = true;
    bool expect_item = true;
    while (true) {
      if (at_end()) fail("E112", "unterminated list", open.span);
      const Token& tok = cur();
      if (tok.kind == TokenKind::rbracket) {
        if (expect_item && !v.items.empty()) fail("E112", "missing list item after \",\"", tok.span);
        v.span = cover(open.span, tok.span);
        ++i_;
        return v;
      }
      if (expect_item) {
        if (tok.kind != TokenKind::identifier && tok.kind != TokenKind::keyword &&
            tok.kind != TokenKind::string) {
          fail("E112", "expected a list item, found " + in_quotes(tok.text), tok.span);
        }
        v.items.push_back(tok.text);
        v.item_spans.push_back(tok.span);
        expect_item = false;
      } else {
        if (tok.kind != TokenKind::comma) {
          fail("E112", "expected \",\" or \"]\" in list, found " + in_quotes(tok.text), tok.span);
        }
        expect_item = true;
      }
      ++i_;
    }
  }
};

bool bare_word(std::string_view s) {
  if (s.empty() || !is_word_start(s.front())) return false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!is_word_char(s[i])) return false;
    if (s[i] == '-' && i + 1 < s.size() && s[i + 1] == '>') return false;
  }
  return true;
}

std::string value_dsl(std::string_view s) { return bare_word(s) ? std::string(s) : quote_dsl(s); }

std::string list_dsl(const std::vector<EntityId>& ids) {
  std::string out = "[";
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) out += ", ";
    out += ids[i].str();
  }
  return out + "]";
}

std::string_view component_keyword(ComponentKind k) {
  switch (k) {
    case ComponentKind::controller: return "controller";
    case ComponentKind::human_controller: return "human";
    case ComponentKind::sensor: return "sensor";
    case ComponentKind::actuator: return "actuator";
    case ComponentKind::process: return "process";
  }
  return "controller";
}

std::string text_dsl(std::string_view s) { return " text " + quote_dsl(s); }
std::string optional_text_dsl(std::string_view s) { return s.empty() ? "" : text_dsl(s); }

std::string to_dsl(const Loss& e) { return "loss " + e.id.str() + text_dsl(e.description); }

std::string to_dsl(const Hazard& e) {
  return "hazard " + e.id.str() + " losses=" + list_dsl(e.losses) + text_dsl(e.description);
}

std::string to_dsl(const HazardousBehavior& e) {
  return "behavior " + e.id.str() + " hazards=" + list_dsl(e.hazards) + text_dsl(e.description);
}

std::string to_dsl(const Component& e) {
  std::string out = std::string(component_keyword(e.kind)) + " " + e.id.str();
  if (e.environment) out += " environment=true";
  return out + text_dsl(e.name);
}

std::string to_dsl(const ControlAction& e) {
  std::string out = "action " + e.id.str() + " from=" + e.source.str() + " to=" + e.target.str();
  if (!e.behaviors.empty()) out += " behaviors=" + list_dsl(e.behaviors);
  return out + text_dsl(e.name);
}

std::string to_dsl(const FeedbackLink& e) {
  return "feedback " + e.id.str() + " from=" + e.source.str() + " to=" + e.target.str() +
         " kind=" + std::string(to_token(e.kind)) + text_dsl(e.name);
}

std::string to_dsl(const ScenarioContext& e) {
  return "context " + e.id.str() + " behaviors=" + list_dsl(e.applicable_behaviors) +
         text_dsl(e.description);
}

std::string to_dsl(const TriggeringCondition& e) {
  return "trigger " + e.id.str() + text_dsl(e.description);
}

std::string to_dsl(const FunctionalInsufficiency& e) {
  return "insufficiency " + e.id.str() + " locus=" + e.locus.str() + text_dsl(e.description);
}

}  // namespace

std::string_view token_kind_name(TokenKind k) noexcept {
  switch (k) {
    case TokenKind::keyword: return "keyword";
    case TokenKind::identifier: return "identifier";
    case TokenKind::string: return "string";
    case TokenKind::equals: return "equals";
    case TokenKind::arrow: return "arrow";
    case TokenKind::lbracket: return "lbracket";
    case TokenKind::rbracket: return "rbracket";
    case TokenKind::comma: return "comma";
  }
  return {};
}

TokenizeResult tokenize(std::string_view source, std::string_view file) {
  return Lexer(source, file).run();
}

ParseResult parse(std::string_view source, std::string_view file) {
  TokenizeResult lexed = tokenize(source, file);

  // Lexical errors disqualify their line; only the first per line is kept.
  std::map<std::uint32_t, const Diagnostic*> bad_lines;
  for (const auto& d : lexed.diagnostics) bad_lines.emplace(d.location->line, &d);

  ParseResult out;
  std::size_t i = 0;
  std::set<std::uint32_t> reported;
  auto report_lexical = [&](std::uint32_t upto) {
    for (auto it = bad_lines.begin(); it != bad_lines.end() && it->first <= upto;) {
      if (reported.insert(it->first).second) out.diagnostics.push_back(*it->second);
      it = bad_lines.erase(it);
    }
  };

  while (i < lexed.tokens.size()) {
    const std::uint32_t line = lexed.tokens[i].span.line;
    std::size_t j = i;
    while (j < lexed.tokens.size() && lexed.tokens[j].span.line == line) ++j;
    report_lexical(line - 1);
    if (bad_lines.count(line) != 0) {
      report_lexical(line);
      i = j;
      continue;
    }
    std::vector<Token> tokens(lexed.tokens.begin() + static_cast<std::ptrdiff_t>(i),
                              lexed.tokens.begin() + static_cast<std::ptrdiff_t>(j));
    auto result = LineParser(tokens).run();
    if (auto* decl = std::get_if<Declaration>(&result)) {
      out.declarations.push_back(std::move(*decl));
    } else {
      auto& e = std::get<LineError>(result);
      out.diagnostics.push_back(make_error(std::move(e.code), std::move(e.message), e.at));
    }
    i = j;
  }
  report_lexical(UINT32_MAX);
  return out;
}

std::string emit_diagnostics(const std::vector<Diagnostic>& diags, DiagnosticStyle style) {
  std::string out;
  for (const auto& d : diags) {
    if (style == DiagnosticStyle::machine) {
      nlohmann::json j;
      j["severity"] = severity_name(d.severity);
      j["code"] = d.code;
      j["message"] = d.message;
      if (d.location) {
        j["file"] = d.location->file;
        j["line"] = d.location->line;
        j["column"] = d.location->column;
      } else {
        j["file"] = nullptr;
        j["line"] = nullptr;
        j["column"] = nullptr;
      }
      out += j.dump() + "\n";
      continue;
    }
    if (d.location) {
      out += d.location->file + ":" + std::to_string(d.location->line) + ":" +
             std::to_string(d.location->column) + ": ";
    }
    out += std::string(severity_name(d.severity)) + "[" + d.code + "]: " + d.message + "\n";
  }
  return out;
}

std::string quote_dsl(std::string_view text) {
  std::string out = "\"";
  for (char c : text) {
    if (c == '"' || c == '\\') {
      out += '\\';
      out += c;
    } else if (c == '\n') {
      out += "\\n";
    } else {
      out += c;
    }
  }
  return out + "\"";
}

std::string to_dsl(const UnsafeControlAction& u) {
  std::string out = "uca " + u.id.str() + " action=" + u.action.str() +
                    " guide=" + std::string(to_token(u.guide_word)) +
                    " behavior=" + u.behavior.str() + " status=" + std::string(to_token(u.status));
  if (u.exclusion_reason) out += " reason=" + quote_dsl(*u.exclusion_reason);
  return out + optional_text_dsl(u.narrative);
}

std::string to_dsl(const LossScenario& s) {
  std::string out = "scenario " + s.id.str() + " uca=" + s.uca.str() +
                    " factor=" + s.factor.str() + " locus=" + s.locus.str();
  if (s.context) out += " context=" + s.context->str();
  if (s.relevance) out += " relevance=" + std::string(to_token(*s.relevance));
  return out + optional_text_dsl(s.narrative);
}

std::string to_dsl(const CausalFactor& f) {
  std::string loci = "[";
  for (std::size_t i = 0; i < f.locus_kinds.size(); ++i) {
    if (i) loci += ", ";
    loci += to_token(f.locus_kinds[i]);
  }
  loci += "]";
  return "factor " + f.id.str() + " label=" + value_dsl(f.label) +
         " category=" + std::string(to_token(f.category)) + " loci=" + loci +
         " relevance=" + std::string(to_token(f.default_relevance)) +
         optional_text_dsl(f.description);
}

std::string to_dsl(const TriggerLink& l) {
  return "link " + l.trigger.str() + " -> " + l.scenario.str() + " via " + l.insufficiency.str();
}

std::string to_canonical_dsl(const AnalysisModel& m) {
  std::ostringstream out;
  bool first_group = true;
  auto group = [&](const auto& registry) {
    if (registry.empty()) return;
    if (!first_group) out << '\n';
    first_group = false;
    for (const auto& [id, e] : registry) out << to_dsl(e) << '\n';
  };
  group(m.losses);
  group(m.hazards);
  group(m.behaviors);
  group(m.components);
  group(m.actions);
  group(m.feedback);
  group(m.factors);
  group(m.contexts);
  group(m.ucas);
  group(m.scenarios);
  group(m.triggers);
  group(m.insufficiencies);
  if (!m.links.empty()) {
    if (!first_group) out << '\n';
    for (const auto& l : m.links) out << to_dsl(l) << '\n';
  }
  return out.str();
}

}  // namespace stpa
