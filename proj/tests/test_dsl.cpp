#include "doctest.h"
#include "stpa/dsl.hpp"
#include "support.hpp"

using namespace stpa;
using stpa::test::golden_path;
using stpa::test::read_text;

namespace {

std::vector<TokenKind> kinds(const TokenizeResult& r) {
  std::vector<TokenKind> out;
  for (const auto& t : r.tokens) out.push_back(t.kind);
  return out;
}

SourceSpan at(std::uint32_t line, std::uint32_t column) {
  return SourceSpan{"model.stpa", line, column, 1};
}

}  // namespace

TEST_CASE("tokenize: loss declaration") {
  auto r = tokenize("loss L-1 \"Verlust von Menschenleben oder Verletzung von Menschen\"", "t");
  CHECK(r.diagnostics.empty());
  CHECK(kinds(r) ==
        std::vector<TokenKind>{TokenKind::keyword, TokenKind::identifier, TokenKind::string});
  CHECK(r.tokens[2].text == "Verlust von Menschenleben oder Verletzung von Menschen");
  CHECK(r.tokens[2].span.column == 10);
}

TEST_CASE("tokenize: comment only") {
  auto r = tokenize("# comment only", "t");
  CHECK(r.tokens.empty());
  CHECK(r.diagnostics.empty());
}

TEST_CASE("tokenize: unterminated string") {
  auto r = tokenize("trigger TC-1 \"tiefstehende", "t");
  REQUIRE(r.diagnostics.size() == 1);
  CHECK(r.diagnostics[0].code == "E100");
  REQUIRE(r.diagnostics[0].location);
  CHECK(r.diagnostics[0].location->line == 1);
  // t-r-i-g-g-e-r (7) + space + T-C---1 (4) + space puts the quote at 14.
  CHECK(r.diagnostics[0].location->column == 14);
}

TEST_CASE("tokenize: punctuation, escapes and code-point columns") {
  auto r = tokenize("link TC-1 -> LS-2 via FI-3\nhazard H-1 losses=[L-1, L-2] \"Fußgänger \\\"x\\\" \\\\\"",
                    "t");
  CHECK(r.diagnostics.empty());
  CHECK(kinds(r) == std::vector<TokenKind>{
                        TokenKind::keyword, TokenKind::identifier, TokenKind::arrow,
                        TokenKind::identifier, TokenKind::keyword, TokenKind::identifier,
                        TokenKind::keyword, TokenKind::identifier, TokenKind::identifier,
                        TokenKind::equals, TokenKind::lbracket, TokenKind::identifier,
                        TokenKind::comma, TokenKind::identifier, TokenKind::rbracket,
                        TokenKind::string});
  CHECK(r.tokens.back().text == "Fußgänger \"x\" \\");

  auto u = tokenize("loss L-1 \"ÄÖÜ\" @", "t");
  REQUIRE(u.diagnostics.size() == 1);
  CHECK(u.diagnostics[0].code == "E101");
  CHECK(u.diagnostics[0].location->column == 16);
}

TEST_CASE("parse: UCA declaration from the case study") {
  auto r = parse(
      "uca UCA-1 action=CA-2 guide=not_provided behavior=HB-1 text \"Der Bewegungsregler gibt "
      "keinen Bremsbefehl\"",
      "t");
  CHECK(r.diagnostics.empty());
  REQUIRE(r.declarations.size() == 1);
  const Declaration& d = r.declarations[0];
  CHECK(d.keyword == DeclKeyword::uca);
  CHECK(d.id == "UCA-1");
  CHECK(d.find("action")->items == std::vector<std::string>{"CA-2"});
  CHECK(d.find("text")->items.front() == "Der Bewegungsregler gibt keinen Bremsbefehl");
}

TEST_CASE("parse: empty file") {
  auto r = parse("", "t");
  CHECK(r.declarations.empty());
  CHECK(r.diagnostics.empty());
}

TEST_CASE("parse: a bogus keyword on line 2 costs only that line") {
  auto r = parse("loss L-1 \"a\"\nlos L-2 \"b\"\nloss L-3 \"c\"\ntrigger TC-1 \"d\"\n", "t");
  CHECK(r.declarations.size() == 3);
  REQUIRE(r.diagnostics.size() == 1);
  CHECK(r.diagnostics[0].code == "E110");
  CHECK(r.diagnostics[0].location->line == 2);
  CHECK(r.diagnostics[0].location->column == 1);
}

TEST_CASE("parse: one diagnostic per bad line") {
  auto r = parse(
      "hazard H-1 losses=[L-1 L-2] \"x\"\n"   // E112
      "loss L-1 text\n"                       // E113
      "loss L-2 colour=red \"x\"\n"           // E114
      "action CA-1 from=C-1 \"x\"\n"          // E111
      "loss \"x\"\n"                          // E113 missing id
      "loss L-3 \"ok\" \"again\" \"x\n",      // E100 wins for a line with a lexical error
      "t");
  std::vector<std::string> codes;
  for (const auto& d : r.diagnostics) codes.push_back(d.code);
  CHECK(codes == std::vector<std::string>{"E112", "E113", "E114", "E111", "E113", "E100"});
  CHECK(r.declarations.empty());
  CHECK(r.diagnostics[1].message == "expected a quoted string after \"text\"");
  for (std::size_t i = 0; i + 1 < r.diagnostics.size(); ++i) {
    CHECK(r.diagnostics[i].location->line < r.diagnostics[i + 1].location->line);
  }
}

TEST_CASE("parse: CRLF, BOM and the arrow form of link") {
  auto r = parse("\xEF\xBB\xBFloss L-1 \"a\"\r\nlink TC-1 -> LS-2 via FI-3\r\n", "t");
  CHECK(r.diagnostics.empty());
  REQUIRE(r.declarations.size() == 2);
  CHECK(r.declarations[0].id_span.column == 6);
  const Declaration& l = r.declarations[1];
  CHECK(l.keyword == DeclKeyword::link);
  CHECK(l.id == "TC-1");
  CHECK(l.find("scenario")->items.front() == "LS-2");
  CHECK(l.find("insufficiency")->items.front() == "FI-3");
}

TEST_CASE("emit_diagnostics: golden E002 line") {
  std::vector<Diagnostic> d{make_error("E002", "unknown reference \"UCA-9\"", at(14, 23))};
  CHECK(emit_diagnostics(d, DiagnosticStyle::human) == read_text(golden_path("diag_E002.txt")));
}

TEST_CASE("emit_diagnostics: empty list") {
  CHECK(emit_diagnostics({}, DiagnosticStyle::human).empty());
  CHECK(emit_diagnostics({}, DiagnosticStyle::machine).empty());
}

TEST_CASE("emit_diagnostics: mixed severities keep input order") {
  std::vector<Diagnostic> d{
      make_warning("W101", "hazard H-2 is not mapped to any loss", at(3, 1)),
      make_error("E004", "control action CA-1 has the same source and target", at(7, 12)),
      make_warning("W106", "no environment process designated")};
  CHECK(emit_diagnostics(d, DiagnosticStyle::human) == read_text(golden_path("diag_mixed.txt")));
  CHECK(emit_diagnostics(d, DiagnosticStyle::machine) ==
        read_text(golden_path("diag_mixed.jsonl")));
}

TEST_CASE("quote_dsl escapes what the lexer unescapes") {
  const std::string raw = "a \"b\" \\ c\nd";
  auto r = tokenize(quote_dsl(raw), "t");
  REQUIRE(r.tokens.size() == 1);
  CHECK(r.tokens[0].text == raw);
}

TEST_CASE("canonical DSL of every corpus file reassembles to the same model") {
  for (const auto& file : stpa::test::corpus_files()) {
    CAPTURE(file);
    auto first = stpa::test::load_files({file});
    const std::string canonical = to_canonical_dsl(first.model);
    auto second = stpa::test::load_text(canonical, "canonical.stpa");
    CHECK(first.model == second.model);
    CHECK(to_canonical_dsl(second.model) == canonical);
  }
}
