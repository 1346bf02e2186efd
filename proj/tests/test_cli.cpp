#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "stpa/cli.hpp"
#include "support.hpp"

namespace fs = std::filesystem;
using stpa::test::corpus_files;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = stpa::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> with_corpus(std::vector<std::string> args) {
  for (const auto& f : corpus_files()) args.push_back(f);
  return args;
}

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("stpa-cli-" + std::to_string(reinterpret_cast<std::uintptr_t>(this)) + "-" +
             std::to_string(counter_++));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }

  std::string write(const std::string& name, const std::string& content) const {
    auto p = path_ / name;
    std::ofstream(p, std::ios::binary) << content;
    return p.string();
  }

 private:
  fs::path path_;
  static inline int counter_ = 0;
};

const char* const kMini =
    "loss L-1 \"Verletzung\"\n"
    "hazard H-1 losses=[L-1] \"Abstand\"\n"
    "behavior HB-1 hazards=[H-1] \"Fahrzeug bremst nicht\"\n"
    "controller C-1 \"Regler\"\n"
    "process C-2 \"Fahrzeug in seiner Umgebung\"\n"
    "action CA-1 from=C-1 to=C-2 \"Bremsbefehl\"\n";

std::size_t count_lines_starting(const std::string& text, const std::string& prefix) {
  std::size_t n = 0;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) n += line.rfind(prefix, 0) == 0;
  return n;
}

}  // namespace

TEST_CASE("cli: stats on the corpus") {
  Run r = run(with_corpus({"stats"}));
  CHECK(r.code == 0);
  CHECK(r.err.empty());
  CHECK(r.out.find("scenarios: 103\n") != std::string::npos);
  CHECK(r.out.find("sotif_retained: 55\n") != std::string::npos);
  CHECK(r.out.find("triggers: 18\n") != std::string::npos);
}

TEST_CASE("cli: check") {
  TempDir dir;
  Run empty = run({"check", dir.write("empty.stpa", "")});
  CHECK(empty.code == 0);
  CHECK(empty.out == "0 declarations, 0 errors, 0 warnings\n");

  Run corpus = run(with_corpus({"check"}));
  CHECK(corpus.code == 0);
  CHECK(corpus.out == "521 declarations, 0 errors, 0 warnings\n");

  const std::string bad = dir.write("bad.stpa", "loss L-1 \"a\"\nhazard H-1 losses=[L-2] \"h\"\n");
  Run broken = run({"check", bad});
  CHECK(broken.code == 1);
  CHECK(broken.err.find(bad + ":2:20: error[E002]: unknown reference \"L-2\"") !=
        std::string::npos);

  Run machine = run({"--machine", "check", bad});
  CHECK(machine.code == 1);
  auto first = nlohmann::json::parse(machine.err.substr(0, machine.err.find('\n')));
  CHECK(first["code"] == "E002");
  CHECK(first["line"] == 2);
  CHECK(first["column"] == 20);
}

TEST_CASE("cli: gen ucas on a one-action model") {
  TempDir dir;
  const std::string mini = dir.write("mini.stpa", kMini);
  Run r = run({"gen", "ucas", mini});
  CHECK(r.code == 0);
  CHECK(count_lines_starting(r.out, "uca ") == 4);
  CHECK(r.err == "4 candidates: 0 authored, 4 new\n");

  Run w = run({"gen", "ucas", "--write", mini});
  CHECK(w.code == 0);
  CHECK(w.out.empty());
  Run again = run({"gen", "ucas", mini});
  CHECK(again.out.empty());
  CHECK(again.err == "4 candidates: 4 authored, 0 new\n");
  CHECK(run({"check", mini}).code == 0);
}

TEST_CASE("cli: gen scenarios --write reaches a fixpoint") {
  TempDir dir;
  const std::string mini = dir.write(
      "mini.stpa", std::string(kMini) +
                       "uca UCA-1 action=CA-1 guide=not_provided behavior=HB-1 status=retained\n");
  Run w = run({"gen", "scenarios", "--write", mini});
  CHECK(w.code == 0);
  Run again = run({"gen", "scenarios", mini});
  CHECK(again.code == 0);
  CHECK(again.out.empty());
  CHECK(again.err.find(", 0 new\n") != std::string::npos);
  Run check = run({"check", mini});
  CHECK(check.code == 0);
  CHECK(check.out.find(" 0 errors, 0 warnings") != std::string::npos);
}

TEST_CASE("cli: gen scenarios with merged controller flaws") {
  Run r = run(with_corpus({"gen", "scenarios", "--merge-controller-flaws"}));
  CHECK(r.code == 0);
  CHECK(r.err == "90 scenarios: 77 authored, 13 new\n");
  CHECK(count_lines_starting(r.out, "factor ") == 1);
  CHECK(r.out.find("label=controller_functional_flaw") != std::string::npos);
}

TEST_CASE("cli: classify") {
  Run r = run(with_corpus({"classify"}));
  CHECK(r.code == 0);
  CHECK(r.out.rfind("scenarios: 103\nsotif_retained: 55\nsotif_excluded: 48\n", 0) == 0);
  CHECK(r.out.find("overrides: ") != std::string::npos);
}

TEST_CASE("cli: trace") {
  Run loss = run(with_corpus({"trace", "--from", "L-1"}));
  CHECK(loss.code == 0);
  CHECK(loss.out.rfind("L-1 Verlust von Menschenleben oder Verletzung von Menschen\n", 0) == 0);
  CHECK(loss.out.find("TC-1 tiefstehende Sonne") != std::string::npos);

  Run trig = run(with_corpus({"trace", "--from", "TC-1"}));
  CHECK(trig.code == 0);
  CHECK(trig.out.rfind("TC-1 tiefstehende Sonne\n", 0) == 0);

  CHECK(run(with_corpus({"trace", "--from", "H-1"})).code == 2);
  CHECK(run(with_corpus({"trace", "--from", "L-9"})).code == 1);
  CHECK(run(with_corpus({"trace"})).code == 2);
}

TEST_CASE("cli: export") {
  TempDir dir;
  Run dot = run(with_corpus({"export", "--format", "dot"}));
  CHECK(dot.code == 0);
  CHECK(dot.out.find("Steuerbefehle") != std::string::npos);

  const std::string out = dir.write("model.json", "");
  Run json = run(with_corpus({"export", "--format", "json", "--out", out}));
  CHECK(json.code == 0);
  CHECK(json.out.empty());
  CHECK(nlohmann::json::parse(stpa::test::read_text(out))["scenarios"].size() == 103);

  Run bad = run(with_corpus({"export", "--format", "pdf"}));
  CHECK(bad.code == 2);
  CHECK(bad.err.find("unsupported export format") != std::string::npos);
}

TEST_CASE("cli: usage errors and help") {
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  Run missing = run({"check", "/nonexistent/x.stpa"});
  CHECK(missing.code == 2);
  CHECK(missing.err.find("cannot read /nonexistent/x.stpa") != std::string::npos);
  Run help = run({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("check") != std::string::npos);
}

TEST_CASE("cli: commands refuse invalid models") {
  TempDir dir;
  const std::string bad = dir.write("bad.stpa", "hazard H-1 losses=[L-2] \"h\"\n");
  for (auto args : std::vector<std::vector<std::string>>{{"stats", bad},
                                                         {"classify", bad},
                                                         {"gen", "ucas", bad},
                                                         {"export", "--format", "json", bad}}) {
    Run r = run(args);
    CHECK(r.code == 1);
    CHECK(r.out.empty());
    CHECK(r.err.find("error[E002]") != std::string::npos);
  }
}
