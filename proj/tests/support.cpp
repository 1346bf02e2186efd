#include "support.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>

#include "stpa/dsl.hpp"

namespace stpa::test {

namespace fs = std::filesystem;

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

std::vector<std::string> corpus_files() {
  std::vector<std::string> out;
  for (const auto& e : fs::directory_iterator(STPA_CORPUS_DIR)) {
    if (e.path().extension() == ".stpa") out.push_back(e.path().string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string golden_path(const std::string& name) {
  return std::string(STPA_TEST_DIR) + "/golden/" + name;
}

std::string fixture_path(const std::string& name) {
  return std::string(STPA_TEST_DIR) + "/fixtures/" + name;
}

AssemblyResult load_text(const std::string& source, const std::string& file) {
  ParseResult p = parse(source, file);
  AssemblyResult a = assemble_model(p.declarations);
  p.diagnostics.insert(p.diagnostics.end(), a.diagnostics.begin(), a.diagnostics.end());
  a.diagnostics = std::move(p.diagnostics);
  a.model.valid = !has_errors(a.diagnostics);
  return a;
}

AssemblyResult load_files(const std::vector<std::string>& files) {
  std::vector<Declaration> all;
  std::vector<Diagnostic> diags;
  for (const auto& f : files) {
    ParseResult p = parse(read_text(f), f);
    diags.insert(diags.end(), p.diagnostics.begin(), p.diagnostics.end());
    std::move(p.declarations.begin(), p.declarations.end(), std::back_inserter(all));
  }
  AssemblyResult a = assemble_model(all);
  diags.insert(diags.end(), a.diagnostics.begin(), a.diagnostics.end());
  a.diagnostics = std::move(diags);
  a.model.valid = !has_errors(a.diagnostics);
  return a;
}

const AnalysisModel& corpus() {
  static const AnalysisModel model = load_files(corpus_files()).model;
  return model;
}

std::size_t count_code(const std::vector<Diagnostic>& diags, const std::string& code) {
  return static_cast<std::size_t>(
      std::count_if(diags.begin(), diags.end(), [&](const Diagnostic& d) { return d.code == code; }));
}

namespace {

const char* const kWords[] = {"Fahrzeug", "Fußgänger*in", "Straße", "Sensor",  "Blendung",
                              "Regen",    "spät",         "\"zitiert\"", "a\\b", "zwei\nZeilen",
                              "Ä Ö Ü",    "#kein Kommentar", "x=y",   "[Liste]", "Bremse"};

class Gen {
 public:
  explicit Gen(std::mt19937& rng) : rng_(rng) {}

  int range(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool chance(double p) { return std::bernoulli_distribution(p)(rng_); }

  template <class T>
  const T& pick(const std::vector<T>& v) {
    return v[static_cast<std::size_t>(range(0, static_cast<int>(v.size()) - 1))];
  }

  // Non-empty random subset of 1..n, sorted.
  std::vector<int> subset(int n) {
    std::vector<int> out;
    for (int i = 1; i <= n; ++i) {
      if (chance(0.5)) out.push_back(i);
    }
    if (out.empty()) out.push_back(range(1, n));
    return out;
  }

  std::string text() {
    std::string s;
    int n = range(1, 4);
    for (int i = 0; i < n; ++i) {
      if (i) s += ' ';
      s += kWords[range(0, static_cast<int>(std::size(kWords)) - 1)];
    }
    return s;
  }

 private:
  std::mt19937& rng_;
};

// Independent of the library writer on purpose.
std::string q(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
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

std::string ids(const char* prefix, const std::vector<int>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += prefix + std::to_string(v[i]);
  }
  return s + "]";
}

const char* kind_keyword(ComponentKind k) {
  switch (k) {
    case ComponentKind::controller: return "controller";
    case ComponentKind::human_controller: return "human";
    case ComponentKind::sensor: return "sensor";
    case ComponentKind::actuator: return "actuator";
    case ComponentKind::process: return "process";
  }
  return "";
}

const char* const kGuide[] = {"not_provided", "provided_unsafe", "wrong_timing", "wrong_duration"};
const char* const kStatus[] = {"candidate", "retained", "excluded"};
const char* const kCategory[] = {"controller", "feedback_path", "control_path", "process_input"};
const char* const kDefault[] = {"sotif_candidate", "functional_safety", "needs_review"};
const char* const kRelevance[] = {"sotif", "functional_safety", "needs_review"};
const char* const kLocus[] = {"controller", "human_controller", "sensor", "actuator", "process"};

}  // namespace

RandomModel random_model(std::mt19937& rng, RandomOptions options) {
  Gen g(rng);
  Truth t;
  std::vector<std::string> lines;
  auto C = [](int i) { return "C-" + std::to_string(i); };

  t.losses = g.range(1, 3);
  for (int i = 1; i <= t.losses; ++i) {
    lines.push_back("loss L-" + std::to_string(i) + " text " + q(g.text()));
  }
  t.hazards = g.range(1, 3);
  for (int i = 1; i <= t.hazards; ++i) {
    lines.push_back("hazard H-" + std::to_string(i) + " losses=" + ids("L-", g.subset(t.losses)) +
                    " " + q(g.text()));
  }
  t.behaviors = g.range(1, 4);
  for (int i = 1; i <= t.behaviors; ++i) {
    lines.push_back("behavior HB-" + std::to_string(i) +
                    " hazards=" + ids("H-", g.subset(t.hazards)) + " text " + q(g.text()));
  }

  // Components: at least one controller and one process; one environment.
  int n = 0;
  std::vector<int> controllers, targets, all;
  const int n_ctrl = g.range(1, 3), n_sens = g.range(0, 2), n_act = g.range(0, 2),
            n_proc = g.range(1, 2);
  int env = g.range(1, n_proc);
  bool mark_env = n_proc > 1 || g.chance(0.5);
  auto add_comp = [&](ComponentKind k, bool environment) {
    t.components.push_back({++n, k, environment});
    all.push_back(n);
    std::string line = std::string(kind_keyword(k)) + " " + C(n);
    if (environment) line += " environment=true";
    lines.push_back(line + " text " + q(g.text()));
  };
  for (int i = 0; i < n_ctrl; ++i) {
    add_comp(g.chance(0.3) ? ComponentKind::human_controller : ComponentKind::controller, false);
    controllers.push_back(n);
    if (t.components.back().kind == ComponentKind::controller) targets.push_back(n);
  }
  for (int i = 0; i < n_sens; ++i) add_comp(ComponentKind::sensor, false);
  for (int i = 0; i < n_act; ++i) {
    add_comp(ComponentKind::actuator, false);
    targets.push_back(n);
  }
  for (int i = 1; i <= n_proc; ++i) {
    add_comp(ComponentKind::process, mark_env && i == env);
    targets.push_back(n);
  }

  const int n_actions = g.range(0, 4);
  for (int i = 0; i < n_actions; ++i) {
    int src = g.pick(controllers), dst = g.pick(targets);
    if (src == dst) continue;
    Truth::Act a{static_cast<int>(t.actions.size()) + 1, src, dst, {}};
    if (g.chance(0.25)) a.behaviors = g.subset(t.behaviors);
    std::string line = "action CA-" + std::to_string(a.id) + " from=" + C(src) + " to=" + C(dst);
    if (!a.behaviors.empty()) line += " behaviors=" + ids("HB-", a.behaviors);
    lines.push_back(line + " text " + q(g.text()));
    t.actions.push_back(a);
  }

  const int n_links = g.range(0, 5);
  for (int i = 0; i < n_links; ++i) {
    bool feedback = g.chance(0.5);
    int src = g.pick(all), dst = feedback ? g.pick(controllers) : g.pick(all);
    if (src == dst) continue;
    Truth::Link l{static_cast<int>(t.links.size()) + 1, src, dst, feedback};
    lines.push_back("feedback FB-" + std::to_string(l.id) + " from=" + C(src) + " to=" + C(dst) +
                    " kind=" + (feedback ? "feedback" : "other") + " " + q(g.text()));
    t.links.push_back(l);
  }

  // UCAs on a random part of the (action, guide, behavior) grid.
  for (const auto& a : t.actions) {
    for (int gw = 0; gw < 4; ++gw) {
      for (int b = 1; b <= t.behaviors; ++b) {
        if (!g.chance(0.3)) continue;
        Truth::Uca u{static_cast<int>(t.ucas.size()) + 1, a.id, gw, b,
                     static_cast<UcaStatus>(g.range(0, 2))};
        std::string line = "uca UCA-" + std::to_string(u.id) + " action=CA-" +
                           std::to_string(a.id) + " guide=" + kGuide[gw] +
                           " behavior=HB-" + std::to_string(b) +
                           " status=" + kStatus[static_cast<int>(u.status)];
        if (u.status == UcaStatus::excluded) line += " reason=" + q(g.text());
        if (g.chance(0.5)) line += " text " + q(g.text());
        lines.push_back(line);
        t.ucas.push_back(u);
      }
    }
  }

  const int n_ctx = g.range(0, 2);
  for (int i = 1; i <= n_ctx; ++i) {
    Truth::Ctx c{i, g.subset(t.behaviors)};
    lines.push_back("context CTX-" + std::to_string(i) + " behaviors=" + ids("HB-", c.behaviors) +
                    " text " + q(g.text()));
    t.contexts.push_back(c);
  }

  if (options.scenarios) {
    // Declared factors. The two controller flaws, when present, stay in the
    // controller category so that merging them is well defined.
    const int n_factors = g.range(0, 4);
    for (int i = 1; i <= n_factors; ++i) {
      Truth::Factor f;
      f.id = i;
      int category = g.range(0, 3);
      if (i <= 2 && g.chance(0.5)) {
        f.label = i == 1 ? "control_algorithm_flaw" : "process_model_flaw";
        category = 0;
      } else {
        f.label = "factor_" + std::to_string(i);
      }
      f.category = static_cast<FactorCategory>(category);
      for (int k : g.subset(5)) f.loci.push_back(static_cast<ComponentKind>(k - 1));
      f.relevance = static_cast<DefaultRelevance>(g.range(0, 2));
      std::string loci;
      for (auto k : f.loci) loci += (loci.empty() ? "" : ", ") + std::string(kLocus[int(k)]);
      std::string line = "factor CF-" + std::to_string(i) + " label=" + f.label +
                         " category=" + kCategory[category] + " loci=[" + loci +
                         "] relevance=" + kDefault[int(f.relevance)];
      if (g.chance(0.7)) line += " text " + q(g.text());
      lines.push_back(line);
      t.factors.push_back(f);
    }

    // Authored scenarios that satisfy every invariant; keys are unique.
    std::set<std::tuple<int, int, int, int>> keys;
    const int attempts = t.factors.empty() || t.ucas.empty() ? 0 : g.range(0, 12);
    for (int i = 0; i < attempts; ++i) {
      const auto& u = g.pick(t.ucas);
      const auto& f = g.pick(t.factors);
      std::vector<int> loci;
      for (const auto& c : t.components) {
        if (std::find(f.loci.begin(), f.loci.end(), c.kind) != f.loci.end()) loci.push_back(c.id);
      }
      if (loci.empty()) continue;
      std::vector<int> ctxs{0};
      for (const auto& c : t.contexts) {
        if (std::find(c.behaviors.begin(), c.behaviors.end(), u.behavior) != c.behaviors.end()) {
          ctxs.push_back(c.id);
        }
      }
      Truth::Scen s{static_cast<int>(t.scenarios.size()) + 1, u.id, f.id, g.pick(loci),
                    g.pick(ctxs), std::nullopt};
      if (!keys.insert({s.uca, s.factor, s.locus, s.context}).second) continue;
      if (g.chance(0.3)) s.relevance = static_cast<Relevance>(g.range(0, 2));
      std::string line = "scenario LS-" + std::to_string(s.id) + " uca=UCA-" +
                         std::to_string(s.uca) + " factor=CF-" + std::to_string(s.factor) +
                         " locus=" + C(s.locus);
      if (s.context) line += " context=CTX-" + std::to_string(s.context);
      if (s.relevance) line += std::string(" relevance=") + kRelevance[int(*s.relevance)];
      if (g.chance(0.5)) line += " text " + q(g.text());
      lines.push_back(line);
      t.scenarios.push_back(s);
    }
  }

  t.triggers = g.range(0, 4);
  for (int i = 1; i <= t.triggers; ++i) {
    lines.push_back("trigger TC-" + std::to_string(i) + " " + q(g.text()));
  }
  t.insufficiencies = g.range(0, 3);
  for (int i = 1; i <= t.insufficiencies; ++i) {
    lines.push_back("insufficiency FI-" + std::to_string(i) + " locus=" + C(g.pick(all)) +
                    " text " + q(g.text()));
  }
  if (t.triggers && t.insufficiencies && !t.scenarios.empty()) {
    std::set<std::tuple<int, int, int>> seen;
    const int n_tl = g.range(0, 15);
    for (int i = 0; i < n_tl; ++i) {
      std::tuple<int, int, int> l{g.range(1, t.triggers), g.pick(t.scenarios).id,
                                  g.range(1, t.insufficiencies)};
      if (!seen.insert(l).second) continue;
      auto [tc, ls, fi] = l;
      lines.push_back("link TC-" + std::to_string(tc) + " -> LS-" + std::to_string(ls) +
                      " via FI-" + std::to_string(fi));
    }
    t.trigger_links.assign(seen.begin(), seen.end());
  }

  if (options.shuffle && g.chance(0.5)) std::shuffle(lines.begin(), lines.end(), rng);
  RandomModel out;
  for (const auto& l : lines) out.dsl += l + "\n";
  out.truth = std::move(t);
  return out;
}

}  // namespace stpa::test
