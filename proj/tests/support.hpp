#pragma once

#include <optional>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "stpa/integrity.hpp"
#include "stpa/model.hpp"

namespace stpa::test {

std::string read_text(const std::string& path);
std::vector<std::string> corpus_files();
std::string golden_path(const std::string& name);
std::string fixture_path(const std::string& name);

// Parse + assemble one source; diagnostics from both stages.
AssemblyResult load_text(const std::string& source, const std::string& file = "t.stpa");
AssemblyResult load_files(const std::vector<std::string>& files);
const AnalysisModel& corpus();

std::size_t count_code(const std::vector<Diagnostic>& diags, const std::string& code);

// What the random generator emitted, kept as plain records so that oracles
// can recount without going through the library.
struct Truth {
  struct Comp {
    int id;
    ComponentKind kind;
    bool environment;
  };
  struct Act {
    int id, source, target;
    std::vector<int> behaviors;  // empty = all
  };
  struct Link {
    int id, source, target;
    bool feedback;
  };
  struct Uca {
    int id, action, guide, behavior;
    UcaStatus status;
  };
  struct Factor {
    int id;
    std::string label;
    FactorCategory category;
    std::vector<ComponentKind> loci;
    DefaultRelevance relevance;
  };
  struct Ctx {
    int id;
    std::vector<int> behaviors;
  };
  struct Scen {
    int id, uca, factor, locus, context;  // context 0 = none
    std::optional<Relevance> relevance;
  };

  int losses = 0, hazards = 0, behaviors = 0, triggers = 0, insufficiencies = 0;
  std::vector<Comp> components;
  std::vector<Act> actions;
  std::vector<Link> links;
  std::vector<Uca> ucas;
  std::vector<Factor> factors;
  std::vector<Ctx> contexts;
  std::vector<Scen> scenarios;
  std::vector<std::tuple<int, int, int>> trigger_links;  // unique
};

struct RandomModel {
  std::string dsl;
  Truth truth;
};

struct RandomOptions {
  bool scenarios = true;  // declare factors and authored scenarios
  bool shuffle = true;    // permute declaration lines
};

RandomModel random_model(std::mt19937& rng, RandomOptions options = {});

}  // namespace stpa::test
