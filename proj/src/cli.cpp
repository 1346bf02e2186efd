#include "stpa/cli.hpp"

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include "CLI11.hpp"
#include "stpa/classifier.hpp"
#include "stpa/dsl.hpp"
#include "stpa/export.hpp"
#include "stpa/generation.hpp"
#include "stpa/integrity.hpp"
#include "stpa/trace.hpp"

namespace stpa {

namespace {

constexpr int kOk = 0;
constexpr int kErrors = 1;
constexpr int kUsage = 2;

struct Loaded {
  AnalysisModel model;
  std::vector<Diagnostic> diagnostics;
  std::size_t declarations = 0;
};

struct IoFailure {
  std::string message;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoFailure{"cannot read " + path};
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

// All files form one model; declarations keep file order.
Loaded load(const std::vector<std::string>& files) {
  Loaded out;
  std::vector<Declaration> all;
  for (const auto& f : files) {
    ParseResult p = parse(read_file(f), f);
    out.diagnostics.insert(out.diagnostics.end(), p.diagnostics.begin(), p.diagnostics.end());
    std::move(p.declarations.begin(), p.declarations.end(), std::back_inserter(all));
  }
  out.declarations = all.size();
  AssemblyResult a = assemble_model(all);
  out.diagnostics.insert(out.diagnostics.end(), a.diagnostics.begin(), a.diagnostics.end());
  out.model = std::move(a.model);
  out.model.valid = !has_errors(out.diagnostics);
  return out;
}

void append_to(const std::string& path, const std::string& header, const std::string& body) {
  std::string existing = read_file(path);
  std::ofstream f(path, std::ios::binary | std::ios::app);
  if (!f) throw IoFailure{"cannot write " + path};
  if (!existing.empty() && existing.back() != '\n') f << '\n';
  f << '\n' << header << '\n' << body;
  if (!f) throw IoFailure{"cannot write " + path};
}

class Driver {
 public:
  Driver(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

  int run(const std::vector<std::string>& args) {
    CLI::App app{"STPA analysis toolkit for SOTIF triggering conditions", "stpa"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_flag("--machine", machine_, "Machine-readable diagnostics (JSON lines)");

    auto files = [this](CLI::App* sub) {
      sub->add_option("files", files_, "Model files (.stpa)")->required();
    };

    auto* check = app.add_subcommand("check", "Parse, assemble and validate");
    files(check);

    auto* gen = app.add_subcommand("gen", "Generate UCA candidates or loss scenarios");
    gen->require_subcommand(1);
    auto* gen_ucas = gen->add_subcommand("ucas", "UCA candidates from the guide words");
    files(gen_ucas);
    gen_ucas->add_flag("--write", write_, "Append new declarations to the last file");
    auto* gen_scen = gen->add_subcommand("scenarios", "Loss-scenario skeletons");
    files(gen_scen);
    gen_scen->add_flag("--write", write_, "Append new declarations to the last file");
    gen_scen->add_flag("--merge-controller-flaws", merge_,
                       "Treat algorithm and process-model flaws as one factor");

    auto* classify = app.add_subcommand("classify", "SOTIF relevance partition");
    files(classify);

    auto* trace = app.add_subcommand("trace", "Trace from a loss or a triggering condition");
    files(trace);
    trace->add_option("--from", from_, "Loss or trigger id")->required();

    auto* stats_cmd = app.add_subcommand("stats", "Entity and link statistics");
    files(stats_cmd);

    auto* exp = app.add_subcommand("export", "Export the model");
    files(exp);
    exp->add_option("--format", format_, "json, csv, dot or markdown")->required();
    exp->add_option("--out", out_path_, "Output file (default stdout)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
      app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
      out_ << app.help();
      return kOk;
    } catch (const CLI::CallForAllHelp&) {
      out_ << app.help("", CLI::AppFormatMode::All);
      return kOk;
    } catch (const CLI::ParseError& e) {
      err_ << "stpa: " << e.what() << "\n";
      return kUsage;
    }

    try {
      if (check->parsed()) return cmd_check();
      if (gen_ucas->parsed()) return cmd_gen_ucas();
      if (gen_scen->parsed()) return cmd_gen_scenarios();
      if (classify->parsed()) return cmd_classify();
      if (trace->parsed()) return cmd_trace();
      if (stats_cmd->parsed()) return cmd_stats();
      if (exp->parsed()) return cmd_export();
    } catch (const IoFailure& e) {
      err_ << "stpa: " << e.message << "\n";
      return kUsage;
    } catch (const ModelError& e) {
      report({make_error(e.code(), e.what())});
      return kErrors;
    }
    return kUsage;
  }

 private:
  std::ostream& out_;
  std::ostream& err_;
  bool machine_ = false;
  bool write_ = false;
  bool merge_ = false;
  std::vector<std::string> files_;
  std::string from_;
  std::string format_;
  std::string out_path_;

  void report(const std::vector<Diagnostic>& diags) {
    err_ << emit_diagnostics(diags,
                             machine_ ? DiagnosticStyle::machine : DiagnosticStyle::human);
  }

  // Loads the files and reports diagnostics; nullopt when errors block the
  // command.
  std::optional<Loaded> load_valid() {
    Loaded l = load(files_);
    report(l.diagnostics);
    if (!l.model.valid) return std::nullopt;
    return l;
  }

  int cmd_check() {
    Loaded l = load(files_);
    report(l.diagnostics);
    std::size_t errors = count_errors(l.diagnostics);
    out_ << l.declarations << " declarations, " << errors << " errors, "
         << l.diagnostics.size() - errors << " warnings\n";
    return errors == 0 ? kOk : kErrors;
  }

  int cmd_gen_ucas() {
    auto l = load_valid();
    if (!l) return kErrors;
    const auto candidates = enumerate_uca_candidates(l->model);
    std::string body;
    std::size_t fresh = 0;
    for (const auto& u : candidates) {
      if (l->model.ucas.count(u.id) != 0) continue;
      body += to_dsl(u) + "\n";
      ++fresh;
    }
    err_ << candidates.size() << " candidates: " << candidates.size() - fresh << " authored, "
         << fresh << " new\n";
    if (write_) {
      if (fresh != 0) append_to(files_.back(), "# generated UCA candidates", body);
    } else {
      out_ << body;
    }
    return kOk;
  }

  int cmd_gen_scenarios() {
    auto l = load_valid();
    if (!l) return kErrors;
    const Taxonomy taxonomy = taxonomy_for(l->model, merge_);
    ScenarioExpansion x = expand_loss_scenarios(l->model, taxonomy);
    report(x.diagnostics);

    std::string body;
    for (const auto& f : taxonomy.factors) {
      if (l->model.factors.count(f.id) == 0) body += to_dsl(f) + "\n";
    }
    std::size_t fresh = 0;
    for (const auto& s : x.scenarios) {
      if (l->model.scenarios.count(s.id) != 0) continue;
      body += to_dsl(s) + "\n";
      ++fresh;
    }
    err_ << x.scenarios.size() << " scenarios: " << x.scenarios.size() - fresh << " authored, "
         << fresh << " new\n";
    if (write_) {
      if (!body.empty()) append_to(files_.back(), "# generated loss scenarios", body);
    } else {
      out_ << body;
    }
    return kOk;
  }

  int cmd_classify() {
    auto l = load_valid();
    if (!l) return kErrors;
    const Taxonomy taxonomy = taxonomy_for(l->model, false);
    const SotifPartition p = filter_sotif(l->model, taxonomy);
    out_ << "scenarios: " << p.retained.size() + p.excluded.size() << "\n"
         << "sotif_retained: " << p.retained.size() << "\n"
         << "sotif_excluded: " << p.excluded.size() << "\n";

    std::map<EntityId, std::pair<std::size_t, std::size_t>> per_factor;
    std::size_t overrides = 0;
    for (const auto& s : p.retained) ++per_factor[s.factor].first;
    for (const auto& s : p.excluded) ++per_factor[s.factor].second;
    for (const auto& [id, s] : l->model.scenarios) overrides += s.relevance ? 1 : 0;
    for (const auto& f : taxonomy.factors) {
      auto [kept, dropped] = per_factor[f.id];
      out_ << f.id.str() << ' ' << f.label << " (" << to_token(f.default_relevance)
           << "): retained " << kept << ", excluded " << dropped << "\n";
    }
    out_ << "overrides: " << overrides << "\n";
    return kOk;
  }

  int cmd_trace() {
    auto l = load_valid();
    if (!l) return kErrors;
    auto id = EntityId::parse(from_);
    if (!id || (id->kind != EntityKind::loss && id->kind != EntityKind::trigger)) {
      err_ << "stpa: --from expects a loss (L-n) or trigger (TC-n) id, got \"" << from_ << "\"\n";
      return kUsage;
    }
    TraceTree t = id->kind == EntityKind::loss ? trace_from_loss(l->model, *id)
                                               : trace_from_trigger(l->model, *id);
    out_ << render_trace(l->model, t);
    return kOk;
  }

  int cmd_stats() {
    auto l = load_valid();
    if (!l) return kErrors;
    out_ << render_stats(stats(l->model));
    return kOk;
  }

  int cmd_export() {
    auto format = parse_export_format(format_);
    if (!format) {
      err_ << "stpa: unsupported export format \"" << format_ << "\"\n";
      return kUsage;
    }
    auto l = load_valid();
    if (!l) return kErrors;
    std::string text = export_model(l->model, *format);
    if (out_path_.empty()) {
      out_ << text;
      return kOk;
    }
    std::ofstream f(out_path_, std::ios::binary);
    f << text;
    if (!f) throw IoFailure{"cannot write " + out_path_};
    return kOk;
  }
};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  return Driver(out, err).run(args);
}

}  // namespace stpa
