#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <fstream>
#include <sstream>

#include "stpa/classifier.hpp"
#include "stpa/cli.hpp"
#include "stpa/dsl.hpp"
#include "stpa/export.hpp"
#include "stpa/generation.hpp"
#include "stpa/integrity.hpp"
#include "stpa/trace.hpp"

namespace py = pybind11;
using namespace stpa;

namespace {

EntityId id_arg(const std::string& text) {
  auto id = EntityId::parse(text);
  if (!id) throw py::value_error("malformed id \"" + text + "\"");
  return *id;
}

py::dict diag_dict(const Diagnostic& d) {
  py::dict out;
  out["code"] = d.code;
  out["severity"] = std::string(severity_name(d.severity));
  out["message"] = d.message;
  if (d.location) {
    out["file"] = d.location->file;
    out["line"] = d.location->line;
    out["column"] = d.location->column;
  } else {
    out["file"] = py::none();
    out["line"] = py::none();
    out["column"] = py::none();
  }
  return out;
}

py::list diag_list(const std::vector<Diagnostic>& ds) {
  py::list out;
  for (const auto& d : ds) out.append(diag_dict(d));
  return out;
}

py::tuple finish(std::vector<Declaration> decls, std::vector<Diagnostic> diags) {
  AssemblyResult a = assemble_model(decls);
  diags.insert(diags.end(), a.diagnostics.begin(), a.diagnostics.end());
  a.model.valid = !has_errors(diags);
  return py::make_tuple(std::move(a.model), diag_list(diags));
}

py::dict trace_dict(const TraceTree& t) {
  py::dict children;
  for (const auto& [parent, kids] : t.children) {
    py::list ks;
    for (auto k : kids) ks.append(k.str());
    children[py::str(parent.str())] = ks;
  }
  py::list nodes;
  for (auto n : t.nodes) nodes.append(n.str());
  py::dict out;
  out["root"] = t.root.str();
  out["nodes"] = nodes;
  out["children"] = children;
  return out;
}

py::dict stats_dict(const StatsReport& r) {
  py::dict entities;
  for (const auto& [kind, n] : r.entities) entities[py::str(std::string(registry_name(kind)))] = n;
  py::dict per_trigger, per_scenario;
  for (const auto& [id, n] : r.links_per_trigger) per_trigger[py::str(id.str())] = n;
  for (const auto& [id, n] : r.links_per_scenario) per_scenario[py::str(id.str())] = n;
  py::dict out;
  out["entities"] = entities;
  out["links"] = r.links;
  out["ucas_identified"] = r.ucas_identified;
  out["ucas_sotif_scope"] = r.ucas_sotif_scope;
  out["ucas_excluded"] = r.ucas_excluded;
  out["ucas_candidate"] = r.ucas_candidate;
  out["scenarios_retained"] = r.scenarios_retained;
  out["scenarios_excluded"] = r.scenarios_excluded;
  out["links_per_trigger"] = per_trigger;
  out["links_per_scenario"] = per_scenario;
  out["max_scenarios_per_trigger"] = r.max_scenarios_per_trigger;
  out["max_triggers_per_scenario"] = r.max_triggers_per_scenario;
  out["max_insufficiencies_per_chain"] = r.max_insufficiencies_per_chain;
  return out;
}

}  // namespace

PYBIND11_MODULE(_stpa, m) {
  m.doc() = "STPA/SOTIF analysis core";

  py::register_exception<ModelError>(m, "ModelError", PyExc_ValueError);

  py::class_<AnalysisModel>(m, "Model")
      .def_readonly("valid", &AnalysisModel::valid)
      .def("__eq__", [](const AnalysisModel& a, const AnalysisModel& b) { return a == b; })
      .def("to_dsl", &to_canonical_dsl)
      .def("to_json", &export_json)
      .def("export", [](const AnalysisModel& model, const std::string& format) {
        auto f = parse_export_format(format);
        if (!f) throw py::value_error("unknown export format \"" + format + "\"");
        return export_model(model, *f);
      }, py::arg("format"))
      .def("text", [](const AnalysisModel& model, const std::string& id) {
        return entity_text(model, id_arg(id));
      }, py::arg("id"))
      .def("stats", [](const AnalysisModel& model) { return stats_dict(stats(model)); })
      .def("trace_loss", [](const AnalysisModel& model, const std::string& id) {
        return trace_dict(trace_from_loss(model, id_arg(id)));
      }, py::arg("id"))
      .def("trace_trigger", [](const AnalysisModel& model, const std::string& id) {
        return trace_dict(trace_from_trigger(model, id_arg(id)));
      }, py::arg("id"))
      .def("uca_candidates", [](const AnalysisModel& model) {
        std::vector<std::string> out;
        for (const auto& u : enumerate_uca_candidates(model)) out.push_back(to_dsl(u));
        return out;
      })
      .def("expand_scenarios", [](const AnalysisModel& model, bool merge) {
        ScenarioExpansion e = expand_loss_scenarios(model, taxonomy_for(model, merge));
        std::vector<std::string> lines;
        for (const auto& s : e.scenarios) lines.push_back(to_dsl(s));
        return py::make_tuple(lines, diag_list(e.diagnostics));
      }, py::arg("merge_controller_flaws") = false)
      .def("sotif_partition", [](const AnalysisModel& model, bool merge) {
        SotifPartition p = filter_sotif(model, taxonomy_for(model, merge));
        std::vector<std::string> kept, dropped;
        for (const auto& s : p.retained) kept.push_back(s.id.str());
        for (const auto& s : p.excluded) dropped.push_back(s.id.str());
        return py::make_tuple(kept, dropped);
      }, py::arg("merge_controller_flaws") = false)
      .def("attach", [](const AnalysisModel& model, const std::string& trigger,
                        const std::string& scenario, const std::string& insufficiency) {
        AttachResult r = attach_trigger(model, id_arg(trigger), id_arg(scenario),
                                        id_arg(insufficiency));
        return py::make_tuple(std::move(r.model), diag_list(r.diagnostics));
      }, py::arg("trigger"), py::arg("scenario"), py::arg("insufficiency"));

  m.def("loads", [](const std::string& text, const std::string& file) {
    ParseResult p = parse(text, file);
    return finish(std::move(p.declarations), std::move(p.diagnostics));
  }, py::arg("text"), py::arg("file") = "<string>",
        "Parse and assemble DSL text. Returns (model, diagnostics).");
  m.def("load", [](const std::vector<std::string>& paths) {
    std::vector<Declaration> decls;
    std::vector<Diagnostic> diags;
    for (const auto& path : paths) {
      std::ifstream in(path, std::ios::binary);
      if (!in) throw py::value_error("cannot read \"" + path + "\"");
      std::stringstream ss;
      ss << in.rdbuf();
      ParseResult p = parse(ss.str(), path);
      decls.insert(decls.end(), p.declarations.begin(), p.declarations.end());
      diags.insert(diags.end(), p.diagnostics.begin(), p.diagnostics.end());
    }
    return finish(std::move(decls), std::move(diags));
  }, py::arg("paths"), "Parse and assemble several .stpa files as one model.");
  m.def("from_json", [](const std::string& text) {
    AssemblyResult a = import_json(text);
    return py::make_tuple(std::move(a.model), diag_list(a.diagnostics));
  }, py::arg("text"));
  m.def("run_cli", [](const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int code = run_cli(args, out, err);
    return py::make_tuple(code, out.str(), err.str());
  }, py::arg("args"), "Runs the command-line driver in-process. Returns (exit, stdout, stderr).");
}
