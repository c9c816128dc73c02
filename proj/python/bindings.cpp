#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "vfg/cylinders.hpp"
#include "vfg/decide.hpp"
#include "vfg/formulas.hpp"
#include "vfg/gfg.hpp"
#include "vfg/report.hpp"

namespace py = pybind11;
using namespace vfg;

// Reports cross the boundary as JSON text; the Python side decodes them.

namespace
{

DecideConfig config(int depth, std::size_t chain_budget, std::size_t iso_budget)
{
  DecideConfig c;
  c.depth = depth;
  c.chain_budget = chain_budget;
  c.iso_budget = iso_budget;
  return c;
}

} // namespace

PYBIND11_MODULE(_vfg, m)
{
  m.doc() = "graphs of finite groups";

  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
  py::register_exception<MalformedWord>(m, "MalformedWord", base.ptr());
  py::register_exception<BudgetExceeded>(m, "BudgetExceeded", base.ptr());

  py::class_<GraphOfGroups>(m, "Graph")
      .def_static("load", &load_gfg, py::arg("path"))
      .def_static("parse", &parse_gfg, py::arg("text"))
      .def("serialize", &serialize_gfg)
      .def("save", [](GraphOfGroups const &g, std::string const &path) { save_gfg(g, path); })
      .def_property_readonly("num_vertices", &GraphOfGroups::num_vertices)
      .def_property_readonly("num_edges", &GraphOfGroups::num_edges)
      .def("vertex_ids",
           [](GraphOfGroups const &g) {
             std::vector<std::string> ids;
             for (auto const &v : g.vertices())
               ids.push_back(v.id);
             return ids;
           })
      .def("vertex_orders",
           [](GraphOfGroups const &g) {
             std::vector<int> res;
             for (auto const &v : g.vertices())
               res.push_back(v.group->order());
             return res;
           })
      .def("reduce", [](GraphOfGroups const &g) { return reduce(g); })
      .def("canonical_key", [](GraphOfGroups const &g) { return canonical_key(g); })
      .def("normal_form",
           [](GraphOfGroups const &g, std::string const &w, int start) {
             return g.format(g.normal_form(g.parse(w, start)));
           },
           py::arg("word"), py::arg("start") = -1)
      .def("to_dot", [](GraphOfGroups const &g) { return export_dot(g); })
      .def("__repr__", [](GraphOfGroups const &g) {
        return "<Graph " + std::to_string(g.num_vertices()) + " vertices, " +
               std::to_string(g.num_edges()) + " edges>";
      });

  m.def("validation_report", [](GraphOfGroups const &g) { return dump(validation_report(g)); });
  m.def("analysis_report", [](GraphOfGroups const &g) { return dump(analysis_report(g)); });
  m.def("word_report", [](GraphOfGroups const &g, std::string const &w, int start) {
    return dump(word_report(g, g.parse(w, start)));
  }, py::arg("graph"), py::arg("word"), py::arg("start") = -1);
  m.def("cylinders_report", [](GraphOfGroups const &g) { return dump(cylinders_report(g)); });
  m.def("extensions_report", [](GraphOfGroups const &g, std::string const &kind) {
    return dump(extensions_report(g, kind));
  }, py::arg("graph"), py::arg("kind") = "all");

  m.def("isomorphic", [](GraphOfGroups const &a, GraphOfGroups const &b, std::size_t budget) {
    py::gil_scoped_release release;
    auto r = group_isomorphic(a, b, budget);
    return std::make_pair(to_string(r.verdict), r.provenance);
  }, py::arg("first"), py::arg("second"), py::arg("budget") = default_iso_budget);

  // (verdict, report JSON, certificate JSON or "")
  m.def("decide",
        [](GraphOfGroups const &a, GraphOfGroups const &b, int depth, std::size_t chain_budget,
           std::size_t iso_budget) {
          py::gil_scoped_release release;
          auto r = decide(a, b, config(depth, chain_budget, iso_budget));
          std::string cert = r.certificate ? dump(r.certificate->to_json()) : "";
          return std::make_tuple(to_string(r.verdict), dump(r.report()), cert);
        },
        py::arg("first"), py::arg("second"), py::arg("depth") = 3, py::arg("chain_budget") = 500,
        py::arg("iso_budget") = default_iso_budget);

  m.def("verify_certificate", [](std::string const &text) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (nlohmann::json::exception const &ex) {
      throw ParseError(ex.what());
    }
    return verify_certificate(Certificate::from_json(j));
  }, py::arg("text"));

  m.def("zeta", [](GraphOfGroups const &g) {
    Emission e;
    e.which = Emission::Which::Zeta;
    return serialize(emit(g, e).formula);
  });
  m.def("symbol_count", [](std::string const &f) { return symbol_count(parse_formula(f)); });
  m.def("evaluate_finite",
        [](std::string const &formula, std::string const &group,
           std::map<std::string, int> const &given, std::size_t budget) {
          nlohmann::json j;
          try {
            j = nlohmann::json::parse(group);
          } catch (nlohmann::json::exception const &ex) {
            throw ParseError(ex.what());
          }
          return evaluate_finite(parse_formula(formula), *group_from_json(j), given, budget);
        },
        py::arg("formula"), py::arg("group"), py::arg("given") = std::map<std::string, int>{},
        py::arg("budget") = default_eval_budget);
}
