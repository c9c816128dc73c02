#include "vfg/report.hpp"

#include "vfg/analysis.hpp"
#include "vfg/cylinders.hpp"
#include "vfg/legal.hpp"
#include "vfg/splittings.hpp"

namespace vfg
{

namespace
{

nlohmann::json shape(GraphOfGroups const &g)
{
  auto orders = nlohmann::json::array();
  for (auto const &v : g.vertices())
    orders.push_back(v.group->order());
  auto edges = nlohmann::json::array();
  for (auto const &e : g.edges())
    edges.push_back({{"id", e.id},
                     {"from", g.vertex(e.from).id},
                     {"to", g.vertex(e.to).id},
                     {"order", e.group->order()}});
  return {{"vertex_orders", orders}, {"edges", edges}};
}

std::vector<int> sorted_orders(GraphOfGroups const &g)
{
  std::vector<int> res;
  for (auto const &v : g.vertices())
    res.push_back(v.group->order());
  std::sort(res.begin(), res.end());
  return res;
}

} // namespace

nlohmann::json validation_report(GraphOfGroups const &g)
{
  auto red = reduce(g);
  return {{"valid", true},
          {"vertices", g.num_vertices()},
          {"edges", g.num_edges()},
          {"reduced", {{"vertices", red.num_vertices()}, {"edges", red.num_edges()}}},
          {"K", K_of(g)}};
}

nlohmann::json analysis_report(GraphOfGroups const &g)
{
  auto an = analyze(reduce(g));
  auto const &inv = an.invariants;

  auto profile = nlohmann::json::array();
  for (auto const &[order, kind] : inv.profile)
    profile.push_back({order, to_string(kind)});

  auto classes = nlohmann::json::array();
  for (auto const &ca : an.classes) {
    nlohmann::json c = {{"id", ca.cls.id},
                        {"vertex", an.graph.vertex(ca.cls.vertex).id},
                        {"order", ca.cls.order},
                        {"normalizer", to_string(ca.normalizer.kind)},
                        {"normalizer_generators", ca.normalizer.generators.size()},
                        {"aut_size", ca.aut_size}};
    c["E_order"] = ca.E ? nlohmann::json(ca.E->order()) : nlohmann::json(nullptr);
    classes.push_back(c);
  }

  return {{"K", inv.K},
          {"n1", inv.n1},
          {"n2", inv.n2},
          {"n3", inv.n3},
          {"n4", inv.n4},
          {"n5", inv.n5},
          {"profile", profile},
          {"classes", classes},
          {"reduced", {{"vertices", an.graph.num_vertices()}, {"edges", an.graph.num_edges()}}}};
}

nlohmann::json word_report(GraphOfGroups const &g, Path const &w)
{
  auto nf = g.normal_form(w);
  nlohmann::json j = {{"input", g.format(w)},
                      {"normal_form", g.format(nf)},
                      {"identity", nf.tokens.empty()},
                      {"length", nf.tokens.size()}};
  if (g.end_of(w) == w.start) {
    auto cr = cyclic_reduce(g, nf);
    j["translation_length"] = cr.translation_length;
    j["hyperbolic"] = cr.translation_length > 0;
  } else {
    j["closed"] = false;
  }
  return j;
}

nlohmann::json cylinders_report(GraphOfGroups const &g)
{
  auto red = reduce(g);
  auto t = tree_of_cylinders(red);
  auto cyls = nlohmann::json::array();
  for (auto const &c : t.decomposition.cylinders) {
    auto edges = nlohmann::json::array();
    for (int e : c.edges)
      edges.push_back(red.edge(e).id);
    cyls.push_back({{"edges", edges}, {"vertex", red.vertex(c.vertex).id}, {"order", c.group.order()}});
  }
  auto points = nlohmann::json::array();
  for (auto const &p : t.points)
    points.push_back({{"vertex", red.vertex(p.vertex).id}, {"order", p.group->order()}});
  auto cvs = nlohmann::json::array();
  for (auto const &cv : t.cylinder_vertices)
    cvs.push_back({{"cylinder", cv.cylinder}, {"normalizer", to_string(cv.normalizer.kind)}});
  auto edges = nlohmann::json::array();
  for (auto const &e : t.edges)
    edges.push_back({{"point", e.point},
                     {"cylinder_vertex", e.cylinder_vertex},
                     {"stabilizer_order", e.stabilizer.order()},
                     {"group_order", e.group.order()}});
  return {{"cylinders", cyls}, {"points", points}, {"cylinder_vertices", cvs}, {"edges", edges}};
}

nlohmann::json extensions_report(GraphOfGroups const &g, std::string const &kind)
{
  auto red = reduce(g);
  auto classes = finite_subgroup_classes(red);
  auto out = nlohmann::json::array();

  auto add = [&](LegalStep const &step, char const *name) {
    auto next = reduce(apply_legal(g, step));
    out.push_back({{"kind", name},
                   {"class", step.cls()},
                   {"class_order", classes.at(step.cls()).order},
                   {"step", step.to_json()},
                   {"result", shape(next)},
                   {"result_orders", sorted_orders(next)}});
  };

  if (kind == "large" || kind == "all") {
    try {
      for (auto const &s : legal_large_candidates(g))
        add({s, std::nullopt}, "large");
    } catch (ElementaryGroup const &) {
    }
  }
  if (kind == "small" || kind == "all") {
    for (auto const &s : legal_small_candidates(g))
      add({std::nullopt, s}, "small");
  }
  return {{"base", shape(red)}, {"extensions", out}};
}

std::string dump(nlohmann::json const &j)
{ return j.dump(2) + "\n"; }

} // namespace vfg
