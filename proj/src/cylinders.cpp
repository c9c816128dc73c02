#include <sstream>

#include "vfg/cylinders.hpp"

namespace vfg
{

CylinderTree tree_of_cylinders(GraphOfGroups const &g)
{
  CylinderTree t;
  t.decomposition = cylinders(g);
  ClassTable table(g);

  for (int i = 0; i < static_cast<int>(t.decomposition.cylinders.size()); ++i) {
    auto const &cyl = t.decomposition.cylinders[i];
    auto const &classes = g.vertex(cyl.vertex).group->subgroup_classes();
    int node = table.node_of(cyl.vertex, locate_subgroup_class(classes, cyl.group).first);
    auto const &c = table.classes()[table.class_of_node(node)];
    t.cylinder_vertices.push_back({i, normalizer(table, c)});
  }

  for (int v = 0; v < g.num_vertices(); ++v) {
    auto const &gv = g.vertex(v).group;

    // stabilizers of the edges at a lift of v, one per G_v-class, each with
    // the cylinder it belongs to
    std::vector<std::pair<Subgrp, int>> reps;
    for (int e = 0; e < g.num_edges(); ++e) {
      for (int end = 0; end < 2; ++end) {
        if (g.end_vertex(e, end) != v)
          continue;
        auto s = g.end_map(e, end).image();
        bool seen = false;
        for (auto const &r : reps)
          seen = seen || conjugator_between(r.first, s).has_value();
        if (!seen)
          reps.emplace_back(s, t.decomposition.cylinder_of_edge[e]);
      }
    }
    // v lies in one cylinder iff a single normal subgroup occurs
    bool several = reps.size() > 1 ||
                   (reps.size() == 1 && reps[0].first.normalizer().order() != gv->order());
    if (!several)
      continue;

    int p = static_cast<int>(t.points.size());
    t.points.push_back({v, gv});
    for (auto const &[s, cyl] : reps)
      t.edges.push_back({p, cyl, s, s.normalizer()});
  }

  return t;
}

std::string export_dot(GraphOfGroups const &g, CylinderTree const &t)
{
  std::ostringstream os;
  os << "graph T {\n";
  for (auto const &p : t.points) {
    os << "  \"" << g.vertex(p.vertex).id << "\" [label=\"" << p.group->order()
       << "\"];\n";
  }
  for (auto const &c : t.cylinder_vertices) {
    os << "  \"Y" << c.cylinder << "\" [shape=box,label=\"N(" << c.normalizer.subgroup.order
       << ") " << to_string(c.normalizer.kind) << "\"];\n";
  }
  for (auto const &e : t.edges) {
    os << "  \"" << g.vertex(t.points[e.point].vertex).id << "\" -- \"Y" << e.cylinder_vertex
       << "\" [label=\"" << e.group.order() << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

} // namespace vfg
