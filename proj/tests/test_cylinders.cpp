#include "doctest.h"

#include "corpus.hpp"
#include "vfg/cylinders.hpp"

using namespace vfg;

namespace
{

GraphOfGroups two_cylinders()
{
  auto v4 = direct_product(cyclic_group(2), cyclic_group(2));
  auto z2 = cyclic_group(2);
  auto z4 = cyclic_group(4);
  GraphOfGroups g;
  g.add_vertex("a", z4);
  g.add_vertex("m", v4);
  g.add_vertex("b", z4);
  g.add_edge("e", z2, 1, 0, GrpHom(z2, v4, {1}), GrpHom(z2, z4, {2}));
  g.add_edge("f", z2, 1, 2, GrpHom(z2, v4, {2}), GrpHom(z2, z4, {2}));
  g.finalize();
  return g;
}

// brute-force normalizer order inside the vertex group
int normalizer_order(Subgrp const &s)
{
  auto const &p = s.parent();
  int n = 0;
  for (int x = 0; x < p->order(); ++x) {
    bool ok = true;
    for (int y : s.elements())
      ok = ok && s.contains(p->conj(x, y));
    n += ok;
  }
  return n;
}

} // namespace

TEST_CASE("tree of cylinders")
{
  auto sl = tree_of_cylinders(corpus("sl2z"));
  CHECK(sl.points.empty());
  REQUIRE(sl.cylinder_vertices.size() == 1);
  CHECK(sl.cylinder_vertices[0].normalizer.kind == Kind::NonElementary);

  auto psl = tree_of_cylinders(corpus("psl2z"));
  CHECK(psl.points.empty());
  CHECK(psl.cylinder_vertices.size() == 1);

  auto g = two_cylinders();
  auto t = tree_of_cylinders(g);
  REQUIRE(t.points.size() == 1);
  CHECK(g.vertex(t.points[0].vertex).id == "m");
  CHECK(t.cylinder_vertices.size() == 2);
  REQUIRE(t.edges.size() == 2);
  CHECK(t.edges[0].cylinder_vertex != t.edges[1].cylinder_vertex);
  for (auto const &c : t.cylinder_vertices)
    CHECK(c.normalizer.kind == Kind::VCDihedral);
  CHECK(export_dot(g, t).find("\"m\" -- \"Y") != std::string::npos);

  CHECK_THROWS_AS(tree_of_cylinders(corpus("f2xz2_free_z")), MixedEdgeOrders);

  for (auto const &name : corpus_names()) {
    CAPTURE(name);
    CylinderTree ct;
    try {
      ct = tree_of_cylinders(corpus(name));
    } catch (MixedEdgeOrders const &) {
      continue;
    }
    for (auto const &e : ct.edges)
      CHECK(e.group.order() == normalizer_order(e.stabilizer));
    for (auto const &c : ct.cylinder_vertices)
      CHECK(c.normalizer.embedding.verify().empty());
  }
}
