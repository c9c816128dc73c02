#include <random>
#include <set>

#include "doctest.h"

#include "corpus.hpp"
#include "vfg/splittings.hpp"

using namespace vfg;

namespace
{

// generator of Z/n sits at element index 1 and c^k at index k
GrpHom cyc_map(GroupPtr const &src, GroupPtr const &dst, int image)
{ return GrpHom(src, dst, src->order() == 1 ? std::vector<int>{} : std::vector<int>{image}); }

GraphOfGroups chain_of_collapsible_edges()
{
  GraphOfGroups g;
  std::vector<GroupPtr> groups{cyclic_group(1), cyclic_group(2), cyclic_group(4), cyclic_group(8)};
  for (int i = 0; i < 4; ++i)
    g.add_vertex("v" + std::to_string(i), groups[i]);
  for (int i = 0; i < 3; ++i) {
    auto eg = groups[i];
    g.add_edge("e" + std::to_string(i), eg, i, i + 1,
               cyc_map(eg, groups[i], 1), cyc_map(eg, groups[i + 1], 2));
  }
  g.finalize();
  return g;
}

void check_translation(WordHom const &t)
{
  CHECK(t.verify().empty());
  auto const &src = t.source();
  // images of distinct small elements stay distinct
  auto b = ball(src, 2);
  std::set<Path> images;
  for (auto const &x : b)
    images.insert(t.apply(x));
  CHECK(images.size() == b.size());
}

} // namespace

TEST_CASE("reduce")
{
  auto z2 = cyclic_group(2);
  auto z4 = cyclic_group(4);
  GraphOfGroups amalg;
  amalg.add_vertex("a", z2);
  amalg.add_vertex("b", z4);
  amalg.add_edge("e", z2, 0, 1, cyc_map(z2, z2, 1), cyc_map(z2, z4, 2));
  amalg.finalize();

  auto red = reduce_with_translation(amalg);
  CHECK(red.result.num_vertices() == 1);
  CHECK(red.result.vertex(0).id == "b");
  CHECK(red.result.num_edges() == 0);
  check_translation(red.translation);

  auto sl = corpus("sl2z");
  CHECK(is_reduced(sl));
  CHECK(serialize_gfg(reduce(sl)) == serialize_gfg(sl));

  auto chain = chain_of_collapsible_edges();
  auto r = reduce_with_translation(chain);
  CHECK(r.result.num_vertices() == 1);
  CHECK(r.result.vertex(0).group->order() == 8);
  check_translation(r.translation);

  for (auto const &name : corpus_names()) {
    CAPTURE(name);
    auto rr = reduce_with_translation(corpus(name));
    CHECK(rr.back.verify().empty());
    // back then forth is the identity
    for (auto const &x : ball(rr.result, 2)) {
      auto y = rr.translation.apply(rr.back.apply(x));
      auto ok = rr.result.equal(y, x);
      CHECK(ok);
    }
  }

  auto big = reduce_with_translation(corpus("sl2z_amalg_z2xf1"));
  CHECK(big.result.num_vertices() == 2);
  CHECK(big.result.num_edges() == 2);
  check_translation(big.translation);
}

TEST_CASE("m-JSJ and m")
{
  auto sl = corpus("sl2z");
  auto j = m_jsj(sl, K_of(sl));
  CHECK(j.factors.size() == 2);
  CHECK(j.edges.size() == 1);

  auto one = m_jsj(sl, 1);
  REQUIRE(one.factors.size() == 1);
  CHECK_FALSE(one.factors[0].finite);
  CHECK(one.edges.empty());

  // edge orders {1, 2}: only the order 2 edge collapses
  auto z2 = cyclic_group(2);
  auto z4 = cyclic_group(4);
  auto triv = trivial_group();
  GraphOfGroups g;
  g.add_vertex("a", z4);
  g.add_vertex("b", z4);
  g.add_vertex("c", z2);
  g.add_edge("e", z2, 0, 1, cyc_map(z2, z4, 2), cyc_map(z2, z4, 2));
  g.add_edge("f", triv, 1, 2, cyc_map(triv, z4, 0), cyc_map(triv, z2, 0));
  g.finalize();
  auto mj = m_jsj(g, 1);
  CHECK(mj.factors.size() == 2);
  REQUIRE(mj.edges.size() == 1);
  CHECK(mj.edges[0].id == "f");

  CHECK(m_of(corpus("psl2z")) == 1);
  CHECK(m_of(sl) == 2);
  GraphOfGroups z6;
  z6.add_vertex("a", cyclic_group(6));
  z6.finalize();
  CHECK(m_of(z6) == 6);
}

TEST_CASE("slides")
{
  GraphOfGroups loop;
  loop.add_vertex("a", cyclic_group(3));
  auto triv = trivial_group();
  loop.add_edge("t", triv, 0, 0, cyc_map(triv, loop.vertex(0).group, 0),
                cyc_map(triv, loop.vertex(0).group, 0));
  loop.finalize();
  CHECK(slide_neighbors(loop).empty());
  CHECK(slide_neighbors(corpus("sl2z")).empty());

  auto f = corpus("f2xz2");
  auto nbrs = slide_neighbors(f);
  CHECK_FALSE(nbrs.empty());
  for (auto const &n : nbrs) {
    CHECK(n.result.num_vertices() == 1);
    CHECK(n.result.num_edges() == 2);
    check_translation(n.translation);
    CHECK(m_of(n.result) == m_of(f));
  }

  for (auto const &name : corpus_names()) {
    CAPTURE(name);
    auto g = reduce(corpus(name));
    for (auto const &n : slide_neighbors(g)) {
      CHECK(n.translation.verify().empty());
      CHECK(m_of(n.result) == m_of(g));
    }
  }

  SlideMove bogus{0, 0, 0, 0, 0};
  CHECK_THROWS_AS(apply_slide(f, bogus), IllegalStep);
}

TEST_CASE("cylinders")
{
  auto sl = corpus("sl2z");
  CHECK(cylinders(sl).cylinders.size() == 1);
  CHECK(cylinders(corpus("psl2z")).cylinders.size() == 1);

  // two non-conjugate involutions of Z/2 x Z/2 carry the two edges
  auto v4 = direct_product(cyclic_group(2), cyclic_group(2));
  auto z2 = cyclic_group(2);
  auto z4 = cyclic_group(4);
  GraphOfGroups g;
  g.add_vertex("a", z4);
  g.add_vertex("m", v4);
  g.add_vertex("b", z4);
  g.add_edge("e", z2, 1, 0, GrpHom(z2, v4, {1}), cyc_map(z2, z4, 2));
  g.add_edge("f", z2, 1, 2, GrpHom(z2, v4, {2}), cyc_map(z2, z4, 2));
  g.finalize();
  auto cyl = cylinders(g);
  CHECK(cyl.cylinders.size() == 2);

  GraphOfGroups mixed;
  mixed.add_vertex("a", z2);
  auto triv = trivial_group();
  mixed.add_edge("e", z2, 0, 0, cyc_map(z2, z2, 1), cyc_map(z2, z2, 1));
  mixed.add_edge("f", triv, 0, 0, cyc_map(triv, z2, 0), cyc_map(triv, z2, 0));
  mixed.finalize();
  CHECK_THROWS_AS(cylinders(mixed), MixedEdgeOrders);
}
