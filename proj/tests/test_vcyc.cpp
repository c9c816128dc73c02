#include "doctest.h"

#include "corpus.hpp"
#include "vfg/analysis.hpp"
#include "vfg/iso.hpp"
#include "vfg/vcyc.hpp"

using namespace vfg;

namespace
{

GraphOfGroups infinite_cyclic()
{
  GraphOfGroups g;
  auto t = trivial_group();
  g.add_vertex("a", t);
  g.add_edge("t", t, 0, 0, GrpHom::identity(t), GrpHom::identity(t));
  g.finalize();
  return g;
}

// Z/3 x| Z with t c t^-1 = c^-1
VCGroup z3_inverted()
{
  auto c = cyclic_group(3);
  return VCGroup::cyclic(c, GrpHom::from_map(c, c, {0, 2, 1}));
}

GrpHom same_indices(GroupPtr const &a, GroupPtr const &b)
{
  std::vector<int> m(a->order());
  for (int x = 0; x < a->order(); ++x)
    m[x] = x;
  return GrpHom::from_map(a, b, m);
}

long long abs_exponent(VCGroup const &target, NiceEmbedding const &e)
{
  auto d = target.decompose(e.map.apply(e.source.t));
  REQUIRE(d);
  return d->second < 0 ? -d->second : d->second;
}

} // namespace

TEST_CASE("structure of virtually cyclic presentations")
{
  auto s = structure_of(corpus("n25x6"));
  CHECK(s.group.type == VCType::Cyclic);
  CHECK(s.group.C->order() == 25);
  CHECK(s.group.alpha(1) == 6);
  CHECK(s.group.alpha_order() == 5);
  CHECK(s.to_source.verify().empty());

  auto d = structure_of(corpus("dinf"));
  CHECK(d.group.type == VCType::Dihedral);
  CHECK(d.group.C->order() == 1);
  CHECK(d.group.A->order() == 2);
  CHECK(d.group.B->order() == 2);
  CHECK(d.to_source.verify().empty());
  CHECK(is_hyperbolic(d.group.graph, d.group.t));

  auto z = structure_of(infinite_cyclic());
  CHECK(z.group.type == VCType::Cyclic);
  CHECK(z.group.alpha_order() == 1);

  CHECK_THROWS_AS(structure_of(corpus("psl2z")), NotVirtuallyCyclic);

  // round trip through JSON
  auto back = VCGroup::from_json(s.group.to_json());
  CHECK(back.alpha.map() == s.group.alpha.map());
  CHECK(VCGroup::from_json(d.group.to_json()).type == VCType::Dihedral);
}

TEST_CASE("decompose")
{
  auto n = structure_of(corpus("n25x6")).group;
  for (int c : {0, 1, 7}) {
    for (long long k : {-3LL, 0LL, 2LL}) {
      auto d = n.decompose(n.element(c, k));
      REQUIRE(d);
      CHECK(d->first == c);
      CHECK(d->second == k);
    }
  }
  // t c = alpha(c) t
  CHECK(n.graph.equal(n.graph.multiply(n.t, n.c_elem(1)),
                      n.graph.multiply(n.c_elem(6), n.t)));
}

TEST_CASE("D_p closed form")
{
  auto n = structure_of(corpus("n25x6")).group;
  auto d = D_subgroup(n, 250);
  CHECK(d.exact);
  CHECK(d.letter_index == 250);
  CHECK(d.c_part.order() == 1);
  CHECK(in_D(n, n.element(0, 250), 250));
  CHECK(in_D(n, n.element(0, -500), 250));
  CHECK(!in_D(n, n.element(0, 125), 250));
  CHECK(!in_D(n, n.element(3, 250), 250));
  CHECK(!D_subgroup(n, 5).exact);

  auto z = structure_of(infinite_cyclic()).group;
  auto dz = D_subgroup(z, 2);
  CHECK(dz.exact);
  CHECK(dz.letter_index == 2);

  auto dinf = structure_of(corpus("dinf")).group;
  CHECK(D_subgroup(dinf, 2).exact);
  CHECK(D_subgroup(dinf, 2 * factorial(2)).letter_index == 4);
}

TEST_CASE("D_p agrees with enumerated p-th powers")
{
  // p = 2 ord(alpha) |C| = 12; every x^p lies in <t^12> and t^12 is one
  auto n = z3_inverted();
  REQUIRE(n.alpha_order() == 2);
  bool hit = false;
  for (int c = 0; c < 3; ++c) {
    for (long long k = -36; k <= 36; ++k) {
      auto d = n.decompose(n.graph.power(n.element(c, k), 12));
      REQUIRE(d);
      CHECK(d->first == 0);
      CHECK(d->second % 12 == 0);
      hit = hit || d->second == 12;
    }
  }
  CHECK(hit);

  // the same in the infinite dihedral group, reflections included
  auto dinf = structure_of(corpus("dinf")).group;
  Path a{0, {Token::elt(0, 1)}};
  for (long long k = -6; k <= 6; ++k) {
    auto x = dinf.element(0, k);
    auto d = dinf.decompose(dinf.graph.power(x, 2));
    REQUIRE(d);
    CHECK(d->second == 2 * k);
    CHECK(dinf.graph.is_identity(dinf.graph.power(dinf.graph.multiply(a, x), 2)));
  }
}

TEST_CASE("K-nice checks")
{
  auto n6 = structure_of(corpus("n25x6")).group;
  auto n11 = structure_of(corpus("n25x11")).group;

  auto id = identity_embedding(n6);
  CHECK(is_K_nice(id, 25).nice);
  CHECK_THROWS_AS(is_K_nice(id, 3), BadK);

  // a -> a', t -> t'^3 is a homomorphism since 11^3 = 6 mod 25, but the
  // exponent 3 divides 2*25!, so the quotient map has a kernel
  NiceEmbedding cube{n6, n11, WordHom(n6.graph, n11.graph)};
  cube.map.set_vertex_hom(0, 0, same_indices(n6.C, n11.C));
  cube.map.edge_plus[0] = n11.graph.power(n11.t, 3);
  REQUIRE(cube.map.verify().empty());
  auto r = is_K_nice(cube, 25);
  CHECK(!r.nice);
  CHECK(r.failed_bullet == 3);

  // everything to the identity: bullet 1
  NiceEmbedding flat{n6, n6, WordHom(n6.graph, n6.graph)};
  flat.map.set_vertex_hom(0, 0, GrpHom::from_map(n6.C, n6.C, std::vector<int>(25, 0)));
  flat.map.edge_plus[0] = n6.graph.identity();
  REQUIRE(flat.map.verify().empty());
  CHECK(is_K_nice(flat, 25).failed_bullet == 1);

  // not a homomorphism
  NiceEmbedding wrong{n6, n6, WordHom(n6.graph, n6.graph)};
  wrong.map.set_vertex_hom(0, 0, GrpHom::identity(n6.C));
  wrong.map.edge_plus[0] = n6.graph.power(n6.t, 2);
  CHECK_THROWS_AS(is_K_nice(wrong, 25), BadHom);

  // the smallest nice exponents for the pair are -37 and 37
  auto there = find_nice_embedding(n6, n11, 25);
  auto back = find_nice_embedding(n11, n6, 25);
  REQUIRE(there);
  REQUIRE(back);
  CHECK(n11.decompose(there->map.apply(n6.t))->second == -37);
  CHECK(n6.decompose(back->map.apply(n11.t))->second == 37);

  CHECK(abs_exponent(n11, *there) == 37);

  // compositions of nice embeddings are nice
  NiceEmbedding round{n6, n6, there->map.then(back->map)};
  CHECK(is_K_nice(round, 25).nice);

  // JSON round trip keeps the map
  auto j = NiceEmbedding::from_json(there->to_json());
  CHECK(j.map.apply(j.source.t) == there->map.apply(n6.t));
  CHECK(is_K_nice(j, 25).nice);
}

TEST_CASE("index 2 overgroups")
{
  CHECK(index2_overgroups(trivial_group()).size() == 1);
  CHECK(index2_overgroups(cyclic_group(2)).size() == 2); // Z4, Z2^2
  CHECK(index2_overgroups(cyclic_group(3)).size() == 2); // Z6, S3
  CHECK(index2_overgroups(cyclic_group(4)).size() == 4); // Z8, Z4xZ2, D8, Q8
  auto v4 = direct_product(cyclic_group(2), cyclic_group(2));
  CHECK(index2_overgroups(v4).size() == 3); // Z4xZ2, Z2^3, D8

  for (auto const &[a, inc] : index2_overgroups(cyclic_group(3))) {
    CHECK(a->order() == 6);
    CHECK(inc.injective());
    CHECK(inc.image().normalizer().order() == 6);
  }
}

TEST_CASE("mutual nice partners")
{
  auto n6 = structure_of(corpus("n25x6")).group;
  auto parts = mutual_nice_partners(n6, 25);
  CHECK(parts.size() == 2);
  bool has11 = false, has6 = false;
  auto g11 = reduce(corpus("n25x11"));
  auto g6 = reduce(corpus("n25x6"));
  for (auto const &p : parts) {
    CHECK(is_K_nice(p.there, 25).nice);
    CHECK(is_K_nice(p.back, 25).nice);
    has11 = has11 || gog_isomorphic(p.group.graph, g11).has_value();
    has6 = has6 || gog_isomorphic(p.group.graph, g6).has_value();
  }
  CHECK(has11);
  CHECK(has6);

  auto z = structure_of(infinite_cyclic()).group;
  auto zp = mutual_nice_partners(z, 2);
  REQUIRE(zp.size() == 1);
  CHECK(zp[0].group.alpha_order() == 1);

  auto dinf = structure_of(corpus("dinf")).group;
  auto dp = mutual_nice_partners(dinf, 2);
  REQUIRE(dp.size() == 1);
  CHECK(dp[0].group.type == VCType::Dihedral);

  // dihedral enumeration is capped
  auto c = cyclic_group(13);
  auto [a, ia] = index2_overgroups(c).front();
  auto big = VCGroup::dihedral(c, a, ia, a, ia);
  CHECK_THROWS_AS(mutual_nice_partners(big, 26), CapExceeded);
}
