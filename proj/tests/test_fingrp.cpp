#include <algorithm>
#include <numeric>
#include <set>

#include "doctest.h"

#include "vfg/fingrp.hpp"

using namespace vfg;

namespace
{

// brute force oracle: every subset closed under the table
int count_subgroups_brute(GroupPtr const &g)
{
  int n = g->order();
  int count = 0;
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    if (!(mask & 1u))
      continue;
    bool closed = true;
    for (int a = 0; a < n && closed; ++a) {
      if (!(mask >> a & 1u))
        continue;
      for (int b = 0; b < n && closed; ++b) {
        if ((mask >> b & 1u) && !(mask >> g->mul(a, b) & 1u))
          closed = false;
      }
    }
    count += closed;
  }
  return count;
}

// brute force oracle: bijections of the element set preserving the table
int count_automorphisms_brute(GroupPtr const &g)
{
  int n = g->order();
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  int count = 0;
  do {
    bool ok = true;
    for (int a = 0; a < n && ok; ++a) {
      for (int b = 0; b < n && ok; ++b)
        ok = p[g->mul(a, b)] == g->mul(p[a], p[b]);
    }
    count += ok;
  } while (std::next_permutation(p.begin() + 1, p.end()));
  return count;
}

GroupPtr klein()
{ return direct_product(cyclic_group(2), cyclic_group(2)); }

} // namespace

TEST_CASE("element enumeration")
{
  CHECK(cyclic_group(25)->order() == 25);
  CHECK(trivial_group()->order() == 1);

  auto s3 = make_group(3, {Perm({1, 2, 0}), Perm({1, 0, 2})});
  CHECK(s3->order() == 6);
  CHECK(s3->elements()[FinGroup::identity()].is_identity());

  CHECK(std::is_sorted(s3->elements().begin(), s3->elements().end()));
  CHECK_THROWS_AS(make_group(5, {Perm({1, 2, 3, 4, 0}), Perm({1, 0, 2, 3, 4})}, 100),
                  CapExceeded);
  CHECK_THROWS_AS(Perm({0, 0, 1}), BadPerm);
}

TEST_CASE("element orders and words")
{
  auto z = cyclic_group(12);
  for (int x = 0; x < z->order(); ++x) {
    CHECK(z->pow(x, z->element_order(x)) == FinGroup::identity());
    auto const &w = z->gen_words()[x];
    int y = FinGroup::identity();
    for (int i : w)
      y = z->mul(y, z->small_generators()[i]);
    CHECK(y == x);
  }
}

TEST_CASE("subgroup classes")
{
  CHECK(trivial_group()->subgroup_classes().size() == 1);
  CHECK(cyclic_group(4)->subgroup_classes().size() == 3);

  auto s3 = symmetric_group(3);
  auto const &classes = s3->subgroup_classes();
  REQUIRE(classes.size() == 4);

  std::vector<int> orders;
  for (auto const &c : classes)
    orders.push_back(c.representative.order());
  CHECK(orders == std::vector<int>{1, 2, 3, 6});

  for (auto g : {s3, cyclic_group(4), klein(), cyclic_group(6),
                 direct_product(s3, cyclic_group(2))}) {
    int total = 0;
    for (auto const &c : g->subgroup_classes()) {
      total += c.size;
      CHECK(g->order() % c.representative.order() == 0);
    }
    CHECK(total == count_subgroups_brute(g));
    CHECK(static_cast<int>(g->subgroups().size()) == total);
  }
}

TEST_CASE("locate subgroup class")
{
  auto s3 = symmetric_group(3);
  auto const &classes = s3->subgroup_classes();
  for (auto const &sub : s3->subgroups()) {
    auto [idx, g] = locate_subgroup_class(classes, sub);
    CHECK(sub.conjugate(g) == classes[idx].representative);
  }
}

TEST_CASE("automorphisms")
{
  CHECK(automorphisms(cyclic_group(25)).size() == 20);
  CHECK(automorphisms(trivial_group()).size() == 1);
  CHECK(automorphisms(klein()).size() == 6);

  for (auto g : {klein(), symmetric_group(3), cyclic_group(8)}) {
    auto auts = automorphisms(g);
    CHECK(static_cast<int>(auts.size()) == count_automorphisms_brute(g));

    std::set<std::vector<int>> maps;
    for (auto const &a : auts)
      maps.insert(a.map());
    for (auto const &a : auts) {
      CHECK(maps.count(a.inverse().map()));
      for (auto const &b : auts)
        CHECK(maps.count(a.then(b).map()));
    }
  }
}

TEST_CASE("isomorphism search")
{
  CHECK_FALSE(find_isomorphism(cyclic_group(4), klein()));

  auto z6 = cyclic_group(6);
  auto id = find_isomorphism(z6, z6);
  REQUIRE(id);
  CHECK(id->map() == GrpHom::identity(z6).map());

  auto prod = direct_product(cyclic_group(2), cyclic_group(3));
  auto iso = find_isomorphism(z6, prod);
  REQUIRE(iso);
  CHECK(iso->then(iso->inverse()).map() == GrpHom::identity(z6).map());
}

TEST_CASE("homomorphism construction")
{
  auto z4 = cyclic_group(4);
  auto z2 = cyclic_group(2);
  CHECK_THROWS_AS(GrpHom(z2, z4, {z4->small_generators()[0]}), BadHom);
  GrpHom h(z4, z2, {z2->small_generators()[0]});
  CHECK(h.surjective());
  CHECK_FALSE(h.injective());

  auto sub = Subgrp::generated(z4, {z4->pow(z4->small_generators()[0], 2)});
  auto [g, incl] = sub.realize();
  CHECK(g->order() == 2);
  CHECK(incl.image() == sub);
  CHECK(incl.injective());
}
