#include <algorithm>
#include <random>
#include <set>

#include "doctest.h"

#include "corpus.hpp"
#include "vfg/analysis.hpp"

using namespace vfg;

namespace
{

std::vector<int> class_orders(GraphOfGroups const &g)
{
  std::vector<int> res;
  for (auto const &c : finite_subgroup_classes(g))
    res.push_back(c.order);
  return res;
}

std::set<Path> element_set(GraphOfGroups const &g, FiniteSubgroup const &f)
{
  auto el = f.elements(g);
  return {el.begin(), el.end()};
}

// every generator of N conjugates C onto itself
void check_normalizes(GraphOfGroups const &g, NormalizerInfo const &n)
{
  auto c = element_set(g, n.subgroup.as_subgroup(g));
  for (auto const &s : n.generators) {
    for (auto const &x : c)
      CHECK(c.count(g.conjugate(s, x)));
  }
}

} // namespace

TEST_CASE("finite subgroup classes")
{
  CHECK(class_orders(corpus("psl2z")) == std::vector<int>{1, 2, 3});
  CHECK(class_orders(corpus("sl2z")) == std::vector<int>{1, 2, 3, 4, 6});
  CHECK(class_orders(corpus("f2xz2")) == std::vector<int>{1, 2});
  CHECK(class_orders(corpus("trivial")) == std::vector<int>{1});
  CHECK(class_orders(corpus("n25x6")) == std::vector<int>{1, 5, 25});
  CHECK(class_orders(corpus("dinf")) == std::vector<int>{1, 2, 2});

  // distinct classes are not conjugate by short elements
  for (auto name : {"psl2z", "sl2z", "dinf", "z4xf2_hnn_c2"}) {
    CAPTURE(name);
    auto g = corpus(name);
    auto cls = finite_subgroup_classes(g);
    auto b = ball(g, 2);
    for (std::size_t i = 0; i < cls.size(); ++i) {
      auto ci = element_set(g, cls[i].as_subgroup(g));
      for (std::size_t j = i + 1; j < cls.size(); ++j) {
        if (cls[i].order != cls[j].order)
          continue;
        auto cj = element_set(g, cls[j].as_subgroup(g));
        for (auto const &x : b) {
          std::set<Path> img;
          for (auto const &y : ci)
            img.insert(g.conjugate(x, y));
          CHECK(img != cj);
        }
      }
    }
  }
}

TEST_CASE("locate")
{
  std::mt19937_64 rng(7);
  for (auto const &name : corpus_names()) {
    CAPTURE(name);
    auto g = corpus(name);
    ClassTable table(g);

    // witnesses carry every node subgroup onto its class representative
    for (int node = 0; node < static_cast<int>(table.nodes().size()); ++node) {
      auto const &cls = table.classes()[table.class_of_node(node)];
      auto rep = element_set(g, cls.as_subgroup(g));
      FiniteSubgroup at{g.identity(), table.node_subgroup(node)};
      at.conj = g.tree_path(table.nodes()[node].vertex);
      auto const &w = table.witness(node);
      for (auto const &y : table.node_subgroup(node).elements()) {
        Path loc{table.nodes()[node].vertex, {}};
        if (y != FinGroup::identity())
          loc.tokens.push_back(Token::elt(loc.start, y));
        CHECK(rep.count(g.multiply(g.multiply(w, loc), g.inverse(w))));
      }
    }

    for (auto const &c : table.classes()) {
      auto rep = element_set(g, c.as_subgroup(g));
      for (int trial = 0; trial < 3; ++trial) {
        Path x = random_word(g, 6, rng);
        std::vector<Path> gens;
        for (auto const &y : rep)
          gens.push_back(g.conjugate(x, y));
        auto loc = table.locate(gens);
        CHECK(loc.class_id == c.id);
        for (auto const &f : gens)
          CHECK(rep.count(g.conjugate(loc.conj, f)));
      }
    }
  }
}

TEST_CASE("normalizers")
{
  auto psl = corpus("psl2z");
  auto cls = finite_subgroup_classes(psl);
  CHECK(normalizer(psl, cls[0]).kind == Kind::NonElementary);
  CHECK(normalizer(psl, cls[1]).kind == Kind::Finite);
  CHECK(normalizer(psl, cls[2]).kind == Kind::Finite);

  auto dinf = corpus("dinf");
  CHECK(normalizer(dinf, finite_subgroup_classes(dinf)[0]).kind == Kind::VCDihedral);

  auto n25 = corpus("n25x6");
  for (auto const &c : finite_subgroup_classes(n25))
    CHECK(normalizer(n25, c).kind == Kind::VCCyclic);

  for (auto const &name : corpus_names()) {
    CAPTURE(name);
    auto g = corpus(name);
    ClassTable table(g);
    for (auto const &c : table.classes()) {
      auto n = normalizer(table, c);
      CHECK(n.embedding.verify().empty());
      check_normalizes(g, n);
    }
  }
}

TEST_CASE("E of a normalizer")
{
  auto f = corpus("f2xz2");
  auto fc = finite_subgroup_classes(f);
  CHECK(E_of(f, fc[0]).order() == 2);
  CHECK(E_of(f, fc[1]).order() == 2);

  auto z4 = corpus("z4xf2");
  auto zc = finite_subgroup_classes(z4);
  REQUIRE(zc.size() == 3);
  auto e = E_of(z4, zc[1]);
  CHECK(e.order() == 4);
  CHECK(element_set(z4, e) == element_set(z4, zc[2].as_subgroup(z4)));

  auto psl = corpus("psl2z");
  CHECK(E_of(psl, finite_subgroup_classes(psl)[0]).order() == 1);
  CHECK_THROWS_AS(E_of(psl, finite_subgroup_classes(psl)[1]), NotNonElementary);

  for (auto const &name : corpus_names()) {
    CAPTURE(name);
    auto g = corpus(name);
    ClassTable table(g);
    for (auto const &c : table.classes()) {
      auto n = normalizer(table, c);
      if (n.kind != Kind::NonElementary)
        continue;
      auto ex = E_of(g, n);
      auto es = element_set(g, ex);
      // C <= E and E is normal in N
      for (auto const &y : element_set(g, c.as_subgroup(g)))
        CHECK(es.count(y));
      for (auto const &s : n.generators) {
        for (auto const &y : es)
          CHECK(es.count(g.conjugate(s, y)));
      }
    }
  }
}

TEST_CASE("M(h) membership")
{
  for (auto name : {"f2xz2", "psl2z", "sl2z"}) {
    CAPTURE(name);
    auto g = corpus(name);
    auto b = ball(g, 2);
    std::vector<Path> hyp;
    for (auto const &x : b) {
      if (is_hyperbolic(g, x))
        hyp.push_back(x);
    }
    REQUIRE(!hyp.empty());
    for (std::size_t i = 0; i < std::min<std::size_t>(hyp.size(), 6); ++i) {
      auto const &h = hyp[i];
      CHECK(m_membership(g, h, h));
      CHECK(m_membership(g, h, g.identity()));
      for (auto const &x : b)
        CHECK(m_membership(g, h, x) == m_membership_commutator(g, h, x));
    }
  }

  auto psl = corpus("psl2z");
  CHECK_THROWS_AS(m_membership(psl, psl.parse("va:1"), psl.identity()), EllipticElement);
}

TEST_CASE("chains")
{
  auto f = corpus("f2xz2");
  auto cls = finite_subgroup_classes(f);
  auto ch = find_chain(f, normalizer(f, cls[0]));
  CHECK(ch.certified_maximal);
  CHECK(!ch.elements.empty());

  auto psl = corpus("psl2z");
  auto pc = finite_subgroup_classes(psl);
  CHECK(find_chain(psl, normalizer(psl, pc[0])).certified_maximal);
  CHECK_THROWS_AS(find_chain(psl, normalizer(psl, pc[1])), NotNonElementary);
}

TEST_CASE("invariants")
{
  auto triv = invariants(corpus("trivial"));
  CHECK(triv.n1 == 1);
  CHECK(triv.n2 == 1);
  CHECK(triv.n3 == 0);
  CHECK(triv.n4 == 0);

  auto f = invariants(corpus("f2xz2"));
  CHECK(f.n1 == 2);
  CHECK(f.n4 == 2);
  CHECK(f.n5 == 1);
  CHECK(invariants(corpus("f2xz2_free_z")).n5 == 0);

  auto psl = invariants(corpus("psl2z"));
  CHECK(psl.n1 == 3);
  CHECK(psl.n2 == 3);
  CHECK(psl.n4 == 1);
  CHECK(psl.n5 == 0);

  auto n25 = invariants(corpus("n25x6"));
  CHECK(n25.n1 == 3);
  CHECK(n25.n2 == 7);
  CHECK(n25.n3 == 3);
  CHECK(n25.K == 25);
  CHECK(invariants(corpus("n25x11")) == n25);

  CHECK(invariant_mismatch(psl, psl).empty());
  CHECK(invariant_mismatch(psl, f) == "K");
  CHECK(invariant_mismatch(f, invariants(corpus("f2xz2_free_z"))) == "n5");
}

TEST_CASE("invariants are isomorphism invariants")
{
  for (auto const &name : corpus_names()) {
    CAPTURE(name);
    auto g = corpus(name);
    auto inv = invariants(g);
    CHECK(invariants(reduce(g)) == inv);
    for (auto const &n : slide_neighbors(reduce(g)))
      CHECK(invariants(n.result) == inv);
  }
}
