#include <cmath>
#include <random>
#include <set>

#include "doctest.h"

#include "corpus.hpp"
#include "vfg/gog.hpp"

using namespace vfg;

namespace
{

// free group on two letters times Z/2, counted by hand: a word of length
// <= r in F2 with the optional central involution costs one more letter
int f2xz2_ball_oracle(int r)
{
  auto sphere = [](int n) { return n == 0 ? 1 : 4 * static_cast<int>(std::pow(3, n - 1)); };
  int total = 0;
  for (int n = 0; n <= r; ++n)
    total += sphere(n) * (n + 1 <= r ? 2 : 1);
  return total;
}

} // namespace

TEST_CASE("validate")
{
  GraphOfGroups one;
  one.add_vertex("a", cyclic_group(2));
  CHECK(one.diagnostics().empty());

  GraphOfGroups two;
  two.add_vertex("a", cyclic_group(2));
  two.add_vertex("b", cyclic_group(2));
  auto diag = two.diagnostics();
  REQUIRE(diag.size() == 1);
  CHECK(diag[0].rfind("Disconnected", 0) == 0);
  CHECK_THROWS_AS(two.finalize(), ValidationError);

  auto z2 = cyclic_group(2);
  auto z4 = cyclic_group(4);
  GraphOfGroups bad;
  bad.add_vertex("a", z4);
  bad.add_edge("e", z4, 0, 0, GrpHom(z4, z4, {1}), GrpHom(z4, z4, {2}));
  CHECK_FALSE(bad.diagnostics().empty());

  auto sl = corpus("sl2z");
  CHECK(sl.diagnostics().empty());
  CHECK(sl.transversal(0, 0).size() == 3);
  CHECK(sl.transversal(0, 1).size() == 2);
  CHECK(sl.transversal(0, 0)[0] == FinGroup::identity());
}

TEST_CASE("normal form examples")
{
  auto psl = corpus("psl2z");
  CHECK(psl.normal_form(psl.identity()).tokens.empty());
  CHECK(psl.is_identity(psl.parse("va:1 va:1 va:1")));
  CHECK_FALSE(psl.is_identity(psl.parse("va:1 va:1")));
  CHECK_THROWS_AS(psl.parse("vb:1"), MalformedWord);
  CHECK_THROWS_AS(psl.parse("ee:+"), MalformedWord);

  auto n = corpus("n25x6");
  // t a t^-1 = a^6
  CHECK(n.equal(n.parse("et:+ va:1 et:-"), n.parse("va:6")));
  CHECK_FALSE(n.equal(n.parse("et:- va:1 et:+"), n.parse("va:6")));
}

TEST_CASE("normal form properties on the corpus")
{
  std::mt19937_64 rng(7);
  for (auto const &name : corpus_names()) {
    CAPTURE(name);
    auto g = corpus(name);
    int failures = 0;
    for (int i = 0; i < 300; ++i) {
      int len = std::uniform_int_distribution<int>(0, 8)(rng);
      auto w = random_word(g, len, rng);
      auto nf = g.normal_form(w);
      failures += g.normal_form(nf) != nf;
      failures += !g.multiply(w, g.inverse(w)).tokens.empty();
      failures += g.end_of(nf) != g.base();
    }
    CHECK(failures == 0);

    for (int e = 0; e < g.num_edges(); ++e) {
      auto const &edge = g.edge(e);
      for (int c = 0; c < edge.group->order(); ++c) {
        Path lhs{edge.to, {Token::step(e, 1), Token::elt(edge.from, edge.inj_from(c)),
                           Token::step(e, -1)}};
        Path rhs{edge.to, {Token::elt(edge.to, edge.inj_to(c))}};
        CHECK(g.equal(lhs, rhs));
      }
    }
  }
}

TEST_CASE("K")
{
  CHECK(K_of(corpus("psl2z")) == 3);
  CHECK(K_of(corpus("sl2z")) == 6);
  CHECK(K_of(corpus("trivial")) == 1);
}

TEST_CASE("balls")
{
  auto z2 = GraphOfGroups();
  z2.add_vertex("a", cyclic_group(2));
  z2.finalize();
  CHECK(ball(z2, 0).size() == 1);
  CHECK(ball(z2, 1).size() == 2);

  auto f = corpus("f2xz2");
  CHECK(ball(f, 2).size() == 22);
  for (int r = 0; r <= 4; ++r)
    CHECK(static_cast<int>(ball(f, r).size()) == f2xz2_ball_oracle(r));

  auto psl = corpus("psl2z");
  std::size_t prev = 0;
  for (int r = 0; r <= 8; ++r) {
    auto size = ball(psl, r).size();
    CHECK(size >= prev);
    if (r > 0)
      CHECK(size > prev);
    prev = size;
  }

  CHECK_THROWS_AS(ball(f, 8, 1000), BudgetExceeded);
}

TEST_CASE("cyclic reduction")
{
  auto f = corpus("f2xz2");
  auto w = f.parse("ee2:+ ee1:+ vv:1 ee2:-");
  auto red = cyclic_reduce(f, w);
  CHECK(red.translation_length == 1);
  CHECK(f.equal(f.conjugate(red.conjugator, red.reduced), w));
  CHECK_FALSE(is_hyperbolic(f, f.parse("ee1:+ vv:1 ee1:-")));

  auto psl = corpus("psl2z");
  auto h = psl.parse("va:1 ee:- vb:1 ee:+");
  CHECK(cyclic_reduce(psl, h).translation_length == 2);
  CHECK(cyclic_reduce(psl, psl.conjugate(psl.parse("ee:- vb:1 ee:+"), h)).translation_length == 2);
}

TEST_CASE("word homomorphisms")
{
  for (auto const &name : corpus_names()) {
    auto g = corpus(name);
    auto id = WordHom::identity(g);
    CHECK(id.verify().empty());
    for (auto const &gen : g.generators())
      CHECK(id.apply(gen) == gen);
  }

  // a -> a^2 does not respect t a t^-1 = a^6 after changing t to the identity
  auto n = corpus("n25x6");
  WordHom bad = WordHom::identity(n);
  bad.edge_plus[0] = n.identity();
  CHECK_FALSE(bad.verify().empty());

  // t -> t a is fine since a commutes with a^6 conjugates
  WordHom twist = WordHom::identity(n);
  twist.edge_plus[0] = n.parse("et:+ va:1");
  CHECK(twist.verify().empty());
}
