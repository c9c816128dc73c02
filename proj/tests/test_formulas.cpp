#include "doctest.h"

#include "corpus.hpp"
#include "vfg/analysis.hpp"
#include "vfg/formulas.hpp"

using namespace vfg;

namespace
{

GraphOfGroups single(GroupPtr h)
{
  GraphOfGroups g;
  g.add_vertex("h", std::move(h));
  g.finalize();
  return g;
}

GroupPtr s3()
{ return make_group(3, {Perm({1, 0, 2}), Perm({1, 2, 0})}); }

// an independent evaluation of the commuting involutions sentence
bool involutions_central(FinGroup const &h)
{
  for (int x = 0; x < h.order(); ++x) {
    if (h.mul(x, x) != FinGroup::identity())
      continue;
    for (int y = 0; y < h.order(); ++y)
      if (h.mul(x, y) != h.mul(y, x))
        return false;
  }
  return true;
}

} // namespace

TEST_CASE("formula text round trip")
{
  auto f = commuting_involutions();
  auto text = serialize(f);
  CHECK(text == "(forall (x y) (or (neq (mul (var x) (var x)) (mul)) "
                "(eq (mul (var x) (var y)) (mul (var y) (var x)))))");
  CHECK(parse_formula(text) == f);
  CHECK(symbol_count(f) == 16);
  CHECK(free_variables(f).empty());

  auto x = Term::var("x");
  CHECK(symbol_count(Formula::eq(x, x)) == 3);

  auto p = parse_formula(" (exists (a)\n (eq (pow (const c) -12) (inv (var a))))");
  CHECK(p.kids[0].lhs.exponent == -12);
  CHECK(constants(p) == std::vector<std::string>{"c"});
  CHECK(serialize(parse_formula(serialize(p))) == serialize(p));

  CHECK_THROWS_AS(parse_formula("(eq (var x)"), ParseError);
  CHECK_THROWS_AS(parse_formula("(frob)"), ParseError);
  CHECK_THROWS_AS(parse_formula("(eq (var x) (var x)) junk"), ParseError);
  CHECK_THROWS_AS(parse_formula("(forall () (and))"), ParseError);
  CHECK_THROWS_AS(parse_formula("(eq (pow (var x) 1x) (mul))"), ParseError);
}

TEST_CASE("finite evaluation")
{
  auto f = commuting_involutions();
  auto v4 = direct_product(cyclic_group(2), cyclic_group(2));
  CHECK(evaluate_finite(f, *v4));
  CHECK(!evaluate_finite(f, *s3()));

  // brute force oracle on more groups
  for (auto h : {cyclic_group(6), s3(), v4, direct_product(s3(), cyclic_group(2)),
                 make_group(4, {Perm({1, 2, 3, 0}), Perm({0, 3, 2, 1})})}) {
    CAPTURE(h->order());
    CHECK(evaluate_finite(f, *h) == involutions_central(*h));
  }

  auto x = Term::var("x");
  for (auto h : {cyclic_group(1), cyclic_group(5), s3()})
    CHECK(evaluate_finite(Formula::forall({"x"}, Formula::eq(x, x)), *h));

  // powers reduce modulo element orders
  auto big = Formula::forall({"x"}, Formula::eq(Term::pow(x, factorial(25)), Term::one()));
  CHECK(evaluate_finite(big, *s3()));

  CHECK_THROWS_AS(evaluate_finite(Formula::eq(x, x), *s3()), Error);
  CHECK_THROWS_AS(evaluate_finite(f, *s3(), {}, 10), BudgetExceeded);
}

TEST_CASE("chain formulas")
{
  Emission e;
  e.which = Emission::Which::ChainExists;
  e.n = 1;
  e.K = 3;
  auto c = emit(corpus("psl2z"), e);
  CHECK(c.parameters == std::vector<std::string>{"g1"});
  CHECK(serialize(c.formula) == "(neq (pow (var g1) 6) (mul))");

  e.n = 3;
  auto c3 = emit(corpus("psl2z"), e);
  CHECK(c3.parameters.size() == 3);
  CHECK(free_variables(c3.formula) == c3.parameters);
  CHECK(parse_formula(serialize(c3.formula)) == c3.formula);
}

TEST_CASE("special formulas over finite groups")
{
  // the identity of a finite group is special
  for (auto h : {cyclic_group(2), cyclic_group(4), s3(),
                 direct_product(cyclic_group(2), cyclic_group(2))}) {
    CAPTURE(h->order());
    auto g = single(h);
    Emission e;
    e.which = Emission::Which::SpecialForall;
    auto s = emit(g, e);
    CHECK(free_variables(s.formula) == [&] {
      auto v = s.parameters;
      std::sort(v.begin(), v.end());
      return v;
    }());
    auto id = identity_assignment(g);
    CHECK(evaluate_finite(s.formula, *h, id));

    // the trivial map is not
    std::map<std::string, int> triv;
    for (auto const &[k, v] : id)
      triv[k] = 0;
    CHECK(!evaluate_finite(s.formula, *h, triv));
  }

  // in S3 the map fixing the 3-cycles and sending all transpositions to one
  // transposition is no homomorphism
  auto h = s3();
  auto g = single(h);
  Emission e;
  e.which = Emission::Which::SpecialForall;
  auto s = emit(g, e);
  auto id = identity_assignment(g);
  auto bent = id;
  int tr = -1;
  for (int x = 1; x < h->order(); ++x)
    if (h->element_order(x) == 2)
      tr = tr < 0 ? x : tr;
  for (auto &[k, v] : bent)
    if (h->element_order(v) == 2)
      v = tr;
  CHECK(!evaluate_finite(s.formula, *h, bent));
}

TEST_CASE("zeta")
{
  Emission z;
  z.which = Emission::Which::Zeta;
  auto t = emit(corpus("trivial"), z);
  CHECK(free_variables(t.formula).empty());
  CHECK(evaluate_finite(t.formula, *cyclic_group(1)));
  CHECK(evaluate_finite(t.formula, *s3()));

  for (auto const &name : corpus_names()) {
    CAPTURE(name);
    auto f = emit(corpus(name), z);
    CHECK(free_variables(f.formula).empty());
    auto text = serialize(f.formula);
    auto back = parse_formula(text);
    CHECK(back == f.formula);
    CHECK(symbol_count(back) == symbol_count(f.formula));
    if (name != "trivial")
      CHECK(symbol_count(f.formula) > symbol_count(t.formula));
  }

  auto psl = emit(corpus("psl2z"), z);
  CHECK(symbol_count(t.formula) < symbol_count(psl.formula));

  // a ball condition adds inequations
  Emission sn;
  sn.which = Emission::Which::SpecialForallN;
  sn.n = 1;
  Emission sp;
  sp.which = Emission::Which::SpecialForall;
  CHECK(symbol_count(emit(corpus("psl2z"), sn).formula) >
        symbol_count(emit(corpus("psl2z"), sp).formula));

  // PreStrong has one chain per non-elementary normalizer
  Emission ps;
  ps.which = Emission::Which::PreStrongExists;
  auto pf = emit(corpus("f2xz2"), ps);
  CHECK(pf.parameters == generator_variables(reduce(corpus("f2xz2"))));
  CHECK(symbol_count(pf.formula) > 1);
}

TEST_CASE("theta sentences")
{
  // over finite groups theta_1,n holds exactly when there are n classes of
  // subgroups of order at most K, with K taken from the graph
  auto g = single(cyclic_group(2));
  Emission th;
  th.which = Emission::Which::ThetaInvariant;
  th.i = 1;
  th.n = 2;
  auto f = emit(g, th);
  CHECK(free_variables(f.formula).empty());
  CHECK(parse_formula(serialize(f.formula)) == f.formula);
  CHECK(evaluate_finite(f.formula, *cyclic_group(2)));
  CHECK(!evaluate_finite(f.formula, *cyclic_group(1)));
  th.n = 3;
  CHECK(!evaluate_finite(emit(g, th).formula, *cyclic_group(2)));
  CHECK(evaluate_finite(emit(g, th).formula, *direct_product(cyclic_group(2), cyclic_group(2)),
                        {}, 100000000));

  for (int i = 2; i <= 5; ++i) {
    th.i = i;
    th.n = 2;
    auto s = emit(corpus("psl2z"), th);
    CHECK(free_variables(s.formula).empty());
    CHECK(parse_formula(serialize(s.formula)) == s.formula);
  }
  th.i = 6;
  CHECK_THROWS(emit(g, th));
}
