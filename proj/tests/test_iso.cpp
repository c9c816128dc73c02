#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "doctest.h"

#include "corpus.hpp"
#include "random_graphs.hpp"
#include "vfg/analysis.hpp"
#include "vfg/iso.hpp"

using namespace vfg;
using vfg::testing::scramble;

namespace
{

std::multiset<int> vertex_orders(GraphOfGroups const &g)
{
  std::multiset<int> res;
  for (auto const &v : g.vertices())
    res.insert(v.group->order());
  return res;
}

} // namespace

TEST_CASE("gog isomorphism")
{
  for (auto const &name : corpus_names()) {
    CAPTURE(name);
    auto g = reduce(corpus(name));
    auto self = gog_isomorphic(g, g);
    REQUIRE(self);
    CHECK(check_gog_iso(g, g, *self).empty());
    CHECK(self->word_hom(g, g).verify().empty());

    std::vector<std::string> vids, eids;
    for (int v = 0; v < g.num_vertices(); ++v)
      vids.push_back("r" + std::to_string(g.num_vertices() - v));
    for (int e = 0; e < g.num_edges(); ++e)
      eids.push_back("s" + std::to_string(e));
    auto r = g.relabeled(vids, eids);
    CHECK(canonical_key(g) == canonical_key(r));
    auto iso = gog_isomorphic(g, r);
    REQUIRE(iso);
    CHECK(check_gog_iso(g, r, *iso).empty());

    auto j = iso->to_json(g, r);
    CHECK(check_gog_iso(g, r, GoGIso::from_json(g, r, j)).empty());
  }

  CHECK(!gog_isomorphic(reduce(corpus("n25x6")), reduce(corpus("n25x11"))));
  CHECK(canonical_key(corpus("psl2z")) != canonical_key(corpus("sl2z")));
}

TEST_CASE("randomized isomorphic pairs")
{
  std::mt19937_64 rng(11);
  auto names = corpus_names();
  for (int trial = 0; trial < 200; ++trial) {
    auto const &name = names[trial % names.size()];
    CAPTURE(name);
    CAPTURE(trial);
    auto g = reduce(corpus(name));
    auto h = scramble(g, rng);
    CHECK(canonical_key(g) == canonical_key(h));
    auto iso = gog_isomorphic(g, h);
    REQUIRE(iso);
    CHECK(check_gog_iso(g, h, *iso).empty());

    // the induced map on fundamental groups is a homomorphism that is
    // injective on a small ball
    auto w = iso->word_hom(g, h);
    CHECK(w.verify().empty());
    if (trial < static_cast<int>(names.size())) {
      auto b = ball(g, 2);
      std::set<Path> img;
      for (auto const &x : b)
        img.insert(w.apply(x));
      CHECK(img.size() == b.size());
    }
  }
}

TEST_CASE("broken isomorphisms are rejected")
{
  auto g = reduce(corpus("psl2z"));
  auto iso = *gog_isomorphic(g, g);
  auto bad = iso;
  bad.vmap[0] = bad.vmap[1];
  CHECK(!check_gog_iso(g, g, bad).empty());

  // the edge group of SL2(Z) is central, so only range and bijectivity can break
  auto sl = reduce(corpus("sl2z"));
  auto si = *gog_isomorphic(sl, sl);
  auto t = si;
  t.corrector[0][0] = sl.vertex(sl.edge(0).from).group->order();
  CHECK(!check_gog_iso(sl, sl, t).empty());
  t = si;
  auto const &v0 = sl.vertex(0).group;
  t.vhom[0] = GrpHom::from_map(v0, v0, std::vector<int>(v0->order(), 0));
  CHECK(!check_gog_iso(sl, sl, t).empty());
}

TEST_CASE("isomorphism of fundamental groups")
{
  auto n6 = corpus("n25x6");
  auto n11 = corpus("n25x11");
  auto r = group_isomorphic(n6, n11);
  CHECK(r.verdict == Verdict::No);
  CHECK(r.provenance.find("slides") != std::string::npos);

  auto psl = corpus("psl2z");
  auto sl = corpus("sl2z");
  CHECK(group_isomorphic(psl, sl).verdict == Verdict::No);
  CHECK(group_isomorphic(sl, corpus("sl2z_amalg_z2xf1")).verdict == Verdict::No);

  // reflexive and symmetric on the corpus
  std::mt19937_64 rng(3);
  for (auto const &name : corpus_names()) {
    CAPTURE(name);
    auto g = corpus(name);
    auto h = scramble(reduce(g), rng);
    auto y = group_isomorphic(g, h);
    REQUIRE(y.verdict == Verdict::Yes);
    REQUIRE(y.witness);
    CHECK(check_iso_witness(g, h, *y.witness).empty());
    auto j = witness_to_json(g, h, *y.witness);
    CHECK(check_iso_witness(g, h, witness_from_json(g, h, j)).empty());
    CHECK(group_isomorphic(h, g).verdict == Verdict::Yes);
  }

  // a slide neighbour is isomorphic, with a witness that uses slides when
  // the neighbour is not already gog isomorphic
  for (auto name : {"f2xz2", "z4xf2_hnn_c2", "sl2z_amalg_z2xf1"}) {
    CAPTURE(name);
    auto g = reduce(corpus(name));
    for (auto const &n : slide_neighbors(g)) {
      auto y = group_isomorphic(g, n.result);
      REQUIRE(y.verdict == Verdict::Yes);
      CHECK(check_iso_witness(g, n.result, *y.witness).empty());
      CHECK(vertex_orders(n.result) == vertex_orders(g));
      // a budget of one state cannot reach a neighbour that needs a slide
      if (!gog_isomorphic(g, n.result))
        CHECK(group_isomorphic(g, n.result, 1).verdict == Verdict::Unknown);
    }
  }
}

TEST_CASE("iso store")
{
  std::mt19937_64 rng(5);
  IsoStore store;
  for (auto const &name : corpus_names())
    store.insert(reduce(corpus(name)));
  std::size_t n = store.size();
  for (auto const &name : corpus_names()) {
    auto [i, fresh] = store.insert(scramble(reduce(corpus(name)), rng));
    CHECK(!fresh);
    CHECK(canonical_key(store.at(i)) == canonical_key(reduce(corpus(name))));
  }
  CHECK(store.size() == n);
}
