#pragma once

#include <algorithm>
#include <numeric>
#include <random>

#include "vfg/gog.hpp"
#include "vfg/splittings.hpp"
#include "vfg/vcyc.hpp"

// random inputs shared by the unit tests and the acceptance binary

namespace vfg::testing
{

// a graph of groups isomorphic to g: vertices and edges shuffled and renamed,
// edges reversed at random, vertex groups conjugated inside Sym(n) and edge
// maps twisted by inner automorphisms
inline GraphOfGroups scramble(GraphOfGroups const &g, std::mt19937_64 &rng)
{
  int nv = g.num_vertices(), ne = g.num_edges();
  std::vector<int> vperm(nv), eperm(ne);
  std::iota(vperm.begin(), vperm.end(), 0);
  std::iota(eperm.begin(), eperm.end(), 0);
  std::shuffle(vperm.begin(), vperm.end(), rng);
  std::shuffle(eperm.begin(), eperm.end(), rng);

  std::vector<GroupPtr> groups(nv);
  std::vector<GrpHom> moved(nv);
  for (int v = 0; v < nv; ++v) {
    auto const &gv = g.vertex(v).group;
    std::vector<int> s(gv->degree());
    std::iota(s.begin(), s.end(), 0);
    std::shuffle(s.begin(), s.end(), rng);
    Perm sigma(s);
    std::vector<Perm> gens;
    for (auto const &p : gv->generators())
      gens.push_back(sigma * p * sigma.inverse());
    groups[v] = make_group(gv->degree(), gens);
    std::vector<int> m(gv->order());
    for (int x = 0; x < gv->order(); ++x)
      m[x] = groups[v]->index_of(sigma * gv->elements()[x] * sigma.inverse());
    moved[v] = GrpHom::from_map(gv, groups[v], m);
  }

  std::vector<int> new_index(nv);
  GraphOfGroups h;
  for (int i = 0; i < nv; ++i) {
    int v = vperm[i];
    new_index[v] = h.add_vertex("w" + std::to_string(i) + "_" + std::to_string(rng() % 97),
                                groups[v]);
  }
  for (int i = 0; i < ne; ++i) {
    auto const &e = g.edge(eperm[i]);
    auto twist = [&](int v, GrpHom const &inj) {
      auto const &gv = g.vertex(v).group;
      int c = static_cast<int>(rng() % gv->order());
      std::vector<int> m(e.group->order());
      for (int x = 0; x < e.group->order(); ++x)
        m[x] = moved[v](gv->conj(c, inj(x)));
      return GrpHom::from_map(e.group, groups[v], m);
    };
    auto f = twist(e.from, e.inj_from);
    auto t = twist(e.to, e.inj_to);
    std::string id = "f" + std::to_string(i);
    if (rng() % 2)
      h.add_edge(id, e.group, new_index[e.to], new_index[e.from], t, f);
    else
      h.add_edge(id, e.group, new_index[e.from], new_index[e.to], f, t);
  }
  h.finalize();
  return h;
}

// C -> G sending the generator of the cyclic group C to x
inline GrpHom cyclic_into(GroupPtr const &c, GroupPtr const &g, int x)
{
  std::vector<int> m(c->order());
  for (int i = 0; i < c->order(); ++i)
    m[i] = g->pow(x, i);
  return GrpHom::from_map(c, g, m);
}

inline GroupPtr dihedral_group(int n)
{
  std::vector<int> rot(n), ref(n);
  for (int i = 0; i < n; ++i) {
    rot[i] = (i + 1) % n;
    ref[i] = (n - i) % n;
  }
  return make_group(n, {Perm(rot), Perm(ref)});
}

inline GroupPtr random_small_group(std::mt19937_64 &rng)
{
  switch (rng() % 5) {
  case 0: return cyclic_group(1 + static_cast<int>(rng() % 6));
  case 1: return direct_product(cyclic_group(2), cyclic_group(2));
  case 2: return dihedral_group(3);
  case 3: return direct_product(cyclic_group(2), cyclic_group(3));
  default: return cyclic_group(2 * (1 + static_cast<int>(rng() % 3)));
  }
}

// elements of exact order k
inline std::vector<int> elements_of_order(FinGroup const &g, int k)
{
  std::vector<int> res;
  for (int x = 0; x < g.order(); ++x)
    if (g.element_order(x) == k)
      res.push_back(x);
  return res;
}

// a connected graph of small finite groups with cyclic edge groups, reduced
inline GraphOfGroups random_reduced_graph(std::mt19937_64 &rng)
{
  GraphOfGroups g;
  int nv = 1 + static_cast<int>(rng() % 3);
  for (int v = 0; v < nv; ++v)
    g.add_vertex("v" + std::to_string(v), random_small_group(rng));
  int ne = (nv - 1) + static_cast<int>(rng() % 3);
  for (int e = 0; e < ne; ++e) {
    int from = e < nv - 1 ? e + 1 : static_cast<int>(rng() % nv);
    int to = e < nv - 1 ? static_cast<int>(rng() % (e + 1)) : static_cast<int>(rng() % nv);
    auto const &gf = g.vertex(from).group;
    auto const &gt = g.vertex(to).group;
    std::vector<int> ks{1};
    for (int k = 2; k <= 3; ++k)
      if (!elements_of_order(*gf, k).empty() && !elements_of_order(*gt, k).empty())
        ks.push_back(k);
    int k = ks[rng() % ks.size()];
    auto c = cyclic_group(k);
    int x = 0, y = 0;
    if (k > 1) {
      auto xs = elements_of_order(*gf, k), ys = elements_of_order(*gt, k);
      x = xs[rng() % xs.size()];
      y = ys[rng() % ys.size()];
    }
    g.add_edge("e" + std::to_string(e), c, from, to, cyclic_into(c, gf, x), cyclic_into(c, gt, y));
  }
  g.finalize();
  return vfg::reduce(g);
}

// a virtually cyclic group with |C| <= 12 in structured form
inline VCGroup random_vc_group(std::mt19937_64 &rng)
{
  if (rng() % 2) {
    if (rng() % 4 == 0) {
      // Z/2 x Z/2 with a permutation of its involutions
      auto v4 = direct_product(cyclic_group(2), cyclic_group(2));
      std::vector<int> inv{1, 2, 3};
      std::shuffle(inv.begin(), inv.end(), rng);
      return VCGroup::cyclic(v4, GrpHom::from_map(v4, v4, {0, inv[0], inv[1], inv[2]}));
    }
    int n = 1 + static_cast<int>(rng() % 12);
    auto c = cyclic_group(n);
    std::vector<int> units;
    for (int u = 1; u <= n; ++u)
      if (std::gcd(u, n) == 1)
        units.push_back(u % n);
    int gen = n == 1 ? 0 : c->generator_indices()[0];
    return VCGroup::cyclic(c, cyclic_into(c, c, c->pow(gen, units[rng() % units.size()])));
  }
  // C of index two in both A and B
  int n = 1 + static_cast<int>(rng() % 6);
  auto c = cyclic_group(n);
  auto side = [&](GroupPtr &a, GrpHom &inc) {
    int kind = static_cast<int>(rng() % 3);
    if (kind == 2 && n < 3)
      kind = 0;
    if (kind == 0) {
      a = cyclic_group(2 * n);
      inc = cyclic_into(c, a, a->pow(a->generator_indices()[0], 2));
    } else if (kind == 1) {
      a = direct_product(cyclic_group(n), cyclic_group(2));
      inc = cyclic_into(c, a, n == 1 ? 0 : elements_of_order(*a, n).front());
    } else {
      a = dihedral_group(n);
      inc = cyclic_into(c, a, a->generator_indices()[0]);
    }
  };
  GroupPtr a, b;
  GrpHom ia, ib;
  side(a, ia);
  side(b, ib);
  return VCGroup::dihedral(c, a, ia, b, ib);
}

} // namespace vfg::testing
