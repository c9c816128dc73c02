#include <algorithm>
#include <functional>
#include <iomanip>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "vfg/analysis.hpp"

namespace vfg
{

std::string to_string(Kind kind)
{
  switch (kind) {
  case Kind::Finite:
    return "Finite";
  case Kind::VCCyclic:
    return "VCCyclic";
  case Kind::VCDihedral:
    return "VCDihedral";
  case Kind::NonElementary:
    return "NonElementary";
  }
  return "?";
}

namespace
{

Path elt_path(int v, int x)
{
  Path p{v, {}};
  if (x != FinGroup::identity())
    p.tokens.push_back(Token::elt(v, x));
  return p;
}

Path concat(std::initializer_list<Path> parts)
{
  Path res{parts.begin()->start, {}};
  for (auto const &p : parts)
    res.tokens.insert(res.tokens.end(), p.tokens.begin(), p.tokens.end());
  return res;
}

std::string padded(char prefix, int i)
{
  std::ostringstream os;
  os << prefix << std::setw(4) << std::setfill('0') << i;
  return os.str();
}

// all elements of the finite subgroup generated by gens (closed at the base)
std::vector<Path> close_finite(GraphOfGroups const &g, std::vector<Path> const &gens)
{
  int cap = K_of(g);
  std::set<Path> seen{g.identity()};
  std::vector<Path> list{g.identity()};
  for (std::size_t i = 0; i < list.size(); ++i) {
    for (auto const &s : gens) {
      Path y = g.multiply(list[i], s);
      if (seen.insert(y).second) {
        if (static_cast<int>(seen.size()) > cap)
          throw Error("NotFinite", "generated subgroup exceeds the largest vertex group");
        list.push_back(y);
      }
    }
  }
  return list;
}

// tree vertex reached by a path from the base: drop the trailing element
Path tree_vertex(GraphOfGroups const &g, Path const &p)
{
  Path q = g.normal_form(p);
  if (!q.tokens.empty() && q.tokens.back().kind == Token::Elt)
    q.tokens.pop_back();
  return q;
}

} // namespace

std::vector<Path> FiniteSubgroup::elements(GraphOfGroups const &g) const
{
  int v = g.end_of(conj);
  Path inv = g.inverse(conj);
  std::vector<Path> res;
  for (int y : sub.elements())
    res.push_back(g.normal_form(concat({conj, elt_path(v, y), inv})));
  return res;
}

bool FiniteSubgroup::contains(GraphOfGroups const &g, Path const &x) const
{
  int y = as_vertex_element(g, concat({g.inverse(conj), x, conj}));
  return y >= 0 && sub.contains(y);
}

int as_vertex_element(GraphOfGroups const &g, Path const &x)
{
  Path nf = g.normal_form(x);
  if (nf.steps() > 0)
    return -1;
  return nf.tokens.empty() ? FinGroup::identity() : nf.tokens[0].x;
}

FiniteSubgroup FinClass::as_subgroup(GraphOfGroups const &g) const
{ return {g.tree_path(vertex), subgroup}; }

ClassTable::ClassTable(GraphOfGroups const &g)
: _g(g)
{
  for (int v = 0; v < g.num_vertices(); ++v) {
    _node_offset.push_back(static_cast<int>(_nodes.size()));
    int n = static_cast<int>(g.vertex(v).group->subgroup_classes().size());
    for (int j = 0; j < n; ++j)
      _nodes.push_back({v, j});
  }

  for (int e = 0; e < g.num_edges(); ++e) {
    auto const &edge = g.edge(e);
    auto const &eclasses = edge.group->subgroup_classes();
    for (int j = 0; j < static_cast<int>(eclasses.size()); ++j) {
      auto const &h0 = eclasses[j].representative;
      auto [ca, xa] = locate_subgroup_class(g.vertex(edge.from).group->subgroup_classes(),
                                            edge.inj_from.image(h0));
      auto [cb, xb] = locate_subgroup_class(g.vertex(edge.to).group->subgroup_classes(),
                                            edge.inj_to.image(h0));
      _links.push_back({e, j, node_of(edge.from, ca), node_of(edge.to, cb), xa, xb});
    }
  }

  int n = static_cast<int>(_nodes.size());
  std::vector<int> comp(n);
  std::iota(comp.begin(), comp.end(), 0);
  std::function<int(int)> find = [&](int x) {
    return comp[x] == x ? x : comp[x] = find(comp[x]);
  };
  for (auto const &l : _links) {
    int a = find(l.a), b = find(l.b);
    if (a != b)
      comp[std::max(a, b)] = std::min(a, b);
  }

  // roots are the minimal nodes of their components
  std::vector<int> roots;
  for (int i = 0; i < n; ++i) {
    if (find(i) == i)
      roots.push_back(i);
  }
  std::stable_sort(roots.begin(), roots.end(), [&](int a, int b) {
    return node_subgroup(a).order() < node_subgroup(b).order();
  });

  std::vector<int> class_of_root(n, -1);
  for (std::size_t k = 0; k < roots.size(); ++k) {
    int r = roots[k];
    class_of_root[r] = static_cast<int>(k);
    auto const &sub = node_subgroup(r);
    _classes.push_back({static_cast<int>(k), _nodes[r].vertex, sub, sub.order()});
  }

  _node_class.resize(n);
  for (int i = 0; i < n; ++i)
    _node_class[i] = class_of_root[find(i)];

  std::vector<std::vector<int>> adj(n);
  for (int k = 0; k < static_cast<int>(_links.size()); ++k) {
    adj[_links[k].a].push_back(k);
    adj[_links[k].b].push_back(k);
  }

  _witness.assign(n, Path{});
  std::vector<char> seen(n, 0);
  for (int r : roots) {
    _witness[r] = g.tree_path(_nodes[r].vertex);
    seen[r] = 1;
    std::vector<int> queue{r};
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
      int a = queue[qi];
      for (int k : adj[a]) {
        auto const &l = _links[k];
        int va = g.edge(l.edge).from, vb = g.edge(l.edge).to;
        auto const &ga = g.vertex(va).group;
        auto const &gb = g.vertex(vb).group;
        if (l.a == a && !seen[l.b]) {
          _witness[l.b] = g.normal_form(concat({_witness[a], elt_path(va, l.x_a),
                                                Path{va, {Token::step(l.edge, -1)}},
                                                elt_path(vb, gb->inv(l.x_b))}));
          seen[l.b] = 1;
          queue.push_back(l.b);
        }
        if (l.b == a && !seen[l.a]) {
          _witness[l.a] = g.normal_form(concat({_witness[a], elt_path(vb, l.x_b),
                                                Path{vb, {Token::step(l.edge, +1)}},
                                                elt_path(va, ga->inv(l.x_a))}));
          seen[l.a] = 1;
          queue.push_back(l.a);
        }
      }
    }
  }
}

int ClassTable::node_of(int v, int vclass) const
{ return _node_offset[v] + vclass; }

Subgrp const &ClassTable::node_subgroup(int node) const
{
  auto const &n = _nodes[node];
  return _g.vertex(n.vertex).group->subgroup_classes()[n.vclass].representative;
}

ClassTable::Location ClassTable::locate(std::vector<Path> const &gens) const
{
  auto const &g = _g;
  auto elements = close_finite(g, gens);

  std::vector<Path> verts;
  for (auto const &f : elements)
    verts.push_back(tree_vertex(g, f));

  // a finite group fixes the centre of any orbit
  std::size_t bi = 0, bj = 0;
  int best = 0;
  for (std::size_t i = 0; i < verts.size(); ++i) {
    for (std::size_t j = i + 1; j < verts.size(); ++j) {
      int d = g.multiply(g.inverse(verts[i]), verts[j]).steps();
      if (d > best) {
        best = d;
        bi = i;
        bj = j;
      }
    }
  }

  Path between = g.multiply(g.inverse(verts[bi]), verts[bj]);
  Path prefix{between.start, {}};
  int steps = 0;
  for (auto const &t : between.tokens) {
    if (steps == best / 2)
      break;
    prefix.tokens.push_back(t);
    steps += t.kind == Token::Step;
  }
  Path m = tree_vertex(g, g.multiply(verts[bi], prefix));
  int v = g.end_of(m);
  Path minv = g.inverse(m);

  std::vector<int> local;
  for (auto const &f : elements) {
    int y = as_vertex_element(g, concat({minv, f, m}));
    if (y < 0)
      throw Error("NotFinite", "subgroup does not fix the centre of an orbit");
    local.push_back(y);
  }
  Subgrp h(g.vertex(v).group, local);

  auto [vclass, x] = locate_subgroup_class(g.vertex(v).group->subgroup_classes(), h);
  int node = node_of(v, vclass);

  Location loc;
  loc.class_id = _node_class[node];
  loc.conj = g.normal_form(concat({_witness[node], elt_path(v, x), minv}));
  loc.located = FiniteSubgroup{m, h};
  return loc;
}

std::vector<FinClass> finite_subgroup_classes(GraphOfGroups const &g)
{ return ClassTable(g).classes(); }

Kind classify_elementary(GraphOfGroups const &n)
{
  auto r = reduce(n);
  if (r.num_edges() == 0)
    return Kind::Finite;
  if (r.num_edges() == 1) {
    auto const &e = r.edge(0);
    if (e.from == e.to && e.inj_from.surjective() && e.inj_to.surjective())
      return Kind::VCCyclic;
    if (e.from != e.to) {
      int o = e.group->order();
      if (r.vertex(e.from).group->order() == 2 * o && r.vertex(e.to).group->order() == 2 * o)
        return Kind::VCDihedral;
    }
  }
  return Kind::NonElementary;
}

NormalizerInfo normalizer(ClassTable const &table, FinClass const &c)
{
  auto const &g = table.graph();

  std::vector<int> members;
  for (int i = 0; i < static_cast<int>(table.nodes().size()); ++i) {
    if (table.class_of_node(i) == c.id)
      members.push_back(i);
  }

  NormalizerInfo info;
  info.subgroup = c;

  auto &n = info.presentation;
  std::map<int, int> local;
  std::vector<GrpHom> incl;
  std::vector<std::vector<int>> lookup;

  for (int node : members) {
    int v = table.nodes()[node].vertex;
    auto const &vg = g.vertex(v).group;
    auto [grp, inc] = table.node_subgroup(node).normalizer().realize();
    local[node] = n.add_vertex(padded('n', static_cast<int>(local.size())), grp);
    std::vector<int> lk(vg->order(), -1);
    for (int i = 0; i < grp->order(); ++i)
      lk[inc(i)] = i;
    incl.push_back(inc);
    lookup.push_back(std::move(lk));
  }

  std::vector<ClassTable::Link> used;
  for (auto const &l : table.links()) {
    if (table.class_of_node(l.a) != c.id)
      continue;

    auto const &edge = g.edge(l.edge);
    auto const &h0 = edge.group->subgroup_classes()[l.eclass].representative;
    auto [eg, einc] = h0.normalizer().realize();

    int a = local.at(l.a), b = local.at(l.b);
    auto const &ga = g.vertex(edge.from).group;
    auto const &gb = g.vertex(edge.to).group;

    std::vector<int> mf(eg->order()), mt(eg->order());
    for (int i = 0; i < eg->order(); ++i) {
      mf[i] = lookup[a][ga->conj(l.x_a, edge.inj_from(einc(i)))];
      mt[i] = lookup[b][gb->conj(l.x_b, edge.inj_to(einc(i)))];
    }
    n.add_edge(padded('m', static_cast<int>(used.size())), eg, a, b,
               GrpHom::from_map(eg, n.vertex(a).group, mf),
               GrpHom::from_map(eg, n.vertex(b).group, mt));
    used.push_back(l);
  }
  n.finalize();

  WordHom emb(n, g);
  for (auto const &[node, a] : local)
    emb.set_vertex_hom(a, table.nodes()[node].vertex, incl[a]);
  for (int k = 0; k < static_cast<int>(used.size()); ++k) {
    auto const &l = used[k];
    auto const &edge = g.edge(l.edge);
    auto const &ga = g.vertex(edge.from).group;
    emb.edge_plus[k] = g.normal_form(concat({elt_path(edge.to, l.x_b),
                                             Path{edge.to, {Token::step(l.edge, +1)}},
                                             elt_path(edge.from, ga->inv(l.x_a))}));
  }
  emb.base_conn = table.witness(members.front());

  info.embedding = emb;
  info.kind = classify_elementary(n);
  for (auto const &gen : n.generators())
    info.generators.push_back(emb.apply(gen));
  return info;
}

NormalizerInfo normalizer(GraphOfGroups const &g, FinClass const &c)
{ return normalizer(ClassTable(g), c); }

std::vector<std::vector<int>> induced_automorphisms(GraphOfGroups const &g,
                                                    NormalizerInfo const &n)
{
  auto elems = n.subgroup.as_subgroup(g).elements(g);
  std::map<Path, int> index;
  for (int i = 0; i < static_cast<int>(elems.size()); ++i)
    index[elems[i]] = i;

  std::vector<std::vector<int>> gens;
  for (auto const &s : n.generators) {
    std::vector<int> perm(elems.size());
    for (std::size_t i = 0; i < elems.size(); ++i)
      perm[i] = index.at(g.conjugate(s, elems[i]));
    gens.push_back(perm);
  }

  std::vector<int> id(elems.size());
  std::iota(id.begin(), id.end(), 0);
  std::set<std::vector<int>> seen{id};
  std::vector<std::vector<int>> group{id};
  for (std::size_t i = 0; i < group.size(); ++i) {
    for (auto const &s : gens) {
      std::vector<int> p(elems.size());
      for (std::size_t k = 0; k < p.size(); ++k)
        p[k] = s[group[i][k]];
      if (seen.insert(p).second)
        group.push_back(p);
    }
  }
  return group;
}

namespace
{

// largest subset of the vertex group at the end of u (as u . X . u^-1) that is
// invariant under conjugation by the given elements and their inverses
Subgrp invariant_core(GraphOfGroups const &g, Path const &u, std::vector<int> start,
                      std::vector<Path> const &by)
{
  int x = g.end_of(u);
  auto const &gx = g.vertex(x).group;
  Path uinv = g.inverse(u);

  std::vector<Path> local;
  for (auto const &s : by) {
    Path q = g.normal_form(concat({uinv, s, u}));
    local.push_back(q);
    local.push_back(g.inverse(q));
  }

  std::vector<char> in(gx->order(), 0);
  for (int y : start)
    in[y] = 1;

  for (bool changed = true; changed;) {
    changed = false;
    for (int y = 0; y < gx->order(); ++y) {
      if (!in[y])
        continue;
      for (auto const &q : local) {
        int z = as_vertex_element(g, concat({q, elt_path(x, y), g.inverse(q)}));
        if (z < 0 || !in[z]) {
          in[y] = 0;
          changed = true;
          break;
        }
      }
    }
  }

  std::vector<int> res;
  for (int y = 0; y < gx->order(); ++y) {
    if (in[y])
      res.push_back(y);
  }
  return Subgrp(gx, res);
}

} // namespace

FiniteSubgroup E_of(GraphOfGroups const &g, NormalizerInfo const &n)
{
  if (n.kind != Kind::NonElementary)
    throw NotNonElementary("normalizer of class " + std::to_string(n.subgroup.id) +
                           " is " + to_string(n.kind));

  std::optional<CyclicReduction> axis;
  auto const &gens = n.generators;
  for (std::size_t i = 0; i < gens.size() && !axis; ++i) {
    auto cr = cyclic_reduce(g, gens[i]);
    if (cr.translation_length > 0)
      axis = cr;
  }
  for (std::size_t i = 0; i < gens.size() && !axis; ++i) {
    for (std::size_t j = i + 1; j < gens.size() && !axis; ++j) {
      auto cr = cyclic_reduce(g, g.multiply(gens[i], gens[j]));
      if (cr.translation_length > 0)
        axis = cr;
    }
  }
  if (!axis)
    throw NotNonElementary("no hyperbolic element among the normalizer generators");

  Path u = axis->conjugator;
  auto const &gx = g.vertex(g.end_of(u)).group;
  std::vector<int> all(gx->order());
  std::iota(all.begin(), all.end(), 0);

  return FiniteSubgroup{u, invariant_core(g, u, all, gens)};
}

FiniteSubgroup E_of(GraphOfGroups const &g, FinClass const &c)
{ return E_of(g, normalizer(g, c)); }

FiniteSubgroup axis_stabilizer(GraphOfGroups const &g, Path const &h)
{
  auto cr = cyclic_reduce(g, h);
  if (cr.translation_length == 0)
    throw EllipticElement("element has a fixed point in the Bass-Serre tree");

  Path const &u = cr.conjugator;
  Path const &w = cr.reduced;
  int x = g.end_of(u);
  auto const &gx = g.vertex(x).group;

  // vertices of the segment from x to w.x
  std::vector<Path> segment;
  Path prefix{w.start, {}};
  for (auto const &t : w.tokens) {
    prefix.tokens.push_back(t);
    if (t.kind == Token::Step)
      segment.push_back(prefix);
  }

  std::vector<int> start;
  for (int y = 0; y < gx->order(); ++y) {
    bool fixes = true;
    for (auto const &p : segment) {
      if (g.multiply(g.multiply(g.inverse(p), elt_path(x, y)), p).steps() > 0) {
        fixes = false;
        break;
      }
    }
    if (fixes)
      start.push_back(y);
  }

  return FiniteSubgroup{u, invariant_core(g, u, start, {h})};
}

bool m_membership(GraphOfGroups const &g, Path const &h, Path const &x)
{
  auto f0 = axis_stabilizer(g, h);
  Path xhx = g.conjugate(x, h);
  return f0.contains(g, g.multiply(xhx, g.inverse(h))) || f0.contains(g, g.multiply(xhx, h));
}

bool m_membership_commutator(GraphOfGroups const &g, Path const &h, Path const &x)
{
  if (!is_hyperbolic(g, h))
    throw EllipticElement("element has a fixed point in the Bass-Serre tree");

  int k = K_of(g);
  if (k > 8)
    throw BudgetExceeded("K! too large for the literal commutator test");

  long long fact = 1;
  for (int i = 2; i <= k; ++i)
    fact *= i;

  Path a = g.power(h, fact);
  Path b = g.conjugate(x, a);
  Path comm = g.multiply(g.multiply(a, b), g.multiply(g.inverse(a), g.inverse(b)));
  return comm.tokens.empty();
}

Chain find_chain(GraphOfGroups const &g, NormalizerInfo const &n, int radius)
{
  if (n.kind != Kind::NonElementary)
    throw NotNonElementary("chains need a non-elementary normalizer");

  std::vector<Path> local;
  for (; radius >= 1; --radius) {
    try {
      local = ball(n.presentation, radius, 20000);
      break;
    } catch (BudgetExceeded const &) {
    }
  }

  std::vector<Path> pool;
  for (auto const &p : local)
    pool.push_back(n.embedding.apply(p));

  auto e = E_of(g, n);
  std::set<Path> target;
  for (auto const &p : pool) {
    if (e.contains(g, p))
      target.insert(p);
  }

  std::set<Path> inter(pool.begin(), pool.end());
  Chain chain{{}, false};

  for (auto const &h : pool) {
    if (inter == target)
      break;
    if (!is_hyperbolic(g, h))
      continue;
    std::set<Path> next;
    for (auto const &x : inter) {
      if (m_membership(g, h, x))
        next.insert(x);
    }
    if (next.size() < inter.size()) {
      chain.elements.push_back(h);
      inter = std::move(next);
    }
  }

  chain.certified_maximal = !chain.elements.empty() && inter == target;
  return chain;
}

Analysis analyze(GraphOfGroups const &g)
{
  Analysis a;
  a.graph = g;
  a.table = std::make_shared<ClassTable const>(g);

  auto &inv = a.invariants;
  inv.K = K_of(g);

  for (auto const &c : a.table->classes()) {
    ClassAnalysis ca{c, normalizer(*a.table, c), 0, std::nullopt};
    ca.aut_size = static_cast<int>(induced_automorphisms(g, ca.normalizer).size());

    inv.n1 += 1;
    inv.n2 += ca.aut_size;
    if (ca.normalizer.kind == Kind::VCCyclic || ca.normalizer.kind == Kind::VCDihedral)
      inv.n3 += 1;
    if (ca.normalizer.kind == Kind::NonElementary) {
      inv.n4 += 1;
      ca.E = E_of(g, ca.normalizer);
      if (ca.E->order() != c.order)
        inv.n5 += 1;
    }
    inv.profile.emplace_back(c.order, ca.normalizer.kind);
    a.classes.push_back(std::move(ca));
  }
  std::sort(inv.profile.begin(), inv.profile.end());
  return a;
}

InvariantVector invariants(GraphOfGroups const &g)
{ return analyze(g).invariants; }

std::string invariant_mismatch(InvariantVector const &a, InvariantVector const &b)
{
  if (a.K != b.K)
    return "K";
  if (a.n1 != b.n1)
    return "n1";
  if (a.n2 != b.n2)
    return "n2";
  if (a.n3 != b.n3)
    return "n3";
  if (a.n4 != b.n4)
    return "n4";
  if (a.n5 != b.n5)
    return "n5";
  if (a.profile != b.profile)
    return "profile";
  return "";
}

} // namespace vfg
