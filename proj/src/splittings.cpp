#include <algorithm>
#include <functional>
#include <numeric>
#include <set>

#include "vfg/gfg.hpp"
#include "vfg/splittings.hpp"

namespace vfg
{

namespace
{

// collapse edge e into the endpoint whose group is not absorbed
Reduction collapse_edge(GraphOfGroups const &g, int e)
{
  auto const &edge = g.edge(e);

  int removed_end = edge.inj_from.surjective() ? 0 : 1;
  int kept_end = 1 - removed_end;
  int removed = g.end_vertex(e, removed_end);
  int kept = g.end_vertex(e, kept_end);

  auto const &rmap = g.end_map(e, removed_end);
  auto const &kmap = g.end_map(e, kept_end);
  GrpHom psi = rmap.inverse().then(kmap);

  GraphOfGroups res;
  std::vector<int> vnew(g.num_vertices(), -1);
  for (int v = 0; v < g.num_vertices(); ++v) {
    if (v != removed)
      vnew[v] = res.add_vertex(g.vertex(v).id, g.vertex(v).group);
  }
  vnew[removed] = vnew[kept];

  std::vector<int> enew(g.num_edges(), -1);
  for (int f = 0; f < g.num_edges(); ++f) {
    if (f == e)
      continue;
    auto const &fe = g.edge(f);
    GrpHom mf = fe.from == removed ? fe.inj_from.then(psi) : fe.inj_from;
    GrpHom mt = fe.to == removed ? fe.inj_to.then(psi) : fe.inj_to;
    enew[f] = res.add_edge(fe.id, fe.group, vnew[fe.from], vnew[fe.to], mf, mt);
  }
  res.finalize();

  WordHom t(g, res);
  for (int v = 0; v < g.num_vertices(); ++v)
    t.set_vertex_hom(v, vnew[v], v == removed ? psi : GrpHom::identity(g.vertex(v).group));
  for (int f = 0; f < g.num_edges(); ++f) {
    int start = vnew[g.edge(f).to];
    if (f == e)
      t.edge_plus[f] = Path{start, {}};
    else
      t.edge_plus[f] = Path{start, {Token::step(enew[f], +1)}};
  }
  t.base_conn = res.tree_path(vnew[g.base()]);

  // back: the removed vertex is reached from the kept one through e
  std::vector<int> vold(res.num_vertices(), -1);
  for (int v = 0; v < g.num_vertices(); ++v) {
    if (v != removed)
      vold[vnew[v]] = v;
  }
  Path reach{kept, {Token::step(e, removed_end == 0 ? +1 : -1)}};
  auto conn = [&](int v) { return v == removed ? reach : Path{v, {}}; };

  WordHom b(res, g);
  for (int w = 0; w < res.num_vertices(); ++w)
    b.set_vertex_hom(w, vold[w], GrpHom::identity(res.vertex(w).group));
  for (int f = 0; f < g.num_edges(); ++f) {
    if (f == e)
      continue;
    auto const &fe = g.edge(f);
    Path p = conn(fe.to);
    p.tokens.push_back(Token::step(f, +1));
    Path back = conn(fe.from);
    for (auto it = back.tokens.rbegin(); it != back.tokens.rend(); ++it)
      p.tokens.push_back(it->kind == Token::Step ? Token::step(it->id, -it->x) : *it);
    b.edge_plus[enew[f]] = p;
  }
  b.base_conn = g.tree_path(vold[res.base()]);

  return {res, t, b};
}

int collapsible_edge(GraphOfGroups const &g)
{
  int best = -1;
  for (int e = 0; e < g.num_edges(); ++e) {
    auto const &edge = g.edge(e);
    if (edge.from == edge.to)
      continue;
    if (!edge.inj_from.surjective() && !edge.inj_to.surjective())
      continue;
    if (best < 0 || edge.id < g.edge(best).id)
      best = e;
  }
  return best;
}

GraphOfGroups rebuild(GraphOfGroups const &g,
                      std::function<void(GraphOfGroups::Edge &, int)> const &modify)
{
  GraphOfGroups res;
  for (auto const &v : g.vertices())
    res.add_vertex(v.id, v.group);
  for (int e = 0; e < g.num_edges(); ++e) {
    auto edge = g.edge(e);
    modify(edge, e);
    res.add_edge(edge.id, edge.group, edge.from, edge.to, edge.inj_from, edge.inj_to);
  }
  res.finalize();
  return res;
}

} // namespace

Reduction reduce_with_translation(GraphOfGroups const &g)
{
  Reduction cur{g, WordHom::identity(g), WordHom::identity(g)};
  for (int e; (e = collapsible_edge(cur.result)) >= 0;) {
    auto step = collapse_edge(cur.result, e);
    cur.translation = cur.translation.then(step.translation);
    cur.back = step.back.then(cur.back);
    cur.result = std::move(step.result);
  }
  return cur;
}

GraphOfGroups reduce(GraphOfGroups const &g)
{
  GraphOfGroups cur = g;
  for (int e; (e = collapsible_edge(cur)) >= 0;)
    cur = collapse_edge(cur, e).result;
  return cur;
}

bool is_reduced(GraphOfGroups const &g)
{ return collapsible_edge(g) < 0; }

MJsj m_jsj(GraphOfGroups const &g, int m)
{
  MJsj res;
  res.reduced = reduce(g);
  auto const &r = res.reduced;

  std::vector<int> comp(r.num_vertices());
  std::iota(comp.begin(), comp.end(), 0);
  std::function<int(int)> find = [&](int x) {
    return comp[x] == x ? x : comp[x] = find(comp[x]);
  };
  for (auto const &e : r.edges()) {
    if (e.group->order() > m)
      comp[find(e.from)] = find(e.to);
  }

  std::vector<int> factor_of(r.num_vertices(), -1);
  for (int v = 0; v < r.num_vertices(); ++v) {
    int root = find(v);
    if (factor_of[root] < 0) {
      factor_of[root] = static_cast<int>(res.factors.size());
      res.factors.push_back({});
    }
    factor_of[v] = factor_of[root];
    res.factors[factor_of[v]].vertices.push_back(v);
  }

  for (auto &f : res.factors) {
    std::vector<int> local(r.num_vertices(), -1);
    f.id = r.vertex(f.vertices[0]).id;
    for (int v : f.vertices) {
      local[v] = f.graph.add_vertex(r.vertex(v).id, r.vertex(v).group);
      f.id = std::min(f.id, r.vertex(v).id);
    }
    for (auto const &e : r.edges()) {
      if (e.group->order() > m && local[e.from] >= 0)
        f.graph.add_edge(e.id, e.group, local[e.from], local[e.to], e.inj_from, e.inj_to);
    }
    f.graph.finalize();
    f.finite = f.graph.num_edges() == 0;
  }

  for (auto const &e : r.edges()) {
    if (e.group->order() <= m)
      res.edges.push_back({e.id, factor_of[e.from], factor_of[e.to], e.group});
  }

  return res;
}

int m_of(GraphOfGroups const &g)
{
  auto r = reduce(g);
  if (r.num_edges() == 0)
    return r.vertex(0).group->order();

  int m = r.edge(0).group->order();
  for (auto const &e : r.edges())
    m = std::min(m, e.group->order());
  return m;
}

bool slide_applicable(GraphOfGroups const &g, SlideMove const &mv)
{
  if (mv.edge == mv.anchor || mv.edge < 0 || mv.anchor < 0 ||
      mv.edge >= g.num_edges() || mv.anchor >= g.num_edges())
    return false;
  if (mv.edge_end < 0 || mv.edge_end > 1 || mv.anchor_end < 0 || mv.anchor_end > 1)
    return false;

  int v = g.end_vertex(mv.edge, mv.edge_end);
  if (g.end_vertex(mv.anchor, mv.anchor_end) != v)
    return false;

  auto const &vg = g.vertex(v).group;
  if (mv.conjugator < 0 || mv.conjugator >= vg->order())
    return false;

  auto img = g.end_map(mv.edge, mv.edge_end).image();
  auto anchor_img = g.end_map(mv.anchor, mv.anchor_end).image();
  return img.conjugate(vg->inv(mv.conjugator)).subset_of(anchor_img);
}

GraphOfGroups apply_slide(GraphOfGroups const &g, SlideMove const &mv, WordHom *translation)
{
  if (!slide_applicable(g, mv))
    throw IllegalStep("slide move does not apply");

  int v = g.end_vertex(mv.edge, mv.edge_end);
  int w = g.end_vertex(mv.anchor, 1 - mv.anchor_end);
  auto const &vg = g.vertex(v).group;
  int g0 = mv.conjugator;

  auto const &ex = g.end_map(mv.edge, mv.edge_end);
  auto const &fy = g.end_map(mv.anchor, mv.anchor_end);
  auto const &fw = g.end_map(mv.anchor, 1 - mv.anchor_end);

  auto const &edge_group = g.edge(mv.edge).group;
  std::vector<int> map(edge_group->order());
  for (int c = 0; c < edge_group->order(); ++c)
    map[c] = fw(fy.preimage(vg->conj(vg->inv(g0), ex(c))));
  GrpHom moved = GrpHom::from_map(edge_group, g.vertex(w).group, map);

  auto res = rebuild(g, [&](GraphOfGroups::Edge &edge, int e) {
    if (e != mv.edge)
      return;
    if (mv.edge_end == 0) {
      edge.from = w;
      edge.inj_from = moved;
    } else {
      edge.to = w;
      edge.inj_to = moved;
    }
  });

  if (translation) {
    WordHom t(g, res);
    for (int u = 0; u < g.num_vertices(); ++u)
      t.set_vertex_hom(u, u, GrpHom::identity(g.vertex(u).group));

    // step along the anchor from v to w
    int sign = mv.anchor_end == 1 ? +1 : -1;
    for (int e = 0; e < g.num_edges(); ++e) {
      Path p{g.edge(e).to, {}};
      if (e != mv.edge) {
        p.tokens.push_back(Token::step(e, +1));
      } else if (mv.edge_end == 0) {
        p.tokens.push_back(Token::step(e, +1));
        p.tokens.push_back(Token::step(mv.anchor, -sign));
        if (g0 != FinGroup::identity())
          p.tokens.push_back(Token::elt(v, vg->inv(g0)));
      } else {
        if (g0 != FinGroup::identity())
          p.tokens.push_back(Token::elt(v, g0));
        p.tokens.push_back(Token::step(mv.anchor, sign));
        p.tokens.push_back(Token::step(e, +1));
      }
      t.edge_plus[e] = res.normal_form(p);
    }
    t.base_conn = res.identity();
    *translation = t;
  }

  return res;
}

std::vector<SlideResult> slide_neighbors(GraphOfGroups const &g)
{
  std::vector<SlideResult> out;

  for (int e = 0; e < g.num_edges(); ++e) {
    for (int xe = 0; xe < 2; ++xe) {
      int v = g.end_vertex(e, xe);
      auto const &vg = g.vertex(v).group;
      auto img = g.end_map(e, xe).image();

      std::vector<int> centralizer;
      for (int z = 0; z < vg->order(); ++z) {
        bool ok = true;
        for (int y : img.elements()) {
          if (vg->mul(z, y) != vg->mul(y, z)) {
            ok = false;
            break;
          }
        }
        if (ok)
          centralizer.push_back(z);
      }

      for (int f = 0; f < g.num_edges(); ++f) {
        if (f == e)
          continue;
        for (int yf = 0; yf < 2; ++yf) {
          if (g.end_vertex(f, yf) != v)
            continue;

          auto anchor_img = g.end_map(f, yf).image();
          std::vector<char> done(vg->order(), 0);

          for (int g0 = 0; g0 < vg->order(); ++g0) {
            if (done[g0])
              continue;
            for (int z : centralizer) {
              for (int n : anchor_img.elements())
                done[vg->mul(vg->mul(z, g0), n)] = 1;
            }

            SlideMove mv{e, xe, f, yf, g0};
            if (!slide_applicable(g, mv))
              continue;

            WordHom slide_t;
            auto slid = apply_slide(g, mv, &slide_t);
            auto red = reduce_with_translation(slid);
            out.push_back({mv, red.result, slide_t.then(red.translation)});
          }
        }
      }
    }
  }

  return out;
}

CylinderDecomposition cylinders(GraphOfGroups const &g)
{
  CylinderDecomposition res;
  if (g.num_edges() == 0)
    return res;

  int k = g.edge(0).group->order();
  for (auto const &e : g.edges()) {
    if (e.group->order() != k)
      throw MixedEdgeOrders("edge " + e.id + " has order " +
                            std::to_string(e.group->order()) + ", expected " +
                            std::to_string(k));
  }

  std::vector<int> comp(g.num_edges());
  std::iota(comp.begin(), comp.end(), 0);
  std::function<int(int)> find = [&](int x) {
    return comp[x] == x ? x : comp[x] = find(comp[x]);
  };

  for (int v = 0; v < g.num_vertices(); ++v) {
    std::vector<std::pair<int, Subgrp>> ends;
    for (int e = 0; e < g.num_edges(); ++e) {
      for (int end = 0; end < 2; ++end) {
        if (g.end_vertex(e, end) == v)
          ends.emplace_back(e, g.end_map(e, end).image());
      }
    }
    for (std::size_t i = 0; i < ends.size(); ++i) {
      for (std::size_t j = i + 1; j < ends.size(); ++j) {
        if (find(ends[i].first) == find(ends[j].first))
          continue;
        if (conjugator_between(ends[i].second, ends[j].second))
          comp[find(ends[i].first)] = find(ends[j].first);
      }
    }
  }

  res.cylinder_of_edge.assign(g.num_edges(), -1);
  for (int e = 0; e < g.num_edges(); ++e) {
    int root = find(e);
    if (res.cylinder_of_edge[root] < 0) {
      res.cylinder_of_edge[root] = static_cast<int>(res.cylinders.size());
      res.cylinders.push_back({{}, g.edge(e).from, g.edge(e).inj_from.image()});
    }
    res.cylinder_of_edge[e] = res.cylinder_of_edge[root];
    res.cylinders[res.cylinder_of_edge[e]].edges.push_back(e);
  }

  return res;
}

} // namespace vfg
