#include <algorithm>
#include <deque>
#include <functional>
#include <set>
#include <sstream>

#include "vfg/analysis.hpp"
#include "vfg/iso.hpp"

namespace vfg
{

namespace
{

Path elt_path(int v, int x)
{
  Path p{v, {}};
  if (x != FinGroup::identity())
    p.tokens.push_back(Token::elt(v, x));
  return p;
}

// automorphisms of g up to inner ones
std::vector<GrpHom> outer_reps(GroupPtr const &g)
{
  std::vector<GrpHom> reps;
  std::set<std::vector<int>> seen;
  for (auto const &a : automorphisms(g)) {
    if (seen.count(a.map()))
      continue;
    reps.push_back(a);
    for (int x = 0; x < g->order(); ++x) {
      std::vector<int> m(g->order());
      for (int y = 0; y < g->order(); ++y)
        m[y] = g->conj(x, a(y));
      seen.insert(std::move(m));
    }
  }
  return reps;
}

std::string group_signature(FinGroup const &g)
{
  std::map<int, int> hist;
  for (int x = 0; x < g.order(); ++x)
    ++hist[g.element_order(x)];
  std::ostringstream os;
  os << g.order() << (g.is_abelian() ? "a" : "n") << "[";
  for (auto const &[o, n] : hist)
    os << o << ":" << n << ",";
  os << "]";
  return os.str();
}

struct EdgeMatch
{
  GrpHom h;
  int c_from;
  int c_to;
};

// h and correctors with f_x o inj_x = ad(c_x) o inj'_x' o h at both ends
std::optional<EdgeMatch> match_edge(GraphOfGroups const &g1, GraphOfGroups const &g2,
                                    int e, int e2, bool flipped,
                                    std::vector<GrpHom> const &f)
{
  auto const &ed = g1.edge(e);
  auto const &ed2 = g2.edge(e2);
  int end0 = flipped ? 1 : 0;
  GrpHom const &i0 = g2.end_map(e2, end0);
  GrpHom const &i1 = g2.end_map(e2, 1 - end0);
  auto const &w0 = g2.vertex(g2.end_vertex(e2, end0)).group;
  auto const &w1 = g2.vertex(g2.end_vertex(e2, 1 - end0)).group;
  auto const &fa = f[ed.from];
  auto const &fb = f[ed.to];
  int ne = ed.group->order();

  auto img0 = i0.image();
  std::set<std::vector<int>> tried;
  for (int c0 = 0; c0 < w0->order(); ++c0) {
    // h(x) = i0^-1(c0^-1 fa(inj_from x) c0)
    std::vector<int> hm(ne);
    bool ok = true;
    for (int x = 0; x < ne && ok; ++x) {
      int y = w0->conj(w0->inv(c0), fa(ed.inj_from(x)));
      ok = img0.contains(y);
      if (ok)
        hm[x] = i0.preimage(y);
    }
    if (!ok || !tried.insert(hm).second)
      continue;

    for (int c1 = 0; c1 < w1->order(); ++c1) {
      bool good = true;
      for (int x = 0; x < ne && good; ++x)
        good = fb(ed.inj_to(x)) == w1->conj(c1, i1(hm[x]));
      if (good) {
        auto h = GrpHom::from_map(ed.group, ed2.group, hm);
        return EdgeMatch{h, c0, c1};
      }
    }
  }
  return std::nullopt;
}

struct Search
{
  GraphOfGroups const &g1;
  GraphOfGroups const &g2;
  std::vector<int> vmap;
  std::vector<char> vused;
  std::vector<GrpHom> vhom;
  std::vector<std::vector<GrpHom>> reps; // per target vertex

  std::optional<GoGIso> result;

  bool vertex_compatible(int v, int w) const
  {
    auto const &a = *g1.vertex(v).group;
    auto const &b = *g2.vertex(w).group;
    if (group_signature(a) != group_signature(b))
      return false;
    auto degree = [](GraphOfGroups const &g, int x) {
      std::multiset<std::pair<int, int>> d;
      for (auto const &e : g.edges()) {
        if (e.from == x || e.to == x)
          d.insert({e.group->order(), e.from == e.to ? 1 : 0});
      }
      return d;
    };
    return degree(g1, v) == degree(g2, w);
  }

  bool match_edges()
  {
    int ne = g1.num_edges();
    std::vector<int> emap(ne, -1);
    std::vector<char> flip(ne, 0), eused(g2.num_edges(), 0);
    std::vector<GrpHom> ehom(ne);
    std::vector<std::array<int, 2>> corr(ne);

    std::function<bool(int)> rec = [&](int e) -> bool {
      if (e == ne) {
        result = GoGIso{vmap, vhom, emap, flip, ehom, corr};
        return true;
      }
      auto const &ed = g1.edge(e);
      int a = vmap[ed.from], b = vmap[ed.to];
      for (int e2 = 0; e2 < g2.num_edges(); ++e2) {
        if (eused[e2])
          continue;
        auto const &ed2 = g2.edge(e2);
        if (ed2.group->order() != ed.group->order())
          continue;
        for (int fl = 0; fl < 2; ++fl) {
          if (fl == 0 && (ed2.from != a || ed2.to != b))
            continue;
          if (fl == 1 && (ed2.from != b || ed2.to != a))
            continue;
          auto m = match_edge(g1, g2, e, e2, fl == 1, vhom);
          if (!m)
            continue;
          emap[e] = e2;
          flip[e] = static_cast<char>(fl);
          ehom[e] = m->h;
          corr[e] = {m->c_from, m->c_to};
          eused[e2] = 1;
          if (rec(e + 1))
            return true;
          eused[e2] = 0;
        }
      }
      return false;
    };
    return rec(0);
  }

  bool vertex_isos(int v)
  {
    if (v == g1.num_vertices())
      return match_edges();
    int w = vmap[v];
    auto base = find_isomorphism(g1.vertex(v).group, g2.vertex(w).group);
    if (!base)
      return false;
    if (reps[w].empty())
      reps[w] = outer_reps(g2.vertex(w).group);
    for (auto const &a : reps[w]) {
      vhom[v] = base->then(a);
      if (vertex_isos(v + 1))
        return true;
    }
    return false;
  }

  bool vertices(int v)
  {
    if (v == g1.num_vertices())
      return edges_possible() && vertex_isos(0);
    for (int w = 0; w < g2.num_vertices(); ++w) {
      if (vused[w] || !vertex_compatible(v, w))
        continue;
      vmap[v] = w;
      vused[w] = 1;
      if (vertices(v + 1))
        return true;
      vused[w] = 0;
    }
    return false;
  }

  // the underlying graphs match under vmap
  bool edges_possible() const
  {
    std::multiset<std::tuple<int, int, int>> a, b;
    for (auto const &e : g1.edges()) {
      int x = vmap[e.from], y = vmap[e.to];
      a.insert({std::min(x, y), std::max(x, y), e.group->order()});
    }
    for (auto const &e : g2.edges())
      b.insert({std::min(e.from, e.to), std::max(e.from, e.to), e.group->order()});
    return a == b;
  }
};

nlohmann::json move_to_json(SlideMove const &m)
{
  return {{"edge", m.edge}, {"edge_end", m.edge_end}, {"anchor", m.anchor},
          {"anchor_end", m.anchor_end}, {"conjugator", m.conjugator}};
}

SlideMove move_from_json(nlohmann::json const &j)
{
  return {j.at("edge").get<int>(), j.at("edge_end").get<int>(), j.at("anchor").get<int>(),
          j.at("anchor_end").get<int>(), j.at("conjugator").get<int>()};
}

} // namespace

WordHom GoGIso::word_hom(GraphOfGroups const &g1, GraphOfGroups const &g2) const
{
  WordHom h(g1, g2);
  for (int v = 0; v < g1.num_vertices(); ++v)
    h.set_vertex_hom(v, vmap[v], vhom[v]);
  for (int e = 0; e < g1.num_edges(); ++e) {
    auto const &ed = g1.edge(e);
    int from2 = vmap[ed.from], to2 = vmap[ed.to];
    auto const &gf = g2.vertex(from2).group;
    Path p = elt_path(to2, corrector[e][1]);
    p.tokens.push_back(Token::step(emap[e], flipped[e] ? -1 : +1));
    Path q = elt_path(from2, gf->inv(corrector[e][0]));
    p.tokens.insert(p.tokens.end(), q.tokens.begin(), q.tokens.end());
    h.edge_plus[e] = p;
  }
  h.base_conn = g2.tree_path(vmap[g1.base()]);
  return h;
}

nlohmann::json GoGIso::to_json(GraphOfGroups const &g1, GraphOfGroups const &g2) const
{
  nlohmann::json vs = nlohmann::json::object(), es = nlohmann::json::object();
  for (int v = 0; v < g1.num_vertices(); ++v)
    vs[g1.vertex(v).id] = {{"image", g2.vertex(vmap[v]).id}, {"map", vhom[v].map()}};
  for (int e = 0; e < g1.num_edges(); ++e) {
    es[g1.edge(e).id] = {{"image", g2.edge(emap[e]).id},
                         {"flipped", flipped[e] != 0},
                         {"map", ehom[e].map()},
                         {"correctors", {corrector[e][0], corrector[e][1]}}};
  }
  return {{"vertices", vs}, {"edges", es}};
}

GoGIso GoGIso::from_json(GraphOfGroups const &g1, GraphOfGroups const &g2,
                         nlohmann::json const &j)
{
  try {
    GoGIso iso;
    for (int v = 0; v < g1.num_vertices(); ++v) {
      auto const &vj = j.at("vertices").at(g1.vertex(v).id);
      int w = g2.vertex_index(vj.at("image").get<std::string>());
      iso.vmap.push_back(w);
      iso.vhom.push_back(GrpHom::from_map(g1.vertex(v).group, g2.vertex(w).group,
                                          vj.at("map").get<std::vector<int>>()));
    }
    for (int e = 0; e < g1.num_edges(); ++e) {
      auto const &ej = j.at("edges").at(g1.edge(e).id);
      int e2 = g2.edge_index(ej.at("image").get<std::string>());
      iso.emap.push_back(e2);
      iso.flipped.push_back(ej.at("flipped").get<bool>() ? 1 : 0);
      iso.ehom.push_back(GrpHom::from_map(g1.edge(e).group, g2.edge(e2).group,
                                          ej.at("map").get<std::vector<int>>()));
      auto c = ej.at("correctors").get<std::vector<int>>();
      if (c.size() != 2)
        throw ParseError("edge " + g1.edge(e).id + " needs two correctors");
      iso.corrector.push_back({c[0], c[1]});
    }
    return iso;
  } catch (nlohmann::json::exception const &ex) {
    throw ParseError(std::string("isomorphism: ") + ex.what());
  } catch (ValidationError const &ex) {
    throw ParseError(ex.what());
  }
}

std::optional<GoGIso> gog_isomorphic(GraphOfGroups const &g1, GraphOfGroups const &g2)
{
  if (g1.num_vertices() != g2.num_vertices() || g1.num_edges() != g2.num_edges())
    return std::nullopt;
  if (canonical_key(g1) != canonical_key(g2))
    return std::nullopt;

  int n = g1.num_vertices();
  Search s{g1, g2, std::vector<int>(n, -1), std::vector<char>(n, 0),
           std::vector<GrpHom>(n), std::vector<std::vector<GrpHom>>(n), std::nullopt};
  if (s.vertices(0))
    return s.result;
  return std::nullopt;
}

std::string check_gog_iso(GraphOfGroups const &g1, GraphOfGroups const &g2,
                          GoGIso const &iso)
{
  int nv = g1.num_vertices(), ne = g1.num_edges();
  if (nv != g2.num_vertices() || ne != g2.num_edges())
    return "vertex or edge counts differ";
  if (static_cast<int>(iso.vmap.size()) != nv || static_cast<int>(iso.vhom.size()) != nv ||
      static_cast<int>(iso.emap.size()) != ne || static_cast<int>(iso.flipped.size()) != ne ||
      static_cast<int>(iso.ehom.size()) != ne || static_cast<int>(iso.corrector.size()) != ne)
    return "wrong number of entries";

  std::set<int> vs(iso.vmap.begin(), iso.vmap.end()), es(iso.emap.begin(), iso.emap.end());
  if (static_cast<int>(vs.size()) != nv || static_cast<int>(es.size()) != ne)
    return "not a bijection";

  for (int v = 0; v < nv; ++v) {
    auto const &h = iso.vhom[v];
    if (h.source() != g1.vertex(v).group || h.target() != g2.vertex(iso.vmap[v]).group ||
        !h.bijective())
      return "vertex " + g1.vertex(v).id + " map is no isomorphism";
  }

  for (int e = 0; e < ne; ++e) {
    auto const &ed = g1.edge(e);
    int e2 = iso.emap[e];
    if (e2 < 0 || e2 >= ne)
      return "edge " + ed.id + " has no image";
    auto const &h = iso.ehom[e];
    if (h.source() != ed.group || h.target() != g2.edge(e2).group || !h.bijective())
      return "edge " + ed.id + " map is no isomorphism";
    for (int x = 0; x < 2; ++x) {
      int x2 = iso.flipped[e] ? 1 - x : x;
      int v = g1.end_vertex(e, x);
      int w = g2.end_vertex(e2, x2);
      if (iso.vmap[v] != w)
        return "edge " + ed.id + " is not sent to an edge with matching ends";
      auto const &wg = g2.vertex(w).group;
      int c = iso.corrector[e][x];
      if (c < 0 || c >= wg->order())
        return "edge " + ed.id + " corrector out of range";
      for (int y = 0; y < ed.group->order(); ++y) {
        if (iso.vhom[v](g1.end_map(e, x)(y)) != wg->conj(c, g2.end_map(e2, x2)(h(y))))
          return "edge " + ed.id + " square does not commute";
      }
    }
  }
  return "";
}

std::string canonical_key(GraphOfGroups const &g)
{
  std::vector<std::string> vsig(g.num_vertices());
  for (int v = 0; v < g.num_vertices(); ++v)
    vsig[v] = group_signature(*g.vertex(v).group);

  std::vector<std::vector<std::string>> incident(g.num_vertices());
  std::vector<std::string> ekeys;
  for (int e = 0; e < g.num_edges(); ++e) {
    auto const &ed = g.edge(e);
    // how the edge group sits in each end, up to conjugacy
    auto end_key = [&](int end) {
      auto img = g.end_map(e, end).image();
      return vsig[g.end_vertex(e, end)] + "@" + std::to_string(img.normalizer().order());
    };
    std::string ea = end_key(0), eb = end_key(1);
    if (eb < ea)
      std::swap(ea, eb);
    std::string k = group_signature(*ed.group) + (ed.from == ed.to ? "L" : "E") + "(" + ea +
                    "|" + eb + ")";
    ekeys.push_back(k);
    incident[ed.from].push_back(k + "/" + end_key(0));
    incident[ed.to].push_back(k + "/" + end_key(1));
  }
  std::vector<std::string> vkeys(g.num_vertices());
  for (int v = 0; v < g.num_vertices(); ++v) {
    std::sort(incident[v].begin(), incident[v].end());
    vkeys[v] = vsig[v] + "{";
    for (auto const &k : incident[v])
      vkeys[v] += k + ",";
    vkeys[v] += "}";
  }
  std::sort(vkeys.begin(), vkeys.end());
  std::sort(ekeys.begin(), ekeys.end());

  std::ostringstream os;
  os << "V";
  for (auto const &k : vkeys)
    os << k << ";";
  os << "E";
  for (auto const &k : ekeys)
    os << k << ";";
  return os.str();
}

std::optional<std::size_t> IsoStore::find(GraphOfGroups const &g, GoGIso *iso) const
{
  auto key = canonical_key(g);
  auto [lo, hi] = _by_key.equal_range(key);
  for (auto it = lo; it != hi; ++it) {
    auto found = gog_isomorphic(g, _graphs[it->second]);
    if (found) {
      if (iso)
        *iso = *found;
      return it->second;
    }
  }
  return std::nullopt;
}

std::pair<std::size_t, bool> IsoStore::insert(GraphOfGroups const &g)
{
  if (auto i = find(g))
    return {*i, false};
  std::size_t i = _graphs.size();
  _graphs.push_back(g);
  _keys.push_back(canonical_key(g));
  _by_key.emplace(_keys.back(), i);
  return {i, true};
}

std::string to_string(Verdict v)
{
  switch (v) {
  case Verdict::Yes:
    return "YES";
  case Verdict::No:
    return "NO";
  default:
    return "UNKNOWN";
  }
}

IsoResult group_isomorphic(GraphOfGroups const &g1, GraphOfGroups const &g2,
                           std::size_t budget)
{
  auto r1 = reduce(g1);
  auto r2 = reduce(g2);

  auto bad = invariant_mismatch(invariants(r1), invariants(r2));
  if (!bad.empty())
    return {Verdict::No, std::nullopt, 0, "invariant " + bad + " differs"};

  std::string target_key = canonical_key(r2);
  IsoStore store;
  store.insert(r1);
  std::vector<std::vector<SlideMove>> path_to{{}};
  std::deque<std::size_t> queue{0};

  while (!queue.empty()) {
    std::size_t i = queue.front();
    queue.pop_front();
    auto const cur = store.at(i);

    if (canonical_key(cur) == target_key) {
      if (auto iso = gog_isomorphic(cur, r2))
        return {Verdict::Yes, IsoWitness{path_to[i], *iso}, store.size(),
                "slide path of length " + std::to_string(path_to[i].size())};
    }

    for (auto const &n : slide_neighbors(cur)) {
      auto [j, fresh] = store.insert(n.result);
      if (!fresh)
        continue;
      auto p = path_to[i];
      p.push_back(n.move);
      path_to.push_back(std::move(p));
      queue.push_back(j);
      if (store.size() > budget)
        return {Verdict::Unknown, std::nullopt, store.size(),
                "slide orbit exceeds the budget of " + std::to_string(budget)};
    }
  }

  return {Verdict::No, std::nullopt, store.size(),
          "slide orbit of " + std::to_string(store.size()) +
              " reduced graphs exhausted; relies on slides connecting all reduced "
              "Stallings splittings"};
}

std::string check_iso_witness(GraphOfGroups const &g1, GraphOfGroups const &g2,
                              IsoWitness const &w)
{
  auto cur = reduce(g1);
  for (std::size_t i = 0; i < w.slides.size(); ++i) {
    if (!slide_applicable(cur, w.slides[i]))
      return "slide " + std::to_string(i) + " does not apply";
    cur = reduce(apply_slide(cur, w.slides[i]));
  }
  auto why = check_gog_iso(cur, reduce(g2), w.iso);
  return why.empty() ? "" : "final isomorphism: " + why;
}

nlohmann::json witness_to_json(GraphOfGroups const &g1, GraphOfGroups const &g2,
                               IsoWitness const &w)
{
  auto cur = reduce(g1);
  nlohmann::json slides = nlohmann::json::array();
  for (auto const &m : w.slides) {
    slides.push_back(move_to_json(m));
    cur = reduce(apply_slide(cur, m));
  }
  return {{"slides", slides}, {"iso", w.iso.to_json(cur, reduce(g2))}};
}

IsoWitness witness_from_json(GraphOfGroups const &g1, GraphOfGroups const &g2,
                             nlohmann::json const &j)
{
  try {
    IsoWitness w;
    auto cur = reduce(g1);
    for (auto const &m : j.at("slides")) {
      w.slides.push_back(move_from_json(m));
      if (!slide_applicable(cur, w.slides.back()))
        throw ParseError("witness slide does not apply");
      cur = reduce(apply_slide(cur, w.slides.back()));
    }
    w.iso = GoGIso::from_json(cur, reduce(g2), j.at("iso"));
    return w;
  } catch (nlohmann::json::exception const &ex) {
    throw ParseError(std::string("witness: ") + ex.what());
  }
}

} // namespace vfg
