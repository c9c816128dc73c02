#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "vfg/gog.hpp"

namespace vfg
{

int Path::steps() const
{
  int n = 0;
  for (auto const &t : tokens)
    n += t.kind == Token::Step;
  return n;
}

struct GraphOfGroups::Derived
{
  int base;
  std::vector<int> tree;
  std::vector<char> in_tree;
  std::vector<Path> tree_paths;
  // indexed by 2 * edge + end
  std::vector<std::vector<Coset>> cosets;
  std::vector<std::vector<int>> transversals;
};

int GraphOfGroups::add_vertex(std::string id, GroupPtr group)
{
  _derived.reset();
  _vertices.push_back({std::move(id), std::move(group)});
  return num_vertices() - 1;
}

int GraphOfGroups::add_edge(std::string id, GroupPtr group, int from, int to,
                            GrpHom inj_from, GrpHom inj_to)
{
  _derived.reset();
  _edges.push_back({std::move(id), std::move(group), from, to,
                    std::move(inj_from), std::move(inj_to)});
  return num_edges() - 1;
}

int GraphOfGroups::vertex_index(std::string const &id) const
{
  for (int v = 0; v < num_vertices(); ++v) {
    if (_vertices[v].id == id)
      return v;
  }
  return -1;
}

int GraphOfGroups::edge_index(std::string const &id) const
{
  for (int e = 0; e < num_edges(); ++e) {
    if (_edges[e].id == id)
      return e;
  }
  return -1;
}

std::vector<std::string> GraphOfGroups::diagnostics() const
{
  std::vector<std::string> diag;

  if (_vertices.empty()) {
    diag.push_back("Disconnected: graph has no vertices");
    return diag;
  }

  std::set<std::string> ids;
  for (auto const &v : _vertices) {
    if (!ids.insert(v.id).second)
      diag.push_back("DuplicateId: vertex " + v.id);
  }
  ids.clear();
  for (auto const &e : _edges) {
    if (!ids.insert(e.id).second)
      diag.push_back("DuplicateId: edge " + e.id);
  }

  bool ends_ok = true;
  for (auto const &e : _edges) {
    if (e.from < 0 || e.from >= num_vertices() || e.to < 0 || e.to >= num_vertices()) {
      diag.push_back("BadEndpoint: edge " + e.id);
      ends_ok = false;
      continue;
    }
    for (int end = 0; end < 2; ++end) {
      auto const &map = end == 0 ? e.inj_from : e.inj_to;
      auto const &v = _vertices[end == 0 ? e.from : e.to];
      std::string which = end == 0 ? "from" : "to";
      if (map.source() != e.group || map.target() != v.group) {
        diag.push_back("BadTransversal: edge " + e.id + " map_" + which +
                       " does not go from the edge group to vertex " + v.id);
      } else if (!map.injective()) {
        diag.push_back("NonInjectiveEdgeMap: edge " + e.id + " map_" + which);
      }
    }
  }

  if (ends_ok) {
    std::vector<int> comp(num_vertices());
    std::iota(comp.begin(), comp.end(), 0);
    std::function<int(int)> find = [&](int x) {
      return comp[x] == x ? x : comp[x] = find(comp[x]);
    };
    for (auto const &e : _edges)
      comp[find(e.from)] = find(e.to);
    for (int v = 0; v < num_vertices(); ++v) {
      if (find(v) != find(0))
        diag.push_back("Disconnected: vertex " + _vertices[v].id);
    }
  }

  return diag;
}

void GraphOfGroups::finalize()
{
  auto diag = diagnostics();
  if (!diag.empty()) {
    std::string msg;
    for (auto const &d : diag)
      msg += (msg.empty() ? "" : "; ") + d;
    throw ValidationError(msg);
  }

  auto d = std::make_shared<Derived>();

  d->base = 0;
  for (int v = 1; v < num_vertices(); ++v) {
    if (_vertices[v].id < _vertices[d->base].id)
      d->base = v;
  }

  std::vector<int> order(num_edges());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return _edges[a].id < _edges[b].id; });

  std::vector<int> comp(num_vertices());
  std::iota(comp.begin(), comp.end(), 0);
  std::function<int(int)> find = [&](int x) {
    return comp[x] == x ? x : comp[x] = find(comp[x]);
  };

  d->in_tree.assign(num_edges(), 0);
  for (int e : order) {
    int a = find(_edges[e].from), b = find(_edges[e].to);
    if (a == b)
      continue;
    comp[a] = b;
    d->tree.push_back(e);
    d->in_tree[e] = 1;
  }
  std::sort(d->tree.begin(), d->tree.end());

  d->tree_paths.assign(num_vertices(), Path{});
  std::vector<char> seen(num_vertices(), 0);
  d->tree_paths[d->base] = Path{d->base, {}};
  seen[d->base] = 1;
  std::deque<int> queue{d->base};
  while (!queue.empty()) {
    int a = queue.front();
    queue.pop_front();
    for (int e : d->tree) {
      for (int sign : {+1, -1}) {
        if (left_vertex(e, sign) != a)
          continue;
        int b = right_vertex(e, sign);
        if (seen[b])
          continue;
        seen[b] = 1;
        d->tree_paths[b] = d->tree_paths[a];
        d->tree_paths[b].tokens.push_back(Token::step(e, sign));
        queue.push_back(b);
      }
    }
  }

  d->cosets.resize(2 * num_edges());
  d->transversals.resize(2 * num_edges());
  for (int e = 0; e < num_edges(); ++e) {
    for (int end = 0; end < 2; ++end) {
      auto const &map = end_map(e, end);
      auto const &vg = _vertices[end_vertex(e, end)].group;
      auto &cos = d->cosets[2 * e + end];
      auto &trans = d->transversals[2 * e + end];
      cos.assign(vg->order(), Coset{-1, -1});
      for (int x = 0; x < vg->order(); ++x) {
        if (cos[x].rep != -1)
          continue;
        trans.push_back(x);
        for (int c = 0; c < _edges[e].group->order(); ++c)
          cos[vg->mul(x, map(c))] = Coset{x, c};
      }
    }
  }

  _derived = d;
}

GraphOfGroups::Derived const &GraphOfGroups::derived() const
{
  if (!_derived)
    throw ValidationError("graph of groups used before finalize()");
  return *_derived;
}

int GraphOfGroups::base() const
{ return derived().base; }

std::vector<int> const &GraphOfGroups::spanning_tree() const
{ return derived().tree; }

bool GraphOfGroups::in_tree(int e) const
{ return derived().in_tree[e]; }

GraphOfGroups::Coset GraphOfGroups::coset(int e, int end, int x) const
{ return derived().cosets[2 * e + end][x]; }

std::vector<int> const &GraphOfGroups::transversal(int e, int end) const
{ return derived().transversals[2 * e + end]; }

Path const &GraphOfGroups::tree_path(int v) const
{ return derived().tree_paths[v]; }

Path GraphOfGroups::vertex_element(int v, int x) const
{
  Path p = tree_path(v);
  if (x != FinGroup::identity())
    p.tokens.push_back(Token::elt(v, x));
  Path back = inverse(tree_path(v));
  p.tokens.insert(p.tokens.end(), back.tokens.begin(), back.tokens.end());
  return normal_form(p);
}

Path GraphOfGroups::edge_letter(int e) const
{
  Path p = tree_path(_edges[e].to);
  p.tokens.push_back(Token::step(e, +1));
  Path back = inverse(tree_path(_edges[e].from));
  p.tokens.insert(p.tokens.end(), back.tokens.begin(), back.tokens.end());
  return normal_form(p);
}

std::vector<Path> GraphOfGroups::generators() const
{
  std::vector<Path> gens;
  for (int v = 0; v < num_vertices(); ++v) {
    for (int x : _vertices[v].group->small_generators())
      gens.push_back(vertex_element(v, x));
  }
  for (int e = 0; e < num_edges(); ++e) {
    if (!in_tree(e))
      gens.push_back(edge_letter(e));
  }
  return gens;
}

int GraphOfGroups::end_of(Path const &p) const
{
  int cur = p.start;
  for (auto const &t : p.tokens) {
    if (t.kind == Token::Step)
      cur = right_vertex(t.id, t.x);
  }
  return cur;
}

bool GraphOfGroups::well_formed(Path const &p) const
{
  if (p.start < 0 || p.start >= num_vertices())
    return false;

  int cur = p.start;
  for (auto const &t : p.tokens) {
    if (t.kind == Token::Elt) {
      if (t.id != cur || t.x < 0 || t.x >= _vertices[cur].group->order())
        return false;
    } else {
      if (t.id < 0 || t.id >= num_edges() || (t.x != 1 && t.x != -1))
        return false;
      if (left_vertex(t.id, t.x) != cur)
        return false;
      cur = right_vertex(t.id, t.x);
    }
  }
  return true;
}

void GraphOfGroups::check(Path const &p) const
{
  if (!well_formed(p))
    throw MalformedWord("tokens are not incidence compatible");
}

Path GraphOfGroups::normal_form(Path const &p) const
{
  check(p);

  struct Entry
  {
    int rep;
    int e;
    int sign;
  };

  std::vector<Entry> stack;
  int vertex = p.start;
  int cur = FinGroup::identity();

  for (auto const &t : p.tokens) {
    auto const &vg = _vertices[vertex].group;
    if (t.kind == Token::Elt) {
      cur = vg->mul(cur, t.x);
      continue;
    }

    int e = t.id, sign = t.x;
    int lend = sign > 0 ? 1 : 0;
    Coset cs = coset(e, lend, cur);

    if (!stack.empty() && stack.back().e == e && stack.back().sign == -sign &&
        cs.rep == FinGroup::identity()) {
      Entry top = stack.back();
      stack.pop_back();
      vertex = left_vertex(top.e, top.sign);
      int c_img = left_map(top.e, top.sign)(cs.c);
      cur = _vertices[vertex].group->mul(top.rep, c_img);
      continue;
    }

    stack.push_back({cs.rep, e, sign});
    vertex = right_vertex(e, sign);
    cur = right_map(e, sign)(cs.c);
  }

  Path res{p.start, {}};
  int v = p.start;
  for (auto const &entry : stack) {
    if (entry.rep != FinGroup::identity())
      res.tokens.push_back(Token::elt(v, entry.rep));
    res.tokens.push_back(Token::step(entry.e, entry.sign));
    v = right_vertex(entry.e, entry.sign);
  }
  if (cur != FinGroup::identity())
    res.tokens.push_back(Token::elt(v, cur));
  return res;
}

Path GraphOfGroups::multiply(Path const &a, Path const &b) const
{
  if (end_of(a) != b.start)
    throw MalformedWord("product of paths that do not compose");
  Path p = a;
  p.tokens.insert(p.tokens.end(), b.tokens.begin(), b.tokens.end());
  return normal_form(p);
}

Path GraphOfGroups::inverse(Path const &p) const
{
  Path res{end_of(p), {}};
  for (auto it = p.tokens.rbegin(); it != p.tokens.rend(); ++it) {
    if (it->kind == Token::Elt)
      res.tokens.push_back(Token::elt(it->id, _vertices[it->id].group->inv(it->x)));
    else
      res.tokens.push_back(Token::step(it->id, -it->x));
  }
  return res;
}

Path GraphOfGroups::power(Path const &p, long long n) const
{
  Path base_elt = n < 0 ? inverse(p) : normal_form(p);
  if (n < 0)
    n = -n;

  Path res{p.start, {}};
  while (n > 0) {
    if (n & 1)
      res = multiply(res, base_elt);
    n >>= 1;
    if (n)
      base_elt = multiply(base_elt, base_elt);
  }
  return res;
}

bool GraphOfGroups::equal(Path const &a, Path const &b) const
{ return normal_form(a) == normal_form(b); }

std::string GraphOfGroups::format(Path const &p) const
{
  if (p.tokens.empty())
    return "1";

  std::ostringstream os;
  bool first = true;
  for (auto const &t : p.tokens) {
    if (!first)
      os << ' ';
    first = false;
    if (t.kind == Token::Elt)
      os << 'v' << _vertices[t.id].id << ':' << t.x;
    else
      os << 'e' << _edges[t.id].id << ':' << (t.x > 0 ? '+' : '-');
  }
  return os.str();
}

Path GraphOfGroups::parse(std::string const &text, int start) const
{
  Path p{start < 0 ? base() : start, {}};

  std::istringstream is(text);
  std::string tok;
  while (is >> tok) {
    if (tok == "1")
      continue;

    auto colon = tok.rfind(':');
    if (tok.size() < 3 || colon == std::string::npos || colon < 2)
      throw MalformedWord("bad token '" + tok + "'");

    std::string id = tok.substr(1, colon - 1);
    std::string val = tok.substr(colon + 1);

    if (tok[0] == 'v') {
      int v = vertex_index(id);
      if (v < 0)
        throw MalformedWord("unknown vertex '" + id + "'");
      int x;
      try {
        std::size_t used = 0;
        x = std::stoi(val, &used);
        if (used != val.size())
          throw std::invalid_argument(val);
      } catch (std::exception const &) {
        throw MalformedWord("bad element index in '" + tok + "'");
      }
      p.tokens.push_back(Token::elt(v, x));
    } else if (tok[0] == 'e') {
      int e = edge_index(id);
      if (e < 0)
        throw MalformedWord("unknown edge '" + id + "'");
      if (val != "+" && val != "-")
        throw MalformedWord("bad direction in '" + tok + "'");
      p.tokens.push_back(Token::step(e, val == "+" ? 1 : -1));
    } else {
      throw MalformedWord("bad token '" + tok + "'");
    }
  }

  check(p);
  return p;
}

GraphOfGroups GraphOfGroups::relabeled(std::vector<std::string> const &vertex_ids,
                                       std::vector<std::string> const &edge_ids) const
{
  GraphOfGroups g = *this;
  for (int v = 0; v < num_vertices(); ++v)
    g._vertices[v].id = vertex_ids[v];
  for (int e = 0; e < num_edges(); ++e)
    g._edges[e].id = edge_ids[e];
  g._derived.reset();
  g.finalize();
  return g;
}

CyclicReduction cyclic_reduce(GraphOfGroups const &g, Path const &w)
{
  Path conj{w.start, {}};
  Path cur = g.normal_form(w);

  if (g.end_of(cur) != cur.start)
    throw MalformedWord("cyclic reduction of an open path");

  for (;;) {
    int n = cur.steps();
    if (n == 0)
      return {conj, cur, 0};

    // shift the prefix up to and including the first step to the end
    Path shift{cur.start, {}};
    for (auto const &t : cur.tokens) {
      shift.tokens.push_back(t);
      if (t.kind == Token::Step)
        break;
    }

    Path next = g.multiply(g.multiply(g.inverse(shift), cur), shift);
    if (next.steps() >= n)
      return {conj, cur, n};

    conj = g.multiply(conj, shift);
    cur = next;
  }
}

bool is_hyperbolic(GraphOfGroups const &g, Path const &w)
{ return cyclic_reduce(g, w).translation_length > 0; }

int K_of(GraphOfGroups const &g)
{
  int k = 1;
  for (auto const &v : g.vertices())
    k = std::max(k, v.group->order());
  return k;
}

std::vector<Path> ball_generators(GraphOfGroups const &g)
{
  std::vector<Path> gens;
  for (int v = 0; v < g.num_vertices(); ++v) {
    for (int x = 1; x < g.vertex(v).group->order(); ++x)
      gens.push_back(g.vertex_element(v, x));
  }
  for (int e = 0; e < g.num_edges(); ++e) {
    if (g.in_tree(e))
      continue;
    gens.push_back(g.edge_letter(e));
    gens.push_back(g.inverse(g.edge_letter(e)));
  }
  return gens;
}

std::vector<Path> ball(GraphOfGroups const &g, int r, std::size_t budget)
{
  auto gens = ball_generators(g);

  std::set<Path> seen{g.identity()};
  std::vector<Path> layer{g.identity()};
  std::vector<Path> result{g.identity()};

  for (int radius = 1; radius <= r; ++radius) {
    std::vector<Path> next;
    for (auto const &p : layer) {
      for (auto const &s : gens) {
        Path q = g.multiply(p, s);
        if (!seen.insert(q).second)
          continue;
        if (seen.size() > budget)
          throw BudgetExceeded("ball of radius " + std::to_string(r) +
                               " exceeds " + std::to_string(budget) + " elements");
        result.push_back(q);
        next.push_back(std::move(q));
      }
    }
    layer = std::move(next);
  }

  return result;
}

WordHom::WordHom(GraphOfGroups const &src, GraphOfGroups const &dst)
: _src(std::make_shared<GraphOfGroups const>(src)),
  _dst(std::make_shared<GraphOfGroups const>(dst))
{
  vmap.assign(src.num_vertices(), dst.base());
  velt.resize(src.num_vertices());
  for (int v = 0; v < src.num_vertices(); ++v)
    velt[v].assign(src.vertex(v).group->order(), dst.identity());
  edge_plus.assign(src.num_edges(), dst.identity());
  base_conn = dst.identity();
}

WordHom WordHom::identity(GraphOfGroups const &g)
{
  WordHom h(g, g);
  for (int v = 0; v < g.num_vertices(); ++v)
    h.set_vertex_hom(v, v, GrpHom::identity(g.vertex(v).group));
  for (int e = 0; e < g.num_edges(); ++e)
    h.edge_plus[e] = Path{g.edge(e).to, {Token::step(e, +1)}};
  return h;
}

void WordHom::set_vertex_hom(int v, int w, GrpHom const &hom)
{
  vmap[v] = w;
  for (int x = 0; x < _src->vertex(v).group->order(); ++x) {
    int y = hom(x);
    velt[v][x] = Path{w, {}};
    if (y != FinGroup::identity())
      velt[v][x].tokens.push_back(Token::elt(w, y));
  }
}

void WordHom::set_vertex_images(int v, int w, std::vector<Path> const &gen_images)
{
  auto const &vg = _src->vertex(v).group;
  if (gen_images.size() != vg->small_generators().size())
    throw BadHom("vertex " + _src->vertex(v).id + ": wrong number of generator images");
  vmap[v] = w;
  for (int x = 0; x < vg->order(); ++x) {
    Path p{w, {}};
    for (int i : vg->gen_words()[x])
      p = _dst->multiply(p, gen_images[i]);
    velt[v][x] = p;
  }
}

Path WordHom::apply_path(Path const &p) const
{
  _src->check(p);

  Path res{vmap[p.start], {}};
  auto append = [&](Path const &q) {
    res.tokens.insert(res.tokens.end(), q.tokens.begin(), q.tokens.end());
  };

  for (auto const &t : p.tokens) {
    if (t.kind == Token::Elt)
      append(velt[t.id][t.x]);
    else if (t.x > 0)
      append(edge_plus[t.id]);
    else
      append(_dst->inverse(edge_plus[t.id]));
  }
  return _dst->normal_form(res);
}

Path WordHom::apply(Path const &p) const
{
  Path q = base_conn;
  Path img = apply_path(p);
  q.tokens.insert(q.tokens.end(), img.tokens.begin(), img.tokens.end());
  Path back = _dst->inverse(base_conn);
  q.tokens.insert(q.tokens.end(), back.tokens.begin(), back.tokens.end());
  return _dst->normal_form(q);
}

std::vector<std::string> WordHom::verify() const
{
  std::vector<std::string> diag;
  auto const &src = *_src;
  auto const &dst = *_dst;

  auto closed_at = [&](Path const &p, int start, int end) {
    return dst.well_formed(p) && p.start == start && dst.end_of(p) == end;
  };

  if (!closed_at(base_conn, dst.base(), vmap[src.base()]))
    diag.push_back("base connector is not a path to the image of the base");

  for (int v = 0; v < src.num_vertices(); ++v) {
    auto const &vg = src.vertex(v).group;
    std::string vid = src.vertex(v).id;
    bool ok = true;
    for (int x = 0; x < vg->order() && ok; ++x) {
      if (!closed_at(velt[v][x], vmap[v], vmap[v])) {
        diag.push_back("vertex " + vid + ": image of element " + std::to_string(x) +
                       " is not a closed path at the image vertex");
        ok = false;
      }
    }
    if (!ok)
      continue;
    if (!dst.is_identity(velt[v][FinGroup::identity()]))
      diag.push_back("vertex " + vid + ": identity not sent to identity");
    for (int x = 0; x < vg->order() && ok; ++x) {
      for (int s : vg->small_generators()) {
        if (dst.multiply(velt[v][x], velt[v][s]) != dst.normal_form(velt[v][vg->mul(x, s)])) {
          diag.push_back("vertex " + vid + ": multiplication not preserved");
          ok = false;
          break;
        }
      }
    }
  }

  for (int e = 0; e < src.num_edges(); ++e) {
    auto const &edge = src.edge(e);
    if (!closed_at(edge_plus[e], vmap[edge.to], vmap[edge.from])) {
      diag.push_back("edge " + edge.id + ": letter image has wrong endpoints");
      continue;
    }
    for (int c : edge.group->small_generators()) {
      Path lhs = dst.multiply(dst.multiply(edge_plus[e], velt[edge.from][edge.inj_from(c)]),
                              dst.inverse(edge_plus[e]));
      if (lhs != dst.normal_form(velt[edge.to][edge.inj_to(c)])) {
        diag.push_back("edge " + edge.id + ": edge relation violated");
        break;
      }
    }
  }

  return diag;
}

WordHom WordHom::then(WordHom const &after) const
{
  WordHom res(*_src, after.target());
  for (int v = 0; v < _src->num_vertices(); ++v) {
    res.vmap[v] = after.vmap[vmap[v]];
    for (std::size_t x = 0; x < velt[v].size(); ++x)
      res.velt[v][x] = after.apply_path(velt[v][x]);
  }
  for (int e = 0; e < _src->num_edges(); ++e)
    res.edge_plus[e] = after.apply_path(edge_plus[e]);
  res.base_conn = after.target().multiply(after.base_conn, after.apply_path(base_conn));
  return res;
}

Path random_word(GraphOfGroups const &g, int len, std::mt19937_64 &rng)
{
  Path p = g.identity();
  int u = g.base();

  for (int i = 0; i < len; ++i) {
    std::vector<Token> moves;
    for (int x = 1; x < g.vertex(u).group->order(); ++x)
      moves.push_back(Token::elt(u, x));
    for (int e = 0; e < g.num_edges(); ++e) {
      for (int sign : {+1, -1}) {
        if (g.left_vertex(e, sign) == u)
          moves.push_back(Token::step(e, sign));
      }
    }
    if (moves.empty())
      break;
    auto t = moves[std::uniform_int_distribution<std::size_t>(0, moves.size() - 1)(rng)];
    p.tokens.push_back(t);
    if (t.kind == Token::Step)
      u = g.right_vertex(t.id, t.x);
  }

  Path back = g.inverse(g.tree_path(u));
  p.tokens.insert(p.tokens.end(), back.tokens.begin(), back.tokens.end());
  return p;
}

} // namespace vfg
