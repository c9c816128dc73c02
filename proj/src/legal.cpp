#include <algorithm>
#include <map>
#include <set>

#include <boost/multiprecision/miller_rabin.hpp>

#include "vfg/gfg.hpp"
#include "vfg/iso.hpp"
#include "vfg/legal.hpp"
#include "vfg/splittings.hpp"

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

Path concat(Path a, Path const &b)
{
  a.tokens.insert(a.tokens.end(), b.tokens.begin(), b.tokens.end());
  return a;
}

// vertex group element at vertex v as the element tree(v) x tree(v)^-1
Path at_base(GraphOfGroups const &g, int v, Path const &local)
{ return concat(concat(g.tree_path(v), local), g.inverse(g.tree_path(v))); }

std::string fresh_edge_id(GraphOfGroups const &g)
{
  for (int i = g.num_edges();; ++i) {
    std::string id = "x" + std::to_string(i);
    bool used = false;
    for (auto const &e : g.edges())
      used = used || e.id == id;
    if (!used)
      return id;
  }
}

// copy of g with the maps of one edge replaced
GraphOfGroups reglue(GraphOfGroups const &g, int f, GroupPtr group, GrpHom inj_from,
                     GrpHom inj_to)
{
  GraphOfGroups h;
  for (auto const &v : g.vertices())
    h.add_vertex(v.id, v.group);
  for (int e = 0; e < g.num_edges(); ++e) {
    auto const &ed = g.edge(e);
    if (e == f)
      h.add_edge(ed.id, group, ed.from, ed.to, inj_from, inj_to);
    else
      h.add_edge(ed.id, ed.group, ed.from, ed.to, ed.inj_from, ed.inj_to);
  }
  h.finalize();
  return h;
}

// the map on G_v -> G_w of a word map at vertex v, when it is one
GrpHom vertex_part(WordHom const &h, int v, GroupPtr const &src, GroupPtr const &dst)
{
  std::vector<int> m(src->order());
  for (int x = 0; x < src->order(); ++x) {
    auto const &p = h.velt[v][x];
    if (p.tokens.empty())
      m[x] = FinGroup::identity();
    else if (p.tokens.size() == 1 && p.tokens[0].kind == Token::Elt)
      m[x] = p.tokens[0].x;
    else
      throw IllegalStep("vertex image is not a vertex group element");
  }
  return GrpHom::from_map(src, dst, m);
}

// identity on all vertex groups and edge letters; graphs share their vertices
WordHom identity_between(GraphOfGroups const &a, GraphOfGroups const &b)
{
  WordHom h(a, b);
  for (int v = 0; v < a.num_vertices(); ++v)
    h.set_vertex_hom(v, v, GrpHom::identity(a.vertex(v).group));
  for (int e = 0; e < a.num_edges(); ++e)
    h.edge_plus[e] = Path{a.edge(e).to, {Token::step(e, +1)}};
  h.base_conn = b.identity();
  return h;
}

// coordinates of elements of a structured VC subgroup of g
class VCCoordinates
{
public:
  VCCoordinates(GraphOfGroups const &g, VCGroup const &n, WordHom const &into)
  : _g(g), _n(n), _into(into)
  {
    for (int c = 0; c < n.C->order(); ++c)
      _c_of[into.apply(n.c_elem(c))] = c;
    _h = into.apply(n.t);
    _len = cyclic_reduce(g, _h).translation_length;
    _reflections.push_back(n.graph.identity());
    if (n.type == VCType::Dihedral) {
      for (int x = 0; x < n.A->order(); ++x) {
        if (!n.inc_a.image().contains(x)) {
          _reflections.push_back(elt_path(0, x));
          break;
        }
      }
    }
  }

  std::optional<Path> of(Path const &y) const
  {
    for (auto const &r : _reflections) {
      Path z = _g.multiply(_g.inverse(_into.apply(r)), y);
      int tl = cyclic_reduce(_g, z).translation_length;
      if (tl % _len != 0)
        continue;
      long long k = tl / _len;
      for (long long s : {k, -k}) {
        auto it = _c_of.find(_g.multiply(z, _g.power(_h, -s)));
        if (it != _c_of.end())
          return _n.graph.multiply(r, _n.element(it->second, s));
      }
    }
    return std::nullopt;
  }

private:
  GraphOfGroups const &_g;
  VCGroup const &_n;
  WordHom const &_into;
  std::map<Path, int> _c_of;
  Path _h;
  int _len;
  std::vector<Path> _reflections;
};

// the map of fundamental groups given on elements; every vertex goes to the
// target base
std::optional<WordHom> hom_from_elements(GraphOfGroups const &src, GraphOfGroups const &dst,
                                         std::function<std::optional<Path>(Path const &)> f)
{
  WordHom h(src, dst);
  for (int v = 0; v < src.num_vertices(); ++v) {
    h.vmap[v] = dst.base();
    for (int x = 0; x < src.vertex(v).group->order(); ++x) {
      auto y = f(at_base(src, v, elt_path(v, x)));
      if (!y)
        return std::nullopt;
      h.velt[v][x] = *y;
    }
  }
  for (int e = 0; e < src.num_edges(); ++e) {
    auto const &ed = src.edge(e);
    Path letter = concat(concat(src.tree_path(ed.to), Path{ed.to, {Token::step(e, +1)}}),
                         src.inverse(src.tree_path(ed.from)));
    auto y = f(letter);
    if (!y)
      return std::nullopt;
    h.edge_plus[e] = *y;
  }
  h.base_conn = dst.identity();
  return h;
}

struct NormalizerVC
{
  NormalizerInfo info;
  VCStructure s;
  WordHom into;
};

NormalizerVC structured_normalizer(ClassTable const &t, FinClass const &c)
{
  NormalizerVC n{normalizer(t, c), {}, {}};
  n.s = structure_of(n.info.presentation);
  n.into = n.s.to_source.then(n.info.embedding);
  return n;
}

BigInt abs_big(BigInt x)
{ return x < 0 ? BigInt(-x) : x; }

long long letter_exponent(NiceEmbedding const &e)
{
  auto d = e.target.decompose(e.map.apply(e.source.t));
  if (!d)
    throw IllegalStep("letter image outside C<t>");
  return d->second;
}

} // namespace

nlohmann::json LegalStep::to_json() const
{
  if (large)
    return {{"large", {{"class", large->cls}}}};
  return {{"small",
           {{"class", small->cls},
            {"partner", small->partner.to_json()},
            {"there", small->there.to_json()},
            {"back", small->back.to_json()}}}};
}

LegalStep LegalStep::from_json(nlohmann::json const &j)
{
  try {
    LegalStep s;
    if (j.contains("large")) {
      s.large = LegalLargeStep{j.at("large").at("class").get<int>()};
    } else {
      auto const &sj = j.at("small");
      s.small = LegalSmallStep{sj.at("class").get<int>(), VCGroup::from_json(sj.at("partner")),
                               NiceEmbedding::from_json(sj.at("there")),
                               NiceEmbedding::from_json(sj.at("back"))};
    }
    return s;
  } catch (nlohmann::json::exception const &ex) {
    throw ParseError(std::string("step: ") + ex.what());
  } catch (ValidationError const &ex) {
    throw ParseError(std::string("step: ") + ex.what());
  } catch (BadHom const &ex) {
    throw ParseError(std::string("step: ") + ex.what());
  }
}

std::vector<LegalLargeStep> legal_large_candidates(GraphOfGroups const &g)
{
  auto red = reduce(g);
  auto kind = classify_elementary(red);
  if (kind != Kind::NonElementary)
    throw ElementaryGroup("the group is " + to_string(kind));

  std::vector<LegalLargeStep> res;
  for (auto const &ca : analyze(red).classes) {
    if (ca.normalizer.kind == Kind::NonElementary && ca.E && ca.E->order() == ca.cls.order)
      res.push_back({ca.cls.id});
  }
  return res;
}

GraphOfGroups apply_legal_large(GraphOfGroups const &g, LegalLargeStep const &step)
{
  std::vector<LegalLargeStep> cands;
  try {
    cands = legal_large_candidates(g);
  } catch (ElementaryGroup const &ex) {
    throw IllegalStep(ex.what());
  }
  if (std::none_of(cands.begin(), cands.end(),
                   [&](LegalLargeStep const &s) { return s.cls == step.cls; }))
    throw IllegalStep("class " + std::to_string(step.cls) + " admits no legal large extension");

  auto red = reduce(g);
  auto cls = finite_subgroup_classes(red)[step.cls];
  auto [c, incl] = cls.subgroup.realize();

  GraphOfGroups h;
  for (auto const &v : red.vertices())
    h.add_vertex(v.id, v.group);
  for (auto const &e : red.edges())
    h.add_edge(e.id, e.group, e.from, e.to, e.inj_from, e.inj_to);
  h.add_edge(fresh_edge_id(red), c, cls.vertex, cls.vertex, incl, incl);
  h.finalize();
  return h;
}

std::vector<SmallHost> small_hosts(GraphOfGroups const &g)
{
  auto red = reduce(g);
  ClassTable table(red);
  std::vector<char> done(table.classes().size(), 0);
  std::vector<SmallHost> res;

  for (int f = 0; f < red.num_edges(); ++f) {
    auto const &ef = red.edge(f);
    auto const &gf = ef.group;
    std::vector<Path> gens;
    for (int x = 0; x < gf->order(); ++x)
      gens.push_back(at_base(red, ef.from, elt_path(ef.from, ef.inj_from(x))));
    int cls = table.locate(gens).class_id;
    if (done[cls])
      continue;

    auto const &fc = table.classes()[cls];
    auto info = normalizer(table, fc);
    if (info.kind != Kind::VCCyclic && info.kind != Kind::VCDihedral)
      continue;
    auto s = structure_of(info.presentation);
    if (s.group.C->order() != gf->order())
      continue;
    auto into = s.to_source.then(info.embedding);
    int tl = cyclic_reduce(red, into.apply(s.group.t)).translation_length;

    SmallHost host;
    host.cls = cls;
    host.edge = f;

    if (s.group.type == VCType::Cyclic) {
      if (ef.from != ef.to || tl != 1)
        continue;
      int v = ef.from;
      auto s1 = ef.inj_from.image();
      auto s2 = ef.inj_to.image();
      if (s1.normalizer().order() != s1.order())
        continue;
      auto g0 = conjugator_between(s2, s1);
      if (!g0)
        continue;
      auto const &gv = red.vertex(v).group;
      GrpHom to_aligned = ef.inj_to.conjugated(*g0);
      host.base = reglue(red, f, gf, ef.inj_from, to_aligned);

      GoGIso iso;
      for (int u = 0; u < red.num_vertices(); ++u) {
        iso.vmap.push_back(u);
        iso.vhom.push_back(GrpHom::identity(red.vertex(u).group));
      }
      for (int e = 0; e < red.num_edges(); ++e) {
        iso.emap.push_back(e);
        iso.flipped.push_back(0);
        iso.ehom.push_back(GrpHom::identity(red.edge(e).group));
        iso.corrector.push_back({0, e == f ? gv->inv(*g0) : 0});
      }
      host.align = iso.word_hom(red, host.base);

      std::vector<int> alpha(gf->order());
      for (int x = 0; x < gf->order(); ++x)
        alpha[x] = ef.inj_from.preimage(to_aligned(x));
      host.n = VCGroup::cyclic(gf, GrpHom::from_map(gf, gf, alpha));
      host.n_into_base = WordHom(host.n.graph, host.base);
      host.n_into_base.set_vertex_hom(0, v, ef.inj_from);
      host.n_into_base.edge_plus[0] = Path{v, {Token::step(f, +1)}};
      host.n_into_base.base_conn = host.base.tree_path(v);
    } else {
      if (tl != 2)
        continue;
      auto na = ef.inj_from.image().normalizer();
      auto nb = ef.inj_to.image().normalizer();
      if (na.order() != 2 * gf->order() || nb.order() != 2 * gf->order())
        continue;
      auto [a, incl_a] = na.realize();
      auto [b, incl_b] = nb.realize();
      std::vector<int> ia(gf->order()), ib(gf->order());
      for (int x = 0; x < gf->order(); ++x) {
        ia[x] = incl_a.preimage(ef.inj_from(x));
        ib[x] = incl_b.preimage(ef.inj_to(x));
      }
      host.base = red;
      host.align = WordHom::identity(red);
      host.n = VCGroup::dihedral(gf, a, GrpHom::from_map(gf, a, ia), b,
                                 GrpHom::from_map(gf, b, ib));
      host.incl_a = incl_a;
      host.incl_b = incl_b;
      host.n_into_base = WordHom(host.n.graph, host.base);
      host.n_into_base.set_vertex_hom(0, ef.from, incl_a);
      host.n_into_base.set_vertex_hom(1, ef.to, incl_b);
      host.n_into_base.edge_plus[0] = Path{ef.to, {Token::step(f, +1)}};
      host.n_into_base.base_conn = host.base.tree_path(ef.from);
    }
    if (!host.n_into_base.verify().empty())
      continue;
    done[cls] = 1;
    res.push_back(std::move(host));
  }
  return res;
}

std::vector<LegalSmallStep> legal_small_candidates(GraphOfGroups const &g, int cap)
{
  int k = K_of(g);
  std::vector<LegalSmallStep> res;
  for (auto const &host : small_hosts(g)) {
    std::vector<Partner> parts;
    try {
      parts = mutual_nice_partners(host.n, k, cap);
    } catch (CapExceeded const &) {
      continue;
    }
    for (auto &p : parts) {
      if (K_of(p.group.graph) <= k)
        res.push_back({host.cls, p.group, p.there, p.back});
    }
  }
  return res;
}

SmallExtension small_extension(GraphOfGroups const &g, LegalSmallStep const &step)
{
  auto hosts = small_hosts(g);
  auto it = std::find_if(hosts.begin(), hosts.end(),
                         [&](SmallHost const &h) { return h.cls == step.cls; });
  if (it == hosts.end())
    throw IllegalStep("class " + std::to_string(step.cls) +
                      " has no virtually cyclic normalizer carried by one edge");

  SmallExtension ext{*it, step, {}, {}, {}};
  auto const &host = ext.host;
  auto const &np = step.partner;
  auto nj = host.n.to_json();
  auto pj = np.to_json();
  if (step.there.source.to_json() != nj || step.back.target.to_json() != nj)
    throw IllegalStep("embeddings do not start from the normalizer of the class");
  if (step.there.target.to_json() != pj || step.back.source.to_json() != pj)
    throw IllegalStep("embeddings do not match the partner");
  if (np.type != host.n.type)
    throw IllegalStep("partner of another type");

  int k = K_of(host.base);
  if (K_of(np.graph) > k)
    throw IllegalStep("K of the partner exceeds K of the group");
  for (auto const *e : {&step.there, &step.back}) {
    NiceCheck r;
    try {
      r = is_K_nice(*e, k);
    } catch (Error const &ex) {
      throw IllegalStep(ex.what());
    }
    if (!r.nice)
      throw IllegalStep("embedding is not " + std::to_string(k) + "-nice: " + r.detail);
  }
  if (step.there.map.vmap[0] != 0 ||
      (np.type == VCType::Dihedral && step.there.map.vmap[1] != 1))
    throw IllegalStep("embedding moves the vertices of the partner");

  auto const &base = host.base;
  int f = host.edge;
  auto const &ef = base.edge(f);
  auto const &gf = ef.group;

  if (np.type == VCType::Cyclic) {
    int v = ef.from;
    auto phi = vertex_part(step.there.map, 0, host.n.C, np.C);
    auto phi_inv = phi.inverse();
    std::vector<int> twisted(gf->order()), psi(np.C->order());
    for (int x = 0; x < gf->order(); ++x)
      twisted[x] = phi_inv(np.alpha(phi(x)));
    for (int y = 0; y < np.C->order(); ++y)
      psi[y] = ef.inj_from(phi_inv(y));
    auto new_to = GrpHom::from_map(gf, gf, twisted).then(ef.inj_from);
    ext.result = reglue(base, f, gf, ef.inj_from, new_to);

    ext.partner_into_result = WordHom(np.graph, ext.result);
    ext.partner_into_result.set_vertex_hom(
      0, v, GrpHom::from_map(np.C, base.vertex(v).group, psi));
    ext.partner_into_result.edge_plus[0] = Path{v, {Token::step(f, +1)}};
    ext.partner_into_result.base_conn = ext.result.tree_path(v);
  } else {
    auto fa = vertex_part(step.there.map, 0, host.n.A, np.A).inverse();
    auto fb = vertex_part(step.there.map, 1, host.n.B, np.B).inverse();
    auto new_from = np.inc_a.then(fa).then(host.incl_a);
    auto new_to = np.inc_b.then(fb).then(host.incl_b);
    ext.result = reglue(base, f, np.C, new_from, new_to);

    ext.partner_into_result = WordHom(np.graph, ext.result);
    ext.partner_into_result.set_vertex_hom(0, ef.from, fa.then(host.incl_a));
    ext.partner_into_result.set_vertex_hom(1, ef.to, fb.then(host.incl_b));
    ext.partner_into_result.edge_plus[0] = Path{ef.to, {Token::step(f, +1)}};
    ext.partner_into_result.base_conn = ext.result.tree_path(ef.from);
  }

  auto incl = identity_between(base, ext.result);
  incl.edge_plus[f] = ext.partner_into_result.apply_path(step.there.map.edge_plus[0]);
  ext.inclusion = host.align.then(incl);

  if (!ext.partner_into_result.verify().empty() || !ext.inclusion.verify().empty())
    throw IllegalStep("regluing does not extend the embedding");

  // N_Gamma(C) is the partner
  ClassTable t(ext.result);
  std::vector<Path> gens;
  for (int c = 0; c < np.C->order(); ++c)
    gens.push_back(ext.partner_into_result.apply(np.c_elem(c)));
  auto info = normalizer(t, t.classes()[t.locate(gens).class_id]);
  if (!gog_isomorphic(reduce(info.presentation), reduce(np.graph)))
    throw IllegalStep("the normalizer in the extension is not the partner");
  return ext;
}

GraphOfGroups apply_legal_small(GraphOfGroups const &g, LegalSmallStep const &step)
{ return small_extension(g, step).result; }

GraphOfGroups apply_legal(GraphOfGroups const &g, LegalStep const &step)
{
  if (step.large)
    return apply_legal_large(g, *step.large);
  if (step.small)
    return apply_legal_small(g, *step.small);
  throw IllegalStep("empty step");
}

std::string check_legal(GraphOfGroups const &g, LegalStep const &step)
{
  try {
    apply_legal(g, step);
    return "";
  } catch (IllegalStep const &ex) {
    return ex.what();
  }
}

WordHom extend_hom(GraphOfGroups const &source, GraphOfGroups const &target,
                   std::vector<std::vector<Path>> const &vertex_images,
                   std::vector<Path> const &edge_letters)
{
  if (static_cast<int>(vertex_images.size()) != source.num_vertices() ||
      static_cast<int>(edge_letters.size()) != source.num_edges())
    throw BadHom("wrong number of images");

  for (int e = 0; e < source.num_edges(); ++e) {
    auto const &ed = source.edge(e);
    auto const &l = edge_letters[e];
    for (int c = 0; c < ed.group->order(); ++c) {
      auto lhs = target.conjugate(l, vertex_images[ed.from][ed.inj_from(c)]);
      if (!target.equal(lhs, vertex_images[ed.to][ed.inj_to(c)]))
        throw EdgeMismatch(ed.id);
    }
  }

  WordHom h(source, target);
  for (int v = 0; v < source.num_vertices(); ++v) {
    if (static_cast<int>(vertex_images[v].size()) != source.vertex(v).group->order())
      throw BadHom("vertex " + source.vertex(v).id + " needs one image per element");
    h.vmap[v] = target.base();
    for (int x = 0; x < source.vertex(v).group->order(); ++x)
      h.velt[v][x] = target.normal_form(vertex_images[v][x]);
  }
  for (int e = 0; e < source.num_edges(); ++e)
    h.edge_plus[e] = target.normal_form(edge_letters[e]);
  h.base_conn = target.identity();

  auto diag = h.verify();
  if (!diag.empty())
    throw BadHom(diag.front());
  return h;
}

SpecialCheck check_special(WordHom const &phi)
{
  auto const &g = phi.source();
  auto const &gp = phi.target();
  int k = K_of(g);
  if (K_of(gp) > k)
    throw BadK("K of the target exceeds K of the source");
  auto diag = phi.verify();
  if (!diag.empty())
    throw BadHom(diag.front());

  ClassTable t(g), tp(gp);
  SpecialCheck res{true, true, 0, ""};
  auto fail = [&](int bullet, std::string detail) {
    res.special = false;
    res.strongly = false;
    res.failed_bullet = bullet;
    res.detail = std::move(detail);
    return res;
  };

  std::vector<ClassTable::Location> locs;
  std::set<int> seen;
  for (auto const &c : t.classes()) {
    auto els = c.as_subgroup(g).elements(g);
    std::vector<Path> imgs;
    std::set<Path> distinct;
    for (auto const &x : els) {
      imgs.push_back(phi.apply(x));
      distinct.insert(imgs.back());
    }
    if (distinct.size() != els.size())
      return fail(1, "not injective on class " + std::to_string(c.id));
    locs.push_back(tp.locate(imgs));
    if (!seen.insert(locs.back().class_id).second)
      return fail(2, "class " + std::to_string(c.id) + " meets the image of an earlier class");
  }

  for (auto const &c : t.classes()) {
    auto const &loc = locs[c.id];
    auto const &cp = tp.classes()[loc.class_id];
    auto info = normalizer(t, c);

    if (info.kind == Kind::VCCyclic || info.kind == Kind::VCDihedral) {
      auto n = structured_normalizer(t, c);
      NormalizerVC np{normalizer(tp, cp), {}, {}};
      if (np.info.kind != Kind::VCCyclic && np.info.kind != Kind::VCDihedral)
        return fail(3, "class " + std::to_string(c.id) + ": target normalizer is " +
                           to_string(np.info.kind));
      np.s = structure_of(np.info.presentation);
      np.into = np.s.to_source.then(np.info.embedding);
      VCCoordinates coords(gp, np.s.group, np.into);
      auto restricted = hom_from_elements(
        n.s.group.graph, np.s.group.graph, [&](Path const &x) {
          return coords.of(gp.conjugate(loc.conj, phi.apply(n.into.apply(x))));
        });
      if (!restricted)
        return fail(3, "class " + std::to_string(c.id) + ": normalizer leaves the target normalizer");
      NiceEmbedding e{n.s.group, np.s.group, *restricted};
      NiceCheck r;
      try {
        r = is_K_nice(e, k);
      } catch (BadHom const &ex) {
        return fail(3, ex.what());
      }
      if (!r.nice)
        return fail(3, "class " + std::to_string(c.id) + ": " + r.detail);
    }

    if (info.kind == Kind::NonElementary && res.strongly) {
      auto np = normalizer(tp, cp);
      if (np.kind != Kind::NonElementary) {
        res.strongly = false;
        res.failed_bullet = 4;
        res.detail = "class " + std::to_string(c.id) + ": target normalizer is elementary";
        continue;
      }
      std::set<Path> img, target;
      for (auto const &x : E_of(g, info).elements(g))
        img.insert(gp.conjugate(loc.conj, phi.apply(x)));
      for (auto const &x : E_of(gp, np).elements(gp))
        target.insert(gp.normal_form(x));
      if (img != target) {
        res.strongly = false;
        res.failed_bullet = 4;
        res.detail = "class " + std::to_string(c.id) + ": E is not sent onto E";
      }
    }
  }
  return res;
}

Twist twist_map(SmallExtension const &ctx, VCElement const &delta)
{
  auto const &np = ctx.step.partner;
  int k = K_of(ctx.host.base);
  BigInt p = 2 * factorial(k);
  auto d = D_subgroup(np, p);
  if (!d.exact)
    throw CapExceeded("D_p(N') has no closed form");
  if (!d.c_part.contains(delta.c) || delta.k % d.letter_index != 0)
    throw DeltaNotInD("delta is not a " + p.str() + "-th power");

  Twist tw{delta, std::nullopt, abs_big(letter_exponent(ctx.step.there))};
  if (abs_big(delta.k) > default_materialize_limit)
    return tw;

  auto const &gam = ctx.result;
  int f = ctx.host.edge;
  Path dv = ctx.partner_into_result.apply_path(
    np.element(delta.c, static_cast<long long>(delta.k)));
  if (np.type == VCType::Dihedral)
    dv = gam.inverse(dv);

  WordHom h = identity_between(gam, gam);
  h.edge_plus[f] = gam.normal_form(concat(Path{gam.edge(f).to, {Token::step(f, +1)}}, dv));
  auto diag = h.verify();
  if (!diag.empty())
    throw DeltaNotInD(diag.front());

  // injectivity tripwire on a ball
  for (int r = 4; r >= 1; --r) {
    try {
      auto b = ball(gam, r, 20000);
      std::set<Path> img;
      for (auto const &x : b)
        img.insert(h.apply(x));
      if (img.size() != b.size())
        throw Error("TwistNotInjective", "the twist identifies two elements of the ball");
      break;
    } catch (BudgetExceeded const &) {
    }
  }
  tw.map = h;
  return tw;
}

SmallTestMap small_test_map(SmallExtension const &ctx, int n)
{
  auto const &host = ctx.host;
  auto const &np = ctx.step.partner;
  if (host.n.type != VCType::Cyclic)
    throw Error("UnsupportedHost", "small test maps are built for cyclic type normalizers");
  if (n < 0)
    throw Error("ValueError", "index must be non-negative");
  long long kt = letter_exponent(ctx.step.there);
  if (kt == 1 || kt == -1)
    throw NotProperExtension("the embedding N -> N' is onto");

  auto const &c = host.n.C;
  int o = host.n.alpha_order();
  int kg = K_of(host.base);
  BigInt m = 2 * factorial(kg);
  if (m % o != 0)
    throw CapExceeded("ord(alpha) does not divide 2K!");

  auto phi = vertex_part(ctx.step.there.map, 0, c, np.C);
  auto phi_inv = phi.inverse();
  std::vector<int> twisted(c->order());
  for (int x = 0; x < c->order(); ++x)
    twisted[x] = phi_inv(np.alpha(phi(x)));

  // twisted = ad(c1) o alpha^r
  std::optional<std::pair<int, int>> found;
  std::vector<int> ar(c->order());
  for (int x = 0; x < c->order(); ++x)
    ar[x] = x;
  for (int r = 0; r < o && !found; ++r) {
    for (int c1 = 0; c1 < c->order() && !found; ++c1) {
      bool ok = true;
      for (int x = 0; x < c->order() && ok; ++x)
        ok = twisted[x] == c->conj(c1, ar[x]);
      if (ok)
        found = std::make_pair(r, c1);
    }
    for (auto &y : ar)
      y = host.n.alpha(y);
  }
  if (!found)
    throw IllegalStep("the partner does not map back onto N with C fixed");

  // exponent base coprime to 2K! in the right residue, preferring the back
  // embedding's own exponent
  long long k0 = letter_exponent(ctx.step.back);
  auto usable = [&](long long k) {
    return ((k % o) + o) % o == found->first && gcd(abs_big(k), m) == 1;
  };
  if (!usable(k0)) {
    k0 = 0;
    for (long long a = 1; a <= default_exponent_limit && k0 == 0; ++a) {
      if (usable(a))
        k0 = a;
      else if (usable(-a))
        k0 = -a;
    }
    if (k0 == 0)
      throw CapExceeded("no exponent coprime to 2K! in the residue class");
  }

  BigInt lambda = 0;
  while (BigInt(k0) + m * lambda <= kg)
    ++lambda;
  int seen = -1;
  BigInt p;
  for (;; ++lambda) {
    p = BigInt(k0) + m * lambda;
    if (boost::multiprecision::miller_rabin_test(p, 25) && ++seen == n)
      break;
  }

  SmallTestMap res{p, found->second, std::nullopt};
  if (p > default_materialize_limit)
    return res;

  auto const &base = host.base;
  int f = host.edge;
  int v = base.edge(f).from;
  WordHom h = identity_between(ctx.result, base);
  Path img = elt_path(v, base.edge(f).inj_from(found->second));
  img = concat(img, base.power(Path{v, {Token::step(f, +1)}}, static_cast<long long>(p)));
  h.edge_plus[f] = base.normal_form(img);
  auto diag = h.verify();
  if (!diag.empty())
    throw IllegalStep("small test map: " + diag.front());
  res.map = h;
  return res;
}

} // namespace vfg
