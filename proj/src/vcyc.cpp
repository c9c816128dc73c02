#include <algorithm>
#include <map>
#include <set>

#include "vfg/analysis.hpp"
#include "vfg/gfg.hpp"
#include "vfg/iso.hpp"
#include "vfg/splittings.hpp"
#include "vfg/vcyc.hpp"

namespace vfg
{

BigInt factorial(int n)
{
  BigInt f = 1;
  for (int i = 2; i <= n; ++i)
    f *= i;
  return f;
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

int first_outside(Subgrp const &sub)
{
  for (int x = 0; x < sub.parent()->order(); ++x) {
    if (!sub.contains(x))
      return x;
  }
  throw Error("LookupError", "subgroup is the whole group");
}

long long mod(long long a, long long m)
{ return ((a % m) + m) % m; }

std::vector<long long> prime_factors(long long n)
{
  std::vector<long long> res;
  n = n < 0 ? -n : n;
  for (long long q = 2; q * q <= n; ++q) {
    if (n % q == 0) {
      res.push_back(q);
      while (n % q == 0)
        n /= q;
    }
  }
  if (n > 1)
    res.push_back(n);
  return res;
}

BigInt closed_form_modulus(VCGroup const &n)
{ return BigInt(2) * n.alpha_order() * n.C->order(); }

// c-part of (c0 t^k)^j in C x|_beta Z, with j possibly huge
int semidirect_power_c(VCGroup const &n, int c0, long long k, BigInt j)
{
  auto const &c = n.C;
  int o = n.alpha_order();

  std::vector<std::vector<int>> beta_pow(o);
  beta_pow[0].resize(c->order());
  for (int x = 0; x < c->order(); ++x)
    beta_pow[0][x] = x;
  for (int r = 1; r < o; ++r) {
    beta_pow[r].resize(c->order());
    for (int x = 0; x < c->order(); ++x)
      beta_pow[r][x] = n.alpha(beta_pow[r - 1][x]);
  }

  using Elt = std::pair<int, int>;
  auto mul = [&](Elt a, Elt b) {
    return Elt{c->mul(a.first, beta_pow[a.second][b.first]), (a.second + b.second) % o};
  };

  Elt acc{FinGroup::identity(), 0};
  Elt base{c0, static_cast<int>(mod(k, o))};
  while (j > 0) {
    if (j % 2 == 1)
      acc = mul(acc, base);
    base = mul(base, base);
    j /= 2;
  }
  return acc.first;
}

// injectivity of N/<t^p> -> N'/<t'^p> for c -> phi(c), t -> c0 t'^k, given
// the image of C; a kernel element projects to an element of prime order
bool quotient_injective(VCGroup const &src, VCGroup const &dst, std::set<int> const &phi_c,
                        int c0, long long k, BigInt const &p)
{
  if (p % closed_form_modulus(src) != 0 || p % closed_form_modulus(dst) != 0)
    throw CapExceeded("D_p has no closed form for p = " + p.str());
  if (k == 0)
    return false;

  BigInt g = gcd(BigInt(k < 0 ? -k : k), p);
  if (g == 1)
    return true;
  if (c0 == FinGroup::identity())
    return false;

  for (long long l : prime_factors(static_cast<long long>(g))) {
    int y = semidirect_power_c(dst, c0, k, p / l);
    if (phi_c.count(y))
      return false;
  }
  return true;
}

// classes of finite subgroups of the source are sent to distinct classes
bool classes_separated(WordHom const &map, ClassTable const &src, ClassTable const &dst,
                       std::string *why)
{
  auto const &sg = map.source();
  std::set<int> seen;
  for (auto const &c : src.classes()) {
    std::vector<Path> gens;
    for (auto const &x : c.as_subgroup(sg).elements(sg))
      gens.push_back(map.apply(x));
    int id = dst.locate(gens).class_id;
    if (!seen.insert(id).second) {
      if (why)
        *why = "class " + std::to_string(c.id) + " meets an earlier class";
      return false;
    }
  }
  return true;
}

Path letter_power(VCGroup const &n, long long k)
{ return n.graph.power(n.t, k); }

} // namespace

VCGroup VCGroup::cyclic(GroupPtr c, GrpHom alpha)
{
  VCGroup n;
  n.type = VCType::Cyclic;
  n.C = c;
  n.alpha = alpha;
  n.graph.add_vertex("c", c);
  n.graph.add_edge("t", c, 0, 0, GrpHom::identity(c), alpha);
  n.graph.finalize();
  n.t = Path{0, {Token::step(0, +1)}};
  return n;
}

VCGroup VCGroup::dihedral(GroupPtr c, GroupPtr a, GrpHom inc_a, GroupPtr b, GrpHom inc_b)
{
  if (a->order() != 2 * c->order() || b->order() != 2 * c->order())
    throw NotVirtuallyCyclic("dihedral type needs index 2 overgroups");

  VCGroup n;
  n.type = VCType::Dihedral;
  n.C = c;
  n.A = a;
  n.B = b;
  n.inc_a = inc_a;
  n.inc_b = inc_b;
  n.graph.add_vertex("a", a);
  n.graph.add_vertex("b", b);
  n.graph.add_edge("e", c, 0, 1, inc_a, inc_b);
  n.graph.finalize();

  auto const &g = n.graph;
  Path to_b = g.tree_path(1);
  Path bb = g.multiply(g.multiply(to_b, elt_path(1, first_outside(inc_b.image()))),
                       g.inverse(to_b));
  n.t = g.multiply(bb, elt_path(0, first_outside(inc_a.image())));

  std::vector<int> map(c->order());
  for (int x = 0; x < c->order(); ++x)
    map[x] = *n.as_c(g.conjugate(n.t, n.c_elem(x)));
  n.alpha = GrpHom::from_map(c, c, map);
  return n;
}

int VCGroup::alpha_order() const
{
  std::vector<int> cur(C->order());
  for (int x = 0; x < C->order(); ++x)
    cur[x] = alpha(x);
  for (int o = 1;; ++o) {
    bool id = true;
    for (int x = 0; x < C->order() && id; ++x)
      id = cur[x] == x;
    if (id)
      return o;
    for (auto &y : cur)
      y = alpha(y);
  }
}

Path VCGroup::c_elem(int c) const
{ return elt_path(0, type == VCType::Cyclic ? c : inc_a(c)); }

std::optional<int> VCGroup::as_c(Path const &x) const
{
  int y = as_vertex_element(graph, x);
  if (y < 0)
    return std::nullopt;
  if (type == VCType::Cyclic)
    return y;
  if (!inc_a.image().contains(y))
    return std::nullopt;
  return inc_a.preimage(y);
}

Path VCGroup::element(int c, long long k) const
{ return graph.multiply(c_elem(c), letter_power(*this, k)); }

std::optional<std::pair<int, long long>> VCGroup::decompose(Path const &x) const
{
  int len = graph.normal_form(x).steps();
  int per = t.steps();
  if (len % per != 0)
    return std::nullopt;
  long long k = len / per;
  for (long long s : {k, -k}) {
    auto c = as_c(graph.multiply(x, letter_power(*this, -s)));
    if (c)
      return std::make_pair(*c, s);
  }
  return std::nullopt;
}

nlohmann::json VCGroup::to_json() const
{
  if (type == VCType::Cyclic)
    return {{"cyclic", {{"C", group_to_json(*C)}, {"alpha", alpha.map()}}}};
  return {{"dihedral",
           {{"C", group_to_json(*C)},
            {"A", group_to_json(*A)},
            {"B", group_to_json(*B)},
            {"inc_a", inc_a.map()},
            {"inc_b", inc_b.map()}}}};
}

VCGroup VCGroup::from_json(nlohmann::json const &j)
{
  try {
    if (j.contains("cyclic")) {
      auto const &cj = j.at("cyclic");
      auto c = group_from_json(cj.at("C"), "cyclic.C");
      return cyclic(c, GrpHom::from_map(c, c, cj.at("alpha").get<std::vector<int>>()));
    }
    auto const &dj = j.at("dihedral");
    auto c = group_from_json(dj.at("C"), "dihedral.C");
    auto a = group_from_json(dj.at("A"), "dihedral.A");
    auto b = group_from_json(dj.at("B"), "dihedral.B");
    return dihedral(c, a, GrpHom::from_map(c, a, dj.at("inc_a").get<std::vector<int>>()),
                    b, GrpHom::from_map(c, b, dj.at("inc_b").get<std::vector<int>>()));
  } catch (nlohmann::json::exception const &ex) {
    throw ParseError(std::string("virtually cyclic group: ") + ex.what());
  }
}

VCStructure structure_of(GraphOfGroups const &n)
{
  Kind kind = classify_elementary(n);
  if (kind != Kind::VCCyclic && kind != Kind::VCDihedral)
    throw NotVirtuallyCyclic("presentation is " + to_string(kind));

  auto red = reduce_with_translation(n);
  auto const &r = red.result;
  auto const &e = r.edge(0);

  VCStructure s;
  if (kind == Kind::VCCyclic) {
    auto const &v = r.vertex(e.from).group;
    std::vector<int> map(v->order());
    for (int x = 0; x < v->order(); ++x)
      map[x] = e.inj_to(e.inj_from.preimage(x));
    s.group = VCGroup::cyclic(v, GrpHom::from_map(v, v, map));
    WordHom h(s.group.graph, r);
    h.set_vertex_hom(0, e.from, GrpHom::identity(v));
    h.edge_plus[0] = Path{e.from, {Token::step(0, +1)}};
    h.base_conn = r.tree_path(e.from);
    s.to_source = h.then(red.back);
  } else {
    s.group = VCGroup::dihedral(e.group, r.vertex(e.from).group, e.inj_from,
                                r.vertex(e.to).group, e.inj_to);
    WordHom h(s.group.graph, r);
    h.set_vertex_hom(0, e.from, GrpHom::identity(r.vertex(e.from).group));
    h.set_vertex_hom(1, e.to, GrpHom::identity(r.vertex(e.to).group));
    h.edge_plus[0] = Path{e.to, {Token::step(0, +1)}};
    h.base_conn = r.tree_path(e.from);
    s.to_source = h.then(red.back);
  }
  return s;
}

DSubgroup D_subgroup(VCGroup const &n, BigInt const &p)
{
  if (p < 1)
    throw Error("ValueError", "p must be positive");
  if (p % closed_form_modulus(n) == 0)
    return {p, Subgrp::trivial(n.C), true};
  if (p > 100000)
    throw CapExceeded("p-th powers too long to enumerate");

  long long pp = static_cast<long long>(p);
  std::vector<Path> xs;
  for (int c = 0; c < n.C->order(); ++c) {
    for (long long k = -3; k <= 3; ++k) {
      xs.push_back(n.element(c, k));
      if (n.type == VCType::Dihedral)
        xs.push_back(n.graph.multiply(elt_path(0, first_outside(n.inc_a.image())),
                                      n.element(c, k)));
    }
  }

  BigInt index = 0;
  std::map<long long, std::vector<int>> by_letter;
  for (auto const &x : xs) {
    auto d = n.decompose(n.graph.power(x, pp));
    if (!d)
      continue;
    by_letter[d->second].push_back(d->first);
    if (d->second != 0)
      index = gcd(index, BigInt(d->second < 0 ? -d->second : d->second));
  }

  std::vector<int> gens;
  for (auto const &[k, cs] : by_letter) {
    for (int c : cs) {
      gens.push_back(k == 0 ? c : n.C->mul(c, n.C->inv(cs.front())));
    }
  }
  return {index, Subgrp::generated(n.C, gens), false};
}

bool in_D(VCGroup const &n, Path const &x, BigInt const &p)
{
  auto d = D_subgroup(n, p);
  if (!d.exact)
    throw CapExceeded("membership in D_p needs the closed form");
  auto dec = n.decompose(x);
  return dec && d.c_part.contains(dec->first) && BigInt(dec->second) % d.letter_index == 0;
}

nlohmann::json NiceEmbedding::to_json() const
{
  return {{"source", source.to_json()}, {"target", target.to_json()},
          {"map", wordhom_to_json(map)}};
}

NiceEmbedding NiceEmbedding::from_json(nlohmann::json const &j)
{
  try {
    NiceEmbedding e;
    e.source = VCGroup::from_json(j.at("source"));
    e.target = VCGroup::from_json(j.at("target"));
    e.map = wordhom_from_json(e.source.graph, e.target.graph, j.at("map"));
    return e;
  } catch (nlohmann::json::exception const &ex) {
    throw ParseError(std::string("embedding: ") + ex.what());
  }
}

NiceCheck is_K_nice(NiceEmbedding const &e, int K)
{
  auto const &src = e.source;
  auto const &dst = e.target;
  int kn = std::max(K_of(src.graph), K_of(dst.graph));
  if (K < kn)
    throw BadK("K = " + std::to_string(K) + " is below " + std::to_string(kn));

  auto diag = e.map.verify();
  if (!diag.empty())
    throw BadHom(diag.front());

  auto const &sg = src.graph;
  for (int v = 0; v < sg.num_vertices(); ++v) {
    Path to = sg.tree_path(v);
    std::set<Path> images;
    for (int x = 0; x < sg.vertex(v).group->order(); ++x)
      images.insert(e.map.apply(sg.multiply(sg.multiply(to, elt_path(v, x)), sg.inverse(to))));
    if (static_cast<int>(images.size()) != sg.vertex(v).group->order())
      return {false, 1, "not injective on vertex " + sg.vertex(v).id};
  }
  Path th = e.map.apply(src.t);
  if (!is_hyperbolic(dst.graph, th))
    return {false, 1, "the letter is sent to an element of finite order"};

  std::string why;
  if (!classes_separated(e.map, ClassTable(sg), ClassTable(dst.graph), &why))
    return {false, 2, why};

  auto dec = dst.decompose(th);
  if (!dec)
    return {false, 3, "letter image outside C'<t'>"};
  std::set<int> phi_c;
  for (int c = 0; c < src.C->order(); ++c) {
    auto y = dst.as_c(e.map.apply(src.c_elem(c)));
    if (!y)
      return {false, 3, "C is not sent into C'"};
    phi_c.insert(*y);
  }
  BigInt p = 2 * factorial(K);
  if (!quotient_injective(src, dst, phi_c, dec->first, dec->second, p))
    return {false, 3, "letter exponent " + std::to_string(dec->second) +
                          " kills an element of N/D(N)"};
  return {true, 0, ""};
}

NiceEmbedding identity_embedding(VCGroup const &n)
{ return {n, n, WordHom::identity(n.graph)}; }

namespace
{

std::optional<NiceEmbedding> find_cyclic(VCGroup const &src, VCGroup const &dst, int K)
{
  auto const &c = src.C;
  auto const &c2 = dst.C;
  int o = dst.alpha_order();
  BigInt p = 2 * factorial(K);
  ClassTable st(src.graph), dt(dst.graph);

  struct Cand
  {
    long long k;
    GrpHom phi;
    int c0;
  };
  std::vector<Cand> cands;

  for (auto const &phi : all_homomorphisms(c, c2, true)) {
    WordHom probe(src.graph, dst.graph);
    probe.set_vertex_hom(0, 0, phi);
    probe.edge_plus[0] = dst.t;
    if (!classes_separated(probe, st, dt, nullptr))
      continue;
    std::set<int> phi_c(phi.map().begin(), phi.map().end());
    // onto C' the exponent alone decides the quotient check, so one c0 per
    // residue is enough
    bool onto = static_cast<int>(phi_c.size()) == c2->order();
    std::vector<char> r_done(o, 0);

    for (int c0 = 0; c0 < c2->order(); ++c0) {
      std::vector<int> beta_r(c2->order());
      for (int x = 0; x < c2->order(); ++x)
        beta_r[x] = x;
      for (int r = 0; r < o; ++r) {
        bool hom = true;
        for (int x = 0; x < c->order() && hom; ++x)
          hom = phi(src.alpha(x)) == c2->conj(c0, beta_r[phi(x)]);
        if (hom && !(onto && r_done[r])) {
          r_done[r] = 1;
          for (long long a = 1; a <= default_exponent_limit; ++a) {
            bool found = false;
            for (long long k : {a, -a}) {
              if (mod(k, o) == r && quotient_injective(src, dst, phi_c, c0, k, p)) {
                cands.push_back({k, phi, c0});
                found = true;
                break;
              }
            }
            if (found)
              break;
          }
        }
        for (auto &y : beta_r)
          y = dst.alpha(y);
      }
    }
  }

  std::stable_sort(cands.begin(), cands.end(), [](Cand const &a, Cand const &b) {
    long long x = a.k < 0 ? -a.k : a.k, y = b.k < 0 ? -b.k : b.k;
    return x != y ? x < y : a.k > b.k;
  });

  for (auto const &cd : cands) {
    NiceEmbedding e{src, dst, WordHom(src.graph, dst.graph)};
    e.map.set_vertex_hom(0, 0, cd.phi);
    e.map.edge_plus[0] = dst.graph.multiply(elt_path(0, cd.c0), letter_power(dst, cd.k));
    if (is_K_nice(e, K).nice)
      return e;
  }
  return std::nullopt;
}

std::optional<NiceEmbedding> find_dihedral(VCGroup const &src, VCGroup const &dst, int K)
{
  auto const &c = src.C;
  auto const &c2 = dst.C;
  int o = dst.alpha_order();
  auto fas = all_homomorphisms(src.A, dst.A, true);
  auto fbs = all_homomorphisms(src.B, dst.B, true);

  for (int m = 0; m <= 50; ++m) {
    for (auto const &fa : fas) {
      std::vector<int> phi(c->order());
      bool inside = true;
      for (int x = 0; x < c->order() && inside; ++x) {
        int y = fa(src.inc_a(x));
        inside = dst.inc_a.image().contains(y);
        if (inside)
          phi[x] = dst.inc_a.preimage(y);
      }
      if (!inside)
        continue;

      // psi = alpha'^-m o phi
      std::vector<int> psi = phi;
      for (int i = 0; i < mod(-m, o); ++i) {
        for (auto &y : psi)
          y = dst.alpha(y);
      }

      for (auto const &fb : fbs) {
        bool match = true;
        for (int x = 0; x < c->order() && match; ++x)
          match = fb(src.inc_b(x)) == dst.inc_b(psi[x]);
        if (!match)
          continue;

        NiceEmbedding e{src, dst, WordHom(src.graph, dst.graph)};
        e.map.set_vertex_hom(0, 0, fa);
        e.map.set_vertex_hom(1, 1, fb);
        e.map.edge_plus[0] = dst.graph.multiply(Path{1, {Token::step(0, +1)}},
                                                letter_power(dst, -m));
        if (e.map.verify().empty() && is_K_nice(e, K).nice)
          return e;
      }
    }
  }
  (void)c2;
  return std::nullopt;
}

} // namespace

std::optional<NiceEmbedding> find_nice_embedding(VCGroup const &source,
                                                 VCGroup const &target, int K)
{
  if (source.type != target.type)
    return std::nullopt;
  if (source.type == VCType::Cyclic)
    return find_cyclic(source, target, K);
  return find_dihedral(source, target, K);
}

std::vector<std::pair<GroupPtr, GrpHom>> index2_overgroups(GroupPtr const &c)
{
  int n = c->order();
  std::vector<std::pair<GroupPtr, GrpHom>> res;

  for (auto const &theta : automorphisms(c)) {
    for (int s2 = 0; s2 < n; ++s2) {
      if (theta(s2) != s2)
        continue;
      bool ok = true;
      for (int x = 0; x < n && ok; ++x)
        ok = theta(theta(x)) == c->conj(s2, x);
      if (!ok)
        continue;

      // points (x, i) stand for x s^i, numbered i n + x; left multiplication
      auto left = [&](int y, int j) {
        std::vector<int> img(2 * n);
        for (int i = 0; i < 2; ++i) {
          for (int x = 0; x < n; ++x) {
            int px = i * n + x;
            if (j == 0)
              img[px] = i * n + c->mul(y, x);
            else if (i == 0)
              img[px] = n + c->mul(y, theta(x));
            else
              img[px] = c->mul(c->mul(y, theta(x)), s2);
          }
        }
        return Perm(img);
      };

      std::vector<Perm> gens{left(FinGroup::identity(), 1)};
      for (int g : c->small_generators())
        gens.push_back(left(g, 0));
      auto a = make_group(2 * n, gens);
      std::vector<int> inc(n);
      for (int x = 0; x < n; ++x)
        inc[x] = a->index_of(left(x, 0));
      GrpHom incl = GrpHom::from_map(c, a, inc);

      bool known = false;
      for (auto const &[b, ib] : res) {
        auto f0 = find_isomorphism(a, b);
        if (!f0)
          continue;
        for (auto const &s : automorphisms(b)) {
          if (f0->then(s).image(incl.image()) == ib.image()) {
            known = true;
            break;
          }
        }
        if (known)
          break;
      }
      if (!known)
        res.emplace_back(a, incl);
    }
  }
  return res;
}

std::vector<Partner> mutual_nice_partners(VCGroup const &n, int K, int cap)
{
  if (n.type == VCType::Dihedral && n.C->order() > cap)
    throw CapExceeded("|C| = " + std::to_string(n.C->order()) + " above the partner cap " +
                      std::to_string(cap));

  std::vector<VCGroup> cands;
  if (n.type == VCType::Cyclic) {
    for (auto const &beta : automorphisms(n.C))
      cands.push_back(VCGroup::cyclic(n.C, beta));
  } else {
    auto over = index2_overgroups(n.C);
    for (auto const &[a, ia] : over) {
      for (auto const &[b, ib] : over) {
        for (auto const &psi : automorphisms(n.C))
          cands.push_back(VCGroup::dihedral(n.C, a, ia, b, psi.then(ib)));
      }
    }
  }

  IsoStore seen;
  std::vector<Partner> res;
  for (auto const &cand : cands) {
    if (!seen.insert(cand.graph).second)
      continue;
    auto there = find_nice_embedding(n, cand, K);
    if (!there)
      continue;
    auto back = find_nice_embedding(cand, n, K);
    if (!back)
      continue;
    res.push_back({cand, *there, *back});
  }
  return res;
}

} // namespace vfg
