#include <algorithm>
#include <cctype>
#include <functional>
#include <set>
#include <sstream>

#include "vfg/analysis.hpp"
#include "vfg/formulas.hpp"
#include "vfg/splittings.hpp"

namespace vfg
{

Term Term::var(std::string name)
{ return Term{Kind::Var, std::move(name), 0, {}}; }

Term Term::constant(std::string name)
{ return Term{Kind::Const, std::move(name), 0, {}}; }

Term Term::one()
{ return Term{Kind::Mul, "", 0, {}}; }

Term Term::inv(Term t)
{ return Term{Kind::Inv, "", 0, {std::move(t)}}; }

Term Term::mul(std::vector<Term> ts)
{
  // flatten and drop identities
  std::vector<Term> flat;
  for (auto &t : ts) {
    if (t.kind == Kind::Mul)
      flat.insert(flat.end(), t.args.begin(), t.args.end());
    else
      flat.push_back(std::move(t));
  }
  if (flat.size() == 1)
    return flat.front();
  return Term{Kind::Mul, "", 0, std::move(flat)};
}

Term Term::pow(Term t, BigInt n)
{
  if (n == 1)
    return t;
  return Term{Kind::Pow, "", std::move(n), {std::move(t)}};
}

Term commutator(Term const &a, Term const &b)
{ return Term::mul({a, b, Term::inv(a), Term::inv(b)}); }

Formula Formula::forall(std::vector<std::string> vars, Formula body)
{
  if (vars.empty())
    return body;
  return Formula{Kind::Forall, std::move(vars), {std::move(body)}, {}, {}};
}

Formula Formula::exists(std::vector<std::string> vars, Formula body)
{
  if (vars.empty())
    return body;
  return Formula{Kind::Exists, std::move(vars), {std::move(body)}, {}, {}};
}

Formula Formula::conj(std::vector<Formula> fs)
{
  if (fs.size() == 1)
    return std::move(fs.front());
  return Formula{Kind::And, {}, std::move(fs), {}, {}};
}

Formula Formula::disj(std::vector<Formula> fs)
{
  if (fs.size() == 1)
    return std::move(fs.front());
  return Formula{Kind::Or, {}, std::move(fs), {}, {}};
}

Formula Formula::negate(Formula f)
{ return Formula{Kind::Not, {}, {std::move(f)}, {}, {}}; }

Formula Formula::eq(Term a, Term b)
{ return Formula{Kind::Eq, {}, {}, std::move(a), std::move(b)}; }

Formula Formula::neq(Term a, Term b)
{ return Formula{Kind::Neq, {}, {}, std::move(a), std::move(b)}; }

Formula Formula::truth()
{ return Formula{Kind::And, {}, {}, {}, {}}; }

Formula Formula::implies(Formula a, Formula b)
{
  // negations of atoms are written as the opposite atom
  if (a.kind == Kind::Eq)
    a.kind = Kind::Neq;
  else if (a.kind == Kind::Neq)
    a.kind = Kind::Eq;
  else
    a = negate(std::move(a));
  return Formula{Kind::Or, {}, {std::move(a), std::move(b)}, {}, {}};
}

namespace
{

void write(std::ostream &os, Term const &t)
{
  switch (t.kind) {
  case Term::Kind::Var:
    os << "(var " << t.name << ")";
    return;
  case Term::Kind::Const:
    os << "(const " << t.name << ")";
    return;
  case Term::Kind::Inv:
    os << "(inv ";
    write(os, t.args[0]);
    os << ")";
    return;
  case Term::Kind::Mul:
    os << "(mul";
    for (auto const &a : t.args) {
      os << " ";
      write(os, a);
    }
    os << ")";
    return;
  case Term::Kind::Pow:
    os << "(pow ";
    write(os, t.args[0]);
    os << " " << t.exponent.str() << ")";
    return;
  }
}

char const *keyword(Formula::Kind k)
{
  switch (k) {
  case Formula::Kind::Forall: return "forall";
  case Formula::Kind::Exists: return "exists";
  case Formula::Kind::And: return "and";
  case Formula::Kind::Or: return "or";
  case Formula::Kind::Not: return "not";
  case Formula::Kind::Eq: return "eq";
  case Formula::Kind::Neq: return "neq";
  }
  return "";
}

void write(std::ostream &os, Formula const &f)
{
  os << "(" << keyword(f.kind);
  switch (f.kind) {
  case Formula::Kind::Forall:
  case Formula::Kind::Exists:
    os << " (";
    for (std::size_t i = 0; i < f.vars.size(); ++i)
      os << (i ? " " : "") << f.vars[i];
    os << ")";
    break;
  case Formula::Kind::Eq:
  case Formula::Kind::Neq:
    os << " ";
    write(os, f.lhs);
    os << " ";
    write(os, f.rhs);
    break;
  default:
    break;
  }
  for (auto const &k : f.kids) {
    os << " ";
    write(os, k);
  }
  os << ")";
}

class Parser
{
public:
  explicit Parser(std::string const &text) : _s(text) {}

  Formula formula()
  {
    open();
    auto kw = atom();
    Formula f;
    if (kw == "forall" || kw == "exists") {
      f.kind = kw == "forall" ? Formula::Kind::Forall : Formula::Kind::Exists;
      open();
      while (peek() != ')')
        f.vars.push_back(atom());
      close();
      if (f.vars.empty())
        fail("quantifier without variables");
      f.kids.push_back(formula());
    } else if (kw == "and" || kw == "or") {
      f.kind = kw == "and" ? Formula::Kind::And : Formula::Kind::Or;
      while (peek() != ')')
        f.kids.push_back(formula());
    } else if (kw == "not") {
      f.kind = Formula::Kind::Not;
      f.kids.push_back(formula());
    } else if (kw == "eq" || kw == "neq") {
      f.kind = kw == "eq" ? Formula::Kind::Eq : Formula::Kind::Neq;
      f.lhs = term();
      f.rhs = term();
    } else {
      fail("unknown formula keyword '" + kw + "'");
    }
    close();
    return f;
  }

  Term term()
  {
    open();
    auto kw = atom();
    Term t;
    if (kw == "var" || kw == "const") {
      t.kind = kw == "var" ? Term::Kind::Var : Term::Kind::Const;
      t.name = atom();
    } else if (kw == "inv") {
      t.kind = Term::Kind::Inv;
      t.args.push_back(term());
    } else if (kw == "mul") {
      t.kind = Term::Kind::Mul;
      while (peek() != ')')
        t.args.push_back(term());
    } else if (kw == "pow") {
      t.kind = Term::Kind::Pow;
      t.args.push_back(term());
      auto n = atom();
      bool digits = !n.empty() && std::all_of(n.begin() + (n[0] == '-'), n.end(),
                                              [](char c) { return std::isdigit(c); });
      if (!digits || n == "-")
        fail("bad exponent '" + n + "'");
      t.exponent = BigInt(n);
    } else {
      fail("unknown term keyword '" + kw + "'");
    }
    close();
    return t;
  }

  void end()
  {
    skip();
    if (_pos != _s.size())
      fail("trailing text");
  }

private:
  [[noreturn]] void fail(std::string const &what) const
  { throw ParseError("formula at offset " + std::to_string(_pos) + ": " + what); }

  void skip()
  {
    while (_pos < _s.size() && std::isspace(static_cast<unsigned char>(_s[_pos])))
      ++_pos;
  }

  char peek()
  {
    skip();
    if (_pos == _s.size())
      fail("unexpected end");
    return _s[_pos];
  }

  void open()
  {
    if (peek() != '(')
      fail("expected '('");
    ++_pos;
  }

  void close()
  {
    if (peek() != ')')
      fail("expected ')'");
    ++_pos;
  }

  std::string atom()
  {
    skip();
    std::size_t b = _pos;
    while (_pos < _s.size() && (std::isalnum(static_cast<unsigned char>(_s[_pos])) ||
                                _s[_pos] == '_' || _s[_pos] == '-'))
      ++_pos;
    if (b == _pos)
      fail("expected a name");
    return _s.substr(b, _pos - b);
  }

  std::string const &_s;
  std::size_t _pos = 0;
};

std::size_t count(Term const &t)
{
  std::size_t n = 1 + (t.kind == Term::Kind::Pow);
  for (auto const &a : t.args)
    n += count(a);
  return n;
}

void collect(Term const &t, std::set<std::string> const &bound, std::set<std::string> &vars,
             std::set<std::string> &consts)
{
  if (t.kind == Term::Kind::Var && !bound.count(t.name))
    vars.insert(t.name);
  if (t.kind == Term::Kind::Const)
    consts.insert(t.name);
  for (auto const &a : t.args)
    collect(a, bound, vars, consts);
}

void collect(Formula const &f, std::set<std::string> bound, std::set<std::string> &vars,
             std::set<std::string> &consts)
{
  if (f.kind == Formula::Kind::Eq || f.kind == Formula::Kind::Neq) {
    collect(f.lhs, bound, vars, consts);
    collect(f.rhs, bound, vars, consts);
    return;
  }
  bound.insert(f.vars.begin(), f.vars.end());
  for (auto const &k : f.kids)
    collect(k, bound, vars, consts);
}

std::size_t quantifier_depth(Formula const &f)
{
  std::size_t d = 0;
  for (auto const &k : f.kids)
    d = std::max(d, quantifier_depth(k));
  return d + f.vars.size();
}

class Evaluator
{
public:
  Evaluator(FinGroup const &h, std::map<std::string, int> values) : _h(h), _values(std::move(values))
  {}

  bool eval(Formula const &f)
  {
    switch (f.kind) {
    case Formula::Kind::Eq:
      return value(f.lhs) == value(f.rhs);
    case Formula::Kind::Neq:
      return value(f.lhs) != value(f.rhs);
    case Formula::Kind::Not:
      return !eval(f.kids[0]);
    case Formula::Kind::And:
      return std::all_of(f.kids.begin(), f.kids.end(), [&](Formula const &k) { return eval(k); });
    case Formula::Kind::Or:
      return std::any_of(f.kids.begin(), f.kids.end(), [&](Formula const &k) { return eval(k); });
    case Formula::Kind::Forall:
    case Formula::Kind::Exists:
      return quantify(f, 0);
    }
    return false;
  }

private:
  bool quantify(Formula const &f, std::size_t i)
  {
    if (i == f.vars.size())
      return eval(f.kids[0]);
    bool forall = f.kind == Formula::Kind::Forall;
    auto const &v = f.vars[i];
    auto saved = _values.find(v) == _values.end() ? std::optional<int>() : _values[v];
    bool res = forall;
    for (int x = 0; x < _h.order(); ++x) {
      _values[v] = x;
      if (quantify(f, i + 1) != forall) {
        res = !forall;
        break;
      }
    }
    if (saved)
      _values[v] = *saved;
    else
      _values.erase(v);
    return res;
  }

  int value(Term const &t)
  {
    switch (t.kind) {
    case Term::Kind::Var:
    case Term::Kind::Const: {
      auto it = _values.find(t.name);
      if (it == _values.end())
        throw Error("Unbound", "no value for " + t.name);
      return it->second;
    }
    case Term::Kind::Inv:
      return _h.inv(value(t.args[0]));
    case Term::Kind::Mul: {
      int r = FinGroup::identity();
      for (auto const &a : t.args)
        r = _h.mul(r, value(a));
      return r;
    }
    case Term::Kind::Pow: {
      int a = value(t.args[0]);
      BigInt e = t.exponent % _h.element_order(a);
      if (e < 0)
        e += _h.element_order(a);
      return _h.pow(a, static_cast<long long>(e));
    }
    }
    return 0;
  }

  FinGroup const &_h;
  std::map<std::string, int> _values;
};

} // namespace

std::string serialize(Formula const &f)
{
  std::ostringstream os;
  write(os, f);
  return os.str();
}

Formula parse_formula(std::string const &text)
{
  Parser p(text);
  auto f = p.formula();
  p.end();
  return f;
}

std::size_t symbol_count(Formula const &f)
{
  std::size_t n = 1 + f.vars.size();
  if (f.kind == Formula::Kind::Eq || f.kind == Formula::Kind::Neq)
    n += count(f.lhs) + count(f.rhs);
  for (auto const &k : f.kids)
    n += symbol_count(k);
  return n;
}

std::vector<std::string> free_variables(Formula const &f)
{
  std::set<std::string> vars, consts;
  collect(f, {}, vars, consts);
  return {vars.begin(), vars.end()};
}

std::vector<std::string> constants(Formula const &f)
{
  std::set<std::string> vars, consts;
  collect(f, {}, vars, consts);
  return {consts.begin(), consts.end()};
}

bool evaluate_finite(Formula const &f, FinGroup const &h, std::map<std::string, int> const &given,
                     std::size_t budget)
{
  BigInt work = boost::multiprecision::pow(BigInt(h.order()),
                                           static_cast<unsigned>(quantifier_depth(f)));
  if (work > budget)
    throw BudgetExceeded("|H|^depth = " + work.str() + " exceeds " + std::to_string(budget));
  for (auto const &[name, x] : given) {
    if (x < 0 || x >= h.order())
      throw Error("Unbound", "value of " + name + " is not an element");
  }
  return Evaluator(h, given).eval(f);
}

Formula commuting_involutions()
{
  auto x = Term::var("x");
  auto y = Term::var("y");
  return Formula::forall({"x", "y"},
                         Formula::implies(Formula::eq(Term::mul({x, x}), Term::one()),
                                          Formula::eq(Term::mul({x, y}), Term::mul({y, x}))));
}

// ---------------------------------------------------------------------------
// sentences attached to a graph of groups

namespace
{

std::string svar(int v, int x)
{ return "s" + std::to_string(v) + "_" + std::to_string(x); }

std::string tvar(int e)
{ return "t" + std::to_string(e); }

// the word in the generator variables for an element given as a closed path
// at the base
Term word(GraphOfGroups const &g, Path const &p)
{
  std::vector<Term> ts;
  for (auto const &tok : p.tokens) {
    if (tok.kind == Token::Elt) {
      if (tok.x != FinGroup::identity())
        ts.push_back(Term::var(svar(tok.id, tok.x)));
    } else if (!g.in_tree(tok.id)) {
      auto l = Term::var(tvar(tok.id));
      ts.push_back(tok.x > 0 ? l : Term::inv(l));
    }
  }
  return Term::mul(std::move(ts));
}

Term vertex_elt(int v, int x)
{ return x == FinGroup::identity() ? Term::one() : Term::var(svar(v, x)); }

// the conjugate y a y^-1
Term conj(Term const &y, Term const &a)
{ return Term::mul({y, a, Term::inv(y)}); }

// y normalizes the finite subgroup given by generators and elements
Formula normalizes(Term const &y, std::vector<Term> const &gens, std::vector<Term> const &elts)
{
  std::vector<Formula> all;
  for (auto const &a : gens) {
    std::vector<Formula> any;
    for (auto const &b : elts)
      any.push_back(Formula::eq(conj(y, a), b));
    all.push_back(Formula::disj(std::move(any)));
  }
  return Formula::conj(std::move(all));
}

struct ClassTerms
{
  std::vector<Term> gens, elts;
};

ClassTerms class_terms(FinClass const &c)
{
  ClassTerms t;
  for (int x : c.subgroup.generators())
    t.gens.push_back(vertex_elt(c.vertex, x));
  for (int x : c.subgroup.elements())
    t.elts.push_back(vertex_elt(c.vertex, x));
  return t;
}

// the relations of the presentation on all vertex group elements and the
// letters off the tree
Formula relations(GraphOfGroups const &g)
{
  std::vector<Formula> eqs;
  for (int v = 0; v < g.num_vertices(); ++v) {
    auto const &gv = g.vertex(v).group;
    for (int a : gv->generator_indices()) {
      for (int b = 1; b < gv->order(); ++b)
        eqs.push_back(Formula::eq(Term::mul({vertex_elt(v, a), vertex_elt(v, b)}),
                                  vertex_elt(v, gv->mul(a, b))));
    }
  }
  for (int e = 0; e < g.num_edges(); ++e) {
    auto const &ed = g.edge(e);
    Term l = g.in_tree(e) ? Term::one() : Term::var(tvar(e));
    for (int c : ed.group->generator_indices())
      eqs.push_back(Formula::eq(conj(l, vertex_elt(ed.from, ed.inj_from(c))),
                                vertex_elt(ed.to, ed.inj_to(c))));
  }
  return Formula::conj(std::move(eqs));
}

// M-commutator [g^{K!}, x g^{K!} x^-1]
Term m_comm(Term const &g, Term const &x, BigInt const &kf)
{
  auto p = Term::pow(g, kf);
  return commutator(p, conj(x, p));
}

Formula chain_formula(std::vector<Term> const &gs, BigInt const &kf, std::string const &prefix)
{
  std::vector<Formula> parts;
  for (auto const &g : gs)
    parts.push_back(Formula::neq(Term::pow(g, kf), Term::one()));
  for (std::size_t k = 1; k < gs.size(); ++k) {
    auto name = prefix + std::to_string(k);
    auto x = Term::var(name);
    std::vector<Formula> body;
    for (std::size_t i = 0; i < k; ++i)
      body.push_back(Formula::eq(m_comm(gs[i], x, kf), Term::one()));
    body.push_back(Formula::neq(m_comm(gs[k], x, kf), Term::one()));
    parts.push_back(Formula::exists({name}, Formula::conj(std::move(body))));
  }
  return Formula::conj(std::move(parts));
}

std::vector<int> primes_up_to(int n)
{
  std::vector<int> ps;
  for (int p = 2; p <= n; ++p) {
    bool prime = true;
    for (int q : ps)
      prime = prime && p % q != 0;
    if (prime)
      ps.push_back(p);
  }
  return ps;
}

// phi(N_i) meets D_p only in D_p(N_i), in the form: no element of prime
// order of the translation part of N_i / D_p goes into D_p of the target
std::vector<Formula> injective_mod_D(GraphOfGroups const &g, ClassTable const &t,
                                     FinClass const &c, int k, bool &approximate,
                                     std::string &warning)
{
  auto info = normalizer(t, c);
  auto s = structure_of(info.presentation);
  auto into = s.to_source.then(info.embedding);
  auto const &n = s.group;
  BigInt p = 2 * factorial(k);
  if (!D_subgroup(n, p).exact) {
    approximate = true;
    warning += "class " + std::to_string(c.id) + ": D_p(N) has no closed form; ";
    return {};
  }

  auto ct = class_terms(c);
  auto tword = word(g, into.apply(n.t));
  int o = n.alpha_order();
  std::vector<Formula> res;
  int zi = 0;
  for (int l : primes_up_to(std::max(k, n.C->order()))) {
    if (p % l != 0)
      continue;
    BigInt step = p / l;
    int a = static_cast<int>(step % o);
    // alpha^a
    std::vector<int> alpha_a(n.C->order());
    for (int x = 0; x < n.C->order(); ++x) {
      int y = x;
      for (int r = 0; r < a; ++r)
        y = n.alpha(y);
      alpha_a[x] = y;
    }
    for (int x = 0; x < n.C->order(); ++x) {
      // (x t^step)^l has C-part x alpha^a(x) ... alpha^{a(l-1)}(x)
      int prod = FinGroup::identity(), y = x;
      for (int r = 0; r < l; ++r) {
        prod = n.C->mul(prod, y);
        y = alpha_a[y];
      }
      if (prod != FinGroup::identity())
        continue;
      auto q = Term::mul({word(g, into.apply(n.c_elem(x))), Term::pow(tword, step)});
      auto name = "z" + std::to_string(c.id) + "_" + std::to_string(zi++);
      auto z = Term::var(name);
      res.push_back(Formula::forall(
        {name}, Formula::implies(normalizes(z, ct.gens, ct.elts),
                                 Formula::neq(Term::pow(z, p), q))));
    }
  }
  return res;
}

Formula special_forall(GraphOfGroups const &g, ClassTable const &t, int k, bool &approximate,
                       std::string &warning)
{
  std::vector<Formula> parts{relations(g)};

  // injective on every finite subgroup
  for (int v = 0; v < g.num_vertices(); ++v)
    for (int x = 1; x < g.vertex(v).group->order(); ++x)
      parts.push_back(Formula::neq(vertex_elt(v, x), Term::one()));

  // images of distinct classes are not conjugate
  auto const &classes = t.classes();
  for (std::size_t i = 0; i < classes.size(); ++i) {
    for (std::size_t j = i + 1; j < classes.size(); ++j) {
      if (classes[i].order != classes[j].order)
        continue;
      auto ci = class_terms(classes[i]);
      auto cj = class_terms(classes[j]);
      auto name = "y" + std::to_string(i) + "_" + std::to_string(j);
      auto y = Term::var(name);
      std::vector<Formula> out;
      for (auto const &a : ci.gens) {
        std::vector<Formula> all;
        for (auto const &b : cj.elts)
          all.push_back(Formula::neq(conj(y, a), b));
        out.push_back(Formula::conj(std::move(all)));
      }
      parts.push_back(Formula::forall({name}, Formula::disj(std::move(out))));
    }
  }

  // virtually cyclic normalizers: infinite image, injective modulo D
  BigInt kf = factorial(k);
  for (auto const &c : classes) {
    auto info = normalizer(t, c);
    if (info.kind != Kind::VCCyclic && info.kind != Kind::VCDihedral)
      continue;
    auto s = structure_of(info.presentation);
    auto into = s.to_source.then(info.embedding);
    parts.push_back(Formula::neq(Term::pow(word(g, into.apply(s.group.t)), kf), Term::one()));
    for (auto &f : injective_mod_D(g, t, c, k, approximate, warning))
      parts.push_back(std::move(f));
  }
  return Formula::conj(std::move(parts));
}

Formula pre_strong(GraphOfGroups const &g, ClassTable const &t, int k, bool strict,
                   bool &approximate, std::string &warning)
{
  BigInt kf = factorial(k);
  std::vector<Formula> parts;
  for (auto const &c : t.classes()) {
    auto info = normalizer(t, c);
    if (info.kind != Kind::NonElementary)
      continue;

    // two elements of N(C) generating a non-elementary subgroup
    std::vector<Path> pool;
    for (int r = 2; r >= 1 && pool.empty(); --r) {
      try {
        for (auto const &x : ball(info.presentation, r, 20000)) {
          auto y = info.embedding.apply(x);
          if (is_hyperbolic(g, y))
            pool.push_back(y);
        }
      } catch (BudgetExceeded const &) {
      }
    }
    std::optional<std::pair<Path, Path>> pair;
    for (std::size_t a = 0; a < pool.size() && !pair; ++a)
      for (std::size_t b = a + 1; b < pool.size() && !pair; ++b)
        if (!m_membership(g, pool[a], pool[b]))
          pair = std::make_pair(pool[a], pool[b]);
    if (!pair) {
      approximate = true;
      warning += "class " + std::to_string(c.id) + ": no non-elementary pair found; ";
    } else {
      auto a = Term::pow(word(g, pair->first), kf);
      auto b = Term::pow(word(g, pair->second), kf);
      parts.push_back(Formula::neq(commutator(a, b), Term::one()));
    }

    // a chain of maximal length in N(E)
    auto e = E_of(g, info);
    auto loc = t.locate(e.elements(g));
    auto ninfo = normalizer(t, t.classes()[loc.class_id]);
    if (ninfo.kind != Kind::NonElementary) {
      approximate = true;
      warning += "class " + std::to_string(c.id) + ": N(E) is elementary; ";
      continue;
    }
    auto chain = find_chain(g, ninfo);
    if (!chain.certified_maximal) {
      if (strict)
        throw ChainNotCertified("class " + std::to_string(c.id));
      approximate = true;
      warning += "class " + std::to_string(c.id) + ": chain not certified maximal; ";
    }
    // the chain lives in the conjugate of N(E) at the class representative
    std::vector<Term> hs;
    Path back = g.inverse(loc.conj);
    for (auto const &h : chain.elements)
      hs.push_back(word(g, g.conjugate(back, h)));
    if (!hs.empty())
      parts.push_back(chain_formula(hs, kf, "x" + std::to_string(c.id) + "_"));
  }
  return Formula::conj(std::move(parts));
}

// a finite subgroup as a tuple of at most K elements closed under products
struct Tuple
{
  std::vector<std::string> names;
  std::vector<Term> elts;
};

Tuple tuple(std::string const &prefix, int k)
{
  Tuple t;
  for (int a = 0; a < k; ++a) {
    t.names.push_back(prefix + "_" + std::to_string(a));
    t.elts.push_back(Term::var(t.names.back()));
  }
  return t;
}

Formula closed(Tuple const &f)
{
  std::vector<Formula> all;
  for (auto const &a : f.elts) {
    for (auto const &b : f.elts) {
      std::vector<Formula> any;
      for (auto const &c : f.elts)
        any.push_back(Formula::eq(Term::mul({a, b}), c));
      all.push_back(Formula::disj(std::move(any)));
    }
  }
  return Formula::conj(std::move(all));
}

// y F y^-1 != F' as sets
Formula conj_differs(Term const &y, Tuple const &f, Tuple const &fp)
{
  std::vector<Formula> either;
  for (auto const &a : f.elts) {
    std::vector<Formula> all;
    for (auto const &b : fp.elts)
      all.push_back(Formula::neq(conj(y, a), b));
    either.push_back(Formula::conj(std::move(all)));
  }
  for (auto const &b : fp.elts) {
    std::vector<Formula> all;
    for (auto const &a : f.elts)
      all.push_back(Formula::neq(conj(y, a), b));
    either.push_back(Formula::conj(std::move(all)));
  }
  return Formula::disj(std::move(either));
}

Formula pairwise_nonconjugate(std::vector<Tuple> const &fs, std::string const &y)
{
  std::vector<Formula> all;
  auto yt = Term::var(y);
  for (std::size_t p = 0; p < fs.size(); ++p)
    for (std::size_t q = 0; q < fs.size(); ++q)
      if (p != q)
        all.push_back(conj_differs(yt, fs[p], fs[q]));
  return Formula::forall({y}, Formula::conj(std::move(all)));
}

Formula normalizes_tuple(Term const &y, Tuple const &f)
{ return normalizes(y, f.elts, f.elts); }

Formula theta(int i, int n, int k)
{
  if (i < 1 || i > 5)
    throw Error("ValueError", "theta index must be 1..5");
  if (n < 1)
    return Formula::truth();
  BigInt kf = factorial(k);

  auto subgroups = [&](int count, std::string const &prefix) {
    std::vector<Tuple> fs;
    for (int a = 0; a < count; ++a)
      fs.push_back(tuple(prefix + std::to_string(a), k));
    return fs;
  };
  auto names_of = [](std::vector<Tuple> const &fs) {
    std::vector<std::string> vs;
    for (auto const &f : fs)
      vs.insert(vs.end(), f.names.begin(), f.names.end());
    return vs;
  };
  auto closures = [](std::vector<Tuple> const &fs) {
    std::vector<Formula> cs;
    for (auto const &f : fs)
      cs.push_back(closed(f));
    return cs;
  };

  if (i == 2) {
    if (n > 8)
      throw CapExceeded("theta_2 is unrolled over compositions of n <= 8");
    std::vector<Formula> options;
    // compositions of n as bit patterns of cut points
    for (unsigned cuts = 0; cuts < (1u << (n - 1)); ++cuts) {
      std::vector<int> parts{1};
      for (int b = 0; b < n - 1; ++b) {
        if (cuts & (1u << b))
          parts.push_back(1);
        else
          ++parts.back();
      }
      auto fs = subgroups(static_cast<int>(parts.size()), "f");
      auto vars = names_of(fs);
      auto body = closures(fs);
      body.push_back(pairwise_nonconjugate(fs, "y"));
      for (std::size_t a = 0; a < parts.size(); ++a) {
        std::vector<Term> gs;
        for (int j = 0; j < parts[a]; ++j) {
          auto name = "g" + std::to_string(a) + "_" + std::to_string(j);
          vars.push_back(name);
          gs.push_back(Term::var(name));
          body.push_back(normalizes_tuple(gs.back(), fs[a]));
        }
        for (int j = 0; j < parts[a]; ++j) {
          for (int j2 = j + 1; j2 < parts[a]; ++j2) {
            std::vector<Formula> any;
            for (auto const &x : fs[a].elts)
              any.push_back(Formula::neq(conj(gs[j], x), conj(gs[j2], x)));
            body.push_back(Formula::disj(std::move(any)));
          }
        }
      }
      options.push_back(Formula::exists(vars, Formula::conj(std::move(body))));
    }
    return Formula::disj(std::move(options));
  }

  auto fs = subgroups(n, "f");
  auto vars = names_of(fs);
  auto body = closures(fs);
  body.push_back(pairwise_nonconjugate(fs, "y"));

  if (i == 3) {
    auto g = Term::var("u"), h = Term::var("w");
    std::vector<Formula> all;
    for (auto const &f : fs)
      all.push_back(Formula::implies(
        Formula::conj({normalizes_tuple(g, f), normalizes_tuple(h, f)}),
        Formula::eq(commutator(Term::pow(g, kf), Term::pow(h, kf)), Term::one())));
    body.push_back(Formula::forall({"u", "w"}, Formula::conj(std::move(all))));
  }

  if (i == 4 || i == 5) {
    auto fps = subgroups(n, "fp");
    if (i == 5) {
      auto more = names_of(fps);
      vars.insert(vars.end(), more.begin(), more.end());
      for (auto &c : closures(fps))
        body.push_back(std::move(c));
    }
    std::vector<Formula> inherits;
    for (int a = 0; a < n; ++a) {
      auto g1 = "g" + std::to_string(a) + "_1", g2 = "g" + std::to_string(a) + "_2";
      vars.push_back(g1);
      vars.push_back(g2);
      body.push_back(normalizes_tuple(Term::var(g1), fs[a]));
      body.push_back(normalizes_tuple(Term::var(g2), fs[a]));
      body.push_back(Formula::neq(
        commutator(Term::pow(Term::var(g1), kf), Term::pow(Term::var(g2), kf)), Term::one()));
      if (i == 5) {
        auto h = Term::var("h");
        inherits.push_back(
          Formula::implies(normalizes_tuple(h, fs[a]), normalizes_tuple(h, fps[a])));
        // F inside F' strictly
        for (auto const &x : fs[a].elts) {
          std::vector<Formula> any;
          for (auto const &y : fps[a].elts)
            any.push_back(Formula::eq(x, y));
          body.push_back(Formula::disj(std::move(any)));
        }
        std::vector<Formula> outside;
        for (auto const &y : fps[a].elts) {
          std::vector<Formula> all;
          for (auto const &x : fs[a].elts)
            all.push_back(Formula::neq(y, x));
          outside.push_back(Formula::conj(std::move(all)));
        }
        body.push_back(Formula::disj(std::move(outside)));
      }
    }
    if (i == 5)
      body.push_back(Formula::forall({"h"}, Formula::conj(std::move(inherits))));
  }
  return Formula::exists(vars, Formula::conj(std::move(body)));
}

} // namespace

std::vector<std::string> generator_variables(GraphOfGroups const &g)
{
  std::vector<std::string> vs;
  for (int v = 0; v < g.num_vertices(); ++v)
    for (int x = 1; x < g.vertex(v).group->order(); ++x)
      vs.push_back(svar(v, x));
  for (int e = 0; e < g.num_edges(); ++e)
    if (!g.in_tree(e))
      vs.push_back(tvar(e));
  return vs;
}

std::map<std::string, int> identity_assignment(GraphOfGroups const &g)
{
  if (g.num_vertices() != 1 || g.num_edges() != 0)
    throw Error("ValueError", "identity assignment needs a single finite vertex group");
  std::map<std::string, int> m;
  for (int x = 1; x < g.vertex(0).group->order(); ++x)
    m[svar(0, x)] = x;
  return m;
}

EmittedFormula emit(GraphOfGroups const &input, Emission const &which)
{
  auto g = reduce(input);
  int k = K_of(g);
  EmittedFormula out;
  using W = Emission::Which;

  if (which.which == W::ChainExists) {
    int kk = which.K > 0 ? which.K : k;
    std::vector<Term> gs;
    for (int a = 1; a <= which.n; ++a) {
      out.parameters.push_back("g" + std::to_string(a));
      gs.push_back(Term::var(out.parameters.back()));
    }
    out.formula = chain_formula(gs, factorial(kk), "x");
    return out;
  }
  if (which.which == W::ThetaInvariant) {
    out.formula = theta(which.i, which.n, k);
    return out;
  }

  ClassTable t(g);
  auto gens = generator_variables(g);
  switch (which.which) {
  case W::SpecialForall:
    out.formula = special_forall(g, t, k, out.approximate, out.warning);
    out.parameters = gens;
    break;
  case W::SpecialForallN: {
    std::vector<Formula> parts{special_forall(g, t, k, out.approximate, out.warning)};
    for (auto const &w : ball(g, 2 * which.n)) {
      if (!g.is_identity(w))
        parts.push_back(Formula::neq(word(g, w), Term::one()));
    }
    out.formula = Formula::conj(std::move(parts));
    out.parameters = gens;
    break;
  }
  case W::PreStrongExists:
    out.formula = pre_strong(g, t, k, which.strict, out.approximate, out.warning);
    out.parameters = gens;
    break;
  case W::Zeta:
    out.formula = Formula::exists(
      gens, Formula::conj({special_forall(g, t, k, out.approximate, out.warning),
                           pre_strong(g, t, k, which.strict, out.approximate, out.warning)}));
    break;
  default:
    break;
  }
  return out;
}

} // namespace vfg
