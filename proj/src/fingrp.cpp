#include <algorithm>
#include <deque>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

#include "vfg/fingrp.hpp"

namespace vfg
{

namespace
{

constexpr int table_limit = 2048;

} // namespace

Perm::Perm(std::vector<int> images)
: _images(std::move(images))
{
  std::vector<char> seen(_images.size(), 0);
  for (int x : _images) {
    if (x < 0 || x >= static_cast<int>(_images.size()) || seen[x])
      throw BadPerm("image array is not a permutation");
    seen[x] = 1;
  }
}

Perm Perm::identity(int degree)
{
  std::vector<int> images(degree);
  std::iota(images.begin(), images.end(), 0);
  return Perm(std::move(images));
}

Perm Perm::operator*(Perm const &rhs) const
{
  if (rhs.degree() != degree())
    throw BadPerm("degree mismatch");

  Perm res;
  res._images.resize(_images.size());
  for (std::size_t x = 0; x < _images.size(); ++x)
    res._images[x] = _images[rhs._images[x]];
  return res;
}

Perm Perm::inverse() const
{
  Perm res;
  res._images.resize(_images.size());
  for (std::size_t x = 0; x < _images.size(); ++x)
    res._images[_images[x]] = static_cast<int>(x);
  return res;
}

bool Perm::is_identity() const
{
  for (std::size_t x = 0; x < _images.size(); ++x) {
    if (_images[x] != static_cast<int>(x))
      return false;
  }
  return true;
}

std::ostream &operator<<(std::ostream &os, Perm const &perm)
{
  os << '[';
  for (int i = 0; i < perm.degree(); ++i)
    os << (i ? "," : "") << perm[i];
  return os << ']';
}

FinGroup::FinGroup(int degree, std::vector<Perm> const &generators, std::size_t cap)
: _degree(degree),
  _generators(generators)
{
  if (degree < 1)
    throw BadPerm("degree must be positive");

  for (auto const &gen : _generators) {
    if (gen.degree() != degree)
      throw BadPerm("generator degree mismatch");
  }

  std::set<Perm> seen;
  std::deque<Perm> queue;

  Perm id = Perm::identity(degree);
  seen.insert(id);
  queue.push_back(id);

  while (!queue.empty()) {
    Perm current = queue.front();
    queue.pop_front();

    for (auto const &gen : _generators) {
      Perm next = current * gen;
      if (seen.insert(next).second) {
        if (seen.size() > cap)
          throw CapExceeded("closure exceeds " + std::to_string(cap) + " elements");
        queue.push_back(next);
      }
    }
  }

  _elements.assign(seen.begin(), seen.end());

  int n = order();

  if (n <= table_limit) {
    _table.resize(static_cast<std::size_t>(n) * n);
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b)
        _table[static_cast<std::size_t>(a) * n + b] = index_of(_elements[a] * _elements[b]);
    }
  }

  _inv.resize(n);
  for (int a = 0; a < n; ++a)
    _inv[a] = index_of(_elements[a].inverse());

  _elt_order.resize(n);
  for (int a = 0; a < n; ++a) {
    int k = 1;
    for (int x = a; x != identity(); x = mul(x, a))
      ++k;
    _elt_order[a] = k;
  }

  build_small_generators();
}

int FinGroup::mul(int a, int b) const
{
  if (!_table.empty())
    return _table[static_cast<std::size_t>(a) * _elements.size() + b];
  return index_of(_elements[a] * _elements[b]);
}

int FinGroup::pow(int a, long long n) const
{
  long long o = _elt_order[a];
  n %= o;
  if (n < 0)
    n += o;

  int res = identity();
  for (long long i = 0; i < n; ++i)
    res = mul(res, a);
  return res;
}

int FinGroup::index_of(Perm const &perm) const
{
  auto it = std::lower_bound(_elements.begin(), _elements.end(), perm);
  if (it == _elements.end() || *it != perm)
    return -1;
  return static_cast<int>(it - _elements.begin());
}

std::vector<int> FinGroup::generator_indices() const
{
  std::vector<int> res;
  for (auto const &gen : _generators)
    res.push_back(index_of(gen));
  return res;
}

bool FinGroup::is_abelian() const
{
  for (int a : _small_gens) {
    for (int b : _small_gens) {
      if (mul(a, b) != mul(b, a))
        return false;
    }
  }
  return true;
}

void FinGroup::build_small_generators()
{
  int n = order();

  std::vector<int> by_order(n);
  std::iota(by_order.begin(), by_order.end(), 0);
  std::stable_sort(by_order.begin(), by_order.end(),
                   [&](int a, int b) { return _elt_order[a] > _elt_order[b]; });

  std::vector<char> span(n, 0);
  span[identity()] = 1;
  int span_size = 1;

  auto close = [&]() {
    std::vector<int> members;
    for (int x = 0; x < n; ++x) {
      if (span[x])
        members.push_back(x);
    }
    for (std::size_t i = 0; i < members.size(); ++i) {
      for (int g : _small_gens) {
        int y = mul(members[i], g);
        if (!span[y]) {
          span[y] = 1;
          members.push_back(y);
        }
      }
    }
    span_size = static_cast<int>(members.size());
  };

  for (int cand : by_order) {
    if (span_size == n)
      break;
    if (span[cand])
      continue;
    _small_gens.push_back(cand);
    close();
  }

  _gen_words.assign(n, {});
  std::vector<char> reached(n, 0);
  reached[identity()] = 1;
  std::deque<int> queue{identity()};
  while (!queue.empty()) {
    int x = queue.front();
    queue.pop_front();
    for (std::size_t i = 0; i < _small_gens.size(); ++i) {
      int y = mul(x, _small_gens[i]);
      if (!reached[y]) {
        reached[y] = 1;
        _gen_words[y] = _gen_words[x];
        _gen_words[y].push_back(static_cast<int>(i));
        queue.push_back(y);
      }
    }
  }
}

std::vector<SubgroupClass> const &FinGroup::subgroup_classes() const
{
  std::call_once(_classes_once, [this]() {
    _classes = std::make_shared<std::vector<SubgroupClass>>(
      conjugacy_classes_of_subgroups(shared_from_this()));
  });
  return *_classes;
}

std::vector<Subgrp> const &FinGroup::subgroups() const
{
  std::call_once(_subgroups_once, [this]() {
    _subgroups = std::make_shared<std::vector<Subgrp>>(all_subgroups(shared_from_this()));
  });
  return *_subgroups;
}

std::vector<GrpHom> const &FinGroup::automorphism_list() const
{
  std::call_once(_aut_once, [this]() {
    _auts = std::make_shared<std::vector<GrpHom>>(automorphisms(shared_from_this()));
  });
  return *_auts;
}

GroupPtr make_group(int degree, std::vector<Perm> const &generators, std::size_t cap)
{ return std::make_shared<FinGroup>(degree, generators, cap); }

GroupPtr cyclic_group(int n)
{
  if (n == 1)
    return trivial_group();

  std::vector<int> images(n);
  for (int i = 0; i < n; ++i)
    images[i] = (i + 1) % n;
  return make_group(n, {Perm(images)});
}

GroupPtr trivial_group()
{ return make_group(1, {}); }

GroupPtr direct_product(GroupPtr const &a, GroupPtr const &b)
{
  int da = a->degree();
  int db = b->degree();

  std::vector<Perm> gens;
  for (auto const &g : a->generators()) {
    std::vector<int> images(da + db);
    for (int i = 0; i < da; ++i)
      images[i] = g[i];
    for (int i = 0; i < db; ++i)
      images[da + i] = da + i;
    gens.emplace_back(images);
  }
  for (auto const &g : b->generators()) {
    std::vector<int> images(da + db);
    for (int i = 0; i < da; ++i)
      images[i] = i;
    for (int i = 0; i < db; ++i)
      images[da + i] = da + g[i];
    gens.emplace_back(images);
  }
  return make_group(da + db, gens);
}

GroupPtr symmetric_group(int n)
{
  if (n == 1)
    return trivial_group();

  std::vector<int> cycle(n), swap(n);
  for (int i = 0; i < n; ++i) {
    cycle[i] = (i + 1) % n;
    swap[i] = i;
  }
  std::swap(swap[0], swap[1]);
  return make_group(n, {Perm(cycle), Perm(swap)});
}

Subgrp::Subgrp(GroupPtr parent, std::vector<int> elements)
: _parent(std::move(parent)),
  _elements(std::move(elements))
{
  std::sort(_elements.begin(), _elements.end());
  _elements.erase(std::unique(_elements.begin(), _elements.end()), _elements.end());
}

Subgrp Subgrp::generated(GroupPtr const &parent, std::vector<int> const &gens)
{
  int n = parent->order();
  std::vector<char> member(n, 0);
  std::vector<int> members{FinGroup::identity()};
  member[FinGroup::identity()] = 1;

  for (std::size_t i = 0; i < members.size(); ++i) {
    for (int g : gens) {
      int y = parent->mul(members[i], g);
      if (!member[y]) {
        member[y] = 1;
        members.push_back(y);
      }
    }
  }
  return Subgrp(parent, members);
}

Subgrp Subgrp::whole(GroupPtr const &parent)
{
  std::vector<int> all(parent->order());
  std::iota(all.begin(), all.end(), 0);
  return Subgrp(parent, all);
}

Subgrp Subgrp::trivial(GroupPtr const &parent)
{ return Subgrp(parent, {FinGroup::identity()}); }

bool Subgrp::contains(int x) const
{ return std::binary_search(_elements.begin(), _elements.end(), x); }

bool Subgrp::subset_of(Subgrp const &other) const
{
  return std::includes(other._elements.begin(), other._elements.end(),
                       _elements.begin(), _elements.end());
}

Subgrp Subgrp::conjugate(int g) const
{
  std::vector<int> res;
  res.reserve(_elements.size());
  for (int x : _elements)
    res.push_back(_parent->conj(g, x));
  return Subgrp(_parent, res);
}

Subgrp Subgrp::intersect(Subgrp const &other) const
{
  std::vector<int> res;
  std::set_intersection(_elements.begin(), _elements.end(),
                        other._elements.begin(), other._elements.end(),
                        std::back_inserter(res));
  return Subgrp(_parent, res);
}

Subgrp Subgrp::normalizer() const
{
  std::vector<int> res;
  for (int g = 0; g < _parent->order(); ++g) {
    if (conjugate(g) == *this)
      res.push_back(g);
  }
  return Subgrp(_parent, res);
}

std::vector<int> Subgrp::generators() const
{
  std::vector<int> gens;
  Subgrp span = trivial(_parent);
  for (int x : _elements) {
    if (span.order() == order())
      break;
    if (!span.contains(x)) {
      gens.push_back(x);
      span = generated(_parent, gens);
    }
  }
  return gens;
}

std::pair<GroupPtr, GrpHom> Subgrp::realize() const
{
  int n = order();
  std::vector<Perm> perms;
  auto gens = generators();
  for (int g : gens) {
    std::vector<int> images(n);
    for (int i = 0; i < n; ++i) {
      int y = _parent->mul(g, _elements[i]);
      images[i] = static_cast<int>(
        std::lower_bound(_elements.begin(), _elements.end(), y) - _elements.begin());
    }
    perms.emplace_back(images);
  }

  auto group = make_group(n, perms);

  // a permutation sends position of the identity to the position of g
  int id_pos = static_cast<int>(
    std::lower_bound(_elements.begin(), _elements.end(), FinGroup::identity()) - _elements.begin());

  std::vector<int> map(n);
  for (int i = 0; i < n; ++i)
    map[i] = _elements[group->elements()[i][id_pos]];

  return {group, GrpHom::from_map(group, _parent, map)};
}

bool Subgrp::operator<(Subgrp const &other) const
{
  if (order() != other.order())
    return order() < other.order();
  return _elements < other._elements;
}

namespace
{

std::optional<std::vector<int>> extend_images(GroupPtr const &source,
                                              GroupPtr const &target,
                                              std::vector<int> const &gens,
                                              std::vector<int> const &images)
{
  int n = source->order();
  std::vector<int> map(n, -1);
  map[FinGroup::identity()] = FinGroup::identity();

  std::vector<int> queue{FinGroup::identity()};
  for (std::size_t i = 0; i < queue.size(); ++i) {
    int x = queue[i];
    for (std::size_t j = 0; j < gens.size(); ++j) {
      int y = source->mul(x, gens[j]);
      int val = target->mul(map[x], images[j]);
      if (map[y] == -1) {
        map[y] = val;
        queue.push_back(y);
      } else if (map[y] != val) {
        return std::nullopt;
      }
    }
  }
  return map;
}

} // namespace

GrpHom::GrpHom(GroupPtr source, GroupPtr target, std::vector<int> const &gen_images)
: _source(std::move(source)),
  _target(std::move(target))
{
  auto gens = _source->generator_indices();
  if (gens.size() != gen_images.size())
    throw BadHom("expected " + std::to_string(gens.size()) + " generator images");
  for (int y : gen_images) {
    if (y < 0 || y >= _target->order())
      throw BadHom("generator image out of range");
  }

  auto map = extend_images(_source, _target, gens, gen_images);
  if (!map)
    throw BadHom("generator images violate a relation of the source");
  _map = std::move(*map);
}

GrpHom GrpHom::from_map(GroupPtr source, GroupPtr target, std::vector<int> map)
{
  GrpHom res;
  res._source = std::move(source);
  res._target = std::move(target);
  res._map = std::move(map);
  return res;
}

GrpHom GrpHom::identity(GroupPtr const &g)
{
  std::vector<int> map(g->order());
  std::iota(map.begin(), map.end(), 0);
  return from_map(g, g, map);
}

GrpHom GrpHom::from_small_gen_images(GroupPtr source,
                                     GroupPtr target,
                                     std::vector<int> const &images)
{
  auto map = extend_images(source, target, source->small_generators(), images);
  if (!map)
    throw BadHom("generator images violate a relation of the source");
  return from_map(std::move(source), std::move(target), std::move(*map));
}

std::vector<int> GrpHom::gen_images() const
{
  std::vector<int> res;
  for (int g : _source->generator_indices())
    res.push_back(_map[g]);
  return res;
}

bool GrpHom::injective() const
{
  int hits = 0;
  for (int x : _map)
    hits += x == FinGroup::identity();
  return hits == 1;
}

bool GrpHom::surjective() const
{ return image().order() == _target->order(); }

Subgrp GrpHom::image() const
{ return Subgrp(_target, _map); }

Subgrp GrpHom::image(Subgrp const &sub) const
{
  std::vector<int> res;
  for (int x : sub.elements())
    res.push_back(_map[x]);
  return Subgrp(_target, res);
}

int GrpHom::preimage(int y) const
{
  for (std::size_t x = 0; x < _map.size(); ++x) {
    if (_map[x] == y)
      return static_cast<int>(x);
  }
  return -1;
}

GrpHom GrpHom::then(GrpHom const &after) const
{
  std::vector<int> map(_map.size());
  for (std::size_t x = 0; x < _map.size(); ++x)
    map[x] = after._map[_map[x]];
  return from_map(_source, after._target, map);
}

GrpHom GrpHom::inverse() const
{
  if (!bijective())
    throw BadHom("inverse of a non-bijective map");

  std::vector<int> map(_map.size());
  for (std::size_t x = 0; x < _map.size(); ++x)
    map[_map[x]] = static_cast<int>(x);
  return from_map(_target, _source, map);
}

GrpHom GrpHom::conjugated(int g) const
{
  std::vector<int> map(_map.size());
  for (std::size_t x = 0; x < _map.size(); ++x)
    map[x] = _target->conj(g, _map[x]);
  return from_map(_source, _target, map);
}

std::vector<Subgrp> all_subgroups(GroupPtr const &g)
{
  std::set<Subgrp> found;
  std::vector<Subgrp> cyclic;

  for (int x = 0; x < g->order(); ++x) {
    Subgrp c = Subgrp::generated(g, {x});
    if (found.insert(c).second)
      cyclic.push_back(c);
  }

  std::vector<Subgrp> list(cyclic.begin(), cyclic.end());
  for (std::size_t i = 0; i < list.size(); ++i) {
    auto gens = list[i].generators();
    for (auto const &c : cyclic) {
      if (c.subset_of(list[i]))
        continue;
      auto joined_gens = gens;
      joined_gens.push_back(c.elements().size() > 1 ? c.generators()[0] : 0);
      Subgrp joined = Subgrp::generated(g, joined_gens);
      if (found.insert(joined).second)
        list.push_back(joined);
    }
  }

  return std::vector<Subgrp>(found.begin(), found.end());
}

std::vector<SubgroupClass> conjugacy_classes_of_subgroups(GroupPtr const &g)
{
  auto subs = all_subgroups(g);

  std::map<Subgrp, int> index;
  for (std::size_t i = 0; i < subs.size(); ++i)
    index[subs[i]] = static_cast<int>(i);

  std::vector<char> assigned(subs.size(), 0);
  std::vector<SubgroupClass> classes;

  for (std::size_t i = 0; i < subs.size(); ++i) {
    if (assigned[i])
      continue;

    std::set<int> members;
    for (int x = 0; x < g->order(); ++x)
      members.insert(index.at(subs[i].conjugate(x)));

    for (int m : members)
      assigned[m] = 1;

    classes.push_back({subs[i], static_cast<int>(members.size())});
  }

  return classes;
}

std::pair<int, int> locate_subgroup_class(std::vector<SubgroupClass> const &classes,
                                          Subgrp const &sub)
{
  for (std::size_t i = 0; i < classes.size(); ++i) {
    if (classes[i].representative.order() != sub.order())
      continue;
    if (auto g = conjugator_between(sub, classes[i].representative))
      return {static_cast<int>(i), *g};
  }
  throw Error("LookupError", "subgroup not found among class representatives");
}

std::optional<int> conjugator_between(Subgrp const &from, Subgrp const &to)
{
  if (from.order() != to.order())
    return std::nullopt;

  auto const &g = from.parent();
  for (int x = 0; x < g->order(); ++x) {
    bool ok = true;
    for (int y : from.elements()) {
      if (!to.contains(g->conj(x, y))) {
        ok = false;
        break;
      }
    }
    if (ok)
      return x;
  }
  return std::nullopt;
}

namespace
{

void search_homs(GroupPtr const &source,
                 GroupPtr const &target,
                 bool injective_only,
                 std::vector<int> &images,
                 std::vector<GrpHom> &out,
                 std::size_t cap)
{
  auto const &gens = source->small_generators();

  if (images.size() == gens.size()) {
    auto map = extend_images(source, target, gens, images);
    if (!map)
      return;
    auto hom = GrpHom::from_map(source, target, *map);
    if (injective_only && !hom.injective())
      return;
    out.push_back(hom);
    if (out.size() > cap)
      throw CapExceeded("too many homomorphisms");
    return;
  }

  int gen_order = source->element_order(gens[images.size()]);
  for (int y = 0; y < target->order(); ++y) {
    int o = target->element_order(y);
    if (injective_only ? o != gen_order : gen_order % o != 0)
      continue;
    images.push_back(y);
    search_homs(source, target, injective_only, images, out, cap);
    images.pop_back();
  }
}

} // namespace

std::vector<GrpHom> all_homomorphisms(GroupPtr const &source,
                                      GroupPtr const &target,
                                      bool injective_only)
{
  std::vector<GrpHom> out;
  std::vector<int> images;
  search_homs(source, target, injective_only, images, out, FinGroup::default_cap);
  return out;
}

std::vector<GrpHom> automorphisms(GroupPtr const &c, std::size_t cap)
{
  std::vector<GrpHom> out;
  std::vector<int> images;
  search_homs(c, c, true, images, out, cap);
  return out;
}

std::optional<GrpHom> find_isomorphism(GroupPtr const &c1, GroupPtr const &c2)
{
  if (c1->order() != c2->order())
    return std::nullopt;

  auto const &gens = c1->small_generators();
  std::vector<int> images;

  std::function<std::optional<GrpHom>()> rec = [&]() -> std::optional<GrpHom> {
    if (images.size() == gens.size()) {
      auto map = extend_images(c1, c2, gens, images);
      if (!map)
        return std::nullopt;
      auto hom = GrpHom::from_map(c1, c2, *map);
      if (!hom.bijective())
        return std::nullopt;
      return hom;
    }
    int gen_order = c1->element_order(gens[images.size()]);
    for (int y = 0; y < c2->order(); ++y) {
      if (c2->element_order(y) != gen_order)
        continue;
      images.push_back(y);
      if (auto res = rec())
        return res;
      images.pop_back();
    }
    return std::nullopt;
  };

  return rec();
}

} // namespace vfg
