#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <vector>

#include "errors.hpp"

/**
 * @file fingrp.hpp
 * @brief Permutation represented finite groups with full element tables.
 */

namespace vfg
{

class Perm
{
public:
  Perm() = default;
  explicit Perm(std::vector<int> images);

  static Perm identity(int degree);

  int degree() const
  { return static_cast<int>(_images.size()); }

  int operator[](int x) const
  { return _images[x]; }

  std::vector<int> const &images() const
  { return _images; }

  // (p * q)(x) = p(q(x))
  Perm operator*(Perm const &rhs) const;
  Perm inverse() const;
  bool is_identity() const;

  auto operator<=>(Perm const &) const = default;
  bool operator==(Perm const &) const = default;

private:
  std::vector<int> _images;
};

std::ostream &operator<<(std::ostream &os, Perm const &perm);

class GrpHom;
class Subgrp;
struct SubgroupClass;

class FinGroup : public std::enable_shared_from_this<FinGroup>
{
public:
  static constexpr std::size_t default_cap = 10080;

  FinGroup(int degree,
           std::vector<Perm> const &generators,
           std::size_t cap = default_cap);

  int degree() const
  { return _degree; }

  std::vector<Perm> const &generators() const
  { return _generators; }

  std::vector<Perm> const &elements() const
  { return _elements; }

  int order() const
  { return static_cast<int>(_elements.size()); }

  // the identity permutation is lexicographically minimal
  static constexpr int identity()
  { return 0; }

  int mul(int a, int b) const;
  int inv(int a) const
  { return _inv[a]; }
  int conj(int g, int x) const
  { return mul(mul(g, x), inv(g)); }
  int pow(int a, long long n) const;
  int element_order(int a) const
  { return _elt_order[a]; }

  int index_of(Perm const &perm) const;
  std::vector<int> generator_indices() const;

  // small generating set picked greedily by element order
  std::vector<int> const &small_generators() const
  { return _small_gens; }

  // shortlex words in small_generators() for every element
  std::vector<std::vector<int>> const &gen_words() const
  { return _gen_words; }

  bool is_abelian() const;

  // cached, computed on first use
  std::vector<SubgroupClass> const &subgroup_classes() const;
  std::vector<Subgrp> const &subgroups() const;
  std::vector<GrpHom> const &automorphism_list() const;

private:
  void build_small_generators();

  mutable std::once_flag _classes_once;
  mutable std::once_flag _subgroups_once;
  mutable std::once_flag _aut_once;
  mutable std::shared_ptr<std::vector<SubgroupClass>> _classes;
  mutable std::shared_ptr<std::vector<Subgrp>> _subgroups;
  mutable std::shared_ptr<std::vector<GrpHom>> _auts;

  int _degree;
  std::vector<Perm> _generators;
  std::vector<Perm> _elements;
  std::vector<int> _table;
  std::vector<int> _inv;
  std::vector<int> _elt_order;
  std::vector<int> _small_gens;
  std::vector<std::vector<int>> _gen_words;
};

using GroupPtr = std::shared_ptr<FinGroup const>;

GroupPtr make_group(int degree,
                    std::vector<Perm> const &generators,
                    std::size_t cap = FinGroup::default_cap);

// convenience constructors used by tests and the corpus
GroupPtr cyclic_group(int n);
GroupPtr trivial_group();
GroupPtr direct_product(GroupPtr const &a, GroupPtr const &b);
GroupPtr symmetric_group(int n);

class Subgrp
{
public:
  Subgrp() = default;
  Subgrp(GroupPtr parent, std::vector<int> elements);

  static Subgrp generated(GroupPtr const &parent, std::vector<int> const &gens);
  static Subgrp whole(GroupPtr const &parent);
  static Subgrp trivial(GroupPtr const &parent);

  GroupPtr const &parent() const
  { return _parent; }

  std::vector<int> const &elements() const
  { return _elements; }

  int order() const
  { return static_cast<int>(_elements.size()); }

  bool contains(int x) const;
  bool subset_of(Subgrp const &other) const;

  Subgrp conjugate(int g) const;
  Subgrp intersect(Subgrp const &other) const;
  Subgrp normalizer() const;
  std::vector<int> generators() const;

  // the subgroup as a group in its own right plus its inclusion into parent
  std::pair<GroupPtr, class GrpHom> realize() const;

  bool operator==(Subgrp const &other) const
  { return _elements == other._elements; }
  bool operator<(Subgrp const &other) const;

private:
  GroupPtr _parent;
  std::vector<int> _elements;
};

class GrpHom
{
public:
  GrpHom() = default;

  // images of source->generator_indices(); throws BadHom when ill-defined
  GrpHom(GroupPtr source, GroupPtr target, std::vector<int> const &gen_images);

  static GrpHom from_map(GroupPtr source, GroupPtr target, std::vector<int> map);
  static GrpHom identity(GroupPtr const &g);
  // images given for source->small_generators()
  static GrpHom from_small_gen_images(GroupPtr source, GroupPtr target,
                                      std::vector<int> const &images);

  GroupPtr const &source() const
  { return _source; }
  GroupPtr const &target() const
  { return _target; }

  int operator()(int x) const
  { return _map[x]; }

  std::vector<int> const &map() const
  { return _map; }

  std::vector<int> gen_images() const;

  bool injective() const;
  bool surjective() const;
  bool bijective() const
  { return injective() && surjective(); }

  Subgrp image() const;
  Subgrp image(Subgrp const &sub) const;
  // preimage of an element in the image (injective maps only)
  int preimage(int y) const;

  GrpHom then(GrpHom const &after) const;
  GrpHom inverse() const;
  GrpHom conjugated(int g) const;

  bool operator==(GrpHom const &other) const
  { return _map == other._map; }

private:
  GroupPtr _source;
  GroupPtr _target;
  std::vector<int> _map;
};

struct SubgroupClass
{
  Subgrp representative;
  int size;
};

std::vector<Subgrp> all_subgroups(GroupPtr const &g);
std::vector<SubgroupClass> conjugacy_classes_of_subgroups(GroupPtr const &g);

// index of the class containing sub together with g such that
// g sub g^-1 = representative
std::pair<int, int> locate_subgroup_class(std::vector<SubgroupClass> const &classes,
                                          Subgrp const &sub);

std::optional<int> conjugator_between(Subgrp const &from, Subgrp const &to);

std::vector<GrpHom> automorphisms(GroupPtr const &c,
                                  std::size_t cap = FinGroup::default_cap);
std::optional<GrpHom> find_isomorphism(GroupPtr const &c1, GroupPtr const &c2);

// all homomorphisms source -> target with the given constraint on images
std::vector<GrpHom> all_homomorphisms(GroupPtr const &source,
                                      GroupPtr const &target,
                                      bool injective_only);

} // namespace vfg
