#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gog.hpp"
#include "splittings.hpp"

/**
 * @file analysis.hpp
 * @brief Conjugacy classes of finite subgroups, normalizers, maximal finite
 *        normal subgroups, maximal elementary subgroups and the invariants
 *        n1..n5.
 */

namespace vfg
{

enum class Kind { Finite, VCCyclic, VCDihedral, NonElementary };

std::string to_string(Kind kind);

// a finite subgroup of the fundamental group given as conj . sub . conj^-1
// with sub inside the vertex group at the end of conj
struct FiniteSubgroup
{
  Path conj;
  Subgrp sub;

  int order() const
  { return sub.order(); }
  int vertex(GraphOfGroups const &g) const
  { return g.end_of(conj); }

  std::vector<Path> elements(GraphOfGroups const &g) const;
  bool contains(GraphOfGroups const &g, Path const &x) const;
};

// x as an element of G_v when the closed path x at v has no steps, else -1
int as_vertex_element(GraphOfGroups const &g, Path const &x);

struct FinClass
{
  int id;
  int vertex;
  Subgrp subgroup; // representative inside the vertex group
  int order;

  FiniteSubgroup as_subgroup(GraphOfGroups const &g) const;
};

// union-find over (vertex, vertex-group subgroup class) with witness paths
class ClassTable
{
public:
  struct Node
  {
    int vertex;
    int vclass; // index into the vertex group's subgroup_classes()
  };

  // x_a . inj_from(H0) . x_a^-1 = H_a and likewise for b
  struct Link
  {
    int edge;
    int eclass; // index into the edge group's subgroup_classes()
    int a;      // node at `from`
    int b;      // node at `to`
    int x_a;
    int x_b;
  };

  explicit ClassTable(GraphOfGroups const &g);

  GraphOfGroups const &graph() const
  { return _g; }

  std::vector<FinClass> const &classes() const
  { return _classes; }
  std::vector<Node> const &nodes() const
  { return _nodes; }
  std::vector<Link> const &links() const
  { return _links; }

  int node_of(int v, int vclass) const;
  int class_of_node(int node) const
  { return _node_class[node]; }
  Subgrp const &node_subgroup(int node) const;

  // P with P . H_node . P^-1 equal to the class representative
  Path const &witness(int node) const
  { return _witness[node]; }

  struct Location
  {
    int class_id;
    Path conj; // conj . F . conj^-1 is the class representative
    FiniteSubgroup located;
  };

  // class of a finite subgroup given by a generating set of paths
  Location locate(std::vector<Path> const &gens) const;

private:
  GraphOfGroups _g;
  std::vector<Node> _nodes;
  std::vector<int> _node_offset;
  std::vector<Link> _links;
  std::vector<int> _node_class;
  std::vector<Path> _witness;
  std::vector<FinClass> _classes;
};

std::vector<FinClass> finite_subgroup_classes(GraphOfGroups const &g);

Kind classify_elementary(GraphOfGroups const &n);

struct NormalizerInfo
{
  FinClass subgroup;
  Kind kind;
  GraphOfGroups presentation; // quotient of the fixed subtree by N_G(C)
  WordHom embedding;          // presentation -> g, injective with image N_G(C)
  std::vector<Path> generators;
};

NormalizerInfo normalizer(ClassTable const &table, FinClass const &c);
NormalizerInfo normalizer(GraphOfGroups const &g, FinClass const &c);

// the subgroup of Aut(C) induced by conjugation by N_G(C), as permutations
// of the elements of the class representative
std::vector<std::vector<int>> induced_automorphisms(GraphOfGroups const &g,
                                                    NormalizerInfo const &n);

// E_G(N_G(C)) for a non-elementary normalizer
FiniteSubgroup E_of(GraphOfGroups const &g, NormalizerInfo const &n);
FiniteSubgroup E_of(GraphOfGroups const &g, FinClass const &c);

// pointwise stabilizer of the axis of a hyperbolic element
FiniteSubgroup axis_stabilizer(GraphOfGroups const &g, Path const &h);

bool m_membership(GraphOfGroups const &g, Path const &h, Path const &x);

// literal commutator test [h^{K!}, x h^{K!} x^-1] = 1; only feasible for small K
bool m_membership_commutator(GraphOfGroups const &g, Path const &h, Path const &x);

struct Chain
{
  std::vector<Path> elements;
  bool certified_maximal;
};

constexpr int default_chain_radius = 3;

Chain find_chain(GraphOfGroups const &g, NormalizerInfo const &n,
                 int radius = default_chain_radius);

struct ClassAnalysis
{
  FinClass cls;
  NormalizerInfo normalizer;
  int aut_size;
  std::optional<FiniteSubgroup> E; // non-elementary normalizers only
};

struct InvariantVector
{
  int n1 = 0;
  int n2 = 0;
  int n3 = 0;
  int n4 = 0;
  int n5 = 0;
  int K = 1;
  std::vector<std::pair<int, Kind>> profile;

  bool operator==(InvariantVector const &) const = default;
};

struct Analysis
{
  GraphOfGroups graph;
  std::shared_ptr<ClassTable const> table;
  std::vector<ClassAnalysis> classes;
  InvariantVector invariants;
};

Analysis analyze(GraphOfGroups const &g);
InvariantVector invariants(GraphOfGroups const &g);

// first differing field name, or empty
std::string invariant_mismatch(InvariantVector const &a, InvariantVector const &b);

} // namespace vfg
