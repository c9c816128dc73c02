#pragma once

#include <memory>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "fingrp.hpp"

/**
 * @file gog.hpp
 * @brief Finite graphs of finite groups, paths in their fundamental
 *        groupoid and Bass-Serre normal forms.
 *
 * A path is read left to right. The step `e:+` leaves the vertex `to(e)`
 * and arrives at `from(e)`, and satisfies
 *
 *   e:+ . inj_from(c) . e:- = inj_to(c)    for c in G_e.
 *
 * Group elements are paths closed at the base vertex (minimal id).
 */

namespace vfg
{

struct Token
{
  enum Kind { Elt, Step };

  Kind kind;
  int id; // vertex index for Elt, edge index for Step
  int x;  // element index for Elt, +1 or -1 for Step

  static Token elt(int v, int x)
  { return {Elt, v, x}; }
  static Token step(int e, int sign)
  { return {Step, e, sign}; }

  bool operator==(Token const &) const = default;
  auto operator<=>(Token const &) const = default;
};

struct Path
{
  int start = 0;
  std::vector<Token> tokens;

  bool operator==(Path const &) const = default;
  auto operator<=>(Path const &) const = default;

  int steps() const;
};

class GraphOfGroups
{
public:
  struct Vertex
  {
    std::string id;
    GroupPtr group;
  };

  struct Edge
  {
    std::string id;
    GroupPtr group;
    int from;
    int to;
    GrpHom inj_from;
    GrpHom inj_to;
  };

  // coset decomposition x = rep * inj(c) for one edge end
  struct Coset
  {
    int rep;
    int c;
  };

  GraphOfGroups() = default;

  int add_vertex(std::string id, GroupPtr group);
  int add_edge(std::string id, GroupPtr group, int from, int to,
               GrpHom inj_from, GrpHom inj_to);

  // checks all invariants; returns human readable diagnostics (empty if ok)
  std::vector<std::string> diagnostics() const;

  // computes spanning tree and transversals; throws ValidationError
  void finalize();
  bool finalized() const
  { return static_cast<bool>(_derived); }

  std::vector<Vertex> const &vertices() const
  { return _vertices; }
  std::vector<Edge> const &edges() const
  { return _edges; }

  Vertex const &vertex(int v) const
  { return _vertices[v]; }
  Edge const &edge(int e) const
  { return _edges[e]; }

  int num_vertices() const
  { return static_cast<int>(_vertices.size()); }
  int num_edges() const
  { return static_cast<int>(_edges.size()); }

  int vertex_index(std::string const &id) const;
  int edge_index(std::string const &id) const;

  int base() const;
  std::vector<int> const &spanning_tree() const;
  bool in_tree(int e) const;

  // edge end adjacent to the left/right of a step
  int left_vertex(int e, int sign) const
  { return sign > 0 ? _edges[e].to : _edges[e].from; }
  int right_vertex(int e, int sign) const
  { return sign > 0 ? _edges[e].from : _edges[e].to; }
  GrpHom const &left_map(int e, int sign) const
  { return sign > 0 ? _edges[e].inj_to : _edges[e].inj_from; }
  GrpHom const &right_map(int e, int sign) const
  { return sign > 0 ? _edges[e].inj_from : _edges[e].inj_to; }

  // end 0 is `from`, end 1 is `to`
  GrpHom const &end_map(int e, int end) const
  { return end == 0 ? _edges[e].inj_from : _edges[e].inj_to; }
  int end_vertex(int e, int end) const
  { return end == 0 ? _edges[e].from : _edges[e].to; }

  Coset coset(int e, int end, int x) const;
  std::vector<int> const &transversal(int e, int end) const;

  // path consisting of tree steps from the base to v
  Path const &tree_path(int v) const;

  Path vertex_element(int v, int x) const;
  Path edge_letter(int e) const;

  // generators of the fundamental group at the base vertex: for each vertex
  // the conjugated small generators, then one letter per non-tree edge
  std::vector<Path> generators() const;

  Path identity() const
  { return Path{base(), {}}; }

  int end_of(Path const &p) const;
  bool well_formed(Path const &p) const;
  void check(Path const &p) const;

  Path normal_form(Path const &p) const;
  Path multiply(Path const &a, Path const &b) const;
  Path inverse(Path const &p) const;
  Path conjugate(Path const &g, Path const &x) const
  { return multiply(multiply(g, x), inverse(g)); }
  Path power(Path const &p, long long n) const;
  bool equal(Path const &a, Path const &b) const;
  bool is_identity(Path const &p) const
  { return normal_form(p).tokens.empty(); }

  std::string format(Path const &p) const;
  Path parse(std::string const &text, int start = -1) const;

  // graph with vertex and edge ids replaced; used in tests and by iso
  GraphOfGroups relabeled(std::vector<std::string> const &vertex_ids,
                          std::vector<std::string> const &edge_ids) const;

private:
  struct Derived;

  Derived const &derived() const;

  std::vector<Vertex> _vertices;
  std::vector<Edge> _edges;
  std::shared_ptr<Derived const> _derived;
};

struct CyclicReduction
{
  Path conjugator; // from the base to the vertex of `reduced`
  Path reduced;    // closed path, cyclically reduced
  int translation_length;
};

// g = conjugator . reduced . conjugator^-1
CyclicReduction cyclic_reduce(GraphOfGroups const &g, Path const &w);

bool is_hyperbolic(GraphOfGroups const &g, Path const &w);

int K_of(GraphOfGroups const &g);

constexpr int default_ball_radius = 8;
constexpr std::size_t default_ball_budget = 2000000;

// all vertex group elements (conjugated to the base) and the letters of the
// non-tree edges with their inverses
std::vector<Path> ball_generators(GraphOfGroups const &g);

std::vector<Path> ball(GraphOfGroups const &g, int r,
                       std::size_t budget = default_ball_budget);

// morphism of fundamental groupoids described on generators
class WordHom
{
public:
  WordHom() = default;
  WordHom(GraphOfGroups const &src, GraphOfGroups const &dst);

  static WordHom identity(GraphOfGroups const &g);

  GraphOfGroups const &source() const
  { return *_src; }
  GraphOfGroups const &target() const
  { return *_dst; }

  // vertex v goes to vmap[v]; element x to a path closed at vmap[v]
  std::vector<int> vmap;
  std::vector<std::vector<Path>> velt;
  // image of e:+, a path from vmap[to] to vmap[from]
  std::vector<Path> edge_plus;
  // path from the target base to vmap[source base]
  Path base_conn;

  void set_vertex_hom(int v, int w, GrpHom const &hom);
  // images of the small generators of G_v; the rest follows their words
  void set_vertex_images(int v, int w, std::vector<Path> const &gen_images);

  // image of an open path from vmap[start] to vmap[end]
  Path apply_path(Path const &p) const;
  // image of a closed path at the source base, as an element at the target base
  Path apply(Path const &p) const;

  // checks that the generator images satisfy every defining relation
  std::vector<std::string> verify() const;

  WordHom then(WordHom const &after) const;

private:
  std::shared_ptr<GraphOfGroups const> _src;
  std::shared_ptr<GraphOfGroups const> _dst;
};

// random walk of `len` tokens from the base, closed along the spanning tree
Path random_word(GraphOfGroups const &g, int len, std::mt19937_64 &rng);

} // namespace vfg
