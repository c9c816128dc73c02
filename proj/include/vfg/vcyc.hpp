#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "json.hpp"

#include "gog.hpp"

/**
 * @file vcyc.hpp
 * @brief Infinite virtually cyclic groups in structured form, the subgroups
 *        D_p(N), K-nice embeddings and their partners, twists and small test
 *        maps.
 *
 * Cyclic type C x|_alpha Z lives on one vertex "c" with a loop "t" whose
 * maps are the identity and alpha, so t c t^-1 = alpha(c). Dihedral type
 * A *_C B lives on vertices "a", "b" joined by "e", with t = b a for fixed
 * a in A \ C and b in B \ C. Elements are paths in that graph.
 */

namespace vfg
{

using BigInt = boost::multiprecision::cpp_int;

BigInt factorial(int n);

enum class VCType { Cyclic, Dihedral };

struct VCGroup
{
  VCType type;
  GroupPtr C;
  GrpHom alpha; // t c t^-1 on C
  GroupPtr A, B;
  GrpHom inc_a, inc_b; // C -> A, C -> B (dihedral only)
  GraphOfGroups graph;
  Path t;

  static VCGroup cyclic(GroupPtr c, GrpHom alpha);
  static VCGroup dihedral(GroupPtr c, GroupPtr a, GrpHom inc_a, GroupPtr b, GrpHom inc_b);

  int alpha_order() const;

  // element of C as a path at the base
  Path c_elem(int c) const;
  // x as an element of C, if it is one
  std::optional<int> as_c(Path const &x) const;
  // c t^k
  Path element(int c, long long k) const;
  // (c, k) with x = c t^k, if x lies in C<t>
  std::optional<std::pair<int, long long>> decompose(Path const &x) const;

  nlohmann::json to_json() const;
  static VCGroup from_json(nlohmann::json const &j);
};

struct VCStructure
{
  VCGroup group;
  WordHom to_source; // group.graph -> the analysed presentation, an isomorphism
};

// throws NotVirtuallyCyclic unless classify_elementary gives a VC kind
VCStructure structure_of(GraphOfGroups const &n);

struct DSubgroup
{
  BigInt letter_index; // D meets <t> in <t^letter_index>
  Subgrp c_part;       // D meets C in c_part
  bool exact;
};

// D_p(N); exact closed form <t^p> when 2 ord(alpha) |C| divides p, otherwise
// generated from the p-th powers of c t^k (and reflections) with |k| <= 3
DSubgroup D_subgroup(VCGroup const &n, BigInt const &p);

bool in_D(VCGroup const &n, Path const &x, BigInt const &p);

struct NiceEmbedding
{
  VCGroup source;
  VCGroup target;
  WordHom map; // source.graph -> target.graph

  nlohmann::json to_json() const;
  static NiceEmbedding from_json(nlohmann::json const &j);
};

struct NiceCheck
{
  bool nice;
  int failed_bullet; // 0 when nice
  std::string detail;
};

// throws BadK when K < max(K_N, K_N'), BadHom when map is no homomorphism
NiceCheck is_K_nice(NiceEmbedding const &e, int K);

// the identity embedding of n
NiceEmbedding identity_embedding(VCGroup const &n);

// a K-nice embedding source -> target of the shapes c -> phi(c), t -> c0 t'^k
// (cyclic) or a -> f(a), b -> t'^m f(b) t'^-m (dihedral), smallest exponent first
std::optional<NiceEmbedding> find_nice_embedding(VCGroup const &source,
                                                 VCGroup const &target, int K);

struct Partner
{
  VCGroup group;
  NiceEmbedding there; // n -> group
  NiceEmbedding back;  // group -> n
};

constexpr int default_partner_cap = 12;
constexpr long long default_exponent_limit = 5000;

// partners of the same type as n, up to isomorphism; throws CapExceeded when
// n is dihedral with |C| > cap
std::vector<Partner> mutual_nice_partners(VCGroup const &n, int K,
                                          int cap = default_partner_cap);

// index 2 overgroups of c up to isomorphism over c, as (A, inclusion)
std::vector<std::pair<GroupPtr, GrpHom>> index2_overgroups(GroupPtr const &c);

} // namespace vfg
