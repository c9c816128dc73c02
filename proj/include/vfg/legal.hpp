#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "analysis.hpp"
#include "gog.hpp"
#include "vcyc.hpp"

/**
 * @file legal.hpp
 * @brief Legal large and legal small extensions, extension of homomorphisms
 *        over splittings, special maps, twists and small test maps.
 *
 * Steps refer to finite subgroup classes of reduce(g) and produce graphs
 * built on reduce(g). A large step over C adds a loop at the vertex of the
 * class representative with both maps the inclusion of C. A small step
 * replaces the virtually cyclic normalizer N of C by a partner N'; since N
 * is carried by a single host edge f over C this amounts to regluing f:
 *
 *   cyclic type    inj_to(f) := inj_from(f) o phi^-1 beta phi
 *   dihedral type  inj_from(f) := f_A^-1 o inc_a', inj_to(f) := f_B^-1 o inc_b'
 *
 * where phi (resp. f_A, f_B) are the vertex maps of the embedding N -> N'.
 */

namespace vfg
{

struct LegalLargeStep
{
  int cls; // class id in finite_subgroup_classes(reduce(g))
};

struct LegalSmallStep
{
  int cls;
  VCGroup partner;
  NiceEmbedding there; // N -> N'
  NiceEmbedding back;  // N' -> N
};

struct LegalStep
{
  std::optional<LegalLargeStep> large;
  std::optional<LegalSmallStep> small;

  int cls() const
  { return large ? large->cls : small->cls; }

  // {"large": {"class": id}} or {"small": {"class", "partner", "there", "back"}}
  nlohmann::json to_json() const;
  static LegalStep from_json(nlohmann::json const &j);
};

// throws ElementaryGroup unless the group is non-elementary
std::vector<LegalLargeStep> legal_large_candidates(GraphOfGroups const &g);

// throws IllegalStep when the class does not qualify
GraphOfGroups apply_legal_large(GraphOfGroups const &g, LegalLargeStep const &step);

// a finite subgroup class whose normalizer N is carried by one edge of the
// reduced graph, together with N in structured form
struct SmallHost
{
  int cls;
  int edge;
  GraphOfGroups base;  // reduce(g), with the loop ends of a cyclic host aligned
  WordHom align;       // reduce(g) -> base, an isomorphism
  VCGroup n;
  WordHom n_into_base; // n.graph -> base, injective with image N_G(C)
  // dihedral: inclusions of A, B into the end vertex groups of the host edge
  GrpHom incl_a, incl_b;
};

std::vector<SmallHost> small_hosts(GraphOfGroups const &g);

std::vector<LegalSmallStep> legal_small_candidates(GraphOfGroups const &g,
                                                   int cap = default_partner_cap);

struct SmallExtension
{
  SmallHost host;
  LegalSmallStep step;
  GraphOfGroups result;          // Gamma
  WordHom partner_into_result;   // N'.graph -> Gamma
  WordHom inclusion;             // reduce(g) -> Gamma, extending there
};

// throws IllegalStep when the step does not qualify
SmallExtension small_extension(GraphOfGroups const &g, LegalSmallStep const &step);
GraphOfGroups apply_legal_small(GraphOfGroups const &g, LegalSmallStep const &step);

GraphOfGroups apply_legal(GraphOfGroups const &g, LegalStep const &step);

// empty when the step is legal for g, else the reason
std::string check_legal(GraphOfGroups const &g, LegalStep const &step);

// the homomorphism sending x in G_v to vertex_images[v][x] and the letter of
// e to edge_letters[e]; all images are elements of the target at its base.
// Throws EdgeMismatch naming the first edge whose relation fails.
WordHom extend_hom(GraphOfGroups const &source, GraphOfGroups const &target,
                   std::vector<std::vector<Path>> const &vertex_images,
                   std::vector<Path> const &edge_letters);

struct SpecialCheck
{
  bool special;
  bool strongly;
  int failed_bullet; // 0 when special; 4 marks the strong condition
  std::string detail;
};

// throws BadK when K_target > K_source, BadHom when phi is no homomorphism
SpecialCheck check_special(WordHom const &phi);

// an element c t^k of a structured VC group with a possibly huge exponent
struct VCElement
{
  int c = 0;
  BigInt k = 0;
};

constexpr long long default_materialize_limit = 4096;

struct Twist
{
  VCElement delta;
  std::optional<WordHom> map; // Gamma -> Gamma, present when |k| is small
  BigInt index;               // [N' : iota(N)] from the letter exponents
};

// throws DeltaNotInD unless delta lies in D_{2K!}(N')
Twist twist_map(SmallExtension const &ctx, VCElement const &delta);

struct SmallTestMap
{
  BigInt prime;               // [N : phi_n(N')]
  int c1;                     // phi_n(t') = c1 t^prime, c1 in C
  std::optional<WordHom> map; // Gamma -> reduce(g), present when prime is small
};

// cyclic hosts only; throws NotProperExtension when iota(N) = N'
SmallTestMap small_test_map(SmallExtension const &ctx, int n);

} // namespace vfg
