#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "gog.hpp"
#include "splittings.hpp"

/**
 * @file iso.hpp
 * @brief Isomorphisms of graphs of groups, isomorphism-invariant keys and
 *        isomorphism of fundamental groups through slide orbits.
 */

namespace vfg
{

// vertex and edge bijections with vertex and edge group isomorphisms such
// that for every end x of an edge e
//   vhom[v] o inj_x = ad(corrector) o inj'_x' o ehom[e]
// where x' is the matching end of emap[e] (swapped when flipped)
struct GoGIso
{
  std::vector<int> vmap;
  std::vector<GrpHom> vhom;
  std::vector<int> emap;
  std::vector<char> flipped;
  std::vector<GrpHom> ehom;
  std::vector<std::array<int, 2>> corrector; // per end (0 = from, 1 = to) of the source edge

  // the induced isomorphism of fundamental groups
  WordHom word_hom(GraphOfGroups const &g1, GraphOfGroups const &g2) const;

  nlohmann::json to_json(GraphOfGroups const &g1, GraphOfGroups const &g2) const;
  static GoGIso from_json(GraphOfGroups const &g1, GraphOfGroups const &g2,
                          nlohmann::json const &j);
};

std::optional<GoGIso> gog_isomorphic(GraphOfGroups const &g1, GraphOfGroups const &g2);

// empty when iso is a valid isomorphism g1 -> g2, else the first problem
std::string check_gog_iso(GraphOfGroups const &g1, GraphOfGroups const &g2,
                          GoGIso const &iso);

// invariant under isomorphism of graphs of groups; equal keys are resolved
// with gog_isomorphic by the callers
std::string canonical_key(GraphOfGroups const &g);

// states of a slide orbit identified up to gog isomorphism
class IsoStore
{
public:
  // index of a stored graph isomorphic to g, if any
  std::optional<std::size_t> find(GraphOfGroups const &g, GoGIso *iso = nullptr) const;
  // stores g unless present; returns its index and whether it was new
  std::pair<std::size_t, bool> insert(GraphOfGroups const &g);

  GraphOfGroups const &at(std::size_t i) const
  { return _graphs[i]; }
  std::size_t size() const
  { return _graphs.size(); }

private:
  std::vector<GraphOfGroups> _graphs;
  std::vector<std::string> _keys;
  std::multimap<std::string, std::size_t> _by_key;
};

enum class Verdict { Yes, No, Unknown };

std::string to_string(Verdict v);

struct IsoWitness
{
  std::vector<SlideMove> slides; // applied to reduce(g1), each followed by reduce
  GoGIso iso;                    // last graph -> reduce(g2)
};

struct IsoResult
{
  Verdict verdict;
  std::optional<IsoWitness> witness;
  std::size_t explored = 0;
  std::string provenance;
};

constexpr std::size_t default_iso_budget = 100000;

IsoResult group_isomorphic(GraphOfGroups const &g1, GraphOfGroups const &g2,
                           std::size_t budget = default_iso_budget);

// empty when the witness carries reduce(g1) onto reduce(g2), else the reason
std::string check_iso_witness(GraphOfGroups const &g1, GraphOfGroups const &g2,
                              IsoWitness const &w);

nlohmann::json witness_to_json(GraphOfGroups const &g1, GraphOfGroups const &g2,
                               IsoWitness const &w);
IsoWitness witness_from_json(GraphOfGroups const &g1, GraphOfGroups const &g2,
                             nlohmann::json const &j);

} // namespace vfg
