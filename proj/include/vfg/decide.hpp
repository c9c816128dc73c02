#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "analysis.hpp"
#include "iso.hpp"
#include "legal.hpp"

/**
 * @file decide.hpp
 * @brief Deciding forall-exists equivalence of two virtually free groups.
 *
 * The search runs breadth first over multiple legal extensions of both
 * groups and compares results pairwise with group_isomorphic. A negative
 * answer is only given when invariants differ, or when the whole theoretical
 * bound was enumerated; otherwise the answer is Unknown.
 */

namespace vfg
{

struct ExtensionChain
{
  GraphOfGroups base;
  std::vector<LegalStep> steps;
  GraphOfGroups result; // equals base for the empty chain

  std::size_t length() const
  { return steps.size(); }

  nlohmann::json to_json() const;
  static ExtensionChain from_json(nlohmann::json const &j);
};

struct InvariantMismatch
{
  std::string which; // n1 .. n5, K or profile
  InvariantVector first, second;
};

std::optional<InvariantMismatch> quick_refute(GraphOfGroups const &g1, GraphOfGroups const &g2);

struct Bound
{
  int N = 0; // most finite subgroup classes on either side
  int R = 0; // most generators of a computed normalizer presentation
  int o = 1; // largest finite subgroup order
  BigInt value;

  // "N*(R+o!)+N" with the numbers filled in
  std::string formula() const;
};

Bound compute_bound(GraphOfGroups const &g1, GraphOfGroups const &g2);

constexpr int default_decide_depth = 3;
constexpr std::size_t default_chain_budget = 500;

struct Enumeration
{
  std::vector<ExtensionChain> chains; // by length, then in discovery order
  bool truncated = false;             // the chain budget was hit
  int depth = 0;
};

// all multiple legal extensions of g up to depth steps, results pairwise
// non-isomorphic as graphs of groups
Enumeration enumerate_extensions(GraphOfGroups const &g, int depth,
                                 std::size_t budget = default_chain_budget);

struct Certificate
{
  ExtensionChain chain1, chain2;
  IsoWitness iso; // chain1.result -> chain2.result

  nlohmann::json to_json() const;
  static Certificate from_json(nlohmann::json const &j);
};

// empty when every step and the isomorphism check out, else names the first
// failing part, e.g. "chain 1 step 2: ..."
std::string verify_certificate(Certificate const &cert);

struct DecideConfig
{
  int depth = default_decide_depth;
  std::size_t chain_budget = default_chain_budget;
  std::size_t iso_budget = default_iso_budget;
};

enum class NoReason { None, InvariantMismatch, ExhaustedWithinBound };

struct DecideResult
{
  Verdict verdict = Verdict::Unknown;
  NoReason no_reason = NoReason::None;
  std::optional<InvariantMismatch> mismatch;
  std::optional<Certificate> certificate;
  Bound bound;
  int explored_depth = 0;
  std::size_t chains1 = 0, chains2 = 0;
  std::size_t iso_checks = 0;
  std::size_t iso_unknown = 0;
  bool truncated = false;

  // the verdict report without the certificate
  nlohmann::json report() const;
};

DecideResult decide(GraphOfGroups const &g1, GraphOfGroups const &g2,
                    DecideConfig const &config = {});

} // namespace vfg
