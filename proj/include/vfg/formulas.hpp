#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fingrp.hpp"
#include "gog.hpp"
#include "vcyc.hpp"

/**
 * @file formulas.hpp
 * @brief First-order sentences in the language of groups: an AST with an
 *        S-expression text form, builders for the sentences attached to a
 *        graph of groups, and brute-force evaluation over finite groups.
 *
 * Text form, one formula per file:
 *
 *   formula := (forall (v ...) F) | (exists (v ...) F) | (and F ...)
 *            | (or F ...) | (not F) | (eq T T) | (neq T T)
 *   term    := (var v) | (const c) | (inv T) | (mul T ...) | (pow T n)
 *
 * (mul) is the identity, (and) is true and (or) is false. Exponents are
 * decimal integers of any size.
 */

namespace vfg
{

struct Term
{
  enum class Kind { Var, Const, Inv, Mul, Pow };

  Kind kind = Kind::Mul;
  std::string name;        // Var, Const
  BigInt exponent = 0;     // Pow
  std::vector<Term> args;

  static Term var(std::string name);
  static Term constant(std::string name);
  static Term one();
  static Term inv(Term t);
  static Term mul(std::vector<Term> ts);
  static Term pow(Term t, BigInt n);

  bool operator==(Term const &) const = default;
};

// [a, b] = a b a^-1 b^-1
Term commutator(Term const &a, Term const &b);

struct Formula
{
  enum class Kind { Forall, Exists, And, Or, Not, Eq, Neq };

  Kind kind = Kind::And;
  std::vector<std::string> vars; // Forall, Exists
  std::vector<Formula> kids;     // quantifiers and Not have one
  Term lhs, rhs;                 // Eq, Neq

  static Formula forall(std::vector<std::string> vars, Formula body);
  static Formula exists(std::vector<std::string> vars, Formula body);
  static Formula conj(std::vector<Formula> fs);
  static Formula disj(std::vector<Formula> fs);
  static Formula negate(Formula f);
  static Formula eq(Term a, Term b);
  static Formula neq(Term a, Term b);
  static Formula truth();
  // (or (not a) b)
  static Formula implies(Formula a, Formula b);

  bool operator==(Formula const &) const = default;
};

std::string serialize(Formula const &f);
// throws ParseError with the offending offset
Formula parse_formula(std::string const &text);

// node count; quantifiers count one per bound variable on top of the node
std::size_t symbol_count(Formula const &f);

// variables occurring free, sorted; constants are not variables
std::vector<std::string> free_variables(Formula const &f);
std::vector<std::string> constants(Formula const &f);

constexpr std::size_t default_eval_budget = 50000000;

// brute force over all assignments; free variables and constants are taken
// from `given`. Throws BudgetExceeded when |H|^depth exceeds the budget and
// Error("Unbound") for a name without value.
bool evaluate_finite(Formula const &f, FinGroup const &h,
                     std::map<std::string, int> const &given = {},
                     std::size_t budget = default_eval_budget);

// forall x forall y (x^2 = 1) => (xy = yx)
Formula commuting_involutions();

struct Emission
{
  enum class Which
  {
    SpecialForall,
    SpecialForallN,
    ChainExists,
    PreStrongExists,
    Zeta,
    ThetaInvariant
  };

  Which which = Which::Zeta;
  int n = 0; // radius for SpecialForallN, N for ChainExists, n for ThetaInvariant
  int i = 1; // ThetaInvariant index, 1..5
  int K = 0; // ChainExists; 0 means K of the graph
  bool strict = false; // throw ChainNotCertified instead of flagging
};

struct EmittedFormula
{
  Formula formula;
  // free variables in order: the generator tuple for Special and PreStrong,
  // g1..gN for ChainExists, none for sentences
  std::vector<std::string> parameters;
  bool approximate = false;
  std::string warning;
};

// generator variables of reduce(g): s<v>_<x> for each non-identity x in G_v
// and t<e> for each edge off the spanning tree
std::vector<std::string> generator_variables(GraphOfGroups const &g);

// the values of the generator variables under the identity of G when G is a
// single finite vertex group
std::map<std::string, int> identity_assignment(GraphOfGroups const &g);

EmittedFormula emit(GraphOfGroups const &g, Emission const &which);

} // namespace vfg
