#pragma once

#include "defcyc/formula.hpp"
#include "defcyc/group.hpp"

#include <cstdint>
#include <map>
#include <string>

namespace defcyc {

inline constexpr std::int64_t kDefaultEvalAtomBudget = 100'000'000;

// Formula-evaluation guard: cayley_formula model checking is refused for
// groups larger than this by the CLI (the evaluator itself is general).
inline constexpr int kDefaultFormulaGroupLimit = 12;

/// Bindings for evaluation: free variables and parameter constants, both
/// by name, to element indices.
struct Env {
    std::map<std::string, int> vars;
    std::map<std::string, int> params;
};

struct EvalOptions {
    std::int64_t atom_budget = kDefaultEvalAtomBudget;
};

/// Tarskian satisfaction over a finite group. Quantifiers range over all
/// of G. Before raw enumeration, existential blocks run unit propagation
/// on equality atoms of the form variable = closed-term; remaining
/// variables are enumerated with short-circuiting and incremental
/// conflict checks. The budget counts atom evaluations.
bool evaluate(const FiniteGroup& g, const Formula& f, const Env& env = {},
              const EvalOptions& opts = {});

/// The exact solution set {x : G |= f(x)} of a formula with one free
/// variable.
Subset solutions(const FiniteGroup& g, const Formula& f, const std::string& free_var,
                 const Env& env = {}, const EvalOptions& opts = {});

/// True iff solutions(g, f) == {target}.
bool check_defines(const FiniteGroup& g, const Formula& f, int target, const Env& env = {},
                   const EvalOptions& opts = {});

/// The explicit defining formula read off the Cayley table: with free
/// variable y and one bound variable per element,
///   exists x1..xn: (AND_{i<j} xi != xj) & (AND_{s in S} x_s = a_s & x1 = 1)
///                  & (AND_{i,j} xi*xj = x_{sigma(i,j)}) & y = x_{target}.
/// Element i is carried by bound variable x{i+1}; x1 is the identity.
/// Parameter constants a_s come pre-resolved to their elements.
FormulaPtr cayley_formula(const FiniteGroup& g, const Subset& s, int target);

} // namespace defcyc
