#pragma once

#include <memory>
#include <set>
#include <string>
#include <vector>

namespace defcyc {

// First-order terms over the group language with parameter constants.
// Immutable trees shared by pointer.

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
    enum class Kind { Variable, Param, Identity, Product, Inverse, Power };

    Kind kind;
    std::string name;       // Variable, Param
    int param_element = -1; // Param: pre-resolved element index, or -1 to bind at evaluation
    TermPtr left, right;    // Product
    TermPtr arg;            // Inverse, Power
    long long exponent = 0; // Power (any integer; negative means inverse powers)

    static TermPtr variable(std::string name);
    static TermPtr param(std::string name, int element = -1);
    static TermPtr identity();
    static TermPtr product(TermPtr a, TermPtr b);
    static TermPtr inverse(TermPtr t);
    static TermPtr power(TermPtr t, long long k);
};

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
    enum class Kind { Eq, Not, And, Or, Implies, Exists, ForAll };

    Kind kind;
    TermPtr lhs, rhs;                 // Eq
    std::vector<FormulaPtr> children; // Not (1), And (k), Or (k), Implies (2)
    std::vector<std::string> vars;    // quantifiers
    FormulaPtr body;                  // quantifiers

    static FormulaPtr eq(TermPtr a, TermPtr b);
    static FormulaPtr neq(TermPtr a, TermPtr b); // Not(Eq)
    static FormulaPtr negate(FormulaPtr f);
    static FormulaPtr conj(std::vector<FormulaPtr> fs);
    static FormulaPtr disj(std::vector<FormulaPtr> fs);
    static FormulaPtr implies(FormulaPtr a, FormulaPtr b);
    static FormulaPtr exists(std::vector<std::string> vars, FormulaPtr body);
    static FormulaPtr forall(std::vector<std::string> vars, FormulaPtr body);
};

bool equal(const Term& a, const Term& b);
bool equal(const Formula& a, const Formula& b);

/// Free variables (parameters are constants, not variables).
std::set<std::string> free_variables(const Formula& f);

// --- Concrete syntax ----------------------------------------------------
//
//   formula := quant | impl
//   quant   := ("forall"|"exists") var+ "(" formula ")"
//   impl    := disj ["->" impl]
//   disj    := conj {"|" conj}
//   conj    := atom {"&" atom}
//   atom    := "!" atom | "(" formula ")" | term "=" term | term "!=" term
//
// Multiplicative terms: factor {"*" factor}, factor := ident | "1" |
// "(" term ")" | factor "^" int. Additive terms: signed integer-linear
// combinations like "2y - 3s + z"; "0" is the identity. Both dialects
// parse to the same AST (additive coefficients lower to Power).

enum class Dialect { Multiplicative, Additive };

/// Identifiers listed in param_names parse as parameter constants (bound
/// to elements at evaluation time); all other identifiers are variables.
FormulaPtr parse_formula(const std::string& text, Dialect dialect,
                         const std::set<std::string>& param_names = {});

std::string print_term(const Term& t, Dialect dialect);
std::string print_formula(const Formula& f, Dialect dialect);

} // namespace defcyc
