#pragma once

#include "defcyc/formula.hpp"
#include "defcyc/numtheory.hpp"

#include <map>
#include <string>
#include <vector>

namespace defcyc {

/// A finitely generated abelian ambient Z^r x Z_{m_1} x ... x Z_{m_k}
/// (invariant factors, each dividing the next), or its divisible variants
/// with Q in place of Z on the free part (Q, Q x Z_2).
struct FgAbelian {
    enum class FreeKind { Ints, Rationals };

    FreeKind free_kind = FreeKind::Ints;
    int free_rank = 0;
    std::vector<Integer> torsion;

    static FgAbelian fg(int free_rank, std::vector<Integer> torsion);
    static FgAbelian z_cross_zm(const Integer& m);
    static FgAbelian rationals();
    static FgAbelian rationals_cross_z2();

    std::string to_string() const;
};

/// Element: exact rational free coordinates (integral when the ambient is
/// Z-based) and residues 0 <= t_i < m_i on the torsion part.
struct FgElement {
    std::vector<Rational> free_coords;
    std::vector<Integer> torsion_coords;

    bool operator==(const FgElement&) const = default;
    bool operator<(const FgElement& o) const;
};

FgElement fg_element(const FgAbelian& g, std::vector<Rational> free_coords,
                     std::vector<Integer> torsion_coords);
FgElement fg_zero(const FgAbelian& g);
FgElement fg_add(const FgAbelian& g, const FgElement& a, const FgElement& b);
FgElement fg_neg(const FgAbelian& g, const FgElement& a);
FgElement fg_scale(const FgAbelian& g, const Integer& k, const FgElement& a);
bool fg_is_zero(const FgElement& a);

/// "(u, v mod m)" for mixed shapes, "p/q" for rank-1 torsion-free.
std::string fg_to_string(const FgAbelian& g, const FgElement& a);

// --- Endomorphisms of Z x Z_m ------------------------------------------
//
// Every endomorphism is the matrix [[n, 0], [b, a]] acting by
// (u, v) -> (n*u, b*u + a*v mod m); the Z_m -> Z block is forced zero.

struct EndoMatrix {
    Integer m; // torsion modulus
    Integer n; // free-part multiplier
    Integer b; // Z -> Z_m entry, stored mod m
    Integer a; // Z_m -> Z_m entry, stored mod m

    EndoMatrix(Integer m, Integer n, Integer b, Integer a);
    bool operator==(const EndoMatrix&) const = default;
};

FgElement endo_apply(const EndoMatrix& f, const FgElement& x);

/// Matrix product (apply rhs first): compose(f, g)(x) = f(g(x)).
EndoMatrix endo_compose(const EndoMatrix& f, const EndoMatrix& g);

/// Invertible iff n = +-1 and gcd(a, m) = 1.
bool is_automorphism(const EndoMatrix& f);

/// The identity iff n = 1, a = 1 and m divides b.
bool is_identity(const EndoMatrix& f);

/// All 2*m*phi(m) automorphisms of Z x Z_m, ordered lexicographically on
/// (n, a, b) with n = +1 before -1.
std::vector<EndoMatrix> enumerate_aut(const Integer& m);

std::vector<EndoMatrix> stabilizer_in_aut(const Integer& m, const FgElement& s);
bool has_trivial_stabilizer(const Integer& m, const FgElement& s);

// --- Guarded quantifier evaluation ---------------------------------------

struct FgEnv {
    std::map<std::string, FgElement> vars;
    std::map<std::string, FgElement> params;
};

struct GuardSolutions {
    bool infinite = false;
    std::vector<FgElement> values; // sorted, duplicate-free when finite
};

/// Exact solutions of a conjunction of linear (in)equations in one
/// variable: the free coordinate is solved over Z or Q (a nonzero
/// coefficient is required for finiteness), torsion coordinates as linear
/// congruence systems via Smith normal form. Returns infinite when the
/// positive equations leave a free coordinate unconstrained.
GuardSolutions guard_solutions(const FgAbelian& g, const Formula& guard, const std::string& var,
                               const FgEnv& env = {});

/// Tarskian truth over the ambient, with every quantifier required to be
/// guarded: forall blocks must look like (guard -> body) and exists blocks
/// like conjunctions whose equations pin the quantified variables to
/// finitely many values. Throws UnguardedQuantifierError otherwise.
bool evaluate_guarded(const FgAbelian& g, const Formula& f, const FgEnv& env = {});

struct GuardedSolutionSet {
    bool infinite = false;
    std::vector<FgElement> values;
};

/// The exact solution set of a one-free-variable formula, computed by
/// solving the top-level constraints (no ambient enumeration when the
/// ambient is infinite).
GuardedSolutionSet guarded_solution_set(const FgAbelian& g, const Formula& f,
                                        const std::string& free_var, const FgEnv& env = {});

bool check_defines_guarded(const FgAbelian& g, const Formula& f, const FgElement& target,
                           const FgEnv& env = {});

/// Residues t in [0, m) with coeffs[k]*t = rhs[k] (mod m) for all k,
/// solved through the Smith normal form of the associated integer system.
std::vector<Integer> congruence_solutions(const std::vector<Integer>& coeffs,
                                          const std::vector<Integer>& rhs, const Integer& m);

} // namespace defcyc
