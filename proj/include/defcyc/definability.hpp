#pragma once

#include "defcyc/aut.hpp"
#include "defcyc/group.hpp"

namespace defcyc {

/// def_S(G) together with the pointwise stabilizer size that produced it.
struct DefinabilityResult {
    const FiniteGroup* parent = nullptr;
    Subset parameters;
    Subset closure;
    std::size_t stabilizer_size = 0;
};

struct LogicalCyclicityVerdict {
    const FiniteGroup* parent = nullptr;
    bool is_logically_cyclic = false;
    Subset generators; // all logical generators, possibly empty
};

/// def_S(G) = C_G(A) with A = C_{Aut(G)}(S): the elements fixed by every
/// automorphism that fixes S pointwise. Requires full Aut enumeration;
/// propagates BudgetExceededError.
DefinabilityResult definable_closure(const FiniteGroup& g, const Subset& s,
                                     const AutOptions& opts = {});

/// An element s is a logical generator iff only the identity automorphism
/// fixes it; the verdict lists every such s. Decided per element by an
/// exhausting search for a non-identity fixing automorphism (no full Aut
/// list needed).
LogicalCyclicityVerdict is_logically_cyclic(const FiniteGroup& g, const AutOptions& opts = {});

bool is_logical_generator(const FiniteGroup& g, int s, const AutOptions& opts = {});

/// Oracle equivalence between the two independent routes: membership of
/// g in def_S(G) by the automorphism criterion, compared against whether
/// the explicit Cayley-table formula defines g under model checking. Returns the
/// equality of the two verdicts; the contract is that it is always true.
bool cross_check_definability(const FiniteGroup& g, const Subset& s, int target,
                              const AutOptions& opts = {});

} // namespace defcyc
