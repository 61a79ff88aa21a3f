#pragma once

#include "defcyc/group.hpp"
#include "defcyc/numtheory.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace defcyc {

inline constexpr std::int64_t kDefaultAutNodeBudget = 10'000'000;

/// A bijection of element indices preserving the Cayley table. map[0] = 0.
struct Automorphism {
    const FiniteGroup* parent = nullptr;
    std::vector<int> map;

    int operator()(int x) const { return map[x]; }
    bool is_identity() const;
};

/// Composition (a . b)(x) = a(b(x)).
Automorphism compose(const Automorphism& a, const Automorphism& b);
Automorphism inverse(const Automorphism& a);

/// True if map is a bijection fixing 0 with map[xy] = map[x]map[y] for all
/// pairs; used by tests and debug asserts.
bool is_automorphism(const FiniteGroup& g, const std::vector<int>& map);

/// The full automorphism group: identity first, then lexicographic on the
/// map arrays (the identity is lexicographically least, so a plain sort).
struct AutGroup {
    const FiniteGroup* parent = nullptr;
    std::vector<Automorphism> elements;

    std::size_t size() const { return elements.size(); }
};

struct AutOptions {
    std::int64_t node_budget = kDefaultAutNodeBudget;
};

/// A generating set built greedily: repeatedly add the element whose
/// closure with the current set grows most (ties to the smallest index).
/// Size <= log2 |G|; empty for the trivial group.
Subset generating_set(const FiniteGroup& g);

/// Backtracking over images of a generating set; candidate images must
/// match element order, partial maps are extended by table closure and
/// rejected on conflict. Throws BudgetExceededError past the node budget.
AutGroup automorphism_group(const FiniteGroup& g, const AutOptions& opts = {});

/// Number of automorphisms, found by the same search without storing maps.
Integer count_automorphisms(const FiniteGroup& g, const AutOptions& opts = {});

/// First non-identity automorphism fixing S pointwise, if one exists. The
/// search exhausts (proving triviality) when it returns nullopt.
std::optional<Automorphism> find_nonidentity_fixing(const FiniteGroup& g, const Subset& s,
                                                    const AutOptions& opts = {});

/// Sublist {a in A : a(s) = s for all s in S}; a subgroup of A.
AutGroup pointwise_stabilizer(const AutGroup& a, const Subset& s);

/// {g : a(g) = g for all a in A}; always a subgroup.
Subset fixed_subgroup(const FiniteGroup& g, const AutGroup& a);

/// {a(s) : a in A}.
Subset orbit(const AutGroup& a, int s);

/// Abelian p-group shape Z_{p^{e_1}} x ... x Z_{p^{e_t}}, e_1 <= ... <= e_t.
struct AbelianPShape {
    long long p;
    std::vector<int> exponents;

    AbelianPShape(long long p_, std::vector<int> exps);

    /// The cyclic factors p^{e_i}, for make_abelian.
    std::vector<int> factors() const;
};

/// Closed-form |Aut| for an abelian p-group: with d_i = max{j : e_j = e_i}
/// and c_i = min{j : e_j = e_i},
///   prod_{i=1..t} (p^{d_i} - p^{i-1}) * p^{e_i (t - d_i) + (e_i - 1)(t - c_i + 1)}.
Integer hillar_rhea_order(const AbelianPShape& shape);

} // namespace defcyc
