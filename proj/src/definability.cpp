#include "defcyc/definability.hpp"

#include "defcyc/errors.hpp"
#include "defcyc/eval.hpp"

namespace defcyc {

DefinabilityResult definable_closure(const FiniteGroup& g, const Subset& s, const AutOptions& opts) {
    AutGroup aut = automorphism_group(g, opts);
    AutGroup stab = pointwise_stabilizer(aut, s);
    DefinabilityResult r;
    r.parent = &g;
    r.parameters = s;
    r.closure = fixed_subgroup(g, stab);
    r.stabilizer_size = stab.size();
    return r;
}

bool is_logical_generator(const FiniteGroup& g, int s, const AutOptions& opts) {
    return !find_nonidentity_fixing(g, Subset::of(g, {s}), opts).has_value();
}

LogicalCyclicityVerdict is_logically_cyclic(const FiniteGroup& g, const AutOptions& opts) {
    std::vector<int> gens;
    for (int s = 0; s < g.order(); ++s)
        if (is_logical_generator(g, s, opts)) gens.push_back(s);
    LogicalCyclicityVerdict v;
    v.parent = &g;
    v.generators = Subset::of(g, std::move(gens));
    v.is_logically_cyclic = v.generators.size() > 0;
    return v;
}

bool cross_check_definability(const FiniteGroup& g, const Subset& s, int target,
                              const AutOptions& opts) {
    bool by_criterion = definable_closure(g, s, opts).closure.contains(target);
    FormulaPtr phi = cayley_formula(g, s, target);
    bool by_formula = check_defines(g, *phi, target);
    return by_criterion == by_formula;
}

} // namespace defcyc
