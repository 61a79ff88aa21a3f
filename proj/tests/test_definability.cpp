#include <doctest.h>

#include "defcyc/catalog.hpp"
#include "defcyc/definability.hpp"
#include "defcyc/errors.hpp"
#include "defcyc/eval.hpp"

#include <numeric>

using namespace defcyc;

TEST_CASE("definable closure examples") {
    // Z2 with no parameters: both elements are definable (Aut(Z2) = 1).
    FiniteGroup z2 = make_cyclic(2);
    DefinabilityResult r2 = definable_closure(z2, Subset::empty_set(z2));
    CHECK(r2.closure.size() == 2);
    CHECK(r2.stabilizer_size == 1);

    // Z4 with S = {2}: the stabilizer is all of Aut(Z4), fixed set {0, 2}.
    FiniteGroup z4 = make_cyclic(4);
    DefinabilityResult r4 = definable_closure(z4, Subset::of(z4, {2}));
    CHECK(r4.closure.members() == std::vector<int>({0, 2}));
    CHECK(r4.stabilizer_size == 2);

    // S = G pins everything.
    FiniteGroup d8 = make_dihedral(4);
    DefinabilityResult rd = definable_closure(d8, Subset::full_set(d8));
    CHECK(rd.closure.size() == 8);
    CHECK(rd.stabilizer_size == 1);
}

TEST_CASE("closure invariants over the catalog") {
    for (const auto& e : catalog_up_to(10)) {
        const FiniteGroup& g = e.group;
        for (int s = 0; s < g.order(); ++s) {
            DefinabilityResult r = definable_closure(g, Subset::of(g, {s}));
            CHECK(is_subgroup(g, r.closure));
            CHECK(r.closure.contains(s));
            CHECK(r.closure.contains(0));
            // def_{s}(G) is abelian, literally by table commutativity.
            for (int a : r.closure.members())
                for (int b : r.closure.members()) CHECK(g.mul(a, b) == g.mul(b, a));
        }
    }
}

TEST_CASE("monotonicity and idempotence of definable closure") {
    FiniteGroup d8 = make_dihedral(4);
    for (int s1 = 0; s1 < 8; ++s1) {
        Subset small = Subset::of(d8, {s1});
        DefinabilityResult r1 = definable_closure(d8, small);
        for (int s2 = 0; s2 < 8; ++s2) {
            DefinabilityResult r2 = definable_closure(d8, Subset::of(d8, {s1, s2}));
            for (int m : r1.closure.members()) CHECK(r2.closure.contains(m));
        }
        // def_{def_S(G)}(G) = def_S(G).
        DefinabilityResult rr = definable_closure(d8, r1.closure);
        CHECK(rr.closure == r1.closure);
    }
}

TEST_CASE("logical cyclicity verdicts") {
    // Z6: every element moved by x -> 5x is a logical generator, so
    // {1, 2, 4, 5} (2 is a logical generator without generating the group).
    LogicalCyclicityVerdict v6 = is_logically_cyclic(make_cyclic(6));
    CHECK(v6.is_logically_cyclic);
    CHECK(v6.generators.members() == std::vector<int>({1, 2, 4, 5}));

    LogicalCyclicityVerdict vk = is_logically_cyclic(make_abelian({2, 2}));
    CHECK(!vk.is_logically_cyclic);
    CHECK(vk.generators.size() == 0);

    LogicalCyclicityVerdict v1 = is_logically_cyclic(make_cyclic(1));
    CHECK(v1.is_logically_cyclic);
    CHECK(v1.generators.members() == std::vector<int>({0}));

    CHECK(!is_logically_cyclic(make_dihedral(4)).is_logically_cyclic);
    CHECK(!is_logically_cyclic(make_quaternion()).is_logically_cyclic);
}

TEST_CASE("verdict field coupling") {
    for (const auto& e : catalog_up_to(12)) {
        LogicalCyclicityVerdict v = is_logically_cyclic(e.group);
        CHECK(v.is_logically_cyclic == (v.generators.size() > 0));
        for (int s : v.generators.members()) CHECK(is_logical_generator(e.group, s));
    }
}

TEST_CASE("finite logically cyclic groups are cyclic, over the complete catalog") {
    for (const auto& e : catalog_up_to(15))
        CHECK(is_logically_cyclic(e.group).is_logically_cyclic == is_cyclic(e.group));
}

TEST_CASE("logically cyclic groups are abelian") {
    for (const auto& e : catalog_up_to(15))
        if (is_logically_cyclic(e.group).is_logically_cyclic) CHECK(is_abelian(e.group));
}

TEST_CASE("empty-parameter definability singles out 1 and Z2") {
    for (const auto& e : catalog_up_to(15)) {
        DefinabilityResult r = definable_closure(e.group, Subset::empty_set(e.group));
        bool all = r.closure.size() == static_cast<std::size_t>(e.group.order());
        CHECK(all == (e.group.order() <= 2));
    }
}

TEST_CASE("direct-factor necessity of logical cyclicity") {
    std::vector<FiniteGroup> groups;
    for (const auto& e : catalog_up_to(8))
        if (e.group.order() >= 2) groups.push_back(e.group);
    for (const auto& g1 : groups)
        for (const auto& g2 : groups) {
            if (g1.order() * g2.order() > 24) continue;
            FiniteGroup p = direct_product(g1, g2);
            if (is_logically_cyclic(p).is_logically_cyclic) {
                CHECK(is_logically_cyclic(g1).is_logically_cyclic);
                CHECK(is_logically_cyclic(g2).is_logically_cyclic);
            }
        }
}

TEST_CASE("cross check: formula route equals criterion route") {
    // Z3 with S = {1}: every element definable both ways.
    FiniteGroup z3 = make_cyclic(3);
    for (int g = 0; g < 3; ++g) CHECK(cross_check_definability(z3, Subset::of(z3, {1}), g));

    // Klein four with no parameters: non-identity elements undefinable by
    // both routes; the identity definable by both.
    FiniteGroup klein = make_abelian({2, 2});
    for (int g = 0; g < 4; ++g)
        CHECK(cross_check_definability(klein, Subset::empty_set(klein), g));

    FiniteGroup trivial = make_cyclic(1);
    CHECK(cross_check_definability(trivial, Subset::empty_set(trivial), 0));

    // The two routes also agree across D8's parameter singletons.
    FiniteGroup d8 = make_dihedral(4);
    for (int s = 0; s < 8; ++s)
        for (int g = 0; g < 8; ++g) CHECK(cross_check_definability(d8, Subset::of(d8, {s}), g));
}

TEST_CASE("orbit law for logical generators") {
    for (const auto& e : catalog_up_to(15)) {
        AutGroup a = automorphism_group(e.group);
        LogicalCyclicityVerdict v = is_logically_cyclic(e.group);
        for (int s : v.generators.members()) CHECK(orbit(a, s).size() == a.size());
        if (v.is_logically_cyclic) CHECK(a.size() <= static_cast<std::size_t>(e.group.order()));
    }
}

TEST_CASE("budget propagates out of definability") {
    FiniteGroup g = make_abelian({2, 2, 2});
    CHECK_THROWS_AS(definable_closure(g, Subset::empty_set(g), AutOptions{2}),
                    BudgetExceededError);
}
