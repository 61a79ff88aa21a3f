#include <doctest.h>

#include "defcyc/aut.hpp"
#include "defcyc/catalog.hpp"
#include "defcyc/errors.hpp"

#include <algorithm>
#include <numeric>

using namespace defcyc;

namespace {

// Independent oracle: filter all n! bijections fixing 0 by the
// homomorphism law. Only usable for n <= 8.
std::vector<std::vector<int>> brute_force_automorphisms(const FiniteGroup& g) {
    const int n = g.order();
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<std::vector<int>> out;
    do {
        if (perm[0] != 0) continue;
        bool hom = true;
        for (int i = 0; i < n && hom; ++i)
            for (int j = 0; j < n; ++j)
                if (perm[g.mul(i, j)] != g.mul(perm[i], perm[j])) {
                    hom = false;
                    break;
                }
        if (hom) out.push_back(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace

TEST_CASE("generating_set basics") {
    FiniteGroup z6 = make_cyclic(6);
    Subset g6 = generating_set(z6);
    CHECK(g6.size() == 1);
    CHECK(subgroup_generated(z6, g6).size() == 6);

    FiniteGroup klein = make_abelian({2, 2});
    CHECK(generating_set(klein).size() == 2);

    CHECK(generating_set(make_cyclic(1)).size() == 0);

    // Size stays within log2 |G| over the catalog.
    for (const auto& e : catalog_up_to(15)) {
        Subset s = generating_set(e.group);
        CHECK(subgroup_generated(e.group, s).size() == static_cast<std::size_t>(e.group.order()));
        std::size_t bound = 0;
        while ((1 << bound) < e.group.order()) ++bound;
        CHECK(s.size() <= std::max<std::size_t>(bound, 1));
    }
}

TEST_CASE("automorphism_group matches the brute-force oracle on order <= 8") {
    for (const auto& e : catalog_up_to(8)) {
        AutGroup a = automorphism_group(e.group);
        auto expected = brute_force_automorphisms(e.group);
        REQUIRE(a.size() == expected.size());
        for (std::size_t i = 0; i < expected.size(); ++i) CHECK(a.elements[i].map == expected[i]);
    }
}

TEST_CASE("frozen automorphism counts") {
    CHECK(automorphism_group(make_cyclic(8)).size() == 4);
    CHECK(automorphism_group(make_abelian({2, 2})).size() == 6);
    CHECK(automorphism_group(make_abelian({2, 4})).size() == 8); // 2^{f+1}, f=2
    CHECK(automorphism_group(make_dihedral(4)).size() == 8);
    CHECK(automorphism_group(make_quaternion()).size() == 24);
    CHECK(automorphism_group(make_symmetric(3)).size() == 6);
    CHECK(automorphism_group(make_alternating(4)).size() == 24);
    CHECK(automorphism_group(make_dicyclic(3)).size() == 12);
}

TEST_CASE("cyclic groups have phi(n) automorphisms up to 64") {
    for (int n = 1; n <= 64; ++n)
        CHECK(count_automorphisms(make_cyclic(n)) == euler_phi(n));
}

TEST_CASE("canonical order: identity first, then lexicographic") {
    AutGroup a = automorphism_group(make_abelian({2, 2}));
    CHECK(a.elements.front().is_identity());
    for (std::size_t i = 1; i < a.size(); ++i) CHECK(a.elements[i - 1].map < a.elements[i].map);
}

TEST_CASE("every enumerated automorphism satisfies the table law") {
    for (const auto& e : catalog_up_to(12)) {
        AutGroup a = automorphism_group(e.group);
        for (const auto& alpha : a.elements) {
            CHECK(alpha.map[0] == 0);
            CHECK(is_automorphism(e.group, alpha.map));
        }
    }
}

TEST_CASE("composition convention and inverses") {
    FiniteGroup z5 = make_cyclic(5);
    AutGroup a = automorphism_group(z5);
    // x -> 2x and x -> 3x compose to x -> 6x = x.
    Automorphism two{&z5, {0, 2, 4, 1, 3}};
    Automorphism three{&z5, {0, 3, 1, 4, 2}};
    CHECK(compose(two, three).is_identity());
    CHECK(inverse(two).map == three.map);
    // (a . b)(x) = a(b(x)).
    CHECK(compose(two, two).map == std::vector<int>({0, 4, 3, 2, 1}));
    CHECK(a.size() == 4);
}

TEST_CASE("pointwise stabilizer") {
    FiniteGroup z4 = make_cyclic(4);
    AutGroup a = automorphism_group(z4);
    CHECK(a.size() == 2);

    // S = {} returns A unchanged; S = G only the identity.
    CHECK(pointwise_stabilizer(a, Subset::empty_set(z4)).size() == a.size());
    CHECK(pointwise_stabilizer(a, Subset::full_set(z4)).size() == 1);

    // Both automorphisms of Z4 fix 2.
    CHECK(pointwise_stabilizer(a, Subset::of(z4, {2})).size() == 2);

    // Chain law: stabilizing S1 then S2 equals stabilizing the union.
    FiniteGroup d8 = make_dihedral(4);
    AutGroup ad8 = automorphism_group(d8);
    for (int s1 = 0; s1 < 8; ++s1)
        for (int s2 = 0; s2 < 8; ++s2) {
            AutGroup chained =
                pointwise_stabilizer(pointwise_stabilizer(ad8, Subset::of(d8, {s1})),
                                     Subset::of(d8, {s2}));
            AutGroup joined = pointwise_stabilizer(ad8, Subset::of(d8, {s1, s2}));
            REQUIRE(chained.size() == joined.size());
            for (std::size_t i = 0; i < chained.size(); ++i)
                CHECK(chained.elements[i].map == joined.elements[i].map);
        }
}

TEST_CASE("fixed subgroups") {
    FiniteGroup z2 = make_cyclic(2);
    AutGroup a2 = automorphism_group(z2);
    CHECK(a2.size() == 1); // Aut(Z2) = 1
    CHECK(fixed_subgroup(z2, a2).size() == 2);

    FiniteGroup z4 = make_cyclic(4);
    Subset fixed = fixed_subgroup(z4, automorphism_group(z4));
    CHECK(fixed.members() == std::vector<int>({0, 2}));

    // A = {identity} fixes everything.
    AutGroup trivial;
    trivial.parent = &z4;
    trivial.elements.push_back(Automorphism{&z4, {0, 1, 2, 3}});
    CHECK(fixed_subgroup(z4, trivial).size() == 4);
}

TEST_CASE("orbits") {
    FiniteGroup z6 = make_cyclic(6);
    AutGroup a = automorphism_group(z6);
    CHECK(orbit(a, 0).members() == std::vector<int>({0}));
    CHECK(orbit(a, 1).members() == std::vector<int>({1, 5}));
    CHECK(orbit(a, 1).size() == a.size());

    FiniteGroup z4 = make_cyclic(4);
    CHECK(orbit(automorphism_group(z4), 2).members() == std::vector<int>({2}));

    // Orbit sizes divide |Aut|.
    for (const auto& e : catalog_up_to(12)) {
        AutGroup ag = automorphism_group(e.group);
        for (int s = 0; s < e.group.order(); ++s)
            CHECK(ag.size() % orbit(ag, s).size() == 0);
    }
}

TEST_CASE("find_nonidentity_fixing agrees with stabilizer filtering") {
    for (const auto& e : catalog_up_to(12)) {
        AutGroup a = automorphism_group(e.group);
        for (int s = 0; s < e.group.order(); ++s) {
            bool trivial = pointwise_stabilizer(a, Subset::of(e.group, {s})).size() == 1;
            auto witness = find_nonidentity_fixing(e.group, Subset::of(e.group, {s}));
            CHECK(trivial == !witness.has_value());
            if (witness) {
                CHECK(witness->map[s] == s);
                CHECK(!witness->is_identity());
                CHECK(is_automorphism(e.group, witness->map));
            }
        }
    }
}

TEST_CASE("budget exhaustion raises") {
    CHECK_THROWS_AS(automorphism_group(make_abelian({2, 2, 2}), AutOptions{3}),
                    BudgetExceededError);
}

TEST_CASE("hillar-rhea closed form: pinned examples") {
    // p=2, e=[1,2]: i=1 term (2^1-1)*2^{1*1+0*2} = 2;
    //               i=2 term (2^2-2)*2^{0+1*1} = 4; product 8.
    CHECK(hillar_rhea_order(AbelianPShape(2, {1, 2})) == 8);
    CHECK(hillar_rhea_order(AbelianPShape(2, {1, 1})) == 6);
    CHECK(hillar_rhea_order(AbelianPShape(3, {1})) == 2);
    // |Aut(Z2 x Z_{2^f})| = 2^{f+1} for f = 2, 3, 4.
    for (int f = 2; f <= 4; ++f)
        CHECK(hillar_rhea_order(AbelianPShape(2, {1, f})) == ipow(2, f + 1));
    // GL_3(F_2) has order 168.
    CHECK(hillar_rhea_order(AbelianPShape(2, {1, 1, 1})) == 168);
}

TEST_CASE("hillar-rhea equals enumeration for p-groups of order <= 32") {
    for (long long p : {2LL, 3LL, 5LL, 7LL}) {
        std::vector<std::vector<int>> shapes;
        // Shapes with p^{sum e} <= 32.
        std::vector<std::vector<int>> stack = {{}};
        while (!stack.empty()) {
            std::vector<int> cur = stack.back();
            stack.pop_back();
            if (!cur.empty()) shapes.push_back(cur);
            long long order = 1;
            for (int e : cur)
                for (int i = 0; i < e; ++i) order *= p;
            int min_e = cur.empty() ? 1 : cur.back();
            for (int e = min_e;; ++e) {
                long long pe = 1;
                bool ok = true;
                for (int i = 0; i < e; ++i) {
                    pe *= p;
                    if (order * pe > 32) {
                        ok = false;
                        break;
                    }
                }
                if (!ok) break;
                auto next = cur;
                next.push_back(e);
                stack.push_back(next);
            }
        }
        for (const auto& exps : shapes) {
            AbelianPShape shape(p, exps);
            FiniteGroup g = make_abelian(shape.factors());
            CHECK(hillar_rhea_order(shape) == count_automorphisms(g, AutOptions{100'000'000}));
        }
    }
}

TEST_CASE("coprime factors multiply automorphism counts") {
    std::vector<FiniteGroup> groups;
    for (const auto& e : catalog_up_to(9)) groups.push_back(e.group);
    for (const auto& g1 : groups)
        for (const auto& g2 : groups) {
            if (g1.order() < 2 || g2.order() < 2) continue;
            if (std::gcd(g1.order(), g2.order()) != 1) continue;
            if (g1.order() * g2.order() > 40) continue;
            CHECK(count_automorphisms(direct_product(g1, g2)) ==
                  count_automorphisms(g1) * count_automorphisms(g2));
        }
}

TEST_CASE("AbelianPShape validation") {
    CHECK_THROWS_AS(AbelianPShape(4, {1}), Error);    // not prime
    CHECK_THROWS_AS(AbelianPShape(2, {}), Error);     // empty
    CHECK_THROWS_AS(AbelianPShape(2, {2, 1}), Error); // not sorted
    CHECK_THROWS_AS(AbelianPShape(2, {0}), Error);    // non-positive
    CHECK(AbelianPShape(2, {1, 2}).factors() == std::vector<int>({2, 4}));
}
