#include <doctest.h>

#include "defcyc/errors.hpp"
#include "defcyc/fgabelian.hpp"
#include "defcyc/snf.hpp"

#include <algorithm>
#include <random>
#include <set>

using namespace defcyc;

namespace {

FgElement zxz(const FgAbelian& g, long long u, long long v) {
    return fg_element(g, {Rational(u)}, {Integer(v)});
}

// Brute-force congruence oracle.
std::vector<Integer> congruence_oracle(const std::vector<Integer>& coeffs,
                                       const std::vector<Integer>& rhs, long long m) {
    std::vector<Integer> out;
    for (long long t = 0; t < m; ++t) {
        bool ok = true;
        for (std::size_t k = 0; k < coeffs.size(); ++k)
            if (mod_floor(coeffs[k] * t - rhs[k], m) != 0) {
                ok = false;
                break;
            }
        if (ok) out.push_back(t);
    }
    return out;
}

} // namespace

TEST_CASE("fg ambient construction and validation") {
    CHECK(FgAbelian::z_cross_zm(4).to_string() == "Z x Z4");
    CHECK(FgAbelian::rationals().to_string() == "Q");
    CHECK(FgAbelian::rationals_cross_z2().to_string() == "Q x Z2");
    CHECK_THROWS_AS(FgAbelian::fg(1, {Integer(2), Integer(3)}), Error); // 2 does not divide 3
    CHECK_NOTHROW(FgAbelian::fg(0, {Integer(2), Integer(4), Integer(8)}));
    CHECK_THROWS_AS(FgAbelian::fg(-1, {}), Error);
    CHECK_THROWS_AS(FgAbelian::z_cross_zm(1), Error);
}

TEST_CASE("element arithmetic reduces torsion coordinates") {
    FgAbelian g = FgAbelian::z_cross_zm(4);
    FgElement a = zxz(g, 3, 3);
    FgElement b = zxz(g, -1, 2);
    FgElement sum = fg_add(g, a, b);
    CHECK(sum == zxz(g, 2, 1));
    CHECK(fg_neg(g, a) == zxz(g, -3, 1));
    CHECK(fg_scale(g, 3, a) == zxz(g, 9, 1));
    CHECK(fg_is_zero(fg_add(g, a, fg_neg(g, a))));
    CHECK(fg_to_string(g, sum) == "(2, 1 mod 4)");

    FgAbelian q = FgAbelian::rationals();
    CHECK(fg_to_string(q, fg_element(q, {Rational(3, 2)}, {})) == "3/2");
    // Integer ambients refuse fractional coordinates.
    CHECK_THROWS_AS(fg_element(g, {Rational(1, 2)}, {Integer(0)}), ShapeMismatchError);
}

TEST_CASE("endomorphism matrices: apply, compose, identity") {
    FgAbelian g5 = FgAbelian::z_cross_zm(5);
    EndoMatrix id(5, 1, 0, 1);
    CHECK(is_identity(id));
    for (long long u = -2; u <= 2; ++u)
        for (long long v = 0; v < 5; ++v) CHECK(endo_apply(id, zxz(g5, u, v)) == zxz(g5, u, v));

    // m=5, M=(n=1, b=2, a=2) fixes (2,1): 2*2 + 2*1 = 6 = 1 mod 5.
    EndoMatrix m522(5, 1, 2, 2);
    CHECK(endo_apply(m522, zxz(g5, 2, 1)) == zxz(g5, 2, 1));
    CHECK(!is_identity(m522));
    CHECK(is_automorphism(m522));

    // m=4, M=(1, b=2, a=1) fixes (2, v) for every v.
    FgAbelian g4 = FgAbelian::z_cross_zm(4);
    EndoMatrix m421(4, 1, 2, 1);
    for (long long v = 0; v < 4; ++v) CHECK(endo_apply(m421, zxz(g4, 2, v)) == zxz(g4, 2, v));

    // Composition is the matrix product with mixed-modulus bookkeeping.
    EndoMatrix f(6, 1, 2, 5), h(6, -1, 3, 1);
    FgAbelian g6 = FgAbelian::z_cross_zm(6);
    for (long long u = -3; u <= 3; ++u)
        for (long long v = 0; v < 6; ++v)
            CHECK(endo_apply(endo_compose(f, h), zxz(g6, u, v)) ==
                  endo_apply(f, endo_apply(h, zxz(g6, u, v))));

    CHECK_THROWS_AS(endo_compose(f, m421), ShapeMismatchError);
    CHECK_THROWS_AS(endo_apply(f, fg_element(FgAbelian::rationals(), {Rational(1)}, {})),
                    ShapeMismatchError);
}

TEST_CASE("is_automorphism iff n = +-1 and gcd(a, m) = 1") {
    CHECK(!is_automorphism(EndoMatrix(4, 2, 0, 1)));  // n = 2
    CHECK(!is_automorphism(EndoMatrix(4, 1, 0, 2)));  // gcd(2,4) = 2
    CHECK(is_automorphism(EndoMatrix(4, -1, 3, 3)));
    // identity iff a = 1 and m | b (n = 1).
    CHECK(is_identity(EndoMatrix(4, 1, 4, 1)));
    CHECK(!is_identity(EndoMatrix(4, 1, 2, 1)));
}

TEST_CASE("enumerate_aut: count, canonical order, closure") {
    CHECK(enumerate_aut(2).size() == 4);  // 2 * 2 * phi(2)
    CHECK(enumerate_aut(3).size() == 12); // 2 * 3 * phi(3)
    for (long long m = 1; m <= 12; ++m) {
        auto all = enumerate_aut(m);
        CHECK(static_cast<long long>(all.size()) == 2 * m * euler_phi(m));

        // identity present; first element is (n=1, a=... , b=...) with n=+1 first.
        CHECK(all.front().n == 1);
        bool has_id = false;
        for (const auto& f : all) has_id |= is_identity(f);
        CHECK(has_id);

        // lexicographic on (n, a, b) with +1 before -1
        auto key = [](const EndoMatrix& f) {
            return std::make_tuple(f.n == 1 ? 0 : 1, f.a, f.b);
        };
        for (std::size_t i = 1; i < all.size(); ++i) CHECK(key(all[i - 1]) < key(all[i]));

        // closed under composition and inverses
        if (m <= 6) {
            auto find = [&](const EndoMatrix& f) {
                return std::find(all.begin(), all.end(), f) != all.end();
            };
            for (const auto& f : all) {
                bool has_inverse = false;
                for (const auto& h : all) {
                    CHECK(find(endo_compose(f, h)));
                    if (is_identity(endo_compose(f, h)) && is_identity(endo_compose(h, f)))
                        has_inverse = true;
                }
                CHECK(has_inverse);
            }
        }
    }
}

TEST_CASE("stabilizers in Aut(Z x Z_m)") {
    FgAbelian g2 = FgAbelian::z_cross_zm(2);
    auto stab = stabilizer_in_aut(2, zxz(g2, 1, 0));
    REQUIRE(stab.size() == 1);
    CHECK(is_identity(stab[0]));
    CHECK(has_trivial_stabilizer(2, zxz(g2, 1, 0)));

    FgAbelian g5 = FgAbelian::z_cross_zm(5);
    auto s5 = stabilizer_in_aut(5, zxz(g5, 2, 1));
    bool contains_122 = false;
    for (const auto& f : s5)
        if (f.n == 1 && f.b == 2 && f.a == 2) contains_122 = true;
    CHECK(contains_122);
    CHECK(!has_trivial_stabilizer(5, zxz(g5, 2, 1)));

    FgAbelian g4 = FgAbelian::z_cross_zm(4);
    auto s4 = stabilizer_in_aut(4, zxz(g4, 2, 3));
    bool contains_b2a1 = false;
    for (const auto& f : s4)
        if (f.n == 1 && f.b == 2 && f.a == 1) contains_b2a1 = true;
    CHECK(contains_b2a1);
    CHECK(!has_trivial_stabilizer(4, zxz(g4, 2, 3)));
}

TEST_CASE("no trivial stabilizers in Aut(Z x Z_m) for m in 3..12") {
    for (long long m = 3; m <= 12; ++m) {
        FgAbelian g = FgAbelian::z_cross_zm(m);
        for (long long u = 0; u < m; ++u)
            for (long long v = 0; v < m; ++v) CHECK(!has_trivial_stabilizer(m, zxz(g, u, v)));
    }
}

TEST_CASE("snf: pinned examples") {
    SnfResult r1 = snf(identity_matrix(3));
    CHECK(r1.d == identity_matrix(3));

    SnfResult r2 = snf({{Integer(2), Integer(4)}, {Integer(6), Integer(8)}});
    CHECK(r2.d[0][0] == 2);
    CHECK(r2.d[1][1] == 4);
    CHECK(r2.d[0][1] == 0);
    CHECK(r2.d[1][0] == 0);

    SnfResult r3 = snf({{Integer(0)}});
    CHECK(r3.d[0][0] == 0);

    SnfResult r4 = snf(IntMat{});
    CHECK(r4.d.empty());
}

TEST_CASE("snf postconditions on random matrices") {
    std::mt19937 rng(1729);
    std::uniform_int_distribution<int> dim(1, 5), entry(-50, 50);
    for (int rep = 0; rep < 300; ++rep) {
        int r = dim(rng), c = dim(rng);
        IntMat a(r, std::vector<Integer>(c));
        for (auto& row : a)
            for (auto& x : row) x = entry(rng);
        // snf() re-verifies U*A*V = D, the divisibility chain, and
        // unimodularity internally and throws on any violation.
        SnfResult res = snf(a);
        CHECK(mat_mul(mat_mul(res.u, a), res.v) == res.d);
        Integer du = determinant(res.u), dv = determinant(res.v);
        CHECK((du == 1 || du == -1));
        CHECK((dv == 1 || dv == -1));
        for (int i = 0; i + 1 < std::min(r, c); ++i)
            if (res.d[i][i] != 0) CHECK(res.d[i + 1][i + 1] % res.d[i][i] == 0);
    }
}

TEST_CASE("congruence solving via snf matches brute force") {
    std::mt19937 rng(8128);
    std::uniform_int_distribution<int> mod(1, 30), coeff(-12, 12), count(0, 3);
    for (int rep = 0; rep < 400; ++rep) {
        long long m = mod(rng);
        int k = count(rng);
        std::vector<Integer> cs, vs;
        for (int i = 0; i < k; ++i) {
            cs.push_back(coeff(rng));
            vs.push_back(coeff(rng));
        }
        auto got = congruence_solutions(cs, vs, m);
        auto expected = congruence_oracle(cs, vs, m);
        CHECK(got == expected);
    }
}

TEST_CASE("guard_solutions: pinned examples") {
    // Z x Z_2, "2y = 0 & y != 0" -> exactly (0, 1).
    FgAbelian g = FgAbelian::z_cross_zm(2);
    FormulaPtr guard = parse_formula("2y = 0 & y != 0", Dialect::Additive, {});
    GuardSolutions s = guard_solutions(g, *guard, "y");
    CHECK(!s.infinite);
    REQUIRE(s.values.size() == 1);
    CHECK(s.values[0] == zxz(g, 0, 1));

    // Q, "3y = 2s" with s = 1 -> {2/3}.
    FgAbelian q = FgAbelian::rationals();
    FgEnv env;
    env.params["s"] = fg_element(q, {Rational(1)}, {});
    FormulaPtr g2 = parse_formula("3y = 2s", Dialect::Additive, {"s"});
    GuardSolutions sq = guard_solutions(q, *g2, "y", env);
    CHECK(!sq.infinite);
    REQUIRE(sq.values.size() == 1);
    CHECK(sq.values[0].free_coords[0] == Rational(2, 3));

    // Z x Z_2, "y != 0" -> infinite.
    GuardSolutions si =
        guard_solutions(g, *parse_formula("y != 0", Dialect::Additive, {}), "y");
    CHECK(si.infinite);

    // Integer ambient: "2y = s" with s = (1,0) has no solution.
    FgEnv env2;
    env2.params["s"] = zxz(g, 1, 0);
    GuardSolutions none =
        guard_solutions(g, *parse_formula("2y = 1s", Dialect::Additive, {"s"}), "y", env2);
    CHECK(!none.infinite);
    CHECK(none.values.empty());

    // Degenerate negation "y != y" empties the set even over Q.
    GuardSolutions empty =
        guard_solutions(q, *parse_formula("y != y", Dialect::Additive, {}), "y");
    CHECK(!empty.infinite);
    CHECK(empty.values.empty());

    // Structural misuse raises NonlinearGuard.
    CHECK_THROWS_AS(guard_solutions(g, *parse_formula("y = 0 | y != 0", Dialect::Additive, {}),
                                    "y"),
                    NonlinearGuardError);
}

TEST_CASE("guard_solutions agrees with brute force on random guards") {
    std::mt19937 rng(55);
    std::uniform_int_distribution<int> mod(2, 9), small(-3, 3), pick(0, 9), box(-10, 10);
    for (int rep = 0; rep < 300; ++rep) {
        long long m = mod(rng);
        FgAbelian g = FgAbelian::z_cross_zm(m);
        // Solutions provably live in the box: include one pinned positive
        // atom c*y = c*y0 with c != 0 and y0 inside the box.
        long long c0 = 0;
        while (c0 == 0) c0 = small(rng);
        long long u0 = box(rng);
        long long v0 = rng() % m;
        std::vector<FormulaPtr> conjuncts;
        FgEnv env;
        env.params["p0"] = fg_element(g, {Rational(c0 * u0)}, {Integer(c0 * v0)});
        conjuncts.push_back(Formula::eq(Term::power(Term::variable("y"), c0), Term::param("p0")));
        int extra = pick(rng) % 3;
        for (int i = 0; i < extra; ++i) {
            long long c = small(rng);
            std::string name = "p" + std::to_string(i + 1);
            env.params[name] =
                fg_element(g, {Rational(small(rng))}, {Integer(rng() % m)});
            FormulaPtr atom =
                Formula::eq(Term::power(Term::variable("y"), c), Term::param(name));
            conjuncts.push_back(pick(rng) % 2 ? atom
                                              : Formula::negate(atom));
        }
        GuardSolutions got = guard_solutions(g, *Formula::conj(conjuncts), "y", env);
        REQUIRE(!got.infinite);

        std::vector<FgElement> expected;
        for (long long u = -10; u <= 10; ++u)
            for (long long v = 0; v < m; ++v) {
                FgElement cand = zxz(g, u, v);
                FgEnv probe = env;
                probe.vars["y"] = cand;
                bool sat = true;
                for (const auto& cj : conjuncts)
                    if (!evaluate_guarded(g, *cj, probe)) {
                        sat = false;
                        break;
                    }
                if (sat) expected.push_back(cand);
            }
        std::sort(expected.begin(), expected.end());
        CHECK(got.values == expected);
    }
}

TEST_CASE("evaluate_guarded: pinned examples") {
    // Z x Z_2: forall y ((2y=0 & y!=0) -> x = 3s + y) holds at x = (3,1).
    FgAbelian g = FgAbelian::z_cross_zm(2);
    FgEnv env;
    env.params["s"] = zxz(g, 1, 0);
    FormulaPtr f =
        parse_formula("forall y ((2y = 0 & y != 0) -> x = 3s + y)", Dialect::Additive, {"s"});
    env.vars["x"] = zxz(g, 3, 1);
    CHECK(evaluate_guarded(g, *f, env));
    env.vars["x"] = zxz(g, 3, 0);
    CHECK(!evaluate_guarded(g, *f, env));

    // Unguarded universal is refused.
    FormulaPtr bad = parse_formula("forall y (y = y)", Dialect::Additive, {});
    CHECK_THROWS_AS(evaluate_guarded(g, *bad, env), UnguardedQuantifierError);

    // Existential blocks solve their equations.
    FormulaPtr ex = parse_formula("exists y (2y = 0 & y != 0 & x = 3s + y)",
                                  Dialect::Additive, {"s"});
    env.vars["x"] = zxz(g, 3, 1);
    CHECK(evaluate_guarded(g, *ex, env));
    env.vars["x"] = zxz(g, 2, 1);
    CHECK(!evaluate_guarded(g, *ex, env));
}

TEST_CASE("check_defines_guarded: guarded-shift formula over Z x Z_2") {
    FgAbelian g = FgAbelian::z_cross_zm(2);
    FgEnv env;
    env.params["s"] = zxz(g, 1, 0);
    for (long long u = -5; u <= 5; ++u) {
        std::string text = "forall y ((2y = 0 & y != 0) -> x = " + std::to_string(u) + "s + y)";
        FormulaPtr f = parse_formula(text, Dialect::Additive, {"s"});
        CHECK(check_defines_guarded(g, *f, zxz(g, u, 1), env));
        CHECK(!check_defines_guarded(g, *f, zxz(g, u, 0), env));
    }
}

TEST_CASE("check_defines_guarded: rationals") {
    FgAbelian q = FgAbelian::rationals();
    FgEnv env;
    env.params["s"] = fg_element(q, {Rational(1)}, {});
    // 2x = 4s defines 2.
    FormulaPtr f = parse_formula("2x = 4s", Dialect::Additive, {"s"});
    CHECK(check_defines_guarded(q, *f, fg_element(q, {Rational(2)}, {}), env));
    CHECK(!check_defines_guarded(q, *f, fg_element(q, {Rational(1)}, {}), env));

    // nx = ms defines m/n across the reduced grid.
    for (long long n = 1; n <= 20; ++n)
        for (long long m = -20; m <= 20; ++m) {
            if (std::gcd(std::abs(m), n) != 1) continue;
            FormulaPtr nm = Formula::eq(Term::power(Term::variable("x"), n),
                                        Term::power(Term::param("s"), m));
            CHECK(check_defines_guarded(q, *nm, fg_element(q, {Rational(m, n)}, {}), env));
        }
}

TEST_CASE("Q x Z_2 two-guard formula: odd denominators define, even define nothing") {
    FgAbelian q2 = FgAbelian::rationals_cross_z2();
    FgEnv env;
    env.params["s"] = fg_element(q2, {Rational(1)}, {Integer(0)});
    auto formula = [&](long long n, long long m) {
        TermPtr y = Term::variable("y"), z = Term::variable("z");
        FormulaPtr guard = Formula::conj(
            {Formula::eq(Term::power(y, 2), Term::identity()), Formula::neq(y, Term::identity()),
             Formula::eq(Term::power(z, n), Term::power(Term::param("s"), m))});
        return Formula::forall(
            {"y"}, Formula::forall({"z"}, Formula::implies(guard, Formula::eq(Term::variable("x"),
                                                                              Term::product(y, z)))));
    };

    // Spec example instance n=2, m=3: the guard admits z = (3/2, 0) and
    // (3/2, 1), so x would have to equal two distinct values; the formula
    // defines the empty set rather than (3/2, 1).
    GuardedSolutionSet s23 = guarded_solution_set(q2, *formula(2, 3), "x", env);
    CHECK(!s23.infinite);
    CHECK(s23.values.empty());
    CHECK(!check_defines_guarded(q2, *formula(2, 3), fg_element(q2, {Rational(3, 2)}, {Integer(1)}),
                                 env));

    for (long long n = 1; n <= 9; ++n)
        for (long long m = -9; m <= 9; ++m) {
            if (std::gcd(std::abs(m), n) != 1) continue;
            FgElement target = fg_element(q2, {Rational(m, n)}, {Integer(1)});
            bool defines = check_defines_guarded(q2, *formula(n, m), target, env);
            if (n % 2 == 1) {
                CHECK(defines);
            } else {
                CHECK(!defines);
                GuardedSolutionSet sols = guarded_solution_set(q2, *formula(n, m), "x", env);
                CHECK(!sols.infinite);
                CHECK(sols.values.empty());
            }
        }
}

TEST_CASE("guarded solution sets on finite (rank 0) ambients enumerate exactly") {
    FgAbelian g = FgAbelian::fg(0, {Integer(2), Integer(4)});
    FormulaPtr f = parse_formula("2x = 0", Dialect::Additive, {});
    GuardedSolutionSet sols = guarded_solution_set(g, *f, "x");
    CHECK(!sols.infinite);
    CHECK(sols.values.size() == 4); // (0|1, 0|2)
}

TEST_CASE("vacuous universal guards leave the solution set infinite") {
    FgAbelian g = FgAbelian::z_cross_zm(3);
    FgEnv env;
    env.params["s"] = zxz(g, 1, 0);
    // No element of order 2 exists in Z x Z_3, so the guard is empty and
    // every x satisfies the implication.
    FormulaPtr f =
        parse_formula("forall y ((2y = 0 & y != 0) -> x = 1s + y)", Dialect::Additive, {"s"});
    GuardedSolutionSet sols = guarded_solution_set(g, *f, "x", env);
    CHECK(sols.infinite);
    CHECK(!check_defines_guarded(g, *f, zxz(g, 1, 1), env));
}
