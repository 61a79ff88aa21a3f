#include "defcyc/suites.hpp"

#include "defcyc/catalog.hpp"
#include "defcyc/definability.hpp"
#include "defcyc/errors.hpp"
#include "defcyc/fgabelian.hpp"
#include "defcyc/version.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <functional>
#include <numeric>
#include <sstream>
#include <thread>

namespace defcyc {

namespace {

using CaseFn = std::function<CaseRecord()>;

struct PendingCase {
    std::string name;
    int order = 0;
    CaseFn fn;
};

CaseRecord pass_case(std::string witness = {}) {
    CaseRecord r;
    r.verdict = "pass";
    r.witness = std::move(witness);
    return r;
}

CaseRecord fail_case(std::string witness) {
    CaseRecord r;
    r.verdict = "fail";
    r.witness = std::move(witness);
    return r;
}

CaseRecord skip_case(std::string reason) {
    CaseRecord r;
    r.verdict = "skip";
    r.witness = std::move(reason);
    return r;
}

CaseRecord run_one(const PendingCase& pc) {
    auto start = std::chrono::steady_clock::now();
    CaseRecord rec;
    try {
        rec = pc.fn();
    } catch (const BudgetExceededError& e) {
        rec = skip_case(e.what());
    } catch (const Error& e) {
        rec = fail_case(e.what());
    }
    rec.name = pc.name;
    rec.order = pc.order;
    rec.millis = std::chrono::duration_cast<std::chrono::milliseconds>(
                     std::chrono::steady_clock::now() - start)
                     .count();
    return rec;
}

Report run_cases(std::string suite, std::vector<PendingCase> cases, int jobs) {
    Report r;
    r.suite = std::move(suite);
    r.version = kToolkitVersion;
    r.cases.resize(cases.size());
    if (jobs <= 1 || cases.size() <= 1) {
        for (std::size_t i = 0; i < cases.size(); ++i) r.cases[i] = run_one(cases[i]);
        return r;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= cases.size()) return;
            r.cases[i] = run_one(cases[i]);
        }
    };
    std::vector<std::thread> pool;
    int threads = std::min<int>(jobs, static_cast<int>(cases.size()));
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    return r;
}

std::string subset_names(const FiniteGroup& g, const Subset& s) {
    std::string out = "{";
    bool first = true;
    for (int m : s.members()) {
        if (!first) out += ", ";
        out += g.element_name(m);
        first = false;
    }
    return out + "}";
}

bool subset_is_abelian(const FiniteGroup& g, const Subset& s) {
    for (int a : s.members())
        for (int b : s.members())
            if (g.mul(a, b) != g.mul(b, a)) return false;
    return true;
}

// A subgroup given as a subset is cyclic iff one of its elements has order
// equal to the subset size.
bool subset_is_cyclic_subgroup(const FiniteGroup& g, const Subset& s) {
    for (int m : s.members())
        if (element_order(g, m) == static_cast<int>(s.size())) return true;
    return false;
}

std::string int_str(const Integer& v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

// --- thm2-1 ----------------------------------------------------------------

std::vector<PendingCase> build_thm21(const SuiteOptions& opts) {
    std::vector<PendingCase> cases;
    AutOptions aut{opts.aut_budget};
    for (const auto& entry : catalog_up_to(opts.max_order)) {
        FiniteGroup g = entry.group;
        cases.push_back({g.name(), g.order(), [g, aut]() {
            LogicalCyclicityVerdict v = is_logically_cyclic(g, aut);
            bool cyc = is_cyclic(g);
            if (v.is_logically_cyclic == cyc) return pass_case();
            if (v.is_logically_cyclic)
                return fail_case("logically cyclic but not cyclic; generators " +
                                 subset_names(g, v.generators));
            return fail_case("cyclic but no logical generator found");
        }});
    }
    // Direct-factor necessity over catalog product pairs: a logically
    // cyclic product forces both factors logically cyclic.
    auto small = catalog_up_to(std::min(opts.max_order, 15));
    for (std::size_t i = 0; i < small.size(); ++i)
        for (std::size_t j = i; j < small.size(); ++j) {
            const FiniteGroup& g1 = small[i].group;
            const FiniteGroup& g2 = small[j].group;
            if (g1.order() * g2.order() > opts.max_order) continue;
            if (g1.order() == 1 || g2.order() == 1) continue;
            FiniteGroup g1c = g1, g2c = g2;
            cases.push_back({g1.name() + "x" + g2.name() + " factors",
                             g1.order() * g2.order(), [g1c, g2c, aut]() {
                FiniteGroup p = direct_product(g1c, g2c);
                if (!is_logically_cyclic(p, aut).is_logically_cyclic) return pass_case();
                bool f1 = is_logically_cyclic(g1c, aut).is_logically_cyclic;
                bool f2 = is_logically_cyclic(g2c, aut).is_logically_cyclic;
                if (f1 && f2) return pass_case();
                return fail_case("product is logically cyclic but factor " +
                                 std::string(f1 ? g2c.name() : g1c.name()) + " is not");
            }});
        }
    return cases;
}

// --- prop1-4 ----------------------------------------------------------------

std::vector<PendingCase> build_prop14(const SuiteOptions& opts) {
    std::vector<PendingCase> cases;
    AutOptions aut{opts.aut_budget};
    for (const auto& entry : catalog_up_to(opts.max_order)) {
        FiniteGroup g = entry.group;
        cases.push_back({g.name(), g.order(), [g, aut]() {
            LogicalCyclicityVerdict v = is_logically_cyclic(g, aut);
            if (!v.is_logically_cyclic) return pass_case();
            if (is_abelian(g)) return pass_case();
            return fail_case("logically cyclic but non-abelian; generators " +
                             subset_names(g, v.generators));
        }});
    }
    return cases;
}

// --- def-abelian -------------------------------------------------------------

std::vector<PendingCase> build_def_abelian(const SuiteOptions& opts) {
    std::vector<PendingCase> cases;
    AutOptions aut{opts.aut_budget};
    for (const auto& entry : catalog_up_to(opts.max_order)) {
        FiniteGroup g = entry.group;
        cases.push_back({g.name(), g.order(), [g, aut]() {
            AutGroup a = automorphism_group(g, aut);
            for (int s = 0; s < g.order(); ++s) {
                AutGroup stab = pointwise_stabilizer(a, Subset::of(g, {s}));
                Subset clo = fixed_subgroup(g, stab);
                if (!clo.contains(s))
                    return fail_case("def_{" + g.element_name(s) + "} misses the parameter");
                if (!is_subgroup(g, clo))
                    return fail_case("def_{" + g.element_name(s) + "} = " +
                                     subset_names(g, clo) + " is not a subgroup");
                if (!subset_is_abelian(g, clo))
                    return fail_case("def_{" + g.element_name(s) + "} = " +
                                     subset_names(g, clo) + " is not abelian");
            }
            return pass_case();
        }});
    }
    return cases;
}

// --- orbit-law ---------------------------------------------------------------

std::vector<PendingCase> build_orbit_law(const SuiteOptions& opts) {
    std::vector<PendingCase> cases;
    AutOptions aut{opts.aut_budget};
    for (const auto& entry : catalog_up_to(opts.max_order)) {
        FiniteGroup g = entry.group;
        cases.push_back({g.name(), g.order(), [g, aut]() {
            AutGroup a = automorphism_group(g, aut);
            for (int s = 0; s < g.order(); ++s) {
                Subset orb = orbit(a, s);
                if (a.size() % orb.size() != 0)
                    return fail_case("orbit size " + std::to_string(orb.size()) +
                                     " of " + g.element_name(s) + " does not divide |Aut| = " +
                                     std::to_string(a.size()));
                bool generator = pointwise_stabilizer(a, Subset::of(g, {s})).size() == 1;
                if (generator && orb.size() != a.size())
                    return fail_case("logical generator " + g.element_name(s) +
                                     " has orbit " + std::to_string(orb.size()) +
                                     " != |Aut| = " + std::to_string(a.size()));
            }
            return pass_case();
        }});
    }
    return cases;
}

// --- aut-bound ---------------------------------------------------------------

std::vector<PendingCase> build_aut_bound(const SuiteOptions& opts) {
    std::vector<PendingCase> cases;
    AutOptions aut{opts.aut_budget};
    for (const auto& entry : catalog_up_to(opts.max_order)) {
        FiniteGroup g = entry.group;
        cases.push_back({g.name(), g.order(), [g, aut]() {
            if (!is_logically_cyclic(g, aut).is_logically_cyclic) return pass_case();
            Integer count = count_automorphisms(g, aut);
            if (count <= g.order()) return pass_case();
            return fail_case("logically cyclic but |Aut| = " + int_str(count) + " > |G| = " +
                             std::to_string(g.order()));
        }});
    }
    return cases;
}

// --- empty-params ------------------------------------------------------------

std::vector<PendingCase> build_empty_params(const SuiteOptions& opts) {
    std::vector<PendingCase> cases;
    AutOptions aut{opts.aut_budget};
    for (const auto& entry : catalog_up_to(opts.max_order)) {
        FiniteGroup g = entry.group;
        cases.push_back({g.name(), g.order(), [g, aut]() {
            DefinabilityResult r = definable_closure(g, Subset::empty_set(g), aut);
            bool all_definable = r.closure.size() == static_cast<std::size_t>(g.order());
            bool expected = g.order() <= 2;
            if (all_definable == expected) return pass_case();
            if (all_definable)
                return fail_case("def_{}(G) = G although |G| = " + std::to_string(g.order()));
            return fail_case("def_{}(G) = " + subset_names(g, r.closure) + " != G");
        }});
    }
    return cases;
}

// --- hillar-rhea -------------------------------------------------------------

void pshapes_rec(long long p, long long max_order, long long current, int min_e,
                 std::vector<int>& acc, std::vector<std::vector<int>>& out) {
    if (!acc.empty()) out.push_back(acc);
    for (int e = min_e;; ++e) {
        long long power = 1;
        bool fits = true;
        for (int i = 0; i < e; ++i) {
            power *= p;
            if (current * power > max_order) {
                fits = false;
                break;
            }
        }
        if (!fits) break;
        acc.push_back(e);
        pshapes_rec(p, max_order, current * power, e, acc, out);
        acc.pop_back();
    }
}

std::vector<PendingCase> build_hillar_rhea(const SuiteOptions& opts) {
    std::vector<PendingCase> cases;
    AutOptions aut{opts.aut_budget};
    const long long bound = std::min(opts.max_order, kMaxCatalogOrder);

    for (long long p : {2LL, 3LL, 5LL, 7LL}) {
        std::vector<std::vector<int>> shapes;
        std::vector<int> acc;
        pshapes_rec(p, bound, 1, 1, acc, shapes);
        for (const auto& exps : shapes) {
            AbelianPShape shape(p, exps);
            long long order = 1;
            for (int f : shape.factors()) order *= f;
            std::ostringstream name;
            name << "p=" << p << " e=[";
            for (std::size_t i = 0; i < exps.size(); ++i) name << (i ? "," : "") << exps[i];
            name << "]";
            cases.push_back({name.str(), static_cast<int>(order), [shape, aut]() {
                Integer closed = hillar_rhea_order(shape);
                if (closed > aut.node_budget)
                    return skip_case("predicted |Aut| = " + int_str(closed) +
                                     " exceeds node budget " + std::to_string(aut.node_budget));
                FiniteGroup g = make_abelian(shape.factors());
                Integer counted = count_automorphisms(g, aut);
                if (counted == closed) return pass_case();
                return fail_case("closed form " + int_str(closed) + " != enumerated " +
                                 int_str(counted));
            }});
        }
    }

    // |Aut(Z_2 x Z_{2^f})| = 2^{f+1}, f = 2, 3, 4.
    for (int f = 2; f <= 4; ++f) {
        cases.push_back({"Z2xZ" + std::to_string(1 << f) + " order = 2^" + std::to_string(f + 1),
                         2 << f, [f]() {
            Integer closed = hillar_rhea_order(AbelianPShape(2, {1, f}));
            Integer expected = ipow(2, f + 1);
            if (closed == expected) return pass_case();
            return fail_case("closed form " + int_str(closed) + " != 2^{f+1} = " +
                             int_str(expected));
        }});
    }

    // Coprime direct factors: Aut(G1 x G2) = Aut(G1) x Aut(G2).
    auto small = catalog_up_to(15);
    for (std::size_t i = 0; i < small.size(); ++i)
        for (std::size_t j = i; j < small.size(); ++j) {
            const FiniteGroup& g1 = small[i].group;
            const FiniteGroup& g2 = small[j].group;
            if (g1.order() < 2 || g2.order() < 2) continue;
            if (std::gcd(g1.order(), g2.order()) != 1) continue;
            if (g1.order() * g2.order() > bound) continue;
            FiniteGroup g1c = g1, g2c = g2;
            cases.push_back({"coprime " + g1.name() + "x" + g2.name(),
                             g1.order() * g2.order(), [g1c, g2c, aut]() {
                Integer left = count_automorphisms(direct_product(g1c, g2c), aut);
                Integer right = count_automorphisms(g1c, aut) * count_automorphisms(g2c, aut);
                if (left == right) return pass_case();
                return fail_case("|Aut(product)| = " + int_str(left) + " != " + int_str(right));
            }});
        }
    return cases;
}

// --- cayley-oracle -----------------------------------------------------------

std::vector<PendingCase> build_cayley_oracle(const SuiteOptions& opts) {
    std::vector<PendingCase> cases;
    AutOptions aut{opts.aut_budget};
    EvalOptions eval{opts.eval_budget};
    int bound = std::min(opts.max_order, 8);
    for (const auto& entry : catalog_up_to(bound)) {
        FiniteGroup g = entry.group;
        cases.push_back({g.name(), g.order(), [g, aut, eval]() {
            AutGroup a = automorphism_group(g, aut);
            const int n = g.order();
            for (unsigned mask = 0; mask < (1u << n); ++mask) {
                std::vector<int> members;
                for (int i = 0; i < n; ++i)
                    if (mask & (1u << i)) members.push_back(i);
                Subset s = Subset::of(g, members);
                AutGroup stab = pointwise_stabilizer(a, s);
                for (int target = 0; target < n; ++target) {
                    bool by_criterion = true;
                    for (const auto& alpha : stab.elements)
                        if (alpha.map[target] != target) {
                            by_criterion = false;
                            break;
                        }
                    FormulaPtr phi = cayley_formula(g, s, target);
                    bool by_formula = check_defines(g, *phi, target, {}, eval);
                    if (by_criterion != by_formula)
                        return fail_case("mismatch at S = " + subset_names(g, s) + ", g = " +
                                         g.element_name(target) + ": criterion " +
                                         (by_criterion ? "yes" : "no") + ", formula " +
                                         (by_formula ? "yes" : "no"));
                }
            }
            return pass_case();
        }});
    }
    return cases;
}

// --- d8-counterexample ---------------------------------------------------------

std::vector<PendingCase> build_d8(const SuiteOptions& opts) {
    AutOptions aut{opts.aut_budget};
    std::vector<PendingCase> cases;
    cases.push_back({"D8", 8, [aut]() {
        FiniteGroup g = make_dihedral(4);
        AutGroup a = automorphism_group(g, aut);
        for (int s = 0; s < g.order(); ++s) {
            AutGroup stab = pointwise_stabilizer(a, Subset::of(g, {s}));
            Subset clo = fixed_subgroup(g, stab);
            if (clo.size() >= 4 && subset_is_abelian(g, clo) &&
                !subset_is_cyclic_subgroup(g, clo)) {
                return pass_case("s = " + g.element_name(s) + ", def_{s} = " +
                                 subset_names(g, clo) + " (abelian, non-cyclic, size " +
                                 std::to_string(clo.size()) + ")");
            }
        }
        return fail_case("no s in D8 yields a non-cyclic abelian def_{s} of size >= 4");
    }});
    return cases;
}

// --- prop3-1 -------------------------------------------------------------------

FormulaPtr involution_shift_formula(long long u) {
    // forall y ((2y = 0 & y != 0) -> x = us + y)
    TermPtr y = Term::variable("y");
    FormulaPtr guard = Formula::conj({Formula::eq(Term::power(y, 2), Term::identity()),
                                      Formula::neq(y, Term::identity())});
    TermPtr rhs = Term::product(Term::power(Term::param("s"), u), y);
    return Formula::forall({"y"}, Formula::implies(guard, Formula::eq(Term::variable("x"), rhs)));
}

std::vector<PendingCase> build_prop31(const SuiteOptions&) {
    std::vector<PendingCase> cases;

    cases.push_back({"m=2 trivial stabilizer of (1,0)", 2, []() {
        FgAbelian g = FgAbelian::z_cross_zm(2);
        FgElement s = fg_element(g, {Rational(1)}, {Integer(0)});
        auto stab = stabilizer_in_aut(2, s);
        if (stab.size() == 1 && is_identity(stab[0]) && has_trivial_stabilizer(2, s))
            return pass_case();
        return fail_case("stabilizer of (1,0) in Aut(Z x Z_2) has size " +
                         std::to_string(stab.size()));
    }});

    cases.push_back({"m=2 formula defines (u,1), u in -5..5", 2, []() {
        FgAbelian g = FgAbelian::z_cross_zm(2);
        FgEnv env;
        env.params["s"] = fg_element(g, {Rational(1)}, {Integer(0)});
        for (long long u = -5; u <= 5; ++u) {
            FgElement target = fg_element(g, {Rational(u)}, {Integer(1)});
            if (!check_defines_guarded(g, *involution_shift_formula(u), target, env))
                return fail_case("formula with u = " + std::to_string(u) +
                                 " does not define (u,1)");
        }
        return pass_case();
    }});

    for (long long m = 3; m <= 12; ++m) {
        cases.push_back({"m=" + std::to_string(m) + " stabilizer grid", static_cast<int>(m),
                         [m]() {
            FgAbelian g = FgAbelian::z_cross_zm(m);
            long long total = 2 * m * euler_phi(m);
            auto all = enumerate_aut(m);
            if (static_cast<long long>(all.size()) != total)
                return fail_case("enumerated " + std::to_string(all.size()) +
                                 " automorphisms, expected " + std::to_string(total));
            for (long long u = 0; u < m; ++u)
                for (long long v = 0; v < m; ++v) {
                    FgElement s = fg_element(g, {Rational(u)}, {Integer(v)});
                    bool found = false;
                    for (const auto& f : stabilizer_in_aut(m, s))
                        if (!is_identity(f)) {
                            found = true;
                            break;
                        }
                    if (!found)
                        return fail_case("no nonidentity automorphism fixes (" +
                                         std::to_string(u) + "," + std::to_string(v) + ")");
                }
            return pass_case();
        }});
    }
    return cases;
}

// --- rationals -------------------------------------------------------------------

FormulaPtr rationals_formula(long long n, long long m) {
    // n x = m s
    return Formula::eq(Term::power(Term::variable("x"), n),
                       Term::power(Term::param("s"), m));
}

FormulaPtr q_z2_formula(long long n, long long m) {
    // forall y forall z ((2y = 0 & y != 0 & nz = ms) -> x = y + z)
    TermPtr y = Term::variable("y");
    TermPtr z = Term::variable("z");
    FormulaPtr guard = Formula::conj({Formula::eq(Term::power(y, 2), Term::identity()),
                                      Formula::neq(y, Term::identity()),
                                      Formula::eq(Term::power(z, n),
                                                  Term::power(Term::param("s"), m))});
    FormulaPtr matrix = Formula::eq(Term::variable("x"), Term::product(y, z));
    return Formula::forall({"y"}, Formula::forall({"z"}, Formula::implies(guard, matrix)));
}

std::vector<PendingCase> build_rationals(const SuiteOptions&) {
    std::vector<PendingCase> cases;
    for (long long n = 1; n <= 20; ++n) {
        cases.push_back({"Q: nx=ms defines m/n, n=" + std::to_string(n), static_cast<int>(n),
                         [n]() {
            FgAbelian q = FgAbelian::rationals();
            FgEnv env;
            env.params["s"] = fg_element(q, {Rational(1)}, {});
            for (long long m = -20; m <= 20; ++m) {
                if (std::gcd(std::abs(m), n) != 1) continue;
                FgElement target = fg_element(q, {Rational(m, n)}, {});
                if (!check_defines_guarded(q, *rationals_formula(n, m), target, env))
                    return fail_case("nx=ms fails at m/n = " + std::to_string(m) + "/" +
                                     std::to_string(n));
            }
            return pass_case();
        }});
    }
    for (long long n = 1; n <= 20; ++n) {
        cases.push_back({"QxZ2: two-guard formula defines (m/n,1), n=" + std::to_string(n),
                         static_cast<int>(n), [n]() {
            FgAbelian q2 = FgAbelian::rationals_cross_z2();
            FgEnv env;
            env.params["s"] = fg_element(q2, {Rational(1)}, {Integer(0)});
            for (long long m = -20; m <= 20; ++m) {
                if (std::gcd(std::abs(m), n) != 1) continue;
                FgElement target = fg_element(q2, {Rational(m, n)}, {Integer(1)});
                if (!check_defines_guarded(q2, *q_z2_formula(n, m), target, env))
                    return fail_case("two-guard formula fails at m/n = " + std::to_string(m) +
                                     "/" + std::to_string(n));
            }
            return pass_case();
        }});
    }
    return cases;
}

} // namespace

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = {
        "thm2-1",      "prop1-4",       "def-abelian",       "orbit-law",
        "aut-bound",   "empty-params",  "hillar-rhea",       "cayley-oracle",
        "d8-counterexample", "prop3-1", "rationals"};
    return names;
}

bool is_suite_name(const std::string& name) {
    const auto& names = suite_names();
    return std::find(names.begin(), names.end(), name) != names.end();
}

Report run_suite(const std::string& name, const SuiteOptions& opts) {
    std::vector<PendingCase> cases;
    if (name == "thm2-1") cases = build_thm21(opts);
    else if (name == "prop1-4") cases = build_prop14(opts);
    else if (name == "def-abelian") cases = build_def_abelian(opts);
    else if (name == "orbit-law") cases = build_orbit_law(opts);
    else if (name == "aut-bound") cases = build_aut_bound(opts);
    else if (name == "empty-params") cases = build_empty_params(opts);
    else if (name == "hillar-rhea") cases = build_hillar_rhea(opts);
    else if (name == "cayley-oracle") cases = build_cayley_oracle(opts);
    else if (name == "d8-counterexample") cases = build_d8(opts);
    else if (name == "prop3-1") cases = build_prop31(opts);
    else if (name == "rationals") cases = build_rationals(opts);
    else throw Error("unknown suite '" + name + "'");
    return run_cases(name, std::move(cases), opts.jobs);
}

} // namespace defcyc
