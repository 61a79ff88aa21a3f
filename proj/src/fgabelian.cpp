#include "defcyc/fgabelian.hpp"

#include "defcyc/errors.hpp"
#include "defcyc/snf.hpp"

#include <algorithm>
#include <sstream>

namespace defcyc {

namespace {

Integer gcd_int(Integer a, Integer b) {
    using boost::multiprecision::gcd;
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    return gcd(a, b);
}

} // namespace

FgAbelian FgAbelian::fg(int free_rank, std::vector<Integer> torsion) {
    if (free_rank < 0) throw Error("FgAbelian: negative free rank");
    for (std::size_t i = 0; i < torsion.size(); ++i) {
        if (torsion[i] < 2) throw Error("FgAbelian: torsion moduli must be >= 2");
        if (i && torsion[i] % torsion[i - 1] != 0)
            throw Error("FgAbelian: invariant factors must form a divisibility chain");
    }
    FgAbelian g;
    g.free_kind = FreeKind::Ints;
    g.free_rank = free_rank;
    g.torsion = std::move(torsion);
    return g;
}

FgAbelian FgAbelian::z_cross_zm(const Integer& m) {
    if (m < 2) throw Error("z_cross_zm: modulus must be >= 2");
    return fg(1, {m});
}

FgAbelian FgAbelian::rationals() {
    FgAbelian g;
    g.free_kind = FreeKind::Rationals;
    g.free_rank = 1;
    return g;
}

FgAbelian FgAbelian::rationals_cross_z2() {
    FgAbelian g;
    g.free_kind = FreeKind::Rationals;
    g.free_rank = 1;
    g.torsion = {2};
    return g;
}

std::string FgAbelian::to_string() const {
    std::string out;
    for (int i = 0; i < free_rank; ++i)
        out += (out.empty() ? "" : " x ") + std::string(free_kind == FreeKind::Ints ? "Z" : "Q");
    for (const auto& m : torsion) {
        std::ostringstream os;
        os << m;
        out += (out.empty() ? "Z" : " x Z") + os.str();
    }
    return out.empty() ? "0" : out;
}

bool FgElement::operator<(const FgElement& o) const {
    if (free_coords != o.free_coords) return free_coords < o.free_coords;
    return torsion_coords < o.torsion_coords;
}

FgElement fg_element(const FgAbelian& g, std::vector<Rational> free_coords,
                     std::vector<Integer> torsion_coords) {
    if (static_cast<int>(free_coords.size()) != g.free_rank)
        throw ShapeMismatchError("element has wrong free rank");
    if (torsion_coords.size() != g.torsion.size())
        throw ShapeMismatchError("element has wrong torsion length");
    if (g.free_kind == FgAbelian::FreeKind::Ints)
        for (const auto& q : free_coords)
            if (denominator(q) != 1)
                throw ShapeMismatchError("non-integral coordinate in an integer ambient");
    for (std::size_t i = 0; i < torsion_coords.size(); ++i)
        torsion_coords[i] = mod_floor(torsion_coords[i], g.torsion[i]);
    return FgElement{std::move(free_coords), std::move(torsion_coords)};
}

FgElement fg_zero(const FgAbelian& g) {
    return FgElement{std::vector<Rational>(g.free_rank, Rational(0)),
                     std::vector<Integer>(g.torsion.size(), Integer(0))};
}

FgElement fg_add(const FgAbelian& g, const FgElement& a, const FgElement& b) {
    FgElement c = a;
    for (int i = 0; i < g.free_rank; ++i) c.free_coords[i] += b.free_coords[i];
    for (std::size_t i = 0; i < g.torsion.size(); ++i)
        c.torsion_coords[i] = mod_floor(c.torsion_coords[i] + b.torsion_coords[i], g.torsion[i]);
    return c;
}

FgElement fg_neg(const FgAbelian& g, const FgElement& a) {
    FgElement c = a;
    for (int i = 0; i < g.free_rank; ++i) c.free_coords[i] = -c.free_coords[i];
    for (std::size_t i = 0; i < g.torsion.size(); ++i)
        c.torsion_coords[i] = mod_floor(-c.torsion_coords[i], g.torsion[i]);
    return c;
}

FgElement fg_scale(const FgAbelian& g, const Integer& k, const FgElement& a) {
    FgElement c = a;
    for (int i = 0; i < g.free_rank; ++i) c.free_coords[i] *= Rational(k);
    for (std::size_t i = 0; i < g.torsion.size(); ++i)
        c.torsion_coords[i] = mod_floor(k * c.torsion_coords[i], g.torsion[i]);
    return c;
}

bool fg_is_zero(const FgElement& a) {
    for (const auto& q : a.free_coords)
        if (q != 0) return false;
    for (const auto& t : a.torsion_coords)
        if (t != 0) return false;
    return true;
}

std::string fg_to_string(const FgAbelian& g, const FgElement& a) {
    std::ostringstream os;
    bool tuple = g.free_rank + static_cast<int>(g.torsion.size()) > 1;
    if (tuple) os << "(";
    bool first = true;
    for (int i = 0; i < g.free_rank; ++i) {
        if (!first) os << ", ";
        os << a.free_coords[i];
        first = false;
    }
    for (std::size_t i = 0; i < g.torsion.size(); ++i) {
        if (!first) os << ", ";
        os << a.torsion_coords[i] << " mod " << g.torsion[i];
        first = false;
    }
    if (tuple) os << ")";
    return os.str();
}

// --- Endomorphisms of Z x Z_m ------------------------------------------

EndoMatrix::EndoMatrix(Integer m_, Integer n_, Integer b_, Integer a_)
    : m(std::move(m_)), n(std::move(n_)) {
    if (m < 1) throw Error("EndoMatrix: modulus must be >= 1");
    b = mod_floor(b_, m);
    a = mod_floor(a_, m);
}

FgElement endo_apply(const EndoMatrix& f, const FgElement& x) {
    if (x.free_coords.size() != 1 || x.torsion_coords.size() != 1)
        throw ShapeMismatchError("endo_apply: element is not of shape Z x Z_m");
    if (denominator(x.free_coords[0]) != 1)
        throw ShapeMismatchError("endo_apply: non-integral free coordinate");
    if (x.torsion_coords[0] < 0 || x.torsion_coords[0] >= f.m)
        throw ShapeMismatchError("endo_apply: torsion coordinate outside Z_m");
    Integer u = numerator(x.free_coords[0]);
    Integer v = x.torsion_coords[0];
    FgElement out;
    out.free_coords = {Rational(f.n * u)};
    out.torsion_coords = {mod_floor(f.b * u + f.a * v, f.m)};
    return out;
}

EndoMatrix endo_compose(const EndoMatrix& f, const EndoMatrix& g) {
    if (f.m != g.m) throw ShapeMismatchError("endo_compose: different moduli");
    // [[n1,0],[b1,a1]] * [[n2,0],[b2,a2]] = [[n1 n2, 0], [b1 n2 + a1 b2, a1 a2]]
    return EndoMatrix(f.m, f.n * g.n, f.b * g.n + f.a * g.b, f.a * g.a);
}

bool is_automorphism(const EndoMatrix& f) {
    if (f.n != 1 && f.n != -1) return false;
    return gcd_int(f.a, f.m) == 1;
}

bool is_identity(const EndoMatrix& f) {
    return f.n == 1 && f.b == 0 && f.a == mod_floor(1, f.m);
}

std::vector<EndoMatrix> enumerate_aut(const Integer& m) {
    if (m < 1) throw Error("enumerate_aut: modulus must be >= 1");
    if (m > 100000) throw ScaleGuardError("enumerate_aut: modulus too large to enumerate");
    std::vector<EndoMatrix> out;
    for (int sign = 0; sign < 2; ++sign) {
        Integer n = sign == 0 ? 1 : -1;
        for (Integer a = 0; a < m; ++a) {
            if (gcd_int(a, m) != 1) continue;
            for (Integer b = 0; b < m; ++b) out.emplace_back(m, n, b, a);
        }
    }
    return out;
}

std::vector<EndoMatrix> stabilizer_in_aut(const Integer& m, const FgElement& s) {
    std::vector<EndoMatrix> out;
    for (const auto& f : enumerate_aut(m))
        if (endo_apply(f, s) == s) out.push_back(f);
    return out;
}

bool has_trivial_stabilizer(const Integer& m, const FgElement& s) {
    for (const auto& f : stabilizer_in_aut(m, s))
        if (!is_identity(f)) return false;
    return true;
}

// --- Congruence systems via Smith normal form ----------------------------

std::vector<Integer> congruence_solutions(const std::vector<Integer>& coeffs,
                                          const std::vector<Integer>& rhs, const Integer& m) {
    if (m < 1) throw Error("congruence_solutions: modulus must be >= 1");
    if (coeffs.size() != rhs.size()) throw Error("congruence_solutions: length mismatch");
    if (m == 1) return {Integer(0)};
    const int k = static_cast<int>(coeffs.size());
    if (k == 0) {
        std::vector<Integer> all;
        for (Integer t = 0; t < m; ++t) all.push_back(t);
        return all;
    }

    // Unknowns (t, u_1..u_k): row i reads coeffs[i]*t + m*u_i = rhs[i].
    IntMat a(k, std::vector<Integer>(k + 1, 0));
    for (int i = 0; i < k; ++i) {
        a[i][0] = coeffs[i];
        a[i][1 + i] = m;
    }
    SnfResult s = snf(a);

    // Solve D z = U rhs; z entries past the rank (or on zero diagonals) are free.
    std::vector<Integer> w(k, 0);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) w[i] += s.u[i][j] * rhs[j];

    std::vector<Integer> z(k + 1, 0);
    std::vector<int> free_idx;
    for (int i = 0; i < k; ++i) {
        Integer di = s.d[i][i];
        if (di == 0) {
            if (w[i] != 0) return {};
            free_idx.push_back(i);
        } else {
            if (w[i] % di != 0) return {};
            z[i] = w[i] / di;
        }
    }
    free_idx.push_back(k);

    // t = (V z)[0]; free components move t by multiples of gcd(V[0][j], m),
    // and that gcd divides m, so the residues are base + step*Z in [0, m).
    Integer t0 = 0;
    for (int j = 0; j <= k; ++j) t0 += s.v[0][j] * z[j];
    Integer step = m;
    for (int j : free_idx) step = gcd_int(step, s.v[0][j]);

    Integer base = mod_floor(t0, m);
    std::vector<Integer> out;
    for (Integer t = mod_floor(base, step); t < m; t += step) out.push_back(t);
    return out;
}

// --- Linear forms over the ambient ----------------------------------------

namespace {

struct LinearForm {
    std::map<std::string, Integer> coeffs; // unbound variable -> coefficient
    FgElement constant;
};

void add_scaled(const FgAbelian& g, LinearForm& into, const LinearForm& from, const Integer& k) {
    for (const auto& [name, c] : from.coeffs) {
        Integer next = k * c;
        auto it = into.coeffs.find(name);
        if (it != into.coeffs.end()) next += it->second;
        if (next == 0) into.coeffs.erase(name);
        else into.coeffs[name] = next;
    }
    into.constant = fg_add(g, into.constant, fg_scale(g, k, from.constant));
}

LinearForm linearize(const FgAbelian& g, const Term& t, const FgEnv& env) {
    LinearForm lf;
    lf.constant = fg_zero(g);
    switch (t.kind) {
    case Term::Kind::Variable: {
        auto found = env.vars.find(t.name);
        if (found != env.vars.end()) lf.constant = found->second;
        else lf.coeffs[t.name] = 1;
        break;
    }
    case Term::Kind::Param: {
        auto found = env.params.find(t.name);
        if (found == env.params.end())
            throw UnknownConstantError("parameter constant '" + t.name + "' is not bound");
        lf.constant = found->second;
        break;
    }
    case Term::Kind::Identity: break;
    case Term::Kind::Product: {
        LinearForm l = linearize(g, *t.left, env);
        add_scaled(g, l, linearize(g, *t.right, env), 1);
        return l;
    }
    case Term::Kind::Inverse: {
        LinearForm inner = linearize(g, *t.arg, env);
        LinearForm out;
        out.constant = fg_zero(g);
        add_scaled(g, out, inner, -1);
        return out;
    }
    case Term::Kind::Power: {
        LinearForm inner = linearize(g, *t.arg, env);
        LinearForm out;
        out.constant = fg_zero(g);
        add_scaled(g, out, inner, Integer(t.exponent));
        return out;
    }
    }
    return lf;
}

// c * var = value, possibly negated.
struct GuardAtom {
    bool negated;
    Integer coeff;
    FgElement value;
};

std::set<std::string> unbound_variables(const Formula& f, const FgEnv& env) {
    std::set<std::string> vs = free_variables(f);
    for (const auto& [name, value] : env.vars) {
        (void)value;
        vs.erase(name);
    }
    return vs;
}

void flatten_guard_atoms(const Formula& f, std::vector<const Formula*>& out) {
    if (f.kind == Formula::Kind::And) {
        for (const auto& c : f.children) flatten_guard_atoms(*c, out);
        return;
    }
    if (f.kind == Formula::Kind::Eq ||
        (f.kind == Formula::Kind::Not && f.children[0]->kind == Formula::Kind::Eq)) {
        out.push_back(&f);
        return;
    }
    throw NonlinearGuardError("guard is not a conjunction of linear (in)equations: " +
                              print_formula(f, Dialect::Additive));
}

GuardAtom extract_atom(const FgAbelian& g, const Formula& f, const std::string& var,
                       const FgEnv& env) {
    GuardAtom atom;
    atom.negated = f.kind == Formula::Kind::Not;
    const Formula& eq = atom.negated ? *f.children[0] : f;
    LinearForm lf = linearize(g, *eq.lhs, env);
    add_scaled(g, lf, linearize(g, *eq.rhs, env), -1);
    atom.coeff = 0;
    for (const auto& [name, c] : lf.coeffs) {
        if (name == var) atom.coeff = c;
        else
            throw UnboundVariableError("guard atom mentions unbound variable '" + name + "'");
    }
    atom.value = fg_neg(g, lf.constant);
    return atom;
}

GuardSolutions solve_atoms(const FgAbelian& g, const std::vector<GuardAtom>& atoms) {
    GuardSolutions result;

    // Degenerate negations: 0*y != 0 is identically false.
    for (const auto& a : atoms)
        if (a.negated && a.coeff == 0 && fg_is_zero(a.value)) return result;

    std::vector<const GuardAtom*> pos;
    for (const auto& a : atoms)
        if (!a.negated) pos.push_back(&a);

    // Free coordinates: each is pinned by any positive atom with a nonzero
    // coefficient and must be consistent with all the others.
    std::vector<Rational> free_vals(g.free_rank, Rational(0));
    bool unconstrained_free = false;
    for (int j = 0; j < g.free_rank; ++j) {
        const GuardAtom* pin = nullptr;
        for (const auto* a : pos)
            if (a->coeff != 0) {
                pin = a;
                break;
            }
        if (!pin) {
            for (const auto* a : pos)
                if (a->value.free_coords[j] != 0) return result; // 0*y = w, w != 0
            unconstrained_free = true;
            continue;
        }
        Rational f = pin->value.free_coords[j] / Rational(pin->coeff);
        if (g.free_kind == FgAbelian::FreeKind::Ints && denominator(f) != 1) return result;
        for (const auto* a : pos)
            if (Rational(a->coeff) * f != a->value.free_coords[j]) return result;
        free_vals[j] = f;
    }

    // Torsion coordinates: linear congruence systems.
    std::vector<std::vector<Integer>> residue_lists;
    for (std::size_t i = 0; i < g.torsion.size(); ++i) {
        std::vector<Integer> coeffs, rhs;
        for (const auto* a : pos) {
            coeffs.push_back(a->coeff);
            rhs.push_back(a->value.torsion_coords[i]);
        }
        auto residues = congruence_solutions(coeffs, rhs, g.torsion[i]);
        if (residues.empty()) return result;
        residue_lists.push_back(std::move(residues));
    }

    if (unconstrained_free) {
        result.infinite = true;
        return result;
    }

    // Cross product of torsion residues with the pinned free part.
    std::vector<FgElement> candidates;
    std::vector<std::size_t> odometer(residue_lists.size(), 0);
    while (true) {
        FgElement e;
        e.free_coords = free_vals;
        for (std::size_t i = 0; i < residue_lists.size(); ++i)
            e.torsion_coords.push_back(residue_lists[i][odometer[i]]);
        candidates.push_back(std::move(e));
        std::size_t i = 0;
        for (; i < odometer.size(); ++i) {
            if (++odometer[i] < residue_lists[i].size()) break;
            odometer[i] = 0;
        }
        if (i == odometer.size()) break;
    }

    // Every atom (negations included) filters the finite candidate list.
    for (const auto& c : candidates) {
        bool keep = true;
        for (const auto& a : atoms) {
            bool equal = fg_scale(g, a.coeff, c) == a.value;
            if (a.negated ? equal : !equal) {
                keep = false;
                break;
            }
        }
        if (keep) result.values.push_back(c);
    }
    std::sort(result.values.begin(), result.values.end());
    result.values.erase(std::unique(result.values.begin(), result.values.end()),
                        result.values.end());
    return result;
}

GuardSolutions guard_solutions_atoms(const FgAbelian& g, const std::vector<const Formula*>& atoms,
                                     const std::string& var, const FgEnv& env) {
    std::vector<GuardAtom> extracted;
    for (const Formula* f : atoms) extracted.push_back(extract_atom(g, *f, var, env));
    return solve_atoms(g, extracted);
}

} // namespace

GuardSolutions guard_solutions(const FgAbelian& g, const Formula& guard, const std::string& var,
                               const FgEnv& env) {
    std::vector<const Formula*> atoms;
    flatten_guard_atoms(guard, atoms);
    return guard_solutions_atoms(g, atoms, var, env);
}

// --- Guarded evaluation ----------------------------------------------------

namespace {

bool eval_rec(const FgAbelian& g, const Formula& f, const FgEnv& env);

// Triangular solving of a multi-variable guard: repeatedly pick a variable
// whose atoms mention no other unbound variable and branch over its finite
// solution set. Bindings satisfying every atom are appended to `out`.
void solve_block_rec(const FgAbelian& g, const std::vector<std::string>& vars,
                     const std::vector<const Formula*>& atoms, FgEnv env,
                     std::vector<FgEnv>& out, const Formula& origin) {
    std::vector<std::string> remaining;
    for (const auto& v : vars)
        if (!env.vars.count(v)) remaining.push_back(v);
    if (remaining.empty()) {
        // All variables pinned: re-check every atom under the full binding
        // (atoms spanning several variables were not used for pinning).
        for (const Formula* a : atoms)
            if (!eval_rec(g, *a, env)) return;
        out.push_back(std::move(env));
        return;
    }

    for (const auto& v : remaining) {
        std::vector<const Formula*> only_v;
        for (const Formula* a : atoms) {
            auto uv = unbound_variables(*a, env);
            if (uv.size() == 1 && *uv.begin() == v) only_v.push_back(a);
        }
        if (only_v.empty()) continue;
        GuardSolutions sols = guard_solutions_atoms(g, only_v, v, env);
        if (sols.infinite) continue;
        for (const auto& value : sols.values) {
            FgEnv next = env;
            next.vars[v] = value;
            solve_block_rec(g, vars, atoms, std::move(next), out, origin);
        }
        return;
    }
    throw UnguardedQuantifierError("quantifier guard cannot pin its variables: " +
                                   print_formula(origin, Dialect::Additive));
}

std::vector<FgEnv> solve_block(const FgAbelian& g, const std::vector<std::string>& vars,
                               const std::vector<const Formula*>& atoms, const FgEnv& env,
                               const Formula& origin) {
    std::vector<FgEnv> out;
    solve_block_rec(g, vars, atoms, env, out, origin);
    return out;
}

// Collapse consecutive quantifiers of the same kind into one block.
const Formula* collapse_block(const Formula& f, std::vector<std::string>& vars) {
    const Formula* cur = &f;
    while (cur->kind == f.kind &&
           (cur->kind == Formula::Kind::ForAll || cur->kind == Formula::Kind::Exists)) {
        for (const auto& v : cur->vars) {
            if (std::find(vars.begin(), vars.end(), v) != vars.end())
                throw UnguardedQuantifierError("shadowed quantifier variable '" + v + "'");
            vars.push_back(v);
        }
        cur = cur->body.get();
    }
    return cur;
}

void flatten_and(const Formula& f, std::vector<const Formula*>& out) {
    if (f.kind == Formula::Kind::And) {
        for (const auto& c : f.children) flatten_and(*c, out);
    } else {
        out.push_back(&f);
    }
}

bool is_guard_atom(const Formula& f) {
    return f.kind == Formula::Kind::Eq ||
           (f.kind == Formula::Kind::Not && f.children[0]->kind == Formula::Kind::Eq);
}

bool eval_rec(const FgAbelian& g, const Formula& f, const FgEnv& env);

bool eval_atom(const FgAbelian& g, const Formula& eq, const FgEnv& env) {
    LinearForm lf = linearize(g, *eq.lhs, env);
    add_scaled(g, lf, linearize(g, *eq.rhs, env), -1);
    if (!lf.coeffs.empty())
        throw UnboundVariableError("unbound variable '" + lf.coeffs.begin()->first +
                                   "' in guarded evaluation");
    return fg_is_zero(lf.constant);
}

bool eval_forall_block(const FgAbelian& g, const Formula& f, const FgEnv& env) {
    std::vector<std::string> vars;
    const Formula* body = collapse_block(f, vars);
    if (body->kind != Formula::Kind::Implies)
        throw UnguardedQuantifierError("universal quantifier without a guard implication: " +
                                       print_formula(f, Dialect::Additive));
    std::vector<const Formula*> guard_atoms;
    flatten_guard_atoms(*body->children[0], guard_atoms);
    for (const auto& binding : solve_block(g, vars, guard_atoms, env, f))
        if (!eval_rec(g, *body->children[1], binding)) return false;
    return true;
}

bool eval_exists_block(const FgAbelian& g, const Formula& f, const FgEnv& env) {
    std::vector<std::string> vars;
    const Formula* body = collapse_block(f, vars);
    std::vector<const Formula*> conjuncts;
    flatten_and(*body, conjuncts);
    std::vector<const Formula*> atoms, complex_parts;
    for (const Formula* c : conjuncts)
        (is_guard_atom(*c) ? atoms : complex_parts).push_back(c);
    for (const auto& binding : solve_block(g, vars, atoms, env, f)) {
        bool all = true;
        for (const Formula* c : complex_parts)
            if (!eval_rec(g, *c, binding)) {
                all = false;
                break;
            }
        if (all) return true;
    }
    return false;
}

bool eval_rec(const FgAbelian& g, const Formula& f, const FgEnv& env) {
    switch (f.kind) {
    case Formula::Kind::Eq: return eval_atom(g, f, env);
    case Formula::Kind::Not: return !eval_rec(g, *f.children[0], env);
    case Formula::Kind::And:
        for (const auto& c : f.children)
            if (!eval_rec(g, *c, env)) return false;
        return true;
    case Formula::Kind::Or:
        for (const auto& c : f.children)
            if (eval_rec(g, *c, env)) return true;
        return false;
    case Formula::Kind::Implies:
        return !eval_rec(g, *f.children[0], env) || eval_rec(g, *f.children[1], env);
    case Formula::Kind::ForAll: return eval_forall_block(g, f, env);
    case Formula::Kind::Exists: return eval_exists_block(g, f, env);
    }
    return false;
}

// Candidate mining for the distinguished free variable: a finite,
// provable superset of the solution set, or a proof of infinitude.
struct MineResult {
    enum class Kind { Finite, Infinite, NoInfo } kind = Kind::NoInfo;
    std::vector<FgElement> values;
};

MineResult mine_candidates(const FgAbelian& g, const Formula& f, const std::string& var,
                           const FgEnv& env) {
    std::vector<const Formula*> conjuncts;
    flatten_and(f, conjuncts);

    std::vector<const Formula*> atoms;
    int positive_atoms = 0;
    std::vector<MineResult> sources;
    bool saw_unknown = false;

    for (const Formula* c : conjuncts) {
        auto uv = unbound_variables(*c, env);
        if (uv.empty()) {
            if (!eval_rec(g, *c, env)) return {MineResult::Kind::Finite, {}};
            continue;
        }
        if (uv.size() > 1 || *uv.begin() != var) {
            saw_unknown = true;
            continue;
        }
        if (is_guard_atom(*c)) {
            atoms.push_back(c);
            if (c->kind == Formula::Kind::Eq) ++positive_atoms;
            continue;
        }
        if (c->kind == Formula::Kind::ForAll) {
            std::vector<std::string> qvars;
            const Formula* body = collapse_block(*c, qvars);
            if (body->kind != Formula::Kind::Implies)
                throw UnguardedQuantifierError("universal quantifier without a guard: " +
                                               print_formula(*c, Dialect::Additive));
            std::vector<const Formula*> guard_atoms;
            std::vector<FgEnv> bindings;
            try {
                flatten_guard_atoms(*body->children[0], guard_atoms);
                bindings = solve_block(g, qvars, guard_atoms, env, *c);
            } catch (const Error&) {
                saw_unknown = true;
                continue;
            }
            if (bindings.empty()) continue; // vacuously true: no constraint on var
            // Any solution must satisfy the matrix at every binding; the
            // first binding already yields a finite superset.
            MineResult inner = mine_candidates(g, *body->children[1], var, bindings.front());
            if (inner.kind == MineResult::Kind::Finite) sources.push_back(std::move(inner));
            else saw_unknown = true;
            continue;
        }
        if (c->kind == Formula::Kind::Exists) {
            std::vector<std::string> qvars;
            const Formula* body = collapse_block(*c, qvars);
            std::vector<const Formula*> inner_conj;
            flatten_and(*body, inner_conj);
            // Atoms free of var pin the witnesses; the rest is mined under
            // each witness binding.
            std::vector<const Formula*> witness_atoms, rest;
            for (const Formula* ic : inner_conj) {
                if (is_guard_atom(*ic) && !unbound_variables(*ic, env).count(var))
                    witness_atoms.push_back(ic);
                else rest.push_back(ic);
            }
            std::vector<FgEnv> bindings;
            try {
                bindings = solve_block(g, qvars, witness_atoms, env, *c);
            } catch (const UnguardedQuantifierError&) {
                saw_unknown = true;
                continue;
            }
            if (bindings.empty()) return {MineResult::Kind::Finite, {}};
            MineResult unioned{MineResult::Kind::Finite, {}};
            bool ok = true;
            for (const auto& binding : bindings) {
                bool got = false;
                for (const Formula* rc : rest) {
                    MineResult one = mine_candidates(g, *rc, var, binding);
                    if (one.kind == MineResult::Kind::Finite) {
                        for (auto& v : one.values) unioned.values.push_back(std::move(v));
                        got = true;
                        break;
                    }
                }
                if (!got) {
                    ok = false;
                    break;
                }
            }
            if (ok) sources.push_back(std::move(unioned));
            else saw_unknown = true;
            continue;
        }
        if (c->kind == Formula::Kind::Or) {
            MineResult unioned{MineResult::Kind::Finite, {}};
            bool ok = true;
            for (const auto& branch : c->children) {
                MineResult one = mine_candidates(g, *branch, var, env);
                if (one.kind != MineResult::Kind::Finite) {
                    ok = false;
                    break;
                }
                for (auto& v : one.values) unioned.values.push_back(v);
            }
            if (ok) sources.push_back(std::move(unioned));
            else saw_unknown = true;
            continue;
        }
        saw_unknown = true;
    }

    if (positive_atoms > 0) {
        GuardSolutions sols = guard_solutions_atoms(g, atoms, var, env);
        if (!sols.infinite) return {MineResult::Kind::Finite, std::move(sols.values)};
    }
    for (auto& s : sources)
        if (s.kind == MineResult::Kind::Finite) return std::move(s);
    if (!saw_unknown && positive_atoms == 0) {
        // Every conjunct is closed-true, a vacuous universal, or a negated
        // atom: the solution set is cofinite, hence infinite here.
        return {MineResult::Kind::Infinite, {}};
    }
    return {MineResult::Kind::NoInfo, {}};
}

} // namespace

bool evaluate_guarded(const FgAbelian& g, const Formula& f, const FgEnv& env) {
    return eval_rec(g, f, env);
}

GuardedSolutionSet guarded_solution_set(const FgAbelian& g, const Formula& f,
                                        const std::string& free_var, const FgEnv& env) {
    GuardedSolutionSet out;

    if (g.free_rank == 0) {
        // Finite ambient: direct enumeration over the torsion grid.
        Integer total = 1;
        for (const auto& m : g.torsion) total *= m;
        if (total > 1 << 20) throw ScaleGuardError("torsion ambient too large to enumerate");
        std::vector<Integer> odo(g.torsion.size(), 0);
        while (true) {
            FgElement e;
            e.torsion_coords = odo;
            FgEnv probe = env;
            probe.vars[free_var] = e;
            if (eval_rec(g, f, probe)) out.values.push_back(e);
            std::size_t i = 0;
            for (; i < odo.size(); ++i) {
                if (++odo[i] < g.torsion[i]) break;
                odo[i] = 0;
            }
            if (i == odo.size()) break;
        }
        std::sort(out.values.begin(), out.values.end());
        return out;
    }

    MineResult mined = mine_candidates(g, f, free_var, env);
    if (mined.kind == MineResult::Kind::Infinite) {
        out.infinite = true;
        return out;
    }
    if (mined.kind == MineResult::Kind::NoInfo)
        throw UnguardedQuantifierError("cannot bound the solution set of: " +
                                       print_formula(f, Dialect::Additive));
    std::sort(mined.values.begin(), mined.values.end());
    mined.values.erase(std::unique(mined.values.begin(), mined.values.end()), mined.values.end());
    for (const auto& c : mined.values) {
        FgEnv probe = env;
        probe.vars[free_var] = c;
        if (eval_rec(g, f, probe)) out.values.push_back(c);
    }
    return out;
}

bool check_defines_guarded(const FgAbelian& g, const Formula& f, const FgElement& target,
                           const FgEnv& env) {
    std::set<std::string> fv = free_variables(f);
    for (const auto& [name, value] : env.vars) {
        (void)value;
        fv.erase(name);
    }
    if (fv.size() != 1)
        throw Error("check_defines_guarded: formula must have exactly one free variable");
    GuardedSolutionSet sols = guarded_solution_set(g, f, *fv.begin(), env);
    return !sols.infinite && sols.values.size() == 1 && sols.values[0] == target;
}

} // namespace defcyc
