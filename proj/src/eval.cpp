#include "defcyc/eval.hpp"

#include "defcyc/errors.hpp"

#include <algorithm>
#include <memory>
#include <vector>

namespace defcyc {

namespace {

int element_power(const FiniteGroup& g, int x, long long k) {
    if (k < 0) {
        x = g.inv(x);
        k = -k;
    }
    int acc = 0;
    while (k) {
        if (k & 1) acc = g.mul(acc, x);
        x = g.mul(x, x);
        k >>= 1;
    }
    return acc;
}

struct CTerm {
    Term::Kind kind;
    int slot = -1;          // Variable
    int element = -1;       // Param, resolved
    long long exponent = 0; // Power
    std::unique_ptr<CTerm> a, b;
    std::vector<int> slots; // slots occurring in the term
};

struct CNode {
    Formula::Kind kind;
    std::unique_ptr<CTerm> lhs, rhs;            // Eq
    std::vector<std::unique_ptr<CNode>> children;
    std::vector<int> block_slots;               // quantifiers
    std::unique_ptr<CNode> body;
    std::vector<int> free_slots;                // slots free at this node
    std::vector<CNode*> conjuncts;              // Exists: flattened And view of body
};

void merge_slots(std::vector<int>& into, const std::vector<int>& from) {
    for (int s : from)
        if (std::find(into.begin(), into.end(), s) == into.end()) into.push_back(s);
}

class Compiler {
public:
    Compiler(const FiniteGroup& g, const Env& env) : g_(g), env_(env) {}

    std::unique_ptr<CNode> compile(const Formula& f) {
        auto root = node(f);
        // Free slots remaining at the root must be bound by env.vars.
        for (int s : root->free_slots)
            if (initial_[s] == -1)
                throw UnboundVariableError("unbound variable '" + slot_names_[s] + "'");
        return root;
    }

    const std::vector<int>& initial_values() const { return initial_; }

private:
    int fresh_slot(const std::string& name) {
        slot_names_.push_back(name);
        initial_.push_back(-1);
        return static_cast<int>(slot_names_.size()) - 1;
    }

    int lookup_or_free(const std::string& name) {
        for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
            auto found = it->find(name);
            if (found != it->end()) return found->second;
        }
        // A free variable: one shared slot per name, preloaded from env.
        auto found = free_slots_.find(name);
        if (found != free_slots_.end()) return found->second;
        int s = fresh_slot(name);
        auto bound = env_.vars.find(name);
        if (bound != env_.vars.end()) {
            if (bound->second < 0 || bound->second >= g_.order())
                throw Error("environment binds '" + name + "' outside the group");
            initial_[s] = bound->second;
        }
        free_slots_[name] = s;
        return s;
    }

    std::unique_ptr<CTerm> term(const Term& t) {
        auto c = std::make_unique<CTerm>();
        c->kind = t.kind;
        switch (t.kind) {
        case Term::Kind::Variable:
            c->slot = lookup_or_free(t.name);
            c->slots.push_back(c->slot);
            break;
        case Term::Kind::Param: {
            int e = t.param_element;
            if (e < 0) {
                auto found = env_.params.find(t.name);
                if (found == env_.params.end())
                    throw UnknownConstantError("parameter constant '" + t.name + "' is not bound");
                e = found->second;
            }
            if (e < 0 || e >= g_.order())
                throw UnknownConstantError("parameter constant '" + t.name +
                                           "' refers to element " + std::to_string(e) +
                                           " outside the group");
            c->element = e;
            break;
        }
        case Term::Kind::Identity: break;
        case Term::Kind::Product:
            c->a = term(*t.left);
            c->b = term(*t.right);
            merge_slots(c->slots, c->a->slots);
            merge_slots(c->slots, c->b->slots);
            break;
        case Term::Kind::Inverse:
        case Term::Kind::Power:
            c->a = term(*t.arg);
            c->exponent = t.exponent;
            merge_slots(c->slots, c->a->slots);
            break;
        }
        return c;
    }

    std::unique_ptr<CNode> node(const Formula& f) {
        auto c = std::make_unique<CNode>();
        c->kind = f.kind;
        switch (f.kind) {
        case Formula::Kind::Eq:
            c->lhs = term(*f.lhs);
            c->rhs = term(*f.rhs);
            merge_slots(c->free_slots, c->lhs->slots);
            merge_slots(c->free_slots, c->rhs->slots);
            break;
        case Formula::Kind::Not:
        case Formula::Kind::And:
        case Formula::Kind::Or:
        case Formula::Kind::Implies:
            for (const auto& ch : f.children) {
                c->children.push_back(node(*ch));
                merge_slots(c->free_slots, c->children.back()->free_slots);
            }
            break;
        case Formula::Kind::Exists:
        case Formula::Kind::ForAll: {
            scopes_.emplace_back();
            for (const auto& v : f.vars) {
                int s = fresh_slot(v);
                scopes_.back()[v] = s;
                c->block_slots.push_back(s);
            }
            c->body = node(*f.body);
            scopes_.pop_back();
            for (int s : c->body->free_slots)
                if (std::find(c->block_slots.begin(), c->block_slots.end(), s) ==
                    c->block_slots.end())
                    c->free_slots.push_back(s);
            if (f.kind == Formula::Kind::Exists) flatten_conjuncts(c->body.get(), c->conjuncts);
            break;
        }
        }
        return c;
    }

    static void flatten_conjuncts(CNode* n, std::vector<CNode*>& out) {
        if (n->kind == Formula::Kind::And) {
            for (auto& ch : n->children) flatten_conjuncts(ch.get(), out);
        } else {
            out.push_back(n);
        }
    }

    const FiniteGroup& g_;
    const Env& env_;
    std::vector<std::string> slot_names_;
    std::vector<int> initial_;
    std::vector<std::map<std::string, int>> scopes_;
    std::map<std::string, int> free_slots_;
};

class Engine {
public:
    Engine(const FiniteGroup& g, std::vector<int> initial, std::int64_t budget)
        : g_(g), val_(std::move(initial)), budget_(budget) {}

    std::vector<int>& values() { return val_; }

    bool eval(const CNode& n) {
        switch (n.kind) {
        case Formula::Kind::Eq: {
            tick();
            return eval_term(*n.lhs) == eval_term(*n.rhs);
        }
        case Formula::Kind::Not: return !eval(*n.children[0]);
        case Formula::Kind::And:
            for (const auto& c : n.children)
                if (!eval(*c)) return false;
            return true;
        case Formula::Kind::Or:
            for (const auto& c : n.children)
                if (eval(*c)) return true;
            return false;
        case Formula::Kind::Implies: return !eval(*n.children[0]) || eval(*n.children[1]);
        case Formula::Kind::ForAll: return eval_forall(n, 0);
        case Formula::Kind::Exists: {
            std::vector<char> satisfied(n.conjuncts.size(), 0);
            return exists_search(n, satisfied);
        }
        }
        return false;
    }

private:
    void tick() {
        if (--budget_ < 0) throw BudgetExceededError("formula evaluation exceeded atom budget");
    }

    int eval_term(const CTerm& t) {
        switch (t.kind) {
        case Term::Kind::Variable: return val_[t.slot];
        case Term::Kind::Param: return t.element;
        case Term::Kind::Identity: return 0;
        case Term::Kind::Product: return g_.mul(eval_term(*t.a), eval_term(*t.b));
        case Term::Kind::Inverse: return g_.inv(eval_term(*t.a));
        case Term::Kind::Power: return element_power(g_, eval_term(*t.a), t.exponent);
        }
        return 0;
    }

    bool closed(const CTerm& t) const {
        for (int s : t.slots)
            if (val_[s] == -1) return false;
        return true;
    }

    bool node_closed(const CNode& n) const {
        for (int s : n.free_slots)
            if (val_[s] == -1) return false;
        return true;
    }

    bool eval_forall(const CNode& n, std::size_t idx) {
        if (idx == n.block_slots.size()) return eval(*n.body);
        int slot = n.block_slots[idx];
        for (int v = 0; v < g_.order(); ++v) {
            val_[slot] = v;
            if (!eval_forall(n, idx + 1)) {
                val_[slot] = -1;
                return false;
            }
        }
        val_[slot] = -1;
        return true;
    }

    // Existential block: unit propagation over the conjunct list, then
    // branch on the first unbound block variable.
    bool exists_search(const CNode& n, std::vector<char>& satisfied) {
        std::vector<int> bound_here;
        std::vector<std::size_t> satisfied_here;
        auto undo = [&]() {
            for (int s : bound_here) val_[s] = -1;
            for (std::size_t i : satisfied_here) satisfied[i] = 0;
        };

        bool progress = true;
        while (progress) {
            progress = false;
            for (std::size_t i = 0; i < n.conjuncts.size(); ++i) {
                if (satisfied[i]) continue;
                CNode* c = n.conjuncts[i];
                if (c->kind == Formula::Kind::Eq) {
                    bool lc = closed(*c->lhs), rc = closed(*c->rhs);
                    if (lc && rc) {
                        tick();
                        if (eval_term(*c->lhs) != eval_term(*c->rhs)) {
                            undo();
                            return false;
                        }
                        satisfied[i] = 1;
                        satisfied_here.push_back(i);
                        progress = true;
                    } else if (rc && c->lhs->kind == Term::Kind::Variable) {
                        tick();
                        val_[c->lhs->slot] = eval_term(*c->rhs);
                        bound_here.push_back(c->lhs->slot);
                        satisfied[i] = 1;
                        satisfied_here.push_back(i);
                        progress = true;
                    } else if (lc && c->rhs->kind == Term::Kind::Variable) {
                        tick();
                        val_[c->rhs->slot] = eval_term(*c->lhs);
                        bound_here.push_back(c->rhs->slot);
                        satisfied[i] = 1;
                        satisfied_here.push_back(i);
                        progress = true;
                    }
                } else if (node_closed(*c)) {
                    // Covers negated atoms (checked incrementally as their
                    // variables get bound) and any nested subformula.
                    if (!eval(*c)) {
                        undo();
                        return false;
                    }
                    satisfied[i] = 1;
                    satisfied_here.push_back(i);
                    progress = true;
                }
            }
        }

        int branch_slot = -1;
        for (int s : n.block_slots)
            if (val_[s] == -1) {
                branch_slot = s;
                break;
            }
        if (branch_slot == -1) {
            // Everything bound: any conjunct left unsatisfied is closed and
            // was evaluated in the loop, so all conjuncts hold.
            undo();
            return true;
        }
        // Each recursive call restores its own bindings and marks on both
        // outcomes, so the flags are intact between branches.
        for (int v = 0; v < g_.order(); ++v) {
            val_[branch_slot] = v;
            if (exists_search(n, satisfied)) {
                val_[branch_slot] = -1;
                undo();
                return true;
            }
        }
        val_[branch_slot] = -1;
        undo();
        return false;
    }

    const FiniteGroup& g_;
    std::vector<int> val_;
    std::int64_t budget_;
};

} // namespace

bool evaluate(const FiniteGroup& g, const Formula& f, const Env& env, const EvalOptions& opts) {
    Compiler compiler(g, env);
    auto root = compiler.compile(f);
    Engine engine(g, compiler.initial_values(), opts.atom_budget);
    return engine.eval(*root);
}

Subset solutions(const FiniteGroup& g, const Formula& f, const std::string& free_var,
                 const Env& env, const EvalOptions& opts) {
    auto fv = free_variables(f);
    fv.erase(free_var);
    for (const auto& v : fv)
        if (!env.vars.count(v))
            throw UnboundVariableError("unbound variable '" + v + "'");
    Env scan = env;
    std::vector<int> sols;
    std::int64_t budget = opts.atom_budget;
    for (int x = 0; x < g.order(); ++x) {
        scan.vars[free_var] = x;
        Compiler compiler(g, scan);
        auto root = compiler.compile(f);
        Engine engine(g, compiler.initial_values(), budget);
        if (engine.eval(*root)) sols.push_back(x);
    }
    return Subset::of(g, std::move(sols));
}

bool check_defines(const FiniteGroup& g, const Formula& f, int target, const Env& env,
                   const EvalOptions& opts) {
    if (target < 0 || target >= g.order()) throw Error("check_defines: target out of range");
    auto fv = free_variables(f);
    for (const auto& v : env.vars) fv.erase(v.first);
    if (fv.size() != 1)
        throw Error("check_defines: formula must have exactly one free variable");
    Subset sols = solutions(g, f, *fv.begin(), env, opts);
    return sols.size() == 1 && sols.members()[0] == target;
}

FormulaPtr cayley_formula(const FiniteGroup& g, const Subset& s, int target) {
    if (target < 0 || target >= g.order()) throw Error("cayley_formula: target out of range");
    const int n = g.order();
    std::vector<std::string> names(n);
    std::vector<TermPtr> x(n);
    for (int i = 0; i < n; ++i) {
        names[i] = "x" + std::to_string(i + 1);
        x[i] = Term::variable(names[i]);
    }

    std::vector<FormulaPtr> conjuncts;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) conjuncts.push_back(Formula::neq(x[i], x[j]));
    for (int m : s.members())
        conjuncts.push_back(Formula::eq(x[m], Term::param("a" + std::to_string(m), m)));
    conjuncts.push_back(Formula::eq(x[0], Term::identity()));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            conjuncts.push_back(Formula::eq(Term::product(x[i], x[j]), x[g.mul(i, j)]));
    conjuncts.push_back(Formula::eq(Term::variable("y"), x[target]));

    FormulaPtr body = conjuncts.size() == 1 ? conjuncts[0] : Formula::conj(std::move(conjuncts));
    return Formula::exists(std::move(names), body);
}

} // namespace defcyc
