#include "defcyc/aut.hpp"

#include "defcyc/errors.hpp"

#include <algorithm>
#include <numeric>

namespace defcyc {

bool Automorphism::is_identity() const {
    for (std::size_t i = 0; i < map.size(); ++i)
        if (map[i] != static_cast<int>(i)) return false;
    return true;
}

Automorphism compose(const Automorphism& a, const Automorphism& b) {
    if (a.parent != b.parent) throw Error("compose: different parent groups");
    Automorphism c;
    c.parent = a.parent;
    c.map.resize(a.map.size());
    for (std::size_t x = 0; x < a.map.size(); ++x) c.map[x] = a.map[b.map[x]];
    return c;
}

Automorphism inverse(const Automorphism& a) {
    Automorphism c;
    c.parent = a.parent;
    c.map.resize(a.map.size());
    for (std::size_t x = 0; x < a.map.size(); ++x) c.map[a.map[x]] = static_cast<int>(x);
    return c;
}

bool is_automorphism(const FiniteGroup& g, const std::vector<int>& map) {
    const int n = g.order();
    if (static_cast<int>(map.size()) != n) return false;
    std::vector<char> hit(n, 0);
    for (int v : map) {
        if (v < 0 || v >= n || hit[v]) return false;
        hit[v] = 1;
    }
    if (map[0] != 0) return false;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (map[g.mul(i, j)] != g.mul(map[i], map[j])) return false;
    return true;
}

Subset generating_set(const FiniteGroup& g) {
    std::vector<int> gens;
    Subset closure = subgroup_generated(g, Subset::empty_set(g));
    while (static_cast<int>(closure.size()) < g.order()) {
        int best = -1;
        std::size_t best_size = closure.size();
        for (int x = 0; x < g.order(); ++x) {
            if (closure.contains(x)) continue;
            std::vector<int> trial = gens;
            trial.push_back(x);
            std::size_t sz = subgroup_generated(g, Subset::of(g, trial)).size();
            if (sz > best_size) {
                best_size = sz;
                best = x;
            }
        }
        gens.push_back(best);
        closure = subgroup_generated(g, Subset::of(g, gens));
    }
    return Subset::of(g, gens);
}

namespace {

// Shared backtracking core. Enumerates all automorphisms fixing `fixed`
// pointwise, invoking the callback on each; the callback returns false to
// stop the search. Returns true if the search space was exhausted.
class AutSearch {
public:
    AutSearch(const FiniteGroup& g, const std::vector<int>& fixed, std::int64_t budget)
        : g_(g), n_(g.order()), budget_(budget) {
        orders_.resize(n_);
        for (int i = 0; i < n_; ++i) orders_[i] = element_order(g_, i);

        img_.assign(n_, -1);
        pre_.assign(n_, -1);
        bind(0, 0);
        for (int s : fixed)
            if (!assign(s, s)) {
                contradictory_ = true;
                return;
            }

        // Generators of G; those already determined by the fixed set are
        // skipped during the search.
        Subset gens = generating_set(g_);
        gens_ = gens.members();
    }

    bool run(const std::function<bool(const std::vector<int>&)>& cb) {
        if (contradictory_) return true;
        cb_ = &cb;
        return extend(0);
    }

private:
    void bind(int x, int y) {
        img_[x] = y;
        pre_[y] = x;
        known_.push_back(x);
    }

    void undo_to(std::size_t mark) {
        while (known_.size() > mark) {
            int x = known_.back();
            known_.pop_back();
            pre_[img_[x]] = -1;
            img_[x] = -1;
        }
    }

    // Assign img[x] = y and propagate closure; returns false on conflict
    // (state is left for the caller to undo via undo_to).
    bool assign(int x, int y) {
        if (img_[x] != -1) return img_[x] == y;
        if (pre_[y] != -1) return false;
        if (orders_[x] != orders_[y]) return false;
        std::size_t head = known_.size();
        bind(x, y);
        while (head < known_.size()) {
            int a = known_[head++];
            int fa = img_[a];
            // Close products of a with every currently-known element; every
            // pair is eventually checked when its later member surfaces, so
            // completed maps are verified homomorphisms on all pairs.
            for (std::size_t t = 0; t < known_.size(); ++t) {
                int b = known_[t];
                int fb = img_[b];
                int p = g_.mul(a, b), fp = g_.mul(fa, fb);
                if (img_[p] == -1) {
                    if (pre_[fp] != -1) return false;
                    if (orders_[p] != orders_[fp]) return false;
                    bind(p, fp);
                } else if (img_[p] != fp) {
                    return false;
                }
                p = g_.mul(b, a);
                fp = g_.mul(fb, fa);
                if (img_[p] == -1) {
                    if (pre_[fp] != -1) return false;
                    if (orders_[p] != orders_[fp]) return false;
                    bind(p, fp);
                } else if (img_[p] != fp) {
                    return false;
                }
            }
        }
        return true;
    }

    bool extend(std::size_t gen_idx) {
        while (gen_idx < gens_.size() && img_[gens_[gen_idx]] != -1) ++gen_idx;
        if (gen_idx == gens_.size()) {
            // All generators placed; closure reached every element.
            return (*cb_)(img_);
        }
        int x = gens_[gen_idx];
        for (int y = 0; y < n_; ++y) {
            if (orders_[y] != orders_[x] || pre_[y] != -1) continue;
            if (--budget_ < 0)
                throw BudgetExceededError("automorphism search exceeded node budget");
            std::size_t mark = known_.size();
            if (assign(x, y)) {
                if (!extend(gen_idx + 1)) return false;
            }
            undo_to(mark);
        }
        return true;
    }

    const FiniteGroup& g_;
    int n_;
    std::int64_t budget_;
    bool contradictory_ = false;
    std::vector<int> orders_;
    std::vector<int> img_, pre_;
    std::vector<int> known_;
    std::vector<int> gens_;
    const std::function<bool(const std::vector<int>&)>* cb_ = nullptr;
};

} // namespace

AutGroup automorphism_group(const FiniteGroup& g, const AutOptions& opts) {
    AutGroup out;
    out.parent = &g;
    AutSearch search(g, {}, opts.node_budget);
    search.run([&](const std::vector<int>& map) {
        out.elements.push_back(Automorphism{&g, map});
        return true;
    });
    std::sort(out.elements.begin(), out.elements.end(),
              [](const Automorphism& a, const Automorphism& b) { return a.map < b.map; });
    return out;
}

Integer count_automorphisms(const FiniteGroup& g, const AutOptions& opts) {
    Integer count = 0;
    AutSearch search(g, {}, opts.node_budget);
    search.run([&](const std::vector<int>&) {
        ++count;
        return true;
    });
    return count;
}

std::optional<Automorphism> find_nonidentity_fixing(const FiniteGroup& g, const Subset& s,
                                                    const AutOptions& opts) {
    std::optional<Automorphism> found;
    AutSearch search(g, s.members(), opts.node_budget);
    search.run([&](const std::vector<int>& map) {
        for (std::size_t i = 0; i < map.size(); ++i)
            if (map[i] != static_cast<int>(i)) {
                found = Automorphism{&g, map};
                return false;
            }
        return true;
    });
    return found;
}

AutGroup pointwise_stabilizer(const AutGroup& a, const Subset& s) {
    AutGroup out;
    out.parent = a.parent;
    for (const auto& alpha : a.elements) {
        bool fixes = true;
        for (int x : s.members())
            if (alpha.map[x] != x) {
                fixes = false;
                break;
            }
        if (fixes) out.elements.push_back(alpha);
    }
    return out;
}

Subset fixed_subgroup(const FiniteGroup& g, const AutGroup& a) {
    if (a.parent != &g) throw Error("fixed_subgroup: automorphism group of a different parent");
    std::vector<int> out;
    for (int x = 0; x < g.order(); ++x) {
        bool fixed = true;
        for (const auto& alpha : a.elements)
            if (alpha.map[x] != x) {
                fixed = false;
                break;
            }
        if (fixed) out.push_back(x);
    }
    return Subset::of(g, std::move(out));
}

Subset orbit(const AutGroup& a, int s) {
    if (!a.parent) throw Error("orbit: automorphism group without parent");
    std::vector<int> out;
    for (const auto& alpha : a.elements) out.push_back(alpha.map[s]);
    return Subset::of(*a.parent, std::move(out));
}

AbelianPShape::AbelianPShape(long long p_, std::vector<int> exps) : p(p_), exponents(std::move(exps)) {
    if (!is_prime(p)) throw Error("AbelianPShape: p must be prime");
    if (exponents.empty()) throw Error("AbelianPShape: exponent list must be nonempty");
    for (int e : exponents)
        if (e < 1) throw Error("AbelianPShape: exponents must be positive");
    if (!std::is_sorted(exponents.begin(), exponents.end()))
        throw Error("AbelianPShape: exponents must be nondecreasing");
}

std::vector<int> AbelianPShape::factors() const {
    std::vector<int> f;
    for (int e : exponents) {
        long long v = 1;
        for (int i = 0; i < e; ++i) v *= p;
        f.push_back(static_cast<int>(v));
    }
    return f;
}

Integer hillar_rhea_order(const AbelianPShape& shape) {
    const auto& e = shape.exponents;
    const int t = static_cast<int>(e.size());
    const Integer p = shape.p;
    Integer result = 1;
    for (int i = 1; i <= t; ++i) {
        int di = 0, ci = 0;
        for (int j = 1; j <= t; ++j)
            if (e[j - 1] == e[i - 1]) {
                di = std::max(di, j);
                if (ci == 0) ci = j;
            }
        Integer head = ipow(p, di) - ipow(p, i - 1);
        std::uint64_t exp = static_cast<std::uint64_t>(e[i - 1]) * (t - di) +
                            static_cast<std::uint64_t>(e[i - 1] - 1) * (t - ci + 1);
        result *= head * ipow(p, exp);
    }
    return result;
}

} // namespace defcyc
