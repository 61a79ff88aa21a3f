#include "defcyc/group.hpp"

#include "defcyc/errors.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <utility>

namespace defcyc {

FiniteGroup::FiniteGroup(int n, std::vector<int> table, std::string name,
                         std::vector<std::string> element_names)
    : n_(n), table_(std::move(table)), name_(std::move(name)),
      element_names_(std::move(element_names)) {
    inverse_.assign(n_, -1);
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j)
            if (mul(i, j) == 0) inverse_[i] = j;
}

int FiniteGroup::element_by_name(const std::string& s) const {
    for (int i = 0; i < n_; ++i)
        if (element_names_[i] == s) return i;
    // Fall back to a decimal index.
    if (!s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; })) {
        long v = std::stol(s);
        if (v >= 0 && v < n_) return static_cast<int>(v);
    }
    return -1;
}

std::vector<std::vector<int>> FiniteGroup::table_rows() const {
    std::vector<std::vector<int>> rows(n_, std::vector<int>(n_));
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j)
            rows[i][j] = mul(i, j);
    return rows;
}

Subset Subset::of(const FiniteGroup& g, std::vector<int> members) {
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    for (int m : members)
        if (m < 0 || m >= g.order())
            throw Error("subset member " + std::to_string(m) + " outside group of order " +
                        std::to_string(g.order()));
    Subset s;
    s.parent_ = &g;
    s.members_ = std::move(members);
    return s;
}

Subset Subset::empty_set(const FiniteGroup& g) { return of(g, {}); }

Subset Subset::full_set(const FiniteGroup& g) {
    std::vector<int> all(g.order());
    std::iota(all.begin(), all.end(), 0);
    return of(g, std::move(all));
}

bool Subset::contains(int x) const {
    return std::binary_search(members_.begin(), members_.end(), x);
}

FiniteGroup validate(const std::vector<std::vector<int>>& table, std::string name,
                     std::vector<std::string> element_names, int max_order) {
    using K = GroupValidationError::Kind;
    const int n = static_cast<int>(table.size());
    if (n == 0) throw GroupValidationError(K::NotClosed, "empty table");
    if (n > max_order)
        throw ScaleGuardError("group order " + std::to_string(n) + " exceeds scale guard " +
                              std::to_string(max_order));

    std::vector<int> flat;
    flat.reserve(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(table[i].size()) != n)
            throw GroupValidationError(K::NotClosed, "row " + std::to_string(i) + " is not length " +
                                       std::to_string(n), i);
        for (int j = 0; j < n; ++j) {
            int v = table[i][j];
            if (v < 0 || v >= n)
                throw GroupValidationError(K::NotClosed,
                                           "entry (" + std::to_string(i) + "," + std::to_string(j) +
                                           ") = " + std::to_string(v) + " out of range", i, j);
            flat.push_back(v);
        }
    }

    for (int j = 0; j < n; ++j)
        if (flat[j] != j)
            throw GroupValidationError(K::NoIdentityAtZero,
                                       "row 0 does not fix element " + std::to_string(j), 0, j);
    for (int i = 0; i < n; ++i)
        if (flat[static_cast<std::size_t>(i) * n] != i)
            throw GroupValidationError(K::NoIdentityAtZero,
                                       "column 0 does not fix element " + std::to_string(i), i, 0);

    // Every row and column must be a permutation.
    std::vector<char> seen(n);
    for (int i = 0; i < n; ++i) {
        std::fill(seen.begin(), seen.end(), 0);
        for (int j = 0; j < n; ++j) {
            int v = flat[static_cast<std::size_t>(i) * n + j];
            if (seen[v])
                throw GroupValidationError(K::NotInvertible,
                                           "row " + std::to_string(i) + " repeats " + std::to_string(v), i, j);
            seen[v] = 1;
        }
    }
    for (int j = 0; j < n; ++j) {
        std::fill(seen.begin(), seen.end(), 0);
        for (int i = 0; i < n; ++i) {
            int v = flat[static_cast<std::size_t>(i) * n + j];
            if (seen[v])
                throw GroupValidationError(K::NotInvertible,
                                           "column " + std::to_string(j) + " repeats " + std::to_string(v), i, j);
            seen[v] = 1;
        }
    }

    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            int ij = flat[static_cast<std::size_t>(i) * n + j];
            for (int k = 0; k < n; ++k) {
                int jk = flat[static_cast<std::size_t>(j) * n + k];
                if (flat[static_cast<std::size_t>(ij) * n + k] != flat[static_cast<std::size_t>(i) * n + jk])
                    throw GroupValidationError(K::NotAssociative,
                                               "associativity fails at (" + std::to_string(i) + "," +
                                               std::to_string(j) + "," + std::to_string(k) + ")", i, j, k);
            }
        }

    if (element_names.empty()) {
        element_names.resize(n);
        for (int i = 0; i < n; ++i) element_names[i] = std::to_string(i);
    } else if (static_cast<int>(element_names.size()) != n) {
        throw Error("element name list has wrong length");
    }
    if (name.empty()) name = "G" + std::to_string(n);
    return FiniteGroup(n, std::move(flat), std::move(name), std::move(element_names));
}

FiniteGroup make_cyclic(int n) {
    if (n < 1) throw Error("make_cyclic: order must be >= 1");
    std::vector<std::vector<int>> t(n, std::vector<int>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            t[i][j] = (i + j) % n;
    return validate(t, "Z" + std::to_string(n));
}

FiniteGroup make_abelian(const std::vector<int>& factors) {
    if (factors.empty()) return make_cyclic(1);
    long long order = 1;
    for (int f : factors) {
        if (f < 2) throw Error("make_abelian: every factor must be >= 2");
        order *= f;
        if (order > kMaxTableOrder)
            throw ScaleGuardError("make_abelian: order exceeds scale guard");
    }
    const int n = static_cast<int>(order);
    const int k = static_cast<int>(factors.size());

    // Mixed-radix digits, last factor fastest.
    auto digits = [&](int idx) {
        std::vector<int> d(k);
        for (int i = k - 1; i >= 0; --i) {
            d[i] = idx % factors[i];
            idx /= factors[i];
        }
        return d;
    };
    auto index_of = [&](const std::vector<int>& d) {
        int idx = 0;
        for (int i = 0; i < k; ++i) idx = idx * factors[i] + d[i];
        return idx;
    };

    std::vector<std::vector<int>> t(n, std::vector<int>(n));
    for (int i = 0; i < n; ++i) {
        auto di = digits(i);
        for (int j = 0; j < n; ++j) {
            auto dj = digits(j);
            std::vector<int> sum(k);
            for (int c = 0; c < k; ++c) sum[c] = (di[c] + dj[c]) % factors[c];
            t[i][j] = index_of(sum);
        }
    }

    std::string name;
    std::vector<std::string> names(n);
    for (int i = 0; i < k; ++i) {
        if (i) name += "x";
        name += "Z" + std::to_string(factors[i]);
    }
    for (int i = 0; i < n; ++i) {
        auto d = digits(i);
        if (k == 1) {
            names[i] = std::to_string(d[0]);
        } else {
            std::string s = "(";
            for (int c = 0; c < k; ++c) {
                if (c) s += ",";
                s += std::to_string(d[c]);
            }
            s += ")";
            names[i] = s;
        }
    }
    return validate(t, name, names);
}

FiniteGroup make_dihedral(int n) {
    if (n < 1) throw Error("make_dihedral: n must be >= 1");
    const int order = 2 * n;
    if (order > kMaxTableOrder) throw ScaleGuardError("make_dihedral: order exceeds scale guard");
    // Element (a, b) = r^a f^b at index a + n*b.
    auto idx = [&](int a, int b) { return a + n * b; };
    std::vector<std::vector<int>> t(order, std::vector<int>(order));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < 2; ++b)
            for (int c = 0; c < n; ++c)
                for (int d = 0; d < 2; ++d) {
                    int ra = b == 0 ? (a + c) % n : ((a - c) % n + n) % n;
                    t[idx(a, b)][idx(c, d)] = idx(ra, b ^ d);
                }
    std::vector<std::string> names(order);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < 2; ++b) {
            std::string s;
            if (a == 1) s += "r";
            else if (a > 1) s += "r^" + std::to_string(a);
            if (b) s += s.empty() ? "f" : " f";
            if (s.empty()) s = "1";
            names[idx(a, b)] = s;
        }
    return validate(t, "D" + std::to_string(order), names);
}

FiniteGroup make_quaternion() {
    // Elements (basis, sign): 1,-1,i,-i,j,-j,k,-k at index basis*2 + (sign<0).
    static const std::array<std::array<int, 4>, 4> basis_mul = {{
        {0, 1, 2, 3},   // 1*x
        {1, 0, 3, 2},   // i*{1,i,j,k} = {i, -1, k, -j} (basis part)
        {2, 3, 0, 1},   // j*...
        {3, 2, 1, 0},   // k*...
    }};
    static const std::array<std::array<int, 4>, 4> sign_mul = {{
        {+1, +1, +1, +1},
        {+1, -1, +1, -1}, // i*i=-1, i*j=+k, i*k=-j
        {+1, -1, -1, +1}, // j*i=-k, j*j=-1, j*k=+i
        {+1, +1, -1, -1}, // k*i=+j, k*j=-i, k*k=-1
    }};
    std::vector<std::vector<int>> t(8, std::vector<int>(8));
    for (int b1 = 0; b1 < 4; ++b1)
        for (int s1 = 0; s1 < 2; ++s1)
            for (int b2 = 0; b2 < 4; ++b2)
                for (int s2 = 0; s2 < 2; ++s2) {
                    int b = basis_mul[b1][b2];
                    int neg = (sign_mul[b1][b2] < 0) ^ s1 ^ s2;
                    t[b1 * 2 + s1][b2 * 2 + s2] = b * 2 + neg;
                }
    std::vector<std::string> names = {"1", "-1", "i", "-i", "j", "-j", "k", "-k"};
    return validate(t, "Q8", names);
}

namespace {

std::vector<std::vector<int>> permutations_lex(int k) {
    std::vector<int> p(k);
    std::iota(p.begin(), p.end(), 0);
    std::vector<std::vector<int>> all;
    do {
        all.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    return all;
}

bool perm_is_even(const std::vector<int>& p) {
    int inversions = 0;
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = i + 1; j < p.size(); ++j)
            if (p[i] > p[j]) ++inversions;
    return inversions % 2 == 0;
}

std::string cycle_notation(const std::vector<int>& p) {
    const int k = static_cast<int>(p.size());
    std::vector<char> done(k, 0);
    std::string out;
    for (int i = 0; i < k; ++i) {
        if (done[i] || p[i] == i) continue;
        out += "(";
        int j = i;
        bool first = true;
        while (!done[j]) {
            done[j] = 1;
            if (!first) out += " ";
            out += std::to_string(j);
            first = false;
            j = p[j];
        }
        out += ")";
    }
    return out.empty() ? "e" : out;
}

FiniteGroup permutation_group(std::vector<std::vector<int>> perms, const std::string& name) {
    const int n = static_cast<int>(perms.size());
    const int k = static_cast<int>(perms[0].size());
    auto find = [&](const std::vector<int>& q) {
        for (int i = 0; i < n; ++i)
            if (perms[i] == q) return i;
        return -1;
    };
    std::vector<std::vector<int>> t(n, std::vector<int>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            // Composition (p_i . p_j)(x) = p_i(p_j(x)).
            std::vector<int> q(k);
            for (int x = 0; x < k; ++x) q[x] = perms[i][perms[j][x]];
            int idx = find(q);
            if (idx < 0) throw Error(name + ": permutation set not closed");
            t[i][j] = idx;
        }
    std::vector<std::string> names(n);
    for (int i = 0; i < n; ++i) names[i] = cycle_notation(perms[i]);
    return validate(t, name, names);
}

} // namespace

FiniteGroup make_symmetric(int k) {
    if (k < 1 || k > 4) throw ScaleGuardError("make_symmetric: k must be in 1..4");
    return permutation_group(permutations_lex(k), "S" + std::to_string(k));
}

FiniteGroup make_alternating(int k) {
    if (k < 1 || k > 4) throw ScaleGuardError("make_alternating: k must be in 1..4");
    std::vector<std::vector<int>> evens;
    for (auto& p : permutations_lex(k))
        if (perm_is_even(p)) evens.push_back(p);
    return permutation_group(std::move(evens), "A" + std::to_string(k));
}

FiniteGroup make_dicyclic(int n) {
    if (n < 2) throw Error("make_dicyclic: n must be >= 2");
    const int order = 4 * n;
    if (order > kMaxTableOrder) throw ScaleGuardError("make_dicyclic: order exceeds scale guard");
    const int m = 2 * n; // order of a
    auto idx = [&](int k, int e) { return k + m * e; };
    std::vector<std::vector<int>> t(order, std::vector<int>(order));
    for (int k = 0; k < m; ++k)
        for (int e = 0; e < 2; ++e)
            for (int l = 0; l < m; ++l)
                for (int f = 0; f < 2; ++f) {
                    int kk;
                    if (e == 0) {
                        kk = (k + l) % m;
                        t[idx(k, e)][idx(l, f)] = idx(kk, f);
                    } else {
                        // (a^k b)(a^l) = a^{k-l} b ; (a^k b)(a^l b) = a^{k-l+n}
                        kk = ((k - l) % m + m) % m;
                        if (f == 0) t[idx(k, e)][idx(l, f)] = idx(kk, 1);
                        else t[idx(k, e)][idx(l, f)] = idx((kk + n) % m, 0);
                    }
                }
    std::vector<std::string> names(order);
    for (int k = 0; k < m; ++k)
        for (int e = 0; e < 2; ++e) {
            std::string s;
            if (k == 1) s = "a";
            else if (k > 1) s = "a^" + std::to_string(k);
            if (e) s += s.empty() ? "b" : " b";
            if (s.empty()) s = "1";
            names[idx(k, e)] = s;
        }
    return validate(t, "Dic" + std::to_string(n), names);
}

FiniteGroup direct_product(const FiniteGroup& g, const FiniteGroup& h, int max_order) {
    long long order = static_cast<long long>(g.order()) * h.order();
    if (order > max_order) throw ScaleGuardError("direct_product: order exceeds scale guard");
    const int n = static_cast<int>(order);
    const int hn = h.order();
    std::vector<std::vector<int>> t(n, std::vector<int>(n));
    for (int a = 0; a < g.order(); ++a)
        for (int b = 0; b < hn; ++b)
            for (int c = 0; c < g.order(); ++c)
                for (int d = 0; d < hn; ++d)
                    t[a * hn + b][c * hn + d] = g.mul(a, c) * hn + h.mul(b, d);
    std::vector<std::string> names(n);
    for (int a = 0; a < g.order(); ++a)
        for (int b = 0; b < hn; ++b)
            names[a * hn + b] = "(" + g.element_name(a) + "," + h.element_name(b) + ")";
    return validate(t, g.name() + "x" + h.name(), names, max_order);
}

int element_order(const FiniteGroup& g, int x) {
    if (x < 0 || x >= g.order()) throw Error("element_order: index out of range");
    int acc = x, k = 1;
    while (acc != 0) {
        acc = g.mul(acc, x);
        ++k;
    }
    return k;
}

bool is_cyclic(const FiniteGroup& g) {
    for (int i = 0; i < g.order(); ++i)
        if (element_order(g, i) == g.order()) return true;
    return false;
}

bool is_abelian(const FiniteGroup& g) {
    for (int i = 0; i < g.order(); ++i)
        for (int j = i + 1; j < g.order(); ++j)
            if (g.mul(i, j) != g.mul(j, i)) return false;
    return true;
}

Subset center(const FiniteGroup& g) {
    return centralizer(g, Subset::full_set(g));
}

Subset centralizer(const FiniteGroup& g, const Subset& s) {
    std::vector<int> out;
    for (int x = 0; x < g.order(); ++x) {
        bool commutes = true;
        for (int m : s.members())
            if (g.mul(x, m) != g.mul(m, x)) {
                commutes = false;
                break;
            }
        if (commutes) out.push_back(x);
    }
    return Subset::of(g, std::move(out));
}

Subset subgroup_generated(const FiniteGroup& g, const Subset& s) {
    std::vector<char> in(g.order(), 0);
    std::vector<int> elems;
    auto add = [&](int x) {
        if (!in[x]) {
            in[x] = 1;
            elems.push_back(x);
        }
    };
    add(0);
    for (int m : s.members()) add(m);
    for (std::size_t i = 0; i < elems.size(); ++i) {
        add(g.inv(elems[i]));
        for (std::size_t j = 0; j <= i; ++j) {
            add(g.mul(elems[i], elems[j]));
            add(g.mul(elems[j], elems[i]));
        }
    }
    return Subset::of(g, std::move(elems));
}

bool is_subgroup(const FiniteGroup& g, const Subset& s) {
    if (!s.contains(0)) return false;
    for (int a : s.members()) {
        if (!s.contains(g.inv(a))) return false;
        for (int b : s.members())
            if (!s.contains(g.mul(a, b))) return false;
    }
    return true;
}

FiniteGroup load_cay(std::istream& in, const std::string& fallback_name) {
    std::string line;
    int lineno = 0;
    std::string name = fallback_name;

    // Optional leading comment lines.
    std::streampos pos = in.tellg();
    while (std::getline(in, line)) {
        ++lineno;
        std::string trimmed = line;
        trimmed.erase(0, trimmed.find_first_not_of(" \t\r"));
        if (!trimmed.empty() && trimmed[0] == '#') {
            trimmed.erase(0, 1);
            trimmed.erase(0, trimmed.find_first_not_of(" \t"));
            while (!trimmed.empty() && (trimmed.back() == '\r' || trimmed.back() == ' '))
                trimmed.pop_back();
            if (!trimmed.empty()) name = trimmed;
            pos = in.tellg();
            continue;
        }
        break;
    }
    if (in.eof() && line.empty()) throw FileFormatError("empty .cay file", lineno);

    std::istringstream head(line);
    long long n = 0;
    if (!(head >> n) || n < 1) throw FileFormatError("expected positive order on first data line", lineno);
    std::string extra;
    if (head >> extra) throw FileFormatError("trailing tokens after order", lineno);
    if (n > kMaxTableOrder)
        throw ScaleGuardError("order " + std::to_string(n) + " exceeds scale guard " +
                              std::to_string(kMaxTableOrder));

    std::vector<std::vector<int>> table;
    for (int i = 0; i < n; ++i) {
        if (!std::getline(in, line)) throw FileFormatError("missing table row " + std::to_string(i), lineno + 1);
        ++lineno;
        std::istringstream row(line);
        std::vector<int> r;
        long long v;
        while (row >> v) r.push_back(static_cast<int>(v));
        if (static_cast<long long>(r.size()) != n)
            throw FileFormatError("row " + std::to_string(i) + " has " + std::to_string(r.size()) +
                                  " entries, expected " + std::to_string(n), lineno);
        table.push_back(std::move(r));
    }
    try {
        return validate(table, name);
    } catch (const GroupValidationError& e) {
        throw FileFormatError(std::string("invalid Cayley table: ") + e.what(), lineno);
    }
}

FiniteGroup load_cay_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    return load_cay(in, path.stem().string());
}

void save_cay(const FiniteGroup& g, std::ostream& out) {
    out << "# " << g.name() << "\n";
    out << g.order() << "\n";
    for (int i = 0; i < g.order(); ++i) {
        for (int j = 0; j < g.order(); ++j) {
            if (j) out << ' ';
            out << g.mul(i, j);
        }
        out << "\n";
    }
}

} // namespace defcyc
