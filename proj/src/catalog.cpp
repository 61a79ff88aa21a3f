#include "defcyc/catalog.hpp"

#include "defcyc/errors.hpp"

#include <algorithm>
#include <cctype>

namespace defcyc {

namespace {

// Invariant-factor chains m_1 | m_2 | ... with product = order, each
// m_i >= 2. One chain per abelian isomorphism class.
void chains_rec(int remaining, int min_factor, std::vector<int>& acc,
                std::vector<std::vector<int>>& out) {
    if (remaining == 1) {
        if (!acc.empty()) out.push_back(acc);
        return;
    }
    for (int m = min_factor; m <= remaining; ++m) {
        if (remaining % m != 0) continue;
        if (!acc.empty() && m % acc.back() != 0) continue;
        acc.push_back(m);
        chains_rec(remaining / m, m, acc, out);
        acc.pop_back();
    }
}

std::vector<std::vector<int>> abelian_classes(int order) {
    std::vector<std::vector<int>> out;
    std::vector<int> acc;
    chains_rec(order, 2, acc, out);
    return out;
}

void add(std::vector<CatalogEntry>& entries, FiniteGroup g, bool exhaustive) {
    entries.push_back(CatalogEntry{std::move(g), exhaustive});
}

} // namespace

std::vector<CatalogEntry> catalog_up_to(int n) {
    if (n < 1) throw Error("catalog_up_to: order bound must be >= 1");
    if (n > kMaxCatalogOrder)
        throw ScaleGuardError("catalog_up_to: bound " + std::to_string(n) + " exceeds " +
                              std::to_string(kMaxCatalogOrder));

    std::vector<CatalogEntry> entries;

    // Orders 1..15: one representative per isomorphism class.
    for (int k = 1; k <= std::min(n, 15); ++k) add(entries, make_cyclic(k), true);
    if (n >= 4) add(entries, make_abelian({2, 2}), true);
    if (n >= 6) add(entries, make_symmetric(3), true);
    if (n >= 8) {
        add(entries, make_abelian({2, 4}), true);
        add(entries, make_abelian({2, 2, 2}), true);
        add(entries, make_dihedral(4), true);   // D8
        add(entries, make_quaternion(), true);
    }
    if (n >= 9) add(entries, make_abelian({3, 3}), true);
    if (n >= 10) add(entries, make_dihedral(5), true);  // D10
    if (n >= 12) {
        add(entries, make_abelian({2, 6}), true);
        add(entries, make_dihedral(6), true);   // D12
        add(entries, make_alternating(4), true);
        add(entries, make_dicyclic(3), true);
    }
    if (n >= 14) add(entries, make_dihedral(7), true);  // D14

    // Declared non-exhaustive families for orders 16..n.
    for (int order = 16; order <= n; ++order) {
        for (const auto& chain : abelian_classes(order)) {
            if (chain.size() == 1) add(entries, make_cyclic(order), false);
            else add(entries, make_abelian(chain), false);
        }
        if (order % 2 == 0) add(entries, make_dihedral(order / 2), false);
        if (order % 4 == 0 && order / 4 >= 4) add(entries, make_dicyclic(order / 4), false);
    }
    // Products of small non-abelian catalog members with cyclic groups.
    if (n >= 16) {
        const std::vector<FiniteGroup> bases = {make_dihedral(4), make_quaternion(),
                                                make_symmetric(3), make_alternating(4),
                                                make_dicyclic(3), make_symmetric(4)};
        for (const auto& b : bases) {
            if (b.order() >= 16 && b.order() <= n) add(entries, b, false);
            for (int k = 2; k * b.order() <= n; ++k) {
                if (k * b.order() < 16) continue;
                add(entries, direct_product(b, make_cyclic(k)), false);
            }
        }
    }

    std::stable_sort(entries.begin(), entries.end(), [](const CatalogEntry& a, const CatalogEntry& b) {
        if (a.group.order() != b.group.order()) return a.group.order() < b.group.order();
        return a.group.name() < b.group.name();
    });
    return entries;
}

std::optional<FiniteGroup> group_by_name(const std::string& name) {
    auto starts = [&](const char* p) { return name.rfind(p, 0) == 0; };
    auto num_after = [&](std::size_t off) -> std::optional<int> {
        if (off >= name.size()) return std::nullopt;
        for (std::size_t i = off; i < name.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(name[i]))) return std::nullopt;
        return std::stoi(name.substr(off));
    };

    try {
        if (name == "Q8") return make_quaternion();
        if (name.find('x') != std::string::npos) {
            // x-separated products; abelian shorthand like Z2xZ4, or products
            // of resolvable names like Q8xZ2.
            std::vector<FiniteGroup> parts;
            std::size_t pos = 0;
            while (pos <= name.size()) {
                std::size_t next = name.find('x', pos);
                std::string piece = name.substr(pos, next == std::string::npos ? next : next - pos);
                auto g = group_by_name(piece);
                if (!g) return std::nullopt;
                parts.push_back(std::move(*g));
                if (next == std::string::npos) break;
                pos = next + 1;
            }
            if (parts.empty()) return std::nullopt;
            FiniteGroup acc = parts[0];
            for (std::size_t i = 1; i < parts.size(); ++i) acc = direct_product(acc, parts[i]);
            return acc;
        }
        if (starts("Dic")) {
            if (auto v = num_after(3)) return make_dicyclic(*v);
            return std::nullopt;
        }
        if (starts("Z")) {
            if (auto v = num_after(1)) return make_cyclic(*v);
            return std::nullopt;
        }
        if (starts("D")) {
            // D<order>: dihedral group of that order (D8 = dihedral of order 8).
            if (auto v = num_after(1)) {
                if (*v % 2 != 0 || *v < 2) return std::nullopt;
                return make_dihedral(*v / 2);
            }
            return std::nullopt;
        }
        if (starts("S")) {
            if (auto v = num_after(1)) return make_symmetric(*v);
            return std::nullopt;
        }
        if (starts("A")) {
            if (auto v = num_after(1)) return make_alternating(*v);
            return std::nullopt;
        }
    } catch (const Error&) {
        return std::nullopt;
    }
    return std::nullopt;
}

} // namespace defcyc
