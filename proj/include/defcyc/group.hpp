#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace defcyc {

// Scale guard for table-backed operations. Beyond this order, constructors
// and loaders refuse rather than degrade.
inline constexpr int kMaxTableOrder = 128;

/// A finite group given by its full Cayley table over element indices
/// 0..n-1. Index 0 is always the identity. Immutable after construction;
/// safe to share read-only across threads.
class FiniteGroup {
public:
    int order() const { return n_; }

    /// Index of g_i * g_j.
    int mul(int i, int j) const { return table_[static_cast<std::size_t>(i) * n_ + j]; }

    /// Index of g_i^{-1}.
    int inv(int i) const { return inverse_[i]; }

    const std::string& name() const { return name_; }
    const std::string& element_name(int i) const { return element_names_[i]; }
    const std::vector<std::string>& element_names() const { return element_names_; }

    /// Resolve an element by display name, or by decimal index as fallback.
    /// Returns -1 if not found.
    int element_by_name(const std::string& s) const;

    /// Row-major copy of the table, for serialization and tests.
    std::vector<std::vector<int>> table_rows() const;

    bool same_table(const FiniteGroup& other) const {
        return n_ == other.n_ && table_ == other.table_;
    }

private:
    FiniteGroup(int n, std::vector<int> table, std::string name,
                std::vector<std::string> element_names);

    friend FiniteGroup validate(const std::vector<std::vector<int>>&, std::string,
                                std::vector<std::string>, int);

    int n_;
    std::vector<int> table_;   // row-major n*n
    std::vector<int> inverse_; // inverse_[i] = index of g_i^{-1}
    std::string name_;
    std::vector<std::string> element_names_;
};

/// A sorted, duplicate-free set of element indices of a parent group.
class Subset {
public:
    Subset() = default;

    /// Sorts, deduplicates, and checks all members against the parent order.
    static Subset of(const FiniteGroup& g, std::vector<int> members);
    static Subset empty_set(const FiniteGroup& g);
    static Subset full_set(const FiniteGroup& g);

    const std::vector<int>& members() const { return members_; }
    std::size_t size() const { return members_.size(); }
    bool contains(int x) const;
    const FiniteGroup* parent() const { return parent_; }

    friend bool operator==(const Subset& a, const Subset& b) {
        return a.members_ == b.members_;
    }

private:
    const FiniteGroup* parent_ = nullptr;
    std::vector<int> members_;
};

/// Checks the group axioms literally on the table: closure, identity at
/// index 0, associativity, and permutation rows/columns. Throws
/// GroupValidationError with a witness on failure, ScaleGuardError beyond
/// max_order.
FiniteGroup validate(const std::vector<std::vector<int>>& table, std::string name = {},
                     std::vector<std::string> element_names = {},
                     int max_order = kMaxTableOrder);

FiniteGroup make_cyclic(int n);

/// Direct product of cyclic groups Z_{f1} x ... x Z_{fk}, every factor >= 2.
/// The empty list yields the trivial group. Element indices are mixed-radix
/// tuples with the last factor fastest.
FiniteGroup make_abelian(const std::vector<int>& factors);

/// Dihedral group of order 2n. Elements r^a f^b with the usual relations.
FiniteGroup make_dihedral(int n);

FiniteGroup make_quaternion();

/// Symmetric group S_k, k <= 4 (catalog scale guard). Permutations in
/// lexicographic order so the identity sits at index 0.
FiniteGroup make_symmetric(int k);

/// Alternating group A_k, k <= 4.
FiniteGroup make_alternating(int k);

/// Dicyclic group Dic_n of order 4n (n >= 2); Dic_2 = Q8, Dic_3 = Z3:Z4.
FiniteGroup make_dicyclic(int n);

/// The scale guard is configurable here because product-law properties
/// range slightly past the default (e.g. Z_12 x Z_12).
FiniteGroup direct_product(const FiniteGroup& g, const FiniteGroup& h,
                           int max_order = kMaxTableOrder);

/// Smallest k >= 1 with g^k = identity.
int element_order(const FiniteGroup& g, int x);

bool is_cyclic(const FiniteGroup& g);
bool is_abelian(const FiniteGroup& g);

Subset center(const FiniteGroup& g);
Subset centralizer(const FiniteGroup& g, const Subset& s);

/// Closure of S together with the identity under product and inverse.
Subset subgroup_generated(const FiniteGroup& g, const Subset& s);

/// True if the subset is closed under product and inverse and contains the
/// identity.
bool is_subgroup(const FiniteGroup& g, const Subset& s);

// --- .cay file format -------------------------------------------------
//
// Line 1 is the decimal order n; lines 2..n+1 hold n space-separated
// 0-based indices each. An optional leading comment line starts with '#'
// (its text becomes the group name). Index 0 must be the identity; the
// loader verifies and refuses to relabel.

FiniteGroup load_cay(std::istream& in, const std::string& fallback_name = "cay");
FiniteGroup load_cay_file(const std::filesystem::path& path);
void save_cay(const FiniteGroup& g, std::ostream& out);

} // namespace defcyc
