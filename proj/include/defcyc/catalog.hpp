#pragma once

#include "defcyc/group.hpp"

#include <optional>
#include <string>
#include <vector>

namespace defcyc {

inline constexpr int kMaxCatalogOrder = 64;

struct CatalogEntry {
    FiniteGroup group;
    // True for orders <= 15, where the list is one representative per
    // isomorphism class. Above 15 the entries form a declared
    // non-exhaustive family (abelian groups, dihedral groups, products of
    // catalog members).
    bool exhaustive_class;
};

/// Groups of order <= N, sorted by (order, name). Complete up to order 15.
std::vector<CatalogEntry> catalog_up_to(int n);

/// Resolve an ASCII group name: catalog names (Z6, Z2xZ4, D8, Q8, S3, S4,
/// A4, Dic3, ...) or constructor patterns (Z<n>, D<even order>, S<k>, A<k>,
/// Dic<n>, and x-separated abelian products).
std::optional<FiniteGroup> group_by_name(const std::string& name);

} // namespace defcyc
