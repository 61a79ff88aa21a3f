#pragma once

#include "defcyc/numtheory.hpp"

#include <vector>

namespace defcyc {

using IntMat = std::vector<std::vector<Integer>>;

IntMat identity_matrix(int n);
IntMat mat_mul(const IntMat& a, const IntMat& b);
Integer determinant(IntMat m); // square; fraction-free (Bareiss)

/// U*A*V = D with D diagonal under a divisibility chain d1 | d2 | ... and
/// U, V unimodular. All three postconditions are re-verified literally on
/// every call before returning. Diagonal entries are nonnegative.
struct SnfResult {
    IntMat u, d, v;
};

SnfResult snf(const IntMat& a);

} // namespace defcyc
