#include "defcyc/snf.hpp"

#include "defcyc/errors.hpp"

#include <algorithm>
#include <utility>

namespace defcyc {

IntMat identity_matrix(int n) {
    IntMat m(n, std::vector<Integer>(n, 0));
    for (int i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

IntMat mat_mul(const IntMat& a, const IntMat& b) {
    const int r = static_cast<int>(a.size());
    const int inner = r ? static_cast<int>(a[0].size()) : 0;
    const int c = b.empty() ? 0 : static_cast<int>(b[0].size());
    if (inner != static_cast<int>(b.size())) throw Error("mat_mul: dimension mismatch");
    IntMat out(r, std::vector<Integer>(c, 0));
    for (int i = 0; i < r; ++i)
        for (int k = 0; k < inner; ++k) {
            if (a[i][k] == 0) continue;
            for (int j = 0; j < c; ++j) out[i][j] += a[i][k] * b[k][j];
        }
    return out;
}

Integer determinant(IntMat m) {
    const int n = static_cast<int>(m.size());
    if (n == 0) return 1;
    for (const auto& row : m)
        if (static_cast<int>(row.size()) != n) throw Error("determinant: matrix not square");
    Integer sign = 1, prev = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (m[k][k] == 0) {
            int swap_row = -1;
            for (int i = k + 1; i < n; ++i)
                if (m[i][k] != 0) {
                    swap_row = i;
                    break;
                }
            if (swap_row == -1) return 0;
            std::swap(m[k], m[swap_row]);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j)
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
        prev = m[k][k];
    }
    return sign * m[n - 1][n - 1];
}

namespace {

void verify_snf(const IntMat& a, const SnfResult& res) {
    const int r = static_cast<int>(a.size());
    const int c = r ? static_cast<int>(a[0].size()) : 0;
    if (mat_mul(mat_mul(res.u, a), res.v) != res.d) throw Error("snf: U*A*V != D");
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j)
            if (i != j && res.d[i][j] != 0) throw Error("snf: D not diagonal");
    const int t = std::min(r, c);
    for (int i = 0; i + 1 < t; ++i) {
        if (res.d[i][i] == 0 && res.d[i + 1][i + 1] != 0)
            throw Error("snf: zero before nonzero on diagonal");
        if (res.d[i][i] != 0 && res.d[i + 1][i + 1] % res.d[i][i] != 0)
            throw Error("snf: divisibility chain violated");
    }
    for (int i = 0; i < t; ++i)
        if (res.d[i][i] < 0) throw Error("snf: negative diagonal entry");
    Integer du = determinant(res.u), dv = determinant(res.v);
    if (du != 1 && du != -1) throw Error("snf: U not unimodular");
    if (dv != 1 && dv != -1) throw Error("snf: V not unimodular");
}

} // namespace

SnfResult snf(const IntMat& a) {
    const int r = static_cast<int>(a.size());
    const int c = r ? static_cast<int>(a[0].size()) : 0;
    for (const auto& row : a)
        if (static_cast<int>(row.size()) != c) throw Error("snf: ragged matrix");

    SnfResult res;
    res.u = identity_matrix(r);
    res.v = identity_matrix(c);
    res.d = a;
    IntMat& d = res.d;

    auto swap_rows = [&](int i, int j) {
        std::swap(d[i], d[j]);
        std::swap(res.u[i], res.u[j]);
    };
    auto swap_cols = [&](int i, int j) {
        for (int k = 0; k < r; ++k) std::swap(d[k][i], d[k][j]);
        for (int k = 0; k < c; ++k) std::swap(res.v[k][i], res.v[k][j]);
    };
    auto row_sub = [&](int i, int j, const Integer& q) { // row_i -= q * row_j
        for (int k = 0; k < c; ++k) d[i][k] -= q * d[j][k];
        for (int k = 0; k < r; ++k) res.u[i][k] -= q * res.u[j][k];
    };
    auto col_sub = [&](int i, int j, const Integer& q) { // col_i -= q * col_j
        for (int k = 0; k < r; ++k) d[k][i] -= q * d[k][j];
        for (int k = 0; k < c; ++k) res.v[k][i] -= q * res.v[k][j];
    };
    auto row_add = [&](int i, int j) { // row_i += row_j
        for (int k = 0; k < c; ++k) d[i][k] += d[j][k];
        for (int k = 0; k < r; ++k) res.u[i][k] += res.u[j][k];
    };
    auto negate_row = [&](int i) {
        for (int k = 0; k < c; ++k) d[i][k] = -d[i][k];
        for (int k = 0; k < r; ++k) res.u[i][k] = -res.u[i][k];
    };

    int t = 0;
    while (t < r && t < c) {
        // Smallest nonzero pivot in the trailing block.
        int pi = -1, pj = -1;
        for (int i = t; i < r; ++i)
            for (int j = t; j < c; ++j)
                if (d[i][j] != 0 &&
                    (pi == -1 || abs(d[i][j]) < abs(d[pi][pj]))) {
                    pi = i;
                    pj = j;
                }
        if (pi == -1) break; // trailing block is zero
        if (pi != t) swap_rows(t, pi);
        if (pj != t) swap_cols(t, pj);

        bool clean = true;
        for (int i = t + 1; i < r; ++i) {
            if (d[i][t] == 0) continue;
            Integer q = d[i][t] / d[t][t];
            if (q != 0) row_sub(i, t, q);
            if (d[i][t] != 0) clean = false;
        }
        for (int j = t + 1; j < c; ++j) {
            if (d[t][j] == 0) continue;
            Integer q = d[t][j] / d[t][t];
            if (q != 0) col_sub(j, t, q);
            if (d[t][j] != 0) clean = false;
        }
        if (!clean) continue; // remainders are smaller; re-pivot

        // Divisibility: fold in a row holding a non-multiple and restart.
        bool fixed = false;
        for (int i = t + 1; i < r && !fixed; ++i)
            for (int j = t + 1; j < c && !fixed; ++j)
                if (d[i][j] % d[t][t] != 0) {
                    row_add(t, i);
                    fixed = true;
                }
        if (fixed) continue;

        if (d[t][t] < 0) negate_row(t);
        ++t;
    }

    verify_snf(a, res);
    return res;
}

} // namespace defcyc
