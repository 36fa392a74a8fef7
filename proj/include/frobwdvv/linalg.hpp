#pragma once

#include <algorithm>
#include <vector>

#include "frobwdvv/errors.hpp"
#include "frobwdvv/scalar.hpp"

namespace frobwdvv {

template <class S>
using Matrix = std::vector<std::vector<S>>;

template <class S>
Matrix<S> zeroMatrix(std::size_t r, std::size_t c) {
    return Matrix<S>(r, std::vector<S>(c, ScalarOps<S>::fromRational(0)));
}

template <class S>
Matrix<S> identityMatrix(std::size_t n) {
    auto m = zeroMatrix<S>(n, n);
    for (std::size_t i = 0; i < n; ++i) m[i][i] = ScalarOps<S>::fromRational(1);
    return m;
}

template <class S>
Matrix<S> matmul(const Matrix<S>& a, const Matrix<S>& b) {
    auto r = zeroMatrix<S>(a.size(), b.empty() ? 0 : b[0].size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t k = 0; k < b.size(); ++k) {
            if (ScalarOps<S>::isZero(a[i][k])) continue;
            for (std::size_t j = 0; j < b[k].size(); ++j) r[i][j] += a[i][k] * b[k][j];
        }
    return r;
}

template <class S>
Matrix<S> transpose(const Matrix<S>& a) {
    auto r = zeroMatrix<S>(a.empty() ? 0 : a[0].size(), a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a[i].size(); ++j) r[j][i] = a[i][j];
    return r;
}

template <class S>
struct LinearSolution {
    std::vector<S> x;           // particular solution, free variables set to zero
    std::vector<int> freeVars;  // columns without a pivot
    bool consistent = true;
    int rank = 0;
};

/// Gauss-Jordan elimination on A x = b.
template <class S>
LinearSolution<S> solveLinear(Matrix<S> a, std::vector<S> b) {
    using Ops = ScalarOps<S>;
    const std::size_t rows = a.size();
    const std::size_t cols = rows ? a[0].size() : 0;
    LinearSolution<S> out;
    std::vector<int> pivotCol;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t best = rows;
        for (std::size_t i = r; i < rows; ++i) {
            if (Ops::isZero(a[i][c])) continue;
            if (best == rows) best = i;
            if constexpr (!Ops::exact) {
                if (Ops::magnitude(a[i][c]) > Ops::magnitude(a[best][c])) best = i;
            } else {
                break;
            }
        }
        if (best == rows) continue;
        std::swap(a[r], a[best]);
        std::swap(b[r], b[best]);
        S inv = S(Ops::fromRational(1)) / a[r][c];
        for (std::size_t j = c; j < cols; ++j) a[r][j] *= inv;
        b[r] *= inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || Ops::isZero(a[i][c])) continue;
            S f = a[i][c];
            for (std::size_t j = c; j < cols; ++j)
                if (!Ops::isZero(a[r][j])) a[i][j] -= f * a[r][j];
            b[i] -= f * b[r];
        }
        pivotCol.push_back(static_cast<int>(c));
        ++r;
    }
    out.rank = static_cast<int>(r);
    for (std::size_t i = r; i < rows; ++i)
        if (!Ops::isZero(b[i])) out.consistent = false;
    out.x.assign(cols, Ops::fromRational(0));
    std::vector<bool> isPivot(cols, false);
    for (std::size_t i = 0; i < r; ++i) {
        out.x[pivotCol[i]] = b[i];
        isPivot[pivotCol[i]] = true;
    }
    for (std::size_t c = 0; c < cols; ++c)
        if (!isPivot[c]) out.freeVars.push_back(static_cast<int>(c));
    return out;
}

template <class S>
Matrix<S> inverse(const Matrix<S>& a) {
    const std::size_t n = a.size();
    Matrix<S> m = a;
    Matrix<S> inv = identityMatrix<S>(n);
    using Ops = ScalarOps<S>;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t best = n;
        for (std::size_t i = c; i < n; ++i) {
            if (Ops::isZero(m[i][c])) continue;
            if (best == n || Ops::magnitude(m[i][c]) > Ops::magnitude(m[best][c])) best = i;
            if constexpr (Ops::exact) break;
        }
        if (best == n) throw SingularJacobianError("matrix is singular");
        std::swap(m[c], m[best]);
        std::swap(inv[c], inv[best]);
        S p = S(Ops::fromRational(1)) / m[c][c];
        for (std::size_t j = 0; j < n; ++j) {
            m[c][j] *= p;
            inv[c][j] *= p;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == c || Ops::isZero(m[i][c])) continue;
            S f = m[i][c];
            for (std::size_t j = 0; j < n; ++j) {
                m[i][j] -= f * m[c][j];
                inv[i][j] -= f * inv[c][j];
            }
        }
    }
    return inv;
}

}  // namespace frobwdvv
