#pragma once

// Concrete unipotent representation theory: Jordan blocks, group actions,
// hom-spaces between indecomposables, fusion, and the jellyfish vector with
// its F_q-invariance checks.

#include "unidiag/matrix.hpp"

#include <map>

namespace unidiag {

struct DimTooLargeForCharP : field_error {
    DimTooLargeForCharP(uint32_t i, uint32_t p)
        : field_error("DimTooLargeForCharP: V_" + std::to_string(i) + " in characteristic " +
                      std::to_string(p)) {}
};
struct NotUnipotent : field_error {
    NotUnipotent() : field_error("NotUnipotent") {}
};
struct InternalDimensionMismatch : field_error {
    InternalDimensionMismatch() : field_error("InternalDimensionMismatch in hom_basis") {}
};
struct FactorialNotInvertible : field_error {
    explicit FactorialNotInvertible(uint32_t n)
        : field_error("FactorialNotInvertible: " + std::to_string(n) + "!") {}
};

// Upper-bidiagonal J_i with 1 on diagonal and superdiagonal.
inline Matrix jordan_block(uint32_t i, const FieldSpec& f) {
    if (i < 1) throw field_error("jordan_block: dimension must be positive");
    if (f.characteristic() != 0 && i > f.characteristic())
        throw DimTooLargeForCharP(i, f.characteristic());
    Matrix m = Matrix::identity(i, f);
    for (uint32_t r = 0; r + 1 < i; ++r) m.at(r, r + 1) = Scalar::one(f);
    return m;
}

// J_i^x, Kronecker tensorPower-th power. x may be negative (inverse power).
inline Matrix action_matrix(uint32_t i, long long x, uint32_t tensorPower, const FieldSpec& f) {
    Matrix j = jordan_block(i, f).pow(x);
    Matrix acc = j;
    for (uint32_t t = 1; t < tensorPower; ++t) acc = acc.kron(j);
    return acc;
}

// Action of a field element x on V = V_2 via [[1,x],[0,1]], extended by
// Kronecker powers. For integer x this agrees with action_matrix(2, x, ...).
inline Matrix action_matrix_v2(const Scalar& x, uint32_t tensorPower) {
    const FieldSpec& f = x.field();
    Matrix j(2, 2, f);
    j.at(0, 0) = Scalar::one(f);
    j.at(0, 1) = x;
    j.at(1, 1) = Scalar::one(f);
    Matrix acc = j;
    for (uint32_t t = 1; t < tensorPower; ++t) acc = acc.kron(j);
    return acc;
}

// Explicit shift-map basis (T_0,...,T_{s-1}) of Hom(V_n, V_m), s = min(n,m):
// T_i acts by N_s^i on C^s sitting in the last s coordinates of the source
// and the first s coordinates of the target. A from-scratch solve of
// T J_n = J_m T cross-checks the dimension.
inline std::vector<Matrix> hom_basis(uint32_t n, uint32_t m, const FieldSpec& f) {
    uint32_t s = std::min(n, m);
    std::vector<Matrix> basis;
    for (uint32_t i = 0; i < s; ++i) {
        Matrix t(m, n, f);
        for (uint32_t r = 0; r + i < s; ++r) t.at(r, (n - s) + r + i) = Scalar::one(f);
        basis.push_back(t);
    }

    // Solve T J_n = J_m T as a linear system in the m*n entries of T.
    Matrix jn = jordan_block(n, f), jm = jordan_block(m, f);
    Matrix sys(m * n, m * n, f);
    size_t row = 0;
    for (uint32_t a = 0; a < m; ++a)
        for (uint32_t b = 0; b < n; ++b, ++row) {
            // (T J_n - J_m T)[a][b] = sum_k T[a][k] Jn[k][b] - Jm[a][k] T[k][b]
            for (uint32_t k = 0; k < n; ++k) sys.at(row, a * n + k) += jn.at(k, b);
            for (uint32_t k = 0; k < m; ++k) sys.at(row, k * n + b) -= jm.at(a, k);
        }
    Matrix ker = sys.kernel();
    if (ker.cols() != s) throw InternalDimensionMismatch();
    for (const Matrix& t : basis) {
        if ((t * jn) != (jm * t)) throw InternalDimensionMismatch();
    }
    return basis;
}

// Multiset of Jordan block sizes from the rank sequence of (M - I)^k.
inline std::vector<uint32_t> jordan_type(const Matrix& m) {
    if (m.rows() != m.cols()) throw ShapeMismatch();
    size_t dim = m.rows();
    const FieldSpec& f = m.field();
    Matrix nil = m - Matrix::identity(dim, f);
    std::vector<size_t> ranks{dim}; // rank of nil^0
    Matrix power = Matrix::identity(dim, f);
    for (size_t k = 1; k <= dim + 1; ++k) {
        power = power * nil;
        ranks.push_back(power.rank());
    }
    if (ranks[dim] != 0) throw NotUnipotent();
    std::vector<uint32_t> parts;
    for (size_t s = 1; s <= dim; ++s) {
        size_t mult = ranks[s - 1] + ranks[s + 1] - 2 * ranks[s];
        for (size_t c = 0; c < mult; ++c) parts.push_back(static_cast<uint32_t>(s));
    }
    std::sort(parts.begin(), parts.end());
    size_t total = 0;
    for (uint32_t x : parts) total += x;
    if (total != dim) throw NotUnipotent();
    return parts;
}

// Jordan type of J_2 (x) J_i: V (x) V_i decomposed into indecomposables.
inline std::vector<uint32_t> fusion_decompose(uint32_t i, const FieldSpec& f) {
    Matrix j2 = jordan_block(2, f);
    Matrix ji = jordan_block(i, f);
    return jordan_type(j2.kron(ji));
}

// j_{q,n}: entry 1 at basis indices whose length is a nonzero proper
// multiple of q-1, else 0. For q = p, n = 2p-1 this is the jellyfish map.
inline Matrix jelly_vector(const FieldSpec& f, uint32_t n) {
    if (f.kind() == FieldSpec::Kind::Char0) throw NotPrimePower(0);
    uint64_t q = f.order();
    size_t len = size_t(1) << n;
    Matrix row(1, len, f);
    for (size_t z = 0; z < len; ++z) {
        uint32_t l = static_cast<uint32_t>(__builtin_popcountll(z));
        if (l != 0 && l != n && l % (q - 1) == 0) row.at(0, z) = Scalar::one(f);
    }
    return row;
}

inline Matrix jelly_vector(uint64_t q, uint32_t n) { return jelly_vector(FieldSpec::of_order(q), n); }

// M . domAction = codAction . M exactly.
inline bool equivariance_check(const Matrix& m, const Matrix& domAction, const Matrix& codAction) {
    if (m.cols() != domAction.rows() || codAction.cols() != m.rows()) throw ShapeMismatch();
    return (m * domAction) == (codAction * m);
}

// sum_{0 < j(q-1) < l} C(l, j(q-1)) = 0 mod p; expected true for all inputs.
inline bool binomial_sum_zero(uint64_t q, uint64_t l) {
    const FieldSpec& f = FieldSpec::of_order(q);
    uint32_t p = f.p();
    BigInt s = 0;
    for (uint64_t j = 1; j * (q - 1) < l; ++j) s += binomial(l, j * (q - 1));
    return s % p == 0;
}

} // namespace unidiag
