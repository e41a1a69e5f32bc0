#pragma once

// Dense exact matrices. Row vectors of size 2^n represent elements of
// Hom(V^{(x)n}, 1) throughout the library.

#include "unidiag/field.hpp"

#include <cassert>
#include <functional>

namespace unidiag {

struct ShapeMismatch : field_error {
    ShapeMismatch() : field_error("ShapeMismatch") {}
};

class Matrix {
  public:
    Matrix() : rows_(0), cols_(0), f_(&FieldSpec::rationals()) {}
    Matrix(size_t rows, size_t cols, const FieldSpec& f)
        : rows_(rows), cols_(cols), f_(&f), data_(rows * cols, Scalar::zero(f)) {}

    static Matrix identity(size_t n, const FieldSpec& f) {
        Matrix m(n, n, f);
        for (size_t i = 0; i < n; ++i) m.at(i, i) = Scalar::one(f);
        return m;
    }

    static Matrix from_ints(size_t rows, size_t cols, const FieldSpec& f,
                            std::initializer_list<long long> v) {
        Matrix m(rows, cols, f);
        size_t i = 0;
        for (long long x : v) m.data_[i++] = Scalar::from_int(f, x);
        return m;
    }

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }
    const FieldSpec& field() const { return *f_; }

    Scalar& at(size_t r, size_t c) { return data_[r * cols_ + c]; }
    const Scalar& at(size_t r, size_t c) const { return data_[r * cols_ + c]; }

    bool operator==(const Matrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }
    bool operator!=(const Matrix& o) const { return !(*this == o); }

    bool is_zero() const {
        for (const auto& s : data_)
            if (!s.is_zero()) return false;
        return true;
    }

    Matrix operator+(const Matrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) throw ShapeMismatch();
        Matrix m(*this);
        for (size_t i = 0; i < data_.size(); ++i) m.data_[i] += o.data_[i];
        return m;
    }

    Matrix operator-() const {
        Matrix m(*this);
        for (auto& s : m.data_) s = -s;
        return m;
    }
    Matrix operator-(const Matrix& o) const { return *this + (-o); }

    Matrix operator*(const Matrix& o) const {
        if (cols_ != o.rows_) throw ShapeMismatch();
        Matrix m(rows_, o.cols_, *f_);
        for (size_t i = 0; i < rows_; ++i)
            for (size_t k = 0; k < cols_; ++k) {
                const Scalar& a = at(i, k);
                if (a.is_zero()) continue;
                for (size_t j = 0; j < o.cols_; ++j) {
                    const Scalar& b = o.at(k, j);
                    if (!b.is_zero()) m.at(i, j) += a * b;
                }
            }
        return m;
    }

    Matrix scale(const Scalar& s) const {
        Matrix m(*this);
        for (auto& x : m.data_) x *= s;
        return m;
    }

    Matrix transpose() const {
        Matrix m(cols_, rows_, *f_);
        for (size_t i = 0; i < rows_; ++i)
            for (size_t j = 0; j < cols_; ++j) m.at(j, i) = at(i, j);
        return m;
    }

    Matrix kron(const Matrix& o) const {
        Matrix m(rows_ * o.rows_, cols_ * o.cols_, *f_);
        for (size_t i = 0; i < rows_; ++i)
            for (size_t j = 0; j < cols_; ++j) {
                if (at(i, j).is_zero()) continue;
                for (size_t a = 0; a < o.rows_; ++a)
                    for (size_t b = 0; b < o.cols_; ++b)
                        m.at(i * o.rows_ + a, j * o.cols_ + b) = at(i, j) * o.at(a, b);
            }
        return m;
    }

    Matrix pow(long long e) const {
        if (rows_ != cols_) throw ShapeMismatch();
        if (e < 0) return inverse().pow(-e);
        Matrix acc = identity(rows_, *f_), base = *this;
        while (e) {
            if (e & 1) acc = acc * base;
            base = base * base;
            e >>= 1;
        }
        return acc;
    }

    size_t rank() const {
        Matrix m(*this);
        return m.row_reduce();
    }

    Matrix inverse() const {
        if (rows_ != cols_) throw ShapeMismatch();
        Matrix aug(rows_, 2 * cols_, *f_);
        for (size_t i = 0; i < rows_; ++i) {
            for (size_t j = 0; j < cols_; ++j) aug.at(i, j) = at(i, j);
            aug.at(i, cols_ + i) = Scalar::one(*f_);
        }
        size_t r = aug.row_reduce();
        if (r != rows_) throw field_error("matrix not invertible");
        Matrix inv(rows_, cols_, *f_);
        for (size_t i = 0; i < rows_; ++i)
            for (size_t j = 0; j < cols_; ++j) inv.at(i, j) = aug.at(i, cols_ + j);
        return inv;
    }

    // Basis of {x : A x = 0} as columns.
    Matrix kernel() const {
        Matrix m(*this);
        std::vector<size_t> pivots;
        m.row_reduce(&pivots);
        std::vector<bool> is_pivot(cols_, false);
        for (size_t c : pivots) is_pivot[c] = true;
        std::vector<size_t> free_cols;
        for (size_t c = 0; c < cols_; ++c)
            if (!is_pivot[c]) free_cols.push_back(c);
        Matrix ker(cols_, free_cols.size(), *f_);
        for (size_t fi = 0; fi < free_cols.size(); ++fi) {
            size_t fc = free_cols[fi];
            ker.at(fc, fi) = Scalar::one(*f_);
            for (size_t pr = 0; pr < pivots.size(); ++pr)
                ker.at(pivots[pr], fi) = -m.at(pr, fc);
        }
        return ker;
    }

    // In-place reduced row echelon form; returns rank, optionally pivot columns.
    size_t row_reduce(std::vector<size_t>* pivot_cols = nullptr) {
        size_t r = 0;
        for (size_t c = 0; c < cols_ && r < rows_; ++c) {
            size_t sel = r;
            while (sel < rows_ && at(sel, c).is_zero()) ++sel;
            if (sel == rows_) continue;
            if (sel != r)
                for (size_t j = 0; j < cols_; ++j) std::swap(at(sel, j), at(r, j));
            Scalar piv = at(r, c).inv();
            for (size_t j = c; j < cols_; ++j) at(r, j) *= piv;
            for (size_t i = 0; i < rows_; ++i) {
                if (i == r || at(i, c).is_zero()) continue;
                Scalar coef = at(i, c);
                for (size_t j = c; j < cols_; ++j) at(i, j) -= coef * at(r, j);
            }
            if (pivot_cols) pivot_cols->push_back(c);
            ++r;
        }
        return r;
    }

    std::string to_string() const {
        std::ostringstream os;
        for (size_t i = 0; i < rows_; ++i) {
            for (size_t j = 0; j < cols_; ++j) {
                if (j) os << " ";
                os << at(i, j).to_string();
            }
            os << "\n";
        }
        return os.str();
    }

  private:
    size_t rows_, cols_;
    const FieldSpec* f_;
    std::vector<Scalar> data_;
};

// row * (M (x) ... (x) M), n Kronecker factors of a 2x2 matrix, without
// materialising the big matrix. Row length must be 2^n.
inline Matrix apply_kron2_row(const Matrix& row, const Matrix& m2, size_t n) {
    if (row.rows() != 1 || m2.rows() != 2 || m2.cols() != 2) throw ShapeMismatch();
    size_t len = row.cols();
    if (len != (size_t(1) << n)) throw ShapeMismatch();
    const FieldSpec& f = row.field();
    std::vector<Scalar> cur(len, Scalar::zero(f));
    for (size_t i = 0; i < len; ++i) cur[i] = row.at(0, i);
    for (size_t pos = 0; pos < n; ++pos) {
        // (w * (I .. M .. I))[j] = sum_a w[j with bit at pos set to a] * M[a][bit_pos(j)]
        std::vector<Scalar> nxt(len, Scalar::zero(f));
        size_t stride = size_t(1) << (n - 1 - pos);
        for (size_t i = 0; i < len; ++i) {
            size_t bit = (i / stride) & 1;
            size_t base = i - bit * stride;
            Scalar acc = Scalar::zero(f);
            for (size_t a = 0; a < 2; ++a) {
                const Scalar& mv = m2.at(a, bit);
                if (mv.is_zero()) continue;
                acc += cur[base + a * stride] * mv;
            }
            nxt[i] = acc;
        }
        cur.swap(nxt);
    }
    Matrix out(1, len, f);
    for (size_t i = 0; i < len; ++i) out.at(0, i) = cur[i];
    return out;
}

} // namespace unidiag
