#pragma once

#include <cstddef>
#include <vector>

#include "fqdescent/field.hpp"

namespace fqdescent {

/// Dense matrix with entries in one field. All linear algebra is exact;
/// echelon forms use the first nonzero entry of a column as the pivot and are
/// fully reduced, so every basis this library reports is canonical.
class MatrixF {
   public:
    MatrixF() = default;
    MatrixF(Field f, std::size_t rows, std::size_t cols)
        : f_(std::move(f)), rows_(rows), cols_(cols), e_(rows * cols, f_.zero()) {}

    static MatrixF identity(const Field& f, std::size_t n) {
        MatrixF m(f, n, n);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = f.one();
        return m;
    }

    const Field& field() const { return f_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    FieldElement& at(std::size_t i, std::size_t j) { return e_[i * cols_ + j]; }
    const FieldElement& at(std::size_t i, std::size_t j) const { return e_[i * cols_ + j]; }

    bool operator==(const MatrixF& o) const { return f_ == o.f_ && rows_ == o.rows_ && cols_ == o.cols_ && e_ == o.e_; }
    bool operator!=(const MatrixF& o) const { return !(*this == o); }

    MatrixF operator+(const MatrixF& o) const {
        check_same_shape(o);
        MatrixF r = *this;
        for (std::size_t i = 0; i < e_.size(); ++i) r.e_[i] = e_[i] + o.e_[i];
        return r;
    }

    MatrixF operator-(const MatrixF& o) const {
        check_same_shape(o);
        MatrixF r = *this;
        for (std::size_t i = 0; i < e_.size(); ++i) r.e_[i] = e_[i] - o.e_[i];
        return r;
    }

    MatrixF operator-() const {
        MatrixF r = *this;
        for (auto& x : r.e_) x = -x;
        return r;
    }

    MatrixF operator*(const MatrixF& o) const {
        if (f_ != o.f_) throw FieldMismatchError("matrix product across fields");
        if (cols_ != o.rows_) throw std::invalid_argument("matrix product shape mismatch");
        MatrixF r(f_, rows_, o.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                const FieldElement& a = at(i, k);
                if (a.is_zero()) continue;
                for (std::size_t j = 0; j < o.cols_; ++j) r.at(i, j) += a * o.at(k, j);
            }
        return r;
    }

    std::vector<FieldElement> apply(const std::vector<FieldElement>& v) const {
        if (v.size() != cols_) throw std::invalid_argument("matrix apply shape mismatch");
        std::vector<FieldElement> r(rows_, f_.zero());
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                if (!at(i, j).is_zero()) r[i] += at(i, j) * v[j];
        return r;
    }

    MatrixF transpose() const {
        MatrixF r(f_, cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
        return r;
    }

    /// Entrywise x -> x^(q^s).
    MatrixF frobenius_entrywise(std::int64_t s = 1) const {
        MatrixF r = *this;
        for (auto& x : r.e_) x = x.frobenius(s);
        return r;
    }

    /// Entrywise image under a field embedding.
    MatrixF map_embed(const EmbeddingMap& emb) const {
        MatrixF r(emb.target(), rows_, cols_);
        for (std::size_t i = 0; i < e_.size(); ++i) r.e_[i] = emb.apply(e_[i]);
        return r;
    }

    bool is_zero() const {
        for (const auto& x : e_)
            if (!x.is_zero()) return false;
        return true;
    }

   private:
    void check_same_shape(const MatrixF& o) const {
        if (f_ != o.f_) throw FieldMismatchError("matrix op across fields");
        if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix shape mismatch");
    }

    Field f_;
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<FieldElement> e_;
};

struct RrefResult {
    MatrixF reduced;
    std::vector<std::size_t> pivot_cols;
    std::size_t rank = 0;
};

/// Reduced row echelon form; optionally carries an augmented block along
/// (aug may be null).
inline RrefResult rref(MatrixF m, MatrixF* aug = nullptr) {
    std::size_t piv = 0;
    RrefResult res;
    for (std::size_t j = 0; j < m.cols() && piv < m.rows(); ++j) {
        std::size_t sel = piv;
        while (sel < m.rows() && m.at(sel, j).is_zero()) ++sel;
        if (sel == m.rows()) continue;
        if (sel != piv) {
            for (std::size_t k = 0; k < m.cols(); ++k) std::swap(m.at(sel, k), m.at(piv, k));
            if (aug)
                for (std::size_t k = 0; k < aug->cols(); ++k) std::swap(aug->at(sel, k), aug->at(piv, k));
        }
        FieldElement inv = m.at(piv, j).inverse();
        for (std::size_t k = 0; k < m.cols(); ++k) m.at(piv, k) = m.at(piv, k) * inv;
        if (aug)
            for (std::size_t k = 0; k < aug->cols(); ++k) aug->at(piv, k) = aug->at(piv, k) * inv;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == piv || m.at(i, j).is_zero()) continue;
            FieldElement c = m.at(i, j);
            for (std::size_t k = 0; k < m.cols(); ++k) m.at(i, k) = m.at(i, k) - c * m.at(piv, k);
            if (aug)
                for (std::size_t k = 0; k < aug->cols(); ++k) aug->at(i, k) = aug->at(i, k) - c * aug->at(piv, k);
        }
        res.pivot_cols.push_back(j);
        ++piv;
    }
    res.rank = piv;
    res.reduced = std::move(m);
    return res;
}

inline std::size_t rank(const MatrixF& m) { return rref(m).rank; }

/// Canonical basis of {v : Mv = 0}. The basis vectors, stacked by free
/// column, are themselves in reduced echelon shape, so the output is
/// deterministic.
inline std::vector<std::vector<FieldElement>> nullspace(const MatrixF& m) {
    RrefResult r = rref(m);
    const Field& f = m.field();
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto j : r.pivot_cols) is_pivot[j] = true;
    std::vector<std::vector<FieldElement>> basis;
    for (std::size_t j = 0; j < m.cols(); ++j) {
        if (is_pivot[j]) continue;
        std::vector<FieldElement> v(m.cols(), f.zero());
        v[j] = f.one();
        for (std::size_t rrow = 0; rrow < r.rank; ++rrow) v[r.pivot_cols[rrow]] = -r.reduced.at(rrow, j);
        basis.push_back(std::move(v));
    }
    return basis;
}

inline FieldElement det(const MatrixF& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("determinant of a non-square matrix");
    MatrixF a = m;
    const Field& f = m.field();
    FieldElement d = f.one();
    std::size_t n = a.rows();
    for (std::size_t j = 0; j < n; ++j) {
        std::size_t sel = j;
        while (sel < n && a.at(sel, j).is_zero()) ++sel;
        if (sel == n) return f.zero();
        if (sel != j) {
            for (std::size_t k = 0; k < n; ++k) std::swap(a.at(sel, k), a.at(j, k));
            d = -d;
        }
        d = d * a.at(j, j);
        FieldElement inv = a.at(j, j).inverse();
        for (std::size_t i = j + 1; i < n; ++i) {
            if (a.at(i, j).is_zero()) continue;
            FieldElement c = a.at(i, j) * inv;
            for (std::size_t k = j; k < n; ++k) a.at(i, k) = a.at(i, k) - c * a.at(j, k);
        }
    }
    return d;
}

/// Exact inverse. Throws SingularError (with the rank) when rank-deficient.
inline MatrixF inverse(const MatrixF& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("inverse of a non-square matrix");
    MatrixF aug = MatrixF::identity(m.field(), m.rows());
    MatrixF copy = m;
    RrefResult r = rref(std::move(copy), &aug);
    if (r.rank != m.rows()) throw SingularError("matrix is singular", r.rank);
    return aug;
}

/// Exact solution of M x = b for square invertible M.
inline std::vector<FieldElement> solve(const MatrixF& m, const std::vector<FieldElement>& b) {
    if (m.rows() != m.cols()) throw std::invalid_argument("solve requires a square matrix");
    if (b.size() != m.rows()) throw std::invalid_argument("solve shape mismatch");
    MatrixF aug(m.field(), m.rows(), 1);
    for (std::size_t i = 0; i < b.size(); ++i) aug.at(i, 0) = b[i];
    MatrixF copy = m;
    RrefResult r = rref(std::move(copy), &aug);
    if (r.rank != m.rows()) throw SingularError("matrix is singular", r.rank);
    std::vector<FieldElement> x(m.rows(), m.field().zero());
    for (std::size_t i = 0; i < m.rows(); ++i) x[i] = aug.at(i, 0);
    return x;
}

}  // namespace fqdescent
