#pragma once

#include <vector>

#include "fqdescent/field.hpp"
#include "fqdescent/matrix.hpp"

namespace fqdescent {

/// A finite-dimensional associative unital F_q-algebra given by structure
/// constants: e_i e_j = sum_k c(i,j,k) e_k. Associativity and unitality are
/// verified at construction.
class FinAlgebra {
   public:
    FinAlgebra(Field fq, std::size_t dim, std::vector<FieldElement> structure, std::vector<FieldElement> unit)
        : fq_(std::move(fq)), dim_(dim), c_(std::move(structure)), unit_(std::move(unit)) {
        if (fq_.extension_degree() != 1)
            throw std::invalid_argument("FinAlgebra: base field must be F_q itself (m = 1)");
        if (c_.size() != dim_ * dim_ * dim_ || unit_.size() != dim_)
            throw std::invalid_argument("FinAlgebra: structure constant shape mismatch");
        for (const auto& x : c_)
            if (x.field() != fq_) throw FieldMismatchError("FinAlgebra: constants over a different field");
        for (const auto& x : unit_)
            if (x.field() != fq_) throw FieldMismatchError("FinAlgebra: unit over a different field");
        validate();
    }

    const Field& fq() const { return fq_; }
    std::size_t dim() const { return dim_; }
    const FieldElement& c(std::size_t i, std::size_t j, std::size_t k) const { return c_[(i * dim_ + j) * dim_ + k]; }
    const std::vector<FieldElement>& unit() const { return unit_; }
    const std::vector<FieldElement>& structure() const { return c_; }

    bool operator==(const FinAlgebra& o) const { return fq_ == o.fq_ && dim_ == o.dim_ && c_ == o.c_ && unit_ == o.unit_; }
    bool operator!=(const FinAlgebra& o) const { return !(*this == o); }

    std::vector<FieldElement> mul(const std::vector<FieldElement>& x, const std::vector<FieldElement>& y) const {
        std::vector<FieldElement> r(dim_, fq_.zero());
        for (std::size_t i = 0; i < dim_; ++i) {
            if (x[i].is_zero()) continue;
            for (std::size_t j = 0; j < dim_; ++j) {
                if (y[j].is_zero()) continue;
                FieldElement xy = x[i] * y[j];
                for (std::size_t k = 0; k < dim_; ++k) r[k] += xy * c(i, j, k);
            }
        }
        return r;
    }

    /// Matrix of left multiplication by e_i in the basis (e_j).
    MatrixF left_mult(std::size_t i) const {
        MatrixF m(fq_, dim_, dim_);
        for (std::size_t j = 0; j < dim_; ++j)
            for (std::size_t k = 0; k < dim_; ++k) m.at(k, j) = c(i, j, k);
        return m;
    }

    /// F_q itself as a one-dimensional algebra.
    static FinAlgebra base_field(const Field& fq) {
        return FinAlgebra(fq, 1, {fq.one()}, {fq.one()});
    }

    /// F_q[t]/(t^k), basis (1, t, ..., t^{k-1}).
    static FinAlgebra truncated_polynomials(const Field& fq, std::size_t k) {
        std::vector<FieldElement> c(k * k * k, fq.zero());
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j)
                if (i + j < k) c[(i * k + j) * k + (i + j)] = fq.one();
        std::vector<FieldElement> unit(k, fq.zero());
        unit[0] = fq.one();
        return FinAlgebra(fq, k, std::move(c), std::move(unit));
    }

    /// F_q x ... x F_q (k factors) with componentwise multiplication.
    static FinAlgebra split_product(const Field& fq, std::size_t k) {
        std::vector<FieldElement> c(k * k * k, fq.zero());
        for (std::size_t i = 0; i < k; ++i) c[(i * k + i) * k + i] = fq.one();
        std::vector<FieldElement> unit(k, fq.one());
        return FinAlgebra(fq, k, std::move(c), std::move(unit));
    }

    /// Dual numbers F_q[eps]/(eps^2).
    static FinAlgebra dual_numbers(const Field& fq) { return truncated_polynomials(fq, 2); }

   private:
    void validate() const {
        // unitality
        std::vector<FieldElement> basis_vec(dim_, fq_.zero());
        for (std::size_t j = 0; j < dim_; ++j) {
            std::vector<FieldElement> ej(dim_, fq_.zero());
            ej[j] = fq_.one();
            auto le = mul(unit_, ej);
            auto re = mul(ej, unit_);
            if (le != ej || re != ej) throw std::invalid_argument("FinAlgebra: unit axiom fails");
        }
        // associativity on basis triples
        for (std::size_t i = 0; i < dim_; ++i)
            for (std::size_t j = 0; j < dim_; ++j)
                for (std::size_t k = 0; k < dim_; ++k) {
                    std::vector<FieldElement> ei(dim_, fq_.zero()), ej(dim_, fq_.zero()), ek(dim_, fq_.zero());
                    ei[i] = fq_.one();
                    ej[j] = fq_.one();
                    ek[k] = fq_.one();
                    if (mul(mul(ei, ej), ek) != mul(ei, mul(ej, ek)))
                        throw std::invalid_argument("FinAlgebra: associativity fails");
                }
    }

    Field fq_;
    std::size_t dim_;
    std::vector<FieldElement> c_;
    std::vector<FieldElement> unit_;
};

}  // namespace fqdescent
