#pragma once

#include <vector>

#include "fqdescent/linear_system.hpp"
#include "fqdescent/matrix.hpp"
#include "fqdescent/semilinear.hpp"

namespace fqdescent {

/// a + b eps in F_{q^m}[eps]/(eps^2). Frobenius acts on the field
/// coefficients and fixes eps.
struct DualElement {
    FieldElement a, b;

    DualElement operator+(const DualElement& o) const { return {a + o.a, b + o.b}; }
    DualElement operator-(const DualElement& o) const { return {a - o.a, b - o.b}; }
    DualElement operator*(const DualElement& o) const { return {a * o.a, a * o.b + b * o.a}; }
    bool operator==(const DualElement& o) const { return a == o.a && b == o.b; }
    bool operator!=(const DualElement& o) const { return !(*this == o); }

    bool is_unit() const { return !a.is_zero(); }
    DualElement inverse() const {
        FieldElement ai = a.inverse();
        return {ai, -(ai * b * ai)};
    }
    DualElement frobenius(std::int64_t s = 1) const { return {a.frobenius(s), b.frobenius(s)}; }
};

/// Square matrix over the dual numbers, stored as the pair (A0, A1) with
/// entries A0 + eps A1.
class DualMatrix {
   public:
    DualMatrix() = default;
    DualMatrix(MatrixF a0, MatrixF a1) : a0_(std::move(a0)), a1_(std::move(a1)) {
        if (a0_.field() != a1_.field() || a0_.rows() != a1_.rows() || a0_.cols() != a1_.cols() ||
            a0_.rows() != a0_.cols())
            throw std::invalid_argument("DualMatrix: mismatched parts");
    }

    static DualMatrix identity(const Field& f, std::size_t n) {
        return DualMatrix(MatrixF::identity(f, n), MatrixF(f, n, n));
    }

    const Field& field() const { return a0_.field(); }
    std::size_t dim() const { return a0_.rows(); }
    const MatrixF& part0() const { return a0_; }
    const MatrixF& part1() const { return a1_; }

    DualMatrix operator*(const DualMatrix& o) const {
        return DualMatrix(a0_ * o.a0_, a0_ * o.a1_ + a1_ * o.a0_);
    }
    bool operator==(const DualMatrix& o) const { return a0_ == o.a0_ && a1_ == o.a1_; }
    bool operator!=(const DualMatrix& o) const { return !(*this == o); }

    bool is_invertible() const {
        try {
            (void)fqdescent::inverse(a0_);
            return true;
        } catch (const SingularError&) {
            return false;
        }
    }

    DualMatrix inverse() const {
        MatrixF i0 = fqdescent::inverse(a0_);
        return DualMatrix(i0, -(i0 * a1_ * i0));
    }

    DualMatrix frobenius_entrywise(std::int64_t s = 1) const {
        return DualMatrix(a0_.frobenius_entrywise(s), a1_.frobenius_entrywise(s));
    }

    DualMatrix map_embed(const EmbeddingMap& emb) const {
        return DualMatrix(a0_.map_embed(emb), a1_.map_embed(emb));
    }

   private:
    MatrixF a0_, a1_;
};

struct DualLangSolution {
    std::uint32_t extension_degree;
    Field extended_field;
    EmbeddingMap embedding;
    DualMatrix g;
};

/// Lang equation over F_{q^m}[eps]/(eps^2): solve the reduced equation first,
/// then lift through the square-zero ideal. The lift g = g0 (I + eps h)
/// requires phi(h) - a0^{-1} h a0 = a0^{-1} a1 over the extension; when its
/// obstruction is nonzero, enlarging the extension degree by a factor of p
/// kills it.
inline DualLangSolution lang_solve_dual(const DualMatrix& a, std::size_t degree_cap = kDefaultDegreeCap) {
    const Field& L = a.field();
    std::size_t n = a.dim();
    if (!a.is_invertible()) throw NotInvertibleError("lang_solve_dual: reduced part is singular");
    if (n == 0) {
        FieldExtension ext = extend_field(L, 1, degree_cap);
        return DualLangSolution{1, ext.field, ext.embedding,
                                DualMatrix(MatrixF(ext.field, 0, 0), MatrixF(ext.field, 0, 0))};
    }
    SemilinearEndo tau(inverse(a.part0().transpose()));
    std::uint32_t e0 = splitting_degree(tau, degree_cap);
    std::uint32_t p = L.characteristic();
    for (std::uint32_t attempt = 0; attempt < 2; ++attempt) {
        std::uint32_t e = attempt == 0 ? e0 : e0 * p;
        FieldExtension ext = extend_field(L, e, degree_cap);
        const Field& lf = ext.field;
        MatrixF a0 = a.part0().map_embed(ext.embedding);
        MatrixF a1 = a.part1().map_embed(ext.embedding);
        // reduced solution over the extension
        SemilinearEndo tau_e(inverse(a0.transpose()));
        FixedSpace fs = fixed_space(tau_e);
        if (fs.dim() != n) continue;  // cannot happen for e0 | e
        MatrixF g0(lf, n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) g0.at(i, j) = fs.basis[i][j];
        // lift: phi(h) - a0^{-1} h a0 = a0^{-1} a1, h row-major in n^2 unknowns
        MatrixF a0i = inverse(a0);
        MatrixF conj(lf, n * n, n * n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t k = 0; k < n; ++k)
                    for (std::size_t l = 0; l < n; ++l) conj.at(i * n + j, k * n + l) = a0i.at(i, k) * a0.at(l, j);
        MatrixF rhs_m = a0i * a1;
        std::vector<FieldElement> rhs(n * n, lf.zero());
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) rhs[i * n + j] = rhs_m.at(i, j);
        FqLinearSystem sys(lf, n * n);
        sys.add_semilinear(MatrixF::identity(lf, n * n), conj, &rhs);
        auto sol = sys.solve();
        if (!sol) continue;
        MatrixF h(lf, n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) h.at(i, j) = (*sol)[i * n + j];
        DualMatrix g(g0, g0 * h);
        DualMatrix target(a0, a1);
        if (g.inverse() * g.frobenius_entrywise(1) != target)
            throw std::logic_error("lang_solve_dual: defining equation failed");
        return DualLangSolution{e, lf, ext.embedding, std::move(g)};
    }
    throw std::logic_error("lang_solve_dual: lift unsolvable at e0 and p*e0");
}

}  // namespace fqdescent
