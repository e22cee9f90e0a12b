#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "fqdescent/field.hpp"
#include "fqdescent/linear_system.hpp"
#include "fqdescent/matrix.hpp"

namespace fqdescent {

/// The Frobenius-semilinear automorphism v -> A phi^twist(v) of F_{q^m}^n.
/// A must be invertible.
class SemilinearEndo {
   public:
    SemilinearEndo(MatrixF a, std::uint32_t twist = 1) : a_(std::move(a)), twist_(twist) {
        if (a_.rows() != a_.cols()) throw std::invalid_argument("SemilinearEndo: square matrix required");
        if (twist_ < 1) throw std::invalid_argument("SemilinearEndo: twist must be >= 1");
        if (a_.rows() > 0) {
            try {
                (void)inverse(a_);
            } catch (const SingularError& e) {
                throw NotInvertibleError("semilinear endomorphism matrix is singular");
            }
        }
    }

    const MatrixF& matrix() const { return a_; }
    const Field& field() const { return a_.field(); }
    std::size_t dim() const { return a_.rows(); }
    std::uint32_t twist() const { return twist_; }

    std::vector<FieldElement> apply(const std::vector<FieldElement>& v) const {
        std::vector<FieldElement> fv(v);
        for (auto& x : fv) x = x.frobenius(static_cast<std::int64_t>(twist_));
        return a_.apply(fv);
    }

   private:
    MatrixF a_;
    std::uint32_t twist_;
};

struct FixedSpace {
    SemilinearEndo parent;
    /// Canonical F_q-basis; every vector v satisfies A phi(v) = v exactly.
    std::vector<std::vector<FieldElement>> basis;

    std::size_t dim() const { return basis.size(); }
};

inline void require_untwisted(const SemilinearEndo& s, const char* op) {
    if (s.twist() != 1)
        throw std::invalid_argument(std::string(op) +
                                    ": twist must be 1 (regard q^twist as the base order instead)");
}

/// V^sigma = {v : A phi(v) = v}, an F_q-vector space of dimension <= n.
inline FixedSpace fixed_space(const SemilinearEndo& s) {
    require_untwisted(s, "fixed_space");
    return FixedSpace{s, semilinear_fixed_space(s.matrix())};
}

/// B = A phi(A) ... phi^(m-1)(A), the matrix of sigma^m (an F_{q^m}-linear
/// automorphism).
inline MatrixF sigma_iterate_matrix(const SemilinearEndo& s) {
    const Field& L = s.field();
    MatrixF b = MatrixF::identity(L, s.dim());
    for (std::uint32_t i = 0; i < L.extension_degree(); ++i) b = b * s.matrix().frobenius_entrywise(static_cast<std::int64_t>(i));
    return b;
}

/// Least e such that extending scalars to F_{q^(m e)} makes the fixed space
/// full; equals the multiplicative order of sigma^m. CapacityError when the
/// split field would exceed degree_cap.
inline std::uint32_t splitting_degree(const SemilinearEndo& s, std::size_t degree_cap = kDefaultDegreeCap) {
    require_untwisted(s, "splitting_degree");
    if (s.dim() == 0) return 1;
    const Field& L = s.field();
    MatrixF b = sigma_iterate_matrix(s);
    MatrixF pw = b;
    MatrixF id = MatrixF::identity(L, s.dim());
    std::uint64_t step = L.absolute_degree();
    for (std::uint32_t e = 1;; ++e) {
        if (static_cast<std::uint64_t>(e) * step > degree_cap)
            throw CapacityError("splitting degree exceeds the configured bound", static_cast<std::uint64_t>(e) * step,
                                degree_cap);
        if (pw == id) return e;
        pw = pw * b;
    }
}

struct ExtendedEndo {
    SemilinearEndo endo;
    EmbeddingMap embedding;
};

/// Same matrix with entries pushed into F_{q^(m e)}.
inline ExtendedEndo extend_scalars(const SemilinearEndo& s, std::uint32_t e,
                                   std::size_t degree_cap = kDefaultDegreeCap) {
    FieldExtension ext = extend_field(s.field(), e, degree_cap);
    return ExtendedEndo{SemilinearEndo(s.matrix().map_embed(ext.embedding), s.twist()), ext.embedding};
}

struct VectorSpaceDescent {
    std::uint32_t extension_degree;  // e
    Field extended_field;            // F_{q^(m e)}
    EmbeddingMap embedding;
    /// Invertible over the extended field; columns are the canonical fixed
    /// basis and satisfy A phi(G) = G exactly.
    MatrixF certificate;
    std::size_t fq_dimension;  // = n
};

/// Full descent of (V, sigma): extend to the splitting degree and assemble
/// the fixed basis into an invertible certificate.
inline VectorSpaceDescent descend_vector_space(const SemilinearEndo& s,
                                               std::size_t degree_cap = kDefaultDegreeCap) {
    require_untwisted(s, "descend_vector_space");
    std::uint32_t e = splitting_degree(s, degree_cap);
    ExtendedEndo ext = extend_scalars(s, e, degree_cap);
    FixedSpace fs = fixed_space(ext.endo);
    std::size_t n = s.dim();
    if (fs.dim() != n) throw std::logic_error("descend_vector_space: fixed space not full at the splitting degree");
    const Field& lf = ext.endo.field();
    MatrixF g(lf, n, n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) g.at(i, j) = fs.basis[j][i];
    if (n > 0) {
        if (ext.endo.matrix() * g.frobenius_entrywise(1) != g)
            throw std::logic_error("descend_vector_space: certificate equation failed");
        (void)inverse(g);  // fixed vectors of a full fixed space are independent over the big field
    }
    return VectorSpaceDescent{e, lf, ext.embedding, std::move(g), n};
}

struct LangSolution {
    std::uint32_t extension_degree;  // e
    Field extended_field;
    EmbeddingMap embedding;
    /// G invertible over F_{q^(m e)} with G^{-1} phi(G) = A exactly.
    MatrixF g;
};

/// Constructive solution of the Lang equation G^{-1} phi(G) = A: the rows of
/// G are fixed vectors of tau(w) = (A^T)^{-1} phi(w), found over the smallest
/// extension that splits tau.
inline LangSolution lang_solve(const MatrixF& a, std::size_t degree_cap = kDefaultDegreeCap) {
    if (a.rows() != a.cols()) throw std::invalid_argument("lang_solve: square matrix required");
    MatrixF at_inv;
    try {
        at_inv = inverse(a.transpose());
    } catch (const SingularError&) {
        throw NotInvertibleError("lang_solve: matrix is not invertible");
    }
    std::size_t n = a.rows();
    if (n == 0) {
        FieldExtension ext = extend_field(a.field(), 1, degree_cap);
        return LangSolution{1, ext.field, ext.embedding, MatrixF(ext.field, 0, 0)};
    }
    SemilinearEndo tau(at_inv);
    std::uint32_t e = splitting_degree(tau, degree_cap);
    ExtendedEndo ext = extend_scalars(tau, e, degree_cap);
    FixedSpace fs = fixed_space(ext.endo);
    if (fs.dim() != n) throw std::logic_error("lang_solve: fixed space not full at the splitting degree");
    const Field& lf = ext.endo.field();
    MatrixF g(lf, n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) g.at(i, j) = fs.basis[i][j];
    MatrixF a_ext = a.map_embed(ext.embedding);
    if (inverse(g) * g.frobenius_entrywise(1) != a_ext) throw std::logic_error("lang_solve: defining equation failed");
    return LangSolution{e, lf, ext.embedding, std::move(g)};
}

}  // namespace fqdescent
