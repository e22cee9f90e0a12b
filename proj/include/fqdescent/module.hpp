#pragma once

#include <numeric>
#include <string>
#include <vector>

#include "fqdescent/algebra.hpp"
#include "fqdescent/linear_system.hpp"
#include "fqdescent/semilinear.hpp"

namespace fqdescent {

/// A module over A tensor F_{q^m} together with a compatible phi-semilinear
/// automorphism sigma = A_sigma phi. Compatibility means sigma commutes with
/// the action of every F_q-rational algebra element.
struct EquivariantModule {
    FinAlgebra algebra;
    Field field;                  // F_{q^m}
    std::vector<MatrixF> action;  // one n x n matrix over field per algebra basis element
    MatrixF sigma;                // the matrix part of sigma

    EquivariantModule(FinAlgebra alg, Field f, std::vector<MatrixF> act, MatrixF sig)
        : algebra(std::move(alg)), field(std::move(f)), action(std::move(act)), sigma(std::move(sig)) {
        if (algebra.fq().characteristic() != field.characteristic() ||
            algebra.fq().q_exponent() != field.q_exponent())
            throw FieldMismatchError("EquivariantModule: algebra and module fields disagree on (p, q)");
        if (action.size() != algebra.dim()) throw std::invalid_argument("EquivariantModule: one action matrix per basis element required");
        std::size_t n = sigma.rows();
        if (sigma.cols() != n) throw std::invalid_argument("EquivariantModule: sigma must be square");
        for (const auto& m : action) {
            if (m.field() != field) throw FieldMismatchError("EquivariantModule: action over a different field");
            if (m.rows() != n || m.cols() != n) throw std::invalid_argument("EquivariantModule: action shape mismatch");
        }
        if (sigma.field() != field) throw FieldMismatchError("EquivariantModule: sigma over a different field");
    }

    std::size_t dim() const { return sigma.rows(); }
};

struct CheckReport {
    bool ok = false;
    std::string violation;  // empty when ok
};

/// Validates the multiplication table, unitality of the action, invertibility
/// of sigma and the sigma-action commutation. Reports the first violated
/// relation instead of throwing.
inline CheckReport check_equivariant(const EquivariantModule& m) {
    const std::size_t d = m.algebra.dim();
    EmbeddingMap emb = embedding_between(m.algebra.fq(), m.field);
    auto embed_scalar = [&](const FieldElement& c) { return emb.apply(c); };
    // multiplication table
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            MatrixF lhs = m.action[i] * m.action[j];
            MatrixF rhs(m.field, m.dim(), m.dim());
            for (std::size_t k = 0; k < d; ++k) {
                const FieldElement& c = m.algebra.c(i, j, k);
                if (c.is_zero()) continue;
                FieldElement ce = embed_scalar(c);
                for (std::size_t r = 0; r < m.dim(); ++r)
                    for (std::size_t s = 0; s < m.dim(); ++s) rhs.at(r, s) += ce * m.action[k].at(r, s);
            }
            if (lhs != rhs)
                return {false, "action(e" + std::to_string(i) + ")*action(e" + std::to_string(j) +
                                   ") does not match the multiplication table"};
        }
    // unit acts as identity
    {
        MatrixF u(m.field, m.dim(), m.dim());
        for (std::size_t i = 0; i < d; ++i) {
            const FieldElement& c = m.algebra.unit()[i];
            if (c.is_zero()) continue;
            FieldElement ce = embed_scalar(c);
            for (std::size_t r = 0; r < m.dim(); ++r)
                for (std::size_t s = 0; s < m.dim(); ++s) u.at(r, s) += ce * m.action[i].at(r, s);
        }
        if (u != MatrixF::identity(m.field, m.dim())) return {false, "unit does not act as the identity"};
    }
    // sigma invertible
    if (m.dim() > 0 && rank(m.sigma) != m.dim()) return {false, "sigma is not invertible"};
    // sigma commutes with the F_q-rational action
    for (std::size_t i = 0; i < d; ++i) {
        if (m.sigma * m.action[i].frobenius_entrywise(1) != m.action[i] * m.sigma)
            return {false, "sigma does not commute with action(e" + std::to_string(i) + ")"};
    }
    return {true, ""};
}

struct DescendedModule {
    FinAlgebra algebra;
    std::size_t n = 0;            // module dimension (over F_q after descent)
    std::vector<MatrixF> action;  // over F_q
    std::uint32_t extension_degree = 1;
    Field extended_field;
    EmbeddingMap embedding;  // original field -> extended field
    MatrixF certificate;     // invertible over the extended field
};

/// Descent of an equivariant module: the fixed basis of sigma, taken after
/// extending to the splitting degree, carries the action into F_q-rational
/// matrices; the certificate conjugates the descended pair back to the
/// original one, exactly.
inline DescendedModule descend_module(const EquivariantModule& m, std::size_t degree_cap = kDefaultDegreeCap) {
    CheckReport chk = check_equivariant(m);
    if (!chk.ok) throw NotEquivariantError("descend_module: module is not equivariant", chk.violation);
    std::size_t n = m.dim();
    SemilinearEndo sigma(m.sigma);
    std::uint32_t e = splitting_degree(sigma, degree_cap);
    ExtendedEndo ext = extend_scalars(sigma, e, degree_cap);
    const Field& lf = ext.endo.field();
    FixedSpace fs = fixed_space(ext.endo);
    if (fs.dim() != n) throw std::logic_error("descend_module: fixed space not full at the splitting degree");
    MatrixF g(lf, n, n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) g.at(i, j) = fs.basis[j][i];
    MatrixF ginv = n > 0 ? inverse(g) : MatrixF(lf, 0, 0);
    auto ctx = subfield_ctx(lf);
    Field fq = ctx->fq;
    std::vector<MatrixF> action_w;
    for (std::size_t t = 0; t < m.algebra.dim(); ++t) {
        MatrixF rho_ext = m.action[t].map_embed(ext.embedding);
        MatrixF rho_w = ginv * rho_ext * g;
        MatrixF rw(fq, n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                try {
                    rw.at(i, j) = ctx->big_to_fq(rho_w.at(i, j));
                } catch (const FieldMismatchError&) {
                    throw std::logic_error("descend_module: descended action entry is not F_q-rational");
                }
            }
        action_w.push_back(std::move(rw));
    }
    // exact certificate conditions
    if (n > 0) {
        if (ext.endo.matrix() * g.frobenius_entrywise(1) != g)
            throw std::logic_error("descend_module: certificate does not intertwine sigma");
        for (std::size_t t = 0; t < m.algebra.dim(); ++t) {
            MatrixF lhs = m.action[t].map_embed(ext.embedding) * g;
            MatrixF rhs = g * action_w[t].map_embed(embedding_between(fq, lf));
            if (lhs != rhs) throw std::logic_error("descend_module: certificate does not intertwine the action");
        }
    }
    return DescendedModule{m.algebra, n, std::move(action_w), e, lf, ext.embedding, std::move(g)};
}

enum class HomMode { linear, equivariant };

namespace detail {

// vec(H) row-major; matrices for H -> A H and H -> H B on n_rows x n_cols
// unknowns.
inline MatrixF left_mult_operator(const MatrixF& a, std::size_t n_rows, std::size_t n_cols) {
    MatrixF op(a.field(), n_rows * n_cols, n_rows * n_cols);
    for (std::size_t i = 0; i < n_rows; ++i)
        for (std::size_t j = 0; j < n_cols; ++j)
            for (std::size_t k = 0; k < n_rows; ++k) op.at(i * n_cols + j, k * n_cols + j) = a.at(i, k);
    return op;
}

inline MatrixF right_mult_operator(const MatrixF& b, std::size_t n_rows, std::size_t n_cols) {
    MatrixF op(b.field(), n_rows * n_cols, n_rows * n_cols);
    for (std::size_t i = 0; i < n_rows; ++i)
        for (std::size_t j = 0; j < n_cols; ++j)
            for (std::size_t l = 0; l < n_cols; ++l) op.at(i * n_cols + j, i * n_cols + l) = b.at(l, j);
    return op;
}

inline MatrixF unvec(const Field& f, const std::vector<FieldElement>& v, std::size_t n_rows, std::size_t n_cols) {
    MatrixF m(f, n_rows, n_cols);
    for (std::size_t i = 0; i < n_rows; ++i)
        for (std::size_t j = 0; j < n_cols; ++j) m.at(i, j) = v[i * n_cols + j];
    return m;
}

}  // namespace detail

struct HomSpace {
    /// Field the basis matrices live over: the module field in linear mode,
    /// the common splitting extension in equivariant mode.
    Field field;
    EmbeddingMap embedding;  // module field -> basis field (identity in linear mode)
    std::vector<MatrixF> basis;

    std::size_t dim() const { return basis.size(); }
};

/// Basis of module homomorphisms M -> N. Linear mode solves the
/// F_{q^m}-linear intertwining system over the module field. Equivariant
/// mode additionally imposes H sigma_M = sigma_N phi(H); that F_q-linear
/// system only reaches its full solution space once both sigmas split, so it
/// is solved after extending scalars to the least common splitting degree.
inline HomSpace hom_space(const EquivariantModule& m, const EquivariantModule& n, HomMode mode,
                          std::size_t degree_cap = kDefaultDegreeCap) {
    if (m.algebra != n.algebra) throw AlgebraMismatchError("hom_space: modules over different algebras");
    if (m.field != n.field) throw FieldMismatchError("hom_space: modules over different fields");
    const Field& L = m.field;
    std::size_t nr = n.dim(), nc = m.dim();
    std::size_t nun = nr * nc;
    if (nun == 0) return HomSpace{L, embedding_between(L, L), {}};
    if (mode == HomMode::linear) {
        std::vector<MatrixF> conditions;
        for (std::size_t t = 0; t < m.algebra.dim(); ++t)
            conditions.push_back(detail::right_mult_operator(m.action[t], nr, nc) -
                                 detail::left_mult_operator(n.action[t], nr, nc));
        MatrixF big(L, conditions.size() * nun, nun);
        for (std::size_t t = 0; t < conditions.size(); ++t)
            for (std::size_t r = 0; r < nun; ++r)
                for (std::size_t c = 0; c < nun; ++c) big.at(t * nun + r, c) = conditions[t].at(r, c);
        auto ns = nullspace(big);
        // canonical L-basis
        MatrixF rows(L, ns.size(), nun);
        for (std::size_t i = 0; i < ns.size(); ++i)
            for (std::size_t j = 0; j < nun; ++j) rows.at(i, j) = ns[i][j];
        RrefResult rr = rref(std::move(rows));
        std::vector<MatrixF> out;
        for (std::size_t i = 0; i < rr.rank; ++i) {
            std::vector<FieldElement> v(nun, L.zero());
            for (std::size_t j = 0; j < nun; ++j) v[j] = rr.reduced.at(i, j);
            out.push_back(detail::unvec(L, v, nr, nc));
        }
        return HomSpace{L, embedding_between(L, L), std::move(out)};
    }
    std::uint32_t em = splitting_degree(SemilinearEndo(m.sigma), degree_cap);
    std::uint32_t en = splitting_degree(SemilinearEndo(n.sigma), degree_cap);
    std::uint32_t e = std::lcm(em, en);
    FieldExtension ext = extend_field(L, e, degree_cap);
    const Field& lf = ext.field;
    MatrixF sig_m = m.sigma.map_embed(ext.embedding);
    MatrixF sig_n = n.sigma.map_embed(ext.embedding);
    // The sigma condition H sigma_M = sigma_N phi(H) alone says H is fixed by
    // the semilinear operator X -> sigma_N phi(X) sigma_M^{-1}; solve that
    // with the fixed-space engine, then cut down by the (F_q-linear)
    // intertwining conditions on the small fixed basis.
    MatrixF op(lf, nun, nun);
    MatrixF sig_m_inv = inverse(sig_m);
    for (std::size_t i = 0; i < nr; ++i)
        for (std::size_t j = 0; j < nc; ++j)
            for (std::size_t k = 0; k < nr; ++k)
                for (std::size_t l = 0; l < nc; ++l)
                    op.at(i * nc + j, k * nc + l) = sig_n.at(i, k) * sig_m_inv.at(l, j);
    auto sigma_fixed = semilinear_fixed_space(op);
    if (sigma_fixed.empty()) return HomSpace{lf, ext.embedding, {}};
    std::vector<MatrixF> fixed_mats;
    for (const auto& v : sigma_fixed) fixed_mats.push_back(detail::unvec(lf, v, nr, nc));
    auto ctx = subfield_ctx(lf);
    Field fq = ctx->fq;
    std::size_t bdim = fixed_mats.size();
    std::size_t mcap = ctx->capital_m();
    MatrixF small(fq, m.algebra.dim() * nun * mcap, bdim);
    for (std::size_t b = 0; b < bdim; ++b) {
        for (std::size_t t = 0; t < m.algebra.dim(); ++t) {
            MatrixF defect = fixed_mats[b] * m.action[t].map_embed(ext.embedding) -
                             n.action[t].map_embed(ext.embedding) * fixed_mats[b];
            for (std::size_t cell = 0; cell < nun; ++cell) {
                auto codes = ctx->to_q_codes(defect.at(cell / nc, cell % nc));
                for (std::size_t s = 0; s < mcap; ++s)
                    small.at((t * nun + cell) * mcap + s, b) = ctx->code_to_fq(codes[s]);
            }
        }
    }
    auto combos = nullspace(small);
    std::vector<std::vector<FieldElement>> solutions;
    for (const auto& c : combos) {
        std::vector<FieldElement> acc(nun, lf.zero());
        for (std::size_t b = 0; b < bdim; ++b) {
            if (c[b].is_zero()) continue;
            FieldElement cb = ctx->emb.apply(c[b]);
            for (std::size_t cell = 0; cell < nun; ++cell) acc[cell] += cb * sigma_fixed[b][cell];
        }
        solutions.push_back(std::move(acc));
    }
    auto canon = fq_canonical_basis(lf, solutions);
    std::vector<MatrixF> out;
    for (const auto& v : canon) out.push_back(detail::unvec(lf, v, nr, nc));
    return HomSpace{lf, ext.embedding, std::move(out)};
}

}  // namespace fqdescent
