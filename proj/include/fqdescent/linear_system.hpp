#pragma once

#include <optional>
#include <vector>

#include "fqdescent/field.hpp"
#include "fqdescent/matrix.hpp"

namespace fqdescent {

/// Canonical F_q-reduced-echelon basis of the F_q-span of the given vectors
/// in L^n. This is the tie-breaking rule behind every basis and certificate
/// the library emits: coordinates are the F_q-coordinates of the components
/// over (1, g, ..., g^{M-1}), flattened component-major.
inline std::vector<std::vector<FieldElement>> fq_canonical_basis(const Field& L,
                                                                 const std::vector<std::vector<FieldElement>>& vecs) {
    if (vecs.empty()) return {};
    auto ctx = subfield_ctx(L);
    const Field& fq = ctx->fq;
    std::size_t n = vecs[0].size();
    std::size_t ncols = n * ctx->capital_m();
    MatrixF m(fq, vecs.size(), ncols);
    for (std::size_t r = 0; r < vecs.size(); ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            auto codes = ctx->to_q_codes(vecs[r][c]);
            for (std::size_t j = 0; j < codes.size(); ++j)
                m.at(r, c * ctx->capital_m() + j) = ctx->code_to_fq(codes[j]);
        }
    }
    RrefResult rr = rref(std::move(m));
    std::vector<std::vector<FieldElement>> out;
    for (std::size_t r = 0; r < rr.rank; ++r) {
        std::vector<FieldElement> v(n, L.zero());
        for (std::size_t c = 0; c < n; ++c) {
            std::vector<std::uint32_t> codes(ctx->capital_m());
            for (std::size_t j = 0; j < codes.size(); ++j)
                codes[j] = ctx->fq_to_code(rr.reduced.at(r, c * ctx->capital_m() + j));
            v[c] = ctx->from_q_codes(codes);
        }
        out.push_back(std::move(v));
    }
    return out;
}

namespace detail {

// Multiplication-by-x matrix over F_p: columns are the coordinates of
// x * g^j, built with O(deg) shifts.
template <class MatT, class SetFn>
void fill_mult_block(const FieldData& fd, const Coords& x, MatT& m, std::size_t row0, std::size_t col0, SetFn set) {
    Coords cur = x;
    std::uint32_t d = fd.deg();
    for (std::uint32_t j = 0; j < d; ++j) {
        for (std::uint32_t i = 0; i < d; ++i) set(m, row0 + i, col0 + j, cur[i]);
        if (j + 1 < d) cur = fd.mul_by_gen(cur);
    }
}

}  // namespace detail

/// Exact F_q-basis of the fixed space {w in L^n : S phi(w) = w}, phi the
/// q-power Frobenius acting coordinatewise. The F_q-linear equations in the
/// n*M base-field coordinates are expanded one level further, to F_p, where
/// elimination is cheap (bit-packed in characteristic 2); the output basis is
/// then canonicalized over F_q, which yields exactly the reduced echelon
/// basis of the solution space.
inline std::vector<std::vector<FieldElement>> semilinear_fixed_space(const MatrixF& s) {
    if (s.rows() != s.cols()) throw std::invalid_argument("semilinear_fixed_space: square matrix required");
    const Field& L = s.field();
    std::size_t n = s.rows();
    if (n == 0) return {};
    const FieldData& fd = L.data();
    std::uint32_t d = fd.deg(), p = fd.p();
    std::size_t big = n * d;

    // Unknowns are y_k = Phi(x_k), x the F_p-coordinates of w_k; the fixed
    // equation becomes sum_k Mult(S_ik) y_k - Phi^{-1} y_i = 0.
    std::vector<detail::Coords> sol_y;
    if (p == 2) {
        detail::GF2Mat m(big, big);
        auto set2 = [](detail::GF2Mat& mm, std::size_t i, std::size_t j, std::uint32_t v) {
            if (v) mm.set(i, j, 1);
        };
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k) {
                const FieldElement& e = s.at(i, k);
                if (e.is_zero()) continue;
                detail::fill_mult_block(fd, e.coords(), m, i * d, k * d, set2);
            }
        const auto& inv = *fd.frobq_inv_map().m2;
        for (std::size_t i = 0; i < n; ++i)
            for (std::uint32_t r = 0; r < d; ++r)
                for (std::uint32_t c = 0; c < d; ++c)
                    if (inv.get(r, c)) m.set(i * d + r, i * d + c, m.get(i * d + r, i * d + c) ^ 1u);
        sol_y = detail::gf2_nullspace(std::move(m));
    } else {
        detail::FpMatGen m(p, big, big);
        auto setg = [](detail::FpMatGen& mm, std::size_t i, std::size_t j, std::uint32_t v) { mm.at(i, j) = v; };
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k) {
                const FieldElement& e = s.at(i, k);
                if (e.is_zero()) continue;
                detail::fill_mult_block(fd, e.coords(), m, i * d, k * d, setg);
            }
        const auto& inv = *fd.frobq_inv_map().mg;
        for (std::size_t i = 0; i < n; ++i)
            for (std::uint32_t r = 0; r < d; ++r)
                for (std::uint32_t c = 0; c < d; ++c) {
                    std::uint32_t v = inv.at(r, c);
                    if (v) {
                        auto& cell = m.at(i * d + r, i * d + c);
                        cell = (cell + p - v) % p;
                    }
                }
        sol_y = detail::fpgen_nullspace(std::move(m));
    }

    // back-substitute: x_k = Phi^{-1} y_k, assemble w in L^n
    std::vector<std::vector<FieldElement>> vecs;
    vecs.reserve(sol_y.size());
    for (const auto& y : sol_y) {
        std::vector<FieldElement> w;
        w.reserve(n);
        for (std::size_t k = 0; k < n; ++k) {
            detail::Coords yk(y.begin() + static_cast<std::ptrdiff_t>(k * d),
                              y.begin() + static_cast<std::ptrdiff_t>((k + 1) * d));
            w.push_back(FieldElement(L, fd.frobq_inv_map().apply(yk)));
        }
        vecs.push_back(std::move(w));
    }
    return fq_canonical_basis(L, vecs);
}

/// Small F_q-linear systems mixing L-linear and phi-semilinear conditions in
/// n unknowns over L. Everything is expanded over the distinguished F_q-basis
/// and solved exactly over Field(p, q_exponent, 1).
class FqLinearSystem {
   public:
    explicit FqLinearSystem(Field L, std::size_t n_unknowns)
        : L_(std::move(L)), n_(n_unknowns), ctx_(subfield_ctx(L_)) {
        cols_ = n_ * ctx_->capital_m();
    }

    /// Condition rows: S phi(w) - T w = rhs.
    void add_semilinear(const MatrixF& s_phi, const MatrixF& t_lin, const std::vector<FieldElement>* rhs = nullptr) {
        if (s_phi.cols() != n_ || t_lin.cols() != n_ || s_phi.rows() != t_lin.rows())
            throw std::invalid_argument("FqLinearSystem: condition shape mismatch");
        std::size_t base = rows_.size();
        for (std::size_t i = 0; i < s_phi.rows(); ++i) add_functional_rows(s_phi, i, /*twist=*/true, rhs);
        std::size_t added_at = base;
        // subtract the linear part into the same rows
        for (std::size_t i = 0; i < t_lin.rows(); ++i) {
            for (std::size_t j = 0; j < n_; ++j) {
                const FieldElement& e = t_lin.at(i, j);
                if (e.is_zero()) continue;
                FieldElement basis_elem = L_.one();
                for (std::uint32_t sidx = 0; sidx < ctx_->capital_m(); ++sidx) {
                    auto codes = ctx_->to_q_codes(e * basis_elem);
                    for (std::uint32_t l = 0; l < ctx_->capital_m(); ++l) {
                        FieldElement v = ctx_->code_to_fq(codes[l]);
                        if (!v.is_zero()) {
                            auto& cell = rows_[added_at + i * ctx_->capital_m() + l][j * ctx_->capital_m() + sidx];
                            cell = cell - v;
                        }
                    }
                    basis_elem = basis_elem * L_.generator();
                }
            }
        }
    }

    /// Canonical F_q-basis of the homogeneous solution space. Requires every
    /// added condition to have zero right-hand side.
    std::vector<std::vector<FieldElement>> nullspace_basis() const {
        for (const auto& r : rhs_)
            if (!r.is_zero()) throw std::logic_error("nullspace of an inhomogeneous system");
        MatrixF m = assemble();
        auto ns = fqdescent::nullspace(m);
        std::vector<std::vector<FieldElement>> vecs;
        for (auto& sol : ns) vecs.push_back(codes_to_vector(sol));
        return fq_canonical_basis(L_, vecs);
    }

    /// One exact solution (free coordinates set to zero), or nullopt if the
    /// system is inconsistent.
    std::optional<std::vector<FieldElement>> solve() const {
        MatrixF m = assemble();
        MatrixF aug(ctx_->fq, rows_.size(), 1);
        for (std::size_t i = 0; i < rhs_.size(); ++i) aug.at(i, 0) = rhs_[i];
        RrefResult rr = rref(std::move(m), &aug);
        // consistency: no pivot in a zero row of the reduced matrix
        for (std::size_t i = rr.rank; i < rows_.size(); ++i)
            if (!aug.at(i, 0).is_zero()) return std::nullopt;
        std::vector<FieldElement> codes(cols_, ctx_->fq.zero());
        for (std::size_t r = 0; r < rr.rank; ++r) codes[rr.pivot_cols[r]] = aug.at(r, 0);
        return codes_to_vector(codes);
    }

   private:
    void add_functional_rows(const MatrixF& c, std::size_t i, bool twist, const std::vector<FieldElement>* rhs) {
        if (c.field() != L_) throw FieldMismatchError("FqLinearSystem: condition over a different field");
        std::uint32_t M = ctx_->capital_m();
        std::size_t base = rows_.size();
        for (std::uint32_t l = 0; l < M; ++l) {
            rows_.emplace_back(cols_, ctx_->fq.zero());
            rhs_.push_back(ctx_->fq.zero());
        }
        for (std::size_t j = 0; j < n_; ++j) {
            const FieldElement& e = c.at(i, j);
            if (e.is_zero()) continue;
            FieldElement basis_elem = L_.one();
            for (std::uint32_t sidx = 0; sidx < M; ++sidx) {
                FieldElement mu = twist ? basis_elem.frobenius(1) : basis_elem;
                auto codes = ctx_->to_q_codes(e * mu);
                for (std::uint32_t l = 0; l < M; ++l) {
                    FieldElement v = ctx_->code_to_fq(codes[l]);
                    if (!v.is_zero()) rows_[base + l][j * M + sidx] = rows_[base + l][j * M + sidx] + v;
                }
                basis_elem = basis_elem * L_.generator();
            }
        }
        if (rhs) {
            auto codes = ctx_->to_q_codes((*rhs)[i]);
            for (std::uint32_t l = 0; l < M; ++l) rhs_[base + l] = ctx_->code_to_fq(codes[l]);
        }
    }

    MatrixF assemble() const {
        MatrixF m(ctx_->fq, rows_.size(), cols_);
        for (std::size_t i = 0; i < rows_.size(); ++i)
            for (std::size_t j = 0; j < cols_; ++j) m.at(i, j) = rows_[i][j];
        return m;
    }

    std::vector<FieldElement> codes_to_vector(const std::vector<FieldElement>& codes) const {
        std::uint32_t M = ctx_->capital_m();
        std::vector<FieldElement> w(n_, L_.zero());
        for (std::size_t k = 0; k < n_; ++k) {
            std::vector<std::uint32_t> cc(M);
            for (std::uint32_t j = 0; j < M; ++j) cc[j] = ctx_->fq_to_code(codes[k * M + j]);
            w[k] = ctx_->from_q_codes(cc);
        }
        return w;
    }

    Field L_;
    std::size_t n_;
    std::shared_ptr<const SubfieldCtx> ctx_;
    std::size_t cols_;
    std::vector<std::vector<FieldElement>> rows_;
    std::vector<FieldElement> rhs_;
};

}  // namespace fqdescent
