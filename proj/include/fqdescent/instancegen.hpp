#pragma once

#include <vector>

#include "fqdescent/algebra.hpp"
#include "fqdescent/module.hpp"
#include "fqdescent/polynomial.hpp"
#include "fqdescent/rng.hpp"
#include "fqdescent/semilinear.hpp"

namespace fqdescent {
namespace instancegen {

/// All canonical fields F_{q^m} with q^m <= bound (and q > 1, m >= 1),
/// ordered by (p, q_exponent, m).
inline std::vector<Field> fields_with_order_at_most(std::uint64_t bound, std::size_t degree_cap = kDefaultDegreeCap) {
    std::vector<Field> out;
    for (std::uint32_t p : {2u, 3u, 5u, 7u, 11u, 13u}) {
        if (p > bound) break;
        for (std::uint32_t f = 1;; ++f) {
            std::uint64_t q = 1;
            bool over = false;
            for (std::uint32_t i = 0; i < f; ++i) {
                q *= p;
                if (q > bound) over = true;
            }
            if (over) break;
            for (std::uint32_t m = 1;; ++m) {
                std::uint64_t qm = 1;
                bool over2 = false;
                for (std::uint32_t i = 0; i < m; ++i) {
                    for (std::uint32_t k = 0; k < f; ++k) qm *= p;
                    if (qm > bound) {
                        over2 = true;
                        break;
                    }
                }
                if (over2) break;
                out.push_back(Field::get(p, f, m, degree_cap));
            }
        }
    }
    return out;
}

inline FieldElement random_element(Rng& rng, const Field& f) {
    detail::Coords c(f.absolute_degree());
    for (auto& x : c) x = static_cast<std::uint32_t>(rng.below(f.characteristic()));
    return FieldElement(f, std::move(c));
}

inline FieldElement random_nonzero(Rng& rng, const Field& f) {
    for (;;) {
        FieldElement x = random_element(rng, f);
        if (!x.is_zero()) return x;
    }
}

inline MatrixF random_matrix(Rng& rng, const Field& f, std::size_t rows, std::size_t cols) {
    MatrixF m(f, rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m.at(i, j) = random_element(rng, f);
    return m;
}

inline MatrixF random_invertible(Rng& rng, const Field& f, std::size_t n) {
    for (;;) {
        MatrixF m = random_matrix(rng, f, n, n);
        if (rank(m) == n) return m;
    }
}

inline PolynomialF random_polynomial(Rng& rng, const Field& f, std::size_t nvars, std::uint32_t max_degree,
                                     std::size_t terms) {
    PolynomialF p(f, nvars);
    for (std::size_t t = 0; t < terms; ++t) {
        PolynomialF::Exponents e(nvars);
        for (auto& x : e) x = static_cast<std::uint32_t>(rng.below(max_degree + 1));
        p = p + PolynomialF::monomial(f, e, random_element(rng, f));
    }
    return p;
}

/// Random semilinear automorphism whose splitting degree keeps the split
/// field inside degree_cap: a small-order seed (diagonal, unipotent, or
/// their product) moved through a random twisted conjugation, with rejection
/// as a safety net.
inline SemilinearEndo random_bounded_endo(Rng& rng, const Field& f, std::size_t n, std::size_t degree_cap) {
    if (n == 0) return SemilinearEndo(MatrixF(f, 0, 0));
    for (;;) {
        MatrixF seed = MatrixF::identity(f, n);
        std::uint64_t kind = rng.below(3);
        if (kind == 0 || kind == 2)
            for (std::size_t i = 0; i < n; ++i) seed.at(i, i) = random_nonzero(rng, f);
        if (kind == 1 || kind == 2)
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < i; ++j) seed.at(i, j) = seed.at(i, j) + random_element(rng, f);
        MatrixF p = random_invertible(rng, f, n);
        MatrixF a = inverse(p) * seed * p.frobenius_entrywise(1);
        SemilinearEndo s(a);
        try {
            (void)splitting_degree(s, degree_cap);
            return s;
        } catch (const CapacityError&) {
            continue;
        }
    }
}

/// Random commutative algebra from a small menu.
inline FinAlgebra random_algebra(Rng& rng, const Field& fq, std::size_t max_dim) {
    std::vector<FinAlgebra> menu;
    menu.push_back(FinAlgebra::base_field(fq));
    if (max_dim >= 2) {
        menu.push_back(FinAlgebra::dual_numbers(fq));
        menu.push_back(FinAlgebra::split_product(fq, 2));
    }
    if (max_dim >= 3) {
        menu.push_back(FinAlgebra::truncated_polynomials(fq, 3));
        menu.push_back(FinAlgebra::split_product(fq, 3));
    }
    return menu[rng.below(menu.size())];
}

namespace detail_gen {

/// Regular-representation matrix over L of an element of A tensor L given by
/// its coefficient vector.
inline MatrixF regular_rep(const FinAlgebra& alg, const EmbeddingMap& emb, const std::vector<FieldElement>& u) {
    const Field& L = emb.target();
    std::size_t d = alg.dim();
    MatrixF m(L, d, d);
    for (std::size_t i = 0; i < d; ++i) {
        if (u[i].is_zero()) continue;
        for (std::size_t t = 0; t < d; ++t)
            for (std::size_t s = 0; s < d; ++s) {
                const FieldElement& c = alg.c(i, t, s);
                if (!c.is_zero()) m.at(s, t) += u[i] * emb.apply(c);
            }
    }
    return m;
}

inline std::vector<FieldElement> random_ring_element(Rng& rng, const FinAlgebra& alg, const Field& L) {
    std::vector<FieldElement> u(alg.dim(), L.zero());
    for (auto& x : u) x = random_element(rng, L);
    return u;
}

inline std::vector<FieldElement> random_ring_unit(Rng& rng, const FinAlgebra& alg, const EmbeddingMap& emb) {
    for (;;) {
        auto u = random_ring_element(rng, alg, emb.target());
        if (rank(regular_rep(alg, emb, u)) == alg.dim()) return u;
    }
}

}  // namespace detail_gen

/// Random equivariant module: a free module over a random commutative
/// algebra, with sigma a ring-linear unit (triangular times diagonal over
/// A tensor F_{q^m}) composed with the standard Frobenius, then everything
/// conjugated by a random invertible field matrix. Rejection keeps the
/// splitting degree inside degree_cap.
inline EquivariantModule random_equivariant_module(Rng& rng, const Field& L, std::size_t max_alg_dim,
                                                   std::size_t max_total_dim, std::size_t degree_cap) {
    Field fq = Field::get(L.characteristic(), L.q_exponent(), 1);
    EmbeddingMap emb = embedding_between(fq, L);
    for (;;) {
        FinAlgebra alg = random_algebra(rng, fq, max_alg_dim);
        std::size_t d = alg.dim();
        if (d > max_total_dim) continue;
        std::size_t rmax = max_total_dim / d;
        std::size_t r = 1 + rng.below(rmax);
        std::size_t n = d * r;
        std::vector<MatrixF> action;
        for (std::size_t i = 0; i < d; ++i) {
            MatrixF li = alg.left_mult(i).map_embed(emb);
            MatrixF big(L, n, n);
            for (std::size_t b = 0; b < r; ++b)
                for (std::size_t s = 0; s < d; ++s)
                    for (std::size_t t = 0; t < d; ++t) big.at(b * d + s, b * d + t) = li.at(s, t);
            action.push_back(std::move(big));
        }
        // sigma part: unit lower * diag(units) * unit upper, as r x r blocks
        auto expand = [&](const std::vector<std::vector<std::vector<FieldElement>>>& blocks) {
            MatrixF m(L, n, n);
            for (std::size_t s = 0; s < r; ++s)
                for (std::size_t t = 0; t < r; ++t) {
                    if (blocks[s][t].empty()) continue;
                    MatrixF rep = detail_gen::regular_rep(alg, emb, blocks[s][t]);
                    for (std::size_t i = 0; i < d; ++i)
                        for (std::size_t j = 0; j < d; ++j) m.at(s * d + i, t * d + j) = rep.at(i, j);
                }
            return m;
        };
        std::vector<std::vector<std::vector<FieldElement>>> lo(r, std::vector<std::vector<FieldElement>>(r)),
            di(r, std::vector<std::vector<FieldElement>>(r)), up(r, std::vector<std::vector<FieldElement>>(r));
        std::vector<FieldElement> one(d, L.zero());
        for (std::size_t i = 0; i < d; ++i) one[i] = emb.apply(alg.unit()[i]);
        for (std::size_t s = 0; s < r; ++s)
            for (std::size_t t = 0; t < r; ++t) {
                if (s == t) {
                    lo[s][t] = one;
                    up[s][t] = one;
                    di[s][t] = detail_gen::random_ring_unit(rng, alg, emb);
                } else if (s > t) {
                    lo[s][t] = detail_gen::random_ring_element(rng, alg, L);
                } else {
                    up[s][t] = detail_gen::random_ring_element(rng, alg, L);
                }
            }
        MatrixF sigma_mat = expand(lo) * expand(di) * expand(up);
        MatrixF q = random_invertible(rng, L, n);
        MatrixF qi = inverse(q);
        std::vector<MatrixF> action_c;
        for (const auto& a : action) action_c.push_back(qi * a * q);
        MatrixF sigma_c = qi * sigma_mat * q.frobenius_entrywise(1);
        EquivariantModule mod(alg, L, std::move(action_c), std::move(sigma_c));
        try {
            (void)splitting_degree(SemilinearEndo(mod.sigma), degree_cap);
            return mod;
        } catch (const CapacityError&) {
            continue;
        }
    }
}

}  // namespace instancegen
}  // namespace fqdescent
