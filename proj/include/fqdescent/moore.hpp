#pragma once

#include <vector>

#include "fqdescent/field.hpp"
#include "fqdescent/matrix.hpp"
#include "fqdescent/polynomial.hpp"
#include "fqdescent/rng.hpp"

namespace fqdescent {

/// Elements mu_0, ..., mu_r of one field, with q taken from the field.
struct MooreInput {
    Field field;
    std::vector<FieldElement> elements;

    MooreInput(Field f, std::vector<FieldElement> elems) : field(std::move(f)), elements(std::move(elems)) {
        if (elements.empty()) throw std::invalid_argument("MooreInput: at least one element required");
        for (const auto& e : elements)
            if (e.field() != field) throw FieldMismatchError("MooreInput: element from a different field");
    }
};

/// The (r+1) x (r+1) matrix with entry (i, j) = mu_j^(q^i).
inline MatrixF moore_matrix(const MooreInput& in) {
    std::size_t k = in.elements.size();
    MatrixF m(in.field, k, k);
    for (std::size_t j = 0; j < k; ++j) {
        FieldElement cur = in.elements[j];
        for (std::size_t i = 0; i < k; ++i) {
            m.at(i, j) = cur;
            cur = cur.frobenius(1);
        }
    }
    return m;
}

/// mu_0, ..., mu_r are F_q-linearly independent iff their Moore matrix is
/// invertible.
inline bool is_fq_independent(const MooreInput& in) {
    return rank(moore_matrix(in)) == in.elements.size();
}

namespace detail {

inline PolynomialF poly_det(const std::vector<std::vector<PolynomialF>>& m, std::vector<std::size_t> cols,
                            std::size_t row, const Field& f, std::size_t nvars) {
    if (cols.empty()) return PolynomialF::constant(f, nvars, f.one());
    PolynomialF acc(f, nvars);
    for (std::size_t t = 0; t < cols.size(); ++t) {
        std::vector<std::size_t> rest;
        for (std::size_t u = 0; u < cols.size(); ++u)
            if (u != t) rest.push_back(cols[u]);
        PolynomialF minor = poly_det(m, rest, row + 1, f, nvars);
        PolynomialF term = m[row][cols[t]] * minor;
        if (t % 2 == 0)
            acc = acc + term;
        else
            acc = acc - term;
    }
    return acc;
}

/// Representatives of P^r(F_q) with first nonzero coordinate 1, in counting
/// order of the coefficient tuples.
inline std::vector<std::vector<FieldElement>> projective_representatives(const Field& fq, std::size_t r1) {
    std::uint64_t q = fq.order();
    std::vector<std::vector<FieldElement>> reps;
    std::vector<std::uint64_t> ctr(r1, 0);
    // enumerate all nonzero tuples, little-endian counting on coordinates
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < r1; ++i) total *= q;
    auto decode = [&](std::uint64_t n) {
        std::vector<FieldElement> tuple;
        for (std::size_t i = 0; i < r1; ++i) {
            std::uint64_t code = n % q;
            n /= q;
            detail::Coords c(fq.absolute_degree(), 0);
            std::uint64_t v = code;
            for (std::uint32_t t = 0; t < fq.absolute_degree(); ++t) {
                c[t] = static_cast<std::uint32_t>(v % fq.characteristic());
                v /= fq.characteristic();
            }
            tuple.push_back(FieldElement(fq, c));
        }
        return tuple;
    };
    for (std::uint64_t n = 1; n < total; ++n) {
        auto tuple = decode(n);
        std::size_t first = 0;
        while (first < r1 && tuple[first].is_zero()) ++first;
        if (first < r1 && tuple[first] == fq.one()) reps.push_back(std::move(tuple));
    }
    return reps;
}

}  // namespace detail

/// Symbolic verification that det of the Moore matrix in variables
/// x_0..x_r equals omega times the product of all F_q-rational linear forms
/// (one representative per projective point, first nonzero coordinate 1).
/// Returns omega; the identity always holds, so a mismatch signals an
/// arithmetic bug and raises IdentityViolatedError.
inline FieldElement moore_identity_check(std::uint64_t q, std::uint32_t r) {
    if (q > 4 || r > 2) throw CapacityError("symbolic expansion budget is q <= 4, r <= 2", q, 4);
    auto [p, f] = prime_power_split(q);
    Field fq = Field::get(p, f, 1);
    std::size_t r1 = r + 1;
    // Moore matrix of variables: entries are monomials x_j^(q^i)
    std::vector<std::vector<PolynomialF>> m(r1, std::vector<PolynomialF>(r1, PolynomialF(fq, r1)));
    std::uint64_t qi = 1;
    for (std::size_t i = 0; i < r1; ++i) {
        for (std::size_t j = 0; j < r1; ++j) {
            PolynomialF::Exponents e(r1, 0);
            e[j] = static_cast<std::uint32_t>(qi);
            m[i][j] = PolynomialF::monomial(fq, e, fq.one());
        }
        qi *= q;
    }
    std::vector<std::size_t> cols(r1);
    for (std::size_t i = 0; i < r1; ++i) cols[i] = i;
    PolynomialF det_poly = detail::poly_det(m, cols, 0, fq, r1);
    PolynomialF prod = PolynomialF::constant(fq, r1, fq.one());
    for (const auto& rep : detail::projective_representatives(fq, r1)) {
        PolynomialF lin(fq, r1);
        for (std::size_t i = 0; i < r1; ++i) {
            PolynomialF::Exponents e(r1, 0);
            e[i] = 1;
            if (!rep[i].is_zero()) lin = lin + PolynomialF::monomial(fq, e, rep[i]);
        }
        prod = prod * lin;
    }
    if (prod.is_zero() || det_poly.is_zero()) throw IdentityViolatedError("degenerate symbolic expansion");
    const auto& [e0, c0] = *prod.terms().begin();
    auto it = det_poly.terms().find(e0);
    if (it == det_poly.terms().end()) throw IdentityViolatedError("determinant misses a product monomial");
    FieldElement omega = it->second * c0.inverse();
    if (det_poly != prod.scale(omega)) throw IdentityViolatedError("determinant is not a scalar multiple of the product");
    return omega;
}

/// Randomized evaluation form of the same identity, for (q, r) beyond the
/// symbolic budget: both sides are evaluated at sample points of
/// F_{q^6}^{r+1} and must agree exactly, with one omega fitting all points.
inline FieldElement moore_identity_check_randomized(std::uint64_t q, std::uint32_t r, std::size_t trials, Rng& rng) {
    auto [p, f] = prime_power_split(q);
    Field fq = Field::get(p, f, 1);
    Field big = Field::get(p, f, 6);
    EmbeddingMap emb = embedding_between(fq, big);
    std::size_t r1 = r + 1;
    auto reps = detail::projective_representatives(fq, r1);
    std::optional<FieldElement> omega;
    for (std::size_t t = 0; t < trials; ++t) {
        std::vector<FieldElement> pt;
        for (std::size_t i = 0; i < r1; ++i) {
            detail::Coords c(big.absolute_degree());
            for (auto& x : c) x = static_cast<std::uint32_t>(rng.below(p));
            pt.push_back(FieldElement(big, c));
        }
        MatrixF moore(big, r1, r1);
        for (std::size_t j = 0; j < r1; ++j) {
            FieldElement cur = pt[j];
            for (std::size_t i = 0; i < r1; ++i) {
                moore.at(i, j) = cur;
                cur = cur.frobenius(1);
            }
        }
        FieldElement d = det(moore);
        FieldElement prod = big.one();
        for (const auto& rep : reps) {
            FieldElement lin = big.zero();
            for (std::size_t i = 0; i < r1; ++i)
                if (!rep[i].is_zero()) lin = lin + emb.apply(rep[i]) * pt[i];
            prod = prod * lin;
        }
        if (prod.is_zero()) {
            if (!d.is_zero()) throw IdentityViolatedError("determinant nonzero where the product vanishes");
            continue;
        }
        FieldElement w = d * prod.inverse();
        if (!omega) {
            omega = w;
            // omega must be a nonzero F_q-scalar
            if (w.is_zero() || w.frobenius(1) != w)
                throw IdentityViolatedError("omega is not F_q-rational");
        } else if (*omega != w) {
            throw IdentityViolatedError("omega varies across sample points");
        }
    }
    if (!omega) throw IdentityViolatedError("all sample points degenerate");
    return *omega;
}

}  // namespace fqdescent
