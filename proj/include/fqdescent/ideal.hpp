#pragma once

#include <vector>

#include "fqdescent/linear_system.hpp"
#include "fqdescent/matrix.hpp"
#include "fqdescent/polynomial.hpp"

namespace fqdescent {

/// A graded component is phi-unstable. Carries a witness element of
/// phi(I_d) \ I_d.
class NotStableError : public DomainError {
   public:
    NotStableError(const std::string& what, std::uint32_t degree, PolynomialF witness)
        : DomainError(what), degree_(degree), witness_(std::move(witness)) {}
    const char* kind() const noexcept override { return "not_stable"; }
    std::uint32_t degree() const noexcept { return degree_; }
    const PolynomialF& witness() const noexcept { return witness_; }

   private:
    std::uint32_t degree_;
    PolynomialF witness_;
};

namespace detail {

inline std::vector<FieldElement> poly_coordinates(const PolynomialF& p,
                                                  const std::vector<std::vector<std::uint32_t>>& mons) {
    std::vector<FieldElement> v(mons.size(), p.field().zero());
    for (std::size_t i = 0; i < mons.size(); ++i) {
        auto it = p.terms().find(mons[i]);
        if (it != p.terms().end()) v[i] = it->second;
    }
    return v;
}

inline PolynomialF poly_from_coordinates(const Field& f, std::size_t nvars,
                                         const std::vector<std::vector<std::uint32_t>>& mons,
                                         const std::vector<FieldElement>& v) {
    PolynomialF p(f, nvars);
    for (std::size_t i = 0; i < mons.size(); ++i)
        if (!v[i].is_zero()) p = p + PolynomialF::monomial(f, mons[i], v[i]);
    return p;
}

}  // namespace detail

/// Degree-truncated homogeneous ideal data: for each degree d <= bound, a
/// canonical echelon basis I_d of a subspace of the degree-d forms, with
/// x_i I_d contained in I_{d+1} inside the truncation.
class GradedIdealTrunc {
   public:
    GradedIdealTrunc(Field field, std::size_t nvars, std::uint32_t degree_bound,
                     std::vector<std::vector<PolynomialF>> components)
        : field_(std::move(field)), nvars_(nvars), bound_(degree_bound), comps_(std::move(components)) {
        comps_.resize(bound_ + 1);
        canonicalize();
        check_closure();
    }

    static GradedIdealTrunc from_generators(const Field& field, std::size_t nvars, std::uint32_t degree_bound,
                                            const std::vector<PolynomialF>& gens) {
        std::vector<std::vector<PolynomialF>> comps(degree_bound + 1);
        for (const auto& g : gens) {
            if (g.is_zero()) continue;
            if (!g.is_homogeneous()) throw std::invalid_argument("from_generators: generators must be homogeneous");
            std::uint32_t dg = static_cast<std::uint32_t>(g.total_degree());
            for (std::uint32_t d = dg; d <= degree_bound; ++d)
                for (const auto& e : monomials_of_degree(nvars, d - dg))
                    comps[d].push_back(g * PolynomialF::monomial(field, e, field.one()));
        }
        return GradedIdealTrunc(field, nvars, degree_bound, std::move(comps));
    }

    const Field& field() const { return field_; }
    std::size_t nvars() const { return nvars_; }
    std::uint32_t degree_bound() const { return bound_; }
    const std::vector<PolynomialF>& component(std::uint32_t d) const { return comps_.at(d); }
    std::size_t dim(std::uint32_t d) const { return comps_.at(d).size(); }

    bool operator==(const GradedIdealTrunc& o) const {
        return field_ == o.field_ && nvars_ == o.nvars_ && bound_ == o.bound_ && comps_ == o.comps_;
    }

   private:
    void canonicalize() {
        for (std::uint32_t d = 0; d <= bound_; ++d) {
            auto& polys = comps_[d];
            if (polys.empty()) continue;
            auto mons = monomials_of_degree(nvars_, d);
            MatrixF rows(field_, polys.size(), mons.size());
            for (std::size_t i = 0; i < polys.size(); ++i) {
                if (polys[i].field() != field_ || polys[i].nvars() != nvars_)
                    throw FieldMismatchError("GradedIdealTrunc: component over a different ring");
                if (!polys[i].is_zero() &&
                    (!polys[i].is_homogeneous() || polys[i].total_degree() != static_cast<int>(d)))
                    throw std::invalid_argument("GradedIdealTrunc: non-homogeneous component entry");
                auto v = detail::poly_coordinates(polys[i], mons);
                for (std::size_t j = 0; j < mons.size(); ++j) rows.at(i, j) = v[j];
            }
            RrefResult rr = rref(std::move(rows));
            std::vector<PolynomialF> canon;
            for (std::size_t i = 0; i < rr.rank; ++i) {
                std::vector<FieldElement> v(mons.size(), field_.zero());
                for (std::size_t j = 0; j < mons.size(); ++j) v[j] = rr.reduced.at(i, j);
                canon.push_back(detail::poly_from_coordinates(field_, nvars_, mons, v));
            }
            polys = std::move(canon);
        }
    }

    void check_closure() const {
        for (std::uint32_t d = 0; d + 1 <= bound_; ++d) {
            if (comps_[d].empty()) continue;
            auto mons = monomials_of_degree(nvars_, d + 1);
            MatrixF rows(field_, comps_[d + 1].size(), mons.size());
            for (std::size_t i = 0; i < comps_[d + 1].size(); ++i) {
                auto v = detail::poly_coordinates(comps_[d + 1][i], mons);
                for (std::size_t j = 0; j < mons.size(); ++j) rows.at(i, j) = v[j];
            }
            std::size_t base_rank = rref(rows).rank;
            for (std::size_t v = 0; v < nvars_; ++v) {
                PolynomialF xv = PolynomialF::variable(field_, nvars_, v);
                for (const auto& b : comps_[d]) {
                    PolynomialF prod = xv * b;
                    MatrixF ext(field_, rows.rows() + 1, mons.size());
                    for (std::size_t i = 0; i < rows.rows(); ++i)
                        for (std::size_t j = 0; j < mons.size(); ++j) ext.at(i, j) = rows.at(i, j);
                    auto pv = detail::poly_coordinates(prod, mons);
                    for (std::size_t j = 0; j < mons.size(); ++j) ext.at(rows.rows(), j) = pv[j];
                    if (rref(std::move(ext)).rank != base_rank)
                        throw std::invalid_argument(
                            "GradedIdealTrunc: not multiplicatively closed within the truncation");
                }
            }
        }
    }

    Field field_;
    std::size_t nvars_;
    std::uint32_t bound_;
    std::vector<std::vector<PolynomialF>> comps_;
};

/// Writes f over the distinguished F_q-basis of F_{q^m}, forms the Moore
/// matrix of the basis elements that actually occur, and recovers the
/// F_q-coefficient components a_r from the Frobenius orbit of f by inverting
/// it. The span of the a_r over F_{q^m} equals the span of the orbit.
inline std::vector<PolynomialF> element_descent(const PolynomialF& f) {
    const Field& L = f.field();
    auto ctx = subfield_ctx(L);
    if (f.is_zero()) return {};
    std::uint32_t m = ctx->capital_m();
    // basis elements with a nonzero component in f
    std::vector<bool> used(m, false);
    for (const auto& [e, c] : f.terms()) {
        auto codes = ctx->to_q_codes(c);
        for (std::uint32_t j = 0; j < m; ++j)
            if (codes[j] != 0) used[j] = true;
    }
    std::vector<FieldElement> mus;
    FieldElement gp = L.one();
    for (std::uint32_t j = 0; j < m; ++j) {
        if (used[j]) mus.push_back(gp);
        gp = gp * L.generator();
    }
    std::size_t k = mus.size();
    // Moore matrix of the used basis elements (invertible: they are a
    // subfamily of an F_q-basis)
    MatrixF moore(L, k, k);
    for (std::size_t r = 0; r < k; ++r)
        for (std::size_t s = 0; s < k; ++s) moore.at(r, s) = mus[s].frobenius(static_cast<std::int64_t>(r));
    MatrixF minv = inverse(moore);
    std::vector<PolynomialF> orbit;
    for (std::size_t r = 0; r < k; ++r) orbit.push_back(f.frobenius_coeffs(static_cast<std::int64_t>(r)));
    Field fq = ctx->fq;
    std::vector<PolynomialF> out;
    for (std::size_t r = 0; r < k; ++r) {
        PolynomialF acc(L, f.nvars());
        for (std::size_t s = 0; s < k; ++s) acc = acc + orbit[s].scale(minv.at(r, s));
        // coefficients are F_q-rational by construction
        PolynomialF low(fq, f.nvars());
        for (const auto& [e, c] : acc.terms()) {
            FieldElement cf = ctx->big_to_fq(c);
            low = low + PolynomialF::monomial(fq, e, cf);
        }
        out.push_back(std::move(low));
    }
    return out;
}

/// Per-degree descent of a phi-stable truncated ideal: each I_d is the
/// extension of scalars of its phi-fixed part, which the fixed-space engine
/// computes exactly. Raises NotStableError with a witness otherwise.
inline GradedIdealTrunc graded_ideal_descent(const GradedIdealTrunc& ideal) {
    const Field& L = ideal.field();
    auto ctx = subfield_ctx(L);
    Field fq = ctx->fq;
    std::vector<std::vector<PolynomialF>> out(ideal.degree_bound() + 1);
    for (std::uint32_t d = 0; d <= ideal.degree_bound(); ++d) {
        const auto& basis = ideal.component(d);
        if (basis.empty()) continue;
        auto mons = monomials_of_degree(ideal.nvars(), d);
        std::size_t s = basis.size();
        // reduce phi(b_j) against the echelon basis to express it in the basis
        MatrixF coords(L, s, mons.size());
        std::vector<std::size_t> pivots(s);
        for (std::size_t i = 0; i < s; ++i) {
            auto v = detail::poly_coordinates(basis[i], mons);
            for (std::size_t j = 0; j < mons.size(); ++j) coords.at(i, j) = v[j];
            std::size_t piv = 0;
            while (piv < mons.size() && coords.at(i, piv).is_zero()) ++piv;
            pivots[i] = piv;
        }
        MatrixF smat(L, s, s);
        for (std::size_t j = 0; j < s; ++j) {
            PolynomialF fb = basis[j].frobenius_coeffs(1);
            auto v = detail::poly_coordinates(fb, mons);
            // basis is in reduced echelon form: coefficients read off at pivots
            for (std::size_t i = 0; i < s; ++i) smat.at(i, j) = v[pivots[i]];
            // remainder must vanish
            std::vector<FieldElement> rem = v;
            for (std::size_t i = 0; i < s; ++i)
                for (std::size_t c = 0; c < mons.size(); ++c) rem[c] = rem[c] - smat.at(i, j) * coords.at(i, c);
            for (std::size_t c = 0; c < mons.size(); ++c)
                if (!rem[c].is_zero())
                    throw NotStableError("graded component is not phi-stable", d, fb);
        }
        auto fixed = semilinear_fixed_space(smat);
        if (fixed.size() != s) throw std::logic_error("graded_ideal_descent: fixed space not full");
        for (const auto& v : fixed) {
            PolynomialF acc(L, ideal.nvars());
            for (std::size_t j = 0; j < s; ++j) acc = acc + basis[j].scale(v[j]);
            PolynomialF low(fq, ideal.nvars());
            for (const auto& [e, c] : acc.terms()) low = low + PolynomialF::monomial(fq, e, ctx->big_to_fq(c));
            out[d].push_back(std::move(low));
        }
    }
    return GradedIdealTrunc(fq, ideal.nvars(), ideal.degree_bound(), std::move(out));
}

}  // namespace fqdescent
