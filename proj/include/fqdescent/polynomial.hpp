#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "fqdescent/field.hpp"

namespace fqdescent {

/// Multivariate polynomial with coefficients in one field. Terms are kept in
/// a map ordered lexicographically by exponent vector with zero coefficients
/// dropped, so equal polynomials have identical representations.
class PolynomialF {
   public:
    using Exponents = std::vector<std::uint32_t>;

    PolynomialF() = default;
    PolynomialF(Field f, std::size_t nvars) : f_(std::move(f)), nvars_(nvars) {}

    static PolynomialF monomial(const Field& f, Exponents e, FieldElement coeff) {
        PolynomialF p(f, e.size());
        if (coeff.field() != f) throw FieldMismatchError("monomial coefficient from a different field");
        if (!coeff.is_zero()) p.terms_.emplace(std::move(e), std::move(coeff));
        return p;
    }

    static PolynomialF variable(const Field& f, std::size_t nvars, std::size_t i) {
        Exponents e(nvars, 0);
        e[i] = 1;
        return monomial(f, std::move(e), f.one());
    }

    static PolynomialF constant(const Field& f, std::size_t nvars, FieldElement c) {
        return monomial(f, Exponents(nvars, 0), std::move(c));
    }

    const Field& field() const { return f_; }
    std::size_t nvars() const { return nvars_; }
    const std::map<Exponents, FieldElement>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    int total_degree() const {
        int d = -1;
        for (const auto& [e, c] : terms_) {
            int s = 0;
            for (auto x : e) s += static_cast<int>(x);
            if (s > d) d = s;
        }
        return d;
    }

    bool is_homogeneous() const {
        int d = -1;
        for (const auto& [e, c] : terms_) {
            int s = 0;
            for (auto x : e) s += static_cast<int>(x);
            if (d < 0)
                d = s;
            else if (s != d)
                return false;
        }
        return true;
    }

    PolynomialF operator+(const PolynomialF& o) const {
        check(o);
        PolynomialF r = *this;
        for (const auto& [e, c] : o.terms_) r.add_term(e, c);
        return r;
    }

    PolynomialF operator-(const PolynomialF& o) const {
        check(o);
        PolynomialF r = *this;
        for (const auto& [e, c] : o.terms_) r.add_term(e, -c);
        return r;
    }

    PolynomialF operator-() const {
        PolynomialF r = *this;
        for (auto& [e, c] : r.terms_) c = -c;
        return r;
    }

    PolynomialF operator*(const PolynomialF& o) const {
        check(o);
        PolynomialF r(f_, nvars_);
        for (const auto& [e1, c1] : terms_)
            for (const auto& [e2, c2] : o.terms_) {
                Exponents e(nvars_);
                for (std::size_t i = 0; i < nvars_; ++i) e[i] = e1[i] + e2[i];
                r.add_term(e, c1 * c2);
            }
        return r;
    }

    PolynomialF scale(const FieldElement& c) const {
        if (c.field() != f_) throw FieldMismatchError("scaling by a foreign scalar");
        PolynomialF r(f_, nvars_);
        if (c.is_zero()) return r;
        for (const auto& [e, x] : terms_) r.terms_.emplace(e, x * c);
        return r;
    }

    bool operator==(const PolynomialF& o) const { return f_ == o.f_ && nvars_ == o.nvars_ && terms_ == o.terms_; }
    bool operator!=(const PolynomialF& o) const { return !(*this == o); }

    FieldElement eval(const std::vector<FieldElement>& point) const {
        if (point.size() != nvars_) throw std::invalid_argument("eval: wrong number of coordinates");
        for (const auto& x : point)
            if (x.field() != f_) throw FieldMismatchError("eval point from a different field");
        FieldElement acc = f_.zero();
        for (const auto& [e, c] : terms_) {
            FieldElement t = c;
            for (std::size_t i = 0; i < nvars_; ++i)
                if (e[i]) t = t * point[i].pow(static_cast<std::int64_t>(e[i]));
            acc = acc + t;
        }
        return acc;
    }

    /// phi acting on coefficients only; monomials are fixed.
    PolynomialF frobenius_coeffs(std::int64_t s = 1) const {
        PolynomialF r(f_, nvars_);
        for (const auto& [e, c] : terms_) r.terms_.emplace(e, c.frobenius(s));
        return r;
    }

    /// Entrywise image under a field embedding.
    PolynomialF map_embed(const EmbeddingMap& emb) const {
        PolynomialF r(emb.target(), nvars_);
        for (const auto& [e, c] : terms_) r.terms_.emplace(e, emb.apply(c));
        return r;
    }

   private:
    void check(const PolynomialF& o) const {
        if (f_ != o.f_) throw FieldMismatchError("polynomial op across fields");
        if (nvars_ != o.nvars_) throw FieldMismatchError("polynomial op across variable counts");
    }

    void add_term(const Exponents& e, const FieldElement& c) {
        auto it = terms_.find(e);
        if (it == terms_.end()) {
            if (!c.is_zero()) terms_.emplace(e, c);
            return;
        }
        it->second = it->second + c;
        if (it->second.is_zero()) terms_.erase(it);
    }

    Field f_;
    std::size_t nvars_ = 0;
    std::map<Exponents, FieldElement> terms_;
};

/// All exponent vectors of total degree d in nvars variables, in the map's
/// lexicographic order. This fixes the monomial coordinates used for graded
/// pieces.
inline std::vector<std::vector<std::uint32_t>> monomials_of_degree(std::size_t nvars, std::uint32_t d) {
    std::vector<std::vector<std::uint32_t>> out;
    std::vector<std::uint32_t> cur(nvars, 0);
    // lexicographically smallest first: recurse on positions
    auto rec = [&](auto&& self, std::size_t i, std::uint32_t left) -> void {
        if (i + 1 == nvars) {
            cur[i] = left;
            out.push_back(cur);
            return;
        }
        for (std::uint32_t v = 0; v <= left; ++v) {
            cur[i] = v;
            self(self, i + 1, left - v);
        }
    };
    if (nvars == 0) return out;
    rec(rec, 0, d);
    return out;
}

}  // namespace fqdescent
