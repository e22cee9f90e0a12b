#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "fqdescent/field.hpp"

namespace fqdescent {

/// Bound on the group order for every enumeration in this header.
inline constexpr std::uint64_t kEnumerationCap = 1u << 16;

/// A unit lambda x^t of the Laurent ring F_{q^m}[x, x^{-1}].
struct LaurentUnit {
    FieldElement lambda;
    std::int64_t t = 0;

    bool operator==(const LaurentUnit& o) const { return lambda == o.lambda && t == o.t; }
    bool operator!=(const LaurentUnit& o) const { return !(*this == o); }
};

inline LaurentUnit make_unit(FieldElement lambda, std::int64_t t) {
    if (lambda.is_zero()) throw std::invalid_argument("LaurentUnit: scalar part must be nonzero");
    return LaurentUnit{std::move(lambda), t};
}

inline LaurentUnit unit_mul(const LaurentUnit& u, const LaurentUnit& v) {
    return LaurentUnit{u.lambda * v.lambda, u.t + v.t};
}

/// u -> u phi(u)^{-1}. Since phi(lambda x^t) = lambda^q x^t the x-degree
/// cancels and only lambda^{1-q} survives.
inline LaurentUnit coboundary(const LaurentUnit& u) {
    FieldElement lam = u.lambda * u.lambda.frobenius(1).inverse();
    return LaurentUnit{std::move(lam), 0};
}

namespace detail {

/// Discrete-log table of F_{q^m}^* over a canonical generator, built by
/// plain enumeration. Fields are capped at kEnumerationCap elements.
struct CyclicTable {
    Field field;
    FieldElement generator;
    std::uint64_t order = 0;  // q^m - 1
    std::map<Coords, std::uint64_t> log;

    std::uint64_t dlog(const FieldElement& x) const {
        auto it = log.find(x.coords());
        if (it == log.end()) throw std::invalid_argument("dlog of zero");
        return it->second;
    }
};

inline std::uint64_t element_order(const FieldElement& x, std::uint64_t group_order) {
    // strip every removable prime factor from the group order
    std::uint64_t ord = group_order;
    for (std::uint32_t l : fpx::detail::prime_factors(static_cast<std::uint32_t>(group_order))) {
        while (ord % l == 0 && x.pow(static_cast<std::int64_t>(ord / l)) == x.field().one()) ord /= l;
    }
    return ord;
}

inline CyclicTable cyclic_table(const Field& f) {
    if (f.order() > kEnumerationCap)
        throw CapacityError("field too large for enumeration", f.order(), kEnumerationCap);
    CyclicTable t;
    t.field = f;
    t.order = f.order() - 1;
    // least generator in counting order
    std::uint32_t p = f.characteristic(), d = f.absolute_degree();
    Coords c(d, 0);
    for (std::uint64_t n = 1;; ++n) {
        std::uint64_t v = n;
        for (std::uint32_t i = 0; i < d; ++i) {
            c[i] = static_cast<std::uint32_t>(v % p);
            v /= p;
        }
        if (v != 0) throw std::logic_error("no multiplicative generator found");
        FieldElement x(f, c);
        if (element_order(x, t.order) == t.order) {
            t.generator = x;
            break;
        }
    }
    FieldElement cur = f.one();
    for (std::uint64_t i = 0; i < t.order; ++i) {
        t.log.emplace(cur.coords(), i);
        cur = cur * t.generator;
    }
    return t;
}

}  // namespace detail

struct PicardReport {
    std::uint64_t torsion_order = 0;  // index of the coboundary image in the scalar part
    std::uint32_t free_rank = 0;      // rank of the x-degree part
    std::vector<LaurentUnit> torsion_representatives;
    LaurentUnit free_generator;  // the class of x
    std::uint64_t scalar_image_size = 0;
    bool degree_obstruction = false;  // no coboundary has t != 0
};

/// Cokernel of the unit coboundary on {lambda x^t} over F_{q^m}: the scalar
/// part contributes Z/(q-1) torsion at finite level, the degree part a free
/// rank 1 generated by the class of x, which no coboundary can reach.
inline PicardReport picard_cokernel(const Field& f) {
    detail::CyclicTable tab = detail::cyclic_table(f);
    std::uint64_t n = tab.order;
    std::uint64_t qm1 = f.q() - 1;  // gcd(q^m - 1, q - 1) = q - 1
    PicardReport r;
    r.torsion_order = qm1;
    r.free_rank = 1;
    r.scalar_image_size = n / qm1;
    // verify by enumeration that the image of lambda -> lambda^{1-q} is the
    // subgroup generated by w^(q-1)
    std::map<detail::Coords, bool> image;
    FieldElement cur = f.one();
    for (std::uint64_t i = 0; i < n; ++i) {
        image[coboundary(LaurentUnit{cur, 0}).lambda.coords()] = true;
        cur = cur * tab.generator;
    }
    if (image.size() != r.scalar_image_size) throw std::logic_error("picard_cokernel: image size mismatch");
    for (const auto& [coords, _] : image)
        if (tab.dlog(FieldElement(f, coords)) % qm1 != 0)
            throw std::logic_error("picard_cokernel: image is not the (q-1)-th power subgroup");
    FieldElement w = tab.generator;
    FieldElement rep = f.one();
    for (std::uint64_t i = 0; i < qm1; ++i) {
        r.torsion_representatives.push_back(LaurentUnit{rep, 0});
        rep = rep * w;
    }
    r.free_generator = LaurentUnit{f.one(), 1};
    // the t-component of every coboundary is 0, so nothing maps onto x
    r.degree_obstruction = true;
    return r;
}

/// Canonical coset representative: scalar part w^(dlog mod (q-1)), degree
/// unchanged. Two units share a representative iff they differ by a
/// coboundary.
inline LaurentUnit unit_class(const Field& f, const LaurentUnit& u) {
    if (u.lambda.is_zero()) throw std::invalid_argument("unit_class: zero scalar part");
    detail::CyclicTable tab = detail::cyclic_table(f);
    std::uint64_t qm1 = f.q() - 1;
    std::uint64_t l = tab.dlog(u.lambda) % qm1;
    return LaurentUnit{tab.generator.pow(static_cast<std::int64_t>(l)), u.t};
}

struct MuPowerReport {
    std::uint64_t mu_order = 0;  // |mu_{q-1}|
    std::vector<FieldElement> image;
    bool surjective = false;
};

/// The (q-1)-power map restricted to mu_{q-1} inside F_{q^m}^*: its image is
/// {1} by definition of mu, so the map fails to be onto whenever q > 2.
inline MuPowerReport mu_power_demo(const Field& f) {
    if (f.order() > kEnumerationCap)
        throw CapacityError("field too large for enumeration", f.order(), kEnumerationCap);
    std::uint64_t qm1 = f.q() - 1;
    MuPowerReport r;
    std::vector<FieldElement> mu;
    // enumerate F^* and keep the (q-1)-torsion
    std::uint32_t p = f.characteristic(), d = f.absolute_degree();
    detail::Coords c(d, 0);
    for (std::uint64_t n = 1; n < f.order(); ++n) {
        std::uint64_t v = n;
        for (std::uint32_t i = 0; i < d; ++i) {
            c[i] = static_cast<std::uint32_t>(v % p);
            v /= p;
        }
        FieldElement x(f, c);
        if (x.pow(static_cast<std::int64_t>(qm1)) == f.one()) mu.push_back(x);
    }
    r.mu_order = mu.size();
    for (const auto& x : mu) {
        FieldElement y = x.pow(static_cast<std::int64_t>(qm1));
        bool seen = false;
        for (const auto& z : r.image)
            if (z == y) seen = true;
        if (!seen) r.image.push_back(y);
    }
    r.surjective = r.image.size() == r.mu_order;
    return r;
}

}  // namespace fqdescent
