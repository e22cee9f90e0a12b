#pragma once

// Brute-force reference implementations used as independent oracles by the
// unit tests. Everything here works by plain enumeration and never calls the
// code path it is checking.

#include <vector>

#include "fqdescent/field.hpp"
#include "fqdescent/semilinear.hpp"

namespace oracles {

using namespace fqdescent;

inline std::vector<FieldElement> all_elements(const Field& f) {
    std::vector<FieldElement> out;
    std::uint32_t p = f.characteristic(), d = f.absolute_degree();
    detail::Coords c(d, 0);
    for (std::uint64_t n = 0; n < f.order(); ++n) {
        std::uint64_t v = n;
        for (std::uint32_t i = 0; i < d; ++i) {
            c[i] = static_cast<std::uint32_t>(v % p);
            v /= p;
        }
        out.push_back(FieldElement(f, c));
    }
    return out;
}

inline std::vector<FieldElement> subfield_fq_elements(const Field& f) {
    std::vector<FieldElement> out;
    for (const auto& x : all_elements(f))
        if (x.frobenius(1) == x) out.push_back(x);
    return out;
}

/// F_q-linear independence by trying every nontrivial combination.
inline bool independent_by_enumeration(const std::vector<FieldElement>& mus) {
    const Field& f = mus[0].field();
    auto fq = subfield_fq_elements(f);
    std::size_t k = mus.size();
    std::vector<std::size_t> idx(k, 0);
    for (;;) {
        std::size_t pos = 0;
        while (pos < k && ++idx[pos] == fq.size()) idx[pos++] = 0;
        if (pos == k) return true;
        FieldElement acc = f.zero();
        for (std::size_t i = 0; i < k; ++i) acc = acc + fq[idx[i]] * mus[i];
        if (acc.is_zero()) return false;
    }
}

/// Number of sigma-fixed vectors of F_{q^m}^n, found by full enumeration.
/// The fixed set is an F_q-space, so the count is q^dim.
inline std::uint64_t fixed_vector_count(const SemilinearEndo& s, std::uint64_t budget = 1u << 16) {
    const Field& f = s.field();
    std::size_t n = s.dim();
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < n; ++i) {
        if (total > budget / f.order()) throw std::runtime_error("oracle budget exceeded");
        total *= f.order();
    }
    auto elems = all_elements(f);
    std::vector<std::size_t> idx(n, 0);
    std::uint64_t count = 0;
    for (std::uint64_t t = 0; t < total; ++t) {
        std::vector<FieldElement> v;
        std::uint64_t w = t;
        for (std::size_t i = 0; i < n; ++i) {
            v.push_back(elems[w % elems.size()]);
            w /= elems.size();
        }
        if (s.apply(v) == v) ++count;
    }
    return count;
}

inline std::uint32_t fq_dim_from_count(std::uint64_t count, std::uint64_t q) {
    std::uint32_t dim = 0;
    while (count > 1) {
        count /= q;
        ++dim;
    }
    return dim;
}

}  // namespace oracles
