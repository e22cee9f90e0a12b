#pragma once

#include <map>

#include "fqdescent/cocycle.hpp"
#include "fqdescent/dual.hpp"
#include "fqdescent/semilinear.hpp"

namespace fqdescent {

enum class BetaRing { field, dual_numbers, mu_counterexample };

struct BetaReport {
    BetaRing ring = BetaRing::field;
    Field base;  // F_{q^m}
    std::size_t n = 0;
    std::uint64_t total_targets = 0;
    std::uint64_t failed_targets = 0;  // targets whose solution exceeded the degree cap
    bool all_hit = false;
    /// minimal extension degree -> number of targets solved there
    std::map<std::uint32_t, std::uint64_t> e_histogram;
    /// mu mode only
    MuPowerReport mu;
};

namespace detail {

inline bool next_matrix_counter(std::vector<std::uint64_t>& ctr, std::uint64_t radix) {
    for (auto& c : ctr) {
        if (++c < radix) return true;
        c = 0;
    }
    return false;
}

inline MatrixF matrix_from_counter(const Field& f, std::size_t n, const std::vector<std::uint64_t>& ctr) {
    std::uint32_t p = f.characteristic(), d = f.absolute_degree();
    MatrixF m(f, n, n);
    for (std::size_t idx = 0; idx < ctr.size(); ++idx) {
        Coords c(d, 0);
        std::uint64_t v = ctr[idx];
        for (std::uint32_t i = 0; i < d; ++i) {
            c[i] = static_cast<std::uint32_t>(v % p);
            v /= p;
        }
        m.at(idx / n, idx % n) = FieldElement(f, std::move(c));
    }
    return m;
}

}  // namespace detail

/// Enumerates every target of the Lang map over the chosen coefficient ring
/// and records the minimal extension degree that solves it. The field ring
/// enumerates GL_n(F_{q^m}); the dual-numbers ring enumerates the units of
/// M_n(F_{q^m}[eps]/(eps^2)); the counterexample mode reports the image of
/// the (q-1)-power map on mu_{q-1} instead.
inline BetaReport beta_surjectivity_report(const Field& base, std::size_t n, BetaRing ring,
                                           std::size_t degree_cap = kDefaultDegreeCap) {
    BetaReport rep;
    rep.ring = ring;
    rep.base = base;
    rep.n = n;
    if (ring == BetaRing::mu_counterexample) {
        rep.mu = mu_power_demo(base);
        rep.total_targets = rep.mu.mu_order;
        rep.all_hit = rep.mu.surjective;
        return rep;
    }
    std::uint64_t order = base.order();
    std::size_t cells = n * n * (ring == BetaRing::dual_numbers ? 2 : 1);
    // enumeration bound: order^cells <= kEnumerationCap
    std::uint64_t count = 1;
    for (std::size_t i = 0; i < cells; ++i) {
        if (count > kEnumerationCap / order)
            throw CapacityError("target ring too large for enumeration", UINT64_MAX, kEnumerationCap);
        count *= order;
    }
    std::vector<std::uint64_t> ctr(cells, 0);
    do {
        try {
            if (ring == BetaRing::field) {
                MatrixF a = detail::matrix_from_counter(base, n, ctr);
                if (rank(a) != n) continue;
                ++rep.total_targets;
                LangSolution sol = lang_solve(a, degree_cap);
                ++rep.e_histogram[sol.extension_degree];
            } else {
                std::vector<std::uint64_t> c0(ctr.begin(), ctr.begin() + static_cast<std::ptrdiff_t>(n * n));
                std::vector<std::uint64_t> c1(ctr.begin() + static_cast<std::ptrdiff_t>(n * n), ctr.end());
                MatrixF a0 = detail::matrix_from_counter(base, n, c0);
                if (rank(a0) != n) continue;
                ++rep.total_targets;
                MatrixF a1 = detail::matrix_from_counter(base, n, c1);
                DualLangSolution sol = lang_solve_dual(DualMatrix(a0, a1), degree_cap);
                ++rep.e_histogram[sol.extension_degree];
            }
        } catch (const CapacityError&) {
            ++rep.failed_targets;
        }
    } while (detail::next_matrix_counter(ctr, order));
    rep.all_hit = rep.failed_targets == 0 && rep.total_targets > 0;
    return rep;
}

}  // namespace fqdescent
