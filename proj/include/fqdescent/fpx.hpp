#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

namespace fqdescent {
namespace fpx {

/// Dense univariate polynomial over F_p, little-endian coefficient vector.
/// Coefficients are reduced residues in [0, p). Trailing zeros are allowed
/// in intermediates; trim() restores canonical form.
using Poly = std::vector<std::uint32_t>;

inline void trim(Poly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

inline int degree(const Poly& a) {
    for (std::size_t i = a.size(); i-- > 0;)
        if (a[i] != 0) return static_cast<int>(i);
    return -1;
}

inline bool is_zero(const Poly& a) { return degree(a) < 0; }

inline Poly monomial_x() { return Poly{0, 1}; }

namespace detail {

// --- packed GF(2) kernels -------------------------------------------------

using F2 = std::vector<std::uint64_t>;

inline F2 f2_pack(const Poly& a) {
    F2 w((a.size() + 63) / 64, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] & 1) w[i / 64] |= (1ull << (i % 64));
    return w;
}

inline Poly f2_unpack(const F2& w, std::size_t nbits) {
    Poly a(nbits, 0);
    for (std::size_t i = 0; i < nbits && i / 64 < w.size(); ++i) a[i] = (w[i / 64] >> (i % 64)) & 1;
    trim(a);
    return a;
}

inline int f2_degree(const F2& w) {
    for (std::size_t i = w.size(); i-- > 0;)
        if (w[i]) return static_cast<int>(i * 64 + 63 - static_cast<int>(__builtin_clzll(w[i])));
    return -1;
}

inline bool f2_bit(const F2& w, std::size_t i) {
    return i / 64 < w.size() && ((w[i / 64] >> (i % 64)) & 1);
}

// r ^= a << s
inline void f2_xor_shifted(F2& r, const F2& a, std::size_t s) {
    std::size_t word = s / 64, bit = s % 64;
    if (r.size() < a.size() + word + 1) r.resize(a.size() + word + 1, 0);
    if (bit == 0) {
        for (std::size_t i = 0; i < a.size(); ++i) r[i + word] ^= a[i];
    } else {
        for (std::size_t i = 0; i < a.size(); ++i) {
            r[i + word] ^= a[i] << bit;
            r[i + word + 1] ^= a[i] >> (64 - bit);
        }
    }
}

inline F2 f2_mul(const F2& a, const F2& b) {
    int da = f2_degree(a), db = f2_degree(b);
    if (da < 0 || db < 0) return F2{};
    F2 r((da + db) / 64 + 2, 0);
    for (int i = 0; i <= da; ++i)
        if (f2_bit(a, static_cast<std::size_t>(i))) f2_xor_shifted(r, b, static_cast<std::size_t>(i));
    return r;
}

inline std::uint64_t f2_spread32(std::uint32_t x) {
    std::uint64_t v = x;
    v = (v | (v << 16)) & 0x0000FFFF0000FFFFull;
    v = (v | (v << 8)) & 0x00FF00FF00FF00FFull;
    v = (v | (v << 4)) & 0x0F0F0F0F0F0F0F0Full;
    v = (v | (v << 2)) & 0x3333333333333333ull;
    v = (v | (v << 1)) & 0x5555555555555555ull;
    return v;
}

/// Squaring over GF(2) just interleaves zero bits.
inline F2 f2_sqr(const F2& a) {
    F2 r(a.size() * 2, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        r[2 * i] = f2_spread32(static_cast<std::uint32_t>(a[i]));
        r[2 * i + 1] = f2_spread32(static_cast<std::uint32_t>(a[i] >> 32));
    }
    return r;
}


// a mod f, f monic of degree df
inline void f2_mod_inplace(F2& a, const F2& f, int df) {
    for (int i = f2_degree(a); i >= df; i = f2_degree(a))
        f2_xor_shifted(a, f, static_cast<std::size_t>(i - df));
}

inline F2 f2_gcd_packed(F2 a, F2 b) {
    int db = f2_degree(b);
    while (db >= 0) {
        f2_mod_inplace(a, b, db);
        std::swap(a, b);
        db = f2_degree(b);
    }
    return a;
}

}  // namespace detail

// --- generic arithmetic ----------------------------------------------------

inline Poly add(std::uint32_t p, const Poly& a, const Poly& b) {
    Poly r(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < r.size(); ++i) {
        std::uint32_t v = (i < a.size() ? a[i] : 0) + (i < b.size() ? b[i] : 0);
        r[i] = v >= p ? v - p : v;
    }
    trim(r);
    return r;
}

inline Poly sub(std::uint32_t p, const Poly& a, const Poly& b) {
    Poly r(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < r.size(); ++i) {
        std::uint32_t av = i < a.size() ? a[i] : 0, bv = i < b.size() ? b[i] : 0;
        r[i] = av >= bv ? av - bv : av + p - bv;
    }
    trim(r);
    return r;
}

inline Poly scale(std::uint32_t p, const Poly& a, std::uint32_t c) {
    Poly r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = static_cast<std::uint32_t>((std::uint64_t)a[i] * c % p);
    trim(r);
    return r;
}

inline Poly mul(std::uint32_t p, const Poly& a, const Poly& b) {
    int da = degree(a), db = degree(b);
    if (da < 0 || db < 0) return Poly{};
    if (p == 2) {
        auto r = detail::f2_mul(detail::f2_pack(a), detail::f2_pack(b));
        return detail::f2_unpack(r, static_cast<std::size_t>(da + db) + 1);
    }
    Poly r(static_cast<std::size_t>(da + db) + 1, 0);
    std::vector<std::uint64_t> acc(r.size(), 0);
    for (int i = 0; i <= da; ++i) {
        if (a[static_cast<std::size_t>(i)] == 0) continue;
        std::uint64_t ai = a[static_cast<std::size_t>(i)];
        for (int j = 0; j <= db; ++j) acc[static_cast<std::size_t>(i + j)] += ai * b[static_cast<std::size_t>(j)];
    }
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = static_cast<std::uint32_t>(acc[i] % p);
    trim(r);
    return r;
}

/// a mod f for monic f.
inline Poly mod(std::uint32_t p, Poly a, const Poly& f) {
    int df = degree(f);
    if (df < 0) return a;
    if (p == 2) {
        auto fw = detail::f2_pack(f);
        auto aw = detail::f2_pack(a);
        detail::f2_mod_inplace(aw, fw, df);
        return detail::f2_unpack(aw, static_cast<std::size_t>(df));
    }
    trim(a);
    for (int i = degree(a); i >= df; --i) {
        std::uint32_t c = a[static_cast<std::size_t>(i)];
        if (c == 0) continue;
        for (int j = 0; j <= df; ++j) {
            std::size_t k = static_cast<std::size_t>(i - df + j);
            std::uint64_t v = (std::uint64_t)f[static_cast<std::size_t>(j)] * c % p;
            a[k] = static_cast<std::uint32_t>((a[k] + p - v) % p);
        }
    }
    trim(a);
    return a;
}

inline Poly mulmod(std::uint32_t p, const Poly& a, const Poly& b, const Poly& f) {
    return mod(p, mul(p, a, b), f);
}

inline std::uint32_t inv_mod_p(std::uint32_t p, std::uint32_t a) {
    // Fermat; p prime, a != 0.
    std::uint64_t r = 1, base = a % p;
    std::uint32_t e = p - 2;
    while (e) {
        if (e & 1) r = r * base % p;
        base = base * base % p;
        e >>= 1;
    }
    return static_cast<std::uint32_t>(r);
}

inline Poly make_monic(std::uint32_t p, Poly a) {
    int d = degree(a);
    if (d < 0) return a;
    std::uint32_t lc = a[static_cast<std::size_t>(d)];
    if (lc != 1) a = scale(p, a, inv_mod_p(p, lc));
    trim(a);
    return a;
}

inline Poly gcd(std::uint32_t p, Poly a, Poly b) {
    if (p == 2) {
        auto aw = detail::f2_pack(a);
        auto bw = detail::f2_pack(b);
        int da = detail::f2_degree(aw), db = detail::f2_degree(bw);
        while (db >= 0) {
            detail::f2_mod_inplace(aw, bw, db);
            std::swap(aw, bw);
            da = db;
            db = detail::f2_degree(bw);
        }
        (void)da;
        int dg = detail::f2_degree(aw);
        return dg < 0 ? Poly{} : detail::f2_unpack(aw, static_cast<std::size_t>(dg) + 1);
    }
    trim(a);
    trim(b);
    while (!is_zero(b)) {
        // reduce a by b in place
        int db = degree(b);
        std::uint32_t linv = inv_mod_p(p, b[static_cast<std::size_t>(db)]);
        int da = degree(a);
        while (da >= db) {
            std::uint32_t c = static_cast<std::uint32_t>(
                static_cast<std::uint64_t>(a[static_cast<std::size_t>(da)]) * linv % p);
            if (c != 0)
                for (int j = 0; j <= db; ++j) {
                    std::size_t k = static_cast<std::size_t>(da - db + j);
                    std::uint64_t v = static_cast<std::uint64_t>(b[static_cast<std::size_t>(j)]) * c % p;
                    a[k] = static_cast<std::uint32_t>((a[k] + p - v) % p);
                }
            while (da >= 0 && a[static_cast<std::size_t>(da)] == 0) --da;
        }
        a.resize(static_cast<std::size_t>(da + 1));
        std::swap(a, b);
    }
    return make_monic(p, a);
}

/// a^p mod f (one Frobenius step in F_p[t]/(f)).
inline Poly pth_power_mod(std::uint32_t p, const Poly& a, const Poly& f) {
    if (p == 2) return mulmod(2, a, a, f);
    Poly r{1};
    Poly base = a;
    std::uint32_t e = p;
    while (e) {
        if (e & 1) r = mulmod(p, r, base, f);
        base = mulmod(p, base, base, f);
        e >>= 1;
    }
    return r;
}

inline std::uint32_t eval_at(std::uint32_t p, const Poly& a, std::uint32_t x) {
    std::uint64_t r = 0;
    for (std::size_t i = a.size(); i-- > 0;) r = (r * x + a[i]) % p;
    return static_cast<std::uint32_t>(r);
}

namespace detail {
inline std::vector<std::uint32_t> prime_factors(std::uint32_t n) {
    std::vector<std::uint32_t> fs;
    for (std::uint32_t q = 2; q * q <= n; ++q)
        if (n % q == 0) {
            fs.push_back(q);
            while (n % q == 0) n /= q;
        }
    if (n > 1) fs.push_back(n);
    return fs;
}
}  // namespace detail

/// Irreducibility test for monic f of degree >= 1. Walks the Frobenius
/// ladder u_k = t^(p^k) mod f; a composite has an irreducible factor of some
/// degree k <= d/2 and is rejected by gcd(u_k - t, f) at that k, so the walk
/// kills composites at their smallest factor degree.
inline bool is_irreducible(std::uint32_t p, const Poly& f) {
    int d = degree(f);
    if (d < 1) return false;
    if (d == 1) return true;
    if (f[0] == 0) return false;
    for (std::uint32_t a = 0; a < p; ++a)
        if (eval_at(p, f, a) == 0) return false;
    if (p == 2) {
        auto fw = detail::f2_pack(f);
        const std::size_t words = (static_cast<std::size_t>(d) + 63) / 64;
        detail::F2 u{2};  // t
        for (int k = 1; k <= d; ++k) {
            u = detail::f2_sqr(u);
            detail::f2_mod_inplace(u, fw, d);
            u.resize(words);
            if (k <= d / 2) {
                detail::F2 um = u;
                if (um.empty()) um.resize(1, 0);
                um[0] ^= 2;  // u - t
                auto g = detail::f2_gcd_packed(std::move(um), fw);
                if (detail::f2_degree(g) != 0) return false;
            }
        }
        return detail::f2_degree(u) == 1 && (u[0] == 2) &&
               std::all_of(u.begin() + 1, u.end(), [](std::uint64_t w) { return w == 0; });
    }
    const Poly x = monomial_x();
    Poly u = x;
    for (int k = 1; k <= d; ++k) {
        u = pth_power_mod(p, u, f);
        if (k <= d / 2) {
            Poly g = gcd(p, sub(p, u, x), f);
            if (degree(g) != 0) return false;
        }
    }
    return u == x;  // t^(p^d) == t mod f
}

/// Lexicographically least monic irreducible of degree d over F_p: candidates
/// are ordered by the value of their coefficient tuple (c_0, ..., c_{d-1})
/// read as a little-endian base-p integer.
inline Poly least_irreducible(std::uint32_t p, std::uint32_t d) {
    Poly f(d + 1, 0);
    f[d] = 1;
    if (d == 1) return f;  // t itself
    for (std::uint64_t n = 1;; ++n) {
        std::uint64_t v = n;
        for (std::uint32_t i = 0; i < d; ++i) {
            f[i] = static_cast<std::uint32_t>(v % p);
            v /= p;
        }
        if (v != 0) break;  // exhausted (cannot happen: irreducibles exist in every degree)
        if (f[0] == 0) continue;
        if (is_irreducible(p, f)) return f;
    }
    return Poly{};
}

}  // namespace fpx
}  // namespace fqdescent
