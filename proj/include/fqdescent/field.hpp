#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "fqdescent/errors.hpp"
#include "fqdescent/fpx.hpp"
#include "fqdescent/rng.hpp"

namespace fqdescent {

/// Default bound on the absolute degree [F : F_p] of constructed fields.
/// Every operation that may build larger towers takes an explicit cap.
inline constexpr std::size_t kDefaultDegreeCap = 24;

class Field;
class FieldElement;
class EmbeddingMap;
struct SubfieldCtx;

namespace detail {

using Coords = std::vector<std::uint32_t>;

/// Order used for all canonical "least element" choices: elements are ranked
/// by their coordinate vector read as a little-endian base-p integer.
inline bool counting_less(const Coords& a, const Coords& b) {
    std::size_t n = std::max(a.size(), b.size());
    for (std::size_t i = n; i-- > 0;) {
        std::uint32_t av = i < a.size() ? a[i] : 0;
        std::uint32_t bv = i < b.size() ? b[i] : 0;
        if (av != bv) return av < bv;
    }
    return false;
}

// --- dense F_p matrices (two representations) ------------------------------

/// Bit-packed GF(2) matrix, row-major.
struct GF2Mat {
    std::size_t rows = 0, cols = 0, wpr = 0;
    std::vector<std::uint64_t> w;

    GF2Mat() = default;
    GF2Mat(std::size_t r, std::size_t c) : rows(r), cols(c), wpr((c + 63) / 64), w(r * wpr, 0) {}

    void set(std::size_t i, std::size_t j, std::uint32_t v) {
        auto& word = w[i * wpr + j / 64];
        std::uint64_t bit = 1ull << (j % 64);
        word = v ? (word | bit) : (word & ~bit);
    }
    bool get(std::size_t i, std::size_t j) const { return (w[i * wpr + j / 64] >> (j % 64)) & 1; }

    Coords apply(const Coords& x) const {
        std::vector<std::uint64_t> xp((cols + 63) / 64, 0);
        for (std::size_t j = 0; j < cols; ++j)
            if (x[j] & 1) xp[j / 64] |= 1ull << (j % 64);
        Coords r(rows, 0);
        for (std::size_t i = 0; i < rows; ++i) {
            std::uint64_t acc = 0;
            const std::uint64_t* row = &w[i * wpr];
            for (std::size_t k = 0; k < wpr; ++k) acc ^= row[k] & xp[k];
            r[i] = static_cast<std::uint32_t>(__builtin_popcountll(acc) & 1);
        }
        return r;
    }

    GF2Mat inverse() const {
        // Gauss-Jordan on [A | I].
        GF2Mat aug(rows, 2 * cols);
        for (std::size_t i = 0; i < rows; ++i) {
            for (std::size_t k = 0; k < wpr; ++k) aug.w[i * aug.wpr + k] = w[i * wpr + k];
            aug.set(i, cols + i, 1);
        }
        std::size_t piv = 0;
        for (std::size_t j = 0; j < cols; ++j) {
            std::size_t sel = piv;
            while (sel < rows && !aug.get(sel, j)) ++sel;
            if (sel == rows) throw std::logic_error("GF2Mat::inverse: singular matrix");
            if (sel != piv)
                for (std::size_t k = 0; k < aug.wpr; ++k)
                    std::swap(aug.w[sel * aug.wpr + k], aug.w[piv * aug.wpr + k]);
            for (std::size_t i = 0; i < rows; ++i) {
                if (i != piv && aug.get(i, j))
                    for (std::size_t k = 0; k < aug.wpr; ++k) aug.w[i * aug.wpr + k] ^= aug.w[piv * aug.wpr + k];
            }
            ++piv;
        }
        GF2Mat inv(rows, cols);
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j) inv.set(i, j, aug.get(i, cols + j));
        return inv;
    }
};

/// Plain residue matrix over F_p for odd p, row-major.
struct FpMatGen {
    std::uint32_t p = 0;
    std::size_t rows = 0, cols = 0;
    std::vector<std::uint32_t> a;

    FpMatGen() = default;
    FpMatGen(std::uint32_t pp, std::size_t r, std::size_t c) : p(pp), rows(r), cols(c), a(r * c, 0) {}

    std::uint32_t& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    std::uint32_t at(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

    Coords apply(const Coords& x) const {
        Coords r(rows, 0);
        for (std::size_t i = 0; i < rows; ++i) {
            std::uint64_t acc = 0;
            const std::uint32_t* row = &a[i * cols];
            for (std::size_t j = 0; j < cols; ++j) acc += static_cast<std::uint64_t>(row[j]) * x[j];
            r[i] = static_cast<std::uint32_t>(acc % p);
        }
        return r;
    }

    FpMatGen inverse() const {
        FpMatGen aug(p, rows, 2 * cols);
        for (std::size_t i = 0; i < rows; ++i) {
            for (std::size_t j = 0; j < cols; ++j) aug.at(i, j) = at(i, j);
            aug.at(i, cols + i) = 1;
        }
        std::size_t piv = 0;
        for (std::size_t j = 0; j < cols; ++j) {
            std::size_t sel = piv;
            while (sel < rows && aug.at(sel, j) == 0) ++sel;
            if (sel == rows) throw std::logic_error("FpMatGen::inverse: singular matrix");
            if (sel != piv)
                for (std::size_t k = 0; k < aug.cols; ++k) std::swap(aug.at(sel, k), aug.at(piv, k));
            std::uint32_t s = fpx::inv_mod_p(p, aug.at(piv, j));
            for (std::size_t k = 0; k < aug.cols; ++k)
                aug.at(piv, k) = static_cast<std::uint32_t>(static_cast<std::uint64_t>(aug.at(piv, k)) * s % p);
            for (std::size_t i = 0; i < rows; ++i) {
                if (i == piv) continue;
                std::uint32_t c = aug.at(i, j);
                if (c == 0) continue;
                for (std::size_t k = 0; k < aug.cols; ++k) {
                    std::uint64_t v = static_cast<std::uint64_t>(aug.at(piv, k)) * c % p;
                    aug.at(i, k) = static_cast<std::uint32_t>((aug.at(i, k) + p - v) % p);
                }
            }
            ++piv;
        }
        FpMatGen inv(p, rows, cols);
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j) inv.at(i, j) = aug.at(i, cols + j);
        return inv;
    }
};

/// Nullspace basis of a GF(2) matrix (vectors of 0/1 coordinates).
inline std::vector<Coords> gf2_nullspace(GF2Mat m) {
    std::vector<int> pivot_col_of_row;
    std::vector<int> pivot_row_of_col(m.cols, -1);
    std::size_t piv = 0;
    for (std::size_t j = 0; j < m.cols && piv < m.rows; ++j) {
        std::size_t sel = piv;
        while (sel < m.rows && !m.get(sel, j)) ++sel;
        if (sel == m.rows) continue;
        if (sel != piv)
            for (std::size_t k = 0; k < m.wpr; ++k) std::swap(m.w[sel * m.wpr + k], m.w[piv * m.wpr + k]);
        for (std::size_t i = 0; i < m.rows; ++i)
            if (i != piv && m.get(i, j))
                for (std::size_t k = 0; k < m.wpr; ++k) m.w[i * m.wpr + k] ^= m.w[piv * m.wpr + k];
        pivot_row_of_col[j] = static_cast<int>(piv);
        pivot_col_of_row.push_back(static_cast<int>(j));
        ++piv;
    }
    std::vector<Coords> basis;
    for (std::size_t j = 0; j < m.cols; ++j) {
        if (pivot_row_of_col[j] >= 0) continue;
        Coords v(m.cols, 0);
        v[j] = 1;
        for (std::size_t r = 0; r < piv; ++r)
            if (m.get(r, j)) v[static_cast<std::size_t>(pivot_col_of_row[r])] = 1;
        basis.push_back(std::move(v));
    }
    return basis;
}

/// Nullspace basis of an F_p matrix, odd p.
inline std::vector<Coords> fpgen_nullspace(FpMatGen m) {
    std::uint32_t p = m.p;
    std::vector<int> pivot_col_of_row;
    std::vector<int> pivot_row_of_col(m.cols, -1);
    std::size_t piv = 0;
    for (std::size_t j = 0; j < m.cols && piv < m.rows; ++j) {
        std::size_t sel = piv;
        while (sel < m.rows && m.at(sel, j) == 0) ++sel;
        if (sel == m.rows) continue;
        if (sel != piv)
            for (std::size_t k = 0; k < m.cols; ++k) std::swap(m.at(sel, k), m.at(piv, k));
        std::uint32_t s = fpx::inv_mod_p(p, m.at(piv, j));
        for (std::size_t k = 0; k < m.cols; ++k)
            m.at(piv, k) = static_cast<std::uint32_t>(static_cast<std::uint64_t>(m.at(piv, k)) * s % p);
        for (std::size_t i = 0; i < m.rows; ++i) {
            if (i == piv) continue;
            std::uint32_t c = m.at(i, j);
            if (!c) continue;
            for (std::size_t k = 0; k < m.cols; ++k) {
                std::uint64_t v = static_cast<std::uint64_t>(m.at(piv, k)) * c % p;
                m.at(i, k) = static_cast<std::uint32_t>((m.at(i, k) + p - v) % p);
            }
        }
        pivot_row_of_col[j] = static_cast<int>(piv);
        pivot_col_of_row.push_back(static_cast<int>(j));
        ++piv;
    }
    std::vector<Coords> basis;
    for (std::size_t j = 0; j < m.cols; ++j) {
        if (pivot_row_of_col[j] >= 0) continue;
        Coords v(m.cols, 0);
        v[j] = 1;
        for (std::size_t r = 0; r < piv; ++r) {
            std::uint32_t c = m.at(r, j);
            if (c) v[static_cast<std::size_t>(pivot_col_of_row[r])] = p - c;
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

/// Square F_p-linear map with a representation chosen by characteristic.
struct FpLinearMap {
    std::uint32_t p = 0;
    std::optional<GF2Mat> m2;
    std::optional<FpMatGen> mg;

    static FpLinearMap from_columns(std::uint32_t p, std::size_t d, const std::vector<Coords>& cols) {
        FpLinearMap f;
        f.p = p;
        if (p == 2) {
            GF2Mat m(d, cols.size());
            for (std::size_t j = 0; j < cols.size(); ++j)
                for (std::size_t i = 0; i < d; ++i) m.set(i, j, cols[j][i] & 1);
            f.m2 = std::move(m);
        } else {
            FpMatGen m(p, d, cols.size());
            for (std::size_t j = 0; j < cols.size(); ++j)
                for (std::size_t i = 0; i < d; ++i) m.at(i, j) = cols[j][i];
            f.mg = std::move(m);
        }
        return f;
    }

    Coords apply(const Coords& x) const { return p == 2 ? m2->apply(x) : mg->apply(x); }

    FpLinearMap inverse() const {
        FpLinearMap f;
        f.p = p;
        if (p == 2)
            f.m2 = m2->inverse();
        else
            f.mg = mg->inverse();
        return f;
    }
};

}  // namespace detail

// --- FieldData --------------------------------------------------------------

/// Immutable arithmetic context of one canonical field F_{q^m}, q = p^qexp.
/// Elements are coordinate vectors over F_p in the power basis of the
/// distinguished generator (the residue class of t mod the canonical modulus).
class FieldData {
   public:
    using Coords = detail::Coords;

    FieldData(std::uint32_t p, std::uint32_t qexp, std::uint32_t m) : p_(p), qexp_(qexp), m_(m), deg_(qexp * m) {
        modulus_ = fpx::least_irreducible(p_, deg_);
        if (p_ == 2) packed_modulus_ = fpx::detail::f2_pack(modulus_);
        gen_ = Coords(deg_, 0);
        if (deg_ == 1) {
            gen_[0] = (p_ - modulus_[0] % p_) % p_;  // t == -c0
        } else {
            gen_[1] = 1;
        }
        // x -> x^p as an F_p-linear map: columns are (g^p)^j.
        Coords gp = pow_u64(gen_, p_);
        frobp_ = detail::FpLinearMap::from_columns(p_, deg_, power_columns(gp));
        // x -> x^q, q = p^qexp.
        Coords gq = gen_;
        for (std::uint32_t i = 0; i < qexp_; ++i) gq = frobp_.apply(gq);
        frobq_ = detail::FpLinearMap::from_columns(p_, deg_, power_columns(gq));
        frobq_inv_ = frobq_.inverse();
    }

    std::uint32_t p() const noexcept { return p_; }
    std::uint32_t q_exponent() const noexcept { return qexp_; }
    std::uint32_t m() const noexcept { return m_; }
    std::uint32_t deg() const noexcept { return deg_; }
    const fpx::Poly& modulus() const noexcept { return modulus_; }

    /// q = p^qexp, saturating at UINT64_MAX.
    std::uint64_t q() const noexcept { return sat_pow(p_, qexp_); }
    /// q^m = p^deg, saturating at UINT64_MAX.
    std::uint64_t order() const noexcept { return sat_pow(p_, deg_); }

    Coords zero() const { return Coords(deg_, 0); }
    Coords one() const {
        Coords c(deg_, 0);
        c[0] = 1;
        return c;
    }
    Coords gen() const { return gen_; }
    Coords from_prime_scalar(std::uint32_t v) const {
        Coords c(deg_, 0);
        c[0] = v % p_;
        return c;
    }

    bool is_zero(const Coords& a) const {
        for (auto v : a)
            if (v) return false;
        return true;
    }

    Coords add(const Coords& a, const Coords& b) const {
        Coords r(deg_);
        for (std::uint32_t i = 0; i < deg_; ++i) {
            std::uint32_t v = a[i] + b[i];
            r[i] = v >= p_ ? v - p_ : v;
        }
        return r;
    }

    Coords sub(const Coords& a, const Coords& b) const {
        Coords r(deg_);
        for (std::uint32_t i = 0; i < deg_; ++i) r[i] = a[i] >= b[i] ? a[i] - b[i] : a[i] + p_ - b[i];
        return r;
    }

    Coords neg(const Coords& a) const {
        Coords r(deg_);
        for (std::uint32_t i = 0; i < deg_; ++i) r[i] = a[i] ? p_ - a[i] : 0;
        return r;
    }

    Coords mul(const Coords& a, const Coords& b) const {
        if (p_ == 2) {
            auto aw = fpx::detail::f2_pack(a);
            auto bw = fpx::detail::f2_pack(b);
            auto r = fpx::detail::f2_mul(aw, bw);
            fpx::detail::f2_mod_inplace(r, packed_modulus_, static_cast<int>(deg_));
            Coords c(deg_, 0);
            for (std::uint32_t i = 0; i < deg_; ++i) c[i] = fpx::detail::f2_bit(r, i) ? 1 : 0;
            return c;
        }
        fpx::Poly prod = fpx::mod(p_, fpx::mul(p_, a, b), modulus_);
        prod.resize(deg_, 0);
        return prod;
    }

    /// a * g in O(deg): shift up one slot and reduce the overflow by the
    /// (monic) modulus.
    Coords mul_by_gen(const Coords& a) const {
        Coords r(deg_, 0);
        std::uint32_t top = a[deg_ - 1];
        for (std::uint32_t i = deg_ - 1; i >= 1; --i) r[i] = a[i - 1];
        r[0] = 0;
        if (top) {
            for (std::uint32_t i = 0; i < deg_; ++i) {
                std::uint64_t v = static_cast<std::uint64_t>(modulus_[i]) * top % p_;
                r[i] = static_cast<std::uint32_t>((r[i] + p_ - v) % p_);
            }
        }
        return r;
    }

    Coords scalar_mul(std::uint32_t c, const Coords& a) const {
        Coords r(deg_);
        for (std::uint32_t i = 0; i < deg_; ++i) r[i] = static_cast<std::uint32_t>(static_cast<std::uint64_t>(a[i]) * c % p_);
        return r;
    }

    Coords inv(const Coords& a) const {
        if (is_zero(a)) throw std::domain_error("field inverse of zero");
        // Extended Euclid in F_p[t].
        fpx::Poly r0 = modulus_, r1 = a;
        fpx::trim(r1);
        fpx::Poly s0{}, s1{1};
        while (!fpx::is_zero(r1)) {
            // divide r0 by r1
            fpx::Poly q;
            fpx::Poly rem = r0;
            int d1 = fpx::degree(r1);
            std::uint32_t lead_inv = fpx::inv_mod_p(p_, r1[static_cast<std::size_t>(d1)]);
            int dr = fpx::degree(rem);
            if (dr >= d1) q.resize(static_cast<std::size_t>(dr - d1) + 1, 0);
            while (dr >= d1) {
                std::uint32_t c = static_cast<std::uint32_t>(
                    static_cast<std::uint64_t>(rem[static_cast<std::size_t>(dr)]) * lead_inv % p_);
                q[static_cast<std::size_t>(dr - d1)] = c;
                for (int j = 0; j <= d1; ++j) {
                    std::size_t k = static_cast<std::size_t>(dr - d1 + j);
                    std::uint64_t v = static_cast<std::uint64_t>(r1[static_cast<std::size_t>(j)]) * c % p_;
                    rem[k] = static_cast<std::uint32_t>((rem[k] + p_ - v) % p_);
                }
                dr = fpx::degree(rem);
            }
            fpx::Poly s2 = fpx::sub(p_, s0, fpx::mul(p_, q, s1));
            r0 = std::move(r1);
            r1 = std::move(rem);
            fpx::trim(r1);
            s0 = std::move(s1);
            s1 = std::move(s2);
        }
        // r0 = gcd (a nonzero constant), s0 * a == r0 mod modulus
        std::uint32_t c = fpx::inv_mod_p(p_, r0[0]);
        fpx::Poly res = fpx::scale(p_, s0, c);
        res = fpx::mod(p_, res, modulus_);
        res.resize(deg_, 0);
        return res;
    }

    Coords pow_u64(const Coords& a, std::uint64_t e) const {
        Coords r = one(), base = a;
        while (e) {
            if (e & 1) r = mul(r, base);
            base = mul(base, base);
            e >>= 1;
        }
        return r;
    }

    /// x -> x^p.
    Coords frob_p(const Coords& a) const { return frobp_.apply(a); }

    /// x -> x^(q^s); s is reduced mod m (phi has order m on F_{q^m}).
    Coords frob_q_pow(const Coords& a, std::int64_t s) const {
        std::int64_t r = s % static_cast<std::int64_t>(m_);
        if (r < 0) r += m_;
        Coords x = a;
        // walk whichever direction is shorter
        if (static_cast<std::uint32_t>(r) <= m_ / 2) {
            for (std::int64_t i = 0; i < r; ++i) x = frobq_.apply(x);
        } else {
            for (std::uint32_t i = 0; i < m_ - static_cast<std::uint32_t>(r); ++i) x = frobq_inv_.apply(x);
        }
        return x;
    }

    const detail::FpLinearMap& frobq_map() const noexcept { return frobq_; }
    const detail::FpLinearMap& frobq_inv_map() const noexcept { return frobq_inv_; }

   private:
    static std::uint64_t sat_pow(std::uint64_t b, std::uint32_t e) {
        std::uint64_t r = 1;
        for (std::uint32_t i = 0; i < e; ++i) {
            if (r > UINT64_MAX / b) return UINT64_MAX;
            r *= b;
        }
        return r;
    }

    std::vector<Coords> power_columns(const Coords& w) const {
        std::vector<Coords> cols(deg_);
        cols[0] = one();
        for (std::uint32_t j = 1; j < deg_; ++j) cols[j] = mul(cols[j - 1], w);
        return cols;
    }

    std::uint32_t p_, qexp_, m_, deg_;
    fpx::Poly modulus_;
    fpx::detail::F2 packed_modulus_;
    Coords gen_;
    detail::FpLinearMap frobp_, frobq_, frobq_inv_;
};

// --- Field handle -----------------------------------------------------------

/// Canonical field handle. Two handles with the same (p, q_exponent, m)
/// always share the same FieldData, so equality is pointer equality.
class Field {
   public:
    Field() = default;

    /// Canonical field of order (p^q_exponent)^m. Throws CapacityError when
    /// the absolute degree q_exponent*m exceeds degree_cap.
    static Field get(std::uint32_t p, std::uint32_t q_exponent, std::uint32_t m,
                     std::size_t degree_cap = kDefaultDegreeCap);

    bool valid() const noexcept { return static_cast<bool>(d_); }
    std::uint32_t characteristic() const { return d_->p(); }
    std::uint32_t q_exponent() const { return d_->q_exponent(); }
    std::uint32_t extension_degree() const { return d_->m(); }
    std::uint32_t absolute_degree() const { return d_->deg(); }
    std::uint64_t q() const { return d_->q(); }
    std::uint64_t order() const { return d_->order(); }
    const fpx::Poly& modulus() const { return d_->modulus(); }

    FieldElement zero() const;
    FieldElement one() const;
    FieldElement generator() const;
    FieldElement from_coords(detail::Coords c) const;
    FieldElement from_prime_scalar(std::uint32_t v) const;

    const FieldData& data() const { return *d_; }

    bool operator==(const Field& o) const noexcept { return d_.get() == o.d_.get(); }
    bool operator!=(const Field& o) const noexcept { return !(*this == o); }

    /// Stable ordering for use as a map key.
    bool operator<(const Field& o) const noexcept {
        return std::tuple(d_->p(), d_->q_exponent(), d_->m()) < std::tuple(o.d_->p(), o.d_->q_exponent(), o.d_->m());
    }

   private:
    friend class FieldRegistry;
    explicit Field(std::shared_ptr<const FieldData> d) : d_(std::move(d)) {}
    std::shared_ptr<const FieldData> d_;
};

// --- FieldElement -----------------------------------------------------------

class FieldElement {
   public:
    FieldElement() = default;
    FieldElement(Field f, detail::Coords c) : f_(std::move(f)), c_(std::move(c)) {
        if (c_.size() != f_.absolute_degree()) throw std::invalid_argument("FieldElement: wrong coordinate length");
        for (auto& v : c_) v %= f_.characteristic();
    }

    const Field& field() const noexcept { return f_; }
    const detail::Coords& coords() const noexcept { return c_; }
    bool is_zero() const { return f_.data().is_zero(c_); }

    FieldElement operator+(const FieldElement& o) const { return FieldElement(f_, same(o).add(c_, o.c_)); }
    FieldElement operator-(const FieldElement& o) const { return FieldElement(f_, same(o).sub(c_, o.c_)); }
    FieldElement operator*(const FieldElement& o) const { return FieldElement(f_, same(o).mul(c_, o.c_)); }
    FieldElement operator/(const FieldElement& o) const {
        return FieldElement(f_, same(o).mul(c_, f_.data().inv(o.c_)));
    }
    FieldElement operator-() const { return FieldElement(f_, f_.data().neg(c_)); }

    FieldElement& operator+=(const FieldElement& o) { return *this = *this + o; }
    FieldElement& operator-=(const FieldElement& o) { return *this = *this - o; }
    FieldElement& operator*=(const FieldElement& o) { return *this = *this * o; }

    bool operator==(const FieldElement& o) const { return f_ == o.f_ && c_ == o.c_; }
    bool operator!=(const FieldElement& o) const { return !(*this == o); }

    FieldElement inverse() const { return FieldElement(f_, f_.data().inv(c_)); }

    FieldElement pow(std::int64_t e) const {
        if (e >= 0) return FieldElement(f_, f_.data().pow_u64(c_, static_cast<std::uint64_t>(e)));
        return FieldElement(f_, f_.data().pow_u64(f_.data().inv(c_), static_cast<std::uint64_t>(-e)));
    }

    /// x -> x^(q^s). Negative s is the inverse Frobenius.
    FieldElement frobenius(std::int64_t s = 1) const { return FieldElement(f_, f_.data().frob_q_pow(c_, s)); }

   private:
    const FieldData& same(const FieldElement& o) const {
        if (f_ != o.f_) throw FieldMismatchError("field elements from different fields");
        return f_.data();
    }

    Field f_;
    detail::Coords c_;
};

inline FieldElement Field::zero() const { return FieldElement(*this, d_->zero()); }
inline FieldElement Field::one() const { return FieldElement(*this, d_->one()); }
inline FieldElement Field::generator() const { return FieldElement(*this, d_->gen()); }
inline FieldElement Field::from_coords(detail::Coords c) const { return FieldElement(*this, std::move(c)); }
inline FieldElement Field::from_prime_scalar(std::uint32_t v) const {
    return FieldElement(*this, d_->from_prime_scalar(v));
}

/// The q-power Frobenius as a free function, matching x^(q^s).
inline FieldElement frobenius(const FieldElement& x, std::int64_t s = 1) { return x.frobenius(s); }

// --- EmbeddingMap -----------------------------------------------------------

namespace detail {
struct EmbeddingData {
    Field source, target;
    Coords gen_image;                      // image of the source generator
    std::vector<Coords> gen_image_pows;    // powers 0..s-1
    std::vector<std::size_t> pivot_rows;   // rows of an invertible s x s submatrix
    FpLinearMap pivot_inv;                 // inverse of that submatrix
};
}  // namespace detail

/// The canonical embedding between two fields of the same (p, q_exponent)
/// with source.m | target.m. Ring homomorphism fixing (the canonical copy of)
/// F_q; within the compatibility lattice, embeddings compose along towers.
class EmbeddingMap {
   public:
    EmbeddingMap() = default;

    const Field& source() const { return d_->source; }
    const Field& target() const { return d_->target; }
    FieldElement image_of_generator() const { return FieldElement(d_->target, d_->gen_image); }

    FieldElement apply(const FieldElement& x) const {
        if (x.field() != d_->source) throw FieldMismatchError("embedding applied to foreign element");
        const FieldData& T = d_->target.data();
        detail::Coords acc = T.zero();
        const auto& xs = x.coords();
        for (std::size_t i = 0; i < xs.size(); ++i) {
            if (xs[i] == 0) continue;
            acc = T.add(acc, T.scalar_mul(xs[i], d_->gen_image_pows[i]));
        }
        return FieldElement(d_->target, std::move(acc));
    }

    /// Exact preimage, or nullopt when y is not in the image subfield.
    std::optional<FieldElement> preimage(const FieldElement& y) const {
        if (y.field() != d_->target) throw FieldMismatchError("embedding preimage of foreign element");
        std::size_t s = d_->source.absolute_degree();
        detail::Coords rhs(s);
        for (std::size_t i = 0; i < s; ++i) rhs[i] = y.coords()[d_->pivot_rows[i]];
        detail::Coords x = d_->pivot_inv.apply(rhs);
        FieldElement cand(d_->source, x);
        if (apply(cand) != y) return std::nullopt;
        return cand;
    }

   private:
    friend class FieldRegistry;
    explicit EmbeddingMap(std::shared_ptr<const detail::EmbeddingData> d) : d_(std::move(d)) {}
    std::shared_ptr<const detail::EmbeddingData> d_;
};

/// Result of extend_field: the extension together with the canonical
/// embedding of the base.
struct FieldExtension {
    Field field;
    EmbeddingMap embedding;
};

// --- SubfieldCtx ------------------------------------------------------------

/// Coordinates of a field L = F_{q^M} over its distinguished F_q-basis
/// (1, g, ..., g^{M-1}), with F_q identified with Field(p, q_exponent, 1)
/// through the canonical embedding.
struct SubfieldCtx {
    Field big;                       // L
    Field fq;                        // Field(p, qexp, 1)
    EmbeddingMap emb;                // fq -> L
    std::vector<FieldElement> fq_basis_in_big;  // emb(gamma^t), t < f
    detail::FpLinearMap basis_mat;   // columns g^j * emb(gamma^t), index j*f + t
    detail::FpLinearMap basis_inv;

    std::uint32_t f() const { return fq.absolute_degree(); }
    std::uint32_t capital_m() const { return big.extension_degree(); }

    /// F_q-coordinates of x over (1, g, ..., g^{M-1}), each coded as the
    /// base-p value of its coordinate vector over Field(p, q_exponent, 1).
    std::vector<std::uint32_t> to_q_codes(const FieldElement& x) const {
        detail::Coords y = basis_inv.apply(x.coords());
        std::uint32_t M = capital_m(), ff = f(), p = big.characteristic();
        std::vector<std::uint32_t> codes(M, 0);
        for (std::uint32_t j = 0; j < M; ++j) {
            std::uint32_t c = 0;
            for (std::uint32_t t = ff; t-- > 0;) c = c * p + y[j * ff + t];
            codes[j] = c;
        }
        return codes;
    }

    FieldElement from_q_codes(const std::vector<std::uint32_t>& codes) const {
        std::uint32_t M = capital_m(), ff = f(), p = big.characteristic();
        detail::Coords y(big.absolute_degree(), 0);
        for (std::uint32_t j = 0; j < M; ++j) {
            std::uint32_t v = codes[j];
            for (std::uint32_t t = 0; t < ff; ++t) {
                y[j * ff + t] = v % p;
                v /= p;
            }
        }
        return FieldElement(big, basis_mat.apply(y));
    }

    /// Embed one F_q code into L.
    FieldElement code_to_big(std::uint32_t code) const {
        std::uint32_t p = big.characteristic(), ff = f();
        FieldElement acc = big.zero();
        for (std::uint32_t t = 0; t < ff; ++t) {
            std::uint32_t digit = code % p;
            code /= p;
            if (digit) acc = acc + FieldElement(big, big.data().scalar_mul(digit, fq_basis_in_big[t].coords()));
        }
        return acc;
    }

    /// F_q code of an element known to lie in the canonical F_q copy.
    /// Throws FieldMismatchError if it does not.
    std::uint32_t big_to_code(const FieldElement& x) const {
        auto codes = to_q_codes(x);
        for (std::size_t j = 1; j < codes.size(); ++j)
            if (codes[j] != 0) throw FieldMismatchError("element does not lie in the base subfield");
        return codes[0];
    }

    /// Same, but returning an element of Field(p, qexp, 1).
    FieldElement big_to_fq(const FieldElement& x) const { return code_to_fq(big_to_code(x)); }

    FieldElement code_to_fq(std::uint32_t code) const {
        detail::Coords c(f(), 0);
        std::uint32_t p = big.characteristic();
        for (std::uint32_t t = 0; t < f(); ++t) {
            c[t] = code % p;
            code /= p;
        }
        return FieldElement(fq, std::move(c));
    }

    std::uint32_t fq_to_code(const FieldElement& x) const {
        if (x.field() != fq) throw FieldMismatchError("fq_to_code: element not over the base subfield");
        std::uint32_t c = 0;
        for (std::size_t i = x.coords().size(); i-- > 0;)
            c = c * big.characteristic() + x.coords()[i];
        return c;
    }
};

// --- registry ----------------------------------------------------------------

class FieldRegistry {
   public:
    static FieldRegistry& instance() {
        static FieldRegistry r;
        return r;
    }

    Field field(std::uint32_t p, std::uint32_t qexp, std::uint32_t m) {
        std::lock_guard<std::mutex> lk(mu_);
        return field_unlocked(p, qexp, m);
    }

    EmbeddingMap embedding(const Field& src, const Field& dst) {
        std::lock_guard<std::mutex> lk(mu_);
        return embedding_unlocked(src, dst);
    }

    std::shared_ptr<const SubfieldCtx> subfield(const Field& big) {
        std::lock_guard<std::mutex> lk(mu_);
        return subfield_unlocked(big);
    }

   private:
    using Key = std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>;

    Field field_unlocked(std::uint32_t p, std::uint32_t qexp, std::uint32_t m) {
        Key k{p, qexp, m};
        auto it = fields_.find(k);
        if (it == fields_.end()) it = fields_.emplace(k, std::make_shared<const FieldData>(p, qexp, m)).first;
        return Field(it->second);
    }

    // Estimated size of the canonical-generator search at absolute degree d.
    // Beyond the budget the search is infeasible and embeddings fall back to
    // canonical root finding (still deterministic, not lattice-compatible).
    static bool z_eligible(std::uint32_t p, std::uint32_t d) {
        if (d == 1) return true;
        double est = 1.0;
        for (std::uint32_t l : fpx::detail::prime_factors(d)) {
            std::uint32_t a = d / l;
            if (a == 1) {
                est *= p - 1;
            } else {
                double sub = 1.0;
                for (std::uint32_t i = 0; i < a; ++i) {
                    sub *= p;
                    if (sub > 1e18) return false;
                }
                est *= (sub - 1.0) / a;
                if (!z_eligible(p, a)) return false;
            }
            if (est > 50000.0) return false;
        }
        return true;
    }

    struct ZEntry {
        detail::Coords z;
        fpx::Poly minpoly;
    };

    // Minimal polynomial of x over F_p inside field fd, via the first linear
    // dependence among 1, x, x^2, ...
    static fpx::Poly minpoly_over_fp(const FieldData& fd, const detail::Coords& x) {
        std::uint32_t d = fd.deg(), p = fd.p();
        std::vector<detail::Coords> ech;  // reduced echelon rows
        std::vector<int> pivot_of_col(d, -1);
        std::vector<fpx::Poly> combo;  // combo[r]: echelon row r as a polynomial in x
        detail::Coords cur = fd.one();
        for (std::uint32_t k = 0;; ++k) {
            detail::Coords v = cur;
            fpx::Poly c(k + 1, 0);
            c[k] = 1;
            for (std::uint32_t j = 0; j < d; ++j) {
                if (v[j] == 0 || pivot_of_col[j] < 0) continue;
                std::size_t r = static_cast<std::size_t>(pivot_of_col[j]);
                std::uint32_t s = v[j];
                for (std::uint32_t t = 0; t < d; ++t) {
                    std::uint64_t sb = static_cast<std::uint64_t>(ech[r][t]) * s % p;
                    v[t] = static_cast<std::uint32_t>((v[t] + p - sb) % p);
                }
                c = fpx::sub(p, c, fpx::scale(p, combo[r], s));
                c.resize(k + 1, 0);
            }
            bool zero = true;
            for (auto t : v)
                if (t) zero = false;
            if (zero) {
                fpx::trim(c);
                return fpx::make_monic(p, c);
            }
            std::uint32_t pc = 0;
            while (v[pc] == 0) ++pc;
            std::uint32_t s = fpx::inv_mod_p(p, v[pc]);
            for (std::uint32_t t = 0; t < d; ++t)
                v[t] = static_cast<std::uint32_t>(static_cast<std::uint64_t>(v[t]) * s % p);
            c = fpx::scale(p, c, s);
            c.resize(k + 1, 0);
            pivot_of_col[pc] = static_cast<int>(ech.size());
            ech.push_back(std::move(v));
            combo.push_back(std::move(c));
            cur = fd.mul(cur, x);
        }
    }

    // Norm of x from degree d down to degree a (a | d): product of the
    // p^(a*i)-power conjugates, i < d/a.
    static detail::Coords norm_down(const FieldData& fd, const detail::Coords& x, std::uint32_t a) {
        std::uint32_t steps = fd.deg() / a;
        detail::Coords acc = x, conj = x;
        for (std::uint32_t i = 1; i < steps; ++i) {
            for (std::uint32_t j = 0; j < a; ++j) conj = fd.frob_p(conj);
            acc = fd.mul(acc, conj);
        }
        return acc;
    }

    // Canonical norm-compatible generator of F_{p^d}, or nullptr when no
    // candidate exists within the scan budget (callers then fall back to the
    // canonical-root embedding). The lattice is anchored at the least
    // primitive root of F_p, and each level requires the norm down to every
    // maximal subfield to be a conjugate of that subfield's generator; norms
    // compose, so embeddings defined through these generators commute along
    // towers.
    const ZEntry* z_unlocked(std::uint32_t p, std::uint32_t d) {
        auto key = std::make_pair(p, d);
        auto it = ztable_.find(key);
        if (it != ztable_.end()) return it->second ? &*it->second : nullptr;
        Field host = field_unlocked(p, 1, d);
        const FieldData& fd = host.data();
        ZEntry entry;
        if (d == 1) {
            // least primitive root of F_p
            for (std::uint32_t g = 1; g < p; ++g) {
                std::uint64_t pw = 1;
                std::uint32_t ord = 0;
                do {
                    pw = pw * g % p;
                    ++ord;
                } while (pw != 1);
                if (ord == p - 1) {
                    entry.z = fd.from_prime_scalar(g);
                    break;
                }
            }
            entry.minpoly = minpoly_over_fp(fd, entry.z);
            ztable_.emplace(key, std::move(entry));
            return &*ztable_[key];
        }
        // Conditions at every maximal proper subfield degree, deepest first.
        std::vector<std::pair<std::uint32_t, fpx::Poly>> conds;
        for (std::uint32_t l : fpx::detail::prime_factors(d)) {
            std::uint32_t a = d / l;
            const ZEntry* sub = z_unlocked(p, a);
            if (!sub) {
                ztable_.emplace(key, std::nullopt);
                return nullptr;
            }
            conds.emplace_back(a, sub->minpoly);
        }
        std::sort(conds.begin(), conds.end(), [](const auto& x, const auto& y) { return x.first > y.first; });
        detail::Coords cand(d, 0);
        std::uint64_t scanned = 0;
        const std::uint64_t scan_budget = 5000000;
        for (std::uint64_t n = 1;; ++n) {
            std::uint64_t v = n;
            for (std::uint32_t i = 0; i < d; ++i) {
                cand[i] = static_cast<std::uint32_t>(v % p);
                v /= p;
            }
            if (v != 0 || ++scanned > scan_budget) {
                ztable_.emplace(key, std::nullopt);
                return nullptr;
            }
            bool ok = true;
            for (const auto& [a, mp] : conds) {
                detail::Coords w = norm_down(fd, cand, a);
                if (minpoly_over_fp(fd, w) != mp) {
                    ok = false;
                    break;
                }
            }
            if (!ok) continue;
            fpx::Poly mp = minpoly_over_fp(fd, cand);
            if (fpx::degree(mp) != static_cast<int>(d)) continue;  // must generate
            entry.z = cand;
            entry.minpoly = std::move(mp);
            ztable_.emplace(key, std::move(entry));
            return &*ztable_[key];
        }
    }

    // Deterministic root of the (irreducible over F_p) polynomial u inside the
    // field fd, assuming deg(u) | fd.deg(). Returns the least root in counting
    // order. Small subfields are enumerated directly; otherwise
    // Cantor-Zassenhaus with a fixed seed, made seed-independent by the final
    // canonicalization over the conjugate orbit.
    static detail::Coords canonical_root(const FieldData& fd, const fpx::Poly& u) {
        std::uint32_t p = fd.p();
        int s = fpx::degree(u);

        // All roots lie in the subfield of order p^s, the kernel of
        // x -> x^(p^s) - x. When that subfield is enumerable, scan it.
        std::uint64_t subfield_order = 1;
        for (int i = 0; i < s && subfield_order <= 4096; ++i) subfield_order *= p;
        if (subfield_order <= 4096) {
            std::uint32_t d = fd.deg();
            std::vector<detail::Coords> cols(d);
            for (std::uint32_t j = 0; j < d; ++j) {
                detail::Coords e(d, 0);
                e[j] = 1;
                detail::Coords fr = e;
                for (int i = 0; i < s; ++i) fr = fd.frob_p(fr);
                cols[j] = fd.sub(fr, e);
            }
            std::vector<detail::Coords> kernel;
            if (p == 2) {
                detail::GF2Mat m(d, d);
                for (std::uint32_t j = 0; j < d; ++j)
                    for (std::uint32_t i = 0; i < d; ++i) m.set(i, j, cols[j][i]);
                kernel = detail::gf2_nullspace(std::move(m));
            } else {
                detail::FpMatGen m(p, d, d);
                for (std::uint32_t j = 0; j < d; ++j)
                    for (std::uint32_t i = 0; i < d; ++i) m.at(i, j) = cols[j][i];
                kernel = detail::fpgen_nullspace(std::move(m));
            }
            if (kernel.size() != static_cast<std::size_t>(s))
                throw std::logic_error("canonical_root: subfield kernel has the wrong dimension");
            std::optional<detail::Coords> best;
            for (std::uint64_t n = 0; n < subfield_order; ++n) {
                std::uint64_t v = n;
                detail::Coords cand = fd.zero();
                for (std::size_t i = 0; i < kernel.size(); ++i) {
                    std::uint32_t digit = static_cast<std::uint32_t>(v % p);
                    v /= p;
                    if (digit) cand = fd.add(cand, fd.scalar_mul(digit, kernel[i]));
                }
                // evaluate u at cand
                detail::Coords acc = fd.from_prime_scalar(u[static_cast<std::size_t>(s)]);
                for (int i = s - 1; i >= 0; --i) {
                    acc = fd.mul(acc, cand);
                    acc[0] = (acc[0] + u[static_cast<std::size_t>(i)]) % p;
                }
                if (!fd.is_zero(acc)) continue;
                if (!best || detail::counting_less(cand, *best)) best = cand;
            }
            if (!best) throw std::logic_error("canonical_root: no root in the subfield");
            return *best;
        }
        // L[y]-polynomials as coefficient vectors of Coords.
        using LPoly = std::vector<detail::Coords>;
        auto lp_trim = [&](LPoly& a) {
            while (!a.empty() && fd.is_zero(a.back())) a.pop_back();
        };
        auto lp_mod = [&](LPoly a, const LPoly& f) {
            // f monic
            int df = static_cast<int>(f.size()) - 1;
            lp_trim(a);
            while (static_cast<int>(a.size()) - 1 >= df) {
                detail::Coords c = a.back();
                std::size_t shift = a.size() - 1 - static_cast<std::size_t>(df);
                if (!fd.is_zero(c))
                    for (int j = 0; j <= df; ++j)
                        a[shift + static_cast<std::size_t>(j)] =
                            fd.sub(a[shift + static_cast<std::size_t>(j)], fd.mul(c, f[static_cast<std::size_t>(j)]));
                a.pop_back();
                lp_trim(a);
            }
            return a;
        };
        auto lp_mulmod = [&](const LPoly& a, const LPoly& b, const LPoly& f) {
            if (a.empty() || b.empty()) return LPoly{};
            LPoly r(a.size() + b.size() - 1, fd.zero());
            for (std::size_t i = 0; i < a.size(); ++i) {
                if (fd.is_zero(a[i])) continue;
                for (std::size_t j = 0; j < b.size(); ++j)
                    r[i + j] = fd.add(r[i + j], fd.mul(a[i], b[j]));
            }
            return lp_mod(std::move(r), f);
        };
        auto lp_gcd = [&](LPoly a, LPoly b) {
            lp_trim(a);
            lp_trim(b);
            while (!b.empty()) {
                // make b monic
                detail::Coords lead_inv = fd.inv(b.back());
                for (auto& c : b) c = fd.mul(c, lead_inv);
                LPoly r = lp_mod(a, b);
                a = std::move(b);
                b = std::move(r);
            }
            if (!a.empty()) {
                detail::Coords lead_inv = fd.inv(a.back());
                for (auto& c : a) c = fd.mul(c, lead_inv);
            }
            return a;
        };

        // u lifted to L[y]
        LPoly f(static_cast<std::size_t>(s) + 1);
        for (int i = 0; i <= s; ++i) f[static_cast<std::size_t>(i)] = fd.from_prime_scalar(u[static_cast<std::size_t>(i)]);

        Rng rng(0x5eedull * p + 0x9e37ull * fd.deg() + static_cast<std::uint64_t>(s));
        auto random_lpoly = [&](std::size_t below_deg) {
            LPoly r(below_deg);
            for (auto& c : r) {
                detail::Coords cc(fd.deg());
                for (auto& x : cc) x = static_cast<std::uint32_t>(rng.below(p));
                c = cc;
            }
            lp_trim(r);
            return r;
        };

        // split down to a linear factor
        LPoly work = f;
        while (work.size() > 2) {
            LPoly r = random_lpoly(work.size() - 1);
            if (r.empty()) continue;
            LPoly v;
            if (p == 2) {
                // absolute trace of r in the etale algebra: sum of 2^i powers
                v = r;
                LPoly sq = r;
                for (std::uint32_t i = 1; i < fd.deg(); ++i) {
                    sq = lp_mulmod(sq, sq, work);
                    if (v.size() < sq.size()) v.resize(sq.size(), fd.zero());
                    for (std::size_t j = 0; j < sq.size(); ++j) v[j] = fd.add(v[j], sq[j]);
                    lp_trim(v);
                }
            } else {
                auto lp_pow_u32 = [&](LPoly base, std::uint32_t e, const LPoly& f2) {
                    LPoly acc{fd.one()};
                    while (e) {
                        if (e & 1) acc = lp_mulmod(acc, base, f2);
                        base = lp_mulmod(base, base, f2);
                        e >>= 1;
                    }
                    return acc;
                };
                // r^((|L|-1)/2) = prod over i of (r^((p-1)/2))^(p^i): avoids
                // any exponent wider than a machine word.
                LPoly a = lp_pow_u32(r, (p - 1) / 2, work);
                v = a;
                LPoly conj = a;
                for (std::uint32_t i = 1; i < fd.deg(); ++i) {
                    conj = lp_pow_u32(conj, p, work);
                    v = lp_mulmod(v, conj, work);
                }
                // components are now 0 or +-1; shift by -1 before the gcd
                if (v.empty()) v = LPoly{fd.zero()};
                v[0] = fd.sub(v[0], fd.one());
            }
            LPoly g = lp_gcd(work, v);
            if (g.size() > 1 && g.size() < work.size()) {
                work = std::move(g);
            } else if (p == 2 && !v.empty()) {
                // try the complementary factor: gcd(work, v + 1)
                LPoly v1 = v;
                v1[0] = fd.add(v1[0], fd.one());
                LPoly g1 = lp_gcd(work, v1);
                if (g1.size() > 1 && g1.size() < work.size()) work = std::move(g1);
            }
        }
        // work = y + c  ->  root = -c
        detail::Coords root = fd.neg(work[0]);
        // canonicalize over the conjugate orbit
        detail::Coords best = root, conj = root;
        for (int i = 1; i < s; ++i) {
            conj = fd.frob_p(conj);
            if (detail::counting_less(conj, best)) best = conj;
        }
        return best;
    }

    EmbeddingMap embedding_unlocked(const Field& src, const Field& dst) {
        if (src.characteristic() != dst.characteristic() || src.q_exponent() != dst.q_exponent())
            throw FieldMismatchError("embedding requires matching (p, q)");
        if (dst.extension_degree() % src.extension_degree() != 0)
            throw FieldMismatchError("no embedding: source degree does not divide target degree");
        Key sk{src.characteristic(), src.q_exponent(), src.extension_degree()};
        Key dk{dst.characteristic(), dst.q_exponent(), dst.extension_degree()};
        auto it = embeddings_.find({sk, dk});
        if (it != embeddings_.end()) return EmbeddingMap(it->second);

        std::uint32_t p = src.characteristic();
        std::uint32_t s = src.absolute_degree(), D = dst.absolute_degree();
        const FieldData& T = dst.data();
        detail::Coords gen_image;
        const ZEntry* zs = nullptr;
        const ZEntry* zD = nullptr;
        if (s != D && s != 1 && z_eligible(p, s) && z_eligible(p, D)) {
            zs = z_unlocked(p, s);
            zD = z_unlocked(p, D);
        }
        if (s == D) {
            gen_image = T.gen();
        } else if (s == 1) {
            gen_image = T.from_prime_scalar(src.data().gen().empty() ? 0 : src.data().gen()[0]);
        } else if (zs && zD) {
            // express source generator over the power basis of z_s
            const FieldData& S = src.data();
            std::vector<detail::Coords> cols(s);
            detail::Coords zp = S.one();
            for (std::uint32_t j = 0; j < s; ++j) {
                cols[j] = zp;
                zp = S.mul(zp, zs->z);
            }
            auto zmat = detail::FpLinearMap::from_columns(p, s, cols);
            detail::Coords gcoef = zmat.inverse().apply(S.gen());
            // w = norm-compatible image of z_s in the target
            detail::Coords w = norm_down(T, zD->z, s);
            detail::Coords acc = T.zero(), wp = T.one();
            for (std::uint32_t j = 0; j < s; ++j) {
                if (gcoef[j]) acc = T.add(acc, T.scalar_mul(gcoef[j], wp));
                wp = T.mul(wp, w);
            }
            gen_image = std::move(acc);
        } else {
            gen_image = canonical_root(T, src.modulus());
        }

        auto data = std::make_shared<detail::EmbeddingData>();
        data->source = src;
        data->target = dst;
        data->gen_image = gen_image;
        data->gen_image_pows.resize(s);
        data->gen_image_pows[0] = T.one();
        for (std::uint32_t j = 1; j < s; ++j) data->gen_image_pows[j] = T.mul(data->gen_image_pows[j - 1], gen_image);
        // sanity: the source modulus must vanish on the image
        {
            detail::Coords acc = T.zero(), gp = T.one();
            const auto& mod = src.modulus();
            for (std::size_t i = 0; i < mod.size(); ++i) {
                if (mod[i]) acc = T.add(acc, T.scalar_mul(mod[i], gp));
                if (i + 1 < mod.size()) gp = T.mul(gp, gen_image);
            }
            if (!T.is_zero(acc)) throw std::logic_error("embedding construction failed the modulus check");
        }
        // preimage solver: pick s independent rows of the D x s matrix of powers
        {
            detail::FpMatGen work(p, s, D);  // transposed for row scanning convenience
            for (std::uint32_t j = 0; j < s; ++j)
                for (std::uint32_t i = 0; i < D; ++i) work.at(j, i) = data->gen_image_pows[j][i];
            // greedy pick of independent coordinate positions
            std::vector<std::size_t> rows;
            detail::FpMatGen ech(p, s, s);
            std::size_t have = 0;
            for (std::uint32_t i = 0; i < D && have < s; ++i) {
                detail::Coords col(s);
                for (std::uint32_t j = 0; j < s; ++j) col[j] = work.at(j, i);
                // reduce against chosen ones (tiny, do rank check by trial)
                std::vector<std::size_t> trial = rows;
                trial.push_back(i);
                detail::FpMatGen sub(p, trial.size(), s);
                for (std::size_t r = 0; r < trial.size(); ++r)
                    for (std::uint32_t j = 0; j < s; ++j) sub.at(r, j) = work.at(j, trial[r]);
                // rank via elimination
                std::size_t rank = 0;
                {
                    auto mm = sub;
                    std::size_t pr = 0;
                    for (std::uint32_t j = 0; j < s && pr < mm.rows; ++j) {
                        std::size_t sel = pr;
                        while (sel < mm.rows && mm.at(sel, j) == 0) ++sel;
                        if (sel == mm.rows) continue;
                        for (std::uint32_t k = 0; k < s; ++k) std::swap(mm.at(sel, k), mm.at(pr, k));
                        std::uint32_t sc = fpx::inv_mod_p(p, mm.at(pr, j));
                        for (std::uint32_t k = 0; k < s; ++k)
                            mm.at(pr, k) = static_cast<std::uint32_t>(static_cast<std::uint64_t>(mm.at(pr, k)) * sc % p);
                        for (std::size_t r2 = 0; r2 < mm.rows; ++r2) {
                            if (r2 == pr) continue;
                            std::uint32_t c = mm.at(r2, j);
                            if (!c) continue;
                            for (std::uint32_t k = 0; k < s; ++k) {
                                std::uint64_t v = static_cast<std::uint64_t>(mm.at(pr, k)) * c % p;
                                mm.at(r2, k) = static_cast<std::uint32_t>((mm.at(r2, k) + p - v) % p);
                            }
                        }
                        ++pr;
                    }
                    rank = pr;
                }
                if (rank == trial.size()) {
                    rows = trial;
                    ++have;
                }
            }
            if (rows.size() != s) throw std::logic_error("embedding power basis is rank-deficient");
            data->pivot_rows = rows;
            std::vector<detail::Coords> subcols(s, detail::Coords(s));
            for (std::uint32_t j = 0; j < s; ++j)
                for (std::size_t r = 0; r < s; ++r) subcols[j][r] = data->gen_image_pows[j][rows[r]];
            data->pivot_inv = detail::FpLinearMap::from_columns(p, s, subcols).inverse();
        }

        embeddings_.emplace(std::make_pair(sk, dk), data);
        return EmbeddingMap(std::const_pointer_cast<const detail::EmbeddingData>(data));
    }

    std::shared_ptr<const SubfieldCtx> subfield_unlocked(const Field& big) {
        Key k{big.characteristic(), big.q_exponent(), big.extension_degree()};
        auto it = subs_.find(k);
        if (it != subs_.end()) return it->second;
        auto ctx = std::make_shared<SubfieldCtx>();
        ctx->big = big;
        ctx->fq = field_unlocked(big.characteristic(), big.q_exponent(), 1);
        ctx->emb = embedding_unlocked(ctx->fq, big);
        std::uint32_t f = ctx->fq.absolute_degree(), M = big.extension_degree();
        ctx->fq_basis_in_big.reserve(f);
        FieldElement gamma_pow = ctx->fq.one();
        for (std::uint32_t t = 0; t < f; ++t) {
            ctx->fq_basis_in_big.push_back(ctx->emb.apply(gamma_pow));
            gamma_pow = gamma_pow * ctx->fq.generator();
        }
        const FieldData& B = big.data();
        std::vector<detail::Coords> cols(big.absolute_degree());
        detail::Coords gj = B.one();
        for (std::uint32_t j = 0; j < M; ++j) {
            for (std::uint32_t t = 0; t < f; ++t) cols[j * f + t] = B.mul(gj, ctx->fq_basis_in_big[t].coords());
            gj = B.mul(gj, B.gen());
        }
        ctx->basis_mat = detail::FpLinearMap::from_columns(big.characteristic(), big.absolute_degree(), cols);
        ctx->basis_inv = ctx->basis_mat.inverse();
        subs_.emplace(k, ctx);
        return ctx;
    }

    std::mutex mu_;
    std::map<Key, std::shared_ptr<const FieldData>> fields_;
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::optional<ZEntry>> ztable_;
    std::map<std::pair<Key, Key>, std::shared_ptr<detail::EmbeddingData>> embeddings_;
    std::map<Key, std::shared_ptr<const SubfieldCtx>> subs_;
};

inline Field Field::get(std::uint32_t p, std::uint32_t q_exponent, std::uint32_t m, std::size_t degree_cap) {
    if (p < 2 || q_exponent < 1 || m < 1) throw std::invalid_argument("Field::get: parameters must be positive");
    for (std::uint32_t d = 2; d * d <= p; ++d)
        if (p % d == 0) throw std::invalid_argument("Field::get: characteristic must be prime");
    std::uint64_t deg = static_cast<std::uint64_t>(q_exponent) * m;
    if (deg > degree_cap)
        throw CapacityError("absolute degree exceeds the configured bound", deg, degree_cap);
    return FieldRegistry::instance().field(p, q_exponent, m);
}

/// Canonical extension of degree e with the embedding of the base.
inline FieldExtension extend_field(const Field& base, std::uint32_t e, std::size_t degree_cap = kDefaultDegreeCap) {
    if (e < 1) throw std::invalid_argument("extend_field: e must be >= 1");
    std::uint64_t deg = static_cast<std::uint64_t>(base.absolute_degree()) * e;
    if (deg > degree_cap)
        throw CapacityError("absolute degree exceeds the configured bound", deg, degree_cap);
    Field ext = FieldRegistry::instance().field(base.characteristic(), base.q_exponent(), base.extension_degree() * e);
    EmbeddingMap emb = FieldRegistry::instance().embedding(base, ext);
    return FieldExtension{ext, emb};
}

/// The canonical embedding between two already-constructed fields.
inline EmbeddingMap embedding_between(const Field& src, const Field& dst) {
    return FieldRegistry::instance().embedding(src, dst);
}

/// Splits a prime power q = p^f; throws std::invalid_argument otherwise.
inline std::pair<std::uint32_t, std::uint32_t> prime_power_split(std::uint64_t q) {
    if (q < 2) throw std::invalid_argument("q must be a prime power >= 2");
    std::uint64_t p = q;
    for (std::uint64_t d = 2; d * d <= q; ++d)
        if (q % d == 0) {
            p = d;
            break;
        }
    std::uint32_t f = 0;
    std::uint64_t v = q;
    while (v % p == 0) {
        v /= p;
        ++f;
    }
    if (v != 1) throw std::invalid_argument("q must be a prime power");
    return {static_cast<std::uint32_t>(p), f};
}

inline std::shared_ptr<const SubfieldCtx> subfield_ctx(const Field& big) {
    return FieldRegistry::instance().subfield(big);
}

}  // namespace fqdescent
