#pragma once

#include <algorithm>
#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include "lefk/series.hpp"

namespace lefk {

// Which geometric-series direction pure-g denominators expand in. AtZero
// expands (1 - g^w)^{-1}, w > 0, in increasing powers of g (and rewrites
// w < 0 denominators to that direction first); AtInfinity is the mirror.
// Factors with a nonzero q-exponent have a canonical direction, the powers of
// their own monomial, and do not depend on the region.
enum class Region { AtZero, AtInfinity };

inline const char* region_name(Region r) { return r == Region::AtZero ? "AtZero" : "AtInfinity"; }

// One binomial factor (1 - eps q^a g^w)^power.
struct Factor {
    Rat a;              // q-exponent
    Rat w;              // g-exponent
    int eps{+1};        // +1 for (1 - q^a g^w), -1 for (1 + q^a g^w)
    long long power{1}; // nonzero; negative means inverse factor
};

// Lazy exact product of a scalar, a monomial q^mq g^mg, binomial factors and
// finite pure-g polynomial multipliers. Rendering expands it into a
// BigradedSeries that is exact on the requested window.
class FactorList {
public:
    FactorList() = default;

    static FactorList one() { return FactorList(); }

    const Int& scalar() const { return scalar_; }
    const Rat& monomial_q() const { return mono_q_; }
    const Rat& monomial_g() const { return mono_g_; }
    const std::vector<Factor>& factors() const { return fs_; }
    const std::vector<Character>& char_factors() const { return chars_; }

    FactorList& mul_scalar(const Int& s) { scalar_ *= s; return *this; }
    FactorList& mul_monomial(const Rat& dq, const Rat& dg) {
        mono_q_ = mono_q_ + dq;
        mono_g_ = mono_g_ + dg;
        return *this;
    }
    FactorList& mul_factor(const Rat& a, const Rat& w, int eps, long long power) {
        if (power == 0) return *this;
        if (a.num == 0 && w.num == 0)
            throw singular_factor("factor (1 " + std::string(eps > 0 ? "-" : "+") + " 1) is not allowed");
        fs_.push_back(Factor{a, w, eps, power});
        return *this;
    }
    FactorList& mul_char(const Character& c) { chars_.push_back(c); return *this; }
    FactorList& mul(const FactorList& o) {
        scalar_ *= o.scalar_;
        mono_q_ = mono_q_ + o.mono_q_;
        mono_g_ = mono_g_ + o.mono_g_;
        fs_.insert(fs_.end(), o.fs_.begin(), o.fs_.end());
        chars_.insert(chars_.end(), o.chars_.begin(), o.chars_.end());
        return *this;
    }

    FactorList inverse() const {
        if (!chars_.empty())
            throw singular_factor("cannot invert a factor list with polynomial multipliers");
        if (scalar_ != 1 && scalar_ != -1)
            throw singular_factor("cannot invert scalar " + scalar_.str());
        FactorList r;
        r.scalar_ = scalar_;
        r.mono_q_ = -mono_q_;
        r.mono_g_ = -mono_g_;
        for (const auto& f : fs_) r.fs_.push_back(Factor{f.a, f.w, f.eps, -f.power});
        return r;
    }

    bool polynomial() const {
        for (const auto& f : fs_)
            if (f.power < 0) return false;
        return true;
    }

    // Re-read the q-grading as the group variable: g := 1, then q -> g.
    // Turns a diagonal (q, g) carrier into its one-variable character form.
    FactorList reread_q_as_g() const {
        FactorList r;
        r.scalar_ = scalar_;
        r.mono_g_ = mono_q_;
        for (const auto& f : fs_) {
            if (f.a.num == 0 && f.w.num != 0)
                throw singular_factor("factor with pure g-dependence cannot be re-read");
            if (f.a.num != 0) r.mul_factor(Rat(0), f.a, f.eps, f.power);
            // a == 0 && w != 0 handled above; a == 0 && w == 0 cannot be stored
        }
        for (const auto& c : chars_) {
            Int total = c.dimension();
            r.mul_scalar(total); // g := 1 collapses a pure-g multiplier
        }
        return r;
    }

    BigradedSeries render(Region region, long long lat_q, long long lat_g, Box window) const;

    // True-support bounds of the exact product in the given region's
    // expansion (no truncation): finite sides witness where the expansion is
    // one-sided.
    Box support_box(Region region, long long lat_q, long long lat_g) const;

    std::string str() const {
        std::ostringstream os;
        os << scalar_.str();
        if (mono_q_.num != 0) os << " q^" << mono_q_.str();
        if (mono_g_.num != 0) os << " g^" << mono_g_.str();
        std::vector<Factor> fs = fs_;
        std::sort(fs.begin(), fs.end(), [](const Factor& x, const Factor& y) {
            if (x.a != y.a) return x.a < y.a;
            if (x.w != y.w) return x.w < y.w;
            if (x.eps != y.eps) return x.eps < y.eps;
            return x.power < y.power;
        });
        for (const auto& f : fs) {
            os << " (1 " << (f.eps > 0 ? "-" : "+") << " ";
            if (f.a.num != 0) os << "q^" << f.a.str();
            if (f.a.num != 0 && f.w.num != 0) os << " ";
            if (f.w.num != 0) os << "g^" << f.w.str();
            if (f.a.num == 0 && f.w.num == 0) os << "1";
            os << ")";
            if (f.power != 1) os << "^" << f.power;
        }
        for (const auto& c : chars_) os << " [" << c.str() << "]";
        return os.str();
    }

private:
    Int scalar_{1};
    Rat mono_q_{0};
    Rat mono_g_{0};
    std::vector<Factor> fs_;
    std::vector<Character> chars_;
};

namespace detail {

struct ExpTerm {
    long long dq, dg;
    Int c;
};

struct ExpandedFactor {
    std::vector<ExpTerm> terms;
    Box box; // box of the listed terms
};

inline Box terms_box(const std::vector<ExpTerm>& ts) {
    Box b = Box::empty();
    for (const auto& t : ts) b = b.hull(Box::point(t.dq, t.dg));
    return b;
}

} // namespace detail

namespace detail {
struct RawFactor {
    long long a, w;
    int eps;
    long long power;
};

struct NormalizedList {
    std::vector<RawFactor> raw;
    Int scalar;
    long long mq, mg;
    bool zero{false};
};
} // namespace detail

namespace detail {
// Region-normalize pure-g inverse factors and integerize exponents.
inline NormalizedList normalize_factors(const Int& scalar0, const Rat& mono_q, const Rat& mono_g,
                                        const std::vector<Factor>& fs, Region region,
                                        long long lat_q, long long lat_g) {
    NormalizedList n;
    n.scalar = scalar0;
    n.mq = Exponent::on_lattice(mono_q, lat_q).num;
    n.mg = Exponent::on_lattice(mono_g, lat_g).num;
    for (const auto& f : fs) {
        long long a = Exponent::on_lattice(f.a, lat_q).num;
        long long w = Exponent::on_lattice(f.w, lat_g).num;
        int eps = f.eps;
        long long p = f.power;
        if (a == 0 && p < 0) {
            bool want_pos = (region == Region::AtZero);
            if ((w > 0) != want_pos) {
                // (1 - eps g^w)^p = (-eps)^p g^{wp} (1 - eps g^{-w})^p
                if ((p & 1) && eps > 0) n.scalar = -n.scalar;
                n.mg += w * p;
                w = -w;
            }
        }
        n.raw.push_back(RawFactor{a, w, eps, p});
    }
    if (n.scalar == 0) n.zero = true;
    return n;
}

inline Box factors_support(const NormalizedList& n, const std::vector<Character>& chars,
                           long long lat_g) {
    Box support = Box::point(n.mq, n.mg);
    for (const auto& f : n.raw) {
        Box fb;
        if (f.power < 0) {
            fb.qlo = f.a < 0 ? bnd::NEG_INF : 0;
            fb.qhi = f.a > 0 ? bnd::POS_INF : 0;
            fb.glo = f.w < 0 ? bnd::NEG_INF : 0;
            fb.ghi = f.w > 0 ? bnd::POS_INF : 0;
        } else {
            fb.qlo = std::min(0LL, f.a * f.power);
            fb.qhi = std::max(0LL, f.a * f.power);
            fb.glo = std::min(0LL, f.w * f.power);
            fb.ghi = std::max(0LL, f.w * f.power);
        }
        support = support.minkowski(fb);
    }
    for (const auto& c : chars) {
        if (c.is_zero()) return Box::empty();
        Character cc = c.rescaled(lat_g);
        support =
            support.minkowski(Box{0, 0, cc.terms().begin()->first, cc.terms().rbegin()->first});
    }
    return support;
}
} // namespace detail

inline Box FactorList::support_box(Region region, long long lat_q, long long lat_g) const {
    detail::NormalizedList n =
        detail::normalize_factors(scalar_, mono_q_, mono_g_, fs_, region, lat_q, lat_g);
    if (n.zero) return Box::empty();
    return detail::factors_support(n, chars_, lat_g);
}

// Expansion strategy: inverse factors expand along the ray k * (a, w), k >= 0.
// A separating functional bounds the largest k of each ray that can still
// land inside the window; the bound is conservative, so exactness does not
// depend on its tightness. The bounded expansions are then multiplied with
// suffix-box pruning: a partial term survives only if the remaining factors
// can still carry it into the window.
inline BigradedSeries FactorList::render(Region region, long long lat_q, long long lat_g,
                                         Box window) const {
    using detail::ExpTerm;
    using detail::ExpandedFactor;

    detail::NormalizedList norm =
        detail::normalize_factors(scalar_, mono_q_, mono_g_, fs_, region, lat_q, lat_g);
    const std::vector<detail::RawFactor>& raw = norm.raw;
    Int scalar = norm.scalar;
    long long mq = norm.mq, mg = norm.mg;

    Box support = detail::factors_support(norm, chars_, lat_g);
    if (norm.zero || support.is_empty())
        return BigradedSeries::zero(lat_q, lat_g, window);

    // Fixed contributions from the monomial, polynomial factors and characters.
    long long Fq_lo = mq, Fq_hi = mq, Fg_lo = mg, Fg_hi = mg;
    for (const auto& f : raw) {
        if (f.power > 0) {
            Fq_lo += std::min(0LL, f.a * f.power);
            Fq_hi += std::max(0LL, f.a * f.power);
            Fg_lo += std::min(0LL, f.w * f.power);
            Fg_hi += std::max(0LL, f.w * f.power);
        }
    }
    for (const auto& c : chars_) {
        Character cc = c.rescaled(lat_g);
        Fg_lo += cc.terms().begin()->first;
        Fg_hi += cc.terms().rbegin()->first;
    }

    // Per-ray multiplicity bounds through a separating functional. Every
    // inverse factor expands along its ray k (a, w); a combination of rays
    // can land back in the window for unbounded k only if the ray directions
    // positively span the plane (then coefficients genuinely diverge). So
    // find phi = (alpha, beta) with phi(ray) > 0 for every ray; then
    // sum k_i phi(d_i) <= max phi over the window minus min phi over the
    // finite parts, which bounds each k_i in one pass.
    std::vector<std::size_t> ray_idx;
    for (std::size_t i = 0; i < raw.size(); ++i)
        if (raw[i].power < 0) ray_idx.push_back(i);
    std::vector<long long> K(ray_idx.size(), 0);
    long long phi_q = 0, phi_g = 0; // separating functional, zero when no rays
    if (!ray_idx.empty()) {
        auto cross = [](long long a1, long long w1, long long a2, long long w2) -> __int128 {
            return (__int128)a1 * w2 - (__int128)a2 * w1;
        };
        auto dot = [](long long a1, long long w1, long long a2, long long w2) -> __int128 {
            return (__int128)a1 * a2 + (__int128)w1 * w2;
        };
        // clockwise-most and counterclockwise-most ray directions
        long long a0 = 0, w0 = 0, a1 = 0, w1 = 0;
        bool found0 = false, found1 = false;
        for (std::size_t i = 0; i < ray_idx.size() && !(found0 && found1); ++i) {
            const auto& fi = raw[ray_idx[i]];
            bool cw = true, ccw = true;
            for (std::size_t j = 0; j < ray_idx.size(); ++j) {
                const auto& fj = raw[ray_idx[j]];
                __int128 c = cross(fi.a, fi.w, fj.a, fj.w);
                __int128 d = dot(fi.a, fi.w, fj.a, fj.w);
                if (c < 0 || (c == 0 && d < 0)) cw = false;
                if (c > 0 || (c == 0 && d < 0)) ccw = false;
            }
            if (cw && !found0) { a0 = fi.a; w0 = fi.w; found0 = true; }
            if (ccw && !found1) { a1 = fi.a; w1 = fi.w; found1 = true; }
        }
        if (!found0 || !found1)
            throw singular_factor("inverse factor directions span the plane; "
                                  "the product has no common expansion");
        // functional strictly positive on the closed sector [d0, d1]
        if (cross(a0, w0, a1, w1) == 0) {
            phi_q = a0;
            phi_g = w0;
        } else {
            phi_q = -w0 + w1;
            phi_g = a0 - a1;
        }
        __int128 phi_min_fixed = std::min((__int128)phi_q * Fq_lo, (__int128)phi_q * Fq_hi) +
                                 std::min((__int128)phi_g * Fg_lo, (__int128)phi_g * Fg_hi);
        __int128 phi_max_win =
            std::max((__int128)phi_q * window.qlo, (__int128)phi_q * window.qhi) +
            std::max((__int128)phi_g * window.glo, (__int128)phi_g * window.ghi);
        __int128 budget = phi_max_win - phi_min_fixed;
        for (std::size_t r = 0; r < ray_idx.size(); ++r) {
            const auto& f = raw[ray_idx[r]];
            __int128 pd = (__int128)phi_q * f.a + (__int128)phi_g * f.w;
            if (pd <= 0)
                throw singular_factor("inverse factor outside the common expansion cone");
            __int128 k = budget >= 0 ? budget / pd : -1;
            if (k < 0) k = 0;
            if (k > (1LL << 40)) throw window_exceeded("ray multiplicity bound overflow");
            K[r] = (long long)k;
        }
    }

    // Materialize every factor as a finite term list.
    std::vector<ExpandedFactor> parts;
    {
        ExpandedFactor base;
        base.terms.push_back(ExpTerm{mq, mg, scalar});
        base.box = Box::point(mq, mg);
        parts.push_back(std::move(base));
    }
    std::size_t rpos = 0;
    for (const auto& f : raw) {
        ExpandedFactor ef;
        if (f.power < 0) {
            long long kmax = K[rpos++];
            long long r = -f.power;
            Int coeff = 1; // C(k+r-1, r-1), computed incrementally
            for (long long k = 0; k <= kmax; ++k) {
                if (k > 0) {
                    coeff = coeff * (k + r - 1);
                    coeff /= k;
                }
                // expansion of (1 - eps x)^{-r} is sum C(k+r-1,r-1) eps^k x^k
                Int c = coeff;
                if ((k & 1) && f.eps < 0) c = -c;
                ef.terms.push_back(ExpTerm{f.a * k, f.w * k, c});
            }
        } else {
            // (1 - eps x)^r = sum C(r,k) (-eps)^k x^k
            Int coeff = 1;
            for (long long k = 0; k <= f.power; ++k) {
                if (k > 0) {
                    coeff = coeff * (f.power - k + 1);
                    coeff /= k;
                }
                Int c = coeff;
                if ((k & 1) && f.eps > 0) c = -c;
                ef.terms.push_back(ExpTerm{f.a * k, f.w * k, c});
            }
        }
        ef.box = detail::terms_box(ef.terms);
        parts.push_back(std::move(ef));
    }
    for (const auto& c : chars_) {
        Character cc = c.rescaled(lat_g);
        ExpandedFactor ef;
        for (const auto& [e, a] : cc.terms()) ef.terms.push_back(ExpTerm{0, e, a});
        ef.box = detail::terms_box(ef.terms);
        parts.push_back(std::move(ef));
    }

    // Suffix reach boxes and suffix bounds of the separating functional. A
    // partial term is dropped when the remaining factors cannot carry it back
    // into the window (box test), or when its functional value can no longer
    // descend to the window's range (half-space test; rays only increase phi).
    std::vector<Box> suffix(parts.size() + 1);
    suffix[parts.size()] = Box::point(0, 0);
    for (std::size_t i = parts.size(); i-- > 0;)
        suffix[i] = parts[i].box.minkowski(suffix[i + 1]);

    auto phi_of = [&](long long q, long long g) -> __int128 {
        return (__int128)phi_q * q + (__int128)phi_g * g;
    };
    __int128 phi_win_max, phi_win_min;
    {
        __int128 c1 = phi_of(window.qlo, window.glo), c2 = phi_of(window.qlo, window.ghi);
        __int128 c3 = phi_of(window.qhi, window.glo), c4 = phi_of(window.qhi, window.ghi);
        phi_win_max = std::max(std::max(c1, c2), std::max(c3, c4));
        phi_win_min = std::min(std::min(c1, c2), std::min(c3, c4));
    }
    std::vector<__int128> sufphi_min(parts.size() + 1, 0), sufphi_max(parts.size() + 1, 0);
    for (std::size_t i = parts.size(); i-- > 0;) {
        __int128 lo = 0, hi = 0;
        bool first = true;
        for (const auto& t : parts[i].terms) {
            __int128 p = phi_of(t.dq, t.dg);
            if (first) { lo = hi = p; first = false; }
            else { lo = std::min(lo, p); hi = std::max(hi, p); }
        }
        if (first) { lo = hi = 0; }
        sufphi_min[i] = sufphi_min[i + 1] + lo;
        sufphi_max[i] = sufphi_max[i + 1] + hi;
    }

    std::map<std::pair<long long, long long>, Int> acc;
    acc.emplace(std::pair<long long, long long>{0, 0}, Int(1));
    for (std::size_t i = 0; i < parts.size(); ++i) {
        const Box& reach = suffix[i + 1];
        std::map<std::pair<long long, long long>, Int> next;
        for (const auto& [k, v] : acc) {
            for (const auto& t : parts[i].terms) {
                long long q = k.first + t.dq, g = k.second + t.dg;
                if (q + reach.qhi < window.qlo || q + reach.qlo > window.qhi) continue;
                if (g + reach.ghi < window.glo || g + reach.glo > window.ghi) continue;
                __int128 p = phi_of(q, g);
                if (p + sufphi_min[i + 1] > phi_win_max) continue;
                if (p + sufphi_max[i + 1] < phi_win_min) continue;
                auto it = next.find({q, g});
                if (it == next.end()) next.emplace(std::pair<long long, long long>{q, g}, v * t.c);
                else {
                    it->second += v * t.c;
                    if (it->second == 0) next.erase(it);
                }
            }
        }
        acc.swap(next);
    }

    BigradedSeries out(lat_q, lat_g, window, support);
    for (const auto& [k, v] : acc) out.add_term(k.first, k.second, v);
    return out;
}

} // namespace lefk
