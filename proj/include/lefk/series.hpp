#pragma once

#include <algorithm>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>

#include "lefk/character.hpp"

namespace lefk {

// Saturating bound arithmetic for support boxes. Sentinels are far away from
// any exponent numerator that can occur.
namespace bnd {
inline constexpr long long NEG_INF = -(1LL << 56);
inline constexpr long long POS_INF = (1LL << 56);
inline bool is_ninf(long long v) { return v <= NEG_INF; }
inline bool is_pinf(long long v) { return v >= POS_INF; }
inline long long add(long long a, long long b) {
    if (is_ninf(a) || is_ninf(b)) {
        if (is_pinf(a) || is_pinf(b)) throw invalid_lattice("indeterminate bound sum");
        return NEG_INF;
    }
    if (is_pinf(a) || is_pinf(b)) return POS_INF;
    long long s = a + b;
    if (s >= POS_INF) return POS_INF;
    if (s <= NEG_INF) return NEG_INF;
    return s;
}
} // namespace bnd

// Rectangle of exponent numerators. Used both for certified windows (the
// region where stored coefficients are exactly the true ones) and for
// true-support bounds (outside which the true coefficient is zero).
struct Box {
    long long qlo{0}, qhi{0}, glo{0}, ghi{0};

    static Box empty() { return Box{1, 0, 1, 0}; }
    static Box all() { return Box{bnd::NEG_INF, bnd::POS_INF, bnd::NEG_INF, bnd::POS_INF}; }
    static Box point(long long q, long long g) { return Box{q, q, g, g}; }

    bool is_empty() const { return qlo > qhi || glo > ghi; }
    bool contains(long long q, long long g) const {
        return !is_empty() && qlo <= q && q <= qhi && glo <= g && g <= ghi;
    }
    Box hull(const Box& o) const {
        if (is_empty()) return o;
        if (o.is_empty()) return *this;
        return Box{std::min(qlo, o.qlo), std::max(qhi, o.qhi), std::min(glo, o.glo), std::max(ghi, o.ghi)};
    }
    Box intersect(const Box& o) const {
        return Box{std::max(qlo, o.qlo), std::min(qhi, o.qhi), std::max(glo, o.glo), std::min(ghi, o.ghi)};
    }
    Box minkowski(const Box& o) const {
        if (is_empty() || o.is_empty()) return empty();
        return Box{bnd::add(qlo, o.qlo), bnd::add(qhi, o.qhi), bnd::add(glo, o.glo), bnd::add(ghi, o.ghi)};
    }
};

// Truncated series sum a_{m,h} q^m g^h with exact integer coefficients.
// `window()` is the certified rectangle: inside it, stored coefficients are
// exactly the coefficients of the underlying exact object (absent = zero).
// `support()` bounds the true support; outside it the true coefficient is
// zero even beyond the window. Multiplication shrinks the window so that the
// exactness claim survives the truncation of the operands.
class BigradedSeries {
public:
    using Key = std::pair<long long, long long>; // (q numerator, g numerator)
    using Terms = std::map<Key, Int>;

    BigradedSeries(long long lat_q, long long lat_g, Box window, Box support)
        : lat_q_(lat_q), lat_g_(lat_g), win_(window), box_(support) {
        if (lat_q <= 0 || lat_g <= 0) throw invalid_lattice("series lattice must be positive");
    }

    static BigradedSeries zero(long long lat_q, long long lat_g, Box window) {
        return BigradedSeries(lat_q, lat_g, window, Box::empty());
    }
    static BigradedSeries unit(long long lat_q, long long lat_g, Box window) {
        BigradedSeries s(lat_q, lat_g, window, Box::point(0, 0));
        if (window.contains(0, 0)) s.t_.emplace(Key{0, 0}, 1);
        return s;
    }

    long long lattice_q() const { return lat_q_; }
    long long lattice_g() const { return lat_g_; }
    const Box& window() const { return win_; }
    const Box& support() const { return box_; }
    const Terms& terms() const { return t_; }
    bool stored_zero() const { return t_.empty(); }

    void check_compatible(const BigradedSeries& o) const {
        if (lat_q_ != o.lat_q_ || lat_g_ != o.lat_g_)
            throw invalid_lattice("series lattice mismatch");
    }

    // Insert a term known to be part of the exact object; silently clipped to
    // the window. The support bound grows to cover the term.
    void add_term(long long q, long long g, const Int& c) {
        if (c == 0) return;
        box_ = box_.hull(Box::point(q, g));
        if (!win_.contains(q, g)) return;
        auto it = t_.find(Key{q, g});
        if (it == t_.end()) t_.emplace(Key{q, g}, c);
        else {
            it->second += c;
            if (it->second == 0) t_.erase(it);
        }
    }

    bool certified(long long q, long long g) const {
        if (win_.contains(q, g)) return true;
        return !box_.contains(q, g); // true coefficient is zero out there
    }

    Int extract(long long q, long long g) const {
        if (win_.contains(q, g)) {
            auto it = t_.find(Key{q, g});
            return it == t_.end() ? Int(0) : it->second;
        }
        if (!box_.contains(q, g)) return 0;
        throw window_exceeded("coefficient at q^(" + Rat(q, lat_q_).str() + ") g^(" +
                              Rat(g, lat_g_).str() + ") outside certified window");
    }
    Int extract(const Exponent& m, const Exponent& h) const {
        return extract(m.rescaled(lat_q_).num, h.rescaled(lat_g_).num);
    }

    // g-profile at fixed q-level; certified on the window's g-range.
    Character extract_coefficient(long long q) const {
        Character c(lat_g_);
        auto lo = t_.lower_bound(Key{q, bnd::NEG_INF});
        auto hi = t_.upper_bound(Key{q, bnd::POS_INF});
        for (auto it = lo; it != hi; ++it) c.add_term(it->first.second, it->second);
        return c;
    }
    Character extract_coefficient(const Exponent& m) const {
        return extract_coefficient(m.rescaled(lat_q_).num);
    }

    friend BigradedSeries operator+(const BigradedSeries& a, const BigradedSeries& b) {
        a.check_compatible(b);
        BigradedSeries r(a.lat_q_, a.lat_g_, a.win_.intersect(b.win_), a.box_.hull(b.box_));
        for (const auto& [k, c] : a.t_) r.add_term(k.first, k.second, c);
        for (const auto& [k, c] : b.t_) r.add_term(k.first, k.second, c);
        return r;
    }
    friend BigradedSeries operator-(const BigradedSeries& a, const BigradedSeries& b) {
        return a + (Int(-1) * b);
    }
    friend BigradedSeries operator*(const Int& s, const BigradedSeries& a) {
        BigradedSeries r(a.lat_q_, a.lat_g_, a.win_, s == 0 ? Box::empty() : a.box_);
        if (s != 0)
            for (const auto& [k, c] : a.t_) r.t_.emplace(k, s * c);
        return r;
    }

    // Exact product. The window shrinks wherever a truncated tail of one
    // operand could have contributed: a term of `a` missing above its window
    // can pollute products from a.win.qhi + b.box.qlo upward, and so on for
    // the other seven tail/side combinations.
    friend BigradedSeries operator*(const BigradedSeries& a, const BigradedSeries& b) {
        a.check_compatible(b);
        Box w = Box::all();
        auto shrink_hi = [](long long& whi, long long win_hi, long long tail_hi, long long other_lo) {
            if (tail_hi > win_hi) whi = std::min(whi, bnd::add(win_hi, other_lo));
        };
        auto shrink_lo = [](long long& wlo, long long win_lo, long long tail_lo, long long other_hi) {
            if (tail_lo < win_lo) wlo = std::max(wlo, bnd::add(win_lo, other_hi));
        };
        if (!a.box_.is_empty() && !b.box_.is_empty()) {
            shrink_hi(w.qhi, a.win_.qhi, a.box_.qhi, b.box_.qlo);
            shrink_hi(w.qhi, b.win_.qhi, b.box_.qhi, a.box_.qlo);
            shrink_lo(w.qlo, a.win_.qlo, a.box_.qlo, b.box_.qhi);
            shrink_lo(w.qlo, b.win_.qlo, b.box_.qlo, a.box_.qhi);
            shrink_hi(w.ghi, a.win_.ghi, a.box_.ghi, b.box_.glo);
            shrink_hi(w.ghi, b.win_.ghi, b.box_.ghi, a.box_.glo);
            shrink_lo(w.glo, a.win_.glo, a.box_.glo, b.box_.ghi);
            shrink_lo(w.glo, b.win_.glo, b.box_.glo, a.box_.ghi);
        }
        BigradedSeries r(a.lat_q_, a.lat_g_, w, a.box_.minkowski(b.box_));
        for (const auto& [ka, ca] : a.t_)
            for (const auto& [kb, cb] : b.t_)
                r.add_term(ka.first + kb.first, ka.second + kb.second, ca * cb);
        return r;
    }

    BigradedSeries& operator+=(const BigradedSeries& o) { return *this = *this + o; }
    BigradedSeries& operator*=(const BigradedSeries& o) { return *this = *this * o; }

    // Multiplication by a finite pure-g polynomial (exact; window shrinks by
    // the polynomial's spread).
    BigradedSeries times_char(const Character& c) const {
        Character cc = c.rescaled(lat_g_);
        if (cc.is_zero()) return zero(lat_q_, lat_g_, Box::all());
        long long lo = cc.terms().begin()->first, hi = cc.terms().rbegin()->first;
        Box w = win_;
        if (box_.ghi > win_.ghi) w.ghi = bnd::add(win_.ghi, lo);
        if (box_.glo < win_.glo) w.glo = bnd::add(win_.glo, hi);
        Box sup = box_.minkowski(Box{0, 0, lo, hi});
        BigradedSeries r(lat_q_, lat_g_, w, sup);
        for (const auto& [k, v] : t_)
            for (const auto& [e, a] : cc.terms()) r.add_term(k.first, k.second + e, v * a);
        return r;
    }

    BigradedSeries shifted(long long dq, long long dg) const {
        auto sh = [&](const Box& b) {
            Box r = b;
            r.qlo = bnd::add(r.qlo, dq); r.qhi = bnd::add(r.qhi, dq);
            r.glo = bnd::add(r.glo, dg); r.ghi = bnd::add(r.ghi, dg);
            return r;
        };
        BigradedSeries r(lat_q_, lat_g_, sh(win_), sh(box_));
        for (const auto& [k, c] : t_) r.t_.emplace(Key{k.first + dq, k.second + dg}, c);
        return r;
    }

    BigradedSeries clipped(Box w) const {
        BigradedSeries r(lat_q_, lat_g_, win_.intersect(w), box_);
        for (const auto& [k, c] : t_) r.add_term(k.first, k.second, c);
        return r;
    }

    friend bool operator==(const BigradedSeries& a, const BigradedSeries& b) {
        return a.lat_q_ == b.lat_q_ && a.lat_g_ == b.lat_g_ && a.t_ == b.t_;
    }

    std::string str() const {
        if (t_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [k, c] : t_) {
            if (!first) os << (c > 0 ? " + " : " - ");
            else if (c < 0) os << "-";
            first = false;
            Int a = c > 0 ? c : Int(-c);
            Rat mq(k.first, lat_q_), hg(k.second, lat_g_);
            bool wrote = false;
            if (a != 1 || (mq.num == 0 && hg.num == 0)) { os << a.str(); wrote = true; }
            if (mq.num != 0) { if (wrote) os << "*"; os << "q^" << mq.str(); wrote = true; }
            if (hg.num != 0) { if (wrote) os << "*"; os << "g^" << hg.str(); }
        }
        return os.str();
    }

private:
    long long lat_q_, lat_g_;
    Box win_;
    Box box_;
    Terms t_;
};

} // namespace lefk
