#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lefk/bundle_expr.hpp"

namespace lefk {

// ---------------------------------------------------------------------------
// Fixed-point localization over a point base: per-component contributions as
// factor lists, dual-region expansions, global index tables and the
// rigidity / vanishing verdicts.
// ---------------------------------------------------------------------------

enum class OperatorBase { SpinDirac, SpinSignature, SpinCTauS, SpinCTauE };

enum class TwistKind {
    None,
    ThetaPrime,   // Lambda_{q^n}(TX) (x) Sym tower
    ThetaQ,       // Lambda_{-q^{n-1/2}}(TX) (x) Sym tower
    ThetaMinusQ,  // Lambda_{q^{n-1/2}}(TX) (x) Sym tower
    ThetaPrimeV,  // Lambda_{q^n}(V) (x) Sym tower
    ThetaQV,      // Lambda_{-q^{n-1/2}}(V) (x) Sym tower
    ThetaMinusQV, // Lambda_{q^{n-1/2}}(V) (x) Sym tower
    ThetaStarV,   // Lambda_{-q^n}(V) (x) Sym tower
    SymTower,     // Sym tower only
    R1V,          // (S^+ + S^-)(V) Lambda_{q^n}(V) (x) Sym tower
    R2V,          // (S^+ - S^-)(V) Lambda_{-q^n}(V) (x) Sym tower
    R3V,          // Lambda_{-q^{n-1/2}}(V) (x) Sym tower
    R4V,          // Lambda_{q^{n-1/2}}(V) (x) Sym tower
    Custom
};

struct OperatorSpec {
    OperatorBase base{OperatorBase::SpinDirac};
    TwistKind twist{TwistKind::None};
    std::function<BundleExpr(const FixedComponentDatum&)> custom;

    bool spin_c() const {
        return base == OperatorBase::SpinCTauS || base == OperatorBase::SpinCTauE;
    }
    bool twist_uses_v() const {
        switch (twist) {
        case TwistKind::ThetaPrimeV:
        case TwistKind::ThetaQV:
        case TwistKind::ThetaMinusQV:
        case TwistKind::ThetaStarV:
        case TwistKind::R1V:
        case TwistKind::R2V:
        case TwistKind::R3V:
        case TwistKind::R4V:
            return true;
        default:
            return false;
        }
    }

    std::string name() const {
        std::string b;
        switch (base) {
        case OperatorBase::SpinDirac: b = "dirac"; break;
        case OperatorBase::SpinSignature: b = "ds"; break;
        case OperatorBase::SpinCTauS: b = "spinc-taus"; break;
        case OperatorBase::SpinCTauE: b = "spinc-taue"; break;
        }
        std::string t;
        switch (twist) {
        case TwistKind::None: t = ""; break;
        case TwistKind::ThetaPrime: t = "-theta-prime"; break;
        case TwistKind::ThetaQ: t = "-theta-q"; break;
        case TwistKind::ThetaMinusQ: t = "-theta-minus-q"; break;
        case TwistKind::ThetaPrimeV: t = "-theta-prime-v"; break;
        case TwistKind::ThetaQV: t = "-theta-q-v"; break;
        case TwistKind::ThetaMinusQV: t = "-theta-minus-q-v"; break;
        case TwistKind::ThetaStarV: t = "-theta-star-v"; break;
        case TwistKind::SymTower: t = "-sym-tower"; break;
        case TwistKind::R1V: t = "-r1"; break;
        case TwistKind::R2V: t = "-r2"; break;
        case TwistKind::R3V: t = "-r3"; break;
        case TwistKind::R4V: t = "-r4"; break;
        case TwistKind::Custom: t = "-custom"; break;
        }
        return b + t;
    }

    static std::optional<OperatorSpec> parse(const std::string& s) {
        static const std::vector<std::pair<OperatorBase, std::string>> bases = {
            {OperatorBase::SpinDirac, "dirac"},
            {OperatorBase::SpinSignature, "ds"},
            {OperatorBase::SpinCTauS, "spinc-taus"},
            {OperatorBase::SpinCTauE, "spinc-taue"},
        };
        static const std::vector<std::pair<TwistKind, std::string>> twists = {
            {TwistKind::None, ""},
            {TwistKind::ThetaPrime, "-theta-prime"},
            {TwistKind::ThetaQ, "-theta-q"},
            {TwistKind::ThetaMinusQ, "-theta-minus-q"},
            {TwistKind::ThetaPrimeV, "-theta-prime-v"},
            {TwistKind::ThetaQV, "-theta-q-v"},
            {TwistKind::ThetaMinusQV, "-theta-minus-q-v"},
            {TwistKind::ThetaStarV, "-theta-star-v"},
            {TwistKind::SymTower, "-sym-tower"},
            {TwistKind::R1V, "-r1"},
            {TwistKind::R2V, "-r2"},
            {TwistKind::R3V, "-r3"},
            {TwistKind::R4V, "-r4"},
        };
        for (const auto& [b, bn] : bases)
            for (const auto& [t, tn] : twists)
                if (s == bn + tn) return OperatorSpec{b, t, nullptr};
        return std::nullopt;
    }
};

// Run geometry: lattices and the truncation window.
struct EngineConfig {
    long long lat_q{2};
    long long lat_g{2};
    Rat q_max{3};            // upper q truncation, in q-units
    long long g_window{40};  // symmetric g window, numerator on lat_g
    std::optional<long long> g_slack; // numerator override for the tail band

    static EngineConfig for_datum(const ManifoldDatum& m, Rat q_max = Rat(3),
                                  long long g_window = 40) {
        EngineConfig c;
        c.lat_q = default_q_lattice(m);
        c.lat_g = default_g_lattice;
        c.q_max = q_max;
        c.g_window = g_window;
        return c;
    }

    Box index_window() const {
        long long qh = Exponent::on_lattice(q_max, lat_q).num;
        return Box{0, qh, -g_window, g_window};
    }
};

// The twist character of an operator at a component, as a bigraded
// expression (towers truncated at evaluation time).
inline BundleExpr twist_expr(const FixedComponentDatum& c, const OperatorSpec& op) {
    FiberWeights tx = FiberWeights::tangent_of(c);
    FiberWeights vb = FiberWeights::vbundle_of(c);
    switch (op.twist) {
    case TwistKind::None: return BundleExpr::one();
    case TwistKind::ThetaPrime: return theta_twist(ThetaKind::Prime, tx);
    case TwistKind::ThetaQ: return theta_twist(ThetaKind::Q, tx);
    case TwistKind::ThetaMinusQ: return theta_twist(ThetaKind::MinusQ, tx);
    case TwistKind::ThetaPrimeV: return theta_twist(ThetaKind::Prime, tx, vb);
    case TwistKind::ThetaQV: return theta_twist(ThetaKind::Q, tx, vb);
    case TwistKind::ThetaMinusQV: return theta_twist(ThetaKind::MinusQ, tx, vb);
    case TwistKind::ThetaStarV: return theta_twist(ThetaKind::Star, tx, vb);
    case TwistKind::SymTower: return sym_tower_twist(tx);
    case TwistKind::R1V: {
        BundleExpr e = sym_tower_twist(tx);
        return e.mul(r_twist(1, c));
    }
    case TwistKind::R2V: {
        BundleExpr e = sym_tower_twist(tx);
        return e.mul(r_twist(2, c));
    }
    case TwistKind::R3V: {
        BundleExpr e = sym_tower_twist(tx);
        return e.mul(r_twist(3, c));
    }
    case TwistKind::R4V: {
        BundleExpr e = sym_tower_twist(tx);
        return e.mul(r_twist(4, c));
    }
    case TwistKind::Custom:
        if (!op.custom) throw incompatible_twist("custom twist without expression");
        return op.custom(c);
    }
    throw incompatible_twist("unknown twist");
}

// Lefschetz contribution of one isolated fixed component: the orientation
// sign, the parity sign (-1)^{sum dim N_v}, the normal-spinor denominator
// with its half-weight monomial, the base-dependent spinor head and the
// operator twist. Towers inside the twist are truncated past q_hi.
inline FactorList point_contribution(const FixedComponentDatum& c, const OperatorSpec& op,
                                     const Rat& q_hi) {
    if (op.spin_c() && op.twist_uses_v())
        throw incompatible_twist("spin-c bases already consume the auxiliary bundle");
    FactorList f;
    if (c.orientation_sign < 0) f.mul_scalar(-1);
    if (c.dim_n() & 1) f.mul_scalar(-1);

    switch (op.base) {
    case OperatorBase::SpinDirac:
    case OperatorBase::SpinSignature:
        f.mul_monomial(Rat(0), Rat(c.dprime_n(), 2));
        for (auto& [v, d] : c.tangent) f.mul_factor(Rat(0), Rat(v), +1, -d);
        if (op.base == OperatorBase::SpinSignature)
            f.mul(tangent_spinor_head(c).evaluate(Rat(0)));
        break;
    case OperatorBase::SpinCTauS:
    case OperatorBase::SpinCTauE: {
        if (!c.l_c) throw missing_spin_c_data("component '" + c.name + "' carries no l_c weight");
        f.mul_monomial(Rat(0), Rat(c.dprime_n() - c.dprime_v() + *c.l_c, 2));
        for (auto& [v, d] : c.tangent) f.mul_factor(Rat(0), Rat(v), +1, -d);
        if (op.base == OperatorBase::SpinCTauS) {
            Int two_p = 1;
            for (long long i = 0; i < c.v0_rank / 2; ++i) two_p *= 2;
            f.mul_scalar(two_p);
            for (auto& [u, e] : c.vbundle) f.mul_factor(Rat(0), Rat(u), -1, e);
        } else {
            if (c.v0_rank > 0) f.mul_scalar(0);
            for (auto& [u, e] : c.vbundle) f.mul_factor(Rat(0), Rat(u), +1, e);
        }
        break;
    }
    }

    f.mul(twist_expr(c, op).evaluate(q_hi));
    f.mul_char(c.w_char);
    return f;
}

// One-sided g-support bounds of a contribution's expansion inside a bounded
// q-window: pure-g tails run off on one side only (fixed by the region), so
// the other side is bounded by the monomial, the polynomial factors, the
// characters, and each mixed ray's largest multiplicity within the q-span.
// Sentinels mark the unbounded side.
inline std::pair<long long, long long> finite_g_bounds(const FactorList& f, Region region,
                                                       long long lat_q, long long lat_g,
                                                       long long q_span) {
    detail::NormalizedList n = detail::normalize_factors(f.scalar(), f.monomial_q(),
                                                         f.monomial_g(), f.factors(), region,
                                                         lat_q, lat_g);
    long long lo = n.mg, hi = n.mg;
    for (const auto& fac : n.raw) {
        if (fac.w == 0) continue;
        if (fac.power > 0) {
            lo += std::min(0LL, fac.w * fac.power);
            hi += std::max(0LL, fac.w * fac.power);
        } else if (fac.a == 0) {
            if (fac.w > 0) hi = bnd::POS_INF;
            else lo = bnd::NEG_INF;
        } else {
            long long k = q_span / std::llabs(fac.a);
            if (fac.w > 0) hi = bnd::add(hi, k * fac.w);
            else lo = bnd::add(lo, k * fac.w);
        }
    }
    for (const auto& c : f.char_factors()) {
        Character cc = c.rescaled(lat_g);
        if (!cc.is_zero()) {
            lo = bnd::add(lo, cc.terms().begin()->first);
            hi = bnd::add(hi, cc.terms().rbegin()->first);
        }
    }
    return {lo, hi};
}

struct TailReport {
    bool ok{true};
    bool band_nonempty{true};
    long long band_lo{0};  // |h| band start (numerator, exclusive)
    long long band_hi{0};  // band end (inclusive)
    std::optional<std::pair<Rat, Rat>> first_violation; // (m, h)
    Int violation_value{0};

    std::string describe() const {
        if (ok && !band_nonempty) return "tail band empty: raise the g-window";
        if (ok) return "tail clear on band |h| in (" + std::to_string(band_lo) + ", " +
                       std::to_string(band_hi) + "]";
        return "nonzero tail at q^" + first_violation->first.str() + " g^" +
               first_violation->second.str() + " = " + violation_value.str();
    }
};

struct IndexResult {
    BigradedSeries series;
    TailReport tail;
    long long g_safe{0}; // the window edge: everything inside is exact
};

// Global index table: sum of rendered contributions in one region, plus the
// polynomial-tail certificate. When the index really is a finite character,
// its support must fit between the lower bound of every contribution's
// expansion toward g = 0 and the upper bound toward g = infinity; a nonzero
// coefficient beyond those bounds signals bad data, wrong signs or an
// insufficient window.
inline IndexResult total_index(const ManifoldDatum& m, const OperatorSpec& op,
                               const EngineConfig& cfg, Region region = Region::AtZero) {
    Box win = cfg.index_window();
    BigradedSeries sum = BigradedSeries::zero(cfg.lat_q, cfg.lat_g, win);
    long long poly_lo = 0, poly_hi = 0;
    long long q_span = win.qhi - win.qlo;
    for (const auto& c : m.components) {
        FactorList f = point_contribution(c, op, Rat(win.qhi, cfg.lat_q));
        poly_lo = std::min(poly_lo, finite_g_bounds(f, Region::AtZero, cfg.lat_q, cfg.lat_g, q_span).first);
        poly_hi = std::max(poly_hi, finite_g_bounds(f, Region::AtInfinity, cfg.lat_q, cfg.lat_g, q_span).second);
        sum += f.render(region, cfg.lat_q, cfg.lat_g, win);
    }
    TailReport tail;
    if (bnd::is_ninf(poly_lo) || bnd::is_pinf(poly_hi)) {
        tail.band_lo = cfg.g_window;
    } else {
        tail.band_lo = std::max({0LL, poly_hi, -poly_lo});
    }
    if (cfg.g_slack) tail.band_lo = std::max(0LL, cfg.g_window - *cfg.g_slack);
    tail.band_hi = cfg.g_window;
    tail.band_nonempty = tail.band_lo < tail.band_hi;
    for (const auto& [k, c] : sum.terms()) {
        if (std::llabs(k.second) > tail.band_lo) {
            tail.ok = false;
            tail.first_violation = {Rat(k.first, cfg.lat_q), Rat(k.second, cfg.lat_g)};
            tail.violation_value = c;
            break;
        }
    }
    return IndexResult{std::move(sum), tail, cfg.g_window};
}

inline Int extract_ind(const IndexResult& r, const Rat& m, const Rat& h) {
    return r.series.extract(Exponent::on_lattice(m, r.series.lattice_q()),
                            Exponent::on_lattice(h, r.series.lattice_g()));
}

// --- verdicts ----------------------------------------------------------------

struct Violation {
    std::string what;
    Rat m{0}, h{0};
    Int lhs{0}, rhs{0};
    std::optional<long long> level;
};

struct Verdict {
    std::string check;
    std::string params;
    bool pass{true};
    std::string note;
    std::optional<Violation> first_violation;

    static Verdict passed(std::string check, std::string params, std::string note = "") {
        return Verdict{std::move(check), std::move(params), true, std::move(note), std::nullopt};
    }
    static Verdict failed(std::string check, std::string params, Violation v, std::string note = "") {
        return Verdict{std::move(check), std::move(params), false, std::move(note), std::move(v)};
    }
};

// The two formulas for the same index: expanding every pure-g denominator
// toward g = 0 or toward g = infinity must give the same table. This is the
// engine's statement that the localized sum really is a finite character.
inline Verdict dual_expansion_check(const ManifoldDatum& m, const OperatorSpec& op,
                                    const EngineConfig& cfg) {
    std::string params = "datum=" + m.name + " op=" + op.name();
    IndexResult a = total_index(m, op, cfg, Region::AtZero);
    IndexResult b = total_index(m, op, cfg, Region::AtInfinity);
    if (!a.tail.ok)
        return Verdict::failed("dual_expansion", params,
                               Violation{"tail(AtZero)", a.tail.first_violation->first,
                                         a.tail.first_violation->second, a.tail.violation_value, 0},
                               a.tail.describe());
    if (!b.tail.ok)
        return Verdict::failed("dual_expansion", params,
                               Violation{"tail(AtInfinity)", b.tail.first_violation->first,
                                         b.tail.first_violation->second, b.tail.violation_value, 0},
                               b.tail.describe());
    Box w = a.series.window().intersect(b.series.window());
    for (long long q = w.qlo; q <= w.qhi; ++q) {
        for (long long h = w.glo; h <= w.ghi; ++h) {
            Int x = a.series.extract(q, h), y = b.series.extract(q, h);
            if (x != y)
                return Verdict::failed("dual_expansion", params,
                                       Violation{"expansion mismatch", Rat(q, cfg.lat_q),
                                                 Rat(h, cfg.lat_g), x, y});
        }
    }
    return Verdict::passed("dual_expansion", params);
}

// Every q-coefficient supported at g-weight 0 only.
inline Verdict rigidity_check(const ManifoldDatum& m, const OperatorSpec& op,
                              const EngineConfig& cfg) {
    std::string params = "datum=" + m.name + " op=" + op.name();
    IndexResult r = total_index(m, op, cfg, Region::AtZero);
    if (!r.tail.ok)
        return Verdict::failed("rigidity", params,
                               Violation{"tail", r.tail.first_violation->first,
                                         r.tail.first_violation->second, r.tail.violation_value, 0},
                               r.tail.describe());
    for (const auto& [k, c] : r.series.terms()) {
        if (k.second != 0)
            return Verdict::failed("rigidity", params,
                                   Violation{"nonzero coefficient off g^0", Rat(k.first, cfg.lat_q),
                                             Rat(k.second, cfg.lat_g), c, 0});
    }
    return Verdict::passed("rigidity", params);
}

// The index table is identically zero.
inline Verdict vanishing_check(const ManifoldDatum& m, const OperatorSpec& op,
                               const EngineConfig& cfg) {
    std::string params = "datum=" + m.name + " op=" + op.name();
    IndexResult r = total_index(m, op, cfg, Region::AtZero);
    if (!r.tail.ok)
        return Verdict::failed("vanishing", params,
                               Violation{"tail", r.tail.first_violation->first,
                                         r.tail.first_violation->second, r.tail.violation_value, 0},
                               r.tail.describe());
    if (!r.series.stored_zero()) {
        auto [k, c] = *r.series.terms().begin();
        return Verdict::failed("vanishing", params,
                               Violation{"nonzero coefficient", Rat(k.first, cfg.lat_q),
                                         Rat(k.second, cfg.lat_g), c, 0});
    }
    return Verdict::passed("vanishing", params);
}

} // namespace lefk
