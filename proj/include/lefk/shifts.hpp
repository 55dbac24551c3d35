#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lefk/anomaly.hpp"
#include "lefk/localization.hpp"

namespace lefk {

// ---------------------------------------------------------------------------
// Shift operators as substitution laws on bigraded characters, their
// conjugation constants, and the mechanical verification of the regrading
// isomorphisms, the level recursion and the translation law.
// ---------------------------------------------------------------------------

// ch(q, g) |-> sign * q^{q_offset} g^{g_offset} ch(q, q^{slope} g)
struct ShiftSpec {
    Rat slope{0};
    Rat q_offset{0};
    Rat g_offset{0};
    int sign{+1};
    int flip_taus{+1};
    int flip_taue{+1};

    // apply *this first, then the other
    ShiftSpec then(const ShiftSpec& o) const {
        return ShiftSpec{slope + o.slope,
                         q_offset + o.q_offset + o.slope * g_offset,
                         g_offset + o.g_offset,
                         sign * o.sign,
                         flip_taus * o.flip_taus,
                         flip_taue * o.flip_taue};
    }

    std::string str() const {
        return "s=" + slope.str() + " c=" + q_offset.str() + " d=" + g_offset.str() +
               " sign=" + std::to_string(sign);
    }
};

// Exact substitution; terms pushed past the window are dropped and the
// certified window shrinks to the inscribed rectangle of the image.
inline BigradedSeries apply_shift(const BigradedSeries& s, const ShiftSpec& spec) {
    const long long lq = s.lattice_q(), lg = s.lattice_g();
    auto qshift = [&](long long h) -> long long {
        Rat dq = spec.slope * Rat(h, lg) + spec.q_offset;
        return Exponent::on_lattice(dq, lq).num;
    };
    long long dg = Exponent::on_lattice(spec.g_offset, lg).num;

    const Box& w = s.window();
    const Box& b0 = s.support();
    bool fully_known = b0.is_empty() ||
                       (b0.qlo >= w.qlo && b0.qhi <= w.qhi && b0.glo >= w.glo && b0.ghi <= w.ghi);
    Box nw;
    if (fully_known) {
        // every true term is stored: the image is certified everywhere
        nw = Box::all();
    } else {
        if (w.is_empty() || bnd::is_pinf(w.ghi) || bnd::is_ninf(w.glo))
            throw window_exceeded("apply_shift requires a finite g-window");
        nw.glo = w.glo + dg;
        nw.ghi = w.ghi + dg;
        // inscribed rectangle: q-image bounds evaluated at the worst corner
        long long s_at_glo = qshift(w.glo), s_at_ghi = qshift(w.ghi);
        nw.qhi = bnd::is_pinf(w.qhi) ? bnd::POS_INF : bnd::add(w.qhi, std::min(s_at_glo, s_at_ghi));
        nw.qlo = bnd::is_ninf(w.qlo) ? bnd::NEG_INF : bnd::add(w.qlo, std::max(s_at_glo, s_at_ghi));
    }

    Box nb;
    const Box& b = s.support();
    if (b.is_empty()) {
        nb = Box::empty();
    } else if (bnd::is_pinf(b.ghi) || bnd::is_ninf(b.glo)) {
        nb = Box::all();
    } else {
        nb.glo = bnd::add(b.glo, dg);
        nb.ghi = bnd::add(b.ghi, dg);
        long long c1 = qshift(b.glo), c2 = qshift(b.ghi);
        nb.qlo = bnd::is_ninf(b.qlo) ? bnd::NEG_INF : bnd::add(b.qlo, std::min(c1, c2));
        nb.qhi = bnd::is_pinf(b.qhi) ? bnd::POS_INF : bnd::add(b.qhi, std::max(c1, c2));
    }

    BigradedSeries out(lq, lg, nw, nb);
    for (const auto& [k, c] : s.terms()) {
        long long q2 = k.first + qshift(k.second);
        long long h2 = k.second + dg;
        out.add_term(q2, h2, spec.sign < 0 ? Int(-c) : c);
    }
    return out;
}

// --- pointwise verification of substitution identities -----------------------

struct ShiftCheckGeometry {
    long long lat_q, lat_g;
    Rat q_max{2};              // q-depth of the verified band, in q-units
    long long g_halfwidth{16}; // half-width of the band around the RHS monomial, numerators
    Region region_lhs{Region::AtZero};
    Region region_rhs{Region::AtZero};
};

// Verify sign * q^c g^d L(q, q^s g) == R(q, g) on every lattice cell of a
// band around the right-hand side's monomial, rendering both sides exactly.
// Towers are truncated from the window geometry.
inline std::optional<Violation> verify_shift_identity(const BundleExpr& L, const ShiftSpec& spec,
                                                      const BundleExpr& R,
                                                      const ShiftCheckGeometry& geo) {
    const long long lq = geo.lat_q, lg = geo.lat_g;
    long long qhi = Exponent::on_lattice(geo.q_max, lq).num;
    long long center = Exponent::on_lattice(R.evaluate(Rat(0)).monomial_g(), lg).num;
    Box target{0, qhi, center - geo.g_halfwidth, center + geo.g_halfwidth};

    auto pre_q = [&](long long m, long long h) -> Rat {
        return Rat(m, lq) - spec.q_offset - spec.slope * (Rat(h, lg) - spec.g_offset);
    };
    long long dg = Exponent::on_lattice(spec.g_offset, lg).num;

    // source window: pre-images of the target corners
    Rat q_corners[4] = {pre_q(target.qlo, target.glo), pre_q(target.qlo, target.ghi),
                        pre_q(target.qhi, target.glo), pre_q(target.qhi, target.ghi)};
    Rat qmin = q_corners[0], qmax = q_corners[0];
    for (const Rat& r : q_corners) {
        if (r < qmin) qmin = r;
        if (qmax < r) qmax = r;
    }
    long long src_qlo = (qmin * Rat(lq)).floor();
    long long src_qhi = -((-qmax * Rat(lq)).floor()); // ceil
    Box src{src_qlo, src_qhi, target.glo - dg, target.ghi - dg};

    BigradedSeries ls = L.evaluate(Rat(src.qhi, lq)).render(geo.region_lhs, lq, lg, src);
    BigradedSeries rs = R.evaluate(Rat(target.qhi, lq)).render(geo.region_rhs, lq, lg, target);

    for (long long m = target.qlo; m <= target.qhi; ++m) {
        for (long long h = target.glo; h <= target.ghi; ++h) {
            Rat pq = pre_q(m, h);
            Int lv = 0;
            if (lq % pq.den == 0) lv = ls.extract(pq.num * (lq / pq.den), h - dg);
            if (spec.sign < 0) lv = -lv;
            Int rv = rs.extract(m, h);
            if (lv != rv)
                return Violation{"substitution identity mismatch", Rat(m, lq), Rat(h, lg), lv, rv};
        }
    }
    return std::nullopt;
}

// --- the first regrading law ---------------------------------------------------

struct PropCheckOptions {
    Rat q_max{2};          // q-depth of the verified band, in q-units
    long long g_halfwidth{16}; // half-width of the verified g-band, numerators on lat 2
};

// lattice able to hold slope * (half-integer weights)
inline long long shift_lattice(const FixedComponentDatum& c, long long extra_den = 1) {
    long long l = 1;
    for (auto& [v, d] : c.tangent) l = std::lcm(l, v);
    for (auto& [u, d] : c.vbundle) l = std::lcm(l, u);
    return 2 * std::lcm(l, extra_den);
}

// Verify the regrading isomorphisms of the first shift operator at slope p:
//   q^{-p^2 e(N) - p d'(N)} F^{-p}(q, q^p g)  ==  F^0(q, g) g^{p e(N)}
//   q^{ p^2 e(V) / 2    } F^i_V(q, q^p g)    ==  F^i_V(q, g) g^{-p e(V)}
// together with the composite conjugation constant p^2 e - p^2 e(N)/2
// - p d'(N)/2 on the full spinor-twisted object, and the endpoint identities
// of the level constants.
inline Verdict check_prop_3_1(const FixedComponentDatum& c, long long p, int i,
                              const PropCheckOptions& opt = {}) {
    std::string params = "component=" + c.name + " p=" + std::to_string(p) + " i=" + std::to_string(i);
    BaseConstants bc = base_constants(c);
    long long lq = shift_lattice(c), lg = 2;
    ShiftCheckGeometry geo{lq, lg, opt.q_max, opt.g_halfwidth, Region::AtZero, Region::AtZero};

    // N-side
    {
        BundleExpr L = level_F_minus(c, p);
        BundleExpr R = level_F_minus(c, 0);
        R.prefactor(Rat(0), Rat(p * bc.e_n));
        ShiftSpec spec{Rat(p), Rat(-(p * p * bc.e_n + p * bc.dprime_n)), Rat(0), +1};
        auto viol = verify_shift_identity(L, spec, R, geo);
        if (viol) {
            viol->what = "normal-bundle regrading: " + viol->what;
            return Verdict::failed("prop31", params, *viol);
        }
    }

    // V-side, both gradings
    for (bool tau_e : {false, true}) {
        BundleExpr L = (i == 1) ? level_F1V(c, tau_e) : level_F2V(c, tau_e);
        BundleExpr R = (i == 1) ? level_F1V(c, tau_e) : level_F2V(c, tau_e);
        R.prefactor(Rat(0), Rat(-p * bc.e_v));
        int flip = +1;
        if (tau_e && ((p * bc.dprime_v) & 1)) flip = -1;
        ShiftSpec spec{Rat(p), Rat(p * p * bc.e_v, 2), Rat(0), flip};
        auto viol = verify_shift_identity(L, spec, R, geo);
        if (viol) {
            viol->what = std::string(tau_e ? "tau_e" : "tau_s") + " exterior regrading: " + viol->what;
            return Verdict::failed("prop31", params, *viol);
        }
    }

    // composite: S(TY, det^{-1}) (x) F^{-p} (x) F^i_V against
    // S(TY, det^{-1}) (x) F^0 (x) F^i_V (x) L^{-p}
    {
        BundleExpr L = level_F_minus(c, p);
        L.mul(i == 1 ? level_F1V(c, false) : level_F2V(c, false));
        L.prefactor(Rat(0), Rat(-bc.dprime_n, 2));
        BundleExpr R = level_F_minus(c, 0);
        R.mul(i == 1 ? level_F1V(c, false) : level_F2V(c, false));
        R.prefactor(Rat(0), Rat(-bc.dprime_n, 2));
        Rat two_e = Rat(bc.e_v - bc.e_n); // weight of the trivially-extended line
        R.prefactor(Rat(0), -Rat(p) * two_e);
        Rat cfull = Rat(p * p) * bc.e - Rat(p * p * bc.e_n, 2) - Rat(p * bc.dprime_n, 2);
        ShiftSpec spec{Rat(p), cfull, Rat(0), +1};
        auto viol = verify_shift_identity(L, spec, R, geo);
        if (viol) {
            viol->what = "composite conjugation law: " + viol->what;
            return Verdict::failed("prop31", params, *viol);
        }
    }

    // endpoint identities of the level constants
    {
        LevelConstants top = level_constants(c, p, Rat(1));
        LevelConstants bottom = level_constants(c, p, Rat(0));
        Rat top_expect = Rat(p * p * bc.e_n + p * bc.dprime_n, 2);
        Rat bottom_expect = Rat((p - 1) * (p - 1) * bc.e_n + (p - 1) * bc.dprime_n, 2);
        if (Rat(top.e_level) != top_expect || Rat(bottom.e_level) != bottom_expect)
            return Verdict::failed("prop31", params,
                                   Violation{"level-constant endpoints", Rat(0), Rat(0),
                                             Int(top.e_level), Int(top_expect.num)});
    }
    return Verdict::passed("prop31", params);
}

// --- the level regrading law ---------------------------------------------------

// Determinant multiplicity of the stage-j object: m_j(v) = (p-1)v + 1 + [beta_j v],
// and one less for weights in the kernel class when stepping back to j-1.
inline long long det_multiplicity(long long p, const Rat& beta, long long v, bool back_one,
                                  long long n) {
    long long m = (p - 1) * v + 1 + (beta * Rat(v)).floor();
    if (back_one && v % n == 0) m -= 1;
    return m;
}

// V-parts of the epsilon offsets (the q-corrections of the exterior-side
// regradings).
inline Rat epsilon_v_part(const FixedComponentDatum& c, long long p, const Rat& beta, int i) {
    Rat acc(0);
    for (auto& [u, d] : c.vbundle) {
        Rat su = Rat((p - 1) * u) + beta * Rat(u);
        if (i == 1) {
            long long k = kappa_of(p, beta, u);
            acc = acc - Rat(d) * (Rat(k) * Rat(k + 1) - su * Rat(2 * k + 1));
        } else {
            long long k = kappa_half_of(p, beta, u);
            acc = acc - Rat(d) * (Rat(k) * Rat(k) - Rat(2) * su * Rat(k));
        }
    }
    return acc * Rat(1, 2);
}

// Two-route weight bookkeeping for the level line bundles: the defining
// product of determinant powers against the closed form through the cyclic
// class tables. The circle acts on the fractional root factors through the
// n-fold cover, so the weight must land on the widened lattice 1/(2n); that
// representability is the shadow of root existence visible from weight data.
struct LevelLineWeight {
    Rat weight{0};
    bool routes_agree{true};
    bool on_lattice{true};
};

inline LevelLineWeight level_line_weight(const FixedComponentDatum& c, long long p,
                                         const PhiLevel& lvl, int i) {
    const long long n = lvl.n, pj = lvl.p;
    ZnTable t = zn_decompose(c, n);
    long long r = t.r;
    auto omega = [&](long long label) { return (pj * label) % n; };

    // weight of the class line bundle L(n) = prod (det N(n)_{v'} det conj V(n)_{v'})^{(r+1)v'}
    Rat wLn(0);
    for (auto& [label, dim] : t.n_class_dim) (void)dim;
    for (auto& [label, det] : t.n_class_det) wLn = wLn + Rat((r + 1) * label) * Rat(det);
    for (auto& [label, det] : t.v_class_det) wLn = wLn - Rat((r + 1) * label) * Rat(det);

    // residue-class weight sums over the original lines
    long long n_halfclass = 0, v_halfclass = 0;      // sum v dim over v = n/2 mod n
    long long n_lower = 0;                           // sum v dim over 0 < res <= n/2
    long long v_upper = 0, n_upper = 0;              // res in (n/2, n)
    for (auto& [v, d] : c.tangent) {
        long long res = v % n;
        if (res == 0) continue;
        if (2 * res == n) n_halfclass += v * d;
        if (res > 0 && 2 * res <= n) n_lower += v * d;
        if (2 * res > n) n_upper += v * d;
    }
    for (auto& [u, d] : c.vbundle) {
        long long res = u % n;
        if (res == 0) continue;
        if (2 * res == n) v_halfclass += u * d;
        if (2 * res > n) v_upper += u * d;
    }

    Rat wLprime;
    if (i == 1) {
        wLprime = Rat(r, 2) * (-wLn / Rat(n) + Rat(n_halfclass) - Rat(v_halfclass));
        wLprime = wLprime - Rat(n_lower) - Rat(v_upper);
    } else {
        wLprime = Rat(r, 2) * (-wLn / Rat(n) + Rat(n_halfclass) + Rat(v_halfclass));
        wLprime = wLprime - Rat(n_lower);
    }

    // route A: defining determinant powers on top of L'_i
    Rat wA = wLprime;
    for (auto& [v, d] : c.tangent) {
        wA = wA + Rat(v * d) * Rat(det_multiplicity(p, lvl.beta, v, false, n));
        if (v % n == 0) wA = wA - Rat(v * d);
    }
    for (auto& [u, d] : c.vbundle) {
        long long k = (i == 1) ? kappa_of(p, lvl.beta, u) : kappa_half_of(p, lvl.beta, u);
        wA = wA - Rat(u * d) * Rat(k);
    }

    // route B: closed form through the class tables
    Rat wB = -(Rat(p - 1) + lvl.beta) * Rat(c.e_v() - c.e_n());
    Rat wOmega(0);
    for (auto& [label, det] : t.n_class_det)
        wOmega = wOmega + Rat(-omega(label) - r * label) * Rat(det);
    for (auto& [label, det] : t.v_class_det)
        wOmega = wOmega - Rat(-omega(label) - r * label) * Rat(det);
    wB = wB + wOmega / Rat(n);
    if (i == 2) {
        for (auto& [label, det] : t.v_class_det) {
            Rat x = Rat(pj * label, n);
            Rat f = x - Rat(x.floor());
            if (f > Rat(1, 2) && f < Rat(1)) wB = wB - Rat(det);
        }
    }

    LevelLineWeight out;
    out.weight = wA;
    out.routes_agree = (wA == wB);
    out.on_lattice = ((2 * n) % wA.den == 0);
    return out;
}

// Verify the four regrading isomorphisms of the level shift operator at
// slope (p-1) + beta_j, the epsilon-offset assembly against the stated
// conjugation constants, the grading flips, and the line-bundle weight
// bookkeeping.
inline Verdict check_prop_4_1(const FixedComponentDatum& c, long long p,
                              const std::vector<PhiLevel>& levels, long long j, int i,
                              const PropCheckOptions& opt = {}) {
    if (j < 1 || j > (long long)levels.size())
        return Verdict::failed("prop41", "component=" + c.name,
                               Violation{"level index out of range", Rat(0), Rat(0), 0, 0});
    const PhiLevel& lvl = levels[j - 1];
    const Rat beta = lvl.beta;
    const Rat beta_prev = (j == 1) ? Rat(0) : levels[j - 2].beta;
    std::string params = "component=" + c.name + " p=" + std::to_string(p) +
                         " beta=" + beta.str() + " i=" + std::to_string(i);
    BaseConstants bc = base_constants(c);
    long long lq = shift_lattice(c, lvl.n), lg = 2;
    Rat s = Rat(p - 1) + beta;

    // determinant totals
    long long M_prev = 0, M_cur = 0;
    for (auto& [v, d] : c.tangent) {
        M_prev += v * d * det_multiplicity(p, beta, v, true, lvl.n);
        M_cur += v * d * det_multiplicity(p, beta, v, false, lvl.n);
    }

    // isos 1 and 2: the two stages against the level tower
    for (bool back : {true, false}) {
        BundleExpr L = level_F_pj(c, p, back ? beta_prev : beta);
        BundleExpr R = level_F_beta(c, beta);
        for (auto& [v, d] : c.tangent)
            if (v % lvl.n == 0) R.sym_single(Rat(0), Rat(back ? -v : v), d, back);
        long long M = back ? M_prev : M_cur;
        R.prefactor(Rat(0), Rat(M));
        ShiftSpec spec{s, -s * Rat(M), Rat(0), +1};
        ShiftCheckGeometry geo{lq, lg, opt.q_max, opt.g_halfwidth, Region::AtZero,
                               back ? Region::AtInfinity : Region::AtZero};
        auto viol = verify_shift_identity(L, spec, R, geo);
        if (viol) {
            viol->what = std::string(back ? "stage j-1" : "stage j") + " regrading: " + viol->what;
            viol->level = j;
            return Verdict::failed("prop41", params, *viol);
        }
    }

    // isos 3 and 4: the exterior companion, both gradings
    for (bool tau_e : {false, true}) {
        BundleExpr L = (i == 1) ? level_F1V(c, tau_e) : level_F2V(c, tau_e);
        BundleExpr R = (i == 1) ? level_F1V_beta(c, beta, tau_e) : level_F2V_beta(c, beta, tau_e);
        long long refl = 0, Mv = 0;
        for (auto& [u, d] : c.vbundle) {
            long long k = (i == 1) ? kappa_of(p, beta, u) : kappa_half_of(p, beta, u);
            refl += k * d;
            Mv += u * d * k;
        }
        int sgn = tau_e ? -1 : +1;
        if (i == 1) {
            // spinor factor of the trivially-acted part plus zero-level blocks
            if (tau_e) {
                if (c.v0_rank > 0) R.scale(0);
            } else {
                Int two_p = 1;
                for (long long x = 0; x < c.v0_rank / 2; ++x) two_p *= 2;
                R.scale(two_p);
            }
            R.prefactor(Rat(0), Rat(-c.dprime_v(), 2));
            for (auto& [u, d] : c.vbundle)
                if (u % lvl.n == 0) R.lambda_single(Rat(0), Rat(u), d, sgn);
        } else {
            for (auto& [u, d] : c.vbundle)
                if (lvl.n % 2 == 0 && (2 * (u % lvl.n) == lvl.n)) R.lambda_single(Rat(0), Rat(u), d, sgn);
        }
        R.prefactor(Rat(0), Rat(-Mv));
        int flip = (tau_e && (refl & 1)) ? -1 : +1;
        ShiftSpec spec{s, epsilon_v_part(c, p, beta, i), Rat(0), flip};
        ShiftCheckGeometry geo{lq, lg, opt.q_max, opt.g_halfwidth, Region::AtZero, Region::AtZero};
        auto viol = verify_shift_identity(L, spec, R, geo);
        if (viol) {
            viol->what = std::string(tau_e ? "tau_e" : "tau_s") + " exterior level regrading: " +
                         viol->what;
            viol->level = j;
            return Verdict::failed("prop41", params, *viol);
        }
    }

    // epsilon assembly: the stated conjugation constants match the offsets
    // recovered from the verified isomorphisms
    {
        EpsilonPair eps = epsilons(c, p, beta);
        Rat eps_i = (i == 1) ? eps.eps1 : eps.eps2;
        LevelConstants lc_prev = level_constants(c, p, beta_prev);
        LevelConstants lc_cur = level_constants(c, p, beta);
        Rat eps_i1 = eps_i - Rat(lc_prev.e_level);
        Rat eps_i2 = eps_i - Rat(lc_cur.e_level);
        Rat half_s_dn = s * Rat(bc.dprime_n, 2);
        Rat fit_1 = half_s_dn - s * Rat(M_prev) + epsilon_v_part(c, p, beta, i);
        Rat fit_2 = half_s_dn - s * Rat(M_cur) + epsilon_v_part(c, p, beta, i);
        if (eps_i1 != fit_1 || eps_i2 != fit_2)
            return Verdict::failed(
                "prop41", params,
                Violation{"epsilon offset does not match fitted conjugation constant", eps_i1,
                          fit_1, 0, 0, j});
        // closed forms through the class tables
        EpsilonPair closed = epsilons_closed(c, p, lvl);
        if (closed.eps1 != eps.eps1 || closed.eps2 != eps.eps2)
            return Verdict::failed("prop41", params,
                                   Violation{"epsilon closed form mismatch", eps.eps1, closed.eps1,
                                             0, 0, j});
    }

    // line-bundle weight bookkeeping (two routes + integrality)
    {
        LevelLineWeight w = level_line_weight(c, p, lvl, i);
        if (!w.routes_agree)
            return Verdict::failed("prop41", params,
                                   Violation{"level line-bundle weight routes disagree", w.weight,
                                             Rat(0), 0, 0, j});
        if (!w.on_lattice)
            return Verdict::failed("prop41", params,
                                   Violation{"level line-bundle weight off the widened lattice "
                                             "(no root at the weight level)",
                                             w.weight, Rat(0), 0, 0, j});
    }
    return Verdict::passed("prop41", params);
}

// --- level recursion and translation -------------------------------------------

struct RecursionOptions {
    Rat q_max{2};              // depth of the compared m-band, in q-units
    long long g_halfwidth{16}; // compared |h| band, numerators on lattice 2
    long long e_offset_tweak{0}; // deliberate corruption knob for negative controls
};

namespace detail {

// Per-component index table of D^Y (x) stage (x) exterior twist, rendered
// exactly on a q-band shifted by `q_shift` (in lattice numerators).
inline BigradedSeries stage_table(const FixedComponentDatum& c, const BundleExpr& stage, int i,
                                  long long lq, long long lg, long long q_shift, long long q_depth,
                                  long long ghw) {
    BundleExpr e = stage;
    e.mul(r_twist(i, c));
    e.prefactor(Rat(0), Rat(-c.dprime_n(), 2));
    Box win{q_shift, q_shift + q_depth, -ghw, ghw};
    FactorList f = e.evaluate(Rat(win.qhi, lq));
    if (c.orientation_sign < 0) f.mul_scalar(-1);
    return f.render(Region::AtZero, lq, lg, win);
}

} // namespace detail

// The level recursion: for every stage j >= 1, the signed localized sums of
// the stage-(j-1) and stage-j tables agree after their level-constant
// offsets; composing all stages connects the two ends, and the end stage is
// the translated image of the untwisted localized object.
inline Verdict recursion_check(const ManifoldDatum& m, int i, long long p,
                               const RecursionOptions& opt = {}) {
    std::string params = "datum=" + m.name + " i=" + std::to_string(i) + " p=" + std::to_string(p);
    auto J = m.weight_set();
    if (J.empty()) return Verdict::passed("recursion", params, "no tangent weights");
    std::vector<PhiLevel> levels = phi_levels(J);
    // stage objects and the exterior twists live on integer and half-integer
    // q-degrees; the fractional level towers never enter the stage tables
    long long lg = 2, lq = 2;
    long long q_depth = Exponent::on_lattice(opt.q_max, lq).num;
    long long ghw = opt.g_halfwidth;

    const long long J0 = (long long)levels.size();
    // per component and stage: table and its offsets/signs
    std::vector<std::vector<BigradedSeries>> tables(m.components.size());
    std::vector<std::vector<long long>> e_off(m.components.size());
    std::vector<std::vector<int>> sgn(m.components.size());
    for (std::size_t a = 0; a < m.components.size(); ++a) {
        const auto& c = m.components[a];
        for (long long j = 0; j <= J0; ++j) {
            Rat beta = (j == 0) ? Rat(0) : levels[j - 1].beta;
            LevelConstants lc = level_constants(c, p, beta);
            long long off = lc.e_level + (j > 0 ? opt.e_offset_tweak : 0);
            e_off[a].push_back(off * lq); // q-numerator shift
            int s = ((lc.dprime_level + c.dim_n()) & 1) ? -1 : +1;
            sgn[a].push_back(s);
            tables[a].push_back(detail::stage_table(c, level_F(c, p, j, levels), i, lq, lg,
                                                    off * lq, q_depth, ghw));
        }
    }

    auto side = [&](long long j, long long mq, long long h) {
        Int s = 0;
        for (std::size_t a = 0; a < m.components.size(); ++a)
            s += Int(sgn[a][j]) * tables[a][j].extract(mq + e_off[a][j], h);
        return s;
    };

    for (long long j = 1; j <= J0; ++j) {
        for (long long mq = 0; mq <= q_depth; ++mq) {
            for (long long h = -ghw; h <= ghw; ++h) {
                Int lhs = side(j - 1, mq, h), rhs = side(j, mq, h);
                if (lhs != rhs)
                    return Verdict::failed(
                        "recursion", params,
                        Violation{"stage identity mismatch", Rat(mq, lq), Rat(h, lg), lhs, rhs, j});
            }
        }
    }
    // composed ends (implied by the stages; asserted independently)
    for (long long mq = 0; mq <= q_depth; ++mq)
        for (long long h = -ghw; h <= ghw; ++h) {
            Int lhs = side(0, mq, h), rhs = side(J0, mq, h);
            if (lhs != rhs)
                return Verdict::failed("recursion", params,
                                       Violation{"composed ends mismatch", Rat(mq, lq), Rat(h, lg),
                                                 lhs, rhs, J0});
        }

    // translated untwisted object, componentwise: the end stage is the
    // translated image of the untwisted localized object. The exterior-side
    // grading of the i = 2, 3 twists conjugates with sign (-1)^{p d'(V)}.
    for (std::size_t a = 0; a < m.components.size(); ++a) {
        const auto& c = m.components[a];
        Rat e = c.e_constant();
        Rat tpe = Rat(2 * p) * e;
        if (!tpe.is_integer()) continue; // off-lattice translation: not testable for this datum
        int grading_flip = ((i == 2 || i == 3) && ((p * c.dprime_v()) & 1)) ? -1 : +1;
        long long true_off = level_constants(c, p, Rat(1)).e_level * lq;
        BigradedSeries base =
            detail::stage_table(c, level_F_minus(c, 0), i, lq, lg, 0, q_depth, ghw);
        long long h_span = std::min(ghw / 2, 8LL);
        for (long long h = -h_span; h <= h_span; ++h) {
            long long h2 = h + tpe.num * lg;
            if (std::llabs(h2) > ghw) continue;
            for (long long mq = 0; mq <= q_depth; ++mq) {
                Int lhs = tables[a][J0].extract(mq + true_off + opt.e_offset_tweak * lq, h);
                Rat m2 = Rat(mq, lq) + Rat(p) * Rat(h, lg) + Rat(p * p) * e;
                if (lq % m2.den != 0) continue;
                long long m2n = m2.num * (lq / m2.den);
                if (!base.certified(m2n, h2)) continue;
                Int rhs = Int(grading_flip) * base.extract(m2n, h2);
                if (lhs != rhs)
                    return Verdict::failed("recursion", params,
                                           Violation{"translated end mismatch (component " +
                                                         c.name + ")",
                                                     Rat(mq, lq), Rat(h, lg), lhs, rhs, J0});
            }
        }
    }
    return Verdict::passed("recursion", params);
}

// Translation law on a global index table: a_{m,h} = a_{m+ph+p^2 e, h+2pe}
// throughout the certified window, for data with a constant anomaly e.
inline Verdict translation_check(const ManifoldDatum& m, const OperatorSpec& op, long long p,
                                 const EngineConfig& cfg) {
    std::string params = "datum=" + m.name + " op=" + op.name() + " p=" + std::to_string(p);
    HypothesisReport hyp;
    compute_e(m, hyp);
    if (!hyp.e_constant)
        return Verdict{"translation", params, true, "skipped: anomaly constant not constant", {}};
    Rat e = *hyp.e;
    Rat tpe = Rat(2 * p) * e;
    if (cfg.lat_g % tpe.den != 0)
        return Verdict{"translation", params, true, "skipped: 2pe off the g-lattice", {}};
    IndexResult r = total_index(m, op, cfg, Region::AtZero);
    if (!r.tail.ok)
        return Verdict::failed("translation", params,
                               Violation{"tail", r.tail.first_violation->first,
                                         r.tail.first_violation->second, r.tail.violation_value, 0},
                               r.tail.describe());
    long long dg = Exponent::on_lattice(tpe, cfg.lat_g).num;
    const Box w = r.series.window();
    long long compared = 0;
    for (long long mq = w.qlo; mq <= w.qhi; ++mq) {
        for (long long h = std::max(w.glo, -r.g_safe); h <= std::min(w.ghi, r.g_safe); ++h) {
            Rat m2 = Rat(mq, cfg.lat_q) + Rat(p) * Rat(h, cfg.lat_g) + Rat(p * p) * e;
            if (cfg.lat_q % m2.den != 0) continue;
            long long m2n = m2.num * (cfg.lat_q / m2.den);
            long long h2 = h + dg;
            if (!r.series.certified(m2n, h2)) continue;
            ++compared;
            Int lhs = r.series.extract(mq, h);
            Int rhs = r.series.extract(m2n, h2);
            if (lhs != rhs)
                return Verdict::failed("translation", params,
                                       Violation{"translated coefficient mismatch",
                                                 Rat(mq, cfg.lat_q), Rat(h, cfg.lat_g), lhs, rhs});
        }
    }
    if (compared == 0)
        return Verdict{"translation", params, true, "skipped: no comparable cells in window", {}};
    return Verdict::passed("translation", params,
                           std::to_string(compared) + " cells compared");
}

} // namespace lefk
