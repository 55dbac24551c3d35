#pragma once

#include <algorithm>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "lefk/datum.hpp"
#include "lefk/factor_list.hpp"
#include "lefk/levels.hpp"

namespace lefk {

// ---------------------------------------------------------------------------
// Weight-graded bundle expressions at a fixed component.
//
// Exponent bookkeeping: q carries the formal series grading of a twist, g the
// intrinsic circle weight. The single-variable carriers R(q), R'(q) and their
// spin-c analogues are emitted in diagonal (q, g) form; reading their q as
// the group variable (g := 1, then q -> g) recovers the one-variable
// character used by the localization core.
// ---------------------------------------------------------------------------

enum class AtomKind { SymTower, LambdaTower, SymSingle, LambdaSingle, Det, Line };

struct WeightAtom {
    AtomKind kind{AtomKind::Line};
    Rat w{0};        // g-weight of the underlying line(s)
    Rat q_offset{0}; // first (or only) q-degree
    Rat q_step{1};   // tower step
    long long rank{1};
    bool conjugated{false}; // display only; conjugation is encoded in w's sign
    int sign_variant{+1};   // Lambda_{+q^a} vs Lambda_{-q^a}
};

class BundleExpr {
public:
    BundleExpr() = default;

    static BundleExpr one() { return BundleExpr(); }

    BundleExpr& atom(WeightAtom a) {
        if (a.rank > 0) atoms_.push_back(a);
        return *this;
    }
    BundleExpr& sym_single(Rat off, Rat w, long long rank, bool conj = false) {
        return atom({AtomKind::SymSingle, w, off, Rat(1), rank, conj, +1});
    }
    BundleExpr& lambda_single(Rat off, Rat w, long long rank, int sign) {
        return atom({AtomKind::LambdaSingle, w, off, Rat(1), rank, false, sign});
    }
    BundleExpr& sym_tower(Rat off, Rat step, Rat w, long long rank) {
        return atom({AtomKind::SymTower, w, off, step, rank, false, +1});
    }
    BundleExpr& lambda_tower(Rat off, Rat step, Rat w, long long rank, int sign) {
        return atom({AtomKind::LambdaTower, w, off, step, rank, false, sign});
    }
    BundleExpr& det(Rat q, Rat w, long long rank) {
        return atom({AtomKind::Det, w, q, Rat(1), rank, false, +1});
    }
    BundleExpr& line(Rat q, Rat w) { return atom({AtomKind::Line, w, q, Rat(1), 1, false, +1}); }
    BundleExpr& prefactor(Rat q, Rat g) {
        pre_q_ = pre_q_ + q;
        pre_g_ = pre_g_ + g;
        return *this;
    }
    BundleExpr& scale(const Int& s) { scalar_ *= s; return *this; }
    BundleExpr& mul(const BundleExpr& o) {
        atoms_.insert(atoms_.end(), o.atoms_.begin(), o.atoms_.end());
        pre_q_ = pre_q_ + o.pre_q_;
        pre_g_ = pre_g_ + o.pre_g_;
        scalar_ *= o.scalar_;
        return *this;
    }

    const std::vector<WeightAtom>& atoms() const { return atoms_; }
    const Rat& prefactor_q() const { return pre_q_; }
    const Rat& prefactor_g() const { return pre_g_; }
    const Int& scalar() const { return scalar_; }

    // Expand to a lazy factor product, truncating towers past q_hi. Dropped
    // tower factors are 1 + O(q^{> q_hi}), so the evaluation is exact below
    // the truncation.
    FactorList evaluate(const Rat& q_hi) const {
        FactorList f;
        f.mul_scalar(scalar_);
        f.mul_monomial(pre_q_, pre_g_);
        for (const auto& a : atoms_) {
            switch (a.kind) {
            case AtomKind::SymSingle:
                f.mul_factor(a.q_offset, a.w, +1, -a.rank);
                break;
            case AtomKind::LambdaSingle:
                f.mul_factor(a.q_offset, a.w, -a.sign_variant, a.rank);
                break;
            case AtomKind::SymTower:
                for (Rat d = a.q_offset; d <= q_hi; d = d + a.q_step)
                    f.mul_factor(d, a.w, +1, -a.rank);
                break;
            case AtomKind::LambdaTower:
                for (Rat d = a.q_offset; d <= q_hi; d = d + a.q_step)
                    f.mul_factor(d, a.w, -a.sign_variant, a.rank);
                break;
            case AtomKind::Det:
                f.mul_monomial(a.q_offset * Rat(a.rank), a.w * Rat(a.rank));
                break;
            case AtomKind::Line:
                f.mul_monomial(a.q_offset, a.w);
                break;
            }
        }
        return f;
    }

    std::string str() const {
        std::vector<WeightAtom> as = atoms_;
        std::stable_sort(as.begin(), as.end(), [](const WeightAtom& x, const WeightAtom& y) {
            if (x.kind != y.kind) return (int)x.kind < (int)y.kind;
            if (x.q_offset != y.q_offset) return x.q_offset < y.q_offset;
            return x.w < y.w;
        });
        std::ostringstream os;
        os << scalar_.str();
        if (pre_q_.num != 0) os << " q^" << pre_q_.str();
        if (pre_g_.num != 0) os << " g^" << pre_g_.str();
        for (const auto& a : as) {
            os << " ";
            switch (a.kind) {
            case AtomKind::SymTower: os << "SymTower"; break;
            case AtomKind::LambdaTower: os << (a.sign_variant > 0 ? "LambdaTower+" : "LambdaTower-"); break;
            case AtomKind::SymSingle: os << "Sym"; break;
            case AtomKind::LambdaSingle: os << (a.sign_variant > 0 ? "Lambda+" : "Lambda-"); break;
            case AtomKind::Det: os << "Det"; break;
            case AtomKind::Line: os << "Line"; break;
            }
            os << "(q0=" << a.q_offset.str();
            if (a.kind == AtomKind::SymTower || a.kind == AtomKind::LambdaTower)
                os << ",step=" << a.q_step.str();
            os << ",w=" << a.w.str() << ",rk=" << a.rank << ")";
        }
        return os.str();
    }

private:
    std::vector<WeightAtom> atoms_;
    Rat pre_q_{0};
    Rat pre_g_{0};
    Int scalar_{1};
};

// --- named twist families --------------------------------------------------

enum class ThetaKind { Prime, Q, MinusQ, Star };

// Complexified fiber data for a twist: positive-weight complex lines plus a
// trivially-acted complex rank (zero at isolated points for the tangent).
struct FiberWeights {
    std::map<long long, long long> lines; // weight -> complex rank
    long long trivial_rank{0};

    static FiberWeights tangent_of(const FixedComponentDatum& c) { return {c.tangent, 0}; }
    static FiberWeights vbundle_of(const FixedComponentDatum& c) { return {c.vbundle, c.v0_rank}; }
};

namespace detail {
// Lambda_{sign q^*}(E (x) C) tower over levels off, off+1, ...
inline void lambda_tower_complexified(BundleExpr& e, const FiberWeights& f, Rat off, int sign) {
    for (auto& [w, r] : f.lines) {
        e.lambda_tower(off, Rat(1), Rat(w), r, sign);
        e.lambda_tower(off, Rat(1), Rat(-w), r, sign);
    }
    if (f.trivial_rank > 0) e.lambda_tower(off, Rat(1), Rat(0), f.trivial_rank, sign);
}
inline void sym_tower_complexified(BundleExpr& e, const FiberWeights& f, Rat off) {
    for (auto& [w, r] : f.lines) {
        e.sym_tower(off, Rat(1), Rat(w), r);
        e.sym_tower(off, Rat(1), Rat(-w), r);
    }
    if (f.trivial_rank > 0) e.sym_tower(off, Rat(1), Rat(0), f.trivial_rank);
}
} // namespace detail

// The loop-space twist families: an infinite product of exterior powers of
// the chosen fiber (the tangent itself, or an auxiliary bundle) against the
// symmetric-power tower of the tangent.
inline BundleExpr theta_twist(ThetaKind kind, const FiberWeights& tangent,
                              std::optional<FiberWeights> vbundle = std::nullopt) {
    const FiberWeights& lam = vbundle ? *vbundle : tangent;
    BundleExpr e;
    switch (kind) {
    case ThetaKind::Prime: detail::lambda_tower_complexified(e, lam, Rat(1), +1); break;
    case ThetaKind::Q: detail::lambda_tower_complexified(e, lam, Rat(1, 2), -1); break;
    case ThetaKind::MinusQ: detail::lambda_tower_complexified(e, lam, Rat(1, 2), +1); break;
    case ThetaKind::Star: detail::lambda_tower_complexified(e, lam, Rat(1), -1); break;
    }
    detail::sym_tower_complexified(e, tangent, Rat(1));
    return e;
}

inline BundleExpr sym_tower_twist(const FiberWeights& tangent) {
    BundleExpr e;
    detail::sym_tower_complexified(e, tangent, Rat(1));
    return e;
}

// --- spinor heads ------------------------------------------------------------

// Character of S^+(V) + S^-(V) restricted to the component:
// 2^{p'} prod_u (g^{u/2} + g^{-u/2})^{dim V_u}.
inline BundleExpr spinor_sum_head(const FixedComponentDatum& c) {
    BundleExpr e;
    Int two_p = 1;
    for (long long i = 0; i < c.v0_rank / 2; ++i) two_p *= 2;
    e.scale(two_p);
    e.prefactor(Rat(0), Rat(-c.dprime_v(), 2));
    for (auto& [u, r] : c.vbundle) e.lambda_single(Rat(0), Rat(u), r, +1);
    return e;
}

// Character of S^+(V) - S^-(V): prod_u (g^{u/2} - g^{-u/2})^{dim V_u}, and
// zero as soon as a trivially-acted direction is present.
inline BundleExpr spinor_diff_head(const FixedComponentDatum& c) {
    BundleExpr e;
    if (c.v0_rank > 0) {
        e.scale(0);
        return e;
    }
    long long s = 0;
    for (auto& [u, r] : c.vbundle) s += r;
    if (s & 1) e.scale(-1);
    e.prefactor(Rat(0), Rat(-c.dprime_v(), 2));
    for (auto& [u, r] : c.vbundle) e.lambda_single(Rat(0), Rat(u), r, -1);
    return e;
}

// S(TX) restricted to an isolated component: prod_v (g^{v/2} + g^{-v/2})^{dim N_v}.
inline BundleExpr tangent_spinor_head(const FixedComponentDatum& c) {
    BundleExpr e;
    e.prefactor(Rat(0), Rat(-c.dprime_n(), 2));
    for (auto& [v, r] : c.tangent) e.lambda_single(Rat(0), Rat(v), r, +1);
    return e;
}

// Two gradings on spinor/exterior constructions: tau_s evaluates plainly,
// tau_e counts odd exterior degrees with sign (superdimension style).
enum class Grading { TauS, TauE };

// S^+(V) + S^-(V) or S^+(V) - S^-(V) depending on the grading. Rejects data
// without a spinor factor to grade.
inline BundleExpr graded_spinor_head(const FixedComponentDatum& c, Grading g) {
    if (!c.has_v())
        throw invalid_grading("grading requested on an expression without a spinor factor");
    return g == Grading::TauS ? spinor_sum_head(c) : spinor_diff_head(c);
}

// The four auxiliary-bundle twists paired with the symmetric tower in the
// fixed-point recursion: spinor heads against exterior-power towers.
inline BundleExpr r_twist(int i, const FixedComponentDatum& c) {
    FiberWeights V = FiberWeights::vbundle_of(c);
    BundleExpr e;
    switch (i) {
    case 1:
        e = spinor_sum_head(c);
        detail::lambda_tower_complexified(e, V, Rat(1), +1);
        break;
    case 2:
        e = spinor_diff_head(c);
        detail::lambda_tower_complexified(e, V, Rat(1), -1);
        break;
    case 3:
        detail::lambda_tower_complexified(e, V, Rat(1, 2), -1);
        break;
    case 4:
        detail::lambda_tower_complexified(e, V, Rat(1, 2), +1);
        break;
    default:
        throw invalid_level("r_twist index must be 1..4");
    }
    return e;
}

// --- single-variable localization carriers ----------------------------------

// Diagonal (q, g) form of the normal-bundle carrier
//   R  = q^{d'(N)/2} prod_v Sym_{q^v}(N_v) (x) det N_v        (primed = false)
//   R' = q^{-d'(N)/2} prod_v Sym_{q^{-v}}(conj N_v)           (primed = true)
// with q recording the total circle weight of each mode.
inline BundleExpr dirac_R(const FixedComponentDatum& c, bool primed) {
    BundleExpr e;
    Rat half_dn(c.dprime_n(), 2);
    if (!primed) {
        e.prefactor(half_dn, half_dn);
        for (auto& [v, r] : c.tangent) {
            e.sym_single(Rat(v), Rat(v), r);
            e.det(Rat(v), Rat(v), r);
        }
    } else {
        e.prefactor(-half_dn, -half_dn);
        for (auto& [v, r] : c.tangent) e.sym_single(Rat(-v), Rat(-v), r, true);
    }
    return e;
}

// Spin-c carrier with the signed exterior factors Lambda_{sign q^u}(V_u) and
// prefactor exponent d'(N)/2 - d'(V)/2 + l_c/2.
inline BundleExpr spin_c_R(const FixedComponentDatum& c, int sign, bool primed) {
    if (!c.l_c) throw missing_spin_c_data("component '" + c.name + "' carries no l_c weight");
    BundleExpr e;
    Rat pre = Rat(c.dprime_n(), 2) * Rat(primed ? -1 : 1) - Rat(c.dprime_v(), 2) + Rat(*c.l_c, 2);
    e.prefactor(pre, pre);
    if (!primed) {
        for (auto& [v, r] : c.tangent) {
            e.sym_single(Rat(v), Rat(v), r);
            e.det(Rat(v), Rat(v), r);
        }
    } else {
        for (auto& [v, r] : c.tangent) e.sym_single(Rat(-v), Rat(-v), r, true);
    }
    for (auto& [u, r] : c.vbundle) e.lambda_single(Rat(u), Rat(u), r, sign);
    return e;
}

// --- level filtration bundles --------------------------------------------------

// Sym(N_{v,n}) towers for n >= 1 together with Sym(conj N_{v,n}) for n > pv.
inline BundleExpr level_F_p(const FixedComponentDatum& c, long long p) {
    BundleExpr e;
    for (auto& [v, d] : c.tangent) {
        e.sym_tower(Rat(1), Rat(1), Rat(v), d);
        e.sym_tower(Rat(p * v + 1), Rat(1), Rat(-v), d);
    }
    return e;
}

// Sym(N_{v,-n}) (x) det N_v for 0 <= n <= pv.
inline BundleExpr level_F_prime(const FixedComponentDatum& c, long long p) {
    BundleExpr e;
    for (auto& [v, d] : c.tangent) {
        for (long long n = 0; n <= p * v; ++n) {
            e.sym_single(Rat(-n), Rat(v), d);
            e.det(Rat(0), Rat(v), d);
        }
    }
    return e;
}

// F^{-p} = F_p (x) F'_p; p = 0 gives the localized untwisted object F^0.
inline BundleExpr level_F_minus(const FixedComponentDatum& c, long long p) {
    BundleExpr e = level_F_p(c, p);
    e.mul(level_F_prime(c, p));
    return e;
}

// The interpolating stage between F^{-p+1} and F^{-p}: the reflected
// zero-to-pv band is split at beta, weights at slope <= beta already
// reflected (with their determinant twist), the rest still conjugate.
inline BundleExpr level_F_pj(const FixedComponentDatum& c, long long p, const Rat& beta) {
    if (p < 1) throw invalid_level("level filtration needs p >= 1");
    if (beta < Rat(0) || beta > Rat(1)) throw invalid_level("beta must lie in [0, 1]");
    BundleExpr e = level_F_p(c, p);
    e.mul(level_F_prime(c, p - 1));
    for (auto& [v, d] : c.tangent) {
        long long fb = (beta * Rat(v)).floor();
        for (long long n = (p - 1) * v + 1; n <= (p - 1) * v + fb; ++n) {
            e.sym_single(Rat(-n), Rat(v), d);
            e.det(Rat(0), Rat(v), d);
        }
        for (long long n = (p - 1) * v + fb + 1; n <= p * v; ++n)
            e.sym_single(Rat(n), Rat(-v), d, true);
    }
    return e;
}

// F_{p,j} by level index: j = 0 is F^{-p+1}, the top level is F^{-p}.
inline BundleExpr level_F(const FixedComponentDatum& c, long long p, long long j,
                          const std::vector<PhiLevel>& levels) {
    if (j < 0 || j > (long long)levels.size())
        throw invalid_level("level index out of range 0.." + std::to_string(levels.size()));
    Rat beta = (j == 0) ? Rat(0) : levels[j - 1].beta;
    return level_F_pj(c, p, beta);
}

namespace detail {
// smallest positive representative of x mod 1, with 0 mapped to 1
inline Rat frac_level(const Rat& x) {
    Rat f = x - Rat(x.floor());
    return f.num == 0 ? Rat(1) : f;
}
} // namespace detail

// The fractional-degree tower attached to one level: Sym towers of the
// tangent classes at degrees congruent to +-beta v mod 1.
inline BundleExpr level_F_beta(const FixedComponentDatum& c, const Rat& beta) {
    BundleExpr e;
    for (auto& [v, d] : c.tangent) {
        e.sym_tower(detail::frac_level(beta * Rat(v)), Rat(1), Rat(v), d);
        e.sym_tower(detail::frac_level(-beta * Rat(v)), Rat(1), Rat(-v), d);
    }
    return e;
}

// Exterior-algebra companions of the auxiliary bundle. tau_e grades the
// towers by form degree (signed); tau_s takes plain dimensions. The spinor
// factor of the trivially-acted part contributes 2^{p'} for tau_s and
// collapses the tau_e character when p' > 0.
// `graded_exterior_tower` is the grading-checked entry point.
inline BundleExpr level_F1V(const FixedComponentDatum& c, bool tau_e) {
    int sgn = tau_e ? -1 : +1;
    BundleExpr e;
    if (tau_e) {
        if (c.v0_rank > 0) e.scale(0);
    } else {
        Int two_p = 1;
        for (long long i = 0; i < c.v0_rank / 2; ++i) two_p *= 2;
        e.scale(two_p);
    }
    e.prefactor(Rat(0), Rat(-c.dprime_v(), 2));
    for (auto& [u, d] : c.vbundle) {
        e.lambda_tower(Rat(1), Rat(1), Rat(u), d, sgn);
        e.lambda_tower(Rat(1), Rat(1), Rat(-u), d, sgn);
        e.lambda_single(Rat(0), Rat(u), d, sgn);
    }
    if (c.v0_rank > 0) e.lambda_tower(Rat(1), Rat(1), Rat(0), c.v0_rank, sgn);
    return e;
}

inline BundleExpr level_F2V(const FixedComponentDatum& c, bool tau_e) {
    int sgn = tau_e ? -1 : +1;
    BundleExpr e;
    for (auto& [u, d] : c.vbundle) {
        e.lambda_tower(Rat(1, 2), Rat(1), Rat(u), d, sgn);
        e.lambda_tower(Rat(1, 2), Rat(1), Rat(-u), d, sgn);
    }
    if (c.v0_rank > 0) e.lambda_tower(Rat(1, 2), Rat(1), Rat(0), c.v0_rank, sgn);
    return e;
}

// Grading-checked entry point for the exterior companions: tau_s is the
// plain evaluation, tau_e the signed one; expressions without exterior
// structure cannot be graded.
inline BundleExpr graded_exterior_tower(const FixedComponentDatum& c, int i, Grading g) {
    if (g == Grading::TauE && !c.has_v())
        throw invalid_grading("grading requested on an expression without a spinor factor");
    if (i != 1 && i != 2) throw invalid_level("exterior companion index must be 1 or 2");
    return i == 1 ? level_F1V(c, g == Grading::TauE) : level_F2V(c, g == Grading::TauE);
}

// Level forms of the exterior companions (degrees congruent to +-beta u
// mod 1, the trivially-acted part at integral degrees).
inline BundleExpr level_F1V_beta(const FixedComponentDatum& c, const Rat& beta, bool tau_e) {
    int sgn = tau_e ? -1 : +1;
    BundleExpr e;
    for (auto& [u, d] : c.vbundle) {
        e.lambda_tower(detail::frac_level(beta * Rat(u)), Rat(1), Rat(u), d, sgn);
        e.lambda_tower(detail::frac_level(-beta * Rat(u)), Rat(1), Rat(-u), d, sgn);
    }
    if (c.v0_rank > 0) e.lambda_tower(Rat(1), Rat(1), Rat(0), c.v0_rank, sgn);
    return e;
}

inline BundleExpr level_F2V_beta(const FixedComponentDatum& c, const Rat& beta, bool tau_e) {
    int sgn = tau_e ? -1 : +1;
    BundleExpr e;
    for (auto& [u, d] : c.vbundle) {
        e.lambda_tower(detail::frac_level(beta * Rat(u) + Rat(1, 2)), Rat(1), Rat(u), d, sgn);
        e.lambda_tower(detail::frac_level(-beta * Rat(u) + Rat(1, 2)), Rat(1), Rat(-u), d, sgn);
    }
    if (c.v0_rank > 0) e.lambda_tower(Rat(1, 2), Rat(1), Rat(0), c.v0_rank, sgn);
    return e;
}

// --- normal modes -------------------------------------------------------------

// Circle character of the L^2 solution space of the model operator attached
// to a list of nonzero rotation weights. For sign +1 each negative-weight
// line contributes modes k|w| (k >= 0) and each positive-weight line modes
// (k+1)|w|; sign -1 mirrors everything.
inline Character normal_modes(const std::vector<long long>& weights, int sign, long long g_window,
                              long long lattice = 1) {
    for (long long w : weights)
        if (w == 0) throw zero_weight("normal mode weights must be nonzero");
    FactorList f;
    for (long long w : weights) {
        long long aw = std::llabs(w);
        bool pos = (w > 0);
        if (sign < 0) pos = !pos;
        long long dir = (sign > 0) ? aw : -aw;
        if (pos) f.mul_monomial(Rat(0), Rat(dir));
        f.mul_factor(Rat(0), Rat(dir), +1, -1);
    }
    auto s = f.render(sign > 0 ? Region::AtZero : Region::AtInfinity, 1, lattice,
                      Box{0, 0, -g_window, g_window});
    return s.extract_coefficient(0LL);
}

} // namespace lefk
