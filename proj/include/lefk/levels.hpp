#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "lefk/datum.hpp"

namespace lefk {

// ---------------------------------------------------------------------------
// The rational levels beta_j = p_j/n_j in ]0,1] attached to a weight set, the
// locally constant level constants, and the cyclic decomposition tables of a
// component. Everything here is exact integer/rational arithmetic.
// ---------------------------------------------------------------------------

struct PhiLevel {
    Rat beta;    // p/n in ]0,1]
    long long p; // coprime numerator
    long long n; // denominator
};

// All beta in ]0,1] whose multiple by some weight in J is integral,
// ascending. The last level is always 1.
inline std::vector<PhiLevel> phi_levels(const std::vector<long long>& J) {
    if (J.empty()) throw empty_weight_set("phi levels of an empty weight set");
    std::vector<PhiLevel> out;
    for (long long v : J) {
        if (v <= 0) throw empty_weight_set("weight set entries must be positive");
        for (long long p = 1; p <= v; ++p) {
            long long g = std::gcd(p, v);
            PhiLevel lvl{Rat(p, v), p / g, v / g};
            bool dup = false;
            for (const auto& o : out)
                if (o.beta == lvl.beta) { dup = true; break; }
            if (!dup) out.push_back(lvl);
        }
    }
    std::sort(out.begin(), out.end(), [](const PhiLevel& a, const PhiLevel& b) { return a.beta < b.beta; });
    return out;
}

// e(N), d'(N), e(V), d'(V) and (e(V)-e(N))/2 for one component.
struct BaseConstants {
    long long e_n{0}, dprime_n{0}, e_v{0}, dprime_v{0};
    Rat e{0};
};

inline BaseConstants base_constants(const FixedComponentDatum& c) {
    BaseConstants b;
    b.e_n = c.e_n();
    b.dprime_n = c.dprime_n();
    b.e_v = c.e_v();
    b.dprime_v = c.dprime_v();
    b.e = c.e_constant();
    return b;
}

// Level constants at beta = p_j/n_j:
//   e(p, beta, N)  = 1/2 sum_v dim N_v ((p-1)v + [beta v]) ((p-1)v + [beta v] + 1)
//   d'(beta, N)    =     sum_v dim N_v [beta v]
struct LevelConstants {
    long long e_level{0};
    long long dprime_level{0};
};

inline LevelConstants level_constants(const FixedComponentDatum& c, long long p, const Rat& beta) {
    LevelConstants lc;
    Rat acc(0);
    for (auto& [v, d] : c.tangent) {
        long long kappa = (p - 1) * v + (beta * Rat(v)).floor();
        acc = acc + Rat(d) * Rat(kappa) * Rat(kappa + 1);
        lc.dprime_level += d * (beta * Rat(v)).floor();
    }
    acc = acc * Rat(1, 2);
    if (!acc.is_integer()) throw invalid_lattice("level constant e(p,beta,N) is not integral");
    lc.e_level = acc.num;
    return lc;
}

// --- cyclic decomposition tables ---------------------------------------------

// Restriction data of the order-n cyclic subgroup at one component: complex
// dimensions and determinant weights of the residue classes of the tangent
// and auxiliary weights. Classes are labelled by v' in (0, n/2); weight lines
// with v = 0 mod n form the fixed part, lines with v = n/2 mod n (n even)
// form the real half-class.
struct ZnTable {
    long long n{1};
    long long r{0}; // 1 for n even, 0 for n odd
    std::map<long long, long long> n_class_dim, v_class_dim; // v' -> complex dim
    std::map<long long, long long> n_class_det, v_class_det; // v' -> det weight
    long long n_half_cdim{0}, v_half_cdim{0}; // complex dim of the n/2 class
    long long n_fixed_cdim{0}, v_fixed_cdim{0}; // complex dim of the v = 0 mod n classes
    long long v0_real{0}; // real dim of the fixed part of the auxiliary bundle

    std::string signature() const {
        std::ostringstream os;
        os << "n=" << n << ";N[";
        for (auto& [k, d] : n_class_dim) os << k << ":" << d << ",";
        os << "];V[";
        for (auto& [k, d] : v_class_dim) os << k << ":" << d << ",";
        os << "];Nd[";
        for (auto& [k, d] : n_class_det) os << k << ":" << d << ",";
        os << "];Vd[";
        for (auto& [k, d] : v_class_det) os << k << ":" << d << ",";
        os << "];h=" << n_half_cdim << "," << v_half_cdim << ";f=" << n_fixed_cdim << ","
           << v_fixed_cdim << "," << v0_real;
        return os.str();
    }
};

inline ZnTable zn_decompose(const FixedComponentDatum& c, long long n) {
    if (n < 1) throw invalid_level("cyclic order must be >= 1");
    ZnTable t;
    t.n = n;
    t.r = (n % 2 == 0) ? 1 : 0;
    auto classify = [&](const std::map<long long, long long>& lines,
                        std::map<long long, long long>& cls, std::map<long long, long long>& det,
                        long long& half, long long& fixed) {
        for (auto& [v, d] : lines) {
            long long residue = v % n;
            if (residue == 0) {
                fixed += d;
            } else if (2 * residue == n) {
                half += d;
            } else {
                long long label = std::min(residue, n - residue);
                cls[label] += d;
                det[label] += (residue == label) ? v * d : -v * d;
            }
        }
    };
    classify(c.tangent, t.n_class_dim, t.n_class_det, t.n_half_cdim, t.n_fixed_cdim);
    classify(c.vbundle, t.v_class_dim, t.v_class_det, t.v_half_cdim, t.v_fixed_cdim);
    t.v0_real = c.v0_rank + 2 * t.v_fixed_cdim;
    return t;
}

// Orientation comparison exponents: the count of weight lines whose class
// representative sits in (n/2, n), plus the half-class orientation choice.
struct DeltaSigns {
    long long delta_n{0}, delta_v{0}; // mod 2
    long long o_n_half{0}, o_v_half{0};
};

inline DeltaSigns delta_signs(const FixedComponentDatum& c, long long n) {
    DeltaSigns d;
    d.o_n_half = (c.o_n_half < 0) ? 1 : 0;
    d.o_v_half = (c.o_v_half < 0) ? 1 : 0;
    auto count_upper = [&](const std::map<long long, long long>& lines) {
        long long s = 0;
        for (auto& [v, dim] : lines) {
            long long residue = v % n;
            if (residue != 0 && 2 * residue != n && residue > n - residue) s += dim;
        }
        return s;
    };
    d.delta_n = (count_upper(c.tangent) + d.o_n_half) % 2;
    d.delta_v = (count_upper(c.vbundle) + d.o_v_half) % 2;
    return d;
}

// --- conjugation constants of the level shift ---------------------------------

// kappa_v = [beta v] + (p-1) v and its half-shifted companion.
inline long long kappa_of(long long p, const Rat& beta, long long v) {
    return (p - 1) * v + (beta * Rat(v)).floor();
}
inline long long kappa_half_of(long long p, const Rat& beta, long long v) {
    return (p - 1) * v + (beta * Rat(v) + Rat(1, 2)).floor();
}

// The two locally constant offsets of the level shift, from the weight data.
struct EpsilonPair {
    Rat eps1{0}, eps2{0};
};

inline EpsilonPair epsilons(const FixedComponentDatum& c, long long p, const Rat& beta) {
    EpsilonPair e;
    Rat acc1(0), acc2(0);
    auto sv = [&](long long v) { return Rat((p - 1) * v) + beta * Rat(v); };
    for (auto& [v, d] : c.tangent) {
        long long k = kappa_of(p, beta, v);
        Rat term = Rat(k) * Rat(k + 1) - sv(v) * Rat(2 * k + 1);
        acc1 = acc1 + Rat(d) * term;
        acc2 = acc2 + Rat(d) * term;
    }
    for (auto& [u, d] : c.vbundle) {
        long long k = kappa_of(p, beta, u);
        acc1 = acc1 - Rat(d) * (Rat(k) * Rat(k + 1) - sv(u) * Rat(2 * k + 1));
        long long kh = kappa_half_of(p, beta, u);
        acc2 = acc2 - Rat(d) * (Rat(kh) * Rat(kh) - Rat(2) * sv(u) * Rat(kh));
    }
    e.eps1 = acc1 * Rat(1, 2);
    e.eps2 = acc2 * Rat(1, 2);
    return e;
}

// Closed forms of the same offsets through the cyclic tables; agreement with
// `epsilons` is the constancy statement tested on every datum.
inline EpsilonPair epsilons_closed(const FixedComponentDatum& c, long long p, const PhiLevel& lvl) {
    const long long n = lvl.n, pj = lvl.p;
    ZnTable t = zn_decompose(c, n);
    Rat s = Rat(p - 1) + lvl.beta;
    Rat e1 = s * s * c.e_constant();
    e1 = e1 - Rat(2 * t.n_half_cdim - 2 * t.v_half_cdim, 16);
    auto omega = [&](long long label) { return (pj * label) % n; };
    for (auto& [label, dim] : t.n_class_dim)
        e1 = e1 - Rat(dim) * Rat(omega(label) * (n - omega(label))) / Rat(2 * n * n);
    for (auto& [label, dim] : t.v_class_dim)
        e1 = e1 + Rat(dim) * Rat(omega(label) * (n - omega(label))) / Rat(2 * n * n);

    Rat e2 = e1 - Rat(2 * t.v_half_cdim, 8);
    for (auto& [label, dim] : t.v_class_dim) {
        Rat x = Rat(pj * label, n);
        Rat f = x - Rat(x.floor());
        if (f > Rat(0) && f < Rat(1, 2)) {
            e2 = e2 - Rat(dim) * Rat(omega(label)) / Rat(2 * n);
        } else if (f > Rat(1, 2) && f < Rat(1)) {
            e2 = e2 - Rat(dim) * Rat(n - omega(label)) / Rat(2 * n);
        }
    }
    return EpsilonPair{e1, e2};
}

// Grading conjugation parities of the level shift.
struct MuSigns {
    long long mu1{0}, mu2{0}, mu3{0}; // in Z/2
};

inline MuSigns mu_signs(const FixedComponentDatum& c, const PhiLevel& lvl) {
    DeltaSigns d = delta_signs(c, lvl.n);
    long long s1 = 0, s2 = 0;
    for (auto& [u, dim] : c.vbundle) {
        s1 += (lvl.beta * Rat(u)).floor() * dim;
        s2 += (lvl.beta * Rat(u) + Rat(1, 2)).floor() * dim;
    }
    MuSigns m;
    m.mu1 = ((s1 % 2) + d.delta_n + d.delta_v) % 2;
    m.mu2 = ((s2 % 2) + d.delta_n + d.o_v_half) % 2;
    m.mu3 = d.delta_n % 2;
    return m;
}

} // namespace lefk
