#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lefk/levels.hpp"

namespace lefk {

// ---------------------------------------------------------------------------
// Validation of the standing hypotheses from weight data: parities, the
// anomaly constant e, cyclic decomposition consistency and the constancy
// statements. Gatekeeper for which theorem checks a datum may legitimately
// exercise. Failures here never abort a run; they disable checks whose
// hypotheses fail and annotate the report.
// ---------------------------------------------------------------------------

struct HypothesisReport {
    std::vector<bool> parity_n_per_comp; // d'(N) even
    std::vector<bool> parity_v_per_comp; // d'(V) even
    bool parity_n{true};
    bool parity_v{true};
    std::vector<Rat> e_values;
    bool e_constant{true};
    std::optional<Rat> e; // defined iff e_constant
    bool e_integral{false};
    bool matches_declared_e{true};
    std::vector<std::string> zn_tables; // per (n, component) signatures
    bool zn_partition_ok{true};
    bool even_dim_ok{true};
    bool lemma44_ok{true};
    bool lemma46_ok{true};
    std::vector<std::string> notes;
};

inline std::pair<bool, bool> check_parities(const ManifoldDatum& m) {
    bool pn = true, pv = true;
    for (const auto& c : m.components) {
        pn = pn && (c.dprime_n() % 2 == 0);
        pv = pv && (c.dprime_v() % 2 == 0);
    }
    return {pn, pv};
}

// (e(V) - e(N))/2 per component; the constant e exists iff all agree.
inline void compute_e(const ManifoldDatum& m, HypothesisReport& r) {
    r.e_values.clear();
    for (const auto& c : m.components) r.e_values.push_back(c.e_constant());
    r.e_constant = true;
    for (const auto& v : r.e_values)
        if (v != r.e_values.front()) r.e_constant = false;
    if (!m.components.empty() && r.e_constant) {
        r.e = r.e_values.front();
        r.e_integral = r.e->is_integer();
        if (m.declared_e && *m.declared_e != *r.e) r.matches_declared_e = false;
    } else {
        r.e = std::nullopt;
        r.e_integral = false;
        if (m.declared_e) r.matches_declared_e = false;
    }
}

// Partition invariant of the cyclic tables: every weight line lands in
// exactly one block, so class dimensions add back up.
inline bool zn_partition_ok(const FixedComponentDatum& c, const ZnTable& t) {
    long long n_total = t.n_fixed_cdim + t.n_half_cdim;
    for (auto& [k, d] : t.n_class_dim) n_total += d;
    long long v_total = t.v_fixed_cdim + t.v_half_cdim;
    for (auto& [k, d] : t.v_class_dim) v_total += d;
    return n_total == c.dim_n() && v_total == c.dim_v_rotating();
}

// Even-dimension consequences of the cyclic decomposition at the weight
// level: the fixed and half-class real pieces all have even real dimension.
// Complex weight data satisfies this identically; kept as a loud invariant.
inline bool zn_even_dims_ok(const ZnTable& t) {
    return (t.v0_real % 2 == 0) && ((2 * t.n_half_cdim) % 2 == 0) && ((2 * t.v_half_cdim) % 2 == 0);
}

// Constancy verdicts at one level: components are grouped by their cyclic
// table signature (the stand-in for membership in one fixed-set component of
// the order-n subgroup on isolated catalogs); within a group the epsilon
// offsets and the parities d'(beta, N) + mu_i must not vary.
inline std::pair<bool, bool> constancy_checks(const ManifoldDatum& m, long long p,
                                              const PhiLevel& lvl) {
    std::map<std::string, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < m.components.size(); ++i)
        groups[zn_decompose(m.components[i], lvl.n).signature()].push_back(i);
    bool l44 = true, l46 = true;
    for (const auto& [sig, idxs] : groups) {
        EpsilonPair e0;
        MuSigns mu0;
        long long d0 = 0;
        for (std::size_t j = 0; j < idxs.size(); ++j) {
            const auto& c = m.components[idxs[j]];
            EpsilonPair e = epsilons(c, p, lvl.beta);
            MuSigns mu = mu_signs(c, lvl);
            long long dl = level_constants(c, p, lvl.beta).dprime_level;
            if (j == 0) {
                e0 = e;
                mu0 = mu;
                d0 = dl;
            } else {
                if (e.eps1 != e0.eps1 || e.eps2 != e0.eps2) l44 = false;
                if (((dl + mu.mu1) & 1) != ((d0 + mu0.mu1) & 1) ||
                    ((dl + mu.mu2) & 1) != ((d0 + mu0.mu2) & 1) ||
                    ((dl + mu.mu3) & 1) != ((d0 + mu0.mu3) & 1))
                    l46 = false;
            }
        }
    }
    return {l44, l46};
}

// Full gatekeeper pass over a datum: parities, anomaly constant, cyclic
// tables for every level denominator in play, constancy for p in {1, 2}.
inline HypothesisReport hypothesis_report(const ManifoldDatum& m) {
    HypothesisReport r;
    for (const auto& c : m.components) {
        r.parity_n_per_comp.push_back(c.dprime_n() % 2 == 0);
        r.parity_v_per_comp.push_back(c.dprime_v() % 2 == 0);
    }
    auto [pn, pv] = check_parities(m);
    r.parity_n = pn;
    r.parity_v = pv;
    if (!pn)
        r.notes.push_back("tangent weight sum odd: group weights live on the half-integer "
                          "lattice (double-cover lift)");
    compute_e(m, r);
    if (r.e && !r.e_integral)
        r.notes.push_back("anomaly constant e = " + r.e->str() +
                          " is not integral; translation checks disabled");
    if (!r.e_constant) r.notes.push_back("anomaly constant varies across components");
    if (!r.matches_declared_e) r.notes.push_back("declared_e does not match computed value");

    auto J = m.weight_set();
    if (!J.empty()) {
        for (const auto& lvl : phi_levels(J)) {
            for (const auto& c : m.components) {
                ZnTable t = zn_decompose(c, lvl.n);
                r.zn_tables.push_back(c.name + ":" + t.signature());
                r.zn_partition_ok = r.zn_partition_ok && zn_partition_ok(c, t);
                r.even_dim_ok = r.even_dim_ok && zn_even_dims_ok(t);
            }
            for (long long p : {1LL, 2LL}) {
                auto [l44, l46] = constancy_checks(m, p, lvl);
                r.lemma44_ok = r.lemma44_ok && l44;
                r.lemma46_ok = r.lemma46_ok && l46;
            }
        }
    }
    return r;
}

} // namespace lefk
