#pragma once

#include <functional>
#include <string>
#include <vector>

#include "lefk/datum.hpp"

namespace lefk {

// ---------------------------------------------------------------------------
// Built-in fixed-point data: even spheres under linear rotations, products of
// spheres, auxiliary-bundle dressings, and deliberately corrupted negative
// controls. Orientation signs are the calibrated data: a linear sphere's two
// poles carry opposite signs once both tangent representations are written
// with positive weights, and signs multiply across product factors.
// ---------------------------------------------------------------------------

struct CatalogEntry {
    std::string name;
    std::string description;
    bool corrupt{false}; // negative controls are exempt from admission checks
    std::function<ManifoldDatum()> make;
};

namespace cat_detail {

inline FixedComponentDatum pole(const std::string& name, const std::vector<long long>& weights,
                                int sign) {
    FixedComponentDatum c;
    c.name = name;
    for (long long w : weights) c.tangent[w] += 1;
    c.orientation_sign = sign;
    c.w_char = Character::one(1);
    return c;
}

inline ManifoldDatum sphere(const std::string& name, const std::vector<long long>& weights) {
    ManifoldDatum m;
    m.name = name;
    m.fiber_dim = 2 * (long long)weights.size();
    m.components.push_back(pole("north", weights, +1));
    m.components.push_back(pole("south", weights, -1));
    return m;
}

// W restricted to the two poles of a sphere carries opposite weights for the
// rotation-linearized line bundle of degree-type k.
inline ManifoldDatum sphere_line(const std::string& name, const std::vector<long long>& weights,
                                 long long k) {
    ManifoldDatum m = sphere(name, weights);
    Character wp(1), wm(1);
    wp.add_term(k, 1);
    wm.add_term(-k, 1);
    m.components[0].w_char = wp;
    m.components[1].w_char = wm;
    return m;
}

inline ManifoldDatum product(const std::string& name, const ManifoldDatum& a,
                             const ManifoldDatum& b) {
    ManifoldDatum m;
    m.name = name;
    m.fiber_dim = a.fiber_dim + b.fiber_dim;
    for (const auto& ca : a.components) {
        for (const auto& cb : b.components) {
            FixedComponentDatum c;
            c.name = ca.name + "x" + cb.name;
            c.tangent = ca.tangent;
            for (auto& [v, d] : cb.tangent) c.tangent[v] += d;
            c.orientation_sign = ca.orientation_sign * cb.orientation_sign;
            c.w_char = ca.w_char.rescaled(1) * cb.w_char.rescaled(1);
            m.components.push_back(std::move(c));
        }
    }
    return m;
}

// Dress a datum with the auxiliary bundle V = TX (legitimately spin).
inline ManifoldDatum with_v_tangent(ManifoldDatum m, const std::string& name) {
    m.name = name;
    for (auto& c : m.components) c.vbundle = c.tangent;
    return m;
}

// Spin-c dressing: V = TX and the trivial auxiliary line (l_c = 0).
inline ManifoldDatum with_spin_c(ManifoldDatum m, const std::string& name, long long l_c) {
    m = with_v_tangent(std::move(m), name);
    for (auto& c : m.components) c.l_c = l_c;
    return m;
}

} // namespace cat_detail

inline const std::vector<CatalogEntry>& catalog() {
    using namespace cat_detail;
    static const std::vector<CatalogEntry> entries = {
        {"S2-w1", "two-sphere, rotation weight 1", false,
         [] { return sphere("S2-w1", {1}); }},
        {"S2-w2", "two-sphere, rotation weight 2", false,
         [] { return sphere("S2-w2", {2}); }},
        {"S4-w11", "four-sphere, rotation weights (1,1)", false,
         [] { return sphere("S4-w11", {1, 1}); }},
        {"S4-w12", "four-sphere, rotation weights (1,2)", false,
         [] { return sphere("S4-w12", {1, 2}); }},
        {"S6-w111", "six-sphere, rotation weights (1,1,1)", false,
         [] { return sphere("S6-w111", {1, 1, 1}); }},
        {"S2xS2-w1w1", "product of two weight-1 two-spheres (four fixed points)", false,
         [] {
             return product("S2xS2-w1w1", sphere("a", {1}), sphere("b", {1}));
         }},
        {"S2-w1-L1", "weight-1 two-sphere twisted by the degree-lift line (weights +-1)", false,
         [] { return sphere_line("S2-w1-L1", {1}, 1); }},
        {"S2-w2-L1", "weight-2 two-sphere twisted by the degree-lift line (weights +-1)", false,
         [] { return sphere_line("S2-w2-L1", {2}, 1); }},
        {"S2-w1-vt", "weight-1 two-sphere dressed with V = TX", false,
         [] { return with_v_tangent(sphere("S2-w1-vt", {1}), "S2-w1-vt"); }},
        {"S2-w2-vt", "weight-2 two-sphere dressed with V = TX", false,
         [] { return with_v_tangent(sphere("S2-w2-vt", {2}), "S2-w2-vt"); }},
        {"S4-w11-vt", "four-sphere (1,1) dressed with V = TX", false,
         [] { return with_v_tangent(sphere("S4-w11-vt", {1, 1}), "S4-w11-vt"); }},
        {"S2-w2-L1-vt", "weight-2 two-sphere, degree-lift twist and V = TX", false,
         [] { return with_v_tangent(sphere_line("S2-w2-L1-vt", {2}, 1), "S2-w2-L1-vt"); }},
        {"S2-w1-spinc", "weight-1 two-sphere as a spin-c datum (V = TX, l_c = 0)", false,
         [] { return with_spin_c(sphere("S2-w1-spinc", {1}), "S2-w1-spinc", 0); }},
        {"S2-w1-corrupt", "negative control: mismatched pole weights", true,
         [] {
             ManifoldDatum m = sphere("S2-w1-corrupt", {1});
             m.components[1].tangent.clear();
             m.components[1].tangent[2] = 1;
             return m;
         }},
        {"S4-w11-corrupt", "negative control: one tangent weight corrupted at one pole", true,
         [] {
             ManifoldDatum m = sphere("S4-w11-corrupt", {1, 1});
             m.components[1].tangent.clear();
             m.components[1].tangent[1] = 1;
             m.components[1].tangent[3] = 1;
             return m;
         }},
    };
    return entries;
}

inline std::optional<ManifoldDatum> catalog_get(const std::string& name) {
    for (const auto& e : catalog())
        if (e.name == name) {
            ManifoldDatum m = e.make();
            m.validate();
            return m;
        }
    return std::nullopt;
}

} // namespace lefk
