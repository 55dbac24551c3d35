#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lefk/character.hpp"

namespace lefk {

using json = nlohmann::json;

// Weight decomposition at one isolated fixed component. All tangent and
// auxiliary weights are stored positive (conjugating where needed); the
// residual choice of complex structure is carried by orientation_sign.
struct FixedComponentDatum {
    std::string name;
    std::map<long long, long long> tangent; // v -> dim N_v, v > 0
    int orientation_sign{+1};
    std::map<long long, long long> vbundle; // u -> dim V_u, u > 0
    long long v0_rank{0};                   // dim V_0^R (even)
    Character w_char{Character::one(1)};    // restriction of the twist bundle W (integer weights)
    std::optional<long long> l_c;           // circle weight on the auxiliary line of a spin-c datum
    int o_n_half{+1}, o_v_half{+1};         // orientation choices for the half-class real pieces

    bool has_v() const { return !vbundle.empty() || v0_rank > 0; }

    long long dim_n() const {
        long long s = 0;
        for (auto& [v, d] : tangent) s += d;
        return s;
    }
    long long dim_v_rotating() const {
        long long s = 0;
        for (auto& [u, e] : vbundle) s += e;
        return s;
    }
    long long dprime_n() const {
        long long s = 0;
        for (auto& [v, d] : tangent) s += v * d;
        return s;
    }
    long long e_n() const {
        long long s = 0;
        for (auto& [v, d] : tangent) s += v * v * d;
        return s;
    }
    long long dprime_v() const {
        long long s = 0;
        for (auto& [u, e] : vbundle) s += u * e;
        return s;
    }
    long long e_v() const {
        long long s = 0;
        for (auto& [u, e] : vbundle) s += u * u * e;
        return s;
    }
    // (e(V) - e(N)) / 2
    Rat e_constant() const { return Rat(e_v() - e_n(), 2); }

    long long max_weight() const {
        long long m = 0;
        if (!tangent.empty()) m = std::max(m, tangent.rbegin()->first);
        if (!vbundle.empty()) m = std::max(m, vbundle.rbegin()->first);
        return m;
    }
};

struct ManifoldDatum {
    std::string name;
    long long fiber_dim{0};
    std::optional<Rat> declared_e;
    std::vector<FixedComponentDatum> components;

    long long max_weight() const {
        long long m = 1;
        for (const auto& c : components) m = std::max(m, c.max_weight());
        return m;
    }

    // Union of tangent weights over all components (the global weight set J).
    std::vector<long long> weight_set() const {
        std::vector<long long> ws;
        for (const auto& c : components)
            for (auto& [v, d] : c.tangent)
                if (d > 0 && std::find(ws.begin(), ws.end(), v) == ws.end()) ws.push_back(v);
        std::sort(ws.begin(), ws.end());
        return ws;
    }

    void validate() const {
        if (fiber_dim < 0 || fiber_dim % 2 != 0)
            throw invalid_datum(name + ": fiber_dim must be a nonnegative even integer");
        for (const auto& c : components) {
            for (auto& [v, d] : c.tangent) {
                if (v <= 0)
                    throw invalid_datum(name + "/" + c.name + ": tangent weights must be positive");
                if (d <= 0)
                    throw invalid_datum(name + "/" + c.name + ": tangent multiplicities must be positive");
            }
            for (auto& [u, e] : c.vbundle)
                if (u <= 0 || e <= 0)
                    throw invalid_datum(name + "/" + c.name + ": auxiliary weights must be positive");
            if (c.v0_rank < 0 || c.v0_rank % 2 != 0)
                throw invalid_datum(name + "/" + c.name + ": v0_rank must be even and nonnegative");
            if (c.dim_n() != fiber_dim / 2)
                throw invalid_datum(name + "/" + c.name +
                                    ": sum of tangent multiplicities must equal fiber_dim/2 "
                                    "(isolated fixed points only)");
            if (c.orientation_sign != 1 && c.orientation_sign != -1)
                throw invalid_datum(name + "/" + c.name + ": orientation_sign must be +-1");
        }
    }
};

// --- JSON (canonical datum schema) ---------------------------------------

inline json character_to_json(const Character& c) {
    json terms = json::object();
    for (const auto& [e, a] : c.terms()) {
        Rat r(e, c.lattice());
        terms[r.str()] = a.str();
    }
    return terms;
}

inline json datum_to_json(const ManifoldDatum& m) {
    json j;
    j["name"] = m.name;
    j["fiber_dim"] = m.fiber_dim;
    if (m.declared_e) j["declared_e"] = m.declared_e->str();
    j["components"] = json::array();
    for (const auto& c : m.components) {
        json jc;
        jc["name"] = c.name;
        json tw = json::array();
        for (auto& [v, d] : c.tangent)
            for (long long i = 0; i < d; ++i) tw.push_back(v);
        jc["tangent_weights"] = tw;
        jc["orientation_sign"] = c.orientation_sign;
        if (!c.vbundle.empty()) {
            json vw = json::array();
            for (auto& [u, e] : c.vbundle)
                for (long long i = 0; i < e; ++i) vw.push_back(u);
            jc["v_weights"] = vw;
        }
        if (c.v0_rank > 0) jc["v0_rank"] = c.v0_rank;
        if (!c.w_char.is_zero() && c.w_char != Character::one(c.w_char.lattice())) {
            json wc = json::object();
            for (const auto& [e, a] : c.w_char.terms()) wc[std::to_string(e)] = (long long)a;
            jc["w_character"] = wc;
        }
        if (c.l_c) jc["l_c"] = *c.l_c;
        j["components"].push_back(jc);
    }
    return j;
}

inline Rat parse_rat(const std::string& s, const std::string& path) {
    try {
        auto slash = s.find('/');
        if (slash == std::string::npos) return Rat(std::stoll(s));
        return Rat(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
    } catch (const std::exception&) {
        throw invalid_datum(path + ": malformed rational '" + s + "'");
    }
}

inline ManifoldDatum datum_from_json(const json& j) {
    ManifoldDatum m;
    auto need = [&](const json& o, const char* key, const std::string& path) -> const json& {
        if (!o.contains(key)) throw invalid_datum(path + "/" + key + ": missing");
        return o.at(key);
    };
    m.name = need(j, "name", "").get<std::string>();
    m.fiber_dim = need(j, "fiber_dim", "").get<long long>();
    if (j.contains("declared_e")) m.declared_e = parse_rat(j["declared_e"].get<std::string>(), "/declared_e");
    const json& comps = need(j, "components", "");
    if (!comps.is_array()) throw invalid_datum("/components: expected array");
    int idx = 0;
    for (const auto& jc : comps) {
        std::string path = "/components/" + std::to_string(idx++);
        FixedComponentDatum c;
        c.name = jc.contains("name") ? jc["name"].get<std::string>() : ("pt" + std::to_string(idx));
        for (const auto& v : need(jc, "tangent_weights", path)) c.tangent[v.get<long long>()] += 1;
        c.orientation_sign = need(jc, "orientation_sign", path).get<int>();
        if (jc.contains("v_weights"))
            for (const auto& u : jc["v_weights"]) c.vbundle[u.get<long long>()] += 1;
        if (jc.contains("v0_rank")) c.v0_rank = jc["v0_rank"].get<long long>();
        Character w(1);
        if (jc.contains("w_character")) {
            for (auto it = jc["w_character"].begin(); it != jc["w_character"].end(); ++it) {
                long long e;
                try {
                    e = std::stoll(it.key());
                } catch (const std::exception&) {
                    throw invalid_datum(path + "/w_character: non-integer weight key '" + it.key() + "'");
                }
                if (it.value().is_string())
                    w.add_term(e, Int(it.value().get<std::string>()));
                else
                    w.add_term(e, Int(it.value().get<long long>()));
            }
        } else {
            w = Character::one(1);
        }
        c.w_char = w;
        if (jc.contains("l_c")) c.l_c = jc["l_c"].get<long long>();
        if (jc.contains("o_n_half")) c.o_n_half = jc["o_n_half"].get<int>();
        if (jc.contains("o_v_half")) c.o_v_half = jc["o_v_half"].get<int>();
        m.components.push_back(std::move(c));
    }
    m.validate();
    return m;
}

// Session lattices. The g-lattice is fixed at half-integers; the q-lattice
// is twice the lcm of the weights in play so that half-integer tower degrees
// and all level fractions p_j/n_j stay representable.
inline long long default_q_lattice(const ManifoldDatum& m) {
    long long l = 1;
    for (const auto& c : m.components) {
        for (auto& [v, d] : c.tangent) l = std::lcm(l, v);
        for (auto& [u, e] : c.vbundle) l = std::lcm(l, u);
    }
    return 2 * l;
}

inline constexpr long long default_g_lattice = 2;

} // namespace lefk
