#pragma once

#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "lefk/anomaly.hpp"
#include "lefk/localization.hpp"

namespace lefk {

// ---------------------------------------------------------------------------
// Canonical serialization and report assembly. Output ordering is always the
// canonical (q, g) term order, so identical inputs produce identical bytes.
// ---------------------------------------------------------------------------

// {"lattice": D, "terms": [[num_q, num_g, "coeff"], ...]} on a common lattice.
inline json series_to_json(const BigradedSeries& s) {
    long long D = std::lcm(s.lattice_q(), s.lattice_g());
    json terms = json::array();
    for (const auto& [k, c] : s.terms()) {
        json t = json::array();
        t.push_back(k.first * (D / s.lattice_q()));
        t.push_back(k.second * (D / s.lattice_g()));
        t.push_back(c.str());
        terms.push_back(t);
    }
    json j;
    j["lattice"] = D;
    j["terms"] = terms;
    return j;
}

inline json char_to_json(const Character& c) {
    json terms = json::array();
    for (const auto& [e, a] : c.terms()) {
        json t = json::array();
        t.push_back(0);
        t.push_back(e);
        t.push_back(a.str());
        terms.push_back(t);
    }
    json j;
    j["lattice"] = c.lattice();
    j["terms"] = terms;
    return j;
}

inline json violation_to_json(const Violation& v) {
    json j;
    j["what"] = v.what;
    j["m"] = v.m.str();
    j["h"] = v.h.str();
    j["lhs"] = v.lhs.str();
    j["rhs"] = v.rhs.str();
    if (v.level) j["j"] = *v.level;
    return j;
}

inline json verdict_to_json(const Verdict& v) {
    json j;
    j["check"] = v.check;
    j["params"] = v.params;
    j["pass"] = v.pass;
    if (!v.note.empty()) j["note"] = v.note;
    if (v.first_violation) j["first_violation"] = violation_to_json(*v.first_violation);
    return j;
}

inline json hypothesis_to_json(const HypothesisReport& r) {
    json j;
    j["parity_N"] = r.parity_n;
    j["parity_V"] = r.parity_v;
    json ev = json::array();
    for (const auto& e : r.e_values) ev.push_back(e.str());
    j["e_values"] = ev;
    j["e_constant"] = r.e_constant;
    if (r.e) j["e"] = r.e->str();
    j["e_integral"] = r.e_integral;
    j["zn_partition_ok"] = r.zn_partition_ok;
    j["even_dim_ok"] = r.even_dim_ok;
    j["lemma44_ok"] = r.lemma44_ok;
    j["lemma46_ok"] = r.lemma46_ok;
    if (!r.notes.empty()) j["notes"] = r.notes;
    return j;
}

inline json tail_to_json(const TailReport& t) {
    json j;
    j["ok"] = t.ok;
    j["band"] = {t.band_lo, t.band_hi};
    if (!t.ok) {
        j["first_violation"] = {{"m", t.first_violation->first.str()},
                                {"h", t.first_violation->second.str()},
                                {"value", t.violation_value.str()}};
    }
    return j;
}

struct IndexReport {
    std::string datum;
    std::string op;
    EngineConfig cfg;
    HypothesisReport hypothesis;
    IndexResult result;
};

inline IndexReport make_index_report(const ManifoldDatum& m, const OperatorSpec& op,
                                     const EngineConfig& cfg) {
    IndexReport r{m.name, op.name(), cfg, hypothesis_report(m), total_index(m, op, cfg)};
    return r;
}

inline json index_report_json(const IndexReport& r) {
    json j;
    j["datum"] = r.datum;
    j["op"] = r.op;
    j["config"] = {{"q_max", r.cfg.q_max.str()},
                   {"g_window", r.cfg.g_window},
                   {"lattice_q", r.cfg.lat_q},
                   {"lattice_g", r.cfg.lat_g}};
    j["hypothesis"] = hypothesis_to_json(r.hypothesis);
    j["tail"] = tail_to_json(r.result.tail);
    json table = json::array();
    for (const auto& [k, c] : r.result.series.terms()) {
        json row = json::array();
        row.push_back(Rat(k.first, r.cfg.lat_q).str());
        row.push_back(Rat(k.second, r.cfg.lat_g).str());
        row.push_back(c.str());
        table.push_back(row);
    }
    j["table"] = table;
    return j;
}

// columns m, h, coefficient
inline std::string index_report_csv(const IndexReport& r) {
    std::ostringstream os;
    os << "m,h,coefficient\n";
    for (const auto& [k, c] : r.result.series.terms())
        os << Rat(k.first, r.cfg.lat_q).str() << "," << Rat(k.second, r.cfg.lat_g).str() << ","
           << c.str() << "\n";
    return os.str();
}

inline std::string index_report_table(const IndexReport& r) {
    std::ostringstream os;
    os << "datum: " << r.datum << "\n";
    os << "operator: " << r.op << "\n";
    os << "q_max: " << r.cfg.q_max.str() << "  g_window: " << r.cfg.g_window << "/"
       << r.cfg.lat_g << "\n";
    if (r.hypothesis.e)
        os << "anomaly constant e = " << r.hypothesis.e->str()
           << (r.hypothesis.e_integral ? "" : " (non-integral)") << "\n";
    else
        os << "anomaly constant: not constant across components\n";
    for (const auto& n : r.hypothesis.notes) os << "note: " << n << "\n";
    os << "tail: " << r.result.tail.describe() << "\n";
    if (r.result.series.stored_zero()) {
        os << "index table: identically zero on the window\n";
        return os.str();
    }
    os << "  m        h        coefficient\n";
    for (const auto& [k, c] : r.result.series.terms()) {
        std::string ms = Rat(k.first, r.cfg.lat_q).str();
        std::string hs = Rat(k.second, r.cfg.lat_g).str();
        os << "  " << ms << std::string(ms.size() < 9 ? 9 - ms.size() : 1, ' ') << hs
           << std::string(hs.size() < 9 ? 9 - hs.size() : 1, ' ') << c.str() << "\n";
    }
    return os.str();
}

} // namespace lefk
