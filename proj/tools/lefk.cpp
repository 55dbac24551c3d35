// Command-line front end: catalog access, index tables, verification runs.

#include <iostream>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lefk/catalog.hpp"
#include "lefk/report.hpp"
#include "lefk/shifts.hpp"
#include "lefk/toml_lite.hpp"

using namespace lefk;

namespace {

struct RunConfig {
    std::optional<Rat> q_max;
    std::optional<long long> g_window;
    std::string format{"table"};
    long long seed{0};
    std::vector<std::string> checks;
    std::vector<std::string> ops;

    void load(const TomlLite& t) {
        if (t.has("qmax")) q_max = parse_rat(t.get_string("qmax"), "config qmax");
        if (t.has("gwindow")) g_window = t.get_int("gwindow");
        if (t.has("format")) format = t.get_string("format");
        if (t.has("seed")) seed = t.get_int("seed");
        if (t.has("checks")) checks = t.get_array("checks");
        if (t.has("ops")) ops = t.get_array("ops");
    }
};

ManifoldDatum resolve_datum(const std::string& name) {
    if (auto m = catalog_get(name)) return *m;
    std::ifstream in(name);
    if (!in) throw invalid_datum("no catalog entry or readable file named '" + name + "'");
    json j;
    try {
        in >> j;
    } catch (const std::exception& ex) {
        throw invalid_datum(std::string("malformed JSON: ") + ex.what());
    }
    return datum_from_json(j);
}

EngineConfig engine_config(const ManifoldDatum& m, const RunConfig& rc) {
    EngineConfig cfg = EngineConfig::for_datum(m, rc.q_max.value_or(Rat(3)),
                                               rc.g_window.value_or(40));
    return cfg;
}

std::vector<OperatorSpec> parse_ops(const std::vector<std::string>& names) {
    std::vector<OperatorSpec> out;
    for (const auto& n : names) {
        auto op = OperatorSpec::parse(n);
        if (!op) throw invalid_datum("unknown operator '" + n + "'");
        out.push_back(*op);
    }
    return out;
}

int cmd_catalog(const std::string& action, const std::string& name) {
    if (action == "list") {
        for (const auto& e : catalog())
            std::cout << e.name << (e.corrupt ? "  [negative control]  " : "  ") << e.description
                      << "\n";
        return 0;
    }
    if (action == "emit") {
        auto m = catalog_get(name);
        if (!m) {
            std::cerr << "error: no catalog entry '" << name << "'\n";
            return 2;
        }
        std::cout << datum_to_json(*m).dump(2) << "\n";
        return 0;
    }
    std::cerr << "error: catalog action must be 'list' or 'emit'\n";
    return 2;
}

int cmd_index(const std::string& datum_name, const std::string& op_name, const RunConfig& rc) {
    ManifoldDatum m = resolve_datum(datum_name);
    auto op = OperatorSpec::parse(op_name);
    if (!op) throw invalid_datum("unknown operator '" + op_name + "'");
    EngineConfig cfg = engine_config(m, rc);
    IndexReport rep = make_index_report(m, *op, cfg);
    if (rc.format == "json") {
        json j = index_report_json(rep);
        j["seed"] = rc.seed;
        std::cout << j.dump(2) << "\n";
    } else if (rc.format == "csv") {
        std::cout << index_report_csv(rep);
    } else {
        std::cout << index_report_table(rep);
    }
    return rep.result.tail.ok ? 0 : 1;
}

void default_ops_for(const std::string& check, const ManifoldDatum& m,
                     std::vector<OperatorSpec>& ops) {
    auto add = [&](const char* n) { ops.push_back(*OperatorSpec::parse(n)); };
    if (check == "dual_expansion") {
        add("dirac");
        add("ds");
        add("ds-theta-prime");
        add("dirac-theta-q");
        add("dirac-theta-minus-q");
        if (m.components.size() > 0 && m.components[0].has_v()) {
            add("dirac-r1");
            add("dirac-r2");
            add("dirac-r3");
            add("dirac-r4");
        }
    } else if (check == "rigidity") {
        add("ds-theta-prime");
        add("dirac-theta-q");
        add("dirac-theta-minus-q");
    } else if (check == "vanishing") {
        add("dirac");
    } else if (check == "translation") {
        add("dirac-sym-tower");
    }
}

int cmd_check(const std::string& datum_name, const RunConfig& rc) {
    ManifoldDatum m = resolve_datum(datum_name);
    EngineConfig cfg = engine_config(m, rc);
    std::vector<std::string> checks = rc.checks;
    if (checks.empty())
        checks = {"anomaly", "constancy", "dual_expansion", "rigidity", "vanishing", "translation"};

    std::vector<Verdict> verdicts;
    HypothesisReport hyp = hypothesis_report(m);
    for (const auto& check : checks) {
        if (check == "anomaly") {
            Verdict v{"anomaly", "datum=" + m.name, hyp.zn_partition_ok && hyp.even_dim_ok, "", {}};
            for (const auto& n : hyp.notes) v.note += (v.note.empty() ? "" : "; ") + n;
            verdicts.push_back(v);
        } else if (check == "constancy") {
            verdicts.push_back(Verdict{"constancy", "datum=" + m.name,
                                       hyp.lemma44_ok && hyp.lemma46_ok, "", {}});
        } else if (check == "dual_expansion" || check == "rigidity" || check == "vanishing" ||
                   check == "translation") {
            std::vector<OperatorSpec> ops;
            if (!rc.ops.empty()) ops = parse_ops(rc.ops);
            else default_ops_for(check, m, ops);
            for (const auto& op : ops) {
                if (check == "dual_expansion") verdicts.push_back(dual_expansion_check(m, op, cfg));
                if (check == "rigidity") verdicts.push_back(rigidity_check(m, op, cfg));
                if (check == "vanishing") verdicts.push_back(vanishing_check(m, op, cfg));
                if (check == "translation")
                    for (long long p : {1LL, 2LL}) verdicts.push_back(translation_check(m, op, p, cfg));
            }
        } else if (check == "recursion") {
            RecursionOptions opt;
            opt.q_max = std::min(rc.q_max.value_or(Rat(2)), Rat(2));
            for (int i : {1, 2, 3, 4})
                for (long long p : {1LL, 2LL}) verdicts.push_back(recursion_check(m, i, p, opt));
        } else if (check == "prop31") {
            PropCheckOptions opt;
            for (const auto& c : m.components)
                for (long long p : {1LL, 2LL})
                    for (int i : {1, 2}) verdicts.push_back(check_prop_3_1(c, p, i, opt));
        } else if (check == "prop41") {
            PropCheckOptions opt;
            auto J = m.weight_set();
            if (!J.empty()) {
                auto levels = phi_levels(J);
                for (const auto& c : m.components)
                    for (long long p : {1LL, 2LL})
                        for (long long j = 1; j <= (long long)levels.size(); ++j) {
                            if (levels[j - 1].n > 3) continue;
                            for (int i : {1, 2})
                                verdicts.push_back(check_prop_4_1(c, p, levels, j, i, opt));
                        }
            }
        } else {
            std::cerr << "error: unknown check '" << check << "'\n";
            return 2;
        }
    }

    bool all_pass = true;
    if (rc.format == "json") {
        json j;
        j["datum"] = m.name;
        j["seed"] = rc.seed;
        j["hypothesis"] = hypothesis_to_json(hyp);
        j["verdicts"] = json::array();
        for (const auto& v : verdicts) {
            j["verdicts"].push_back(verdict_to_json(v));
            all_pass = all_pass && v.pass;
        }
        std::cout << j.dump(2) << "\n";
    } else {
        for (const auto& v : verdicts) {
            std::cout << (v.pass ? "PASS" : "FAIL") << "  " << v.check << "  " << v.params;
            if (!v.note.empty()) std::cout << "  (" << v.note << ")";
            if (!v.pass && v.first_violation)
                std::cout << "  [" << v.first_violation->what << " at q^"
                          << v.first_violation->m.str() << " g^" << v.first_violation->h.str()
                          << ": " << v.first_violation->lhs.str() << " vs "
                          << v.first_violation->rhs.str() << "]";
            std::cout << "\n";
            all_pass = all_pass && v.pass;
        }
    }
    return all_pass ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact circle-equivariant index tables and identity checks "
                 "for isolated-fixed-point data"};
    app.require_subcommand(1);

    std::string config_file;
    app.add_option("--config", config_file, "TOML config file (flags win over file values)");

    auto* cat = app.add_subcommand("catalog", "list built-in data or emit one as JSON");
    std::string cat_action{"list"}, cat_name;
    cat->add_option("action", cat_action, "list | emit");
    cat->add_option("name", cat_name, "catalog entry name (for emit)");

    auto* idx = app.add_subcommand("index", "print the bigraded index table of an operator");
    std::string idx_datum, idx_op{"dirac"};
    std::string idx_qmax, idx_format;
    long long idx_gwindow = -1, idx_seed = -1;
    idx->add_option("datum", idx_datum, "catalog name or datum JSON file")->required();
    idx->add_option("--op", idx_op, "operator name (see README)");
    idx->add_option("--qmax", idx_qmax, "q truncation (integer or rational like 7/2)");
    idx->add_option("--gwindow", idx_gwindow, "symmetric g window in half-integer units");
    idx->add_option("--format", idx_format, "table | json | csv");
    idx->add_option("--seed", idx_seed, "seed recorded in reports");

    auto* chk = app.add_subcommand("check", "run verification checks; exit 0 iff all pass");
    std::string chk_datum, chk_checks, chk_op, chk_qmax, chk_format;
    long long chk_gwindow = -1, chk_seed = -1;
    chk->add_option("datum", chk_datum, "catalog name or datum JSON file")->required();
    chk->add_option("--checks", chk_checks,
                    "comma list: dual_expansion,rigidity,vanishing,translation,recursion,"
                    "prop31,prop41,anomaly,constancy");
    chk->add_option("--op", chk_op, "operator (comma list allowed) for operator-bound checks");
    chk->add_option("--qmax", chk_qmax, "q truncation");
    chk->add_option("--gwindow", chk_gwindow, "symmetric g window in half-integer units");
    chk->add_option("--format", chk_format, "table | json");
    chk->add_option("--seed", chk_seed, "seed recorded in reports");

    CLI11_PARSE(app, argc, argv);

    try {
        RunConfig rc;
        if (!config_file.empty()) rc.load(TomlLite::parse_file(config_file));

        if (cat->parsed()) return cmd_catalog(cat_action, cat_name);

        auto split = [](const std::string& s) {
            std::vector<std::string> out;
            std::string item;
            std::istringstream in(s);
            while (std::getline(in, item, ','))
                if (!item.empty()) out.push_back(item);
            return out;
        };

        if (idx->parsed()) {
            if (!idx_qmax.empty()) rc.q_max = parse_rat(idx_qmax, "--qmax");
            if (idx_gwindow >= 0) rc.g_window = idx_gwindow;
            if (!idx_format.empty()) rc.format = idx_format;
            if (idx_seed >= 0) rc.seed = idx_seed;
            return cmd_index(idx_datum, idx_op, rc);
        }
        if (chk->parsed()) {
            if (!chk_qmax.empty()) rc.q_max = parse_rat(chk_qmax, "--qmax");
            if (chk_gwindow >= 0) rc.g_window = chk_gwindow;
            if (!chk_format.empty()) rc.format = chk_format;
            if (chk_seed >= 0) rc.seed = chk_seed;
            if (!chk_checks.empty()) rc.checks = split(chk_checks);
            if (!chk_op.empty()) rc.ops = split(chk_op);
            return cmd_check(chk_datum, rc);
        }
    } catch (const invalid_datum& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 2;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 2;
    }
    return 2;
}
