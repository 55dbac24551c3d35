// Acceptance suite: every gate criterion verified at its stated tolerance
// (everything here is exact integer arithmetic, so tolerance is equality),
// one pass/fail line per criterion.

#include <chrono>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <vector>

#include "lefk/catalog.hpp"
#include "lefk/report.hpp"
#include "lefk/shifts.hpp"

using namespace lefk;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void criterion(int n, bool pass, const std::string& what) {
    std::cout << "criterion " << n << ": " << (pass ? "PASS" : "FAIL") << " - " << what
              << std::endl;
    if (!pass) ++failures;
}

ManifoldDatum get(const std::string& name) {
    auto m = catalog_get(name);
    if (!m) throw std::runtime_error("missing catalog entry " + name);
    return *m;
}

const std::vector<std::string> kCoreCatalog = {"S2-w1",   "S2-w2",   "S4-w11",
                                               "S4-w12",  "S6-w111", "S2xS2-w1w1"};

OperatorSpec op_named(const std::string& s) { return *OperatorSpec::parse(s); }

std::mt19937_64 acceptance_rng(long long salt) { return std::mt19937_64(0xACCE5500 + salt); }

FixedComponentDatum random_component(std::mt19937_64& rng, long long wmax, int rankmax,
                                     bool with_v) {
    FixedComponentDatum c;
    c.name = "rnd";
    int nt = 1 + int(rng() % rankmax);
    for (int k = 0; k < nt; ++k) c.tangent[1 + (long long)(rng() % wmax)] += 1;
    if (with_v) {
        int nv = int(rng() % (rankmax + 1));
        for (int k = 0; k < nv; ++k) c.vbundle[1 + (long long)(rng() % wmax)] += 1;
        c.v0_rank = 2 * (rng() % 2);
    }
    return c;
}

ManifoldDatum random_sphere(std::mt19937_64& rng, long long wmax, bool dress_v) {
    int l = 1 + int(rng() % 3);
    std::vector<long long> ws;
    for (int k = 0; k < l; ++k) ws.push_back(1 + (long long)(rng() % wmax));
    ManifoldDatum m;
    m.name = "random-sphere";
    m.fiber_dim = 2 * l;
    for (int s : {+1, -1}) {
        FixedComponentDatum c;
        c.name = s > 0 ? "north" : "south";
        for (long long w : ws) c.tangent[w] += 1;
        c.orientation_sign = s;
        if (dress_v) c.vbundle = c.tangent;
        m.components.push_back(c);
    }
    m.validate();
    return m;
}

} // namespace

int main(int argc, char** argv) {
    std::string src_dir = argc > 1 ? argv[1] : ".";

    // 1: dual-expansion agreement across the catalog under plain, signature
    // and loop-space twists, q_max = 3, g window 40/2, exact; < 10 s.
    {
        auto t0 = Clock::now();
        bool ok = true;
        std::string first;
        for (const auto& name : kCoreCatalog) {
            ManifoldDatum m = get(name);
            EngineConfig cfg = EngineConfig::for_datum(m, Rat(3), 40);
            for (const auto& opn :
                 {"dirac", "ds", "ds-theta-prime", "dirac-theta-q", "dirac-theta-minus-q"}) {
                Verdict v = dual_expansion_check(m, op_named(opn), cfg);
                if (!v.pass && first.empty()) first = name + "/" + opn;
                ok = ok && v.pass;
            }
        }
        double secs = std::chrono::duration<double>(Clock::now() - t0).count();
        std::ostringstream what;
        what << "dual-expansion agreement on the catalog (" << secs << " s)";
        if (!first.empty()) what << " first failure: " << first;
        criterion(1, ok && secs < 10.0, what.str());
    }

    // 2: the plain index vanishes identically on every catalog sphere.
    {
        bool ok = true;
        for (const auto& name : kCoreCatalog) {
            ManifoldDatum m = get(name);
            EngineConfig cfg = EngineConfig::for_datum(m);
            ok = ok && vanishing_check(m, op_named("dirac"), cfg).pass;
        }
        criterion(2, ok, "plain index identically zero on every catalog sphere");
    }

    // 3: rigidity of the three classical twists up to q_max = 3,
    // with a corrupted negative control that must fail.
    {
        bool ok = true;
        for (const auto& name : kCoreCatalog) {
            ManifoldDatum m = get(name);
            EngineConfig cfg = EngineConfig::for_datum(m, Rat(3), 40);
            for (const auto& opn : {"ds-theta-prime", "dirac-theta-q", "dirac-theta-minus-q"})
                ok = ok && rigidity_check(m, op_named(opn), cfg).pass;
        }
        ManifoldDatum bad = get("S4-w11-corrupt");
        EngineConfig cfg = EngineConfig::for_datum(bad, Rat(3), 40);
        bool control = !rigidity_check(bad, op_named("dirac-theta-q"), cfg).pass;
        criterion(3, ok && control,
                  "rigidity of the three classical twists; corrupted control fails");
    }

    // 4: symmetric-tower vanishing on the weight-2 sphere (e = -2), exact.
    {
        ManifoldDatum m = get("S2-w2");
        EngineConfig cfg = EngineConfig::for_datum(m, Rat(3), 40);
        HypothesisReport hyp;
        compute_e(m, hyp);
        bool ok = hyp.e && *hyp.e == Rat(-2) &&
                  vanishing_check(m, op_named("dirac-sym-tower"), cfg).pass;
        criterion(4, ok, "symmetric-tower vanishing on the weight-2 sphere");
    }

    // 5: translation law for p in {1,2} on entries with constant integral e,
    // over the full certified window, exact.
    {
        bool ok = true;
        long long total_cells = 0;
        for (const auto& name : {"S2-w2", "S4-w11", "S2xS2-w1w1"}) {
            ManifoldDatum m = get(name);
            EngineConfig cfg = EngineConfig::for_datum(m);
            for (long long p : {1LL, 2LL}) {
                Verdict v = translation_check(m, op_named("dirac-sym-tower"), p, cfg);
                ok = ok && v.pass && v.note.find("skipped") == std::string::npos;
            }
        }
        for (const auto& name : {"S2-w1-vt", "S2-w2-vt", "S4-w11-vt"}) {
            ManifoldDatum m = get(name);
            EngineConfig cfg = EngineConfig::for_datum(m);
            for (const auto& opn : {"dirac-r1", "dirac-r2", "dirac-r3", "dirac-r4"}) {
                for (long long p : {1LL, 2LL}) {
                    Verdict v = translation_check(m, op_named(opn), p, cfg);
                    ok = ok && v.pass && v.note.find("skipped") == std::string::npos;
                    (void)total_cells;
                }
            }
        }
        criterion(5, ok, "translation law on constant-integral-e entries, p in {1,2}");
    }

    // 6: first regrading law on 100 randomized components (ranks <= 2,
    // weights <= 3, p <= 2, q_max = 2), endpoint identities included.
    {
        auto rng = acceptance_rng(6);
        PropCheckOptions opt;
        opt.q_max = Rat(2);
        opt.g_halfwidth = 12;
        bool ok = true;
        std::string first;
        for (int t = 0; t < 100; ++t) {
            FixedComponentDatum c = random_component(rng, 3, 2, true);
            long long p = 1 + (long long)(rng() % 2);
            int i = 1 + int(rng() % 2);
            Verdict v = check_prop_3_1(c, p, i, opt);
            if (!v.pass && first.empty() && v.first_violation) first = v.first_violation->what;
            ok = ok && v.pass;
        }
        criterion(6, ok, "first regrading law on 100 random components" +
                             (first.empty() ? "" : " first failure: " + first));
    }

    // 7: level regrading law and the level recursion on catalog and random
    // data at all levels with denominator <= 3, q_max = 2; constancy verdicts.
    {
        auto rng = acceptance_rng(7);
        PropCheckOptions popt;
        popt.q_max = Rat(2);
        popt.g_halfwidth = 12;
        RecursionOptions ropt;
        ropt.q_max = Rat(2);
        ropt.g_halfwidth = 12;
        bool ok = true;
        std::string first;
        auto note_fail = [&](const std::string& s) {
            if (first.empty()) first = s;
            ok = false;
        };
        // level law on catalog components and random components
        std::vector<FixedComponentDatum> comps;
        for (const auto& name : kCoreCatalog)
            for (const auto& c : get(name).components) comps.push_back(c);
        for (int t = 0; t < 25; ++t) comps.push_back(random_component(rng, 3, 2, true));
        for (const auto& c : comps) {
            std::vector<long long> J;
            for (auto& [v, d] : c.tangent) J.push_back(v);
            auto levels = phi_levels(J);
            for (long long p : {1LL, 2LL}) {
                for (long long j = 1; j <= (long long)levels.size(); ++j) {
                    if (levels[j - 1].n > 3) continue;
                    for (int i : {1, 2}) {
                        Verdict v = check_prop_4_1(c, p, levels, j, i, popt);
                        if (!v.pass)
                            note_fail("level law " + v.params +
                                      (v.first_violation ? ": " + v.first_violation->what : ""));
                    }
                }
            }
        }
        // recursion on catalog entries and random spheres
        std::vector<ManifoldDatum> data;
        for (const auto& name :
             {"S2-w1", "S2-w2", "S4-w11", "S4-w12", "S2-w1-vt", "S2-w2-vt", "S4-w11-vt"})
            data.push_back(get(name));
        for (int t = 0; t < 4; ++t) data.push_back(random_sphere(rng, 3, t % 2 == 0));
        for (const auto& m : data) {
            bool big = m.max_weight() > 3;
            if (big) continue;
            for (int i : {1, 2, 3, 4}) {
                for (long long p : {1LL, 2LL}) {
                    Verdict v = recursion_check(m, i, p, ropt);
                    if (!v.pass)
                        note_fail("recursion " + v.params +
                                  (v.first_violation ? ": " + v.first_violation->what : ""));
                }
            }
            HypothesisReport hyp = hypothesis_report(m);
            if (!hyp.lemma44_ok || !hyp.lemma46_ok) note_fail("constancy on " + m.name);
        }
        criterion(7, ok, "level regrading law, recursion and constancy" +
                             (first.empty() ? "" : " first failure: " + first));
    }

    // 8: ring kernel laws, >= 1000 randomized exact cases in < 5 s.
    {
        auto t0 = Clock::now();
        auto rng = acceptance_rng(8);
        bool ok = true;
        long long cases = 0;
        auto rand_char = [&](long long lat) {
            Character c(lat);
            int n = int(rng() % 5);
            for (int i = 0; i < n; ++i)
                c.add_term((long long)(rng() % 13) - 6, Int((long long)(rng() % 9) - 4));
            return c;
        };
        for (int t = 0; t < 400; ++t) {
            Character a = rand_char(2), b = rand_char(2), c = rand_char(2);
            ok = ok && (a * (b + c) == a * b + a * c);
            ok = ok && ((a * b) * c == a * (b * c));
            cases += 2;
        }
        for (int t = 0; t < 200; ++t) {
            FactorList f;
            int nf = 1 + int(rng() % 3);
            for (int k = 0; k < nf; ++k) {
                long long a = (long long)(rng() % 3), w = (long long)(rng() % 7) - 3;
                if (a == 0 && w == 0) w = 1;
                f.mul_factor(Rat(a), Rat(w), rng() % 2 ? +1 : -1, 1 + (long long)(rng() % 2));
            }
            Box win{0, 2, -16, 16};
            auto s = f.render(Region::AtZero, 1, 1, win);
            auto si = f.inverse().render(Region::AtZero, 1, 1, win);
            auto prod = s * si;
            Box w = prod.window().intersect(win);
            bool good = true;
            for (long long mq = w.qlo; mq <= w.qhi && good; ++mq)
                for (long long h = w.glo; h <= w.ghi && good; ++h)
                    good = prod.extract(mq, h) == (mq == 0 && h == 0 ? 1 : 0);
            ok = ok && good;
            ++cases;
        }
        for (int t = 0; t < 200; ++t) {
            FactorList f;
            int nf = 1 + int(rng() % 3);
            for (int k = 0; k < nf; ++k) {
                long long a = (long long)(rng() % 3), w = (long long)(rng() % 7) - 3;
                if (a == 0 && w == 0) w = -2;
                f.mul_factor(Rat(a), Rat(w), rng() % 2 ? +1 : -1, 1 + (long long)(rng() % 3));
            }
            Box win{0, 3, -24, 24};
            ok = ok && (f.render(Region::AtZero, 1, 1, win).terms() ==
                        f.render(Region::AtInfinity, 1, 1, win).terms());
            ++cases;
        }
        for (int t = 0; t < 200; ++t) {
            // extract linearity over sums of rendered series
            FactorList f1, f2;
            f1.mul_factor(Rat(1), Rat((long long)(rng() % 5) - 2), +1, -1);
            f2.mul_factor(Rat(2), Rat((long long)(rng() % 5) - 2), rng() % 2 ? +1 : -1, -1);
            Box win{0, 2, -10, 10};
            auto s1 = f1.render(Region::AtZero, 1, 1, win);
            auto s2 = f2.render(Region::AtZero, 1, 1, win);
            auto sum = s1 + s2;
            bool good = true;
            for (long long mq = 0; mq <= 2 && good; ++mq)
                for (long long h = -10; h <= 10 && good; ++h)
                    good = sum.extract(mq, h) == s1.extract(mq, h) + s2.extract(mq, h);
            ok = ok && good;
            ++cases;
        }
        double secs = std::chrono::duration<double>(Clock::now() - t0).count();
        std::ostringstream what;
        what << "ring kernel laws, " << cases << " cases (" << secs << " s)";
        criterion(8, ok && cases >= 1000 && secs < 5.0, what.str());
    }

    // 9: regression goldens reproduce byte-identically.
    {
        bool ok = true;
        std::string first;
        struct GoldenCase {
            const char* file;
            const char* datum;
            const char* op;
        };
        for (const GoldenCase& gc : {GoldenCase{"s2_w1_dirac_theta_q.json", "S2-w1", "dirac-theta-q"},
                                     GoldenCase{"s2_w1_L1_dirac.json", "S2-w1-L1", "dirac"}}) {
            ManifoldDatum m = get(gc.datum);
            EngineConfig cfg = EngineConfig::for_datum(m, Rat(3), 40);
            IndexReport rep = make_index_report(m, op_named(gc.op), cfg);
            json j = index_report_json(rep);
            j["seed"] = 0;
            std::string produced = j.dump(2) + "\n";
            std::ifstream in(src_dir + "/tests/golden/" + gc.file);
            std::stringstream ss;
            ss << in.rdbuf();
            if (!in || ss.str() != produced) {
                ok = false;
                if (first.empty()) first = gc.file;
            }
        }
        criterion(9, ok, std::string("regression goldens byte-identical") +
                             (first.empty() ? "" : " first mismatch: " + first));
    }

    if (failures) {
        std::cout << failures << " criteria FAILED" << std::endl;
        return 1;
    }
    std::cout << "all acceptance criteria passed" << std::endl;
    return 0;
}
