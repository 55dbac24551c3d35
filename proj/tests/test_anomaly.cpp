#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "lefk/anomaly.hpp"
#include "lefk/catalog.hpp"

using namespace lefk;

namespace {
ManifoldDatum get(const std::string& name) {
    auto m = catalog_get(name);
    REQUIRE(m.has_value());
    return *m;
}
FixedComponentDatum comp(std::vector<long long> tw, std::vector<long long> vw = {},
                         long long v0 = 0) {
    FixedComponentDatum c;
    c.name = "t";
    for (long long w : tw) c.tangent[w] += 1;
    for (long long w : vw) c.vbundle[w] += 1;
    c.v0_rank = v0;
    return c;
}
} // namespace

TEST_CASE("parity checks") {
    auto [pn1, pv1] = check_parities(get("S2-w1"));
    CHECK_FALSE(pn1); // weight sum 1 is odd: half-integer lattice in play
    CHECK(pv1);
    auto [pn2, pv2] = check_parities(get("S2-w2"));
    CHECK(pn2);
    CHECK(pv2);
    auto [pn3, pv3] = check_parities(get("S4-w11"));
    CHECK(pn3);
    CHECK(pv3);
    HypothesisReport r = hypothesis_report(get("S2-w1"));
    CHECK_FALSE(r.parity_n);
    REQUIRE_FALSE(r.notes.empty());
}

TEST_CASE("anomaly constant") {
    SECTION("weight-2 sphere has e = -2 at both poles") {
        HypothesisReport r;
        compute_e(get("S2-w2"), r);
        REQUIRE(r.e.has_value());
        CHECK(*r.e == Rat(-2));
        CHECK(r.e_constant);
        CHECK(r.e_integral);
    }
    SECTION("weight-1 sphere has non-integral e = -1/2, flagged") {
        ManifoldDatum m = get("S2-w1");
        HypothesisReport r = hypothesis_report(m);
        REQUIRE(r.e.has_value());
        CHECK(*r.e == Rat(-1, 2));
        CHECK_FALSE(r.e_integral);
    }
    SECTION("mismatched components are reported non-constant") {
        ManifoldDatum m = get("S2-w1-corrupt");
        HypothesisReport r;
        compute_e(m, r);
        CHECK_FALSE(r.e_constant);
    }
    SECTION("agreement with the component-level base constants") {
        std::mt19937_64 rng(41);
        for (int t = 0; t < 50; ++t) {
            FixedComponentDatum c = comp({1 + (long long)(rng() % 4)},
                                         {1 + (long long)(rng() % 4)}, 2 * (rng() % 2));
            BaseConstants b = base_constants(c);
            CHECK(Rat(b.e_v - b.e_n) == Rat(2) * c.e_constant());
        }
    }
}

TEST_CASE("cyclic decomposition tables") {
    SECTION("order 1 puts everything in the fixed block") {
        FixedComponentDatum c = comp({1, 2, 3}, {2}, 2);
        ZnTable t = zn_decompose(c, 1);
        CHECK(t.n_fixed_cdim == 3);
        CHECK(t.v_fixed_cdim == 1);
        CHECK(t.n_class_dim.empty());
        CHECK(t.n_half_cdim == 0);
        CHECK(t.v0_real == 2 + 2);
        CHECK(t.r == 0);
    }
    SECTION("weights {1,2} mod 2: weight-1 in the half class, weight-2 fixed") {
        FixedComponentDatum c = comp({1, 2});
        ZnTable t = zn_decompose(c, 2);
        CHECK(t.n_half_cdim == 1);
        CHECK(t.n_fixed_cdim == 1);
        CHECK(t.n_class_dim.empty());
        CHECK(t.r == 1);
    }
    SECTION("weights mod 3 classify into the single class pair") {
        FixedComponentDatum c = comp({1, 2, 3, 4});
        ZnTable t = zn_decompose(c, 3);
        // residues: 1 -> class 1; 2 -> class 1 conjugate; 3 -> fixed; 4 -> class 1
        CHECK(t.n_fixed_cdim == 1);
        REQUIRE(t.n_class_dim.count(1));
        CHECK(t.n_class_dim.at(1) == 3);
        CHECK(t.n_class_det.at(1) == 1 - 2 + 4);
        CHECK(t.r == 0);
    }
    SECTION("partition and even-dimension invariants on random data") {
        std::mt19937_64 rng(43);
        for (int t = 0; t < 200; ++t) {
            std::vector<long long> tw, vw;
            int nt = 1 + int(rng() % 3), nv = int(rng() % 3);
            for (int k = 0; k < nt; ++k) tw.push_back(1 + (long long)(rng() % 5));
            for (int k = 0; k < nv; ++k) vw.push_back(1 + (long long)(rng() % 5));
            FixedComponentDatum c = comp(tw, vw, 2 * (rng() % 3));
            for (long long n = 1; n <= 4; ++n) {
                ZnTable tab = zn_decompose(c, n);
                CHECK(zn_partition_ok(c, tab));
                CHECK(zn_even_dims_ok(tab));
                CHECK((tab.r == 0 || tab.r == 1));
                CHECK(tab.r == ((n % 2 == 0) ? 1 : 0));
            }
        }
    }
}

TEST_CASE("level constants and endpoints") {
    SECTION("single weight-1 line") {
        FixedComponentDatum c = comp({1});
        CHECK(level_constants(c, 1, Rat(1)).e_level == 1);   // top endpoint: e(N)/2 + d'(N)/2
        CHECK(level_constants(c, 1, Rat(0)).e_level == 0);   // bottom endpoint with p-1 = 0
        CHECK(base_constants(c).e_n == 1);
        CHECK(base_constants(c).dprime_n == 1);
    }
    SECTION("single weight-2 line at the half level") {
        FixedComponentDatum c = comp({2});
        LevelConstants lc = level_constants(c, 1, Rat(1, 2));
        CHECK(lc.e_level == 1);      // (1/2)(0+1)(0+2) with kappa = [1] = 1 -> 1
        CHECK(lc.dprime_level == 1); // [1] = 1
        CHECK(base_constants(c).e_n == 4);
        CHECK(base_constants(c).dprime_n == 2);
        CHECK(c.e_constant() == Rat(-2));
    }
    SECTION("endpoint identities on random data") {
        std::mt19937_64 rng(47);
        for (int t = 0; t < 300; ++t) {
            std::vector<long long> tw;
            int nt = 1 + int(rng() % 3);
            for (int k = 0; k < nt; ++k) tw.push_back(1 + (long long)(rng() % 4));
            FixedComponentDatum c = comp(tw);
            long long p = 1 + (long long)(rng() % 3);
            BaseConstants b = base_constants(c);
            CHECK(Rat(level_constants(c, p, Rat(1)).e_level) ==
                  Rat(p * p * b.e_n + p * b.dprime_n, 2));
            CHECK(Rat(level_constants(c, p, Rat(0)).e_level) ==
                  Rat((p - 1) * (p - 1) * b.e_n + (p - 1) * b.dprime_n, 2));
        }
    }
}

TEST_CASE("epsilon offsets: direct formula equals the closed form") {
    std::mt19937_64 rng(53);
    for (int t = 0; t < 250; ++t) {
        std::vector<long long> tw, vw;
        int nt = 1 + int(rng() % 3), nv = int(rng() % 3);
        for (int k = 0; k < nt; ++k) tw.push_back(1 + (long long)(rng() % 4));
        for (int k = 0; k < nv; ++k) vw.push_back(1 + (long long)(rng() % 4));
        FixedComponentDatum c = comp(tw, vw, 2 * (rng() % 2));
        long long p = 1 + (long long)(rng() % 2);
        std::vector<long long> J(tw.begin(), tw.end());
        for (const auto& lvl : phi_levels(J)) {
            EpsilonPair direct = epsilons(c, p, lvl.beta);
            EpsilonPair closed = epsilons_closed(c, p, lvl);
            INFO("weights nt=" << nt << " p=" << p << " beta=" << lvl.beta.str());
            CHECK(direct.eps1 == closed.eps1);
            CHECK(direct.eps2 == closed.eps2);
        }
    }
}

TEST_CASE("constancy verdicts") {
    SECTION("catalog entries pass at every level") {
        for (const auto& e : catalog()) {
            if (e.corrupt) continue;
            ManifoldDatum m = e.make();
            HypothesisReport r = hypothesis_report(m);
            INFO(e.name);
            CHECK(r.lemma44_ok);
            CHECK(r.lemma46_ok);
            CHECK(r.zn_partition_ok);
            CHECK(r.even_dim_ok);
        }
    }
    SECTION("single-component datum is trivially constant") {
        ManifoldDatum m;
        m.name = "one";
        m.fiber_dim = 2;
        m.components.push_back(comp({2}));
        auto levels = phi_levels({2});
        for (const auto& lvl : levels) {
            auto [l44, l46] = constancy_checks(m, 1, lvl);
            CHECK(l44);
            CHECK(l46);
        }
    }
    SECTION("same cyclic table with different weights trips the epsilon constancy") {
        // weights {5} and {1} share the order-2 table shape but carry
        // different offsets: the grouped verdict must fail
        ManifoldDatum m;
        m.name = "fake";
        m.fiber_dim = 2;
        m.components.push_back(comp({5}));
        m.components.push_back(comp({1}));
        PhiLevel half{Rat(1, 2), 1, 2};
        auto [l44, l46] = constancy_checks(m, 1, half);
        CHECK_FALSE(l44);
    }
}
