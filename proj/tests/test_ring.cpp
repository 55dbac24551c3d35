#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <random>
#include <utility>

#include "lefk/character.hpp"
#include "lefk/factor_list.hpp"
#include "lefk/series.hpp"

using namespace lefk;

namespace {

Character rand_char(std::mt19937_64& rng, long long lat, int max_terms = 4, long long max_exp = 6,
                    long long max_coeff = 9) {
    std::uniform_int_distribution<int> nterms(0, max_terms);
    std::uniform_int_distribution<long long> exp(-max_exp, max_exp);
    std::uniform_int_distribution<long long> coeff(-max_coeff, max_coeff);
    Character c(lat);
    int n = nterms(rng);
    for (int i = 0; i < n; ++i) c.add_term(exp(rng), Int(coeff(rng)));
    return c;
}

// Brute-force expansion oracle for products of inverse factors with positive
// q-steps, independent of FactorList::render. Multiplies plain nested maps.
using Poly2 = std::map<std::pair<long long, long long>, Int>;

Poly2 oracle_inverse_factor(long long a, long long w, long long qmax, long long gmax) {
    Poly2 p;
    for (long long k = 0;; ++k) {
        if (a > 0 && k * a > qmax) break;
        if (a == 0 && std::abs(k * w) > gmax) break;
        p[{k * a, k * w}] = 1;
    }
    return p;
}

Poly2 oracle_mul(const Poly2& x, const Poly2& y) {
    Poly2 r;
    for (const auto& [kx, cx] : x)
        for (const auto& [ky, cy] : y) r[{kx.first + ky.first, kx.second + ky.second}] += cx * cy;
    return r;
}

} // namespace

TEST_CASE("character product: difference of squares") {
    Character a(2), b(2);
    a.add_term(2, 1);   // g
    a.add_term(-2, 1);  // g^-1
    b.add_term(2, 1);
    b.add_term(-2, -1);
    Character expect(2);
    expect.add_term(4, 1);
    expect.add_term(-4, -1);
    CHECK(a * b == expect);
}

TEST_CASE("character product: identity") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 50; ++i) {
        Character c = rand_char(rng, 2);
        CHECK(Character::one(2) * c == c);
    }
}

TEST_CASE("character ring laws hold on random data") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 400; ++i) {
        Character a = rand_char(rng, 2), b = rand_char(rng, 2), c = rand_char(rng, 2);
        CHECK(a * (b + c) == a * b + a * c);
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * b == b * a);
        CHECK(a + b == b + a);
    }
}

TEST_CASE("character lattice mismatch is rejected") {
    Character a(2), b(3);
    a.add_term(1, 1);
    b.add_term(1, 1);
    CHECK_THROWS_AS(a * b, invalid_lattice);
    CHECK(a.rescaled(6) * b.rescaled(6) == Character::monomial(Exponent(5, 6)));
}

TEST_CASE("expand single factors") {
    Box w{0, 2, -12, 12};
    SECTION("(1-qg)^{-1} up to q^2") {
        FactorList f;
        f.mul_factor(Rat(1), Rat(1), +1, -1);
        auto s = f.render(Region::AtZero, 1, 1, Box{0, 2, -4, 4});
        BigradedSeries expect = BigradedSeries::zero(1, 1, Box{0, 2, -4, 4});
        expect.add_term(0, 0, 1);
        expect.add_term(1, 1, 1);
        expect.add_term(2, 2, 1);
        CHECK(s.terms() == expect.terms());
    }
    SECTION("(1-qg)^{+1} is region independent") {
        FactorList f;
        f.mul_factor(Rat(1), Rat(1), +1, 1);
        auto s0 = f.render(Region::AtZero, 1, 1, w);
        auto si = f.render(Region::AtInfinity, 1, 1, w);
        CHECK(s0.terms() == si.terms());
        CHECK(s0.extract(0, 0) == 1);
        CHECK(s0.extract(1, 1) == -1);
        CHECK(s0.extract(2, 2) == 0);
    }
    SECTION("(1-g)^{-1} at AtZero, G=3") {
        FactorList f;
        f.mul_factor(Rat(0), Rat(1), +1, -1);
        auto s = f.render(Region::AtZero, 1, 1, Box{0, 0, -3, 3});
        for (long long h = 0; h <= 3; ++h) CHECK(s.extract(0, h) == 1);
        for (long long h = -3; h < 0; ++h) CHECK(s.extract(0, h) == 0);
        // beyond the window the tail is real: not certified
        CHECK_THROWS_AS(s.extract(0, 4), window_exceeded);
    }
    SECTION("(1-g)^{-1} at AtInfinity is the mirror expansion") {
        FactorList f;
        f.mul_factor(Rat(0), Rat(1), +1, -1);
        auto s = f.render(Region::AtInfinity, 1, 1, Box{0, 0, -3, 3});
        // (1-g)^{-1} = -g^{-1}(1-g^{-1})^{-1} = -g^{-1} - g^{-2} - ...
        for (long long h = -3; h < 0; ++h) CHECK(s.extract(0, h) == -1);
        for (long long h = 0; h <= 3; ++h) CHECK(s.extract(0, h) == 0);
    }
    SECTION("singular factor is rejected") {
        FactorList f;
        CHECK_THROWS_AS(f.mul_factor(Rat(0), Rat(0), +1, -1), singular_factor);
    }
}

TEST_CASE("series ops basics") {
    Box w{0, 3, -8, 8};
    auto unit = BigradedSeries::unit(1, 1, w);
    CHECK(unit.extract(0, 0) == 1);
    CHECK(unit.extract(2, 1) == 0);

    SECTION("factor times inverse factor is one within window") {
        FactorList f;
        f.mul_factor(Rat(1), Rat(-1), +1, 1);
        FactorList g = f.inverse();
        FactorList fg = f;
        fg.mul(g);
        auto s = fg.render(Region::AtZero, 1, 1, w);
        CHECK(s.terms() == unit.terms());
    }

    SECTION("extract_coefficient of q^1 from (1-qg)^{-1}(1-qg^{-1})^{-1}") {
        // independent brute-force oracle
        Poly2 p = oracle_mul(oracle_inverse_factor(1, 1, 3, 8), oracle_inverse_factor(1, -1, 3, 8));
        FactorList f;
        f.mul_factor(Rat(1), Rat(1), +1, -1);
        f.mul_factor(Rat(1), Rat(-1), +1, -1);
        auto s = f.render(Region::AtZero, 1, 1, w);
        for (long long h = -3; h <= 3; ++h) {
            Int want = 0;
            auto it = p.find({1, h});
            if (it != p.end()) want = it->second;
            CHECK(s.extract(1, h) == want);
        }
        Character row = s.extract_coefficient(1LL);
        Character expect(1);
        expect.add_term(1, 1);
        expect.add_term(-1, 1);
        CHECK(row == expect);
    }
}

TEST_CASE("extract is linear") {
    std::mt19937_64 rng(23);
    Box w{0, 2, -6, 6};
    for (int i = 0; i < 50; ++i) {
        FactorList f1, f2;
        f1.mul_factor(Rat(1), Rat((long long)(rng() % 3) - 1), +1, -1);
        f1.mul_char(rand_char(rng, 1, 3, 3, 4));
        f2.mul_factor(Rat(1), Rat((long long)(rng() % 5) - 2), +1, 1);
        f2.mul_char(rand_char(rng, 1, 3, 3, 4));
        auto s1 = f1.render(Region::AtZero, 1, 1, w);
        auto s2 = f2.render(Region::AtZero, 1, 1, w);
        auto sum = s1 + s2;
        for (long long m = 0; m <= 2; ++m)
            for (long long h = -6; h <= 6; ++h)
                CHECK(sum.extract(m, h) == s1.extract(m, h) + s2.extract(m, h));
    }
}

TEST_CASE("random factor lists: render times rendered inverse is one") {
    std::mt19937_64 rng(31);
    std::uniform_int_distribution<long long> qa(0, 2), gw(-3, 3), pw(1, 2);
    for (int i = 0; i < 60; ++i) {
        FactorList f;
        int nf = 1 + int(rng() % 3);
        for (int j = 0; j < nf; ++j) {
            long long a = qa(rng), w = gw(rng);
            if (a == 0 && w == 0) w = 1;
            f.mul_factor(Rat(a), Rat(w), rng() % 2 ? +1 : -1, pw(rng));
        }
        for (Region r : {Region::AtZero, Region::AtInfinity}) {
            Box w{0, 2, -20, 20};
            auto s = f.render(r, 1, 1, w);
            auto si = f.inverse().render(r, 1, 1, w);
            auto prod = s * si;
            const Box& cw = prod.window();
            REQUIRE(!cw.is_empty());
            for (long long m = std::max(0LL, cw.qlo); m <= std::min(2LL, cw.qhi); ++m)
                for (long long h = std::max(-20LL, cw.glo); h <= std::min(20LL, cw.ghi); ++h)
                    CHECK(prod.extract(m, h) == (m == 0 && h == 0 ? 1 : 0));
        }
    }
}

TEST_CASE("polynomial factor lists render identically in both regions") {
    std::mt19937_64 rng(37);
    std::uniform_int_distribution<long long> qa(0, 2), gw(-3, 3), pw(1, 3);
    for (int i = 0; i < 60; ++i) {
        FactorList f;
        int nf = 1 + int(rng() % 3);
        for (int j = 0; j < nf; ++j) {
            long long a = qa(rng), w = gw(rng);
            if (a == 0 && w == 0) w = -2;
            f.mul_factor(Rat(a), Rat(w), rng() % 2 ? +1 : -1, pw(rng));
        }
        REQUIRE(f.polynomial());
        Box w{0, 4, -30, 30};
        auto s0 = f.render(Region::AtZero, 1, 1, w);
        auto si = f.render(Region::AtInfinity, 1, 1, w);
        CHECK(s0.terms() == si.terms());
    }
}

TEST_CASE("renderer handles negative q-exponent rays exactly") {
    // (1 - q^{-1} g)^{-1} expanded intrinsically: terms q^{-k} g^{k}
    FactorList f;
    f.mul_factor(Rat(-1), Rat(1), +1, -1);
    auto s = f.render(Region::AtZero, 1, 1, Box{-5, 2, -6, 6});
    for (long long k = 0; k <= 5; ++k) CHECK(s.extract(-k, k) == 1);
    CHECK(s.extract(-1, 2) == 0);
    CHECK(s.extract(1, 1) == 0);

    // paired against a compensating positive ray: product of
    // (1-q^{-1}g)^{-1} (1-q^2 g^{-1})^{-1}: coefficient at (1,1) counts
    // solutions of -k + 2k' = 1, k - k' = 1 -> k = 3, k' = 2: exactly one.
    FactorList f2;
    f2.mul_factor(Rat(-1), Rat(1), +1, -1);
    f2.mul_factor(Rat(2), Rat(-1), +1, -1);
    auto s2 = f2.render(Region::AtZero, 1, 1, Box{-8, 4, -10, 10});
    CHECK(s2.extract(1, 1) == 1);
    CHECK(s2.extract(0, 0) == 1);  // only k = k' = 0
    CHECK(s2.extract(2, -1) == 1); // -k+2k' = 2, k-k' = -1 -> k = 0, k' = 1
}

TEST_CASE("antiparallel inverse factors are rejected") {
    FactorList f;
    f.mul_factor(Rat(1), Rat(-1), +1, -1);
    f.mul_factor(Rat(-1), Rat(1), +1, -1);
    CHECK_THROWS_AS(f.render(Region::AtZero, 1, 1, Box{0, 2, -4, 4}), singular_factor);
}

TEST_CASE("series multiplication window shrinks against truncated tails") {
    // s = (1-g)^{-1} rendered to |h| <= 6 has a real tail beyond the window;
    // multiplying by a polynomial reaching down to g^{-2} pulls that tail
    // into the strip h > 6 - 2, which must leave the certified window.
    FactorList f;
    f.mul_factor(Rat(0), Rat(1), +1, -1);
    auto s = f.render(Region::AtZero, 1, 1, Box{0, 0, -6, 6});
    FactorList p;
    p.mul_factor(Rat(0), Rat(-2), +1, 1);
    auto sp = p.render(Region::AtZero, 1, 1, Box{0, 0, -6, 6});
    auto prod = s * sp;
    // (1-g)^{-1}(1-g^{-2}) = -g^{-1} - g^{-2}
    CHECK(prod.window().ghi == 4); // 6 + glo(support of 1 - g^{-2})
    CHECK(prod.extract(0, -1) == -1);
    CHECK(prod.extract(0, -2) == -1);
    CHECK(prod.extract(0, -7) == 0); // below true support: certified zero
    for (long long h = 0; h <= 4; ++h) CHECK(prod.extract(0, h) == 0);
    CHECK_THROWS_AS(prod.extract(0, 5), window_exceeded);
}
