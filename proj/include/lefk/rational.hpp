#pragma once

#include <cstdint>
#include <numeric>
#include <ostream>
#include <string>

#include "lefk/errors.hpp"

namespace lefk {

// Exact rational on int64, always normalized (den > 0, gcd = 1). Used for
// exponents, slopes and the small locally-constant quantities of the shift
// laws. Intermediate products go through __int128 and overflow is checked;
// the values occurring here are tiny, so a throw indicates a logic error.
struct Rat {
    long long num{0};
    long long den{1};

    Rat() = default;
    Rat(long long n) : num(n), den(1) {}
    Rat(long long n, long long d) : num(n), den(d) { normalize(); }

    void normalize() {
        if (den == 0) throw invalid_lattice("rational with zero denominator");
        if (den < 0) { num = -num; den = -den; }
        long long g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) { num /= g; den /= g; }
    }

    static long long checked(__int128 v) {
        if (v > INT64_MAX || v < INT64_MIN) throw invalid_lattice("rational overflow");
        return static_cast<long long>(v);
    }

    friend Rat operator+(const Rat& a, const Rat& b) {
        __int128 n = (__int128)a.num * b.den + (__int128)b.num * a.den;
        __int128 d = (__int128)a.den * b.den;
        return Rat(checked(n), checked(d));
    }
    friend Rat operator-(const Rat& a, const Rat& b) { return a + Rat(-b.num, b.den); }
    Rat operator-() const { return Rat(-num, den); }
    friend Rat operator*(const Rat& a, const Rat& b) {
        return Rat(checked((__int128)a.num * b.num), checked((__int128)a.den * b.den));
    }
    friend Rat operator/(const Rat& a, const Rat& b) {
        if (b.num == 0) throw invalid_lattice("rational division by zero");
        return Rat(checked((__int128)a.num * b.den), checked((__int128)a.den * b.num));
    }

    friend bool operator==(const Rat& a, const Rat& b) { return a.num == b.num && a.den == b.den; }
    friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }
    friend bool operator<(const Rat& a, const Rat& b) {
        return (__int128)a.num * b.den < (__int128)b.num * a.den;
    }
    friend bool operator<=(const Rat& a, const Rat& b) { return a < b || a == b; }
    friend bool operator>(const Rat& a, const Rat& b) { return b < a; }
    friend bool operator>=(const Rat& a, const Rat& b) { return b <= a; }

    bool is_integer() const { return den == 1; }

    // floor(num/den) for the level constants; exact for negatives too.
    long long floor() const {
        long long q = num / den, r = num % den;
        return (r != 0 && num < 0) ? q - 1 : q;
    }

    std::string str() const {
        std::string s = std::to_string(num);
        if (den != 1) s += "/" + std::to_string(den);
        return s;
    }

    friend std::ostream& operator<<(std::ostream& os, const Rat& r) { return os << r.str(); }
};

} // namespace lefk
