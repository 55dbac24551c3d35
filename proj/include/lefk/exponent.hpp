#pragma once

#include <string>

#include "lefk/errors.hpp"
#include "lefk/rational.hpp"

namespace lefk {

// An exponent is an integer numerator over a fixed positive lattice
// denominator. Lattices are chosen once per computation; values on different
// lattices never mix silently, rescaling must be asked for explicitly and is
// exact or fails.
struct Exponent {
    long long num{0};
    long long lattice{1};

    Exponent() = default;
    Exponent(long long n, long long lat) : num(n), lattice(lat) {
        if (lat <= 0) throw invalid_lattice("lattice denominator must be positive");
    }

    Rat value() const { return Rat(num, lattice); }

    // Exact representation of r on lattice `lat`; fails if r is not on it.
    static Exponent on_lattice(const Rat& r, long long lat) {
        if (lat <= 0) throw invalid_lattice("lattice denominator must be positive");
        if (lat % r.den != 0)
            throw invalid_lattice("value " + r.str() + " not representable on lattice 1/" + std::to_string(lat));
        return Exponent(r.num * (lat / r.den), lat);
    }

    Exponent rescaled(long long lat) const { return on_lattice(value(), lat); }

    friend Exponent operator+(const Exponent& a, const Exponent& b) {
        if (a.lattice != b.lattice)
            throw invalid_lattice("exponent lattice mismatch: 1/" + std::to_string(a.lattice) +
                                  " vs 1/" + std::to_string(b.lattice));
        return Exponent(a.num + b.num, a.lattice);
    }
    friend Exponent operator-(const Exponent& a, const Exponent& b) {
        if (a.lattice != b.lattice)
            throw invalid_lattice("exponent lattice mismatch");
        return Exponent(a.num - b.num, a.lattice);
    }
    Exponent operator-() const { return Exponent(-num, lattice); }

    friend bool operator==(const Exponent& a, const Exponent& b) { return a.value() == b.value(); }
    friend bool operator<(const Exponent& a, const Exponent& b) { return a.value() < b.value(); }

    std::string str() const { return value().str(); }
};

} // namespace lefk
