#pragma once

#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>

#include <boost/multiprecision/cpp_int.hpp>

#include "lefk/exponent.hpp"

namespace lefk {

using Int = boost::multiprecision::cpp_int;

// Finite Laurent polynomial in the group variable g with exact integer
// coefficients; exponents live on a fixed lattice (default 1/2, the spinor
// half-weights). Zero coefficients are never stored.
class Character {
public:
    using Terms = std::map<long long, Int>; // g-exponent numerator -> coefficient

    explicit Character(long long lattice = 2) : lat_(lattice) {
        if (lattice <= 0) throw invalid_lattice("character lattice must be positive");
    }

    static Character one(long long lattice = 2) {
        Character c(lattice);
        c.add_term(0, 1);
        return c;
    }
    static Character monomial(const Exponent& e, const Int& coeff = 1) {
        Character c(e.lattice);
        c.add_term(e.num, coeff);
        return c;
    }

    long long lattice() const { return lat_; }
    const Terms& terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }
    std::size_t size() const { return t_.size(); }

    void add_term(long long gnum, const Int& coeff) {
        if (coeff == 0) return;
        auto it = t_.find(gnum);
        if (it == t_.end()) {
            t_.emplace(gnum, coeff);
        } else {
            it->second += coeff;
            if (it->second == 0) t_.erase(it);
        }
    }

    Int coeff(long long gnum) const {
        auto it = t_.find(gnum);
        return it == t_.end() ? Int(0) : it->second;
    }
    Int coeff(const Exponent& e) const { return coeff(e.rescaled(lat_).num); }

    void check_compatible(const Character& o) const {
        if (lat_ != o.lat_)
            throw invalid_lattice("character lattice mismatch: 1/" + std::to_string(lat_) +
                                  " vs 1/" + std::to_string(o.lat_));
    }

    friend Character operator+(const Character& a, const Character& b) {
        a.check_compatible(b);
        Character r = a;
        for (const auto& [e, c] : b.t_) r.add_term(e, c);
        return r;
    }
    friend Character operator-(const Character& a, const Character& b) {
        a.check_compatible(b);
        Character r = a;
        for (const auto& [e, c] : b.t_) r.add_term(e, -c);
        return r;
    }
    Character operator-() const {
        Character r(lat_);
        for (const auto& [e, c] : t_) r.t_.emplace(e, -c);
        return r;
    }
    friend Character operator*(const Character& a, const Character& b) {
        a.check_compatible(b);
        Character r(a.lat_);
        for (const auto& [ea, ca] : a.t_)
            for (const auto& [eb, cb] : b.t_) r.add_term(ea + eb, ca * cb);
        return r;
    }
    friend Character operator*(const Int& s, const Character& a) {
        Character r(a.lat_);
        if (s == 0) return r;
        for (const auto& [e, c] : a.t_) r.t_.emplace(e, s * c);
        return r;
    }
    Character& operator+=(const Character& b) { return *this = *this + b; }
    Character& operator*=(const Character& b) { return *this = *this * b; }

    friend bool operator==(const Character& a, const Character& b) {
        return a.lat_ == b.lat_ && a.t_ == b.t_;
    }
    friend bool operator!=(const Character& a, const Character& b) { return !(a == b); }

    // g -> g^{-1}
    Character conjugated() const {
        Character r(lat_);
        for (const auto& [e, c] : t_) r.t_.emplace(-e, c);
        return r;
    }

    // Sum of coefficients, i.e. evaluation at g = 1 (virtual dimension).
    Int dimension() const {
        Int s = 0;
        for (const auto& [e, c] : t_) s += c;
        return s;
    }

    Character rescaled(long long lattice) const {
        Character r(lattice);
        for (const auto& [e, c] : t_) r.add_term(Exponent(e, lat_).rescaled(lattice).num, c);
        return r;
    }

    std::string str() const {
        if (t_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [e, c] : t_) {
            if (!first) os << (c > 0 ? " + " : " - ");
            else if (c < 0) os << "-";
            first = false;
            Int a = c > 0 ? c : Int(-c);
            Rat ex(e, lat_);
            if (ex.num == 0) {
                os << a.str();
            } else {
                if (a != 1) os << a.str() << "*";
                os << "g^" << ex.str();
            }
        }
        return os.str();
    }

    friend std::ostream& operator<<(std::ostream& os, const Character& c) { return os << c.str(); }

private:
    long long lat_;
    Terms t_;
};

} // namespace lefk
