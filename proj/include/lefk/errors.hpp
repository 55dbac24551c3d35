#pragma once

#include <stdexcept>
#include <string>

namespace lefk {

// Error taxonomy shared across the library. Checks that can fail as part of
// normal operation return Verdict values instead of throwing; exceptions are
// reserved for contract violations and unusable inputs.

struct invalid_lattice : std::runtime_error {
    explicit invalid_lattice(const std::string& m) : std::runtime_error("InvalidLattice: " + m) {}
};

struct singular_factor : std::runtime_error {
    explicit singular_factor(const std::string& m) : std::runtime_error("SingularFactor: " + m) {}
};

struct window_exceeded : std::runtime_error {
    explicit window_exceeded(const std::string& m) : std::runtime_error("WindowExceeded: " + m) {}
};

struct not_polynomial : std::runtime_error {
    explicit not_polynomial(const std::string& m) : std::runtime_error("NotPolynomial: " + m) {}
};

struct incompatible_twist : std::runtime_error {
    explicit incompatible_twist(const std::string& m) : std::runtime_error("IncompatibleTwist: " + m) {}
};

struct missing_spin_c_data : std::runtime_error {
    explicit missing_spin_c_data(const std::string& m) : std::runtime_error("MissingSpinCData: " + m) {}
};

struct invalid_level : std::runtime_error {
    explicit invalid_level(const std::string& m) : std::runtime_error("InvalidLevel: " + m) {}
};

struct zero_weight : std::runtime_error {
    explicit zero_weight(const std::string& m) : std::runtime_error("ZeroWeight: " + m) {}
};

struct invalid_grading : std::runtime_error {
    explicit invalid_grading(const std::string& m) : std::runtime_error("InvalidGrading: " + m) {}
};

struct empty_weight_set : std::runtime_error {
    explicit empty_weight_set(const std::string& m) : std::runtime_error("EmptyWeightSet: " + m) {}
};

struct invalid_datum : std::runtime_error {
    explicit invalid_datum(const std::string& m) : std::runtime_error("InvalidDatum: " + m) {}
};

} // namespace lefk
