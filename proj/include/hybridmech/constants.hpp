#pragma once

#include <numbers>

namespace hybridmech {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// CODATA 2018 exact/recommended values, SI units.
struct PhysicalConstants {
    double hbar = 1.054571817e-34;       // J s
    double k_B = 1.380649e-23;           // J/K
    double c = 299792458.0;              // m/s
    double epsilon_0 = 8.8541878128e-12; // F/m

    static constexpr PhysicalConstants codata() { return {}; }
};

inline constexpr PhysicalConstants kCodata = PhysicalConstants::codata();

constexpr double sqr(double x) { return x * x; }

}  // namespace hybridmech
