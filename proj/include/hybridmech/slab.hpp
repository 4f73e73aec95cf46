#pragma once

#include <cmath>
#include <complex>

#include "hybridmech/errors.hpp"

namespace hybridmech {

using cplx = std::complex<double>;

/// Amplitude reflection and transmission of a lossless dielectric slab.
struct SlabResponse {
    cplx r;
    cplx t;
};

/// Slab of refractive index `n` and thickness `d` in vacuum, probed at wavenumber `k`.
inline SlabResponse slab(double n, double d, double k) {
    if (!(n >= 1.0) || !(d > 0.0) || !(k > 0.0)) {
        throw ValidationError("slab: requires n >= 1, d > 0, k > 0");
    }
    const double phase = k * d * n;
    const double s = std::sin(phase);
    const double c = std::cos(phase);
    const cplx denom{(1.0 + n * n) * s, 2.0 * n * c};
    return {(n * n - 1.0) * s / denom, cplx{0.0, 2.0 * n} / denom};
}

/// Intensity reflectivity of a quarter-wave slab is ((n^2-1)/(n^2+1))^2; this inverts it
/// for the amplitude |r|.
inline double quarter_wave_index_for(double abs_r) {
    if (!(abs_r >= 0.0 && abs_r < 1.0)) {
        throw ValidationError("quarter_wave_index_for: |r| must lie in [0, 1)");
    }
    return std::sqrt((1.0 + abs_r) / (1.0 - abs_r));
}

}  // namespace hybridmech
