#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "hybridmech/constants.hpp"
#include "hybridmech/errors.hpp"
#include "hybridmech/params.hpp"
#include "hybridmech/rates.hpp"

namespace hybridmech {

using Mat4 = Eigen::Matrix4d;
using Vec4 = Eigen::Vector4d;
using CMat4 = Eigen::Matrix4cd;

/// Quadrature ordering used by every 4-vector and 4x4 matrix below.
enum Quadrature : int { XM = 0, PM = 1, XAT = 2, PAT = 3 };

struct CoolingSettings {
    double gamma_cool = 0.0;  // s^-1, atomic amplitude decay is gamma_cool / 2
};

/// d<u>/dt = A <u>, dSigma/dt = A Sigma + Sigma A^T + D.
struct LinearModel {
    Mat4 drift = Mat4::Zero();
    Mat4 diffusion = Mat4::Zero();
};

/// Symmetrized second moments, vacuum = I/2, [x, p] = i.
struct GaussianState {
    Vec4 mean = Vec4::Zero();
    Mat4 cov = 0.5 * Mat4::Identity();

    static GaussianState vacuum() { return {}; }
    static GaussianState thermal(double n_m, double n_at) {
        GaussianState s;
        s.cov.diagonal() << n_m + 0.5, n_m + 0.5, n_at + 0.5, n_at + 0.5;
        return s;
    }
};

struct Occupations {
    double n_m = 0.0;
    double n_at = 0.0;
};

inline LinearModel build_model(const RateSet& r, const CoolingSettings& cooling) {
    if (!(cooling.gamma_cool >= 0.0) || !std::isfinite(cooling.gamma_cool)) {
        throw ValidationError("cooling.gamma_cool must be finite and >= 0");
    }
    const double gc = cooling.gamma_cool;
    LinearModel m;
    Mat4& A = m.drift;
    A(XM, XM) = -r.gamma_m / 2.0;
    A(XM, PM) = r.omega_m;
    A(PM, XM) = -r.omega_m;
    A(PM, PM) = -r.gamma_m / 2.0;
    A(PM, XAT) = r.g;
    A(XAT, XAT) = -gc / 2.0;
    A(XAT, PAT) = r.omega_at;
    A(PAT, XM) = r.g;
    A(PAT, XAT) = -r.omega_at;
    A(PAT, PAT) = -gc / 2.0;

    // Thermal bath drives both membrane quadratures; radiation-pressure and lattice
    // diffusion drive momenta only; the cooling reservoir is vacuum.
    const double thermal = r.gamma_m * (r.N_m_bar + 0.5);
    m.diffusion.diagonal() << thermal, thermal + r.gamma_m_diff, gc / 2.0,
        gc / 2.0 + r.gamma_at_diff;
    return m;
}

inline Eigen::Vector4cd drift_eigenvalues(const LinearModel& m) {
    return Eigen::EigenSolver<Mat4>(m.drift, false).eigenvalues();
}

inline double max_real_eigenvalue(const LinearModel& m) {
    return drift_eigenvalues(m).real().maxCoeff();
}

inline double spectral_radius(const LinearModel& m) { return drift_eigenvalues(m).cwiseAbs().maxCoeff(); }

inline Mat4 lyapunov_rhs(const LinearModel& m, const Mat4& cov) {
    return m.drift * cov + cov * m.drift.transpose() + m.diffusion;
}

/// Frobenius norm of A Sigma + Sigma A^T + D, accumulated in extended precision.
inline double lyapunov_residual(const LinearModel& m, const Mat4& cov) {
    using LMat = Eigen::Matrix<long double, 4, 4>;
    const LMat A = m.drift.cast<long double>();
    const LMat S = cov.cast<long double>();
    const LMat R = A * S + S * A.transpose() + m.diffusion.cast<long double>();
    return static_cast<double>(R.norm());
}

namespace detail {

constexpr int kUnique = 10;

inline int packed_index(int i, int j) {
    if (i > j) std::swap(i, j);
    // Row-major upper triangle: (0,0)..(0,3), (1,1)..(1,3), (2,2), (2,3), (3,3)
    return i * 4 - i * (i - 1) / 2 + (j - i);
}

template <typename Scalar>
Eigen::Matrix<Scalar, kUnique, kUnique> lyapunov_operator(const Eigen::Matrix<Scalar, 4, 4>& A) {
    Eigen::Matrix<Scalar, kUnique, kUnique> L = Eigen::Matrix<Scalar, kUnique, kUnique>::Zero();
    for (int i = 0; i < 4; ++i) {
        for (int j = i; j < 4; ++j) {
            const int row = packed_index(i, j);
            for (int k = 0; k < 4; ++k) {
                L(row, packed_index(k, j)) += A(i, k);
                L(row, packed_index(i, k)) += A(j, k);
            }
        }
    }
    return L;
}

template <typename Scalar>
Eigen::Matrix<Scalar, kUnique, 1> pack(const Eigen::Matrix<Scalar, 4, 4>& S) {
    Eigen::Matrix<Scalar, kUnique, 1> v;
    for (int i = 0; i < 4; ++i) {
        for (int j = i; j < 4; ++j) v(packed_index(i, j)) = S(i, j);
    }
    return v;
}

inline Mat4 unpack(const Eigen::Matrix<double, kUnique, 1>& v) {
    Mat4 S;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) S(i, j) = v(packed_index(i, j));
    }
    return S;
}

}  // namespace detail

/// Unique covariance of a strictly stable model, from the 10 x 10 linear system on the
/// independent entries with two steps of extended-precision iterative refinement.
inline GaussianState steady_state(const LinearModel& m) {
    if (!(max_real_eigenvalue(m) < 0.0)) {
        throw UnstableModelError("steady_state: drift matrix is not strictly stable");
    }
    using Vec10 = Eigen::Matrix<double, detail::kUnique, 1>;
    using LVec10 = Eigen::Matrix<long double, detail::kUnique, 1>;
    const auto L = detail::lyapunov_operator<double>(m.drift);
    const Eigen::FullPivLU<Eigen::Matrix<double, detail::kUnique, detail::kUnique>> lu(L);
    if (lu.rank() < detail::kUnique) {
        throw SingularSystemError("steady_state: Lyapunov system is rank deficient");
    }
    const Vec10 rhs = -detail::pack<double>(m.diffusion);
    Vec10 x = lu.solve(rhs);

    const auto L_ext = detail::lyapunov_operator<long double>(m.drift.cast<long double>());
    const LVec10 rhs_ext = rhs.cast<long double>();
    for (int pass = 0; pass < 2; ++pass) {
        const LVec10 res = rhs_ext - L_ext * x.cast<long double>();
        x += lu.solve(Vec10(res.cast<double>()));
    }
    if (!x.allFinite()) throw SingularSystemError("steady_state: non-finite solution");

    GaussianState s;
    s.cov = detail::unpack(x);
    const double d_norm = m.diffusion.norm();
    if (lyapunov_residual(m, s.cov) > 1e-10 * std::max(d_norm, 1e-300)) {
        throw SingularSystemError("steady_state: Lyapunov residual above 1e-10 ||D||");
    }
    return s;
}

inline Occupations occupations(const GaussianState& s) {
    Occupations n;
    n.n_m = 0.5 * (s.cov(XM, XM) + s.cov(PM, PM) - 1.0) +
            0.5 * (sqr(s.mean(XM)) + sqr(s.mean(PM)));
    n.n_at = 0.5 * (s.cov(XAT, XAT) + s.cov(PAT, PAT) - 1.0) +
             0.5 * (sqr(s.mean(XAT)) + sqr(s.mean(PAT)));
    return n;
}

inline Mat4 symplectic_form() {
    Mat4 omega = Mat4::Zero();
    omega(XM, PM) = 1.0;
    omega(PM, XM) = -1.0;
    omega(XAT, PAT) = 1.0;
    omega(PAT, XAT) = -1.0;
    return omega;
}

/// Smallest eigenvalue of Sigma + (i/2) Omega; a physical state has it >= 0.
inline double min_uncertainty_eigenvalue(const Mat4& cov) {
    const CMat4 H = cov.cast<cplx>() + cplx{0.0, 0.5} * symplectic_form().cast<cplx>();
    return Eigen::SelfAdjointEigenSolver<CMat4>(H, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
}

/// The two symplectic eigenvalues of Sigma, ascending.
inline std::array<double, 2> symplectic_eigenvalues(const Mat4& cov) {
    const Eigen::Vector4cd ev = Eigen::EigenSolver<Mat4>(symplectic_form() * cov, false).eigenvalues();
    std::array<double, 4> mags{};
    for (int i = 0; i < 4; ++i) mags[i] = std::abs(ev(i).imag());
    std::sort(mags.begin(), mags.end());
    return {0.5 * (mags[0] + mags[1]), 0.5 * (mags[2] + mags[3])};
}

struct EvolveOptions {
    // Integrator step; defaults to the stability bound 1 / (50 rho(A)).
    std::optional<double> max_step;
};

inline double max_stable_step(const LinearModel& m) {
    const double rho = spectral_radius(m);
    return rho > 0.0 ? 1.0 / (50.0 * rho) : INFINITY;
}

/// Gaussian state on each time of `t_grid` (which must start at 0 and increase). The
/// mean is propagated exactly with exp(A t); the covariance by classical RK4.
inline std::vector<GaussianState> evolve(const LinearModel& m, const GaussianState& initial,
                                         std::span<const double> t_grid,
                                         const EvolveOptions& opt = {}) {
    if (t_grid.empty() || t_grid.front() != 0.0) {
        throw ValidationError("evolve: t_grid must start at 0");
    }
    for (std::size_t i = 1; i < t_grid.size(); ++i) {
        if (!(t_grid[i] > t_grid[i - 1])) {
            throw ValidationError("evolve: t_grid must be strictly increasing");
        }
    }
    const double bound = max_stable_step(m);
    double step = bound;
    if (opt.max_step) {
        if (!(*opt.max_step > 0.0) || *opt.max_step > bound) {
            throw StepSizeError("evolve: requested step is coarser than 1/(50 rho(A))");
        }
        step = *opt.max_step;
    }

    auto rhs = [&](const Mat4& S) { return lyapunov_rhs(m, S); };
    std::vector<GaussianState> out;
    out.reserve(t_grid.size());
    out.push_back(initial);
    Mat4 S = initial.cov;
    for (std::size_t i = 1; i < t_grid.size(); ++i) {
        const double span = t_grid[i] - t_grid[i - 1];
        const auto sub = static_cast<long>(std::isfinite(step) ? std::ceil(span / step) : 1);
        const double h = span / static_cast<double>(sub);
        for (long s = 0; s < sub; ++s) {
            const Mat4 k1 = rhs(S);
            const Mat4 k2 = rhs(S + 0.5 * h * k1);
            const Mat4 k3 = rhs(S + 0.5 * h * k2);
            const Mat4 k4 = rhs(S + h * k3);
            S += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            S = 0.5 * (S + S.transpose()).eval();
        }
        GaussianState st;
        st.cov = S;
        st.mean = (m.drift * t_grid[i]).exp() * initial.mean;
        out.push_back(st);
    }
    return out;
}

struct NormalMode {
    double frequency = 0.0;  // |Im lambda|
    double decay = 0.0;      // -Re lambda
};

/// Drift eigenvalues with Im >= 0 as (frequency, decay), sorted by frequency.
inline std::vector<NormalMode> normal_modes(const LinearModel& m) {
    const Eigen::Vector4cd ev = drift_eigenvalues(m);
    std::vector<NormalMode> modes;
    for (int i = 0; i < 4; ++i) {
        if (ev(i).imag() >= 0.0) modes.push_back({ev(i).imag(), -ev(i).real()});
    }
    std::sort(modes.begin(), modes.end(), [](const NormalMode& a, const NormalMode& b) {
        return a.frequency != b.frequency ? a.frequency < b.frequency : a.decay < b.decay;
    });
    return modes;
}

struct SpectrumPoint {
    double omega = 0.0;
    Vec4 density = Vec4::Zero();  // S_xm, S_pm, S_xat, S_pat
};

/// Stationary spectral densities S(w) = M D M^dagger with M = (-i w I - A)^-1.
inline std::vector<SpectrumPoint> spectrum(const LinearModel& m, std::span<const double> omegas) {
    if (!(max_real_eigenvalue(m) < 0.0)) {
        throw UnstableModelError("spectrum: drift matrix is not strictly stable");
    }
    const CMat4 A = m.drift.cast<cplx>();
    const CMat4 D = m.diffusion.cast<cplx>();
    std::vector<SpectrumPoint> out;
    out.reserve(omegas.size());
    for (double w : omegas) {
        const CMat4 resolvent = (cplx{0.0, -w} * CMat4::Identity() - A).inverse();
        const CMat4 S = resolvent * D * resolvent.adjoint();
        SpectrumPoint p;
        p.omega = w;
        for (int i = 0; i < 4; ++i) p.density(i) = std::max(0.0, S(i, i).real());
        out.push_back(p);
    }
    return out;
}

struct AdiabaticCooling {
    double Gamma_cool = 0.0;
    double n_ss = 0.0;
    double n_ss_1 = 0.0;  // mechanical heating
    double n_ss_2 = 0.0;  // counter-rotating terms
    double n_ss_3 = 0.0;  // atomic heating
    double relaxation_rate = 0.0;  // (gamma_m + Gamma_cool) / 2
};

/// Adiabatic elimination of the laser-cooled atoms (valid for g << gamma_cool).
inline AdiabaticCooling adiabatic_cooling(const RateSet& r, const CoolingSettings& cooling) {
    const double gc = cooling.gamma_cool;
    if (!(gc > 0.0)) throw DivisionDomainError("adiabatic_cooling: gamma_cool must be > 0");
    AdiabaticCooling a;
    a.Gamma_cool = sqr(r.g) / gc / (1.0 + sqr(gc / (4.0 * r.omega_m)));
    a.n_ss_1 = (r.gamma_m * r.N_m_bar + r.gamma_m_diff / 2.0) / (r.gamma_m + a.Gamma_cool);
    a.n_ss_2 = sqr(gc / (4.0 * r.omega_at));
    a.n_ss_3 = r.gamma_at_diff / (2.0 * gc);
    a.n_ss = a.n_ss_1 + a.n_ss_2 + a.n_ss_3;
    a.relaxation_rate = 0.5 * (r.gamma_m + a.Gamma_cool);
    return a;
}

/// Leading behaviour of n_ss_1 for gamma_m << Gamma_cool:
/// light diffusion * (1 + a/F) + b N_support / F^2.
struct HighCoolingExpansion {
    double a = 0.0;
    double b = 0.0;
    double n_support = 0.0;
    double n_ss_1 = 0.0;
};

inline HighCoolingExpansion high_cooling_expansion(const SystemParams& sys, const RateSet& r,
                                                   const CoolingSettings& cooling) {
    const auto& pc = sys.constants();
    const auto& mem = sys.membrane();
    const auto& at = sys.atoms();
    const double F = sys.cavity().finesse;
    const double P = sys.cavity().power_P;
    const double omega_L = sys.derived().omega_L;
    const double rm2 = sqr(sys.derived().abs_r_m);
    const double gc = cooling.gamma_cool;

    HighCoolingExpansion e;
    e.a = pi * pc.k_B * mem.mass_M * sqr(pc.c) * mem.abs2 * r.gamma_m /
          (2.0 * pc.hbar * omega_L * rm2 * r.K_th);
    e.b = gc * mem.mass_M * sqr(pi) * r.gamma_m / (4.0 * sqr(at.omega_at) * at.mass_m * rm2 * at.N);
    e.n_support = pc.k_B * mem.T0 / (pc.hbar * mem.omega_m);
    e.n_ss_1 = 2.0 * gc * omega_L / (at.N * std::pow(at.omega_at, 3) * at.mass_m * sqr(pc.c)) * P *
                   (1.0 + e.a / F) +
               e.b * e.n_support / sqr(F);
    return e;
}

struct ExchangeSeries {
    std::vector<double> t;
    std::vector<double> n_m_noiseless;
    std::vector<double> n_at_noiseless;
    std::vector<double> n_m_noisy;
    std::vector<double> n_at_noisy;
};

/// Membrane prepared thermally with n0 quanta, atoms in vacuum, no laser cooling. Three
/// exchange periods 2 pi / g, with all dissipation and noise on and off.
inline ExchangeSeries exchange_demo(const RateSet& r, double n0, std::size_t points = 601) {
    if (!(r.g > 0.0)) throw ValidationError("exchange_demo: requires g > 0");
    if (!(n0 >= 0.0)) throw ValidationError("exchange_demo: n0 must be >= 0");
    if (points < 2) throw ValidationError("exchange_demo: need at least 2 points");

    RateSet quiet = r;
    quiet.gamma_m = 0.0;
    quiet.gamma_m_diff = 0.0;
    quiet.gamma_at_diff = 0.0;
    quiet.gamma_m_th = 0.0;

    ExchangeSeries out;
    const double t_end = 3.0 * two_pi / r.g;
    for (std::size_t i = 0; i < points; ++i) {
        out.t.push_back(t_end * static_cast<double>(i) / static_cast<double>(points - 1));
    }
    const GaussianState init = GaussianState::thermal(n0, 0.0);
    const auto quiet_states = evolve(build_model(quiet, {}), init, out.t);
    const auto noisy_states = evolve(build_model(r, {}), init, out.t);
    for (std::size_t i = 0; i < points; ++i) {
        const Occupations q = occupations(quiet_states[i]);
        const Occupations n = occupations(noisy_states[i]);
        out.n_m_noiseless.push_back(q.n_m);
        out.n_at_noiseless.push_back(q.n_at);
        out.n_m_noisy.push_back(n.n_m);
        out.n_at_noisy.push_back(n.n_at);
    }
    return out;
}

}  // namespace hybridmech
