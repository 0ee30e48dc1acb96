#pragma once

#include <algorithm>
#include <array>
#include <cmath>

#include "bse.hpp"
#include "cavity.hpp"
#include "kernel.hpp"
#include "units.hpp"

namespace cavent {

struct ReducedDensityMatrix {
    Mat2 rho{};
};

inline ReducedDensityMatrix hermitize(Mat2 r)
{
    const cplx off = 0.5 * (r[0][1] + std::conj(r[1][0]));
    ReducedDensityMatrix out;
    out.rho = {{{r[0][0].real(), off}, {std::conj(off), r[1][1].real()}}};
    return out;
}

// trace over layer 2
inline ReducedDensityMatrix reduce(const Vec4& c)
{
    Mat2 r{};
    r[0][0] = std::norm(c[0]) + std::norm(c[1]);
    r[1][1] = std::norm(c[2]) + std::norm(c[3]);
    r[0][1] = c[0] * std::conj(c[2]) + c[1] * std::conj(c[3]);
    r[1][0] = std::conj(r[0][1]);
    return hermitize(r);
}

inline ReducedDensityMatrix reduce(const TotalState& s) { return reduce(s.vec); }

// trace over layer 1
inline ReducedDensityMatrix reduce_layer2(const Vec4& c)
{
    Mat2 r{};
    r[0][0] = std::norm(c[0]) + std::norm(c[2]);
    r[1][1] = std::norm(c[1]) + std::norm(c[3]);
    r[0][1] = c[0] * std::conj(c[1]) + c[2] * std::conj(c[3]);
    r[1][0] = std::conj(r[0][1]);
    return hermitize(r);
}

struct Spectrum {
    double raw_hi, raw_lo;   // closed-form eigenvalues before cleaning
    double hi, lo;           // clamped to [0,1], renormalized
};

// nu = 1/2 +- sqrt((r00-r11)^2/4 + |r01|^2), using the trace for the 1/2
inline Spectrum spectrum(const ReducedDensityMatrix& m)
{
    const double a = m.rho[0][0].real(), d = m.rho[1][1].real();
    const double tr = a + d;
    const double rad = std::sqrt(0.25 * (a - d) * (a - d) + std::norm(m.rho[0][1]));
    Spectrum s;
    s.raw_hi = 0.5 * tr + rad;
    // small eigenvalue from det/hi, free of the cancellation in tr/2 - rad
    const double det = a * d - std::norm(m.rho[0][1]);
    s.raw_lo = s.raw_hi > 0 ? det / s.raw_hi : 0.5 * tr - rad;
    const double hi = std::clamp(s.raw_hi, 0.0, 1.0), lo = std::clamp(s.raw_lo, 0.0, 1.0);
    const double sum = hi + lo;
    s.hi = sum > 0 ? hi / sum : 0.5;
    s.lo = sum > 0 ? lo / sum : 0.5;
    return s;
}

inline double entropy(const ReducedDensityMatrix& m, LogBase base = LogBase::natural)
{
    const Spectrum s = spectrum(m);
    double h = 0.0;
    for (double v : {s.hi, s.lo})
        if (v > 0) h -= v * std::log(v);
    return base == LogBase::two ? h / std::log(2.0) : h;
}

struct PointResult {
    double S = 0.0;
    double born_ratio = 0.0;
    double S_layer2 = 0.0;
    ReducedDensityMatrix rho1, rho2;
    Spectrum spec1{};
    TotalState state;
    std::array<ChannelIntegrals, 4> integrals{};
    KernelDiagnostics diag;
};

inline PointResult entropy_at(const RunConfig& cfg)
{
    const double m1 = derived_mass(cfg.layer1), m2 = derived_mass(cfg.layer2);
    const ModeWeightTable modes = mode_weights(cfg.layer1.d, cfg.layer2.d, cfg.cavity.length_L, cfg.cavity.n_max);
    KernelContext ctx;
    ctx.modes = &modes;
    ctx.eps = cfg.cavity.epsilon_reg;
    ctx.kappa = cfg.cavity.coupling;
    ctx.tol = cfg.quad.degeneracy_tol;
    ctx.convention = cfg.convention;

    PointResult res;
    std::array<ChannelState, 4> psi0{}, psi1{};
    for (int c = 0; c < 4; ++c) {
        const Channel ch = channels[c];
        const KinematicConstraint kc = make_constraint(ch, cfg.kin, m1, m2);
        res.integrals[c] = channel_integrals(kc, ctx, cfg.quad, &res.diag);
        psi0[c] = free_state(ch, cfg.kin, m1, m2);
        const Mat2 s1 = inverse_propagator(cfg.kin.p1, cfg.kin.phi1, m1, cfg.layer1.sigma, ch.s1);
        const Mat2 s2 = inverse_propagator(cfg.kin.p2, cfg.kin.phi2, m2, cfg.layer2.sigma, ch.s2);
        psi1[c] = solve_correction(res.integrals[c], s1, s2);
    }
    res.state = total_state(psi0, psi1, channel_weights(cfg.weighting, cfg.weight_seed));
    res.born_ratio = res.state.born_ratio;
    res.rho1 = reduce(res.state);
    res.rho2 = reduce_layer2(res.state.vec);
    res.spec1 = spectrum(res.rho1);
    res.S = entropy(res.rho1, cfg.log_base);
    res.S_layer2 = entropy(res.rho2, cfg.log_base);
    return res;
}

} // namespace cavent
