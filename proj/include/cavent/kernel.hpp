#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "cavity.hpp"
#include "quadrature.hpp"
#include "spinors.hpp"
#include "units.hpp"

namespace cavent {

struct KinematicConstraint {
    int s1 = 1, s2 = 1;
    double p1 = 0, p2 = 0, phi1 = 0, phi2 = 0, m1 = 1, m2 = 1;
    double e1 = 1, e2 = 1;
};

inline KinematicConstraint make_constraint(Channel ch, const Kinematics& k, double m1, double m2)
{
    KinematicConstraint kc;
    kc.s1 = sgn(ch.s1);
    kc.s2 = sgn(ch.s2);
    kc.p1 = k.p1;
    kc.p2 = k.p2;
    kc.phi1 = k.phi1;
    kc.phi2 = k.phi2;
    kc.m1 = m1;
    kc.m2 = m2;
    kc.e1 = energy(k.p1, m1);
    kc.e2 = energy(k.p2, m2);
    return kc;
}

// F = s1 E1 + s2 E2 - s1 E1'(q) - s2 E2'(q); templated so oracles can run it in long double
template <class T>
T constraint_f(const KinematicConstraint& kc, T q, T phi_q)
{
    using std::cos;
    using std::sqrt;
    const T p1 = kc.p1, p2 = kc.p2, m1 = kc.m1, m2 = kc.m2;
    const T c1 = cos(T(kc.phi1) - phi_q), c2 = cos(T(kc.phi2) - phi_q);
    const T e1 = sqrt(p1 * p1 + m1 * m1), e2 = sqrt(p2 * p2 + m2 * m2);
    const T e1s = sqrt(p1 * p1 + q * q - 2 * p1 * q * c1 + m1 * m1);
    const T e2s = sqrt(p2 * p2 + q * q + 2 * p2 * q * c2 + m2 * m2);
    return kc.s1 * (e1 - e1s) + kc.s2 * (e2 - e2s);
}

inline double constraint_f(const KinematicConstraint& kc, double q, double phi_q)
{
    return constraint_f<double>(kc, q, phi_q);
}

inline double constraint_f_prime(const KinematicConstraint& kc, double q, double phi_q)
{
    const double c1 = std::cos(kc.phi1 - phi_q), c2 = std::cos(kc.phi2 - phi_q);
    const double e1s = std::sqrt(kc.p1 * kc.p1 + q * q - 2 * kc.p1 * q * c1 + kc.m1 * kc.m1);
    const double e2s = std::sqrt(kc.p2 * kc.p2 + q * q + 2 * kc.p2 * q * c2 + kc.m2 * kc.m2);
    return -kc.s1 * (q - kc.p1 * c1) / e1s - kc.s2 * (q + kc.p2 * c2) / e2s;
}

// F/q without cancellation, via E - E' = (E^2 - E'^2)/(E + E'). Its zeros are the
// nontrivial roots only; also returns the size of the two terms for scaling.
inline std::pair<double, double> constraint_g(const KinematicConstraint& kc, double q, double phi_q)
{
    const double a = kc.p1 * std::cos(kc.phi1 - phi_q), b = kc.p2 * std::cos(kc.phi2 - phi_q);
    const double e1s = std::sqrt(kc.p1 * kc.p1 + q * q - 2 * q * a + kc.m1 * kc.m1);
    const double e2s = std::sqrt(kc.p2 * kc.p2 + q * q + 2 * q * b + kc.m2 * kc.m2);
    const double t1 = kc.s1 * (2 * a - q) / (kc.e1 + e1s), t2 = -kc.s2 * (q + 2 * b) / (kc.e2 + e2s);
    return {t1 + t2, std::abs(t1) + std::abs(t2)};
}

enum class RootStatus { accepted, nonpositive, degenerate, inconsistent };

struct RootOutcome {
    RootStatus status;
    double q;
};

// Accepting an analytic root needs |F(q0)| <= tol (E1+E2) and |F/q| <= tol times its
// term scale. Squaring the constraint admits roots of other sign branches, which
// fail the first test; the second rejects points that only approach the trivial
// root q = 0 where F is flat.
inline constexpr double root_consistency_tol = 1e-11;

// Root numerator is K1 p1 cos(phi1-phi) - K2 p2 cos(phi2-phi), prefactor T.
struct RootCoefficients {
    double t, k1, k2;
};

inline RootCoefficients root_coefficients(const KinematicConstraint& kc, KernelConvention conv)
{
    if (conv == KernelConvention::published) {
        const int sg = kc.s1 * kc.s2;
        return {kc.e1 + sg * kc.e2, kc.e2, sg * kc.e1};
    }
    return {kc.s1 * kc.e1 + kc.s2 * kc.e2, kc.s2 * kc.e2, kc.s1 * kc.e1};
}

inline RootOutcome solve_root(const KinematicConstraint& kc, double phi_q, double tol,
                              KernelConvention conv = KernelConvention::published)
{
    const auto rc = root_coefficients(kc, conv);
    const double a = kc.p1 * std::cos(kc.phi1 - phi_q);
    const double b = kc.p2 * std::cos(kc.phi2 - phi_q);
    const double den = rc.t * rc.t - (a + b) * (a + b);
    if (!(std::abs(den) >= tol)) return {RootStatus::degenerate, 0.0};
    const double q = 2.0 * rc.t * (rc.k1 * a - rc.k2 * b) / den;
    if (!(q > 0.0)) return {RootStatus::nonpositive, q};
    if (std::abs(constraint_f(kc, q, phi_q)) > root_consistency_tol * (kc.e1 + kc.e2))
        return {RootStatus::inconsistent, q};
    const auto [g, gs] = constraint_g(kc, q, phi_q);
    if (std::abs(g) > root_consistency_tol * gs) return {RootStatus::inconsistent, q};
    return {RootStatus::accepted, q};
}

inline std::optional<double> q0_root(const KinematicConstraint& kc, double phi_q, double tol = 1e-10,
                                     KernelConvention conv = KernelConvention::published)
{
    auto r = solve_root(kc, phi_q, tol, conv);
    if (r.status != RootStatus::accepted) return std::nullopt;
    return r.q;
}

struct KernelDiagnostics {
    long nodes = 0;
    long accepted = 0;
    long nonpositive = 0;
    long skipped = 0;    // degenerate root denominator or |F'| below tolerance
    long rejected = 0;   // analytic root failing F = 0

    KernelDiagnostics& operator+=(const KernelDiagnostics& o)
    {
        nodes += o.nodes;
        accepted += o.accepted;
        nonpositive += o.nonpositive;
        skipped += o.skipped;
        rejected += o.rejected;
        return *this;
    }
};

struct KernelContext {
    const ModeWeightTable* modes = nullptr;
    double eps = 1e-9;
    double kappa = 0.0917;
    double tol = 1e-10;
    KernelConvention convention = KernelConvention::published;
    bool radial_jacobian = true;   // the q from d^2q = q dq dphi
};

inline Vec4 channel_vertex(const KernelContext& ctx, const SpinorArgs& x1, const SpinorArgs& x2)
{
    return ctx.convention == KernelConvention::published ? vertex_product(x1, x2)
                                                         : gamma_vertex_product(x1, x2);
}

// integrand of the phi_q integral after the delta reduction
inline Vec4 angular_integrand(const KinematicConstraint& kc, double phi_q, const KernelContext& ctx,
                              KernelDiagnostics* diag = nullptr)
{
    Vec4 out{};
    KernelDiagnostics local;
    KernelDiagnostics& d = diag ? *diag : local;
    ++d.nodes;
    const auto r = solve_root(kc, phi_q, ctx.tol, ctx.convention);
    switch (r.status) {
    case RootStatus::degenerate: ++d.skipped; return out;
    case RootStatus::nonpositive: ++d.nonpositive; return out;
    case RootStatus::inconsistent: ++d.rejected; return out;
    case RootStatus::accepted: break;
    }
    const double q = r.q;
    const double fp = constraint_f_prime(kc, q, phi_q);
    if (!(std::abs(fp) >= ctx.tol)) {
        ++d.skipped;
        return out;
    }
    ++d.accepted;
    if (ctx.kappa == 0.0) return out;

    const double cq = std::cos(phi_q), sq = std::sin(phi_q);
    const double x1 = kc.p1 * std::cos(kc.phi1) - q * cq, y1 = kc.p1 * std::sin(kc.phi1) - q * sq;
    const double x2 = kc.p2 * std::cos(kc.phi2) + q * cq, y2 = kc.p2 * std::sin(kc.phi2) + q * sq;
    const double k1 = std::hypot(x1, y1), k2 = std::hypot(x2, y2);
    const double e1s = energy(k1, kc.m1);
    const double q0 = kc.s1 * (kc.e1 - e1s);
    assert(std::abs(q0 + kc.s2 * (kc.e2 - energy(k2, kc.m2))) <= 1e-8 * (kc.e1 + kc.e2));

    const cplx dprop = propagator_d(q0, q, *ctx.modes, ctx.eps);
    const double jac = ctx.radial_jacobian ? q : 1.0;
    const cplx pref = -ctx.kappa / (4.0 * pi * pi) * jac / std::abs(fp) * dprop;
    const SpinorArgs a1{k1, std::atan2(y1, x1), kc.m1, BandSign(kc.s1)};
    const SpinorArgs a2{k2, std::atan2(y2, x2), kc.m2, BandSign(kc.s2)};
    const Vec4 v = channel_vertex(ctx, a1, a2);
    for (int i = 0; i < 4; ++i) out[i] = pref * v[i];
    return out;
}

// Angles in [0, 2pi) where the integrand jumps: the root changes sign through
// a zero of its numerator or of its denominator.
inline std::vector<double> angular_breakpoints(const KinematicConstraint& kc, KernelConvention conv)
{
    std::vector<double> bp;
    const auto rc = root_coefficients(kc, conv);
    auto add = [&](double a) {
        double r = std::fmod(a, 2.0 * pi);
        if (r < 0) r += 2.0 * pi;
        if (r >= 2.0 * pi) r = 0.0;
        bp.push_back(r);
    };
    const double A = rc.k1 * kc.p1 * std::cos(kc.phi1) - rc.k2 * kc.p2 * std::cos(kc.phi2);
    const double B = rc.k1 * kc.p1 * std::sin(kc.phi1) - rc.k2 * kc.p2 * std::sin(kc.phi2);
    if (std::hypot(A, B) > 0.0) {
        const double th = std::atan2(B, A);
        add(th + 0.5 * pi);
        add(th - 0.5 * pi);
    }
    const double px = kc.p1 * std::cos(kc.phi1) + kc.p2 * std::cos(kc.phi2);
    const double py = kc.p1 * std::sin(kc.phi1) + kc.p2 * std::sin(kc.phi2);
    const double P = std::hypot(px, py), T = std::abs(rc.t);
    if (P > T) {
        const double th = std::atan2(py, px);
        const double u = std::acos(T / P), w = std::acos(-T / P);
        add(th + u);
        add(th - u);
        add(th + w);
        add(th - w);
    }
    std::sort(bp.begin(), bp.end());
    std::vector<double> out;
    for (double x : bp)
        if (out.empty() || x - out.back() > 1e-13) out.push_back(x);
    if (out.size() > 1 && out.front() + 2.0 * pi - out.back() <= 1e-13) out.pop_back();
    return out;
}

using ChannelIntegrals = Vec4;

// Gauss-Legendre over [0, 2pi). With no breakpoints this is the single map
// phi = pi(x+1); otherwise n_phi nodes on each panel between breakpoints.
inline ChannelIntegrals channel_integrals(const KinematicConstraint& kc, const KernelContext& ctx,
                                          const QuadratureParams& quad, KernelDiagnostics* diag = nullptr)
{
    const GaussLegendre& gl = gauss_legendre_cached(quad.n_phi);
    ChannelIntegrals acc{};
    auto panel = [&](double lo, double hi) {
        const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
        for (int i = 0; i < quad.n_phi; ++i) {
            const Vec4 f = angular_integrand(kc, mid + half * gl.nodes[i], ctx, diag);
            const double w = half * gl.weights[i];
            for (int c = 0; c < 4; ++c) acc[c] += w * f[c];
        }
    };
    const auto bp = angular_breakpoints(kc, ctx.convention);
    if (bp.empty()) {
        panel(0.0, 2.0 * pi);
        return acc;
    }
    for (std::size_t k = 0; k < bp.size(); ++k) {
        const double lo = bp[k];
        const double hi = k + 1 < bp.size() ? bp[k + 1] : bp[0] + 2.0 * pi;
        panel(lo, hi);
    }
    return acc;
}

} // namespace cavent
