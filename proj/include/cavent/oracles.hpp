#pragma once

// Independent reference computations used by the validation suites and tests.

#include <cmath>
#include <vector>

#include "bse.hpp"
#include "cavity.hpp"
#include "kernel.hpp"
#include "quadrature.hpp"
#include "spinors.hpp"

namespace cavent::oracle {

// ---- explicit 2x2 gamma matrices, g = sz(1, sx, sy)

using Mat2 = cavent::Mat2;
using Mat4 = cavent::Mat4;

inline Mat2 gamma(int mu)
{
    const cplx i(0, 1);
    switch (mu) {
    case 0: return {{{1.0, 0.0}, {0.0, -1.0}}};
    case 1: return {{{0.0, 1.0}, {-1.0, 0.0}}};
    default: return {{{0.0, -i}, {-i, 0.0}}};
    }
}

inline Mat4 kron(const Mat2& a, const Mat2& b)
{
    Mat4 k{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int r = 0; r < 2; ++r)
                for (int s = 0; s < 2; ++s) k[2 * i + r][2 * j + s] = a[i][j] * b[r][s];
    return k;
}

inline Mat4 operator+(const Mat4& a, const Mat4& b)
{
    Mat4 c{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) c[i][j] = a[i][j] + b[i][j];
    return c;
}

inline Mat4 operator*(cplx s, const Mat4& a)
{
    Mat4 c{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) c[i][j] = s * a[i][j];
    return c;
}

inline Vec4 apply(const Mat4& a, const Vec4& v)
{
    Vec4 r{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) r[i] += a[i][j] * v[j];
    return r;
}

// g0 x g0 - g1 x g1 - g2 x g2
inline Mat4 gamma12()
{
    return kron(gamma(0), gamma(0)) + cplx(-1) * kron(gamma(1), gamma(1)) + cplx(-1) * kron(gamma(2), gamma(2));
}

// 1/2 (g1 + g2) x (g1 + g2)
inline Mat4 printed_vertex_matrix()
{
    Mat2 s{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) s[i][j] = gamma(1)[i][j] + gamma(2)[i][j];
    return cplx(0.5) * kron(s, s);
}

// ---- smeared-delta brute force over the q plane

struct SmearedOptions {
    int n_angles = 2048;        // uniform trapezoid in phi_q
    double q_max = 8.0;         // eV
    double coarse_step = 2e-3;  // eV, scan step for locating |F| small
    int sub_nodes = 8;          // GL nodes per refinement cell
};

// integrand of the q-plane integral, without the delta weight
inline Vec4 plane_integrand(const KinematicConstraint& kc, double q, double phi_q, const KernelContext& ctx)
{
    const double cq = std::cos(phi_q), sq = std::sin(phi_q);
    const double x1 = kc.p1 * std::cos(kc.phi1) - q * cq, y1 = kc.p1 * std::sin(kc.phi1) - q * sq;
    const double x2 = kc.p2 * std::cos(kc.phi2) + q * cq, y2 = kc.p2 * std::sin(kc.phi2) + q * sq;
    const double k1 = std::hypot(x1, y1), k2 = std::hypot(x2, y2);
    const double q0 = kc.s1 * (kc.e1 - energy(k1, kc.m1));
    const cplx dprop = propagator_d(q0, q, *ctx.modes, ctx.eps);
    const SpinorArgs a1{k1, std::atan2(y1, x1), kc.m1, BandSign(kc.s1)};
    const SpinorArgs a2{k2, std::atan2(y2, x2), kc.m2, BandSign(kc.s2)};
    const Vec4 v = channel_vertex(ctx, a1, a2);
    const cplx pref = -ctx.kappa / (4.0 * pi * pi) * dprop;
    Vec4 out;
    for (int i = 0; i < 4; ++i) out[i] = pref * v[i];
    return out;
}

// int d^2q gauss_w(F(q)) * integrand, with d^2q = q dq dphi
inline Vec4 smeared_channel_integral(const KinematicConstraint& kc, const KernelContext& ctx, double width,
                                     const SmearedOptions& opt = {})
{
    const GaussLegendre& gl = gauss_legendre_cached(opt.sub_nodes);
    const double cut = 8.0 * width;
    const double norm = 1.0 / (std::sqrt(2.0 * pi) * width);
    const double h = opt.coarse_step;
    const int nq = int(std::ceil(opt.q_max / h));
    const double hs = 0.25 * width;
    Vec4 total{};
    std::vector<double> f(nq + 1);
    for (int j = 0; j < opt.n_angles; ++j) {
        const double phi = 2.0 * pi * j / opt.n_angles;
        for (int i = 0; i <= nq; ++i) f[i] = constraint_f(kc, i * h, phi);
        Vec4 line{};
        for (int i = 0; i < nq; ++i) {
            // |dF/dq| <= 2 bounds F inside the cell
            if (std::min(std::abs(f[i]), std::abs(f[i + 1])) > cut + 2.0 * h) continue;
            const double lo = i * h;
            const int ns = int(std::ceil(h / hs));
            const double step = h / ns;
            double fa = f[i];
            for (int k = 0; k < ns; ++k) {
                const double a = lo + k * step, b = a + step;
                const double fb = k + 1 == ns ? f[i + 1] : constraint_f(kc, b, phi);
                const bool skip = std::min(std::abs(fa), std::abs(fb)) > cut + 2.0 * step;
                fa = fb;
                if (skip) continue;
                for (int g = 0; g < opt.sub_nodes; ++g) {
                    const double q = 0.5 * (a + b) + 0.5 * step * gl.nodes[g];
                    const double fq = constraint_f(kc, q, phi);
                    const double wgt = 0.5 * step * gl.weights[g] * q * norm * std::exp(-0.5 * fq * fq / (width * width));
                    if (wgt == 0.0) continue;
                    const Vec4 v = plane_integrand(kc, q, phi, ctx);
                    for (int c = 0; c < 4; ++c) line[c] += wgt * v[c];
                }
            }
        }
        for (int c = 0; c < 4; ++c) total[c] += (2.0 * pi / opt.n_angles) * line[c];
    }
    return total;
}

struct SmearedEstimate {
    Vec4 coarse, fine, extrapolated;
};

// widths w1 > w2, extrapolated assuming an O(w^2) smearing error
inline SmearedEstimate smeared_extrapolated(const KinematicConstraint& kc, const KernelContext& ctx, double w1 = 1e-3,
                                            double w2 = 1e-4, const SmearedOptions& opt = {})
{
    SmearedEstimate e;
    e.coarse = smeared_channel_integral(kc, ctx, w1, opt);
    e.fine = smeared_channel_integral(kc, ctx, w2, opt);
    const double r = w2 * w2 / (w1 * w1 - w2 * w2);
    for (int c = 0; c < 4; ++c) e.extrapolated[c] = e.fine[c] + r * (e.fine[c] - e.coarse[c]);
    return e;
}

} // namespace cavent::oracle
