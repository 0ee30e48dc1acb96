#pragma once

#include <array>
#include <cmath>
#include <random>
#include <stdexcept>
#include <utility>

#include "kernel.hpp"
#include "spinors.hpp"
#include "units.hpp"

namespace cavent {

using Mat2 = std::array<std::array<cplx, 2>, 2>;
using Mat4 = std::array<std::array<cplx, 4>, 4>;

class SingularPropagator : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ZeroState : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr double det_guard = 1e-30;
inline constexpr double zero_state_guard = 1e-30;

using ChannelState = Vec4;

struct TotalState {
    Vec4 vec{};
    double born_ratio = 0.0;
};

inline ChannelState free_state(Channel ch, const Kinematics& k, double m1, double m2)
{
    return tensor(spinor(k.p1, k.phi1, m1, ch.s1), spinor(k.p2, k.phi2, m2, ch.s2));
}

// [[p0 - m - S, -p e^{-i phi}], [p e^{i phi}, -p0 - m - S]] with p0 = band * E
inline Mat2 inverse_propagator(double p, double phi, double m, cplx sigma, BandSign band)
{
    const double p0 = sgn(band) * energy(p, m);
    const cplx e = std::polar(p, phi);
    return {{{p0 - m - sigma, -std::conj(e)}, {e, -p0 - m - sigma}}};
}

inline cplx det2(const Mat2& a) { return a[0][0] * a[1][1] - a[0][1] * a[1][0]; }

inline Mat2 inverse2(const Mat2& a)
{
    const cplx d = det2(a);
    if (!(std::abs(d) >= det_guard)) throw SingularPropagator("2x2 propagator determinant below guard");
    return {{{a[1][1] / d, -a[0][1] / d}, {-a[1][0] / d, a[0][0] / d}}};
}

// standard Kronecker product: G vec(Phi) = vec(S1 Phi S2^T) on the row-major vec
inline Mat4 kron_system(const Mat2& s1, const Mat2& s2)
{
    Mat4 g{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l)
                    g[2 * i + k][2 * j + l] = s1[i][j] * s2[k][l];
    return g;
}

// solves (S1 x S2) psi = I as psi = S1^{-1} I S2^{-T} on the 2x2 reshape
inline ChannelState solve_correction(const ChannelIntegrals& in, const Mat2& s1, const Mat2& s2)
{
    const Mat2 a = inverse2(s1), b = inverse2(s2);
    const Mat2 x{{{in[0], in[1]}, {in[2], in[3]}}};
    Mat2 t{}, r{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            t[i][j] = a[i][0] * x[0][j] + a[i][1] * x[1][j];
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            r[i][j] = t[i][0] * b[j][0] + t[i][1] * b[j][1];
    return {r[0][0], r[0][1], r[1][0], r[1][1]};
}

// Gaussian elimination with partial pivoting
inline Vec4 solve_dense(Mat4 a, Vec4 y)
{
    for (int c = 0; c < 4; ++c) {
        int piv = c;
        for (int r = c + 1; r < 4; ++r)
            if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
        if (!(std::abs(a[piv][c]) > 0.0)) throw SingularPropagator("dense system singular");
        std::swap(a[c], a[piv]);
        std::swap(y[c], y[piv]);
        for (int r = c + 1; r < 4; ++r) {
            const cplx f = a[r][c] / a[c][c];
            for (int k = c; k < 4; ++k) a[r][k] -= f * a[c][k];
            y[r] -= f * y[c];
        }
    }
    Vec4 x{};
    for (int r = 3; r >= 0; --r) {
        cplx s = y[r];
        for (int k = r + 1; k < 4; ++k) s -= a[r][k] * x[k];
        x[r] = s / a[r][r];
    }
    return x;
}

using ChannelWeights = std::array<cplx, 4>;

// ee_doubled: (2,1,1,1); random_phase: unit weights with seeded phases on eh, he, hh
inline ChannelWeights channel_weights(ChannelWeighting kind, unsigned long seed)
{
    switch (kind) {
    case ChannelWeighting::equal: return {1.0, 1.0, 1.0, 1.0};
    case ChannelWeighting::ee_doubled: return {2.0, 1.0, 1.0, 1.0};
    case ChannelWeighting::random_phase: {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> u(0.0, 2.0 * pi);
        ChannelWeights w{1.0, 1.0, 1.0, 1.0};
        for (int c = 1; c < 4; ++c) w[c] = std::polar(1.0, u(rng));
        return w;
    }
    }
    return {1.0, 1.0, 1.0, 1.0};
}

inline double norm4(const Vec4& v)
{
    double s = 0.0;
    for (auto& z : v) s += std::norm(z);
    return std::sqrt(s);
}

inline TotalState total_state(const std::array<ChannelState, 4>& psi0, const std::array<ChannelState, 4>& psi1,
                              const ChannelWeights& w)
{
    Vec4 s0{}, s1{};
    for (int c = 0; c < 4; ++c)
        for (int i = 0; i < 4; ++i) {
            s0[i] += w[c] * psi0[c][i];
            s1[i] += w[c] * psi1[c][i];
        }
    TotalState t;
    const double n0 = norm4(s0);
    t.born_ratio = n0 > 0 ? norm4(s1) / n0 : (norm4(s1) > 0 ? INFINITY : 0.0);
    for (int i = 0; i < 4; ++i) t.vec[i] = s0[i] + s1[i];
    const double n = norm4(t.vec);
    if (!(n >= zero_state_guard)) throw ZeroState("total state vanishes");
    for (auto& z : t.vec) z /= n;
    return t;
}

} // namespace cavent
