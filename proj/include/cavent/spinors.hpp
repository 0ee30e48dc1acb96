#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <string_view>

#include "units.hpp"

namespace cavent {

enum class BandSign : int { electron = 1, hole = -1 };

inline constexpr int sgn(BandSign b) { return static_cast<int>(b); }

struct Channel {
    BandSign s1, s2;
    bool operator==(const Channel&) const = default;
};

inline constexpr std::array<Channel, 4> channels{{
    {BandSign::electron, BandSign::electron},
    {BandSign::electron, BandSign::hole},
    {BandSign::hole, BandSign::electron},
    {BandSign::hole, BandSign::hole},
}};

inline constexpr std::string_view channel_name(Channel c)
{
    if (c.s1 == BandSign::electron) return c.s2 == BandSign::electron ? "ee" : "eh";
    return c.s2 == BandSign::electron ? "he" : "hh";
}

// basis order (A1A2, A1B2, B1A2, B1B2)
using Vec4 = std::array<cplx, 4>;

struct Spinor2 {
    cplx a, b;
};

inline double energy(double p, double m) { return std::hypot(p, m); }

// p/(+-E + m), switching to (+-E - m)/p where the first form cancels
inline double chi(double p, double m, BandSign band)
{
    const double e = energy(p, m);
    if (band == BandSign::electron) return p / (e + m);
    return p > 0 ? -(e + m) / p : -INFINITY;
}

// normalized pair (1, chi)/sqrt(1+chi^2), finite for infinite chi
inline std::pair<double, double> chi_components(double x)
{
    if (std::isinf(x)) return {0.0, x > 0 ? 1.0 : -1.0};
    const double n = std::sqrt(1.0 + x * x);
    return {1.0 / n, x / n};
}

inline Spinor2 spinor(double p, double phi, double m, BandSign band)
{
    auto [al, be] = chi_components(chi(p, m, band));
    return {cplx(al, 0.0), be * std::polar(1.0, phi)};
}

inline Vec4 tensor(const Spinor2& u, const Spinor2& v)
{
    return {u.a * v.a, u.a * v.b, u.b * v.a, u.b * v.b};
}

struct SpinorArgs {
    double p, phi, m;
    BandSign band;
};

// Closed form as printed: i(-b1 b2 e^{i(f1+f2)}, i b1 a2 e^{if1}, i a1 b2 e^{if2}, a1 a2).
// It equals 1/2 (g1+g2)x(g1+g2) acting on u1 x u2.
inline Vec4 vertex_product(const SpinorArgs& x1, const SpinorArgs& x2)
{
    auto [a1, b1] = chi_components(chi(x1.p, x1.m, x1.band));
    auto [a2, b2] = chi_components(chi(x2.p, x2.m, x2.band));
    const cplx e1 = std::polar(1.0, x1.phi), e2 = std::polar(1.0, x2.phi);
    const cplx i(0.0, 1.0);
    return {i * (-b1 * b2 * e1 * e2), i * (i * b1 * a2 * e1), i * (i * a1 * b2 * e2), i * (a1 * a2)};
}

// (g0 x g0 - g1 x g1 - g2 x g2)(u1 x u2) with g = sz(1, sx, sy)
inline Vec4 gamma_vertex_product(const SpinorArgs& x1, const SpinorArgs& x2)
{
    const Vec4 v = tensor(spinor(x1.p, x1.phi, x1.m, x1.band), spinor(x2.p, x2.phi, x2.m, x2.band));
    return {v[0], -v[1] + 2.0 * v[2], 2.0 * v[1] - v[2], v[3]};
}

} // namespace cavent
