#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "units.hpp"

namespace cavent {

struct ModeWeightTable {
    std::vector<double> weights;   // sin(n pi d1/L) sin(n pi d2/L), n = 1..n_max
    std::vector<double> k2;        // (n pi/L)^2
};

namespace detail {
// sin(pi x) with the argument reduced first, so integer x gives exact zero
inline double sin_pi(double x)
{
    double r = std::remainder(x, 2.0);   // [-1, 1]
    if (r == 0.0 || std::abs(r) == 1.0) return 0.0;
    return std::sin(pi * r);
}
} // namespace detail

inline ModeWeightTable mode_weights(double d1, double d2, double L, int n_max)
{
    if (!(L > 0)) throw std::invalid_argument("cavity length must be positive");
    if (n_max < 1) throw std::invalid_argument("n_max must be >= 1");
    if (!(d1 >= 0 && d1 <= L) || !(d2 >= 0 && d2 <= L))
        throw std::invalid_argument("layer position outside the cavity");
    ModeWeightTable t;
    t.weights.resize(n_max);
    t.k2.resize(n_max);
    for (int n = 1; n <= n_max; ++n) {
        t.weights[n - 1] = detail::sin_pi(n * d1 / L) * detail::sin_pi(n * d2 / L);
        const double k = n * pi / L;
        t.k2[n - 1] = k * k;
    }
    return t;
}

// sum_n w_n / (q0^2 - q^2 - k_n^2 + i eps)
inline cplx propagator_d(double q0, double q_spatial, const ModeWeightTable& t, double eps)
{
    const double qq = q0 * q0 - q_spatial * q_spatial;
    double re = 0.0, im = 0.0;
    for (std::size_t n = 0; n < t.weights.size(); ++n) {
        const double x = qq - t.k2[n];
        const double s = t.weights[n] / (x * x + eps * eps);
        re += s * x;
        im -= s * eps;
    }
    return {re, im};
}

} // namespace cavent
