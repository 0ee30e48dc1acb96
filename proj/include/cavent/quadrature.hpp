#pragma once

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "units.hpp"

namespace cavent {

struct GaussLegendre {
    std::vector<double> nodes;     // ascending, on [-1, 1]
    std::vector<double> weights;
};

// Newton on P_n from Chebyshev-type starting points
inline GaussLegendre gauss_legendre_nodes(int n)
{
    if (n < 1) throw std::invalid_argument("gauss_legendre_nodes: n must be >= 1");
    GaussLegendre g;
    g.nodes.assign(n, 0.0);
    g.weights.assign(n, 0.0);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = pk;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) {
                // one more derivative at the converged point
                p0 = 1.0; p1 = x;
                for (int k = 2; k <= n; ++k) {
                    double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = pk;
                }
                dp = n == 1 ? 1.0 : n * (x * p1 - p0) / (x * x - 1.0);
                break;
            }
        }
        if (n % 2 == 1 && i == half - 1) x = 0.0;   // middle node
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        g.nodes[i] = -x;
        g.nodes[n - 1 - i] = x;
        g.weights[i] = w;
        g.weights[n - 1 - i] = w;
    }
    return g;
}

// shared read-only rule per n
inline const GaussLegendre& gauss_legendre_cached(int n)
{
    static std::mutex mu;
    static std::map<int, std::unique_ptr<GaussLegendre>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[n];
    if (!slot) slot = std::make_unique<GaussLegendre>(gauss_legendre_nodes(n));
    return *slot;
}

} // namespace cavent
