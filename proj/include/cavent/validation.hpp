#pragma once

// Oracle suites shared by the command-line validator and the acceptance run.

#include <array>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "bse.hpp"
#include "kernel.hpp"
#include "oracles.hpp"
#include "quadrature.hpp"

namespace cavent::validation {

struct SuiteResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

inline std::string fmt(const char* f, double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

// integrates x^k exactly for k <= 2n-1
inline SuiteResult quadrature_exactness(int n_max = 64)
{
    double worst = 0;
    for (int n = 1; n <= n_max; ++n) {
        const auto g = gauss_legendre_nodes(n);
        for (int k = 0; k <= 2 * n - 1; ++k) {
            double s = 0;
            for (int i = 0; i < n; ++i) s += g.weights[i] * std::pow(g.nodes[i], k);
            const double exact = k % 2 ? 0.0 : 2.0 / (k + 1);
            worst = std::max(worst, std::abs(s - exact));
        }
    }
    return {"quadrature-exactness", worst < 1e-12, "n<=" + std::to_string(n_max) + " max err " + fmt("%.2e", worst)};
}

struct RandomDraw {
    KinematicConstraint kc;
    double phi_q;
};

inline RandomDraw random_draw(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> up(0.0, 0.5), ua(-pi, pi), um(0.5, 2.5), uq(0.0, 2 * pi);
    std::uniform_int_distribution<int> uc(0, 3);
    const Channel ch = channels[uc(rng)];
    Kinematics k{up(rng), up(rng), ua(rng), ua(rng)};
    const double m1 = um(rng), m2 = um(rng);
    RandomDraw d{make_constraint(ch, k, m1, m2), uq(rng)};
    return d;
}

inline SuiteResult root_consistency(unsigned long seed, int draws = 10000,
                                    KernelConvention conv = KernelConvention::published)
{
    std::mt19937_64 rng(seed);
    long accepted = 0, rejected = 0;
    double worst = 0;
    for (int i = 0; i < draws; ++i) {
        const auto d = random_draw(rng);
        const auto r = solve_root(d.kc, d.phi_q, 1e-10, conv);
        if (r.status == RootStatus::inconsistent) ++rejected;
        if (r.status != RootStatus::accepted) continue;
        ++accepted;
        worst = std::max(worst, std::abs(constraint_f(d.kc, r.q, d.phi_q)) / (d.kc.e1 + d.kc.e2));
    }
    return {"root-consistency", worst < 1e-9,
            std::to_string(accepted) + " accepted, " + std::to_string(rejected) + " rejected as off-branch, max |F|/(E1+E2) " +
                fmt("%.2e", worst)};
}

// central difference of F in long double
inline double fd_derivative(const KinematicConstraint& kc, double q, double phi_q)
{
    const long double h = 1e-6L * std::max(q, kc.m1);
    const long double lq = q, lp = phi_q;
    const long double lo = std::max(0.0L, lq - h), hi = lq + h;
    return double((constraint_f<long double>(kc, hi, lp) - constraint_f<long double>(kc, lo, lp)) / (hi - lo));
}

inline SuiteResult finite_difference(unsigned long seed, int draws = 10000)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uq(0.0, 2.0);
    double worst = 0;
    long checked = 0;
    for (int i = 0; i < draws; ++i) {
        const auto d = random_draw(rng);
        std::vector<double> qs{uq(rng)};
        if (auto r = q0_root(d.kc, d.phi_q)) qs.push_back(*r);
        for (double q : qs) {
            const double a = constraint_f_prime(d.kc, q, d.phi_q);
            if (!(std::abs(a) > 1e-6)) continue;
            ++checked;
            worst = std::max(worst, std::abs(a - fd_derivative(d.kc, q, d.phi_q)) / std::abs(a));
        }
    }
    return {"finite-difference", worst < 1e-5, std::to_string(checked) + " points, max rel err " + fmt("%.2e", worst)};
}

inline SuiteResult kronecker(unsigned long seed, int systems = 1000)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n(0.0, 1.0);
    auto z = [&] { return cplx(n(rng), n(rng)); };
    double worst = 0;
    for (int s = 0; s < systems; ++s) {
        Mat2 a{{{z(), z()}, {z(), z()}}}, b{{{z(), z()}, {z(), z()}}};
        Vec4 in{z(), z(), z(), z()};
        const Vec4 x = solve_correction(in, a, b);
        const Vec4 y = solve_dense(kron_system(a, b), in);
        Vec4 diff;
        for (int i = 0; i < 4; ++i) diff[i] = x[i] - y[i];
        worst = std::max(worst, norm4(diff) / norm4(y));
    }
    return {"kronecker-solve", worst < 1e-10, std::to_string(systems) + " systems, max rel err " + fmt("%.2e", worst)};
}

// Unequal masses keep the electron-hole constraint curves bounded.
struct SmearedCase {
    Kinematics kin;
    double m1, m2;
};

inline std::vector<SmearedCase> smeared_cases()
{
    return {{{0.13, 0.12, 0.0, 0.0}, 2.1258, 1.2},
            {{0.20, 0.05, 0.3, 2.0}, 2.1258, 1.2},
            {{0.10, 0.15, -1.0, 1.2}, 2.1258, 1.2},
            {{0.25, 0.18, 0.5, -2.5}, 2.1258, 1.2},
            {{0.07, 0.22, 2.8, 0.1}, 2.1258, 1.2}};
}

struct SmearedReport {
    SuiteResult summary;
    std::vector<std::string> lines;      // one per case and channel
    double worst_with_jacobian = 0;
    double worst_without_jacobian = 0;   // analytic side recomputed without the q factor
};

inline double max_rel(const Vec4& a, const Vec4& ref)
{
    double w = 0;
    for (int c = 0; c < 4; ++c) w = std::max(w, std::abs(a[c] - ref[c]) / std::abs(ref[c]));
    return w;
}

inline SmearedReport smeared_delta(KernelConvention conv, const std::vector<Channel>& which = {channels.begin(), channels.end()},
                                   int n_angles = 1024)
{
    SmearedReport rep;
    const auto modes = mode_weights(0.9, 1.1, 2.0, 10);
    KernelContext ctx;
    ctx.modes = &modes;
    ctx.convention = conv;
    KernelContext bare = ctx;
    bare.radial_jacobian = false;
    oracle::SmearedOptions opt;
    opt.n_angles = n_angles;
    const QuadratureParams quad{512, 1e-10};
    int idx = 0;
    bool ok = true;
    for (const auto& sc : smeared_cases()) {
        ++idx;
        for (Channel ch : which) {
            const auto kc = make_constraint(ch, sc.kin, sc.m1, sc.m2);
            const Vec4 ref = oracle::smeared_extrapolated(kc, ctx, 1e-3, 1e-4, opt).extrapolated;
            const double e = max_rel(channel_integrals(kc, ctx, quad), ref);
            const double e0 = max_rel(channel_integrals(kc, bare, quad), ref);
            rep.worst_with_jacobian = std::max(rep.worst_with_jacobian, e);
            rep.worst_without_jacobian = std::max(rep.worst_without_jacobian, e0);
            ok = ok && e < 1e-2;
            rep.lines.push_back("case " + std::to_string(idx) + " " + std::string(channel_name(ch)) + ": max rel err " +
                                fmt("%.2e", e) + (e < 1e-2 ? "" : "  <-- exceeds 1%"));
        }
    }
    rep.summary = {"smeared-delta", ok,
                   "max rel err " + fmt("%.2e", rep.worst_with_jacobian) + " (without the q Jacobian: " +
                       fmt("%.2e", rep.worst_without_jacobian) + ")"};
    return rep;
}

} // namespace cavent::validation
