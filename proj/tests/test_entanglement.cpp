#include <gtest/gtest.h>

#include "cavent/entanglement.hpp"

using namespace cavent;

TEST(Reduce, Examples)
{
    const auto a = reduce(Vec4{1.0, 0.0, 0.0, 0.0});
    EXPECT_EQ(a.rho[0][0], cplx(1.0));
    EXPECT_EQ(a.rho[1][1], cplx(0.0));
    EXPECT_EQ(a.rho[0][1], cplx(0.0));
    const double r = 1 / std::sqrt(2.0);
    const auto b = reduce(Vec4{r, 0.0, 0.0, r});
    EXPECT_NEAR(b.rho[0][0].real(), 0.5, 1e-15);
    EXPECT_NEAR(b.rho[1][1].real(), 0.5, 1e-15);
    EXPECT_NEAR(std::abs(b.rho[0][1]), 0.0, 1e-15);
    const auto c = reduce(Vec4{0.5, 0.5, 0.5, 0.5});
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) EXPECT_NEAR(std::abs(c.rho[i][j] - 0.5), 0.0, 1e-15);
    EXPECT_LT(entropy(c), 1e-14);
}

TEST(Reduce, Hermitian)
{
    const Vec4 v{cplx(0.3, 0.1), cplx(-0.2, 0.5), cplx(0.4, -0.3), cplx(0.1, 0.2)};
    const double n = std::sqrt(std::norm(v[0]) + std::norm(v[1]) + std::norm(v[2]) + std::norm(v[3]));
    Vec4 u;
    for (int i = 0; i < 4; ++i) u[i] = v[i] / n;
    const auto r = reduce(u);
    EXPECT_EQ(r.rho[0][1], std::conj(r.rho[1][0]));
    EXPECT_EQ(r.rho[0][0].imag(), 0.0);
    EXPECT_NEAR(r.rho[0][0].real() + r.rho[1][1].real(), 1.0, 1e-15);
    EXPECT_NEAR(entropy(r), entropy(reduce_layer2(u)), 1e-14);
}

TEST(Entropy, Examples)
{
    ReducedDensityMatrix a;
    a.rho = {{{1.0, 0.0}, {0.0, 0.0}}};
    EXPECT_EQ(entropy(a), 0.0);
    a.rho = {{{0.5, 0.0}, {0.0, 0.5}}};
    EXPECT_NEAR(entropy(a), std::log(2.0), 1e-15);
    EXPECT_NEAR(entropy(a, LogBase::two), 1.0, 1e-15);
    a.rho = {{{0.75, 0.0}, {0.0, 0.25}}};
    EXPECT_NEAR(entropy(a), -0.75 * std::log(0.75) - 0.25 * std::log(0.25), 1e-15);
    EXPECT_NEAR(entropy(a), 0.562335, 1e-6);
}

TEST(Entropy, ClampsNoise)
{
    ReducedDensityMatrix a;
    a.rho = {{{1.0 + 1e-13, 0.0}, {0.0, -1e-13}}};
    const auto s = spectrum(a);
    EXPECT_EQ(s.lo, 0.0);
    EXPECT_EQ(s.hi, 1.0);
    EXPECT_EQ(entropy(a), 0.0);
}

TEST(EntropyAt, CouplingOff)
{
    RunConfig c;
    c.cavity.coupling = 0.0;
    const auto r = entropy_at(c);
    EXPECT_EQ(r.born_ratio, 0.0);
    EXPECT_LT(r.S, 1e-12);
}

TEST(EntropyAt, DiagonalNull)
{
    for (double p : {0.01, 0.07, 0.2}) {
        RunConfig c;
        c.kin = {p, p, 0.0, 0.0};
        EXPECT_LT(entropy_at(c).S, 1e-10) << p;
    }
}

TEST(EntropyAt, LayerSwap)
{
    RunConfig a;
    a.kin = {0.11, 0.06, 0.4, -0.9};
    a.layer2.lambda_so = 2.2e-3;
    a.layer1.sigma = {3e-3, 2e-6};
    RunConfig b = a;
    std::swap(b.layer1, b.layer2);
    b.kin = {a.kin.p2, a.kin.p1, a.kin.phi2, a.kin.phi1};
    const auto ra = entropy_at(a), rb = entropy_at(b);
    EXPECT_NEAR(ra.S, rb.S, 1e-10);
    EXPECT_NEAR(ra.born_ratio, rb.born_ratio, 1e-10 * ra.born_ratio);
}

TEST(EntropyAt, PurityAndRange)
{
    for (double s : {1e-5, 1e-3, 4.2e-3, 3e-2}) {
        RunConfig c;
        c.layer1.sigma = c.layer2.sigma = {s, 1e-6};
        const auto r = entropy_at(c);
        EXPECT_NEAR(r.S, r.S_layer2, 1e-10);
        EXPECT_GE(r.S, 0.0);
        EXPECT_LE(r.S, std::log(2.0) + 1e-12);
        EXPECT_GE(r.spec1.raw_lo, -1e-12);
        EXPECT_LE(r.spec1.raw_hi, 1.0 + 1e-12);
    }
}

// the printed vertex output picks up conjugate phases under a global rotation,
// so only half turns (real diagonal phase) leave S unchanged
TEST(EntropyAt, GlobalRotationPublishedVertex)
{
    RunConfig a;
    a.kin = {0.13, 0.09, 0.2, 1.1};
    const double s0 = entropy_at(a).S;
    RunConfig b = a;
    b.kin.phi1 = wrap_angle(a.kin.phi1 + pi);
    b.kin.phi2 = wrap_angle(a.kin.phi2 + pi);
    EXPECT_NEAR(entropy_at(b).S, s0, 1e-10);
    b.kin.phi1 = wrap_angle(a.kin.phi1 + pi / 3);
    b.kin.phi2 = wrap_angle(a.kin.phi2 + pi / 3);
    EXPECT_GT(std::abs(entropy_at(b).S - s0), 1e-3);
}

TEST(EntropyAt, GlobalRotationConsistentVertex)
{
    RunConfig a;
    a.convention = KernelConvention::consistent;
    a.kin = {0.13, 0.09, 0.2, 1.1};
    const double s0 = entropy_at(a).S;
    for (double d : {pi / 7, pi / 3, 2.1}) {
        RunConfig b = a;
        b.kin.phi1 = wrap_angle(a.kin.phi1 + d);
        b.kin.phi2 = wrap_angle(a.kin.phi2 + d);
        EXPECT_NEAR(entropy_at(b).S, s0, 1e-6 * s0);
    }
}

TEST(EntropyAt, BaseTwo)
{
    RunConfig c;
    const double sn = entropy_at(c).S;
    c.log_base = LogBase::two;
    EXPECT_NEAR(entropy_at(c).S, sn / std::log(2.0), 1e-15);
}

// frozen from an independent numpy implementation (dense Kronecker solve, eigvalsh)
// n_phi = 512, printed vertex
TEST(EntropyAt, FrozenReferenceValues)
{
    struct Case {
        const char* name;
        RunConfig cfg;
        double S, born;
    };
    std::vector<Case> cases;
    RunConfig c;
    cases.push_back({"baseline", c, 0.20626211932442445, 0.4362087668460342});
    c.kin = {0.05, 0.17, 0.4, -1.1};
    cases.push_back({"momenta", c, 0.005952378709822788, 0.09362620984042311});
    c = RunConfig{};
    c.layer1.sigma = c.layer2.sigma = {1e-3, 1e-6};
    cases.push_back({"sigma", c, 0.6791412753123456, 7.702186285435766});
    c = RunConfig{};
    c.layer1.d = 0.5;
    c.layer2.d = 1.3;
    c.cavity.n_max = 20;
    cases.push_back({"positions", c, 0.07214158621447002, 0.18848158431458686});
    c = RunConfig{};
    c.layer2.lambda_so = 1.2 * c.layer2.v_fermi / constants.c_si;
    cases.push_back({"masses", c, 0.2607664772606076, 0.5506868817592366});
    for (auto& k : cases) {
        const auto r = entropy_at(k.cfg);
        EXPECT_NEAR(r.S / k.S, 1.0, 1e-8) << k.name;
        EXPECT_NEAR(r.born_ratio / k.born, 1.0, 1e-8) << k.name;
    }
}
