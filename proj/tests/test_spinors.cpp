#include <gtest/gtest.h>

#include <random>

#include "cavent/oracles.hpp"
#include "cavent/spinors.hpp"

using namespace cavent;

namespace {

double max_diff(const Vec4& a, const Vec4& b)
{
    double m = 0;
    for (int i = 0; i < 4; ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

SpinorArgs random_args(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> up(0.0, 3.0), ua(-pi, pi), um(0.3, 2.5);
    std::bernoulli_distribution coin(0.5);
    return {up(rng), ua(rng), um(rng), coin(rng) ? BandSign::electron : BandSign::hole};
}

} // namespace

TEST(Energy, Examples)
{
    EXPECT_DOUBLE_EQ(energy(0.0, 2.13), 2.13);
    EXPECT_NEAR(energy(0.13, 2.13), std::sqrt(0.13 * 0.13 + 2.13 * 2.13), 1e-15);
    EXPECT_NEAR(energy(0.13, 2.13), 2.133963, 1e-6);
    EXPECT_DOUBLE_EQ(energy(3.0, 4.0), 5.0);
}

TEST(Chi, Examples)
{
    const double m = 2.13;
    EXPECT_EQ(chi(0.0, m, BandSign::electron), 0.0);
    EXPECT_NEAR(chi(m, m, BandSign::electron), std::sqrt(2.0) - 1.0, 1e-14);
    EXPECT_NEAR(chi(m, m, BandSign::hole), -(std::sqrt(2.0) + 1.0), 1e-13);
    EXPECT_TRUE(std::isinf(chi(0.0, m, BandSign::hole)));
}

TEST(Chi, ElectronHoleProductIsMinusOne)
{
    for (double m : {0.5, 2.1258})
        for (double p = 2e-6; p < 10 * m; p *= 1.37) {
            const double cp = chi(p, m, BandSign::electron), cm = chi(p, m, BandSign::hole);
            EXPECT_NEAR(cp * cm, -1.0, 1e-10) << p;
            EXPECT_GE(cp, 0.0);
            EXPECT_LT(cp, 1.0);
        }
}

TEST(Chi, SmallMomentumHoleUsesStableBranch)
{
    const double m = 2.1258, p = 1e-7;
    // (-E - m)/p to full precision
    const double ref = -(energy(p, m) + m) / p;
    EXPECT_NEAR(chi(p, m, BandSign::hole) / ref, 1.0, 1e-14);
}

TEST(Spinor, Examples)
{
    const double m = 2.13;
    Spinor2 u = spinor(0.0, 0.7, m, BandSign::electron);
    EXPECT_EQ(u.a, cplx(1.0));
    EXPECT_EQ(u.b, cplx(0.0));
    u = spinor(m, 0.0, m, BandSign::electron);
    EXPECT_NEAR(u.a.real(), 0.92388, 1e-5);
    EXPECT_NEAR(u.b.real(), 0.38268, 1e-5);
    const double t = std::atan(std::sqrt(2.0) - 1.0);
    EXPECT_NEAR(u.a.real(), std::cos(t), 1e-14);
    EXPECT_NEAR(u.b.real(), std::sin(t), 1e-14);
}

TEST(Spinor, UnitNormAndOrthogonality)
{
    std::mt19937_64 rng(7);
    for (int i = 0; i < 200; ++i) {
        auto x = random_args(rng);
        const auto u = spinor(x.p, x.phi, x.m, BandSign::electron);
        const auto v = spinor(x.p, x.phi, x.m, BandSign::hole);
        EXPECT_NEAR(std::norm(u.a) + std::norm(u.b), 1.0, 1e-12);
        EXPECT_NEAR(std::norm(v.a) + std::norm(v.b), 1.0, 1e-12);
        EXPECT_GE(u.a.real(), 0.0);
        EXPECT_EQ(u.a.imag(), 0.0);
        if (x.p > 1e-6) EXPECT_LT(std::abs(std::conj(u.a) * v.a + std::conj(u.b) * v.b), 1e-10);
    }
}

TEST(Spinor, HoleAtRestIsContinuousLimit)
{
    const double m = 2.1258, phi = 0.9;
    const auto v0 = spinor(0.0, phi, m, BandSign::hole);
    const auto v1 = spinor(1e-9, phi, m, BandSign::hole);
    EXPECT_EQ(v0.a, cplx(0.0));
    EXPECT_NEAR(std::abs(v0.b - (-std::polar(1.0, phi))), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(v0.a - v1.a), 0.0, 1e-9);
    EXPECT_NEAR(std::abs(v0.b - v1.b), 0.0, 1e-9);
}

TEST(Vertex, BothMomentaZero)
{
    const SpinorArgs z{0.0, 0.3, 2.0, BandSign::electron};
    const Vec4 v = vertex_product(z, z);
    EXPECT_LT(max_diff(v, {0.0, 0.0, 0.0, cplx(0, 1)}), 1e-15);
}

// the printed closed form equals 1/2 (g1+g2)x(g1+g2) on u1 x u2
TEST(Vertex, PrintedFormMatchesMatrixOracle)
{
    std::mt19937_64 rng(11);
    const Mat4 M = oracle::printed_vertex_matrix();
    for (int i = 0; i < 100; ++i) {
        const auto x1 = random_args(rng), x2 = random_args(rng);
        const Vec4 u = tensor(spinor(x1.p, x1.phi, x1.m, x1.band), spinor(x2.p, x2.phi, x2.m, x2.band));
        EXPECT_LT(max_diff(vertex_product(x1, x2), oracle::apply(M, u)), 1e-12);
    }
}

TEST(Vertex, GammaContractionMatchesMatrixOracle)
{
    std::mt19937_64 rng(12);
    const Mat4 G = oracle::gamma12();
    for (int i = 0; i < 100; ++i) {
        const auto x1 = random_args(rng), x2 = random_args(rng);
        const Vec4 u = tensor(spinor(x1.p, x1.phi, x1.m, x1.band), spinor(x2.p, x2.phi, x2.m, x2.band));
        EXPECT_LT(max_diff(gamma_vertex_product(x1, x2), oracle::apply(G, u)), 1e-12);
    }
}

TEST(Vertex, PrintedFormDiffersFromGammaContraction)
{
    std::mt19937_64 rng(13);
    double worst = 0;
    for (int i = 0; i < 100; ++i) {
        const auto x1 = random_args(rng), x2 = random_args(rng);
        worst = std::max(worst, max_diff(vertex_product(x1, x2), gamma_vertex_product(x1, x2)));
    }
    EXPECT_GT(worst, 0.5);
}

TEST(Vertex, LayerSwapPermutesComponents)
{
    std::mt19937_64 rng(14);
    for (int i = 0; i < 100; ++i) {
        const auto x1 = random_args(rng), x2 = random_args(rng);
        for (bool published : {true, false}) {
            const Vec4 a = published ? vertex_product(x1, x2) : gamma_vertex_product(x1, x2);
            const Vec4 b = published ? vertex_product(x2, x1) : gamma_vertex_product(x2, x1);
            EXPECT_LT(max_diff(a, {b[0], b[2], b[1], b[3]}), 1e-14);
        }
    }
}

TEST(Vertex, HoleAtRestFinite)
{
    const SpinorArgs h{0.0, 0.4, 2.0, BandSign::hole}, e{0.1, -0.2, 2.0, BandSign::electron};
    for (auto& z : vertex_product(h, e)) EXPECT_TRUE(std::isfinite(z.real()) && std::isfinite(z.imag()));
    for (auto& z : gamma_vertex_product(h, e)) EXPECT_TRUE(std::isfinite(z.real()) && std::isfinite(z.imag()));
}

TEST(Channels, Names)
{
    EXPECT_EQ(channel_name(channels[0]), "ee");
    EXPECT_EQ(channel_name(channels[1]), "eh");
    EXPECT_EQ(channel_name(channels[2]), "he");
    EXPECT_EQ(channel_name(channels[3]), "hh");
}
