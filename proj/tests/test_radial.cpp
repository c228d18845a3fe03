#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "rhls/errors.hpp"
#include "rhls/radial.hpp"
#include "rhls/special.hpp"

using namespace rhls;
using std::numbers::pi;

namespace {

std::mt19937_64 rng(77);
double unif(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }

// Random piecewise-linear profile on [0, R] with arbitrary (non-monotone) values.
RadialProfile random_profile(int dim, bool monotone) {
    const int m = 3 + static_cast<int>(unif(0, 8));
    std::vector<double> r{0.0}, v;
    for (int i = 1; i < m; ++i) r.push_back(r.back() + unif(0.1, 1.5));
    for (int i = 0; i < m; ++i) v.push_back(unif(0, 3));
    if (monotone) std::sort(v.begin(), v.end(), std::greater<>());
    return RadialProfile(r, v, dim);
}

HalfSpaceProfile random_half_profile() {
    std::vector<double> rho{0.0}, h{0.0};
    for (int i = 0; i < 3; ++i) rho.push_back(rho.back() + unif(0.2, 1.0));
    for (int i = 0; i < 3; ++i) h.push_back(h.back() + unif(0.2, 1.0));
    std::vector<double> v(rho.size() * h.size());
    for (double& x : v) x = unif(0, 2);
    return HalfSpaceProfile(rho, h, v);
}

HalfSpaceFunction unit_half_disk() {
    HalfSpaceFunction g;
    g.value = [](double s, double h) { return s * s + h * h <= 1 ? 1.0 : 0.0; };
    g.h_max = 1;
    g.sigma_max = [](double h) { return std::sqrt(std::max(0.0, 1 - h * h)); };
    return g;
}

const RadialProfile segment_indicator({0.0, 1.0}, {1.0, 1.0}, 1);

}  // namespace

TEST(Distribution, Examples) {
    const RadialProfile tent({0.0, 1.0}, {1.0, 0.0}, 1);
    EXPECT_NEAR(distribution(tent, 0.25).measure, 1.5, 1e-15);
    EXPECT_EQ(distribution(tent, 2.0).measure, 0.0);
    const RadialProfile disk({0.0, 1.0}, {1.0, 1.0}, 2);
    EXPECT_NEAR(distribution(disk, 0.5).measure, pi, 1e-15);
    const RadialProfile bumpy({0.0, 1.0, 2.0}, {1.0, 2.0, 0.0}, 1);
    EXPECT_FALSE(bumpy.monotone);
    EXPECT_THROW(distribution(bumpy, 0.5), NotMonotone);
    EXPECT_THROW(distribution(tent, 0.0), InvalidArgument);
}

TEST(Distribution, AgreesWithSuperlevelMeasure) {
    for (int t = 0; t < 50; ++t) {
        const RadialProfile f = random_profile(1 + t % 3, true);
        for (int k = 0; k < 10; ++k) {
            const double a = unif(0.01, f.max_value() * 1.1);
            EXPECT_NEAR(distribution(f, a).measure, superlevel_measure(f, a), 1e-12 * (1 + superlevel_measure(f, a)));
        }
    }
}

TEST(Profile, Validation) {
    EXPECT_THROW(RadialProfile({0.0, 0.0}, {1.0, 1.0}, 1), InvalidArgument);
    EXPECT_THROW(RadialProfile({0.0, 1.0}, {1.0, -1.0}, 1), NegativeValue);
    EXPECT_THROW(RadialProfile({0.0}, {1.0, 2.0}, 1), InvalidArgument);
    EXPECT_THROW(HalfSpaceProfile({0.0, 1.0}, {0.0, 1.0}, {1, 1, 1, -1}), NegativeValue);
    const RadialProfile f({0.5, 1.0}, {2.0, 1.0}, 1);
    EXPECT_EQ(f(0.1), 2.0);
    EXPECT_EQ(f(0.75), 1.5);
    EXPECT_EQ(f(1.5), 0.0);
}

TEST(Rearrange, MonotoneProfileIsUnchanged) {
    for (int t = 0; t < 20; ++t) {
        const RadialProfile f = random_profile(1 + t % 3, true);
        const RadialProfile g = rearrange(f);
        EXPECT_TRUE(g.monotone);
        for (int k = 0; k <= 200; ++k) {
            const double r = f.support() * k / 200.0;
            if (std::abs(r - f.support()) < 1e-9) continue;
            EXPECT_NEAR(g(r), f(r), 1e-9) << "r = " << r;
        }
    }
}

TEST(Rearrange, TwoLevelStep) {
    // f = 3 on 2 <= |x| <= 3, 1 on 5 <= |x| <= 6 in R^1: level sets of measure 2 and 2
    const RadialProfile s = rearrange_samples({3.0, 1.0, 0.0}, {2.0, 2.0, 10.0}, 1);
    EXPECT_TRUE(s.monotone);
    EXPECT_EQ(s(0.0), 3.0);
    EXPECT_EQ(s(0.999), 3.0);
    EXPECT_EQ(s(1.001), 1.0);
    EXPECT_EQ(s(1.999), 1.0);
    EXPECT_EQ(s(2.001), 0.0);
    EXPECT_NEAR(superlevel_measure(s, 2.0), 2.0, 1e-9);
    EXPECT_NEAR(superlevel_measure(s, 0.5), 4.0, 1e-9);
    EXPECT_THROW(rearrange_samples({1.0, -1.0}, {1.0, 1.0}, 1), NegativeValue);
}

TEST(Rearrange, EquimeasurableAndMassPreserving) {
    for (int t = 0; t < 30; ++t) {
        const int dim = 1 + t % 3;
        const RadialProfile f = random_profile(dim, false);
        const RadialProfile g = rearrange(f);
        ASSERT_TRUE(g.monotone);
        // Exact at the levels of f; between them the piecewise-linear
        // representation is refined to a 1e-7 measure tolerance.
        for (double a : f.values) {
            if (a <= 0) continue;
            const double mf = superlevel_measure(f, a), mg = distribution(g, a).measure;
            EXPECT_NEAR(mg, mf, 1e-9 * (1 + mf)) << "level " << a;
        }
        for (int k = 0; k < 20; ++k) {
            const double a = unif(0.01, f.max_value());
            const double mf = superlevel_measure(f, a), mg = distribution(g, a).measure;
            EXPECT_NEAR(mg, mf, 1e-6 * (1 + mf)) << "level " << a;
        }
        const double pf = lp_mass(f, 0.5).direct, pg = lp_mass(g, 0.5).direct;
        EXPECT_NEAR(pg, pf, 1e-6 * pf);
    }
}

TEST(LpMass, Examples) {
    const LpMass m = lp_mass(segment_indicator, 0.5);
    EXPECT_NEAR(m.direct, 2, 1e-12);
    EXPECT_NEAR(m.layer_cake, 2, 1e-12);
    RadialFunction f;
    f.dim = 1;
    f.value = [](double x) { return std::pow(1 + x * x, -2); };
    EXPECT_NEAR(lp_mass(f, 0.5), pi, 1e-10);
    EXPECT_THROW(lp_mass(f, 1.5), InvalidArgument);
}

TEST(LpMass, LayerCakeMatchesDirect) {
    for (int t = 0; t < 20; ++t) {
        const RadialProfile f = random_profile(1 + t % 3, t % 2 == 0);
        const double p = unif(0.2, 1.0);
        const LpMass m = lp_mass(f, p, QuadratureSpec{}.tol(1e-12, 1e-14));
        EXPECT_NEAR(m.layer_cake, m.direct, 1e-8 * m.direct) << "trial " << t;
    }
}

TEST(ReversedHolder, Examples) {
    auto one = [](double) { return 1.0; };
    EXPECT_NEAR(reversed_holder_gap(one, one, 0.5, 0, 1), 0, 1e-12);
    EXPECT_NEAR(reversed_holder_gap([](double x) { return x; }, one, 0.5, 0, 1), 1.0 / 18, 1e-11);
    EXPECT_THROW(reversed_holder_gap(one, [](double x) { return x - 0.5; }, 0.5, 0, 1), SignViolation);
}

TEST(ReversedHolder, RandomPolynomialsNonnegative) {
    for (int t = 0; t < 50; ++t) {
        double c[4], d[4];
        for (int i = 0; i < 4; ++i) {
            c[i] = unif(0, 2);
            d[i] = unif(0.05, 2);
        }
        auto phi = [&](double x) { return c[0] + c[1] * x + c[2] * x * x + c[3] * x * x * x; };
        auto psi = [&](double x) { return d[0] + d[1] * x + d[2] * x * x + d[3] * x * x * x; };
        const double p = unif(0.05, 0.95);
        EXPECT_GE(reversed_holder_gap(phi, psi, p, 0, unif(0.5, 3)), -1e-10);
    }
}

TEST(LayerCake, Examples) {
    const HalfSpaceFunction g = unit_half_disk();
    const LayerCakeCheck a = layercake_bound_check(segment_indicator, g, 0.5, 0.5, 0.0, 1, 1 << 18);
    EXPECT_NEAR(a.u, 2, 1e-15);
    EXPECT_NEAR(a.v, pi / 2, 4 * 0.02);
    EXPECT_NEAR(a.I_abc, 2 * a.v, 1e-12);
    EXPECT_TRUE(a.ok);

    const double cmax = layercake_c_max(2, 2.0, pi / 2);
    EXPECT_NEAR(cmax, std::sqrt(0.5), 1e-15);
    const LayerCakeCheck b = layercake_bound_check(segment_indicator, g, 0.5, 0.5, cmax, 2, 1 << 20);
    EXPECT_TRUE(b.ok);

    const LayerCakeCheck c = layercake_bound_check(segment_indicator, g, 0.5, 0.5, 10.0, 3, 1 << 16);
    EXPECT_EQ(c.I_abc, 0.0);
}

TEST(LayerCake, RandomTrialsInsideTheClaimRegion) {
    int violations = 0, trials = 0;
    for (int t = 0; t < 1000; ++t) {
        const int dim = 1 + t % 2;
        const RadialProfile f = random_profile(dim, true);
        const HalfSpaceFunction g = as_function(random_half_profile());
        const double a = unif(0.02, 0.95) * f.max_value();
        const double b = unif(0.02, 1.9);
        const double u = distribution(f, a).measure;
        // c range from an independent, larger-sample estimate of v(b)
        const McValue v = half_space_level_measure(g, dim + 1, b, 5000000 + t, 1 << 16);
        if (u == 0 || v.value == 0) continue;
        const double c = unif(0, 0.99) * layercake_c_max(dim + 1, u, v.value);
        const LayerCakeCheck r = layercake_bound_check(f, g, a, b, c, 1000 + t, 1 << 13);
        ++trials;
        if (!r.ok) ++violations;
    }
    EXPECT_GT(trials, 800);
    EXPECT_EQ(violations, 0);
}
