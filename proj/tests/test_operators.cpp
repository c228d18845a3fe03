#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "rhls/errors.hpp"
#include "rhls/montecarlo.hpp"
#include "rhls/operators.hpp"
#include "rhls/special.hpp"

using namespace rhls;
using std::numbers::pi;

namespace {

RadialFunction indicator(double R, int dim = 1) {
    RadialFunction f;
    f.dim = dim;
    f.support = R;
    f.value = [](double) { return 1.0; };
    return f;
}

RadialFunction algebraic(double expo, int dim = 1) {
    RadialFunction f;
    f.dim = dim;
    f.value = [expo](double r) { return std::pow(1 + r * r, expo); };
    return f;
}

HalfSpaceFunction half_ball(double R, double scale = 1.0) {
    HalfSpaceFunction g;
    g.value = [R, scale](double s, double h) { return s * s + h * h <= R * R ? scale : 0.0; };
    g.h_max = R;
    g.sigma_max = [R](double h) { return std::sqrt(std::max(0.0, R * R - h * h)); };
    return g;
}

const double kSharp22 = 1 / (std::sqrt(2.0) * std::pow(pi, 1.5));

}  // namespace

TEST(Extend, Examples) {
    const RadialFunction f = indicator(1);
    EXPECT_NEAR(extend(f, 1, 0, 0), 1, 1e-12);
    EXPECT_NEAR(extend(f, 1, 0, 1), std::sqrt(2.0) + std::asinh(1.0), 1e-11);
    EXPECT_NEAR(extend(f, 1, 1e3, 0) / 1e3, 2, 1e-12);
    EXPECT_THROW(extend(f, 1, 0, -1), InvalidArgument);
}

TEST(Extend, ClosedFormAtLambdaTwo) {
    // int |x-y|^2 (1+x^2)^{-2} dx = (pi/2)(1 + |y|^2)
    const RadialFunction f = algebraic(-2);
    for (double rho : {0.0, 0.3, 2.0, 40.0})
        for (double h : {0.0, 0.5, 3.0}) {
            const double want = 0.5 * pi * (1 + rho * rho + h * h);
            EXPECT_NEAR(extend(f, 2, rho, h), want, 1e-10 * want);
        }
}

TEST(Extend, StrictlyIncreasingInEachVariable) {
    for (int n : {2, 3}) {
        RadialFunction f = algebraic(-1.5, n - 1);
        f.support = 3;
        for (double lambda : {0.5, 1.7}) {
            for (double h : {0.0, 0.4, 2.0}) {
                double prev = -1;
                for (double rho = 0; rho <= 6; rho += 0.37) {
                    const double v = extend(f, lambda, rho, h);
                    EXPECT_GT(v, prev);
                    prev = v;
                }
            }
            for (double rho : {0.0, 1.0, 5.0}) {
                double prev = -1;
                for (double h = 0; h <= 6; h += 0.41) {
                    const double v = extend(f, lambda, rho, h);
                    EXPECT_GT(v, prev);
                    prev = v;
                }
            }
        }
    }
}

TEST(Extend, GrowthLimitIsTheMass) {
    for (int n : {2, 3}) {
        RadialFunction f = algebraic(-1, n - 1);
        f.support = 2;
        const double mass = sphere_area(n - 2) *
                            integrate([&](double s) { return f(s) * std::pow(s, n - 2); }, 0, 2, QuadratureSpec{}).value;
        for (double lambda : {0.5, 1.0, 2.5}) {
            const double ratio = extend(f, lambda, 1e3, 0) / std::pow(1e3, lambda);
            EXPECT_NEAR(ratio, mass, 1e-3 * mass);
        }
    }
}

TEST(Extend, ZonalKernelMatchesDirectSphereQuadrature) {
    // n = 4: average over S^2 of |x - y|^lambda with |x'| = s, |y'| = rho
    const double rho = 0.7, s = 1.3, h = 0.2, lambda = 1.3;
    const double z = zonal_kernel(4, lambda, rho, s, h, QuadratureSpec{}.tol(1e-12, 1e-15));
    const double direct = integrate_sphere_zonal(
                              [&](double c) { return std::pow(rho * rho + s * s - 2 * rho * s * c + h * h, lambda / 2); },
                              2, QuadratureSpec{}.tol(1e-12, 1e-15))
                              .value;
    EXPECT_NEAR(z, direct, 1e-11 * direct);
}

TEST(Restrict, Examples) {
    const HalfSpaceFunction g = half_ball(1);
    EXPECT_NEAR(restrict(g, 2, 2, 0), pi / 4, 1e-10);
    EXPECT_NEAR(restrict(g, 2, 2, 1e3) / 1e6, pi / 2, 1e-3 * pi / 2);
    EXPECT_EQ(restrict(half_ball(1, 0.0), 2, 2, 0.5), 0.0);
}

TEST(Restrict, GrowthLimitIsTheMass) {
    // int over the unit half ball in R^3_+ is 2 pi / 3
    const HalfSpaceFunction g = half_ball(1);
    for (double lambda : {0.5, 1.5}) EXPECT_NEAR(restrict(g, 3, lambda, 1e3) / std::pow(1e3, lambda), 2 * pi / 3, 2e-3);
}

TEST(Duality, IndicatorPairAgainstMonteCarlo) {
    const Duality d = duality_gap(indicator(1), half_ball(1), 2);
    EXPECT_LE(d.gap, 1e-8);
    EXPECT_NEAR(d.extension_side, 5 * pi / 6, 1e-9);
    const SampledDensity f{[](std::span<const double> x) { return std::abs(x[0]) <= 1 ? 1.0 : 0.0; }, 1.0};
    const SampledDensity g{[](std::span<const double> y) { return y[0] * y[0] + y[1] * y[1] <= 1 ? 1.0 : 0.0; }, 1.0};
    const IntegralResult mc = monte_carlo_pair_integral(
        f, g, [](std::span<const double> x, std::span<const double> y) {
            return (x[0] - y[0]) * (x[0] - y[0]) + y[1] * y[1];
        },
        2, 5, 1 << 18);
    EXPECT_NEAR(d.extension_side, mc.value, 3 * mc.error_estimate);
}

TEST(Duality, ZeroAndBilinearity) {
    RadialFunction zero = indicator(1);
    zero.value = [](double) { return 0.0; };
    const Duality z = duality_gap(zero, half_ball(1), 1.5);
    EXPECT_EQ(z.extension_side, 0.0);
    EXPECT_EQ(z.restriction_side, 0.0);

    const RadialFunction f = indicator(0.8);
    RadialFunction f2 = f;
    f2.value = [](double) { return 2.0; };
    const Duality a = duality_gap(f, half_ball(1.2), 1.5);
    const Duality b = duality_gap(f2, half_ball(1.2, 3.0), 1.5);
    EXPECT_NEAR(b.extension_side, 6 * a.extension_side, 1e-10 * b.extension_side);
    EXPECT_LE(b.gap, 1e-8);
}

TEST(Duality, SmoothCompactPairsInHigherDimension) {
    RadialFunction f = indicator(1.5, 2);
    f.value = [](double r) { return std::pow(1 - r * r / 2.25, 2); };
    HalfSpaceFunction g = half_ball(1);
    g.value = [](double s, double h) { return std::max(0.0, 1 - s * s - h * h); };
    const Duality d = duality_gap(f, g, 1.3);
    EXPECT_LE(d.gap, 1e-8);
}

TEST(Quotient, ExtremalPairAtLambdaTwo) {
    const ExponentSet e = from_lambda_p(2, 2, 0.5);
    const HalfSpaceFunction g = whole_half_space([](double s, double h) { return std::pow(1 + s * s + h * h, -3); });
    const Quotient q = functional_quotient(algebraic(-2), g, e);
    EXPECT_NEAR(q.quotient, kSharp22, 1e-4);
    EXPECT_NEAR(q.norm_f, pi * pi, 1e-7);
}

TEST(Quotient, IndicatorPairExceedsTheConstantAndIsScaleInvariant) {
    const ExponentSet e = from_lambda_p(2, 2, 0.5);
    const Quotient q = functional_quotient(indicator(1), half_ball(1), e);
    EXPECT_GT(q.quotient, kSharp22);
    EXPECT_NEAR(q.I, 5 * pi / 6, 1e-8);
    RadialFunction f = indicator(1);
    f.value = [](double) { return 7.0; };
    const Quotient s = functional_quotient(f, half_ball(1, 0.2), e);
    EXPECT_NEAR(s.quotient, q.quotient, 1e-10 * q.quotient);
    RadialFunction zero = indicator(1);
    zero.value = [](double) { return 0.0; };
    EXPECT_THROW(functional_quotient(zero, half_ball(1), e), ZeroFunction);
}

TEST(QNorm, Examples) {
    const HalfSpaceFunction field = whole_half_space([](double s, double h) { return 1 + s * s + h * h; });
    EXPECT_NEAR(qnorm(field, -2, 2), 1 / std::sqrt(pi / 2), 1e-9);
    HalfSpaceFunction box;
    box.value = [](double, double) { return 3.5; };
    box.h_max = 1;
    box.sigma_max = [](double) { return 0.5; };
    EXPECT_NEAR(qnorm(box, -1.7, 2), 3.5, 1e-12);
    HalfSpaceFunction bad = box;
    bad.value = [](double s, double) { return s - 0.25; };
    EXPECT_THROW(qnorm(bad, -2, 2), NonPositiveField);
    EXPECT_THROW(qnorm(field, 0.5, 2), InvalidArgument);
}

TEST(QNorm, DecreasesUnderPointwiseIncrease) {
    const HalfSpaceFunction a = whole_half_space([](double s, double h) { return 1 + s * s + h * h; });
    const HalfSpaceFunction b = whole_half_space([](double s, double h) { return 1.2 + s * s + h * h + 0.1 * h; });
    EXPECT_GT(qnorm(b, -2, 2), qnorm(a, -2, 2));
}

TEST(QNorm, ExtensionOfTheExtremal) {
    const ExponentSet e = from_lambda_p(2, 2, 0.5);
    EXPECT_NEAR(extension_quotient(algebraic(-2), e), kSharp22, 1e-4);
}

TEST(StepFunctions, MatchRadialPath) {
    StepFunction f{1, {{{-1.0}, {1.0}, 1.0}}};
    for (double y1 : {0.0, 0.4, 3.0})
        for (double h : {0.0, 1.0})
            EXPECT_NEAR(step_extend(f, 1.4, y1, h), extend(indicator(1), 1.4, std::abs(y1), h), 1e-10);
    EXPECT_NEAR(f.power_mass(0.5), 2, 1e-15);
    const Vec in{0.5}, out{1.5};
    EXPECT_EQ(f(in), 1.0);
    EXPECT_EQ(f(out), 0.0);
}

TEST(StepFunctions, PairQuotientMatchesQuadrature) {
    const ExponentSet e = from_lambda_p(2, 2, 0.5);
    StepFunction f{1, {{{-1.0}, {1.0}, 1.0}}};
    StepFunction g{2, {{{-0.5, 0.0}, {0.5, 1.0}, 2.0}}};
    const McQuotient q = step_pair_quotient(f, g, e, 3, 1 << 18);
    // int_{-1}^{1} int_{box} (x-y1)^2 + y2^2 = (2/3 + 2/12) + 2/3, times the value 2
    const double exact = 2 * (2.0 / 3 + 2.0 / 12 + 2.0 / 3);
    EXPECT_NEAR(q.I, exact, 3 * q.I_std_error);
    EXPECT_THROW(step_pair_quotient(g, f, e, 1, 100), InvalidArgument);
}

TEST(ReducedKernel, PositiveOnCompacta) {
    for (int n : {2, 3})
        for (double lambda : {0.5, 2.0}) {
            const ReducedKernel k = reduced_kernel(diagonal_exponents(n, lambda));
            double lo = INFINITY;
            for (double s = -2; s <= 2; s += 0.1)
                for (double h = 0; h <= 2; h += 0.1) lo = std::min(lo, k.L(s, h));
            EXPECT_GT(lo, 0.1);
        }
}

TEST(ReducedKernel, Asymptotics) {
    for (int n : {2, 3, 4})
        for (double lambda : {0.7, 2.0, 3.0}) {
            const ExponentSet e = diagonal_exponents(n, lambda);
            const ReducedKernel k = reduced_kernel(e);
            EXPECT_NEAR(n / e.q + lambda / 2, 0, 1e-12);
            const double area = sphere_area(n - 2);
            for (auto [s, h] : {std::pair{30.0, 0.0}, std::pair{-30.0, 0.0}, std::pair{20.0, 1e4}, std::pair{0.0, 1e7}}) {
                const double model = std::pow(std::exp(s) * (1 + h * h) + std::exp(-s), lambda / 2);
                EXPECT_NEAR(k.L(s, h) / model, area, 1e-5 * area) << "s=" << s << " h=" << h;
            }
        }
}

TEST(ReducedKernel, MatchesDirectExtension) {
    std::mt19937_64 g(8);
    std::uniform_real_distribution<double> U(0, 1);
    for (int n : {2, 3})
        for (int trial = 0; trial < 5; ++trial) {
            const ExponentSet e = n == 2 ? from_lambda_p(2, 2, 0.5) : diagonal_exponents(3, 1.5);
            const double c = 2 * U(g) - 1, w = 0.5 + U(g), amp = 0.5 + U(g);
            const double lo = c - w, hi = c + w;
            auto F = [=](double s) { return s > lo && s < hi ? amp * std::pow(1 - std::pow((s - c) / w, 2), 3) : 0.0; };
            RadialFunction f;
            f.dim = n - 1;
            f.support = std::exp(hi);
            f.breaks = {std::exp(lo)};
            f.value = [&, F](double r) { return r <= 0 ? 0.0 : std::pow(r, -(n - 1) / e.p) * F(std::log(r)); };
            const ReducedKernel k = reduced_kernel(e);
            for (double t : {-1.0, 0.2, 1.5})
                for (double h : {0.0, 0.7}) {
                    const double direct =
                        std::exp(n * t / e.q) * extend(f, e.lambda, std::exp(t), std::exp(t) * h, QuadratureSpec{}.tol(1e-12, 1e-300));
                    const double reduced = reduced_extension(F, lo, hi, k, t, h);
                    EXPECT_NEAR(reduced, direct, 1e-6 * std::abs(direct)) << "n=" << n << " t=" << t << " h=" << h;
                }
        }
}

TEST(Rearrangement, SymmetricStepRearrangement) {
    StepFunction f{1, {{{2.0}, {3.0}, 1.0}, {{-5.0}, {-4.5}, 4.0}, {{0.0}, {1.0}, 0.0}}};
    const StepFunction s = symmetric_rearrangement(f);
    EXPECT_NEAR(s.power_mass(0.5), f.power_mass(0.5), 1e-15);
    const Vec a{0.2}, b{-0.24}, c{0.6}, d{0.8};
    EXPECT_EQ(s(a), 4.0);
    EXPECT_EQ(s(b), 4.0);
    EXPECT_EQ(s(c), 1.0);
    EXPECT_EQ(s(d), 0.0);
}

TEST(Rearrangement, NegativeNormDoesNotDecrease) {
    std::mt19937_64 g(31);
    std::uniform_real_distribution<double> U(0, 1);
    for (int trial = 0; trial < 20; ++trial) {
        const double lambda = trial % 2 ? 2.0 : 0.5 + 3 * U(g);
        const ExponentSet e = diagonal_exponents(2, lambda);
        StepFunction f{1, {}};
        double x = -4 * U(g) - 1;
        const int cells = 2 + trial % 5;
        for (int k = 0; k < cells; ++k) {
            const double w = 0.2 + U(g);
            f.cells.push_back({{x}, {x + w}, 0.1 + 3 * U(g)});
            x += w + 1.5 * U(g);
        }
        const RearrangementComparison r = rearrangement_comparison(f, e, 100 + trial, 1 << 13);
        EXPECT_GE(r.difference, -3 * r.std_error) << "trial " << trial;
        EXPECT_GT(r.original, 0);
    }
}

TEST(RandomPairs, StepFunctionsAreDisjointBoxes) {
    Rng g(4);
    for (int trial = 0; trial < 50; ++trial) {
        const int dim = 1 + trial % 3;
        const StepFunction f = random_step_function(dim, dim > 1, 1 + trial % 4, 0.5 + trial * 0.1, g);
        for (std::size_t a = 0; a < f.cells.size(); ++a) {
            const StepCell& c = f.cells[a];
            for (int i = 0; i < dim; ++i) EXPECT_LT(c.lo[i], c.hi[i]);
            if (dim > 1) EXPECT_GE(c.lo[dim - 1], 0.0);
            EXPECT_GT(c.value, 0.0);
            for (std::size_t b = a + 1; b < f.cells.size(); ++b) EXPECT_LE(c.hi[0], f.cells[b].lo[0]);
        }
    }
    EXPECT_THROW(random_step_function(1, true, 2, 1, g), InvalidArgument);
}

TEST(RandomPairs, QuotientsDominateTheConstant) {
    const ExponentSet e = from_lambda_p(2, 2, 0.5);
    const PairTrials t = random_pair_quotients(e, 30, 1, 1 << 14);
    ASSERT_EQ(t.quotients.size(), 30u);
    for (std::size_t i = 0; i < t.quotients.size(); ++i)
        EXPECT_GE(t.quotients[i], kSharp22 * (1 - 1e-6) - 3 * t.std_errors[i]);
    EXPECT_EQ(t.min_quotient(), *std::min_element(t.quotients.begin(), t.quotients.end()));
    const PairTrials again = random_pair_quotients(e, 30, 1, 1 << 14);
    EXPECT_EQ(again.quotients, t.quotients);
    EXPECT_THROW(random_pair_quotients(e, 0, 1, 100), InvalidArgument);
}
