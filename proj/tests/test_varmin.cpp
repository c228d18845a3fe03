#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "rhls/constants.hpp"
#include "rhls/errors.hpp"
#include "rhls/exponents.hpp"
#include "rhls/operators.hpp"
#include "rhls/radial.hpp"
#include "rhls/varmin.hpp"

using namespace rhls;
using std::numbers::pi;

namespace {

constexpr double kPlanar = 0.12698727186848;  // 1 / (sqrt(2) pi^{3/2})

const ExponentSet& planar() {
    static const ExponentSet e = diagonal_exponents(2, 2);
    return e;
}

const VarminProblem& problem() {
    static const VarminProblem prob(planar(), MinimizeOptions{});
    return prob;
}

// The default random start takes the longest; several tests inspect it.
const MinimizeResult& random_run() {
    static const MinimizeResult r = minimize_profile(planar(), MinimizeOptions{});
    return r;
}

bool nonincreasing(const std::vector<double>& v, double slack = 0) {
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i] > v[i - 1] + slack) return false;
    return true;
}

}  // namespace

TEST(Options, ParseInit) {
    EXPECT_EQ(parse_init("extremal-seed"), InitKind::ExtremalSeed);
    EXPECT_EQ(parse_init("flat"), InitKind::Flat);
    EXPECT_EQ(parse_init("random"), InitKind::Random);
    EXPECT_THROW(parse_init("gaussian"), InvalidArgument);
}

TEST(Options, Validate) {
    EXPECT_NO_THROW(MinimizeOptions{}.validate());
    auto bad = [](auto mutate) {
        MinimizeOptions o;
        mutate(o);
        EXPECT_THROW(o.validate(), InvalidArgument);
    };
    bad([](MinimizeOptions& o) { o.grid_size = 8; });
    bad([](MinimizeOptions& o) { o.tol = 0; });
    bad([](MinimizeOptions& o) { o.r_min = 0; });
    bad([](MinimizeOptions& o) { o.r_max = o.r_min; });
    bad([](MinimizeOptions& o) { o.max_iters = -1; });
    bad([](MinimizeOptions& o) { o.armijo = 1; });
    bad([](MinimizeOptions& o) { o.initial_step = 0; });
    bad([](MinimizeOptions& o) { o.element_order = 1; });
}

TEST(Grid, Layout) {
    const auto r = minimizer_grid(32, 1e-2, 1e2);
    ASSERT_EQ(r.size(), 32u);
    EXPECT_EQ(r[0], 0.0);
    EXPECT_DOUBLE_EQ(r[1], 1e-2);
    EXPECT_DOUBLE_EQ(r.back(), 1e2);
    for (std::size_t i = 2; i + 1 < r.size(); ++i)
        EXPECT_NEAR(std::log(r[i + 1] / r[i]), std::log(r[2] / r[1]), 1e-12);
}

TEST(Pav, Examples) {
    const std::vector<double> ones(3, 1.0);
    EXPECT_EQ(project_nonincreasing({3, 2, 1}, ones), (std::vector<double>{3, 2, 1}));
    EXPECT_EQ(project_nonincreasing({1, 3, 2}, ones), (std::vector<double>{2, 2, 2}));
    EXPECT_EQ(project_nonincreasing({1, 2, 3}, ones), (std::vector<double>{2, 2, 2}));
    const auto w = project_nonincreasing({0, 4, 1}, {3, 1, 1});
    EXPECT_DOUBLE_EQ(w[0], 1.0);
    EXPECT_DOUBLE_EQ(w[1], 1.0);
    EXPECT_DOUBLE_EQ(w[2], 1.0);
    const auto u = project_nonincreasing({5, 1, 3}, {1, 1, 3});
    EXPECT_DOUBLE_EQ(u[0], 5.0);
    EXPECT_DOUBLE_EQ(u[1], 2.5);
    EXPECT_DOUBLE_EQ(u[2], 2.5);
}

TEST(Pav, Properties) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> val(-3, 3), wt(0.1, 5);
    std::uniform_int_distribution<int> len(1, 40);
    for (int trial = 0; trial < 200; ++trial) {
        const int m = len(rng);
        std::vector<double> v(m), w(m);
        for (int i = 0; i < m; ++i) v[i] = val(rng), w[i] = wt(rng);
        const auto x = project_nonincreasing(v, w);
        ASSERT_EQ(x.size(), v.size());
        EXPECT_TRUE(nonincreasing(x, 1e-12));
        // weighted mean is preserved
        double sv = 0, sx = 0;
        for (int i = 0; i < m; ++i) sv += w[i] * v[i], sx += w[i] * x[i];
        EXPECT_NEAR(sv, sx, 1e-9 * (1 + std::abs(sv)));
        // idempotent
        const auto xx = project_nonincreasing(x, w);
        for (int i = 0; i < m; ++i) EXPECT_NEAR(xx[i], x[i], 1e-12);
        // variational inequality against random feasible points
        for (int k = 0; k < 5; ++k) {
            std::vector<double> y(m);
            for (int i = 0; i < m; ++i) y[i] = val(rng);
            std::sort(y.begin(), y.end(), std::greater<>());
            double ip = 0;
            for (int i = 0; i < m; ++i) ip += w[i] * (v[i] - x[i]) * (y[i] - x[i]);
            EXPECT_LE(ip, 1e-9);
        }
    }
}

TEST(Reference, Normalization) {
    const RadialProfile ref = extremal_reference(2, 2, {0.0, 1.0, 2.0});
    // (1 + r^2)^{-2} with int (1+r^2)^{-1} dr = pi in the p-mass: k = 1 / pi^2
    EXPECT_NEAR(ref.values[0], 1 / (pi * pi), 1e-14);
    EXPECT_NEAR(ref.values[1], 0.25 / (pi * pi), 1e-14);
    EXPECT_NEAR(ref.values[2], 0.04 / (pi * pi), 1e-14);
    EXPECT_EQ(ref.dim, 1);

    // continuum int f^p over the line: sqrt(k) * pi
    EXPECT_NEAR(std::sqrt(ref.values[0]) * pi, 1.0, 1e-14);

    // The grid interpolant carries the discretization error of the node spacing only.
    const RadialProfile grid_ref = extremal_reference(2, 2);
    EXPECT_NEAR(problem().p_mass(grid_ref.values), 1.0, 1e-2);
    EXPECT_TRUE(grid_ref.monotone);
}

TEST(Reference, SmallLambdaShape) {
    const std::vector<double> r{0.0, 0.5, 2.0, 10.0};
    const RadialProfile ref = extremal_reference(3, 1e-8, r);
    for (std::size_t i = 0; i < r.size(); ++i)
        EXPECT_NEAR(ref.values[i] / ref.values[0], std::pow(1 + r[i] * r[i], -2.0), 1e-7);
}

TEST(Reference, QuotientWithInducedPartner) {
    const ExponentSet& e = planar();
    const double k = extremal_reference(2, 2, {0.0}).values[0];
    const RadialFunction f{[k](double r) { return k * std::pow(1 + r * r, -2); }, 1};
    const Quotient q = functional_quotient(f, induced_partner(f, e), e);
    EXPECT_NEAR(q.quotient, c_explicit_lambda2(2), 1e-4);
    EXPECT_NEAR(q.norm_f, 1.0, 1e-6);
}

TEST(Reference, DiscreteObjective) {
    const RadialProfile ref = extremal_reference(2, 2);
    EXPECT_NEAR(problem().objective(ref.values), kPlanar, 1e-4);
    EXPECT_NEAR(problem().objective(ref.values), c_explicit_lambda2(2), 1e-4);
}

TEST(Objective, ScaleInvariance) {
    const RadialProfile ref = extremal_reference(2, 2);
    std::vector<double> f = ref.values;
    const double J = problem().objective(f);
    for (double& x : f) x *= 7.5;
    EXPECT_NEAR(problem().objective(f), J, 1e-12 * J);
}

TEST(Objective, GradientMatchesDifferences) {
    const VarminProblem& prob = problem();
    const std::size_t N = prob.radii().size();
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> wobble(-0.2, 0.2);
    std::vector<double> f = extremal_reference(2, 2).values;
    for (double& x : f) x *= std::exp(wobble(rng));
    std::vector<double> grad;
    const double J = prob.objective_gradient(f, grad);
    EXPECT_NEAR(J, prob.objective(f), 1e-12 * J);
    ASSERT_EQ(grad.size(), N);

    // Log coordinates: d J / d log f_j = f_j grad_j.
    const double h = 1e-5;
    double worst = 0, scale = 0;
    for (std::size_t j = 0; j < N; ++j) {
        std::vector<double> up = f, dn = f;
        up[j] *= std::exp(h);
        dn[j] *= std::exp(-h);
        const double fd = (prob.objective(up) - prob.objective(dn)) / (2 * h);
        worst = std::max(worst, std::abs(fd - f[j] * grad[j]));
        scale = std::max(scale, std::abs(f[j] * grad[j]));
    }
    EXPECT_LE(worst, 1e-4 * scale);

    std::normal_distribution<double> gauss;
    for (int k = 0; k < 10; ++k) {
        std::vector<double> dir(N), up(N), dn(N);
        for (double& x : dir) x = gauss(rng);
        double analytic = 0;
        for (std::size_t j = 0; j < N; ++j) {
            up[j] = f[j] * std::exp(h * dir[j]);
            dn[j] = f[j] * std::exp(-h * dir[j]);
            analytic += f[j] * grad[j] * dir[j];
        }
        const double fd = (prob.objective(up) - prob.objective(dn)) / (2 * h);
        double norm = 0;
        for (std::size_t j = 0; j < N; ++j) norm += std::abs(f[j] * grad[j] * dir[j]);
        EXPECT_NEAR(fd, analytic, 1e-4 * norm);
    }
}

TEST(Objective, RearrangementDoesNotIncrease) {
    const VarminProblem& prob = problem();
    const auto& r = prob.radii();
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> bump(0.5, 3.0), where(-1.0, 1.5);
    for (int trial = 0; trial < 5; ++trial) {
        // a decaying profile with an off-center bump
        const double c = std::pow(10.0, where(rng)), amp = bump(rng);
        std::vector<double> f(r.size());
        for (std::size_t j = 0; j < r.size(); ++j) {
            const double t = std::log((r[j] + 1e-3) / c);
            f[j] = std::pow(1 + r[j] * r[j], -2) * (1 + amp * std::exp(-4 * t * t));
        }
        const RadialProfile star = rearrange(RadialProfile(r, f, 1));
        std::vector<double> fs(r.size());
        for (std::size_t j = 0; j < r.size(); ++j) fs[j] = star(r[j]);
        EXPECT_TRUE(nonincreasing(fs, 1e-15));
        EXPECT_LE(prob.objective(fs), prob.objective(f) * (1 + 1e-6)) << "bump at " << c;
    }
}

TEST(Minimize, ExtremalSeed) {
    MinimizeOptions o;
    o.init = InitKind::ExtremalSeed;
    const MinimizeResult r = minimize_profile(planar(), o);
    EXPECT_NEAR(r.trace.front(), kPlanar, 1e-3 * kPlanar);
    EXPECT_TRUE(r.converged);
    EXPECT_LE(r.iterations, 200);
    EXPECT_NEAR(r.constant, kPlanar, 1e-3 * kPlanar);
    EXPECT_NEAR(r.p_mass, 1.0, 1e-10);
}

TEST(Minimize, RandomStartFindsExtremal) {
    const MinimizeResult& r = random_run();
    EXPECT_TRUE(r.converged) << "stationarity " << r.stationarity;
    EXPECT_NEAR(r.constant, kPlanar, 1e-2 * kPlanar);
    const ShapeFit fit = fit_extremal_shape(r.profile.radii, r.values, -2);
    EXPECT_LE(fit.max_rel_dev, 0.02);
    EXPECT_GT(fit.scale_s, 0);
}

TEST(Minimize, Invariants) {
    const MinimizeResult& r = random_run();
    ASSERT_GE(r.trace.size(), 2u);
    for (std::size_t i = 1; i < r.trace.size(); ++i) EXPECT_LE(r.trace[i], r.trace[i - 1]);
    EXPECT_EQ(r.trace.back(), r.constant);
    EXPECT_NEAR(r.p_mass, 1.0, 1e-10);
    EXPECT_NEAR(problem().p_mass(r.values), 1.0, 1e-10);
    for (double v : r.values) EXPECT_GE(v, 0.0);
    EXPECT_TRUE(nonincreasing(r.values));
    EXPECT_TRUE(r.profile.monotone);
    const double lower = c_spherical(2, 2).c_spherical;
    for (double J : r.trace) EXPECT_GE(J, lower - 1e-4);
    EXPECT_EQ(r.tail_exponent, problem().tail_exponent());
}

TEST(Minimize, FlatStartDescends) {
    MinimizeOptions o;
    o.init = InitKind::Flat;
    o.max_iters = 200;
    const MinimizeResult r = minimize_profile(planar(), o);
    EXPECT_LT(r.constant, r.trace.front());
    EXPECT_GE(r.constant, kPlanar - 1e-4);
    EXPECT_TRUE(nonincreasing(r.values));
}

TEST(Minimize, ZeroIterationsReportsStart) {
    MinimizeOptions o;
    o.init = InitKind::Flat;
    o.max_iters = 0;
    const MinimizeResult r = minimize_profile(planar(), o);
    EXPECT_EQ(r.iterations, 0);
    EXPECT_EQ(r.trace.size(), 1u);
    EXPECT_FALSE(r.converged);
}

TEST(Minimize, StalledWithoutAnyStep) {
    MinimizeOptions o;
    o.init = InitKind::Flat;
    o.initial_step = 1e-15;
    EXPECT_THROW(minimize_profile(planar(), o), Stalled);
}

TEST(Minimize, Deterministic) {
    MinimizeOptions o;
    o.max_iters = 20;
    const MinimizeResult a = minimize_profile(planar(), o);
    const MinimizeResult b = minimize_profile(planar(), o);
    EXPECT_EQ(a.values, b.values);
    o.seed = 8;
    const MinimizeResult c = minimize_profile(planar(), o);
    EXPECT_NE(a.values, c.values);
}
