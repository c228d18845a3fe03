#include "rhls/constants.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>
#include <numbers>

#include "rhls/errors.hpp"
#include "rhls/special.hpp"

namespace rhls {

namespace {

constexpr double kPi = std::numbers::pi;

// |xi - eta|^2 = 4 sin^2(beta/2) + 4 cos(beta) sin^2(phi/2), beta the elevation of
// xi and phi the angle between the projections.
double chord2(double beta, double phi) {
    const double a = std::sin(0.5 * beta), b = std::sin(0.5 * phi);
    return 4 * a * a + 4 * std::cos(beta) * b * b;
}

// ln|xi - eta|; the chord underflows to 0 at the singular point itself.
double half_log_chord(double beta, double phi) {
    return 0.5 * std::log(std::max(chord2(beta, phi), std::numeric_limits<double>::min()));
}

// Normalized average over the equator S^{n-1} of g(phi).
double equator_mean(int n, const Integrand& g, const QuadratureSpec& spec) {
    return integrate_sphere_zonal_angle(g, n - 1, spec).value / sphere_area(n - 1);
}

// ln of the inner average, via log1p of the mean of expm1 for small lambda.
double log_inner(int n, double lambda, double beta, const QuadratureSpec& spec) {
    const double m = equator_mean(
        n, [&](double phi) { return std::expm1(0.5 * lambda * std::log(chord2(beta, phi))); }, spec);
    return std::log1p(m);
}

void check_n(int n) {
    if (n < 2) throw InvalidArgument("dimension n must be >= 2");
}

}  // namespace

QuadratureSpec default_constant_spec() { return QuadratureSpec{}.tol(1e-12, 1e-16); }

double inner_average(int n, double lambda, double height, const QuadratureSpec& spec) {
    check_n(n);
    if (!(height >= 0 && height <= 1)) throw InvalidArgument("height must lie in [0,1]");
    return std::exp(log_inner(n, lambda, std::asin(height), spec));
}

ConstantReport c_spherical(int n, double lambda, const QuadratureSpec& spec) {
    check_n(n);
    if (!(lambda > 0) || !std::isfinite(lambda)) throw OutOfRange("lambda must be positive");
    const double expo = -2.0 * n / lambda;
    const IntegralResult outer = integrate_hemisphere_elevation(
        [&](double beta) { return std::exp(expo * log_inner(n, lambda, beta, spec)); }, n, spec);
    if (!(outer.value > 0) || !std::isfinite(outer.value))
        throw NoConvergence("spherical outer integral is not positive and finite", outer.value, outer.error_estimate);
    const double lnc = -lambda / (2.0 * (n - 1)) * std::log(sphere_area(n - 1)) - lambda / (2.0 * n) * std::log(outer.value);
    ConstantReport rep;
    rep.n = n;
    rep.lambda = lambda;
    rep.c_spherical = std::exp(lnc);
    rep.error_estimate = rep.c_spherical * lambda / (2.0 * n) * outer.error_estimate / outer.value;
    if (lambda == 2) rep.c_closed_form = c_explicit_lambda2(n);
    for (int i = 0; i <= 10; ++i) {
        const double t = i / 10.0;
        rep.inner_profile.emplace_back(t, inner_average(n, lambda, t, spec));
    }
    return rep;
}

double c_explicit_lambda2(int n) {
    check_n(n);
    const double dn = n;
    const double l = (-1 + 1 / dn) * std::log(2.0) - std::log(kPi) + (std::lgamma(dn) - std::lgamma(dn / 2)) / dn +
                     (std::lgamma(dn - 1) - std::lgamma((dn - 1) / 2)) / (dn - 1);
    return std::exp(l);
}

AuxIntegrals aux_integrals(int n, const QuadratureSpec& spec) {
    check_n(n);
    const double dn = n;
    const double lp = std::log(kPi);
    AuxIntegrals a;
    a.I_comp = std::exp((dn - 1) / 2 * lp + std::lgamma((dn + 1) / 2) - std::lgamma(dn));
    a.I_a2 = std::exp((dn - 1) / 2 * lp + std::lgamma((dn - 1) / 2) - std::lgamma(dn - 1));
    a.I_a3 = 0.5 * std::exp(dn / 2 * lp + std::lgamma(dn / 2) - std::lgamma(dn));
    const double sb = sphere_area(n - 2), sh = 0.5 * sphere_area(n - 1);
    auto radial = [&](double area, double power, int rexp) {
        return area * integrate_halfline(
                          [=](double s) { return s == 0 ? (rexp == 0 ? 1.0 : 0.0) : std::exp(power * std::log1p(s * s) + rexp * std::log(s)); },
                          spec)
                          .value;
    };
    a.q_comp = radial(sb, -dn, n - 2);
    a.q_comp_moment = radial(sb, -dn, n);
    a.q_a2 = radial(sb, -dn + 1, n - 2);
    a.q_a3 = radial(sh, -dn, n - 1);
    return a;
}

double compose_aux(int n, double I_comp, double I_a2, double I_a3) {
    const double dn = n;
    return I_comp * std::pow(I_a3, -1 / dn) * std::pow(I_a2, -dn / (dn - 1));
}

double h_potential(int n, double height, const QuadratureSpec& spec) {
    check_n(n);
    if (!(height >= 0 && height <= 1)) throw InvalidArgument("height must lie in [0,1]");
    const double beta = std::asin(height);
    return equator_mean(n, [&](double phi) { return half_log_chord(beta, phi); }, spec);
}

double h_second_moment(int n, double height, const QuadratureSpec& spec) {
    check_n(n);
    const double beta = std::asin(height);
    return equator_mean(
        n,
        [&](double phi) {
            const double l = half_log_chord(beta, phi);
            return l * l;
        },
        spec);
}

double c_n_log(int n, const QuadratureSpec& spec) {
    check_n(n);
    const double area = sphere_area(n - 1);
    const double o = integrate_hemisphere_elevation(
                         [&](double beta) {
                             const double H = equator_mean(
                                 n, [&](double phi) { return half_log_chord(beta, phi); }, spec);
                             return std::exp(-2.0 * n * H);
                         },
                         n, spec)
                         .value;
    if (!(o > 0) || !std::isfinite(o)) throw NoConvergence("log-potential integral is not positive and finite", o, INFINITY);
    return -std::log(area) / (2.0 * (n - 1)) - std::log(o) / (2.0 * n);
}

double c_near_zero(int n, double lambda, const QuadratureSpec& spec) {
    if (lambda == 0) return 1.0;
    return 1 + lambda * c_n_log(n, spec);
}

// Planar log-HLS.

double log_potential(const LineDensity& f, double y1, double y2, const QuadratureSpec& spec) {
    const Integrand g = [&](double x) {
        const double d = std::hypot(x - y1, y2);
        return d == 0 ? 0.0 : f(x) * std::log(d);  // d rounds to 0 only next to a huge y1
    };
    // The mass of f sits near the origin and the log singularity at y1; decades
    // around both keep either from being missed when |y1| is large.
    const int decades = 1 + static_cast<int>(std::ceil(std::log10(std::max(std::abs(y1), 1.0))));
    std::vector<double> pts{0.0, y1};
    for (int k = 0; k <= decades; ++k) {
        const double w = std::pow(10.0, k);
        for (double c : {0.0, y1}) {
            pts.push_back(c - w);
            pts.push_back(c + w);
        }
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    double total = 0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) total += integrate(g, pts[i], pts[i + 1], spec).value;
    total += integrate_halfline(g, spec, pts.back()).value;
    total += integrate_halfline([&](double r) { return g(-r); }, spec, -pts.front()).value;
    return total;
}

namespace {

double plane_integral(const std::function<double(double, double)>& F, const LogHlsSpec& spec) {
    return integrate_halfline(
               [&](double y2) { return integrate_line([&](double y1) { return F(y1, y2); }, spec.middle).value; },
               spec.outer)
        .value;
}

double xlogx(double v) { return v > 0 ? v * std::log(v) : 0.0; }

}  // namespace

LogHlsTerms loghls_terms(const LineDensity& f, const PlaneDensity& g, const LogHlsSpec& spec) {
    double mf, mg;
    try {
        mf = integrate_line(f, spec.middle).value;
        mg = plane_integral(g, spec);
    } catch (const NoConvergence&) {
        throw MomentDiverges("density mass does not converge");
    }
    if (std::abs(mf - 1) > 1e-6 || std::abs(mg - 1) > 1e-6)
        throw InvalidArgument("log-HLS densities must have unit mass");
    try {
        integrate_line(
            [&](double x) {
                const double fv = f(x);
                return fv == 0 ? 0.0 : fv * std::log1p(x * x);
            },
            spec.middle);
        plane_integral(
            [&](double a, double b) {
                const double gv = g(a, b);
                return gv == 0 ? 0.0 : gv * std::log1p(a * a + b * b);
            },
            spec);
    } catch (const NoConvergence&) {
        throw MomentDiverges("logarithmic moment is not finite");
    }
    LogHlsTerms t;
    t.entropy_f = integrate_line([&](double x) { return xlogx(f(x)); }, spec.middle).value;
    t.entropy_g = plane_integral([&](double a, double b) { return xlogx(g(a, b)); }, spec);
    t.cross = plane_integral(
        [&](double a, double b) {
            const double gv = g(a, b);
            return gv == 0 ? 0.0 : gv * log_potential(f, a, b, spec.inner);
        },
        spec);
    t.constant = c_n_log(2);
    t.deficit = 0.5 * t.entropy_f + 0.25 * t.entropy_g - t.constant + t.cross;
    return t;
}

double loghls_deficit(const LineDensity& f, const PlaneDensity& g, const LogHlsSpec& spec) {
    return loghls_terms(f, g, spec).deficit;
}

LogHlsPair loghls_extremal_pair(const LogHlsSpec& spec) {
    const double area = sphere_area(1);
    const LineDensity f0 = [](double x) { return 2 / (1 + x * x); };
    const QuadratureSpec inner = spec.inner;
    auto shape = [f0, inner, area](double y1, double y2) {
        return std::exp(-(4 / area) * log_potential(f0, y1, y2, inner));
    };
    const double mass = plane_integral(shape, spec);
    LogHlsPair pair;
    pair.g_normalizer = 1 / mass;
    pair.f = [f0, area](double x) { return f0(x) / area; };
    const double c = pair.g_normalizer;
    pair.g = [shape, c](double y1, double y2) { return c * shape(y1, y2); };
    return pair;
}

}  // namespace rhls
