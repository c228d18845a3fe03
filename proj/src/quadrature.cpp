#include "rhls/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/legendre.hpp>

#include "rhls/errors.hpp"
#include "rhls/montecarlo.hpp"
#include "rhls/special.hpp"

namespace rhls {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kPi = std::numbers::pi;

// Kronrod 21 / Gauss 10 pair; index 0 is the center node.
struct Kronrod21 {
    std::array<double, 11> x{}, wk{};
    std::array<double, 11> wg{};  // zero where the node is not a Gauss node
    Kronrod21() {
        using GK = boost::math::quadrature::gauss_kronrod<double, 21>;
        using G = boost::math::quadrature::gauss<double, 10>;
        for (int i = 0; i < 11; ++i) {
            x[i] = GK::abscissa()[i];
            wk[i] = GK::weights()[i];
        }
        for (std::size_t j = 0; j < G::abscissa().size(); ++j)
            for (int i = 0; i < 11; ++i)
                if (std::abs(x[i] - G::abscissa()[j]) < 1e-14) wg[i] = G::weights()[j];
    }
};

const Kronrod21& kronrod21() {
    static const Kronrod21 k;
    return k;
}

struct Segment {
    double a, b, value, error, floor;
    bool operator<(const Segment& o) const { return error < o.error; }
};

double checked(const Integrand& f, double x) {
    const double v = f(x);
    if (!std::isfinite(v)) throw NoConvergence("non-finite integrand value", v, INFINITY);
    return v;
}

Segment kronrod_segment(const Integrand& f, double a, double b, long& evals) {
    const Kronrod21& K = kronrod21();
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    std::array<double, 21> fv;
    fv[0] = checked(f, c);
    for (int i = 1; i < 11; ++i) {
        fv[2 * i - 1] = checked(f, c - h * K.x[i]);
        fv[2 * i] = checked(f, c + h * K.x[i]);
    }
    evals += 21;
    double rk = K.wk[0] * fv[0], rg = K.wg[0] * fv[0], rabs = K.wk[0] * std::abs(fv[0]);
    for (int i = 1; i < 11; ++i) {
        const double s = fv[2 * i - 1] + fv[2 * i];
        rk += K.wk[i] * s;
        rg += K.wg[i] * s;
        rabs += K.wk[i] * (std::abs(fv[2 * i - 1]) + std::abs(fv[2 * i]));
    }
    const double mean = 0.5 * rk;
    double rasc = K.wk[0] * std::abs(fv[0] - mean);
    for (int i = 1; i < 11; ++i)
        rasc += K.wk[i] * (std::abs(fv[2 * i - 1] - mean) + std::abs(fv[2 * i] - mean));
    const double ah = std::abs(h);
    rabs *= ah;
    rasc *= ah;
    double err = std::abs((rk - rg) * h);
    if (rasc != 0 && err != 0) err = rasc * std::min(1.0, std::pow(200 * err / rasc, 1.5));
    const double floor = 50 * kEps * rabs;
    err = std::max(err, floor);
    return {a, b, rk * h, err, floor};
}

IntegralResult adaptive(const Integrand& f, std::span<const double> cuts, const QuadratureSpec& spec) {
    std::priority_queue<Segment> heap;
    IntegralResult out;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        if (cuts[i + 1] > cuts[i]) heap.push(kronrod_segment(f, cuts[i], cuts[i + 1], out.evaluations));
    double frozen_val = 0, frozen_err = 0, frozen_floor = 0;
    double best_val = 0, best_err = INFINITY;
    auto totals = [&](double& v, double& e, double& fl) {
        v = frozen_val;
        e = frozen_err;
        fl = frozen_floor;
        auto copy = heap;
        while (!copy.empty()) {
            v += copy.top().value;
            e += copy.top().error;
            fl += copy.top().floor;
            copy.pop();
        }
    };
    double val = 0, err = 0, fl = 0;
    totals(val, err, fl);
    long splits = 0;
    for (;;) {
        if (err < best_err) {
            best_err = err;
            best_val = val;
        }
        const double tol = std::max(spec.abs_tol, spec.rel_tol * std::abs(val));
        if (err <= tol || err <= 2 * fl || heap.empty()) {
            if (err > tol && err > 2 * fl)
                throw NoConvergence("segments cannot be refined further", best_val, best_err);
            out.value = val;
            out.error_estimate = err;
            return out;
        }
        if (heap.size() >= static_cast<std::size_t>(spec.max_subdivisions) + cuts.size())
            throw NoConvergence("adaptive quadrature exceeded max_subdivisions", best_val, best_err);
        Segment s = heap.top();
        heap.pop();
        const double m = 0.5 * (s.a + s.b);
        const double scale = std::max(std::abs(s.a), std::abs(s.b));
        if (!(m > s.a && m < s.b) || (s.b - s.a) < 1e3 * kEps * scale) {
            frozen_val += s.value;
            frozen_err += s.error;
            frozen_floor += s.error;  // cannot be improved
        } else {
            const Segment l = kronrod_segment(f, s.a, m, out.evaluations);
            const Segment r = kronrod_segment(f, m, s.b, out.evaluations);
            heap.push(l);
            heap.push(r);
            val += l.value + r.value - s.value;
            err += l.error + r.error - s.error;
            fl += l.floor + r.floor - s.floor;
            ++splits;
        }
        if (splits % 64 == 0) totals(val, err, fl);
        if (!std::isfinite(val) || !std::isfinite(err))
            throw NoConvergence("integral estimate overflowed", best_val, best_err);
    }
}

IntegralResult fixed_legendre(const Integrand& f, std::span<const double> cuts) {
    const GaussRule& g = gauss_legendre(20);
    auto composite = [&](int panels, long& evals) {
        double total = 0;
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
            const double w = (cuts[i + 1] - cuts[i]) / panels;
            for (int p = 0; p < panels; ++p) {
                const double lo = cuts[i] + p * w, c = lo + 0.5 * w;
                double s = 0;
                for (std::size_t k = 0; k < g.nodes.size(); ++k) s += g.weights[k] * checked(f, c + 0.5 * w * g.nodes[k]);
                total += 0.5 * w * s;
                evals += static_cast<long>(g.nodes.size());
            }
        }
        return total;
    };
    IntegralResult out;
    const double coarse = composite(8, out.evaluations);
    out.value = composite(16, out.evaluations);
    out.error_estimate = std::abs(out.value - coarse);
    return out;
}

IntegralResult double_exponential(const Integrand& f, std::span<const double> cuts, const QuadratureSpec& spec) {
    boost::math::quadrature::tanh_sinh<double> ts(15);
    IntegralResult out;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        if (!(cuts[i + 1] > cuts[i])) continue;
        double err = 0, l1 = 0;
        std::size_t levels = 0;
        double v;
        try {
            v = ts.integrate(
                [&](double x) {
                    ++out.evaluations;
                    const double y = f(x);
                    return std::isfinite(y) ? y : throw NoConvergence("non-finite integrand value", y, INFINITY);
                },
                cuts[i], cuts[i + 1], std::sqrt(kEps) * 1e-3, &err, &l1, &levels);
        } catch (const NoConvergence&) {
            throw;
        } catch (const std::exception& e) {
            throw NoConvergence(std::string("double-exponential rule failed: ") + e.what(), NAN, INFINITY);
        }
        out.value += v;
        out.error_estimate += err * std::max(std::abs(v), l1);
    }
    const double tol = std::max(spec.abs_tol, spec.rel_tol * std::abs(out.value));
    if (!(out.error_estimate <= 1e3 * tol) || !std::isfinite(out.value))
        throw NoConvergence("double-exponential rule did not reach tolerance", out.value, out.error_estimate);
    return out;
}

IntegralResult monte_carlo(const Integrand& f, double a, double b, const QuadratureSpec& spec) {
    if (spec.mc_samples <= 0) throw InvalidArgument("monte carlo rule needs samples > 0");
    const double w = b - a;
    const McMoments m = mc_moments(
        [&](Rng& g, std::span<double> out) { out[0] = w * checked(f, a + w * uniform01(g)); }, 1,
        spec.mc_samples, spec.seed);
    return {m.mean[0], m.std_error[0], m.samples};
}

IntegralResult dispatch(const Integrand& f, std::vector<double> cuts, const QuadratureSpec& spec) {
    spec.validate();
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    switch (spec.rule) {
        case Rule::AdaptiveGauss: return adaptive(f, cuts, spec);
        case Rule::FixedGaussLegendre: return fixed_legendre(f, cuts);
        case Rule::DoubleExponential: return double_exponential(f, cuts, spec);
        case Rule::MonteCarlo: return monte_carlo(f, cuts.front(), cuts.back(), spec);
    }
    throw InvalidArgument("unknown rule");
}

}  // namespace

Rule parse_rule(const std::string& name) {
    if (name == "adaptive-gauss") return Rule::AdaptiveGauss;
    if (name == "fixed-gauss-legendre") return Rule::FixedGaussLegendre;
    if (name == "double-exponential-substitution") return Rule::DoubleExponential;
    if (name == "monte-carlo") return Rule::MonteCarlo;
    throw InvalidArgument("unknown quadrature rule: " + name);
}

std::string rule_name(Rule r) {
    switch (r) {
        case Rule::AdaptiveGauss: return "adaptive-gauss";
        case Rule::FixedGaussLegendre: return "fixed-gauss-legendre";
        case Rule::DoubleExponential: return "double-exponential-substitution";
        case Rule::MonteCarlo: return "monte-carlo";
    }
    return "?";
}

void QuadratureSpec::validate() const {
    if (!(rel_tol > 0) || !(abs_tol > 0)) throw InvalidArgument("tolerances must be positive");
    if (max_subdivisions < 1) throw InvalidArgument("max_subdivisions must be >= 1");
}

IntegralResult integrate(const Integrand& f, double a, double b, const QuadratureSpec& spec,
                         std::span<const double> breaks) {
    if (!(a < b)) {
        if (a == b) return {};
        IntegralResult r = integrate(f, b, a, spec, breaks);
        r.value = -r.value;
        return r;
    }
    std::vector<double> cuts{a, b};
    for (double x : breaks)
        if (x > a && x < b) cuts.push_back(x);
    return dispatch(f, std::move(cuts), spec);
}

IntegralResult integrate_halfline(const Integrand& f, const QuadratureSpec& spec, double a) {
    if (!(a >= 0)) throw InvalidArgument("half-line start must be >= 0");
    if (a == 0) {
        // r = e^t, t = u/(1-u^2) on (-1, 1).
        const Integrand g = [&f](double u) {
            const double d = 1 - u * u;
            const double t = u / d;
            if (t > 709 || t < -740) return 0.0;
            const double r = std::exp(t);
            const double v = f(r) * r * (1 + u * u) / (d * d);
            return v;
        };
        return dispatch(g, {-1, -0.9, -0.5, 0, 0.5, 0.9, 1}, spec);
    }
    const double la = std::log(a);
    const Integrand g = [&f, la](double u) {
        const double d = 1 - u;
        const double t = la + u / d;
        if (t > 709) return 0.0;
        const double r = std::exp(t);
        const double v = f(r) * r / (d * d);
        return v;
    };
    return dispatch(g, {0, 0.5, 0.9, 1}, spec);
}

IntegralResult integrate_line(const Integrand& f, const QuadratureSpec& spec) {
    return integrate_halfline([&f](double x) { return f(x) + f(-x); }, spec);
}

IntegralResult integrate_sphere_zonal_angle(const Integrand& g, int k, const QuadratureSpec& spec) {
    if (k < 0) throw InvalidArgument("sphere dimension must be >= 0");
    if (k == 0) return {g(0.0) + g(kPi), 0.0, 2};
    const double area = sphere_area(k - 1);
    IntegralResult r;
    if (k == 1) {
        r = integrate(g, 0, kPi, spec);
    } else {
        r = integrate([&](double phi) { return g(phi) * std::pow(std::sin(phi), k - 1); }, 0, kPi, spec);
    }
    r.value *= area;
    r.error_estimate *= area;
    return r;
}

IntegralResult integrate_sphere_zonal(const Integrand& g, int k, const QuadratureSpec& spec) {
    if (k == 0) return {g(1.0) + g(-1.0), 0.0, 2};
    return integrate_sphere_zonal_angle([&](double phi) { return g(std::cos(phi)); }, k, spec);
}

IntegralResult integrate_hemisphere_elevation(const Integrand& g, int n, const QuadratureSpec& spec) {
    if (n < 1) throw InvalidArgument("hemisphere dimension must be >= 1");
    const double area = sphere_area(n - 1);
    IntegralResult r =
        integrate([&](double b) { return g(b) * std::pow(std::cos(b), n - 1); }, 0, 0.5 * kPi, spec);
    r.value *= area;
    r.error_estimate *= area;
    return r;
}

IntegralResult integrate_hemisphere_zonal(const Integrand& g, int n, const QuadratureSpec& spec) {
    return integrate_hemisphere_elevation([&](double b) { return g(std::sin(b)); }, n, spec);
}

const GaussRule& gauss_legendre(int order) {
    static const std::vector<GaussRule> table = [] {
        std::vector<GaussRule> t(65);
        for (int m = 1; m <= 64; ++m) {
            const std::vector<double> z = boost::math::legendre_p_zeros<double>(m);
            GaussRule& rule = t[m];
            for (double x : z) {
                const double dp = boost::math::legendre_p_prime(m, x);
                const double w = 2 / ((1 - x * x) * dp * dp);
                rule.nodes.push_back(x);
                rule.weights.push_back(w);
                if (x != 0) {
                    rule.nodes.push_back(-x);
                    rule.weights.push_back(w);
                }
            }
        }
        return t;
    }();
    if (order < 1 || order > 64) throw InvalidArgument("Gauss-Legendre order must be in [1, 64]");
    return table[order];
}

HalfSpaceGrid half_space_grid(int n, const HalfSpaceGridSpec& gs) {
    if (n < 2) throw InvalidArgument("half-space grid needs n >= 2");
    const GaussRule& g = gauss_legendre(gs.order);
    HalfSpaceGrid grid;
    grid.n = n;
    const double area = sphere_area(n - 2);
    const double dt = (gs.log_r_max - gs.log_r_min) / gs.radial_panels;
    const double dw = 0.5 * kPi / gs.angle_panels;
    grid.nodes.reserve(static_cast<std::size_t>(gs.radial_panels) * gs.angle_panels * g.nodes.size() * g.nodes.size());
    for (int i = 0; i < gs.radial_panels; ++i) {
        for (std::size_t a = 0; a < g.nodes.size(); ++a) {
            const double t = gs.log_r_min + (i + 0.5) * dt + 0.5 * dt * g.nodes[a];
            const double R = std::exp(t);
            const double wt = 0.5 * dt * g.weights[a];
            for (int j = 0; j < gs.angle_panels; ++j) {
                for (std::size_t b = 0; b < g.nodes.size(); ++b) {
                    const double om = (j + 0.5) * dw + 0.5 * dw * g.nodes[b];
                    const double ww = 0.5 * dw * g.weights[b];
                    const double sigma = R * std::cos(om), h = R * std::sin(om);
                    const double w = area * std::pow(sigma, n - 2) * R * R * wt * ww;
                    grid.nodes.push_back({sigma, h, w});
                }
            }
        }
    }
    return grid;
}

}  // namespace rhls
