#include "rhls/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rhls/errors.hpp"
#include "rhls/radial.hpp"
#include "rhls/special.hpp"

namespace rhls {

namespace {

// The zonal kernel as scale^lambda * shape, so callers can combine it with
// tiny weights without overflow.
struct ScaledKernel {
    double scale;
    double shape;
};

ScaledKernel zonal_scaled(int n, double lambda, double rho, double s, double h, const QuadratureSpec& spec) {
    const double half = 0.5 * lambda;
    const double M = std::max(rho + s, h);
    if (M == 0) return {0.0, n == 2 ? 2.0 : sphere_area(n - 2)};
    const double a = rho / M, b = s / M, c = h / M;
    const double base = (a - b) * (a - b) + c * c;
    if (n == 2) return {M, std::pow(base, half) + std::pow((a + b) * (a + b) + c * c, half)};
    if (rho == 0 || s == 0) return {M, sphere_area(n - 2) * std::pow(base, half)};
    const double cross = 4 * a * b;
    const double shape = integrate_sphere_zonal_angle(
                             [=](double phi) {
                                 const double sh = std::sin(0.5 * phi);
                                 return std::pow(base + cross * sh * sh, half);
                             },
                             n - 2, spec)
                             .value;
    return {M, shape};
}

}  // namespace

double zonal_kernel(int n, double lambda, double rho, double s, double h, const QuadratureSpec& spec) {
    const ScaledKernel k = zonal_scaled(n, lambda, rho, s, h, spec);
    return std::pow(k.scale, lambda) * k.shape;
}

double extend(const RadialFunction& f, double lambda, double rho, double h, const QuadratureSpec& spec) {
    if (!(h >= 0) || !(rho >= 0)) throw InvalidArgument("extend needs rho, h >= 0");
    const int n = f.dim + 1;
    const Integrand g = [&](double s) {
        const double fs = f(s);
        if (std::abs(fs) < std::numeric_limits<double>::min()) return 0.0;  // subnormal values are noise
        const ScaledKernel k = zonal_scaled(n, lambda, rho, s, h, spec);
        const double w = fs * std::pow(s, n - 2) * k.shape;
        const double v = w * std::pow(k.scale, lambda);
        if (std::isfinite(v) || w == 0) return v;
        return std::exp(std::log(w) + lambda * std::log(k.scale));
    };
    // Values this large are out of reach of the quadrature; report overflow.
    if (std::pow(std::hypot(rho, h), lambda) > 1e280) return kInf;
    std::vector<double> breaks = f.breaks;
    breaks.push_back(rho);
    if (std::isfinite(f.support)) return integrate(g, 0, f.support, spec, breaks).value;
    if (rho <= 1) {
        std::vector<double> inside;
        for (double b : breaks)
            if (b > 0 && b < 1) inside.push_back(b);
        return integrate(g, 0, 1, spec, inside).value + integrate_halfline(g, spec, 1).value;
    }
    // [1, rho] in log scale so the mass near the origin is not missed when rho is huge.
    std::vector<double> below, log_breaks;
    for (double b : f.breaks) {
        if (b > 0 && b < 1) below.push_back(b);
        if (b > 1 && b < rho) log_breaks.push_back(std::log(b));
    }
    double total = integrate(g, 0, 1, spec, below).value;
    total += integrate([&](double t) { const double x = std::exp(t); return g(x) * x; }, 0, std::log(rho), spec, log_breaks).value;
    return total + integrate_halfline(g, spec, rho).value;
}

double extend(const RadialProfile& f, double lambda, double rho, double h, const QuadratureSpec& spec) {
    return extend(as_function(f), lambda, rho, h, spec);
}

IntegralResult integrate_half_space(const std::function<double(double, double)>& F, int n,
                                    const HalfSpaceFunction& support, const QuadratureSpec& outer,
                                    const QuadratureSpec& inner) {
    const double area = sphere_area(n - 2);
    const Integrand over_h = [&](double h) {
        const Integrand over_sigma = [&](double sigma) { return F(sigma, h) * std::pow(sigma, n - 2); };
        const double lim = support.sigma_limit(h);
        if (std::isfinite(lim)) {
            if (lim <= 0) return 0.0;
            return integrate(over_sigma, 0, lim, inner, support.sigma_breaks).value;
        }
        return integrate_halfline(over_sigma, inner).value;
    };
    IntegralResult r = std::isfinite(support.h_max)
                           ? integrate(over_h, 0, support.h_max, outer, support.h_breaks)
                           : integrate_halfline(over_h, outer);
    r.value *= area;
    r.error_estimate *= area;
    return r;
}

HalfSpaceFunction whole_half_space(std::function<double(double, double)> value) {
    HalfSpaceFunction g;
    g.value = std::move(value);
    return g;
}

double restrict(const HalfSpaceFunction& g, int n, double lambda, double rho, const NestedSpec& spec) {
    if (n < 2) throw InvalidArgument("restrict needs n >= 2");
    const double area = sphere_area(n - 2);
    // Z already integrates over the directions of y', so undo the area factor.
    return integrate_half_space(
               [&](double sigma, double h) {
                   const double gv = g(sigma, h);
                   return gv == 0 ? 0.0 : gv * zonal_kernel(n, lambda, rho, sigma, h, spec.inner) / area;
               },
               n, g, spec.middle, spec.inner)
        .value;
}

double restrict(const HalfSpaceProfile& g, int n, double lambda, double rho, const NestedSpec& spec) {
    return restrict(as_function(g), n, lambda, rho, spec);
}

namespace {

double extension_side(const RadialFunction& f, const HalfSpaceFunction& g, double lambda, const NestedSpec& spec) {
    const int n = f.dim + 1;
    return integrate_half_space(
               [&](double sigma, double h) {
                   const double gv = g(sigma, h);
                   return gv == 0 ? 0.0 : gv * extend(f, lambda, sigma, h, spec.inner);
               },
               n, g, spec.outer, spec.middle)
        .value;
}

double restriction_side(const RadialFunction& f, const HalfSpaceFunction& g, double lambda, const NestedSpec& spec) {
    const int n = f.dim + 1;
    const Integrand over_s = [&](double s) {
        const double fs = f(s);
        return fs == 0 ? 0.0 : fs * std::pow(s, n - 2) * restrict(g, n, lambda, s, spec);
    };
    const double area = sphere_area(n - 2);
    if (std::isfinite(f.support)) return area * integrate(over_s, 0, f.support, spec.outer, f.breaks).value;
    return area * integrate_halfline(over_s, spec.outer).value;
}

}  // namespace

Duality duality_gap(const RadialFunction& f, const HalfSpaceFunction& g, double lambda, const NestedSpec& spec) {
    Duality d;
    d.extension_side = extension_side(f, g, lambda, spec);
    d.restriction_side = restriction_side(f, g, lambda, spec);
    const double scale = std::max(std::abs(d.extension_side), std::abs(d.restriction_side));
    d.gap = scale == 0 ? 0.0 : std::abs(d.extension_side - d.restriction_side) / scale;
    return d;
}

Quotient functional_quotient(const RadialFunction& f, const HalfSpaceFunction& g, const ExponentSet& e,
                             const NestedSpec& spec) {
    if (f.dim + 1 != e.n) throw InvalidArgument("profile dimension does not match n - 1");
    Quotient out;
    out.norm_f = std::pow(lp_mass(f, e.p, spec.middle), 1 / e.p);
    const double gr = integrate_half_space(
                          [&](double s, double h) {
                              const double v = g(s, h);
                              return v > 0 ? std::pow(v, e.r) : 0.0;
                          },
                          e.n, g, spec.outer, spec.middle)
                          .value;
    out.norm_g = std::pow(gr, 1 / e.r);
    if (!(out.norm_f > 0) || !(out.norm_g > 0)) throw ZeroFunction("functional quotient needs nonzero f and g");
    out.I = extension_side(f, g, e.lambda, spec);
    out.quotient = out.I / (out.norm_f * out.norm_g);
    return out;
}

double qnorm(const HalfSpaceFunction& field, double q, int n, const NestedSpec& spec) {
    if (!(q < 0)) throw InvalidArgument("qnorm expects q < 0");
    const double m = integrate_half_space(
                         [&](double s, double h) {
                             const double v = field(s, h);
                             if (!(v > 0)) throw NonPositiveField("negative-exponent norm of a non-positive field");
                             return std::pow(v, q);
                         },
                         n, field, spec.outer, spec.middle)
                         .value;
    return std::pow(m, 1 / q);
}

double extension_quotient(const RadialFunction& f, const ExponentSet& e, const NestedSpec& spec) {
    const double nf = std::pow(lp_mass(f, e.p, spec.middle), 1 / e.p);
    if (!(nf > 0)) throw ZeroFunction("extension quotient needs nonzero f");
    const HalfSpaceFunction field =
        whole_half_space([&](double s, double h) { return extend(f, e.lambda, s, h, spec.inner); });
    return qnorm(field, e.q, e.n, spec) / nf;
}

HalfSpaceFunction induced_partner(const RadialFunction& f, const ExponentSet& e, const QuadratureSpec& spec) {
    return whole_half_space(
        [f, e, spec](double s, double h) { return std::pow(extend(f, e.lambda, s, h, spec), e.q - 1); });
}

// Step functions.

double StepFunction::operator()(std::span<const double> x) const {
    for (const StepCell& c : cells) {
        bool inside = true;
        for (int i = 0; i < dim && inside; ++i) inside = x[i] >= c.lo[i] && x[i] < c.hi[i];
        if (inside) return c.value;
    }
    return 0.0;
}

namespace {
double cell_volume(const StepCell& c) {
    double v = 1;
    for (std::size_t i = 0; i < c.lo.size(); ++i) v *= c.hi[i] - c.lo[i];
    return v;
}
}  // namespace

double StepFunction::power_mass(double p) const {
    double m = 0;
    for (const StepCell& c : cells)
        if (c.value > 0) m += std::pow(c.value, p) * cell_volume(c);
    return m;
}

void StepFunction::sample(Rng& g, std::span<double> out) const {
    const double total = power_mass(1.0);
    if (!(total > 0)) throw ZeroFunction("cannot sample a zero step function");
    double u = uniform01(g) * total;
    const StepCell* pick = &cells.back();
    for (const StepCell& c : cells) {
        const double w = c.value * cell_volume(c);
        if (u < w) {
            pick = &c;
            break;
        }
        u -= w;
    }
    for (int i = 0; i < dim; ++i) out[i] = pick->lo[i] + (pick->hi[i] - pick->lo[i]) * uniform01(g);
}

double step_extend(const StepFunction& f, double lambda, double y1, double h, const QuadratureSpec& spec) {
    if (f.dim != 1) throw InvalidArgument("step_extend is defined for functions on the line");
    const double half = 0.5 * lambda;
    double total = 0;
    const double brk[1] = {y1};
    for (const StepCell& c : f.cells) {
        if (c.value == 0) continue;
        total += c.value * integrate(
                               [=](double x) { return std::pow((x - y1) * (x - y1) + h * h, half); }, c.lo[0],
                               c.hi[0], spec, brk)
                               .value;
    }
    return total;
}

StepFunction symmetric_rearrangement(const StepFunction& f) {
    if (f.dim != 1) throw InvalidArgument("symmetric_rearrangement is defined for functions on the line");
    std::vector<StepCell> cells = f.cells;
    for (const StepCell& c : cells)
        if (c.value < 0) throw NegativeValue("rearrangement of a negative step function");
    std::stable_sort(cells.begin(), cells.end(), [](const StepCell& a, const StepCell& b) { return a.value > b.value; });
    StepFunction out{1, {}};
    double half = 0;
    for (const StepCell& c : cells) {
        if (c.value == 0) break;
        const double w = 0.5 * (c.hi[0] - c.lo[0]);
        out.cells.push_back({{-half - w}, {-half}, c.value});
        out.cells.push_back({{half}, {half + w}, c.value});
        half += w;
    }
    return out;
}

RearrangementComparison rearrangement_comparison(const StepFunction& f, const ExponentSet& e, std::uint64_t seed,
                                                 long samples) {
    if (f.dim != 1 || e.n != 2) throw InvalidArgument("rearrangement comparison is implemented for n = 2");
    const StepFunction star = symmetric_rearrangement(f);
    double extent = 0;
    for (const StepCell& c : f.cells) extent = std::max({extent, std::abs(c.lo[0]), std::abs(c.hi[0])});
    // (E f)^q decays like |y|^{lambda q}; a Pareto tail of index 1 keeps the variance finite.
    SampledDensity proposal;
    proposal.envelope_scale = std::max(extent, 1e-3);
    proposal.envelope_tail = 1;
    const McMoments m = mc_moments(
        [&](Rng& rng, std::span<double> out) {
            double y[2];
            const double density = sample_proposal(proposal, 2, true, rng, y);
            const double a = std::pow(step_extend(f, e.lambda, y[0], y[1]), e.q) / density;
            const double b = std::pow(step_extend(star, e.lambda, y[0], y[1]), e.q) / density;
            out[0] = a;
            out[1] = b;
            out[2] = b - a;
        },
        3, samples, seed);
    return {m.mean[0], m.mean[1], m.mean[2], m.std_error[2]};
}

McQuotient step_pair_quotient(const StepFunction& f, const StepFunction& g, const ExponentSet& e, std::uint64_t seed,
                              long samples) {
    if (f.dim != e.n - 1 || g.dim != e.n) throw InvalidArgument("step function dimensions do not match n");
    const double mf = f.power_mass(1.0), mg = g.power_mass(1.0);
    if (!(mf > 0) || !(mg > 0)) throw ZeroFunction("pair quotient needs nonzero f and g");
    const int n = e.n;
    const McMoments m = mc_moments(
        [&](Rng& rng, std::span<double> out) {
            Vec x(n - 1), y(n);
            f.sample(rng, x);
            g.sample(rng, y);
            double d2 = y[n - 1] * y[n - 1];
            for (int i = 0; i < n - 1; ++i) d2 += (x[i] - y[i]) * (x[i] - y[i]);
            out[0] = std::pow(d2, 0.5 * e.lambda);
        },
        1, samples, seed);
    const double norms = std::pow(f.power_mass(e.p), 1 / e.p) * std::pow(g.power_mass(e.r), 1 / e.r);
    McQuotient q;
    q.I = mf * mg * m.mean[0];
    q.I_std_error = mf * mg * m.std_error[0];
    q.quotient = q.I / norms;
    q.quotient_std_error = q.I_std_error / norms;
    return q;
}

StepFunction random_step_function(int dim, bool half, int cells, double extent, Rng& g) {
    if (dim < (half ? 2 : 1) || cells < 1 || !(extent > 0)) throw InvalidArgument("bad random step function request");
    StepFunction f{dim, {}};
    // Slots along the first axis keep the boxes disjoint.
    const double slot = 2 * extent / cells;
    for (int k = 0; k < cells; ++k) {
        StepCell c{Vec(dim), Vec(dim), 0.1 + 2.9 * uniform01(g)};
        const double a = -extent + slot * k;
        const double u = uniform01(g), w = uniform01(g);
        c.lo[0] = a + slot * 0.5 * u;
        c.hi[0] = c.lo[0] + slot * (0.1 + 0.4 * w);
        for (int i = 1; i < dim; ++i) {
            const bool up = half && i == dim - 1;
            const double lo = up ? extent * uniform01(g) : extent * (2 * uniform01(g) - 1);
            c.lo[i] = lo;
            c.hi[i] = lo + extent * (0.1 + 0.9 * uniform01(g));
        }
        f.cells.push_back(std::move(c));
    }
    return f;
}

PairTrials random_pair_quotients(const ExponentSet& e, int trials, std::uint64_t seed, long samples) {
    if (trials < 1 || samples < 2) throw InvalidArgument("need at least one trial and two samples");
    PairTrials out;
    for (int i = 0; i < trials; ++i) {
        const std::uint64_t s = seed ^ static_cast<std::uint64_t>(i);
        Rng g(splitmix64(s));
        const double extent = std::exp(3 * uniform01(g) - 1.5);
        const StepFunction f = random_step_function(e.n - 1, false, 1 + static_cast<int>(g() % 4), extent, g);
        const StepFunction h = random_step_function(e.n, true, 1 + static_cast<int>(g() % 3), extent, g);
        const McQuotient q = step_pair_quotient(f, h, e, s, samples);
        out.quotients.push_back(q.quotient);
        out.std_errors.push_back(q.quotient_std_error);
        if (q.quotient < out.quotients[out.argmin]) out.argmin = out.quotients.size() - 1;
    }
    return out;
}

// Reduced kernel.

double ReducedKernel::Z(double s, double h, const QuadratureSpec& spec) const {
    const double half = 0.5 * lambda;
    const double sh = std::sinh(0.5 * s);
    const double gap = 4 * sh * sh + std::exp(s) * h * h;  // e^s (1+h^2) + e^{-s} - 2
    if (n == 2) return std::pow(gap, half) + std::pow(gap + 4, half);
    return integrate_sphere_zonal_angle(
               [=](double phi) {
                   const double sp = std::sin(0.5 * phi);
                   return std::pow(gap + 4 * sp * sp, half);
               },
               n - 2, spec)
        .value;
}

double ReducedKernel::L(double s, double h, const QuadratureSpec& spec) const {
    return std::exp((n / q + 0.5 * lambda) * s) * Z(s, h, spec);
}

ReducedKernel reduced_kernel(const ExponentSet& e) { return {e.n, e.lambda, e.q}; }

double reduced_extension(const Integrand& F, double s_lo, double s_hi, const ReducedKernel& k, double t, double h,
                         const QuadratureSpec& spec) {
    const double brk[1] = {t};
    return integrate([&](double s) { return k.L(t - s, h, spec) * F(s); }, s_lo, s_hi, spec, brk).value;
}

}  // namespace rhls
