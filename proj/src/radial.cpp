#include "rhls/radial.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rhls/errors.hpp"
#include "rhls/montecarlo.hpp"
#include "rhls/special.hpp"

namespace rhls {

RadialProfile::RadialProfile(std::vector<double> r, std::vector<double> v, int d)
    : radii(std::move(r)), values(std::move(v)), dim(d) {
    if (dim < 1) throw InvalidArgument("profile dimension must be >= 1");
    if (radii.empty() || radii.size() != values.size()) throw InvalidArgument("profile grid/value size mismatch");
    if (radii[0] < 0) throw InvalidArgument("radii must be >= 0");
    for (std::size_t i = 1; i < radii.size(); ++i)
        if (!(radii[i] > radii[i - 1])) throw InvalidArgument("radii must be strictly increasing");
    for (double x : values) {
        if (!std::isfinite(x)) throw InvalidArgument("profile values must be finite");
        if (x < 0) throw NegativeValue("profile values must be nonnegative");
    }
    monotone = std::is_sorted(values.rbegin(), values.rend());
}

double RadialProfile::operator()(double r) const {
    if (r <= radii.front()) return values.front();
    if (r > radii.back()) return 0.0;
    const auto it = std::lower_bound(radii.begin(), radii.end(), r);
    const std::size_t i = static_cast<std::size_t>(it - radii.begin());
    if (radii[i] == r) return values[i];
    const double t = (r - radii[i - 1]) / (radii[i] - radii[i - 1]);
    return values[i - 1] + t * (values[i] - values[i - 1]);
}

double RadialProfile::max_value() const { return *std::max_element(values.begin(), values.end()); }

RadialFunction as_function(const RadialProfile& p) {
    RadialFunction f;
    f.value = [p](double r) { return p(r); };
    f.dim = p.dim;
    f.support = p.radii.back();
    f.breaks = p.radii;
    return f;
}

double superlevel_measure(const RadialProfile& f, double level, bool strict) {
    auto above = [&](double x) { return strict ? x > level : x >= level; };
    const int d = f.dim;
    double acc = 0;
    auto add = [&](double lo, double hi) { acc += std::pow(hi, d) - std::pow(lo, d); };
    if (above(f.values[0])) add(0, f.radii[0]);
    for (std::size_t i = 0; i + 1 < f.radii.size(); ++i) {
        const double r0 = f.radii[i], r1 = f.radii[i + 1];
        const double f0 = f.values[i], f1 = f.values[i + 1];
        const bool a0 = above(f0), a1 = above(f1);
        if (a0 && a1) {
            add(r0, r1);
        } else if (a0 != a1) {
            const double rs = r0 + (level - f0) / (f1 - f0) * (r1 - r0);
            if (a0) add(r0, std::clamp(rs, r0, r1));
            else add(std::clamp(rs, r0, r1), r1);
        }
    }
    return ball_volume(d) * acc;
}

LevelMeasure distribution(const RadialProfile& f, double level) {
    if (!f.monotone) throw NotMonotone("distribution requires a monotone-certified profile");
    if (!(level > 0)) throw InvalidArgument("level must be positive");
    // Last radius where the interpolant exceeds the level.
    double rho = 0;
    if (f.values[0] > level) {
        // First node at or below the level; values are nonincreasing.
        const auto it = std::partition_point(f.values.begin(), f.values.end(), [&](double v) { return v > level; });
        const std::size_t i = static_cast<std::size_t>(it - f.values.begin());
        if (i == f.values.size()) {
            rho = f.radii.back();
        } else {
            const double f0 = f.values[i - 1], f1 = f.values[i];
            rho = f.radii[i - 1] + (level - f0) / (f1 - f0) * (f.radii[i] - f.radii[i - 1]);
        }
    }
    return {level, ball_volume(f.dim) * std::pow(rho, f.dim)};
}

namespace {

// Builds a profile from (radius, value) nodes with nonincreasing values,
// nudging coincident radii so the grid is strictly increasing.
RadialProfile from_nodes(std::vector<std::pair<double, double>> nodes, int dim) {
    std::vector<double> r, v;
    for (auto [rad, val] : nodes) {
        if (!r.empty()) {
            const double floor = r.back() + 1e-12 * (1 + r.back());
            if (rad < floor) {
                if (val == v.back()) continue;
                rad = floor;
            }
        }
        r.push_back(rad);
        v.push_back(val);
    }
    RadialProfile out(r, v, dim);
    if (!out.monotone) throw NotMonotone("rearrangement produced a non-monotone profile");
    return out;
}

double radius_of(double measure, int dim) { return std::pow(measure / ball_volume(dim), 1.0 / dim); }

}  // namespace

RadialProfile rearrange(const RadialProfile& f) {
    const int d = f.dim;
    std::vector<double> levels(f.values.begin(), f.values.end());
    levels.push_back(0.0);
    std::sort(levels.begin(), levels.end(), std::greater<>());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    const double top = levels.front();
    if (top == 0) return RadialProfile({0.0}, {0.0}, d);

    std::vector<std::pair<double, double>> nodes;
    nodes.emplace_back(0.0, top);
    auto radius_at = [&](double a) { return radius_of(superlevel_measure(f, a, true), d); };
    // Between two levels the exact radius is a smooth function of the level;
    // bisect until linear interpolation reproduces the measure.
    auto refine = [&](auto&& self, double a_hi, double r_hi, double a_lo, double r_lo, int depth) -> void {
        const double b = 0.5 * (a_hi + a_lo), rb = radius_at(b);
        const double m_lin = ball_volume(d) * std::pow(0.5 * (r_hi + r_lo), d), m_exact = ball_volume(d) * std::pow(rb, d);
        if (depth == 0 || std::abs(m_lin - m_exact) <= 1e-7 * (1 + m_exact)) return;
        self(self, a_hi, r_hi, b, rb, depth - 1);
        nodes.emplace_back(rb, b);
        self(self, b, rb, a_lo, r_lo, depth - 1);
    };
    for (std::size_t k = 0; k < levels.size(); ++k) {
        const double a = levels[k];
        if (a > 0) {
            nodes.emplace_back(radius_of(superlevel_measure(f, a, false), d), a);
        }
        const double ra = radius_at(a);
        nodes.emplace_back(ra, a);
        if (k + 1 < levels.size()) {
            const double lo = levels[k + 1];
            // Just above the next level, where the measure is still continuous.
            const double lo_up = lo + 1e-13 * (a - lo);
            refine(refine, a, ra, lo_up, radius_at(lo_up), 20);
        }
    }
    // The strict superlevel set at the top level is empty; its node is the origin.
    std::stable_sort(nodes.begin(), nodes.end(), [](auto& x, auto& y) {
        return x.second != y.second ? x.second > y.second : x.first < y.first;
    });
    return from_nodes(std::move(nodes), d);
}

RadialProfile rearrange_samples(const std::vector<double>& values, const std::vector<double>& cell_measures,
                                int dim) {
    if (values.size() != cell_measures.size() || values.empty())
        throw InvalidArgument("rearrange_samples: size mismatch");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] < 0) throw NegativeValue("rearrange_samples: negative value");
        if (!(cell_measures[i] >= 0)) throw InvalidArgument("rearrange_samples: negative cell measure");
    }
    std::vector<std::size_t> idx(values.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
    std::vector<std::pair<double, double>> nodes;
    double acc = 0;
    std::size_t i = 0;
    while (i < idx.size()) {
        const double v = values[idx[i]];
        double m = 0;
        while (i < idx.size() && values[idx[i]] == v) m += cell_measures[idx[i++]];
        if (v == 0) break;
        nodes.emplace_back(radius_of(acc, dim), v);
        acc += m;
        nodes.emplace_back(radius_of(acc, dim), v);
    }
    if (nodes.empty()) return RadialProfile({0.0}, {0.0}, dim);
    return from_nodes(std::move(nodes), dim);
}

LpMass lp_mass(const RadialProfile& f, double p, const QuadratureSpec& spec) {
    if (!(p > 0 && p <= 1)) throw InvalidArgument("lp_mass needs p in (0,1]");
    const int d = f.dim;
    const double area = sphere_area(d - 1);
    LpMass out{};
    double direct = std::pow(f.values[0], p) * ball_volume(d) * std::pow(f.radii[0], d);
    for (std::size_t i = 0; i + 1 < f.radii.size(); ++i) {
        const double r0 = f.radii[i], r1 = f.radii[i + 1], f0 = f.values[i], f1 = f.values[i + 1];
        if (f0 == 0 && f1 == 0) continue;
        direct += area * integrate(
                             [&](double r) {
                                 const double v = f0 + (r - r0) / (r1 - r0) * (f1 - f0);
                                 return std::pow(std::max(v, 0.0), p) * std::pow(r, d - 1);
                             },
                             r0, r1, spec)
                             .value;
    }
    out.direct = direct;
    // Layer cake in s = a^p: p int mu(a) a^{p-1} da = int mu(s^{1/p}) ds.
    std::vector<double> breaks;
    for (double v : f.values) breaks.push_back(std::pow(v, p));
    const double top = std::pow(f.max_value(), p);
    out.layer_cake =
        integrate(
            [&](double s) {
                const double a = std::pow(s, 1 / p);
                return f.monotone && a > 0 ? distribution(f, a).measure : superlevel_measure(f, a);
            },
            0, top, spec, breaks)
            .value;
    return out;
}

double lp_mass(const RadialFunction& f, double p, const QuadratureSpec& spec) {
    if (!(p > 0 && p <= 1)) throw InvalidArgument("lp_mass needs p in (0,1]");
    const int d = f.dim;
    const Integrand g = [&](double r) { return std::pow(f(r), p) * std::pow(r, d - 1); };
    const double area = sphere_area(d - 1);
    if (std::isfinite(f.support)) return area * integrate(g, 0, f.support, spec, f.breaks).value;
    return area * integrate_halfline(g, spec).value;
}

double layercake_c_max(int n, double u, double v) {
    return std::max(std::pow(u / (2 * ball_volume(n - 1)), 1.0 / (n - 1)), std::pow(v / ball_volume(n), 1.0 / n));
}

namespace {

// Uniform point of {|y'| < S} x [0, H] in R^n_+; returns the box measure.
double box_point(int n, double S, double H, Rng& g, std::span<double> y) {
    Vec t(n - 1);
    const double dummy = sample_proposal(SampledDensity{{}, S, 0, 1}, n - 1, false, g, t);
    (void)dummy;
    for (int i = 0; i < n - 1; ++i) y[i] = t[i];
    y[n - 1] = H * uniform01(g);
    return ball_volume(n - 1) * std::pow(S, n - 1) * H;
}

double norm_tangential(std::span<const double> y, int m) {
    double s = 0;
    for (int i = 0; i < m; ++i) s += y[i] * y[i];
    return std::sqrt(s);
}

}  // namespace

McValue half_space_level_measure(const HalfSpaceFunction& g, int n, double b, std::uint64_t seed, long samples) {
    if (!g.compact()) throw EnvelopeMissing("level measure needs a compactly supported g");
    const double S = g.sigma_extent(), H = g.h_max;
    const double B = ball_volume(n - 1) * std::pow(S, n - 1) * H;
    const McMoments m = mc_moments(
        [&](Rng& rng, std::span<double> out) {
            Vec y(n);
            box_point(n, S, H, rng, y);
            const double s = norm_tangential(y, n - 1);
            out[0] = (s <= g.sigma_limit(y[n - 1]) && g(s, y[n - 1]) > b) ? 1.0 : 0.0;
        },
        1, samples, seed);
    return {B * m.mean[0], B * m.std_error[0]};
}

LayerCakeCheck layercake_bound_check(const RadialProfile& f, const HalfSpaceFunction& g, double a, double b,
                                     double c, std::uint64_t seed, long samples) {
    if (!(a > 0) || !(b > 0) || !(c >= 0)) throw InvalidArgument("need a, b > 0 and c >= 0");
    if (!g.compact()) throw EnvelopeMissing("layer-cake check needs a compactly supported g");
    const int n = f.dim + 1;
    const LevelMeasure u = distribution(f, a);
    if (u.measure == 0) {
        const McValue v = half_space_level_measure(g, n, b, seed, samples);
        return {0.0, 0.0, true, 0.0, 0.0, v.value};
    }
    const double rho = radius_of(u.measure, n - 1);
    const double S = g.sigma_extent(), H = g.h_max;
    const double B = ball_volume(n - 1) * std::pow(S, n - 1) * H;
    const McMoments m = mc_moments(
        [&](Rng& rng, std::span<double> out) {
            Vec x(n - 1), y(n);
            sample_proposal(SampledDensity{{}, rho, 0, 1}, n - 1, false, rng, x);
            box_point(n, S, H, rng, y);
            const double s = norm_tangential(y, n - 1);
            const bool in_g = s <= g.sigma_limit(y[n - 1]) && g(s, y[n - 1]) > b;
            double d2 = y[n - 1] * y[n - 1];
            for (int i = 0; i < n - 1; ++i) d2 += (x[i] - y[i]) * (x[i] - y[i]);
            const double far = d2 > c * c ? 1.0 : 0.0;
            out[0] = in_g ? far : 0.0;
            out[1] = in_g ? 1.0 : 0.0;
            out[2] = in_g ? far - 0.5 : 0.0;
        },
        3, samples, seed);
    LayerCakeCheck r;
    r.u = u.measure;
    r.v = B * m.mean[1];
    r.I_abc = u.measure * B * m.mean[0];
    r.bound = 0.5 * r.u * r.v;
    r.std_error = u.measure * B * m.std_error[2];
    r.ok = u.measure * B * m.mean[2] >= -3 * r.std_error;
    return r;
}

double reversed_holder_gap(const Integrand& phi, const Integrand& psi, double p, double a, double b,
                           const QuadratureSpec& spec) {
    if (!(p > 0 && p < 1)) throw InvalidArgument("reversed Holder needs p in (0,1)");
    const double pc = p / (p - 1);
    auto psi_checked = [&](double x) {
        const double v = psi(x);
        if (!(v > 0)) throw SignViolation("psi must be positive on the domain");
        return v;
    };
    for (int i = 0; i <= 64; ++i) psi_checked(a + (b - a) * i / 64.0);
    const double lhs = integrate([&](double x) { return phi(x) * psi_checked(x); }, a, b, spec).value;
    const double mp = integrate([&](double x) { return std::pow(phi(x), p); }, a, b, spec).value;
    const double mq = integrate([&](double x) { return std::pow(psi_checked(x), pc); }, a, b, spec).value;
    return lhs - std::pow(mp, 1 / p) * std::pow(mq, 1 / pc);
}

// Half-space profiles.

HalfSpaceProfile::HalfSpaceProfile(std::vector<double> rho, std::vector<double> h, std::vector<double> v)
    : rho_grid(std::move(rho)), h_grid(std::move(h)), values(std::move(v)) {
    if (rho_grid.size() < 2 || h_grid.size() < 2) throw InvalidArgument("half-space grid needs >= 2 nodes per axis");
    if (values.size() != rho_grid.size() * h_grid.size()) throw InvalidArgument("half-space value size mismatch");
    for (const auto* g : {&rho_grid, &h_grid}) {
        if ((*g)[0] < 0) throw InvalidArgument("half-space grid must be >= 0");
        for (std::size_t i = 1; i < g->size(); ++i)
            if (!((*g)[i] > (*g)[i - 1])) throw InvalidArgument("half-space grid must be strictly increasing");
    }
    for (double x : values)
        if (!(x >= 0)) throw NegativeValue("half-space values must be nonnegative");
}

double HalfSpaceProfile::operator()(double sigma, double h) const {
    if (sigma > rho_grid.back() || h > h_grid.back()) return 0.0;
    auto locate = [](const std::vector<double>& g, double x, std::size_t& i, double& t) {
        if (x <= g.front()) {
            i = 0;
            t = 0;
            return;
        }
        i = static_cast<std::size_t>(std::upper_bound(g.begin(), g.end(), x) - g.begin()) - 1;
        if (i >= g.size() - 1) i = g.size() - 2;
        t = (x - g[i]) / (g[i + 1] - g[i]);
    };
    std::size_t i, j;
    double s, t;
    locate(rho_grid, sigma, i, s);
    locate(h_grid, h, j, t);
    const std::size_t m = h_grid.size();
    const double v00 = values[i * m + j], v01 = values[i * m + j + 1];
    const double v10 = values[(i + 1) * m + j], v11 = values[(i + 1) * m + j + 1];
    return (1 - s) * ((1 - t) * v00 + t * v01) + s * ((1 - t) * v10 + t * v11);
}

double HalfSpaceProfile::max_value() const { return *std::max_element(values.begin(), values.end()); }

HalfSpaceFunction as_function(const HalfSpaceProfile& g) {
    HalfSpaceFunction f;
    f.value = [g](double s, double h) { return g(s, h); };
    f.h_max = g.h_grid.back();
    const double smax = g.rho_grid.back();
    f.sigma_max = [smax](double) { return smax; };
    f.h_breaks = g.h_grid;
    f.sigma_breaks = g.rho_grid;
    return f;
}

bool HalfSpaceFunction::compact() const { return std::isfinite(h_max) && std::isfinite(sigma_extent()); }

double HalfSpaceFunction::sigma_extent() const {
    if (!sigma_max) return kInf;
    if (!std::isfinite(h_max)) return kInf;
    double s = 0;
    for (int i = 0; i <= 256; ++i) s = std::max(s, sigma_max(h_max * i / 256.0));
    return s;
}

}  // namespace rhls
