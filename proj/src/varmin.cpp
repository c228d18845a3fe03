#include "rhls/varmin.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/tools/minima.hpp>

#include "rhls/errors.hpp"
#include "rhls/montecarlo.hpp"
#include "rhls/operators.hpp"
#include "rhls/special.hpp"

namespace rhls {

InitKind parse_init(const std::string& name) {
    if (name == "extremal-seed") return InitKind::ExtremalSeed;
    if (name == "flat") return InitKind::Flat;
    if (name == "random") return InitKind::Random;
    throw InvalidArgument("unknown init: " + name);
}

void MinimizeOptions::validate() const {
    if (grid_size < 16) throw InvalidArgument("grid_size must be at least 16");
    if (!(tol > 0)) throw InvalidArgument("tol must be positive");
    if (!(r_min > 0) || !(r_max > r_min)) throw InvalidArgument("need 0 < r_min < r_max");
    if (max_iters < 0) throw InvalidArgument("max_iters must be nonnegative");
    if (!(armijo > 0 && armijo < 1) || !(initial_step > 0)) throw InvalidArgument("bad step rule parameters");
    if (element_order < 2 || tail_panels < 1) throw InvalidArgument("bad quadrature parameters");
}

std::vector<double> minimizer_grid(int size, double r_min, double r_max) {
    std::vector<double> r(size);
    r[0] = 0;
    const double step = std::log(r_max / r_min) / (size - 2);
    for (int i = 1; i < size; ++i) r[i] = r_min * std::exp(step * (i - 1));
    r[size - 1] = r_max;
    return r;
}

VarminProblem::VarminProblem(const ExponentSet& e, const MinimizeOptions& opt) : e_(e), opt_(opt) {
    opt.validate();
    e.check_invariants();
    if (!(e.q < 0)) throw InvalidArgument("minimization needs q < 0");
    const int n = e.n, N = opt.grid_size;
    const double lambda = e.lambda, area = sphere_area(n - 2);
    radii_ = minimizer_grid(N, opt.r_min, opt.r_max);
    // Decay forced by u ~ |x|^lambda in f = u^{1/(p-1)}.
    tail_ = lambda / (1 - e.p);
    const double w_rate = tail_ - (n - 1) - lambda;
    const double p_rate = tail_ * e.p - (n - 1);
    if (!(w_rate > 0) || !(p_rate > 0)) throw InvalidArgument("tail model not integrable for these exponents");
    tail_mass_ = area * std::pow(opt.r_max, n - 1) / p_rate;

    const GaussRule& gl = gauss_legendre(opt.element_order);
    hat_mass_.assign(N, 0.0);
    for (int i = 0; i + 1 < N; ++i) {
        const double len = radii_[i + 1] - radii_[i];
        for (std::size_t g = 0; g < gl.nodes.size(); ++g) {
            const double s = 0.5 * (1 + gl.nodes[g]);
            const double x = radii_[i] + len * s;
            const double mw = 0.5 * len * gl.weights[g] * area * std::pow(x, n - 2);
            points_.push_back({i, s, mw});
            hat_mass_[i] += mw * (1 - s);
            hat_mass_[i + 1] += mw * s;
        }
    }
    hat_mass_[N - 1] += tail_mass_;

    struct TailPoint {
        double x, weight;
    };
    std::vector<TailPoint> tail_points;
    const double T = 40.0 / std::min(w_rate, 1.0);
    const double dt = T / opt.tail_panels;
    for (int k = 0; k < opt.tail_panels; ++k)
        for (std::size_t g = 0; g < gl.nodes.size(); ++g) {
            const double t = dt * (k + 0.5 * (1 + gl.nodes[g]));
            const double x = opt.r_max * std::exp(t);
            tail_points.push_back({x, 0.5 * dt * gl.weights[g] * x * std::pow(x, n - 2) * std::exp(-tail_ * t)});
        }

    const HalfSpaceGrid grid = half_space_grid(n, opt.outer);
    const std::size_t K = grid.nodes.size();
    outer_weights_.resize(K);
    W_.assign(K * N, 0.0);
    const QuadratureSpec zspec = QuadratureSpec{}.tol(1e-12, 1e-300);
    const long long KK = static_cast<long long>(K);
#pragma omp parallel for schedule(dynamic, 16) if (opt.parallel)
    for (long long k = 0; k < KK; ++k) {
        const HalfSpaceNode& nd = grid.nodes[k];
        outer_weights_[k] = nd.weight;
        double* row = &W_[k * N];
        for (const RadialPoint& pt : points_) {
            const double x = radii_[pt.element] + (radii_[pt.element + 1] - radii_[pt.element]) * pt.s;
            const double z = zonal_kernel(n, lambda, nd.sigma, x, nd.h, zspec) * pt.mass_weight / area;
            row[pt.element] += z * (1 - pt.s);
            row[pt.element + 1] += z * pt.s;
        }
        for (const TailPoint& tp : tail_points)
            row[N - 1] += tp.weight * zonal_kernel(n, lambda, nd.sigma, tp.x, nd.h, zspec);
    }
    Wt_.resize(K * N);
    for (std::size_t k = 0; k < K; ++k)
        for (int j = 0; j < N; ++j) Wt_[j * K + k] = W_[k * N + j];
}

double VarminProblem::value_at(const std::vector<double>& f, const RadialPoint& pt) const {
    return f[pt.element] * (1 - pt.s) + f[pt.element + 1] * pt.s;
}

double VarminProblem::p_mass(const std::vector<double>& f) const {
    double s = 0;
    for (const RadialPoint& pt : points_) s += pt.mass_weight * std::pow(value_at(f, pt), e_.p);
    return s + tail_mass_ * std::pow(f.back(), e_.p);
}

std::vector<double> VarminProblem::extension(const std::vector<double>& f) const {
    const std::size_t K = outer_weights_.size(), N = radii_.size();
    std::vector<double> out(K);
    const long long KK = static_cast<long long>(K);
#pragma omp parallel for schedule(static) if (opt_.parallel)
    for (long long k = 0; k < KK; ++k) {
        const double* row = &W_[k * N];
        double s = 0;
        for (std::size_t j = 0; j < N; ++j) s += row[j] * f[j];
        out[k] = s;
    }
    return out;
}

double VarminProblem::objective(const std::vector<double>& f) const {
    const std::vector<double> Ef = extension(f);
    double Q = 0;
    for (std::size_t k = 0; k < Ef.size(); ++k) Q += outer_weights_[k] * std::pow(Ef[k], e_.q);
    return std::pow(Q, 1 / e_.q) / std::pow(p_mass(f), 1 / e_.p);
}

double VarminProblem::objective_gradient(const std::vector<double>& f, std::vector<double>& grad) const {
    const std::size_t K = outer_weights_.size(), N = radii_.size();
    const std::vector<double> Ef = extension(f);
    std::vector<double> c(K);
    double Q = 0;
    for (std::size_t k = 0; k < K; ++k) {
        const double t = outer_weights_[k] * std::pow(Ef[k], e_.q);
        Q += t;
        c[k] = t / Ef[k];
    }
    const double P = p_mass(f);
    const double J = std::pow(Q, 1 / e_.q) / std::pow(P, 1 / e_.p);
    std::vector<double> dP(N, 0.0);
    for (const RadialPoint& pt : points_) {
        const double d = pt.mass_weight * std::pow(value_at(f, pt), e_.p - 1);
        dP[pt.element] += d * (1 - pt.s);
        dP[pt.element + 1] += d * pt.s;
    }
    dP[N - 1] += tail_mass_ * std::pow(f.back(), e_.p - 1);
    grad.assign(N, 0.0);
    const long long NN = static_cast<long long>(N);
#pragma omp parallel for schedule(static) if (opt_.parallel)
    for (long long j = 0; j < NN; ++j) {
        const double* col = &Wt_[j * K];
        double s = 0;
        for (std::size_t k = 0; k < K; ++k) s += col[k] * c[k];
        grad[j] = J * (s / Q - dP[j] / P);
    }
    return J;
}

std::vector<double> VarminProblem::metric_weights(const std::vector<double>& f) const {
    std::vector<double> w(f.size());
    for (std::size_t j = 0; j < f.size(); ++j) w[j] = std::pow(f[j], e_.p) * hat_mass_[j];
    return w;
}

std::vector<double> VarminProblem::initial_profile(InitKind kind, std::uint64_t seed) const {
    const std::size_t N = radii_.size();
    const double expo = 1 - e_.n - 0.5 * e_.lambda;
    std::vector<double> f(N, 1.0);
    if (kind == InitKind::ExtremalSeed) {
        for (std::size_t j = 0; j < N; ++j) f[j] = std::pow(1 + radii_[j] * radii_[j], expo);
    } else if (kind == InitKind::Random) {
        Rng g(splitmix64(seed));
        const double scale = std::exp(2 * uniform01(g) - 1);
        double z = 0, prev = 0;
        for (std::size_t j = 0; j < N; ++j) {
            const double r = radii_[j] / scale;
            const double cur = std::log1p(r * r);
            z -= 2 * uniform01(g) * 0.5 * tail_ * (cur - prev);
            prev = cur;
            f[j] = std::exp(z);
        }
    }
    return f;
}

std::vector<double> project_nonincreasing(const std::vector<double>& v, const std::vector<double>& w) {
    if (v.size() != w.size()) throw InvalidArgument("value and weight sizes differ");
    struct Block {
        double mean, weight;
        std::size_t count;
    };
    std::vector<Block> blocks;
    for (std::size_t i = 0; i < v.size(); ++i) {
        Block b{v[i], w[i], 1};
        while (!blocks.empty() && blocks.back().mean < b.mean) {
            const Block& a = blocks.back();
            const double wt = a.weight + b.weight;
            b = {(a.mean * a.weight + b.mean * b.weight) / wt, wt, a.count + b.count};
            blocks.pop_back();
        }
        blocks.push_back(b);
    }
    std::vector<double> out;
    out.reserve(v.size());
    for (const Block& b : blocks) out.insert(out.end(), b.count, b.mean);
    return out;
}

MinimizeResult minimize_profile(const ExponentSet& e, const MinimizeOptions& opt) {
    const VarminProblem prob(e, opt);
    const std::size_t N = prob.radii().size();
    const double p = e.p;

    auto normalized = [&](std::vector<double> z) {
        std::vector<double> f(N);
        for (std::size_t j = 0; j < N; ++j) f[j] = std::exp(z[j]);
        const double shift = std::log(prob.p_mass(f)) / p;
        for (std::size_t j = 0; j < N; ++j) f[j] = std::exp(z[j] - shift);
        return f;
    };

    std::vector<double> z(N);
    {
        const std::vector<double> f0 = prob.initial_profile(opt.init, opt.seed);
        for (std::size_t j = 0; j < N; ++j) z[j] = std::log(f0[j]);
        z = project_nonincreasing(z, std::vector<double>(N, 1.0));
    }
    std::vector<double> f = normalized(z);
    for (std::size_t j = 0; j < N; ++j) z[j] = std::log(f[j]);

    MinimizeResult res;
    std::vector<double> grad, g(N), d(N);
    double step = opt.initial_step;
    int it = 0;
    for (;;) {
        const double J = prob.objective_gradient(f, grad);
        if (res.trace.empty()) res.trace.push_back(J);
        const std::vector<double> w = prob.metric_weights(f);
        for (std::size_t j = 0; j < N; ++j) {
            g[j] = f[j] * grad[j] / J;  // d log J / d z_j
            d[j] = -g[j] / w[j];
        }
        {
            std::vector<double> trial(N);
            for (std::size_t j = 0; j < N; ++j) trial[j] = z[j] + d[j];
            trial = project_nonincreasing(trial, w);
            // Projected step measured in the metric of the projection.
            double num = 0, den = 0;
            for (std::size_t j = 0; j < N; ++j) {
                num += w[j] * (trial[j] - z[j]) * (trial[j] - z[j]);
                den += w[j];
            }
            res.stationarity = std::sqrt(num / den);
        }
        res.constant = J;
        if (res.stationarity <= opt.tol) {
            res.converged = true;
            break;
        }
        if (it >= opt.max_iters) break;
        bool accepted = false;
        const double lJ = std::log(J);
        while (step > 1e-14) {
            std::vector<double> trial(N);
            for (std::size_t j = 0; j < N; ++j) trial[j] = z[j] + step * d[j];
            trial = project_nonincreasing(trial, w);
            double slope = 0;
            for (std::size_t j = 0; j < N; ++j) slope += g[j] * (trial[j] - z[j]);
            std::vector<double> ft = normalized(trial);
            const double Jt = prob.objective(ft);
            if (std::log(Jt) <= lJ + opt.armijo * slope && Jt <= J) {
                f = std::move(ft);
                for (std::size_t j = 0; j < N; ++j) z[j] = std::log(f[j]);
                res.trace.push_back(Jt);
                step = std::min(2 * step, 1e6);
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;
        ++it;
    }
    if (res.trace.size() == 1 && !res.converged && opt.max_iters > 0)
        throw Stalled("no descent direction found from the initial profile");
    res.iterations = it;
    res.values = f;
    res.profile = RadialProfile(prob.radii(), f, e.n - 1);
    res.tail_exponent = prob.tail_exponent();
    res.p_mass = prob.p_mass(f);
    return res;
}

RadialProfile extremal_reference(int n, double lambda, std::vector<double> radii) {
    const ExponentSet e = diagonal_exponents(n, lambda);
    if (radii.empty()) radii = minimizer_grid(MinimizeOptions{}.grid_size, MinimizeOptions{}.r_min, MinimizeOptions{}.r_max);
    const double expo = 1 - n - 0.5 * lambda;
    const double s = -e.p * expo, h = 0.5 * (n - 1);
    // int over R^{n-1} of (1+r^2)^{-s}
    const double mass = std::exp(h * std::log(std::numbers::pi) + std::lgamma(s - h) - std::lgamma(s));
    const double k = std::pow(mass, -1 / e.p);
    std::vector<double> v(radii.size());
    for (std::size_t i = 0; i < radii.size(); ++i) v[i] = k * std::pow(1 + radii[i] * radii[i], expo);
    return RadialProfile(std::move(radii), std::move(v), n - 1);
}

ShapeFit fit_extremal_shape(const std::vector<double>& radii, const std::vector<double>& values, double expo,
                            double floor) {
    if (radii.size() != values.size() || radii.empty()) throw InvalidArgument("fit needs matching nonempty arrays");
    const double vmax = *std::max_element(values.begin(), values.end());
    if (!(vmax > 0)) throw ZeroFunction("fit of a zero profile");
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < values.size(); ++i)
        if (values[i] >= floor * vmax) keep.push_back(i);
    auto ratio_range = [&](double ls) {
        const double s = std::exp(ls);
        double lo = INFINITY, hi = 0;
        for (std::size_t i : keep) {
            const double rr = radii[i] / s;
            const double q = values[i] / std::pow(1 + rr * rr, expo);
            lo = std::min(lo, q);
            hi = std::max(hi, q);
        }
        return std::pair{lo, hi};
    };
    auto dev = [&](double ls) {
        const auto [lo, hi] = ratio_range(ls);
        return (hi - lo) / (hi + lo);
    };
    double best = 0, best_dev = INFINITY;
    for (int i = 0; i <= 280; ++i) {
        const double ls = -7 + 0.05 * i;
        const double dv = dev(ls);
        if (dv < best_dev) {
            best_dev = dv;
            best = ls;
        }
    }
    const auto m = boost::math::tools::brent_find_minima(dev, best - 0.05, best + 0.05, 40);
    const auto [lo, hi] = ratio_range(m.first);
    return {0.5 * (lo + hi), std::exp(m.first), m.second};
}

}  // namespace rhls
