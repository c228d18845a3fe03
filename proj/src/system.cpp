#include "rhls/system.hpp"

#include <algorithm>
#include <cmath>

#include "rhls/errors.hpp"
#include "rhls/exponents.hpp"
#include "rhls/kernels.hpp"
#include "rhls/operators.hpp"
#include "rhls/special.hpp"

namespace rhls {

namespace {

RadialFunction unit_power(int n, double lambda, double b, double expo) {
    RadialFunction f;
    f.dim = n - 1;
    f.value = [=](double r) { return std::pow(b * b + r * r, 0.5 * lambda * expo); };
    return f;
}

double shifted_norm(std::span<const double> x, const BoundaryPoint& c) {
    if (x.size() != c.coords.size()) throw InvalidArgument("boundary point dimension mismatch");
    double s = 0;
    for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - c.coords[i]) * (x[i] - c.coords[i]);
    return std::sqrt(s);
}

std::shared_ptr<const InteriorField> field_for(const ClassifiedSolution& sol, const SystemOptions& opt) {
    if (sol.field && sol.field->n == sol.n && sol.field->lambda == sol.lambda && sol.field->b == sol.b &&
        sol.field->theta == sol.theta)
        return sol.field;
    return std::make_shared<const InteriorField>(interior_field(sol.n, sol.lambda, sol.b, sol.theta, opt));
}

// First system equation at boundary radius rho, from node values of v^{-kappa}.
double first_equation(const InteriorField& f, const std::vector<double>& v_minus_kappa, double rho,
                      const QuadratureSpec& spec) {
    const double area = sphere_area(f.n - 2);
    double s = 0;
    for (std::size_t k = 0; k < f.grid.nodes.size(); ++k) {
        const HalfSpaceNode& nd = f.grid.nodes[k];
        s += nd.weight * zonal_kernel(f.n, f.lambda, rho, nd.sigma, nd.h, spec) / area * v_minus_kappa[k];
    }
    return s;
}

std::vector<double> node_powers(const InteriorField& f, double amp, double expo) {
    std::vector<double> out(f.v_unit.size());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = std::pow(amp * f.v_unit[k], expo);
    return out;
}

}  // namespace

InteriorField interior_field(int n, double lambda, double b, double theta, const SystemOptions& opt) {
    if (n < 2 || !(lambda > 0) || !(b > 0)) throw InvalidArgument("interior field needs n >= 2, lambda > 0, b > 0");
    InteriorField f{n, lambda, b, theta, half_space_grid(n, opt.grid), {}};
    const RadialFunction src = unit_power(n, lambda, b, -theta);
    const QuadratureSpec spec = opt.inner;
    const NodeFunction F = [&](double s, double h) { return extend(src, lambda, s, h, spec); };
    f.v_unit = opt.parallel ? evaluate_grid_parallel(f.grid, F) : evaluate_grid_serial(f.grid, F);
    return f;
}

double ClassifiedSolution::u(std::span<const double> x) const { return u_radial(shifted_norm(x, center)); }

double ClassifiedSolution::u_radial(double r) const { return a * std::pow(b * b + r * r, 0.5 * lambda); }

double ClassifiedSolution::v(double sigma, double h, const QuadratureSpec& spec) const {
    return std::pow(a, -theta) * extend(unit_power(n, lambda, b, -theta), lambda, sigma, h, spec);
}

RadialFunction ClassifiedSolution::u_power(double expo) const {
    RadialFunction f = unit_power(n, lambda, b, expo);
    const double c = std::pow(a, expo);
    f.value = [g = f.value, c](double r) { return c * g(r); };
    return f;
}

ClassifiedSolution classified_pair(int n, double lambda, double a, double b, const BoundaryPoint& center) {
    if (!(a > 0) || !(b > 0)) throw InvalidArgument("classified pair needs a, b > 0");
    if (static_cast<int>(center.coords.size()) != n - 1) throw InvalidArgument("center must lie in R^{n-1}");
    const auto [kappa, theta] = classification_exponents(n, lambda);
    return {n, lambda, a, b, center, kappa, theta, nullptr};
}

AmplitudeResult amplitude_fixed_point(int n, double lambda, double b, const SystemOptions& opt) {
    const auto [kappa, theta] = classification_exponents(n, lambda);
    return amplitude_fixed_point(n, lambda, b, kappa, theta, opt);
}

AmplitudeResult amplitude_fixed_point(int n, double lambda, double b, double kappa, double theta,
                                      const SystemOptions& opt) {
    if (!(kappa > 1) || !(theta > 1)) throw DegenerateExponent("need kappa, theta > 1");
    auto field = std::make_shared<const InteriorField>(interior_field(n, lambda, b, theta, opt));
    // Output amplitude for input amplitude a is a^{theta kappa} K.
    const std::vector<double> vk = node_powers(*field, 1.0, -kappa);
    const double K = first_equation(*field, vk, 0.0, opt.inner) / std::pow(b, lambda);
    if (!(K > 0) || !std::isfinite(K)) throw RootBracketFailure("scaling map is not finite");
    const double tk = theta * kappa;
    auto phi = [&](double la) { return tk * la + std::log(K) - la; };
    double lo = std::log(1e-3), hi = std::log(1e3);
    double flo = phi(lo), fhi = phi(hi);
    if (!(flo * fhi < 0)) throw RootBracketFailure("amplitude not bracketed in [1e-3, 1e3]");
    int it = 0;
    for (; it < 30; ++it) {
        const double mid = 0.5 * (lo + hi), fm = phi(mid);
        if ((fm < 0) == (flo < 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
            fhi = fm;
        }
    }
    double x0 = lo, x1 = hi, f0 = flo, f1 = fhi;
    for (; it < 100 && f1 != f0; ++it) {
        const double x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
        x0 = x1;
        f0 = f1;
        x1 = x2;
        f1 = phi(x1);
        if (std::abs(x1 - x0) < 1e-15 * std::max(1.0, std::abs(x1))) break;
    }
    AmplitudeResult r;
    r.a = std::exp(x1);
    r.closed_form = std::pow(K, -1 / (tk - 1));
    r.scale_exponent = -lambda + (kappa * (lambda + n - 1) - lambda - n) / (tk - 1);
    r.iterations = it;
    r.field = field;
    return r;
}

SystemResidual system_residual(const ClassifiedSolution& sol, const std::vector<double>& radii,
                               const SystemOptions& opt) {
    if (radii.empty()) throw InvalidArgument("system residual needs sample radii");
    const auto field = field_for(sol, opt);
    const std::vector<double> vk = node_powers(*field, std::pow(sol.a, -sol.theta), -sol.kappa);
    SystemResidual r{0, 0, 0, 0};
    double rmin = INFINITY, rmax = -INFINITY;
    for (std::size_t i = 0; i < radii.size(); ++i) {
        const double rho = radii[i];
        const double u = sol.u_radial(rho);
        r.res_u = std::max(r.res_u, std::abs(first_equation(*field, vk, rho, opt.inner) - u) / u);
        const double ratio = sol.v(rho, 0.0, opt.inner) / u;
        r.res_v = std::max(r.res_v, std::abs(ratio - 1));
        if (i == 0) r.trace_ratio = ratio;
        rmin = std::min(rmin, ratio);
        rmax = std::max(rmax, ratio);
    }
    r.trace_shape = (rmax - rmin) / (0.5 * (rmax + rmin));
    return r;
}

GrowthReport growth_and_identity_checks(const ClassifiedSolution& sol, double far, const SystemOptions& opt) {
    const auto field = field_for(sol, opt);
    const double amp_v = std::pow(sol.a, -sol.theta);
    GrowthReport g{};
    const std::vector<double> vk = node_powers(*field, amp_v, -sol.kappa);
    g.int_v_minus_kappa = grid_sum(field->grid, vk);
    g.growth_u = first_equation(*field, vk, far, opt.inner) / std::pow(far, sol.lambda);
    g.mass_v = grid_sum(field->grid, node_powers(*field, amp_v, 1 - sol.kappa));
    const double area = sphere_area(sol.n - 2);
    auto boundary_integral = [&](double expo) {
        const RadialFunction f = sol.u_power(expo);
        return area * integrate_halfline([&](double s) { return f(s) * std::pow(s, sol.n - 2); }, opt.inner).value;
    };
    g.int_u_minus_theta = boundary_integral(-sol.theta);
    g.mass_u = boundary_integral(1 - sol.theta);
    const double c = far / std::sqrt(2.0);
    g.growth_v = sol.v(c, c, opt.inner) / std::pow(far, sol.lambda);
    const double l = sol.lambda;
    const double up = sol.a * std::pow(std::max(sol.b, 1.0), l) * std::max(1.0, std::pow(2.0, 0.5 * l - 1));
    const double dn = sol.a * std::pow(std::min(sol.b, 1.0), l) * std::min(1.0, std::pow(2.0, 0.5 * l - 1));
    g.sandwich_c = std::max(up, 1 / dn);
    g.sandwich_ok = true;
    for (int i = -1; i <= 60; ++i) {
        const double r = i < 0 ? 0.0 : std::pow(10.0, -3 + 6.0 * i / 60);
        const double base = 1 + std::pow(r, l), u = sol.u_radial(r);
        if (u > g.sandwich_c * base * (1 + 1e-14) || u < base / g.sandwich_c * (1 - 1e-14)) g.sandwich_ok = false;
    }
    return g;
}

double critical_radius(const ClassifiedSolution& sol, const BoundaryPoint& x) {
    const double d = shifted_norm(x.coords, sol.center);
    return std::sqrt(sol.b * sol.b + d * d);
}

double moving_sphere_invariance(const ClassifiedSolution& sol, const BoundaryPoint& x, double nu) {
    if (!(nu > 0)) nu = critical_radius(sol, x);
    const int m = sol.n - 1;
    const PointFunction u = [&sol](std::span<const double> p) { return sol.u(p); };
    const PointFunction reflected = ms_reflect(u, x, nu, sol.lambda);
    double worst = 0;
    for (int k = 0; k < 50; ++k) {
        const double d = std::pow(10.0, -1.5 + 3.5 * k / 49.0);
        Vec xi = x.coords;
        if (m == 1) {
            xi[0] += (k % 2 == 0 ? d : -d);
        } else {
            const double ang = 2 * 3.141592653589793 * 0.6180339887498949 * k;
            xi[0] += d * std::cos(ang);
            xi[1] += d * std::sin(ang);
        }
        const double uv = sol.u(xi);
        worst = std::max(worst, std::abs(reflected(xi) - uv) / uv);
    }
    return worst;
}

}  // namespace rhls
