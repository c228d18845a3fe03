#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace rhls {

enum class Rule { AdaptiveGauss, FixedGaussLegendre, DoubleExponential, MonteCarlo };

Rule parse_rule(const std::string& name);
std::string rule_name(Rule r);

struct QuadratureSpec {
    Rule rule = Rule::AdaptiveGauss;
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    int max_subdivisions = 2000;
    std::uint64_t seed = 0;
    long mc_samples = 1 << 18;

    void validate() const;
    QuadratureSpec tol(double rel, double abs) const {
        QuadratureSpec s = *this;
        s.rel_tol = rel;
        s.abs_tol = abs;
        return s;
    }
};

struct IntegralResult {
    double value = 0;
    double error_estimate = 0;
    long evaluations = 0;

    IntegralResult& operator+=(const IntegralResult& o) {
        value += o.value;
        error_estimate += o.error_estimate;
        evaluations += o.evaluations;
        return *this;
    }
};

using Integrand = std::function<double(double)>;

// Finite interval; breaks inside (a,b) seed the initial partition.
IntegralResult integrate(const Integrand& f, double a, double b, const QuadratureSpec& spec,
                         std::span<const double> breaks = {});

// [a, inf) with a >= 0, through r = e^t and a rational map of the t-line.
IntegralResult integrate_halfline(const Integrand& f, const QuadratureSpec& spec, double a = 0);

IntegralResult integrate_line(const Integrand& f, const QuadratureSpec& spec);

// Integral over S^k of omega -> g(omega . e), g a function of the cosine.
IntegralResult integrate_sphere_zonal(const Integrand& g, int k, const QuadratureSpec& spec);

// Same, with g a function of the polar angle phi in [0, pi]; avoids the
// cancellation in 1 - cos(phi) near the pole.
IntegralResult integrate_sphere_zonal_angle(const Integrand& g, int k, const QuadratureSpec& spec);

// Integral over the upper hemisphere of S^n of g(xi_{n+1}).
IntegralResult integrate_hemisphere_zonal(const Integrand& g, int n, const QuadratureSpec& spec);

// Same, with g a function of the elevation angle beta = asin(height) in [0, pi/2].
IntegralResult integrate_hemisphere_elevation(const Integrand& g, int n, const QuadratureSpec& spec);

// Gauss-Legendre rule of the given order on [-1, 1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
const GaussRule& gauss_legendre(int order);

// Fixed product rule for functions on the half space R^n_+ that depend only
// on (|y'|, y_n). Weights carry |S^{n-2}| sigma^{n-2} and the polar Jacobian.
struct HalfSpaceNode {
    double sigma;
    double h;
    double weight;
};

struct HalfSpaceGridSpec {
    double log_r_min = -18.0;
    double log_r_max = 18.0;
    int radial_panels = 72;
    int angle_panels = 8;
    int order = 12;
};

struct HalfSpaceGrid {
    int n = 2;
    std::vector<HalfSpaceNode> nodes;
};

HalfSpaceGrid half_space_grid(int n, const HalfSpaceGridSpec& gs = {});

}  // namespace rhls
