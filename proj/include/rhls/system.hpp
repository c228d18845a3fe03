#pragma once

#include <memory>
#include <span>
#include <vector>

#include "rhls/geometry.hpp"
#include "rhls/profiles.hpp"
#include "rhls/quadrature.hpp"

namespace rhls {

struct SystemOptions {
    HalfSpaceGridSpec grid{-14.0, 16.0, 60, 8, 12};
    QuadratureSpec inner = QuadratureSpec{}.tol(1e-12, 1e-300);
    bool parallel = true;
};

// Interior field for unit amplitude: V1(y) = int |x-y|^lambda (b^2+|x|^2)^{-theta lambda/2} dx
// on the nodes of a half-space grid (coordinates relative to the center).
struct InteriorField {
    int n;
    double lambda, b, theta;
    HalfSpaceGrid grid;
    std::vector<double> v_unit;
};

InteriorField interior_field(int n, double lambda, double b, double theta, const SystemOptions& opt = {});

struct ClassifiedSolution {
    int n;
    double lambda;
    double a;
    double b;
    BoundaryPoint center;
    double kappa;
    double theta;
    std::shared_ptr<const InteriorField> field;  // optional cache, unit amplitude

    double u(std::span<const double> x) const;  // x in R^{n-1}
    double u_radial(double r) const;
    // Boundary values of v given by the classification.
    double v_boundary(std::span<const double> x) const { return u(x); }
    // v(y) from the second system equation; sigma = |y' - center|.
    double v(double sigma, double h, const QuadratureSpec& spec = SystemOptions{}.inner) const;
    // r -> u(r)^expo on R^{n-1}.
    RadialFunction u_power(double expo) const;
};

ClassifiedSolution classified_pair(int n, double lambda, double a, double b, const BoundaryPoint& center);

struct AmplitudeResult {
    double a;
    double closed_form;  // K^{-1/(theta kappa - 1)} from the same quadrature
    double scale_exponent;  // mu in a(b) = a(1) b^mu
    int iterations;
    std::shared_ptr<const InteriorField> field;
};

AmplitudeResult amplitude_fixed_point(int n, double lambda, double b, const SystemOptions& opt = {});
// Explicit exponents; off the classification manifold the bracket still succeeds
// but the resulting pair does not solve the system.
AmplitudeResult amplitude_fixed_point(int n, double lambda, double b, double kappa, double theta,
                                      const SystemOptions& opt = {});

struct SystemResidual {
    double res_u;        // first equation, sup relative error
    double res_v;        // second equation read on the boundary: v(x,0) against u(x)
    double trace_ratio;  // v(x,0)/u(x) at the first sample
    double trace_shape;  // spread of v(x,0)/u(x) over samples (proportionality)
};

SystemResidual system_residual(const ClassifiedSolution& sol, const std::vector<double>& radii,
                               const SystemOptions& opt = {});

struct GrowthReport {
    double int_v_minus_kappa;  // int v^{-kappa} over R^n_+
    double growth_u;           // (first equation at |x| = R) / R^lambda
    double int_u_minus_theta;  // int u^{-theta} over R^{n-1}
    double growth_v;           // v(y)/|y|^lambda at |y| = R
    double mass_u;             // int u^{1-theta}
    double mass_v;             // int v^{1-kappa}
    double sandwich_c;
    bool sandwich_ok;
};

GrowthReport growth_and_identity_checks(const ClassifiedSolution& sol, double far = 1e3,
                                        const SystemOptions& opt = {});

// Sup over a 50-point boundary grid of |u_{x,nu}(xi) - u(xi)| / u(xi); nu <= 0 selects
// the critical radius sqrt(b^2 + |x - center|^2).
double moving_sphere_invariance(const ClassifiedSolution& sol, const BoundaryPoint& x, double nu = 0);

double critical_radius(const ClassifiedSolution& sol, const BoundaryPoint& x);

}  // namespace rhls
