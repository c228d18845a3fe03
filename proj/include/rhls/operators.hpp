#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "rhls/exponents.hpp"
#include "rhls/montecarlo.hpp"
#include "rhls/profiles.hpp"
#include "rhls/quadrature.hpp"

namespace rhls {

// Tolerances for nested integrals, from the outermost level inwards.
struct NestedSpec {
    QuadratureSpec outer = QuadratureSpec{}.tol(1e-10, 1e-14);
    QuadratureSpec middle = QuadratureSpec{}.tol(1e-11, 1e-15);
    QuadratureSpec inner = QuadratureSpec{}.tol(1e-12, 1e-16);
};

// Integral over S^{n-2} of (rho^2 + s^2 - 2 rho s cos + h^2)^{lambda/2}: the
// kernel |x-y|^lambda averaged over the directions of x' (|x'| = s, |y'| = rho).
double zonal_kernel(int n, double lambda, double rho, double s, double h, const QuadratureSpec& spec = {});

// E_lambda f at |y'| = rho, y_n = h, for radial f on R^{n-1} (n = f.dim + 1).
double extend(const RadialFunction& f, double lambda, double rho, double h, const QuadratureSpec& spec = NestedSpec{}.inner);
double extend(const RadialProfile& f, double lambda, double rho, double h, const QuadratureSpec& spec = NestedSpec{}.inner);

// R_lambda g at a boundary point of radius rho.
double restrict(const HalfSpaceFunction& g, int n, double lambda, double rho, const NestedSpec& spec = {});
double restrict(const HalfSpaceProfile& g, int n, double lambda, double rho, const NestedSpec& spec = {});

// Integral over R^n_+ of F(sigma, h), with the support taken from `support`.
IntegralResult integrate_half_space(const std::function<double(double, double)>& F, int n,
                                    const HalfSpaceFunction& support, const QuadratureSpec& outer,
                                    const QuadratureSpec& inner);

// Unbounded support in both variables.
HalfSpaceFunction whole_half_space(std::function<double(double, double)> value);

struct Duality {
    double extension_side;    // int (E f) g
    double restriction_side;  // int f (R g)
    double gap;               // relative difference
};

Duality duality_gap(const RadialFunction& f, const HalfSpaceFunction& g, double lambda, const NestedSpec& spec = {});

struct Quotient {
    double I;
    double quotient;
    double norm_f;
    double norm_g;
};

Quotient functional_quotient(const RadialFunction& f, const HalfSpaceFunction& g, const ExponentSet& e,
                             const NestedSpec& spec = {});

// (int field^q)^{1/q} over R^n_+ (restricted to the field's support), q < 0.
double qnorm(const HalfSpaceFunction& field, double q, int n, const NestedSpec& spec = {});

// ||E f||_q / ||f||_p, the value of the dual formulation at f.
double extension_quotient(const RadialFunction& f, const ExponentSet& e, const NestedSpec& spec = {});

// g = (E f)^{q-1}, the dual partner of f.
HalfSpaceFunction induced_partner(const RadialFunction& f, const ExponentSet& e, const QuadratureSpec& spec = NestedSpec{}.inner);

// Non-radial piecewise-constant functions on boxes (boundary: dim n-1;
// half space: dim n, last coordinate >= 0). Cells must be disjoint.
struct StepCell {
    Vec lo, hi;
    double value;
};

struct StepFunction {
    int dim = 1;
    std::vector<StepCell> cells;

    double operator()(std::span<const double> x) const;
    double power_mass(double p) const;  // int f^p
    // Draws x with density f / int f.
    void sample(Rng& g, std::span<double> out) const;
};

// E_lambda f at y for a step function on the line (n = 2).
double step_extend(const StepFunction& f, double lambda, double y1, double h, const QuadratureSpec& spec = NestedSpec{}.inner);

struct McQuotient {
    double I;
    double I_std_error;
    double quotient;
    double quotient_std_error;
};

// Pairing by sampling x ~ f, y ~ g; the norms are exact.
McQuotient step_pair_quotient(const StepFunction& f, const StepFunction& g, const ExponentSet& e, std::uint64_t seed,
                              long samples);

// Random step function of `cells` disjoint boxes in R^dim (R^dim_+ when half),
// laid out along the first axis inside [-extent, extent].
StepFunction random_step_function(int dim, bool half, int cells, double extent, Rng& g);

// Quotients of random step pairs; trial i uses seed ^ i.
struct PairTrials {
    std::vector<double> quotients;
    std::vector<double> std_errors;
    std::size_t argmin = 0;
    double min_quotient() const { return quotients[argmin]; }
    double min_std_error() const { return std_errors[argmin]; }
};

PairTrials random_pair_quotients(const ExponentSet& e, int trials, std::uint64_t seed, long samples);

// Symmetric decreasing rearrangement of a step function on the line: the
// values sorted downwards on nested symmetric intervals of the same measure.
StepFunction symmetric_rearrangement(const StepFunction& f);

// int (E f)^q and int (E f*)^q over R^2_+ for a step function on the line,
// sampled at the same points so the difference has a paired error bar.
struct RearrangementComparison {
    double original;
    double rearranged;
    double difference;  // rearranged - original
    double std_error;   // of the difference
};

RearrangementComparison rearrangement_comparison(const StepFunction& f, const ExponentSet& e, std::uint64_t seed,
                                                 long samples);

// Log-coordinate form of E_lambda on radial functions.
struct ReducedKernel {
    int n;
    double lambda;
    double q;
    double Z(double s, double h, const QuadratureSpec& spec = {}) const;
    double L(double s, double h, const QuadratureSpec& spec = {}) const;
};

ReducedKernel reduced_kernel(const ExponentSet& e);

// H(t, h) = int L(t - s, h) F(s) ds with F supported in [s_lo, s_hi].
double reduced_extension(const Integrand& F, double s_lo, double s_hi, const ReducedKernel& k, double t, double h,
                         const QuadratureSpec& spec = NestedSpec{}.middle);

}  // namespace rhls
