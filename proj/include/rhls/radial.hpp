#pragma once

#include <cstdint>
#include <vector>

#include "rhls/profiles.hpp"
#include "rhls/quadrature.hpp"

namespace rhls {

struct LevelMeasure {
    double level;
    double measure;
};

// Lebesgue measure of {f > level} (strict) or {f >= level} in R^dim.
double superlevel_measure(const RadialProfile& f, double level, bool strict = true);

// Requires a monotone-certified profile.
LevelMeasure distribution(const RadialProfile& f, double level);

RadialProfile rearrange(const RadialProfile& f);

// Scattered cells with values and measures (any dimension's cells, mapped to
// balls in R^dim).
RadialProfile rearrange_samples(const std::vector<double>& values, const std::vector<double>& cell_measures,
                                int dim);

struct LpMass {
    double direct;
    double layer_cake;
};

LpMass lp_mass(const RadialProfile& f, double p, const QuadratureSpec& spec = {});
double lp_mass(const RadialFunction& f, double p, const QuadratureSpec& spec = {});

struct LayerCakeCheck {
    double I_abc;
    double bound;
    bool ok;
    double std_error;  // of I_abc - bound
    double u;
    double v;
};

// Monte Carlo estimate of the double integral of chi_{f>a}(x) chi_{|x-y|>c} chi_{g>b}(y)
// against the lower bound u(a) v(b) / 2. g must have compact support.
LayerCakeCheck layercake_bound_check(const RadialProfile& f, const HalfSpaceFunction& g, double a, double b,
                                     double c, std::uint64_t seed, long samples = 1 << 18);

// Measure of {g > b} in R^n_+, n = dim + 1 (Monte Carlo, compact g).
struct McValue {
    double value;
    double std_error;
};
McValue half_space_level_measure(const HalfSpaceFunction& g, int n, double b, std::uint64_t seed, long samples);

// Largest c for which the layer-cake claim is asserted.
double layercake_c_max(int n, double u, double v);

// int phi psi - (int phi^p)^{1/p} (int psi^{p'})^{1/p'} on [a, b], p' = p/(p-1).
double reversed_holder_gap(const Integrand& phi, const Integrand& psi, double p, double a, double b,
                           const QuadratureSpec& spec = {});

}  // namespace rhls
