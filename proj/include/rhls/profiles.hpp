#pragma once

#include <functional>
#include <limits>
#include <vector>

namespace rhls {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Radial function on R^dim sampled on a radius grid. Piecewise linear between
// nodes, constant on [0, radii[0]], zero beyond the last radius.
struct RadialProfile {
    std::vector<double> radii;
    std::vector<double> values;
    int dim = 1;
    bool monotone = false;

    RadialProfile() = default;
    // Validates and certifies monotonicity when the values are nonincreasing.
    RadialProfile(std::vector<double> radii, std::vector<double> values, int dim);

    double operator()(double r) const;
    double max_value() const;
    double support() const { return radii.back(); }
};

// Radial function given by a formula.
struct RadialFunction {
    std::function<double(double)> value;
    int dim = 1;
    double support = kInf;       // zero beyond
    std::vector<double> breaks;  // kinks or jumps, used to split quadrature

    double operator()(double r) const { return r > support ? 0.0 : value(r); }
};

RadialFunction as_function(const RadialProfile& p);

// Function on R^n_+ depending on (sigma = |y'|, h = y_n).
struct HalfSpaceFunction {
    std::function<double(double sigma, double h)> value;
    double h_max = kInf;
    std::function<double(double h)> sigma_max;  // empty: unbounded in sigma
    std::vector<double> h_breaks;
    std::vector<double> sigma_breaks;

    double operator()(double sigma, double h) const { return value(sigma, h); }
    double sigma_limit(double h) const { return sigma_max ? sigma_max(h) : kInf; }
    bool compact() const;
    double sigma_extent() const;  // sup of sigma_limit over heights
};

// Sampled on a (rho, h) grid with bilinear interpolation, zero outside.
struct HalfSpaceProfile {
    std::vector<double> rho_grid;
    std::vector<double> h_grid;
    std::vector<double> values;  // values[i * h_grid.size() + j] at (rho_i, h_j)

    HalfSpaceProfile() = default;
    HalfSpaceProfile(std::vector<double> rho, std::vector<double> h, std::vector<double> values);

    double operator()(double sigma, double h) const;
    double max_value() const;
};

HalfSpaceFunction as_function(const HalfSpaceProfile& g);

}  // namespace rhls
