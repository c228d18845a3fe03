#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rhls/exponents.hpp"
#include "rhls/profiles.hpp"
#include "rhls/quadrature.hpp"

namespace rhls {

enum class InitKind { ExtremalSeed, Flat, Random };

InitKind parse_init(const std::string& name);

struct MinimizeOptions {
    int grid_size = 128;
    double r_min = 1e-3;
    double r_max = 1e3;
    InitKind init = InitKind::Random;
    std::uint64_t seed = 7;
    int max_iters = 3000;
    double tol = 1e-6;
    double armijo = 1e-4;
    double initial_step = 1.0;
    HalfSpaceGridSpec outer{-10.0, 12.0, 40, 8, 8};
    int element_order = 8;
    int tail_panels = 40;
    bool parallel = true;

    void validate() const;
};

// Discretized problem: f piecewise linear in r on the grid {0} u geomspace(r_min, r_max),
// continued past r_max by f(r_max) (r/r_max)^{-tail_exponent}.
class VarminProblem {
public:
    VarminProblem(const ExponentSet& e, const MinimizeOptions& opt);

    const std::vector<double>& radii() const { return radii_; }
    const ExponentSet& exponents() const { return e_; }
    double tail_exponent() const { return tail_; }
    std::size_t outer_nodes() const { return outer_weights_.size(); }

    double p_mass(const std::vector<double>& f) const;  // int f^p
    double objective(const std::vector<double>& f) const;  // ||E f||_q / ||f||_p
    // Returns the objective and writes d(objective)/d f_j.
    double objective_gradient(const std::vector<double>& f, std::vector<double>& grad) const;
    // Node weights of the projection metric, f_j^p times the hat mass.
    std::vector<double> metric_weights(const std::vector<double>& f) const;
    std::vector<double> initial_profile(InitKind kind, std::uint64_t seed) const;

private:
    ExponentSet e_;
    MinimizeOptions opt_;
    std::vector<double> radii_;
    double tail_;
    double tail_mass_;  // int over r > r_max of ((r/r_max)^{-tail})^p
    // Radial quadrature points: element index (or -1 for the tail), hat coordinate, weight for the p-mass.
    struct RadialPoint {
        int element;
        double s;
        double mass_weight;
    };
    std::vector<RadialPoint> points_;
    std::vector<double> hat_mass_;
    std::vector<double> outer_weights_;
    std::vector<double> W_;   // outer_nodes x grid_size
    std::vector<double> Wt_;  // grid_size x outer_nodes

    double value_at(const std::vector<double>& f, const RadialPoint& pt) const;
    std::vector<double> extension(const std::vector<double>& f) const;
};

struct MinimizeResult {
    RadialProfile profile;
    std::vector<double> values;
    double constant = 0;
    std::vector<double> trace;  // objective after each accepted step, starting with the initial value
    double stationarity = 0;
    bool converged = false;
    int iterations = 0;
    double tail_exponent = 0;
    double p_mass = 0;
};

MinimizeResult minimize_profile(const ExponentSet& e, const MinimizeOptions& opt = {});

// Weighted isotone projection onto nonincreasing sequences (pool adjacent violators).
std::vector<double> project_nonincreasing(const std::vector<double>& v, const std::vector<double>& w);

// (1 + r^2)^{1-n-lambda/2} with unit p-mass for the diagonal exponent, sampled on
// `radii` (default: the minimizer grid).
RadialProfile extremal_reference(int n, double lambda, std::vector<double> radii = {});

struct ShapeFit {
    double scale_c;
    double scale_s;
    double max_rel_dev;
};

// Best c (1 + (r/s)^2)^{expo} in the max relative deviation, over nodes with f >= floor * max f.
ShapeFit fit_extremal_shape(const std::vector<double>& radii, const std::vector<double>& values, double expo,
                            double floor = 1e-3);

std::vector<double> minimizer_grid(int size, double r_min, double r_max);

}  // namespace rhls
