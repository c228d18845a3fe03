#pragma once

#include <utility>

namespace rhls {

inline constexpr double kRelationTol = 1e-12;

struct ExponentSet {
    int n = 2;
    double lambda = 0;
    double alpha = 0;   // lambda + n
    double p = 0;
    double r = 0;
    double q = 0;
    double kappa = 0;   // 1/(1-r)
    double theta = 0;   // 1/(1-p)
    double beta = 0;    // n p / ((n-1) r)
    double gamma = 0;   // 1 + lambda/(n-1)

    // Exponent of the dual (restriction side) norm, 1 - 1/p = 1/q'.
    double q_dual() const { return p / (p - 1.0); }

    // Largest absolute violation of the defining relations.
    double invariant_violation() const;
    void check_invariants() const;  // throws OutOfRange
};

ExponentSet from_lambda_p(int n, double lambda, double p);

// (p, r) on the family with explicit extremals.
std::pair<double, double> diagonal_family(int n, double lambda);

ExponentSet diagonal_exponents(int n, double lambda);

// kappa, theta forced by the classification of solutions.
std::pair<double, double> classification_exponents(int n, double lambda);

struct NecessaryCondition {
    double residual;      // lhs - rhs
    double sign_kappa;    // 2n - kappa lambda + lambda
    double sign_theta;    // 2n - 2 - theta lambda + lambda
};

NecessaryCondition necessary_condition_residual(int n, double lambda, double kappa, double theta);

}  // namespace rhls
