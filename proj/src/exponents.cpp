#include "rhls/exponents.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rhls/errors.hpp"

namespace rhls {

double ExponentSet::invariant_violation() const {
    const double dn = n;
    double worst = 0;
    auto track = [&](double v) { worst = std::max(worst, std::abs(v)); };
    track((dn - 1) / dn / p + 1 / r - lambda / dn - (2 - 1 / dn));
    const double inv_q = 1 / q;
    track(inv_q - ((dn - 1) / dn * (1 / p - 1) - lambda / dn));
    track(inv_q - (1 - 1 / r));
    // Restriction side: the relation read with (p, r) swapped gives 1 - 1/p.
    track(dn / (dn - 1) * (1 / r - 1) - lambda / (dn - 1) - (1 - 1 / p));
    track(alpha - (lambda + dn));
    track(kappa - 1 / (1 - r));
    track(theta - 1 / (1 - p));
    track(beta - dn * p / ((dn - 1) * r));
    track(gamma - (1 + lambda / (dn - 1)));
    return worst;
}

void ExponentSet::check_invariants() const {
    if (!(kappa > 1 && theta > 1 && q < 0))
        throw OutOfRange("exponent set violates kappa > 1, theta > 1, q < 0");
    if (invariant_violation() > kRelationTol)
        throw OutOfRange("exponent relations violated");
}

ExponentSet from_lambda_p(int n, double lambda, double p) {
    if (n < 2) throw OutOfRange("dimension n must be >= 2");
    if (!(lambda > 0) || !std::isfinite(lambda)) throw OutOfRange("lambda must be positive");
    if (!(p > 0 && p < 1)) throw OutOfRange("p must lie in (0,1)");
    const double dn = n;
    const double inv_r = 2 - 1 / dn + lambda / dn - (dn - 1) / dn / p;
    const double r = 1 / inv_r;
    if (!(inv_r > 1) || !(r > 0 && r < 1))
        throw OutOfRange("solved r = " + std::to_string(r) + " lies outside (0,1)");
    ExponentSet e;
    e.n = n;
    e.lambda = lambda;
    e.alpha = lambda + dn;
    e.p = p;
    e.r = r;
    e.q = 1 / ((dn - 1) / dn * (1 / p - 1) - lambda / dn);
    e.kappa = 1 / (1 - r);
    e.theta = 1 / (1 - p);
    e.beta = dn * p / ((dn - 1) * r);
    e.gamma = 1 + lambda / (dn - 1);
    e.check_invariants();
    return e;
}

std::pair<double, double> diagonal_family(int n, double lambda) {
    const double m = 2.0 * (n - 1);
    return {m / (m + lambda), 2.0 * n / (2.0 * n + lambda)};
}

ExponentSet diagonal_exponents(int n, double lambda) {
    return from_lambda_p(n, lambda, diagonal_family(n, lambda).first);
}

std::pair<double, double> classification_exponents(int n, double lambda) {
    if (!(lambda > 0)) throw OutOfRange("lambda must be positive");
    return {1 + 2.0 * n / lambda, 1 + (2.0 * n - 2) / lambda};
}

NecessaryCondition necessary_condition_residual(int n, double lambda, double kappa, double theta) {
    if (!(kappa > 1) || !(theta > 1)) throw DegenerateExponent("need kappa > 1 and theta > 1");
    const double dn = n;
    NecessaryCondition nc;
    nc.residual = (dn - 1) / dn / (theta - 1) + 1 / (kappa - 1) - lambda / dn;
    nc.sign_kappa = 2 * dn - kappa * lambda + lambda;
    nc.sign_theta = 2 * dn - 2 - theta * lambda + lambda;
    return nc;
}

}  // namespace rhls
