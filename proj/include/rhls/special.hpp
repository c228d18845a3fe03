#pragma once

#include <cmath>
#include <numbers>

namespace rhls {

// Surface measure of the unit sphere S^k in R^{k+1}; |S^0| = 2.
inline double sphere_area(int k) {
    const double h = 0.5 * (k + 1);
    return 2.0 * std::exp(h * std::log(std::numbers::pi) - std::lgamma(h));
}

// Volume of the unit ball in R^k.
inline double ball_volume(int k) {
    const double h = 0.5 * k;
    return std::exp(h * std::log(std::numbers::pi) - std::lgamma(h + 1));
}

}  // namespace rhls
