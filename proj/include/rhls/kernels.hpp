#pragma once

#include <functional>
#include <vector>

#include "rhls/quadrature.hpp"

namespace rhls {

using NodeFunction = std::function<double(double sigma, double h)>;

// Values of F at every grid node. The OpenMP version writes each node's slot
// independently, so both return identical vectors.
std::vector<double> evaluate_grid_serial(const HalfSpaceGrid& grid, const NodeFunction& F);
std::vector<double> evaluate_grid_parallel(const HalfSpaceGrid& grid, const NodeFunction& F);

// Ordered weighted sum of node values.
double grid_sum(const HalfSpaceGrid& grid, const std::vector<double>& values);

}  // namespace rhls
