#include "rhls/kernels.hpp"

#include <exception>

namespace rhls {

std::vector<double> evaluate_grid_serial(const HalfSpaceGrid& grid, const NodeFunction& F) {
    std::vector<double> out(grid.nodes.size());
    for (std::size_t i = 0; i < grid.nodes.size(); ++i) out[i] = F(grid.nodes[i].sigma, grid.nodes[i].h);
    return out;
}

std::vector<double> evaluate_grid_parallel(const HalfSpaceGrid& grid, const NodeFunction& F) {
    const long m = static_cast<long>(grid.nodes.size());
    std::vector<double> out(m);
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 64)
    for (long i = 0; i < m; ++i) {
        try {
            out[i] = F(grid.nodes[i].sigma, grid.nodes[i].h);
        } catch (...) {
#pragma omp critical
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return out;
}

double grid_sum(const HalfSpaceGrid& grid, const std::vector<double>& values) {
    double s = 0;
    for (std::size_t i = 0; i < values.size(); ++i) s += grid.nodes[i].weight * values[i];
    return s;
}

}  // namespace rhls
