#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <span>
#include <vector>

#include "rhls/geometry.hpp"
#include "rhls/quadrature.hpp"

namespace rhls {

using Rng = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x);
Rng block_rng(std::uint64_t seed, std::uint64_t block);

inline double uniform01(Rng& g) { return static_cast<double>(g() >> 11) * 0x1.0p-53; }
double standard_normal(Rng& g);
Vec random_direction(Rng& g, int dim);

inline constexpr long kMcBlock = 4096;

// Each call fills `out` (size k) with one sample of k correlated quantities.
using MultiSampler = std::function<void(Rng&, std::span<double> out)>;

struct McMoments {
    std::vector<double> mean;
    std::vector<double> std_error;
    long samples = 0;
};

// Serial reference and OpenMP kernel. Blocks of kMcBlock samples use their own
// generator and are merged in block order, so both return identical bits.
McMoments mc_moments_serial(const MultiSampler& s, int k, long samples, std::uint64_t seed);
McMoments mc_moments_parallel(const MultiSampler& s, int k, long samples, std::uint64_t seed);
McMoments mc_moments(const MultiSampler& s, int k, long samples, std::uint64_t seed);

// Densities for the pair integral. Either a finite support radius (boundary
// ball, or half ball in R^n_+) or a positive envelope scale must be given.
struct SampledDensity {
    std::function<double(std::span<const double>)> value;
    double support_radius = std::numeric_limits<double>::infinity();
    double envelope_scale = 0;  // Pareto radial proposal r = s(U^{-1/k} - 1)
    double envelope_tail = 1;   // k
};

using PairKernel = std::function<double(std::span<const double> x, std::span<const double> y)>;

// Importance-sampled estimate of the double integral of f(x) K(x,y) g(y) over
// the boundary R^{n-1} times the half space R^n_+.
IntegralResult monte_carlo_pair_integral(const SampledDensity& f, const SampledDensity& g,
                                         const PairKernel& kernel, int n, std::uint64_t seed,
                                         long samples);

// Draws a point of R^d (or of R^d_+ when half) from the proposal of `d` and
// returns its density.
double sample_proposal(const SampledDensity& d, int dim, bool half, Rng& g, std::span<double> out);

}  // namespace rhls
