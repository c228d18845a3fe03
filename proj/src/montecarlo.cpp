#include "rhls/montecarlo.hpp"

#include <cmath>
#include <exception>
#include <numbers>

#include "rhls/errors.hpp"
#include "rhls/special.hpp"

namespace rhls {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

Rng block_rng(std::uint64_t seed, std::uint64_t block) {
    return Rng(splitmix64(seed ^ splitmix64(block + 0x632be59bd9b4e019ULL)));
}

double standard_normal(Rng& g) {
    // Box-Muller; the second variate is discarded to keep the stream stateless.
    double u = uniform01(g);
    while (u == 0) u = uniform01(g);
    const double v = uniform01(g);
    return std::sqrt(-2 * std::log(u)) * std::cos(2 * std::numbers::pi * v);
}

Vec random_direction(Rng& g, int dim) {
    Vec d(dim);
    double s = 0;
    do {
        s = 0;
        for (double& c : d) {
            c = standard_normal(g);
            s += c * c;
        }
    } while (s == 0);
    const double inv = 1 / std::sqrt(s);
    for (double& c : d) c *= inv;
    return d;
}

namespace {

struct BlockStats {
    long count = 0;
    std::vector<double> mean, m2;
};

BlockStats run_block(const MultiSampler& s, int k, long begin, long end, std::uint64_t seed, long block) {
    BlockStats b;
    b.mean.assign(k, 0.0);
    b.m2.assign(k, 0.0);
    Rng g = block_rng(seed, static_cast<std::uint64_t>(block));
    std::vector<double> x(k);
    for (long i = begin; i < end; ++i) {
        s(g, x);
        ++b.count;
        for (int j = 0; j < k; ++j) {
            const double d = x[j] - b.mean[j];
            b.mean[j] += d / b.count;
            b.m2[j] += d * (x[j] - b.mean[j]);
        }
    }
    return b;
}

McMoments merge(const std::vector<BlockStats>& blocks, int k) {
    double count = 0;
    std::vector<double> mean(k, 0.0), m2(k, 0.0);
    for (const BlockStats& b : blocks) {
        if (b.count == 0) continue;
        const double nb = static_cast<double>(b.count), tot = count + nb;
        for (int j = 0; j < k; ++j) {
            const double d = b.mean[j] - mean[j];
            mean[j] += d * nb / tot;
            m2[j] += b.m2[j] + d * d * count * nb / tot;
        }
        count = tot;
    }
    McMoments m;
    m.mean = mean;
    m.samples = static_cast<long>(count);
    m.std_error.resize(k);
    for (int j = 0; j < k; ++j)
        m.std_error[j] = count > 1 ? std::sqrt(m2[j] / (count - 1) / count) : INFINITY;
    return m;
}

void check(int k, long samples) {
    if (k < 1) throw InvalidArgument("monte carlo needs at least one output");
    if (samples <= 0) throw InvalidArgument("monte carlo needs samples > 0");
}

}  // namespace

McMoments mc_moments_serial(const MultiSampler& s, int k, long samples, std::uint64_t seed) {
    check(k, samples);
    const long nblocks = (samples + kMcBlock - 1) / kMcBlock;
    std::vector<BlockStats> blocks(nblocks);
    for (long b = 0; b < nblocks; ++b)
        blocks[b] = run_block(s, k, b * kMcBlock, std::min(samples, (b + 1) * kMcBlock), seed, b);
    return merge(blocks, k);
}

McMoments mc_moments_parallel(const MultiSampler& s, int k, long samples, std::uint64_t seed) {
    check(k, samples);
    const long nblocks = (samples + kMcBlock - 1) / kMcBlock;
    std::vector<BlockStats> blocks(nblocks);
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1)
    for (long b = 0; b < nblocks; ++b) {
        try {
            blocks[b] = run_block(s, k, b * kMcBlock, std::min(samples, (b + 1) * kMcBlock), seed, b);
        } catch (...) {
#pragma omp critical
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return merge(blocks, k);
}

McMoments mc_moments(const MultiSampler& s, int k, long samples, std::uint64_t seed) {
    return mc_moments_parallel(s, k, samples, seed);
}

double sample_proposal(const SampledDensity& d, int dim, bool half, Rng& g, std::span<double> out) {
    const Vec dir = random_direction(g, dim);
    double r, density;
    if (std::isfinite(d.support_radius)) {
        const double R = d.support_radius;
        r = R * std::pow(uniform01(g), 1.0 / dim);
        density = 1 / (ball_volume(dim) * std::pow(R, dim));
    } else if (d.envelope_scale > 0) {
        const double s = d.envelope_scale, k = d.envelope_tail;
        double u = uniform01(g);
        while (u == 0) u = uniform01(g);
        r = s * (std::pow(u, -1 / k) - 1);
        if (r == 0) r = s * 1e-300;
        density = k / s * std::pow(1 + r / s, -k - 1) / (sphere_area(dim - 1) * std::pow(r, dim - 1));
    } else {
        throw EnvelopeMissing("unbounded support needs an importance envelope");
    }
    for (int i = 0; i < dim; ++i) out[i] = r * dir[i];
    if (half) {
        out[dim - 1] = std::abs(out[dim - 1]);
        density *= 2;
    }
    return density;
}

IntegralResult monte_carlo_pair_integral(const SampledDensity& f, const SampledDensity& g,
                                         const PairKernel& kernel, int n, std::uint64_t seed,
                                         long samples) {
    if (n < 2) throw InvalidArgument("pair integral needs n >= 2");
    if (samples <= 0) throw InvalidArgument("pair integral needs samples > 0");
    for (const SampledDensity* d : {&f, &g})
        if (!std::isfinite(d->support_radius) && !(d->envelope_scale > 0))
            throw EnvelopeMissing("unbounded support needs an importance envelope");
    const McMoments m = mc_moments(
        [&](Rng& rng, std::span<double> out) {
            Vec x(n - 1), y(n);
            const double px = sample_proposal(f, n - 1, false, rng, x);
            const double py = sample_proposal(g, n, true, rng, y);
            const double fx = f.value(x);
            const double gy = fx == 0 ? 0.0 : g.value(y);
            out[0] = (fx == 0 || gy == 0) ? 0.0 : fx * kernel(x, y) * gy / (px * py);
        },
        1, samples, seed);
    return {m.mean[0], m.std_error[0], m.samples};
}

}  // namespace rhls
