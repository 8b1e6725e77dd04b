#pragma once

// Exact Monte Carlo sampling of (X_t, V_t) from the alternating renewal
// construction. This is the independent check on every analytic formula:
// nothing here touches the series expansions.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <thread>
#include <vector>

#include "gammatel/rng.hpp"
#include "gammatel/types.hpp"

namespace gammatel {

/// One draw from the gamma law with the given shape and rate (density
/// rate^shape x^{shape-1} e^{-rate x} / Gamma(shape)).
/// Marsaglia-Tsang squeeze rejection for shape >= 1; for shape < 1 the
/// standard boost X = Y U^{1/shape} with Y ~ gamma(shape + 1).
template <class Rng>
double sample_gamma(double shape, double rate, Rng& rng) {
    if (!(shape > 0.0) || !(rate > 0.0))
        throw std::domain_error("sample_gamma: shape and rate must be positive");
    double boost = 1.0;
    if (shape < 1.0) {
        boost = std::pow(rng.uniform(), 1.0 / shape);
        shape += 1.0;
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double z, w;
        do {
            z = rng.normal();
            w = 1.0 + c * z;
        } while (w <= 0.0);
        w = w * w * w;
        const double u = rng.uniform();
        const double z2 = z * z;
        if (u < 1.0 - 0.0331 * z2 * z2 ||
            std::log(u) < 0.5 * z2 + d * (1.0 - w + std::log(w)))
            return boost * d * w / rate;
    }
}

/// One realized endpoint of the motion.
struct PathSample {
    double position;     // X_t
    double velocity;     // V_t: +c or -v
    long renewal_count;  // N_t, number of reversals in (0, t]
    bool hit_boundary;   // no reversal happened: position == V0 t exactly
};

/// Draw one path: alternate gamma sojourns starting from the v0 direction,
/// accumulate velocity x sojourn, truncate the final sojourn at t.
template <class Rng>
PathSample sample_path(const MotionParams& p, double t, InitialVelocity v0, Rng& rng) {
    p.validate();
    if (!(t > 0.0))
        throw std::domain_error("sample_path: t must be positive");
    bool forward = v0 == InitialVelocity::Forward;
    double elapsed = 0.0;
    double position = 0.0;
    long renewals = 0;
    for (;;) {
        const double sojourn = forward ? sample_gamma(p.alpha, p.lambda, rng)
                                       : sample_gamma(p.beta, p.mu, rng);
        const double speed = forward ? p.c : -p.v;
        if (elapsed + sojourn >= t) {
            position += speed * (t - elapsed);
            return {position, speed, renewals, renewals == 0};
        }
        position += speed * sojourn;
        elapsed += sojourn;
        forward = !forward;
        ++renewals;
    }
}

/// Ensemble statistics: the exact-boundary (no-reversal) frequency plus a
/// histogram of the interior endpoints, with enough raw integer counts and
/// moments to audit the proportions.
struct EmpiricalLaw {
    double atom_frequency = 0.0;
    std::vector<double> bin_edges;   // n_bins + 1 edges spanning [-v t, c t]
    std::vector<double> bin_masses;  // bin_counts / sample_count
    long sample_count = 0;

    long atom_count = 0;
    std::vector<long> bin_counts;
    long forward_count = 0;    // paths ending with velocity +c
    double position_mean = 0.0;
    double position_variance = 0.0;  // population variance of the endpoints
};

/// Run n_samples independent paths. Path i draws from substream (seed, i),
/// so the result is bit-identical for any thread count: integer counts merge
/// order-independently and floating-point moments are folded over fixed-size
/// blocks in index order.
inline EmpiricalLaw ensemble(const MotionParams& p, double t, InitialVelocity v0,
                             long n_samples, int n_bins, std::uint64_t seed,
                             unsigned n_threads = 0) {
    p.validate();
    if (n_samples < 1)
        throw std::domain_error("ensemble: n_samples must be >= 1");
    if (n_bins < 1)
        throw std::domain_error("ensemble: n_bins must be >= 1");
    if (!(t > 0.0))
        throw std::domain_error("ensemble: t must be positive");

    const double lo = -p.v * t;
    const double hi = p.c * t;
    const double width = (hi - lo) / n_bins;

    constexpr long kBlock = 8192;
    const long n_blocks = (n_samples + kBlock - 1) / kBlock;
    std::vector<double> block_sum(n_blocks, 0.0);
    std::vector<double> block_sumsq(n_blocks, 0.0);

    if (n_threads == 0) n_threads = std::thread::hardware_concurrency();
    if (n_threads == 0) n_threads = 1;
    if (static_cast<long>(n_threads) > n_blocks) n_threads = static_cast<unsigned>(n_blocks);

    std::atomic<long> next_block{0};
    std::vector<std::vector<long>> thread_bins(n_threads, std::vector<long>(n_bins, 0));
    std::vector<long> thread_atoms(n_threads, 0);
    std::vector<long> thread_forward(n_threads, 0);

    auto worker = [&](unsigned tid) {
        auto& bins = thread_bins[tid];
        long atoms = 0;
        long fwd = 0;
        for (;;) {
            const long blk = next_block.fetch_add(1);
            if (blk >= n_blocks) break;
            const long begin = blk * kBlock;
            const long end = std::min(begin + kBlock, n_samples);
            double sum = 0.0;
            double sumsq = 0.0;
            for (long i = begin; i < end; ++i) {
                PathRng rng(seed, static_cast<std::uint64_t>(i));
                const PathSample s = sample_path(p, t, v0, rng);
                sum += s.position;
                sumsq += s.position * s.position;
                if (s.velocity > 0.0) ++fwd;
                if (s.hit_boundary) {
                    ++atoms;
                } else {
                    int idx = static_cast<int>((s.position - lo) / width);
                    if (idx < 0) idx = 0;
                    if (idx >= n_bins) idx = n_bins - 1;
                    ++bins[idx];
                }
            }
            block_sum[blk] = sum;
            block_sumsq[blk] = sumsq;
        }
        thread_atoms[tid] = atoms;
        thread_forward[tid] = fwd;
    };

    if (n_threads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (unsigned tid = 0; tid < n_threads; ++tid) pool.emplace_back(worker, tid);
        for (auto& th : pool) th.join();
    }

    EmpiricalLaw law;
    law.sample_count = n_samples;
    law.bin_counts.assign(n_bins, 0);
    for (unsigned tid = 0; tid < n_threads; ++tid) {
        law.atom_count += thread_atoms[tid];
        law.forward_count += thread_forward[tid];
        for (int b = 0; b < n_bins; ++b) law.bin_counts[b] += thread_bins[tid][b];
    }
    double sum = 0.0;
    double sumsq = 0.0;
    for (long blk = 0; blk < n_blocks; ++blk) {
        sum += block_sum[blk];
        sumsq += block_sumsq[blk];
    }
    law.position_mean = sum / n_samples;
    law.position_variance = sumsq / n_samples - law.position_mean * law.position_mean;
    if (law.position_variance < 0.0) law.position_variance = 0.0;

    law.atom_frequency = static_cast<double>(law.atom_count) / n_samples;
    law.bin_edges.resize(n_bins + 1);
    for (int b = 0; b <= n_bins; ++b) law.bin_edges[b] = lo + b * width;
    law.bin_edges[n_bins] = hi;
    law.bin_masses.resize(n_bins);
    for (int b = 0; b < n_bins; ++b)
        law.bin_masses[b] = static_cast<double>(law.bin_counts[b]) / n_samples;
    return law;
}

}  // namespace gammatel
