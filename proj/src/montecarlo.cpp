#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "pbqct/errors.hpp"
#include "pbqct/protocol.hpp"

namespace pbqct {

namespace {

constexpr std::size_t kChunkSamples = 4096;

struct ChunkSum {
    double sum = 0.0;
    double sum_sq = 0.0;
    std::size_t count = 0;
};

ChunkSum run_chunk(const TeleportationChannel& channel, std::size_t count, std::uint64_t seed,
                   std::uint64_t stream) {
    HaarSampler sampler(channel.outcome_set().d(), seed, stream);
    ChunkSum out;
    for (std::size_t k = 0; k < count; ++k) {
        const StateVector psi = sampler.next();
        const Vector& v = psi.amplitudes();
        const Matrix rho = v * v.adjoint();
        const double overlap = (v.adjoint() * channel.apply_matrix(rho) * v)(0, 0).real();
        out.sum += overlap;
        out.sum_sq += overlap * overlap;
    }
    out.count = count;
    return out;
}

}  // namespace

MonteCarloEstimate tel_fidelity_monte_carlo(const TeleportationChannel& channel, std::size_t samples,
                                            std::uint64_t seed, unsigned jobs) {
    if (samples < 1) throw UsageError("Monte Carlo needs at least one sample");
    const std::size_t chunks = (samples + kChunkSamples - 1) / kChunkSamples;
    std::vector<ChunkSum> results(chunks);
    auto chunk_size = [&](std::size_t c) {
        return std::min(kChunkSamples, samples - c * kChunkSamples);
    };

    const unsigned workers = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(chunks)));
    if (workers == 1) {
        for (std::size_t c = 0; c < chunks; ++c) results[c] = run_chunk(channel, chunk_size(c), seed, c);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t c = next++; c < chunks; c = next++)
                    results[c] = run_chunk(channel, chunk_size(c), seed, c);
            });
        for (auto& t : pool) t.join();
    }

    // Merge in chunk order so the estimate is independent of scheduling.
    double sum = 0.0;
    double sum_sq = 0.0;
    for (const auto& r : results) {
        sum += r.sum;
        sum_sq += r.sum_sq;
    }
    const double n = static_cast<double>(samples);
    const double mean = sum / n;
    double std_error = 0.0;
    if (samples > 1) {
        const double var = std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0));
        std_error = std::sqrt(var / n);
    }
    return {mean, std_error, samples};
}

MonteCarloEstimate tel_fidelity_monte_carlo(const OutcomeSet& set, std::size_t samples,
                                            std::uint64_t seed, unsigned jobs) {
    return tel_fidelity_monte_carlo(TeleportationChannel(set), samples, seed, jobs);
}

}  // namespace pbqct
