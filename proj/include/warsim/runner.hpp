// Parallel replication driver. Work-stealing over replication indices via an
// atomic counter; every replication draws from its own derived stream, and
// all aggregation is exact-integer, so results are independent of thread
// count and scheduling.
#pragma once

#include <atomic>
#include <cstdint>
#include <thread>
#include <vector>

#include "warsim/random.hpp"
#include "warsim/stats.hpp"

namespace warsim {

struct RepOutcome {
    long long rounds = 0;
    bool censored = false;
    double aux = 0.0;  // engine-specific diagnostic (e.g. f-war Q-sum)
};

struct RunResult {
    SimSummary summary;
    double aux_mean = 0.0;  // mean of aux over completed replications
    long long aux_count = 0;
};

// play(replication_index, rng) -> RepOutcome
template <typename PlayFn>
RunResult run_replications(long long replications, std::uint64_t seed, int threads,
                           long long bin_width, PlayFn&& play) {
    const int worker_count = std::max(1, threads);
    std::vector<Accumulator> accumulators(
        static_cast<std::size_t>(worker_count),
        Accumulator(bin_width, replications));
    // Aux values are written per replication and reduced sequentially at the
    // end; summing doubles in thread order would not be reproducible.
    std::vector<double> aux(static_cast<std::size_t>(replications), 0.0);
    std::vector<unsigned char> aux_valid(static_cast<std::size_t>(replications), 0);

    std::atomic<long long> next_rep{0};
    auto worker = [&](int worker_index) {
        Accumulator& acc = accumulators[static_cast<std::size_t>(worker_index)];
        while (true) {
            const long long rep = next_rep.fetch_add(1, std::memory_order_relaxed);
            if (rep >= replications) break;
            RandomSource rng = derive_stream(seed, static_cast<std::uint64_t>(rep));
            const RepOutcome outcome = play(rep, rng);
            if (outcome.censored) {
                acc.record_censored();
            } else {
                acc.record(outcome.rounds, rep);
                aux[static_cast<std::size_t>(rep)] = outcome.aux;
                aux_valid[static_cast<std::size_t>(rep)] = 1;
            }
        }
    };

    if (worker_count == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(worker_count));
        for (int w = 0; w < worker_count; ++w) pool.emplace_back(worker, w);
        for (auto& t : pool) t.join();
    }

    Accumulator merged = std::move(accumulators[0]);
    for (std::size_t w = 1; w < accumulators.size(); ++w) merged.merge(accumulators[w]);

    RunResult result;
    result.summary = merged.summarize();
    double aux_sum = 0.0;
    for (std::size_t rep = 0; rep < aux.size(); ++rep) {
        if (aux_valid[rep]) {
            aux_sum += aux[rep];
            ++result.aux_count;
        }
    }
    if (result.aux_count > 0) result.aux_mean = aux_sum / static_cast<double>(result.aux_count);
    return result;
}

}  // namespace warsim
