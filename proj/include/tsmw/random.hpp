#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <random>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace tsmw {

using Rng = std::mt19937_64;

// splitmix64 finalizer; maps (master seed, stream index) to an independent sub-seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

// Uniform on the open interval (0, 1) built from the top 53 bits, so draws do not
// depend on the standard library's distribution implementation.
inline double uniform_open01(Rng& rng) {
    return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

// A continuous distribution that can be sampled reproducibly.
class Distribution {
public:
    enum class Kind { Uniform, Normal, Exponential };

    static Distribution uniform(double lo, double hi);
    static Distribution normal(double mean, double sd);
    static Distribution exponential(double rate);

    // "uniform(a,b)", "normal(mu,sigma)", "exponential(rate)"; an optional "+c" suffix shifts.
    static Distribution parse(std::string_view spec);

    Distribution shifted(double offset) const;

    double draw(Rng& rng) const;
    std::string describe() const;

    Kind kind() const { return kind_; }

private:
    Distribution(Kind kind, double a, double b, double shift) : kind_(kind), a_(a), b_(b), shift_(shift) {}

    Kind kind_;
    double a_;
    double b_;
    double shift_;
};

// Default worker count: hardware parallelism, at least one.
unsigned default_threads();

// Replicates are cut into fixed-size chunks; chunk k always uses derive_seed(seed, k),
// so per-chunk results do not depend on how chunks are scheduled onto threads.
inline constexpr std::uint64_t kChunkSize = 1u << 15;

inline std::size_t chunk_count(std::uint64_t replications) {
    return static_cast<std::size_t>((replications + kChunkSize - 1) / kChunkSize);
}

inline std::uint64_t chunk_length(std::uint64_t replications, std::size_t chunk) {
    const std::uint64_t begin = static_cast<std::uint64_t>(chunk) * kChunkSize;
    return std::min<std::uint64_t>(kChunkSize, replications - begin);
}

// Runs body(chunk) for every chunk index across `threads` workers. The first exception
// thrown by any worker is rethrown on the calling thread.
template <class Body>
void for_each_chunk(std::size_t chunks, unsigned threads, Body body) {
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(chunks, 1))));
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t k = next++; k < chunks; k = next++) {
            try {
                body(k);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next = chunks;
            }
        }
    };
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (failure) std::rethrow_exception(failure);
}

}  // namespace tsmw
