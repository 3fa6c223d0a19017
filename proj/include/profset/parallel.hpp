#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace profset {

/// Effective worker count: 0 means "hardware concurrency".
inline unsigned resolve_threads(int threads) {
    if (threads > 0) return static_cast<unsigned>(threads);
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

/// Fixed partition of [0, count) into contiguous chunks.
struct ChunkPlan {
    std::size_t count = 0;
    std::size_t chunk_size = 0;
    std::size_t chunks = 0;

    std::size_t begin(std::size_t c) const { return c * chunk_size; }
    std::size_t end(std::size_t c) const { return std::min(count, (c + 1) * chunk_size); }
};

inline ChunkPlan plan_chunks(std::size_t count, int threads) {
    ChunkPlan plan;
    plan.count = count;
    if (count == 0) return plan;
    std::size_t target = static_cast<std::size_t>(resolve_threads(threads)) * 4;
    plan.chunks = std::min(count, std::max<std::size_t>(1, target));
    plan.chunk_size = (count + plan.chunks - 1) / plan.chunks;
    plan.chunks = (count + plan.chunk_size - 1) / plan.chunk_size;
    return plan;
}

/// Runs fn(begin, end, chunk_index) for every chunk. Workers claim chunks
/// through an atomic cursor; callers combine per-chunk results in chunk
/// order when order matters. A worker exception is rethrown on the calling
/// thread (the one from the lowest-numbered failing chunk).
template <typename Fn>
void run_chunks(const ChunkPlan& plan, int threads, Fn&& fn) {
    if (plan.chunks == 0) return;
    const unsigned workers =
        std::min<unsigned>(resolve_threads(threads), static_cast<unsigned>(plan.chunks));
    if (workers <= 1) {
        for (std::size_t c = 0; c < plan.chunks; ++c) fn(plan.begin(c), plan.end(c), c);
        return;
    }
    std::vector<std::exception_ptr> errors(plan.chunks);
    std::atomic<std::size_t> cursor{0};
    auto worker = [&] {
        for (;;) {
            std::size_t c = cursor.fetch_add(1);
            if (c >= plan.chunks) return;
            try {
                fn(plan.begin(c), plan.end(c), c);
            } catch (...) {
                errors[c] = std::current_exception();
            }
        }
    };
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    }
    for (const std::exception_ptr& e : errors)
        if (e) std::rethrow_exception(e);
}

} // namespace profset
