#pragma once

// Work-unit parallelism with deterministic results: units are claimed from an
// atomic counter, each unit writes only its own slot, callers merge slots in
// unit order.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace shapelab {

/// Worker count: SHAPELAB_THREADS if set, else the requested value, else hardware.
inline unsigned resolve_threads(unsigned requested)
{
    if (const char* env = std::getenv("SHAPELAB_THREADS")) {
        try {
            const long v = std::stol(env);
            if (v > 0) return static_cast<unsigned>(v);
        }
        catch (const std::exception&) {
        }
    }
    if (requested > 0) return requested;
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Run fn(unit) for unit in [0, n) on `threads` workers. The first exception
/// thrown by any unit is rethrown after all workers stop.
template <class Fn>
void parallel_units(std::size_t n, unsigned threads, Fn&& fn)
{
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t u = next.fetch_add(1);
            if (u >= n || failed.load()) return;
            try {
                fn(u);
            }
            catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                failed = true;
            }
        }
    };
    if (threads == 1) {
        worker();
    }
    else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (error) std::rethrow_exception(error);
}

}  // namespace shapelab
