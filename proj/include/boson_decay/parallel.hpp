#pragma once

#include <cstddef>
#include <exception>
#include <span>
#include <thread>
#include <vector>

namespace boson_decay {

/// Worker count from BOSON_DECAY_THREADS (unset or 0 = hardware concurrency).
std::size_t configured_workers();

/// Runs body(i) for i in [0, count) over contiguous static blocks.
/// Results must be written per index so the outcome never depends on the
/// number of workers.
template <class Body>
void parallel_for(std::size_t count, Body&& body, std::size_t workers = configured_workers())
{
    if (workers <= 1 || count < 2)
    {
        for (std::size_t i = 0; i < count; ++i)
            body(i);
        return;
    }
    if (workers > count)
        workers = count;

    std::vector<std::exception_ptr> errors(workers);
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w)
        {
            const std::size_t begin = count * w / workers;
            const std::size_t end = count * (w + 1) / workers;
            pool.emplace_back([&, w, begin, end] {
                try
                {
                    for (std::size_t i = begin; i < end; ++i)
                        body(i);
                }
                catch (...)
                {
                    errors[w] = std::current_exception();
                }
            });
        }
    }
    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);
}

/// Pairwise (cascade) summation in index order.
double pairwise_sum(std::span<const double> values);

}  // namespace boson_decay
