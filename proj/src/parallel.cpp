#include "boson_decay/parallel.hpp"

#include <cstdlib>
#include <string>

namespace boson_decay {

std::size_t configured_workers()
{
    std::size_t requested = 0;
    if (const char* env = std::getenv("BOSON_DECAY_THREADS"))
    {
        try
        {
            requested = static_cast<std::size_t>(std::stoul(env));
        }
        catch (const std::exception&)
        {
            requested = 0;
        }
    }
    if (requested == 0)
    {
        requested = std::thread::hardware_concurrency();
        if (requested == 0)
            requested = 1;
    }
    return requested;
}

double pairwise_sum(std::span<const double> values)
{
    constexpr std::size_t leaf = 16;
    if (values.size() <= leaf)
    {
        double acc = 0.0;
        for (double v : values)
            acc += v;
        return acc;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

}  // namespace boson_decay
