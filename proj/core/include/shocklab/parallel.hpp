#pragma once

#include <cstdint>
#include <functional>

namespace shocklab {

// Worker count: SHOCKLAB_WORKERS if set to a positive integer, otherwise the
// hardware concurrency (at least 1).
int default_workers();

// Runs body(i) for i in [0, count) on up to `workers` threads. Each index is
// processed exactly once; callers write results into per-index slots so the
// outcome does not depend on scheduling.
void parallel_for(long count, int workers, const std::function<void(long)>& body);

// Deterministic 64-bit seed for stream `index` derived from a base seed.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace shocklab
