#include "shocklab/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace shocklab {

int default_workers() {
  if (const char* env = std::getenv("SHOCKLAB_WORKERS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(std::min(v, 1024L));
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(long count, int workers, const std::function<void(long)>& body) {
  if (count <= 0) return;
  const int w = static_cast<int>(std::clamp<long>(workers, 1, count));
  if (w == 1) {
    for (long i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<long> next{0};
  std::exception_ptr first_error;
  std::mutex err_mu;
  auto run = [&] {
    for (long i = next++; i < count; i = next++) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(err_mu);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int k = 1; k < w; ++k) pool.emplace_back(run);
  run();
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) {
  // two rounds of splitmix64 over (seed, index)
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(mix(seed) ^ (index + 0x632be59bd9b4e019ULL));
}

}  // namespace shocklab
