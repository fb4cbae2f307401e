#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <thread>

#include "statecraft/harness.h"

namespace statecraft::harness {

std::vector<RunTrace> run_batch(const ScenarioConfig& config, const std::vector<std::uint64_t>& seeds,
                                unsigned threads) {
  if (const auto errs = validate(config); !errs.empty()) throw ConfigError(errs);
  std::vector<RunTrace> out(seeds.size());
  if (seeds.empty()) return out;

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, seeds.size()));

  std::vector<std::exception_ptr> errors(seeds.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < seeds.size(); i = next++) {
      try {
        out[i] = run(config, seeds[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

std::vector<std::uint64_t> seed_range(std::uint64_t start, std::uint64_t count) {
  std::vector<std::uint64_t> out;
  out.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) out.push_back(start + i);
  return out;
}

}  // namespace statecraft::harness
