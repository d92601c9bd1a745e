#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <type_traits>
#include <vector>

namespace rothaff::parallel {

// Upper bound on worker threads. Defaults to ROTHAFF_THREADS when set, else
// the hardware concurrency.
std::size_t worker_limit();
void set_worker_limit(std::size_t workers);

// Evaluates fn(0..count-1) on up to worker_limit() threads. Results are
// stored by index, so the output never depends on the number of workers.
// The exception of the lowest failing index is rethrown.
template <class Fn>
auto map_indexed(std::size_t count, Fn&& fn) -> std::vector<std::invoke_result_t<Fn&, std::size_t>> {
  using R = std::invoke_result_t<Fn&, std::size_t>;
  std::vector<R> results(count);
  std::vector<std::exception_ptr> errors(count);
  std::size_t workers = std::min(worker_limit(), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) results[i] = fn(i);
    return results;
  }
  std::atomic<std::size_t> next{0};
  auto run = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        results[i] = fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run);
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return results;
}

}  // namespace rothaff::parallel
