#include "rothaff/parallel.hpp"

#include <cstdlib>
#include <string>

namespace rothaff::parallel {

namespace {

std::atomic<std::size_t>& limit_slot() {
  static std::atomic<std::size_t> slot{0};
  return slot;
}

std::size_t from_environment() {
  if (const char* env = std::getenv("ROTHAFF_THREADS")) {
    try {
      long v = std::stol(env);
      if (v >= 1) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace

std::size_t worker_limit() {
  std::size_t v = limit_slot().load();
  return v == 0 ? from_environment() : v;
}

void set_worker_limit(std::size_t workers) { limit_slot().store(workers); }

}  // namespace rothaff::parallel
