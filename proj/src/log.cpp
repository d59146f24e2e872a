#include "landau/log.hpp"

#include <atomic>
#include <iostream>
#include <mutex>

namespace landau::log {
namespace {
std::atomic<bool> g_quiet{false};
std::atomic<std::size_t> g_count{0};
std::mutex g_mutex;
}  // namespace

void warn(std::string_view message) {
  ++g_count;
  if (g_quiet.load()) return;
  std::lock_guard lock(g_mutex);
  std::cerr << "warning: " << message << '\n';
}

void set_quiet(bool quiet) { g_quiet = quiet; }

std::size_t warning_count() { return g_count.load(); }

}  // namespace landau::log
