#pragma once

#include <cstddef>
#include <string_view>

namespace landau::log {

// Warnings go to stderr unless silenced; the counter keeps running either way
// so tests can assert that a heuristic fired.
void warn(std::string_view message);
void set_quiet(bool quiet);
std::size_t warning_count();

}  // namespace landau::log
