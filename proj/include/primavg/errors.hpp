#pragma once

#include <cstddef>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace primavg {

// Bad arguments or preconditions that the caller can fix.
class invalid_input_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A request that would exceed the configured memory budget.
class resource_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Floating-point evaluation that drifted outside its tolerance.
class numeric_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A constructed object failed its own post-condition check.
class internal_error : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

inline constexpr std::size_t default_memory_budget = std::size_t{2} << 30;  // 2 GiB
inline constexpr const char* memory_budget_env = "PRIMAVG_MEMORY_BUDGET";

// Budget in bytes; PRIMAVG_MEMORY_BUDGET overrides the default.
inline std::size_t memory_budget() {
  if (const char* env = std::getenv(memory_budget_env)) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && v > 0) return static_cast<std::size_t>(v);
  }
  return default_memory_budget;
}

inline void require_budget(std::size_t bytes, const char* what) {
  if (bytes > memory_budget()) {
    throw resource_error(std::string(what) + ": needs " + std::to_string(bytes) +
                         " bytes, budget is " + std::to_string(memory_budget()));
  }
}

}  // namespace primavg
