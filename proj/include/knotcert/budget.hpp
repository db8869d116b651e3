#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace knotcert {

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Work limits shared by enumeration routines. Unset limits are unbounded.
struct Budget {
  std::optional<std::int64_t> max_candidates;
  std::optional<double> max_seconds;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  double elapsed_seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
  void check_time(const char* what) const {
    if (max_seconds && elapsed_seconds() > *max_seconds) throw BudgetExceeded(std::string(what) + ": time budget exceeded");
  }
  void check_count(std::int64_t used, const char* what) const {
    if (max_candidates && used > *max_candidates)
      throw BudgetExceeded(std::string(what) + ": candidate budget exceeded");
  }
};

}  // namespace knotcert
