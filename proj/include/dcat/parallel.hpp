#pragma once

// Index-parallel map with a serial reference path. Results are stored per
// index, so the output never depends on scheduling.

#include <atomic>
#include <cstddef>
#include <exception>
#include <optional>
#include <type_traits>
#include <utility>
#include <vector>

namespace dcat::parallel {

enum class Execution { serial, parallel };

inline std::atomic<Execution>& default_execution_slot() {
  static std::atomic<Execution> slot{Execution::parallel};
  return slot;
}

inline Execution default_execution() { return default_execution_slot().load(); }
inline void set_default_execution(Execution e) { default_execution_slot().store(e); }

/// Evaluates f(0), ..., f(n-1). The first exception in index order is
/// rethrown after every index has run.
template <class F>
auto map_indexed(std::size_t n, F&& f, Execution ex = default_execution())
    -> std::vector<std::invoke_result_t<F&, std::size_t>> {
  using R = std::invoke_result_t<F&, std::size_t>;
  std::vector<std::optional<R>> slots(n);
  std::vector<std::exception_ptr> errors(n);
  const auto count = static_cast<long long>(n);
  if (ex == Execution::parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (long long i = 0; i < count; ++i) {
      try {
        slots[static_cast<std::size_t>(i)].emplace(f(static_cast<std::size_t>(i)));
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  } else {
    for (long long i = 0; i < count; ++i) {
      try {
        slots[static_cast<std::size_t>(i)].emplace(f(static_cast<std::size_t>(i)));
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<R> out;
  out.reserve(n);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace dcat::parallel
