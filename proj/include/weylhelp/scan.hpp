#pragma once

// Ordered map over an index range, serial or OpenMP-parallel. Results come
// back in input order either way; the first exception by index is rethrown
// after the loop, so both paths fail identically.

#include <cstddef>
#include <exception>
#include <optional>
#include <type_traits>
#include <vector>

namespace weylhelp {

enum class Exec { serial, parallel };

template <class F>
auto ordered_map(std::size_t n, F&& f, Exec exec = Exec::parallel)
    -> std::vector<std::invoke_result_t<F&, std::size_t>> {
  using R = std::invoke_result_t<F&, std::size_t>;
  std::vector<std::optional<R>> slots(n);
  std::vector<std::exception_ptr> errors(n);
  const auto count = static_cast<long long>(n);
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic)
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
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::vector<R> out;
  out.reserve(n);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace weylhelp
