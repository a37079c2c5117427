#pragma once

// Data-parallel sample kernels. Every kernel has a serial reference and an
// OpenMP version; both return bit-identical results because reductions are
// performed over a fixed index order.

#include <cstddef>
#include <exception>
#include <limits>
#include <vector>

namespace hmcone::kernels {

struct MinResult {
  double value = std::numeric_limits<double>::infinity();
  std::size_t index = 0;
};

int max_threads();

namespace detail {

inline bool better(double v, std::size_t i, const MinResult& cur) {
  return v < cur.value || (v == cur.value && i < cur.index);
}

// Rethrows the exception raised at the smallest index, if any.
struct ExceptionSlot {
  std::exception_ptr error;
  std::size_t index = std::numeric_limits<std::size_t>::max();
  void record(std::size_t i, std::exception_ptr e) {
#pragma omp critical(hmcone_exception_slot)
    if (i < index) {
      index = i;
      error = e;
    }
  }
  void rethrow() const {
    if (error) std::rethrow_exception(error);
  }
};

}  // namespace detail

namespace serial {

template <typename Fn>
MinResult min_reduce(std::size_t n, Fn&& fn) {
  MinResult best;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = fn(i);
    if (detail::better(v, i, best)) best = {v, i};
  }
  return best;
}

template <typename Fn>
std::vector<char> mask(std::size_t n, Fn&& fn) {
  std::vector<char> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = fn(i) ? 1 : 0;
  return out;
}

template <typename Fn>
std::vector<double> map(std::size_t n, Fn&& fn) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
  return out;
}

}  // namespace serial

namespace parallel {

template <typename Fn>
MinResult min_reduce(std::size_t n, Fn&& fn) {
  std::vector<double> values(n);
  detail::ExceptionSlot slot;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
    try {
      values[i] = fn(static_cast<std::size_t>(i));
    } catch (...) {
      slot.record(static_cast<std::size_t>(i), std::current_exception());
    }
  }
  slot.rethrow();
  MinResult best;
  for (std::size_t i = 0; i < n; ++i) {
    if (detail::better(values[i], i, best)) best = {values[i], i};
  }
  return best;
}

template <typename Fn>
std::vector<char> mask(std::size_t n, Fn&& fn) {
  std::vector<char> out(n);
  detail::ExceptionSlot slot;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
    try {
      out[i] = fn(static_cast<std::size_t>(i)) ? 1 : 0;
    } catch (...) {
      slot.record(static_cast<std::size_t>(i), std::current_exception());
    }
  }
  slot.rethrow();
  return out;
}

template <typename Fn>
std::vector<double> map(std::size_t n, Fn&& fn) {
  std::vector<double> out(n);
  detail::ExceptionSlot slot;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
    try {
      out[i] = fn(static_cast<std::size_t>(i));
    } catch (...) {
      slot.record(static_cast<std::size_t>(i), std::current_exception());
    }
  }
  slot.rethrow();
  return out;
}

}  // namespace parallel

template <typename Fn>
MinResult min_reduce(bool use_parallel, std::size_t n, Fn&& fn) {
  return use_parallel ? parallel::min_reduce(n, fn) : serial::min_reduce(n, fn);
}

template <typename Fn>
std::vector<char> mask(bool use_parallel, std::size_t n, Fn&& fn) {
  return use_parallel ? parallel::mask(n, fn) : serial::mask(n, fn);
}

template <typename Fn>
std::vector<double> map(bool use_parallel, std::size_t n, Fn&& fn) {
  return use_parallel ? parallel::map(n, fn) : serial::map(n, fn);
}

}  // namespace hmcone::kernels
