#pragma once

#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace hypoharnack {

/// Worker cap used by the inner parallel loops. 0 means hardware concurrency.
/// Set once at startup (CLI --jobs); reads are racy-free because campaigns run
/// sequentially.
int parallel_jobs() noexcept;
void set_parallel_jobs(int jobs) noexcept;

/// Chunked parallel for over [0, n). The callable receives (begin, end).
/// Falls back to a serial call for small n or jobs == 1.
void parallel_for_chunks(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

/// Deterministic parallel sum of f(i) over [0, n): per-chunk partials are
/// accumulated into fixed slots and reduced sequentially, so the result does
/// not depend on thread timing.
double parallel_sum(std::size_t n, const std::function<double(std::size_t)>& term);

/// Deterministic parallel max of f(i) over [0, n); returns lowest() for n == 0.
double parallel_max(std::size_t n, const std::function<double(std::size_t)>& term);

namespace detail {
inline int& jobs_slot() noexcept {
  static int jobs = 0;
  return jobs;
}
} // namespace detail

inline int parallel_jobs() noexcept {
  int j = detail::jobs_slot();
  if (j <= 0) {
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
  }
  return j;
}

inline void set_parallel_jobs(int jobs) noexcept { detail::jobs_slot() = jobs; }

inline void parallel_for_chunks(std::size_t n,
                                const std::function<void(std::size_t, std::size_t)>& body) {
  const int jobs = parallel_jobs();
  if (n == 0) return;
  if (jobs <= 1 || n < 2048) {
    body(0, n);
    return;
  }
  const std::size_t nthreads = std::min<std::size_t>(static_cast<std::size_t>(jobs), n);
  const std::size_t chunk = (n + nthreads - 1) / nthreads;
  std::vector<std::thread> pool;
  pool.reserve(nthreads);
  for (std::size_t t = 0; t < nthreads; ++t) {
    const std::size_t b = t * chunk;
    const std::size_t e = std::min(n, b + chunk);
    if (b >= e) break;
    pool.emplace_back([&body, b, e] { body(b, e); });
  }
  for (auto& th : pool) th.join();
}

inline double parallel_sum(std::size_t n, const std::function<double(std::size_t)>& term) {
  const int jobs = parallel_jobs();
  if (n == 0) return 0.0;
  if (jobs <= 1 || n < 2048) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += term(i);
    return s;
  }
  const std::size_t nthreads = std::min<std::size_t>(static_cast<std::size_t>(jobs), n);
  const std::size_t chunk = (n + nthreads - 1) / nthreads;
  std::vector<double> partial(nthreads, 0.0);
  std::vector<std::thread> pool;
  pool.reserve(nthreads);
  for (std::size_t t = 0; t < nthreads; ++t) {
    const std::size_t b = t * chunk;
    const std::size_t e = std::min(n, b + chunk);
    if (b >= e) break;
    pool.emplace_back([&term, &partial, t, b, e] {
      double s = 0.0;
      for (std::size_t i = b; i < e; ++i) s += term(i);
      partial[t] = s;
    });
  }
  for (auto& th : pool) th.join();
  double s = 0.0;
  for (double p : partial) s += p;
  return s;
}

inline double parallel_max(std::size_t n, const std::function<double(std::size_t)>& term) {
  const int jobs = parallel_jobs();
  double lo = -1.7976931348623157e308;
  if (n == 0) return lo;
  if (jobs <= 1 || n < 2048) {
    double m = lo;
    for (std::size_t i = 0; i < n; ++i) m = std::max(m, term(i));
    return m;
  }
  const std::size_t nthreads = std::min<std::size_t>(static_cast<std::size_t>(jobs), n);
  const std::size_t chunk = (n + nthreads - 1) / nthreads;
  std::vector<double> partial(nthreads, lo);
  std::vector<std::thread> pool;
  pool.reserve(nthreads);
  for (std::size_t t = 0; t < nthreads; ++t) {
    const std::size_t b = t * chunk;
    const std::size_t e = std::min(n, b + chunk);
    if (b >= e) break;
    pool.emplace_back([&term, &partial, t, b, e] {
      double m = -1.7976931348623157e308;
      for (std::size_t i = b; i < e; ++i) m = std::max(m, term(i));
      partial[t] = m;
    });
  }
  for (auto& th : pool) th.join();
  double m = lo;
  for (double p : partial) m = std::max(m, p);
  return m;
}

} // namespace hypoharnack
