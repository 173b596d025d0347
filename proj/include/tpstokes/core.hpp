#ifndef TPSTOKES_CORE_HPP
#define TPSTOKES_CORE_HPP

#include <complex>
#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace tpstokes {

using cdouble = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;
inline constexpr cdouble iunit{0.0, 1.0};

// Thrown when an operation is invoked on data violating one of its
// preconditions (steady content, compatibility, mean conditions, ...).
// The message names the offending mode or parameter.
class precondition_error : public std::runtime_error {
 public:
  explicit precondition_error(const std::string& what) : std::runtime_error(what) {}
};

class config_error : public std::runtime_error {
 public:
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

// Thread count used by the parallel loops below. Controlled by the
// TPSTOKES_THREADS environment variable; defaults to the OpenMP runtime.
inline int thread_count() {
  static int cached = [] {
    if (const char* env = std::getenv("TPSTOKES_THREADS")) {
      int v = std::atoi(env);
      if (v > 0) return v;
    }
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
  }();
  return cached;
}

// Parallel loop over [0, count). Each index is processed exactly once and
// writes only its own output slots, so results do not depend on the number
// of threads.
template <typename Fn>
inline void parallel_for(std::int64_t count, Fn&& fn) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(thread_count())
  for (std::int64_t i = 0; i < count; ++i) fn(i);
#else
  for (std::int64_t i = 0; i < count; ++i) fn(i);
#endif
}

// Deterministic parallel reduction: partial sums are accumulated per index
// chunk of fixed size and combined in index order, so the result is
// independent of the thread count.
template <typename Fn>
inline double parallel_sum(std::int64_t count, Fn&& fn) {
  constexpr std::int64_t chunk = 1024;
  const std::int64_t nchunks = (count + chunk - 1) / chunk;
  std::vector<double> partial(static_cast<std::size_t>(nchunks), 0.0);
  parallel_for(nchunks, [&](std::int64_t c) {
    const std::int64_t lo = c * chunk;
    const std::int64_t hi = std::min(count, lo + chunk);
    double s = 0.0;
    for (std::int64_t i = lo; i < hi; ++i) s += fn(i);
    partial[static_cast<std::size_t>(c)] = s;
  });
  double total = 0.0;
  for (double s : partial) total += s;
  return total;
}

}  // namespace tpstokes

#endif  // TPSTOKES_CORE_HPP
