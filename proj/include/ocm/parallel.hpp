#pragma once

#include <cstddef>
#include <exception>
#include <limits>
#include <mutex>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ocm {

/// Execution policy for the data-parallel kernels. Serial is the reference
/// path; Parallel must produce bitwise-identical results.
enum class Exec { Serial, Parallel };

/// Worker cap: OCM_THREADS when set and positive, else the machine default.
int worker_count();
/// Overrides the cap for this process (0 restores the environment default).
void set_worker_count(int n);

/// Runs body(i) for i in [0, n). Under Exec::Parallel iterations run on an
/// OpenMP team; the exception thrown by the lowest failing index is rethrown,
/// so failures are reported deterministically.
template <class Body>
void for_each_index(std::size_t n, Exec exec, Body&& body) {
    if (exec == Exec::Serial || n < 2) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
#ifdef _OPENMP
    std::exception_ptr first;
    std::size_t first_index = std::numeric_limits<std::size_t>::max();
    std::mutex guard;
    const long long count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 16) num_threads(worker_count())
    for (long long i = 0; i < count; ++i) {
        try {
            body(static_cast<std::size_t>(i));
        } catch (...) {
            std::lock_guard<std::mutex> lock(guard);
            if (static_cast<std::size_t>(i) < first_index) {
                first_index = static_cast<std::size_t>(i);
                first = std::current_exception();
            }
        }
    }
    if (first) std::rethrow_exception(first);
#else
    for (std::size_t i = 0; i < n; ++i) body(i);
#endif
}

} // namespace ocm
