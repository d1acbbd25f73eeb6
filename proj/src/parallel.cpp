#include "ocm/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace ocm {

namespace {
std::atomic<int> g_override{0};
}

int worker_count() {
    if (int o = g_override.load(); o > 0) return o;
    if (const char* env = std::getenv("OCM_THREADS")) {
        try {
            int v = std::stoi(env);
            if (v > 0) return v;
        } catch (...) {
        }
    }
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

void set_worker_count(int n) { g_override.store(n > 0 ? n : 0); }

} // namespace ocm
