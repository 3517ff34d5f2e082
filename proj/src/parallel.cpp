#include "gammadyn/parallel.hpp"

#include <cstdlib>
#include <string>

namespace gammadyn::par {

int max_threads() {
#if defined(_OPENMP)
    int limit = omp_get_max_threads();
#else
    int limit = 1;
#endif
    if (const char* env = std::getenv("GAMMADYN_THREADS")) {
        try {
            const int requested = std::stoi(env);
            if (requested >= 1 && requested < limit) limit = requested;
            if (requested >= 1 && limit < 1) limit = requested;
        } catch (...) {
            // unparsable value: keep the OpenMP default
        }
    }
    return limit < 1 ? 1 : limit;
}

} // namespace gammadyn::par
