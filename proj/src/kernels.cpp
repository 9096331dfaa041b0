#include "nblab/kernels.hpp"

#include <omp.h>

#include <cstdlib>
#include <exception>
#include <limits>
#include <string>

namespace nblab {

int configure_threads_from_env() {
    if (const char* env = std::getenv("NBLAB_THREADS")) {
        char* end = nullptr;
        long n = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && n >= 1) {
            int cap = static_cast<int>(std::min<long>(n, omp_get_num_procs() * 4L));
            omp_set_num_threads(cap);
        }
    }
    return omp_get_max_threads();
}

int max_workers() { return omp_get_max_threads(); }

void for_each_index(std::size_t count, const std::function<void(std::size_t)>& body, Execution exec) {
    if (exec == Execution::serial || count < 2 || omp_get_max_threads() == 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::size_t first_failure = std::numeric_limits<std::size_t>::max();
    std::exception_ptr failure;
    const auto n = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(dynamic, 16)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        try {
            body(static_cast<std::size_t>(i));
        } catch (...) {
#pragma omp critical(nblab_for_each_failure)
            {
                if (static_cast<std::size_t>(i) < first_failure) {
                    first_failure = static_cast<std::size_t>(i);
                    failure = std::current_exception();
                }
            }
        }
    }
    if (failure) std::rethrow_exception(failure);
}

std::vector<std::complex<double>> accumulate_gram(std::span<const std::complex<double>> basis,
                                                  std::span<const double> weights, std::size_t dim,
                                                  double scale, Execution exec) {
    const std::size_t nodes = weights.size();
    std::vector<std::complex<double>> gram(dim * dim);
    // Upper triangle (n <= m) row by row, then mirror.
    for_each_index(
        dim,
        [&](std::size_t n) {
            for (std::size_t m = n; m < dim; ++m) {
                double re = 0.0, im = 0.0;
                for (std::size_t j = 0; j < nodes; ++j) {
                    const std::complex<double> am = basis[j * dim + m];
                    const std::complex<double> an = basis[j * dim + n];
                    // am * conj(an)
                    re += weights[j] * (am.real() * an.real() + am.imag() * an.imag());
                    im += weights[j] * (am.imag() * an.real() - am.real() * an.imag());
                }
                gram[n * dim + m] = {scale * re, scale * im};
            }
        },
        exec);
    for (std::size_t n = 0; n < dim; ++n) {
        gram[n * dim + n].imag(0.0);
        for (std::size_t m = n + 1; m < dim; ++m) gram[m * dim + n] = std::conj(gram[n * dim + m]);
    }
    return gram;
}

}  // namespace nblab
