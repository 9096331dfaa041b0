#pragma once

// Data-parallel kernels. Each has an OpenMP path and a serial reference path;
// both produce bit-identical results because work is split over independent
// outputs and every reduction runs in fixed index order.

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace nblab {

enum class Execution { serial, parallel };

/// Reads NBLAB_THREADS and caps the OpenMP worker count. Returns the count in
/// effect. Unset or invalid values leave the OpenMP default alone.
int configure_threads_from_env();

int max_workers();

/// Runs body(i) for i in [0, count). The parallel path rethrows the exception
/// raised at the lowest failing index, matching what the serial path raises.
void for_each_index(std::size_t count, const std::function<void(std::size_t)>& body, Execution exec);

template <typename Value, typename Point>
std::vector<Value> evaluate_nodes(std::span<const Point> nodes, const std::function<Value(Point)>& f,
                                  Execution exec) {
    std::vector<Value> out(nodes.size());
    for_each_index(nodes.size(), [&](std::size_t i) { out[i] = f(nodes[i]); }, exec);
    return out;
}

/// Hermitian accumulation gram(n, m) = scale * sum_j w_j a_j(m) conj(a_j(n)) for
/// a row-major node-by-basis matrix `basis` (nodes x dim). Returns dim x dim
/// row-major. Node order is fixed for every entry.
std::vector<std::complex<double>> accumulate_gram(std::span<const std::complex<double>> basis,
                                                  std::span<const double> weights, std::size_t dim,
                                                  double scale, Execution exec);

}  // namespace nblab
