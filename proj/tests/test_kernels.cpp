#include <gtest/gtest.h>

#include <atomic>
#include <cstdlib>
#include <stdexcept>

#include "nblab/kernels.hpp"
#include "oracles.hpp"

using namespace nblab;

namespace {

struct Failure : std::runtime_error {
    explicit Failure(std::size_t at) : std::runtime_error("failure"), index(at) {}
    std::size_t index;
};

}  // namespace

TEST(ForEachIndex, VisitsEveryIndexOnce) {
    oracle::use_threads(4);
    for (Execution exec : {Execution::serial, Execution::parallel}) {
        std::vector<std::atomic<int>> hits(1000);
        for_each_index(hits.size(), [&](std::size_t i) { hits[i]++; }, exec);
        for (const auto& h : hits) ASSERT_EQ(h.load(), 1);
    }
}

TEST(ForEachIndex, RethrowsLowestFailingIndex) {
    oracle::use_threads(4);
    for (Execution exec : {Execution::serial, Execution::parallel}) {
        try {
            for_each_index(
                500,
                [](std::size_t i) {
                    if (i == 123 || i == 321 || i == 499) throw Failure(i);
                },
                exec);
            FAIL() << "no exception";
        } catch (const Failure& f) {
            EXPECT_EQ(f.index, 123u);
        }
    }
}

TEST(EvaluateNodes, SerialAndParallelBitIdentical) {
    oracle::use_threads(4);
    std::vector<double> nodes(4097);
    for (std::size_t i = 0; i < nodes.size(); ++i) nodes[i] = 0.001 * static_cast<double>(i) - 2.0;
    std::function<std::complex<double>(double)> f = [](double t) {
        return std::exp(std::complex<double>(-0.1 * t, t)) / (1.0 + t * t);
    };
    const auto a = evaluate_nodes<std::complex<double>, double>(nodes, f, Execution::serial);
    const auto b = evaluate_nodes<std::complex<double>, double>(nodes, f, Execution::parallel);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) ASSERT_EQ(a[i], b[i]);
}

TEST(AccumulateGram, HermitianAndMatchesNaive) {
    oracle::use_threads(4);
    const std::size_t nodes = 301, dim = 5;
    std::vector<std::complex<double>> basis(nodes * dim);
    std::vector<double> w(nodes);
    for (std::size_t j = 0; j < nodes; ++j) {
        w[j] = 0.5 + 0.001 * static_cast<double>(j);
        for (std::size_t n = 0; n < dim; ++n)
            basis[j * dim + n] = std::polar(1.0 / (1.0 + n), 0.37 * static_cast<double>(j * (n + 1)));
    }
    const auto serial = accumulate_gram(basis, w, dim, 0.25, Execution::serial);
    const auto parallel = accumulate_gram(basis, w, dim, 0.25, Execution::parallel);
    ASSERT_EQ(serial, parallel);
    for (std::size_t r = 0; r < dim; ++r) {
        EXPECT_EQ(serial[r * dim + r].imag(), 0.0);
        for (std::size_t c = 0; c < dim; ++c) {
            EXPECT_EQ(serial[r * dim + c], std::conj(serial[c * dim + r]));
            std::complex<double> naive = 0.0;
            for (std::size_t j = 0; j < nodes; ++j) naive += w[j] * basis[j * dim + c] * std::conj(basis[j * dim + r]);
            EXPECT_LT(std::abs(0.25 * naive - serial[r * dim + c]), 1e-12);
        }
    }
}

TEST(Threads, EnvironmentCap) {
    ::setenv("NBLAB_THREADS", "1", 1);
    EXPECT_EQ(configure_threads_from_env(), 1);
    EXPECT_EQ(max_workers(), 1);
    ::setenv("NBLAB_THREADS", "3", 1);
    EXPECT_EQ(configure_threads_from_env(), 3);
    ::setenv("NBLAB_THREADS", "garbage", 1);
    EXPECT_EQ(configure_threads_from_env(), 3);
    ::unsetenv("NBLAB_THREADS");
}
