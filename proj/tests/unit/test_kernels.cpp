#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "translab/simd/kernels.hpp"

using namespace translab::simd;

namespace {

std::vector<double> random_vec(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
    std::uniform_real_distribution<double> d(lo, hi);
    std::vector<double> v(n);
    for (double& x : v) x = d(rng);
    return v;
}

class KernelEquivalence : public ::testing::TestWithParam<std::size_t> {
protected:
    void SetUp() override {
        if (!backend_available(Backend::Avx2)) GTEST_SKIP() << "no AVX2 on this CPU";
    }
    void TearDown() override { force_backend(Backend::Avx2); }
};

}  // namespace

TEST_P(KernelEquivalence, ReductionsMatchScalarReference) {
    const std::size_t n = GetParam();
    std::mt19937_64 rng(1234 + n);
    auto w = random_vec(rng, n, 0.0, 1.0);
    auto a = random_vec(rng, n, -3.0, 3.0);
    auto b = random_vec(rng, n, -3.0, 3.0);
    const KernelTable& s = scalar_table();
    const KernelTable& v = avx2_table();
    auto close = [](double x, double y) {
        return std::fabs(x - y) <= 1e-13 * std::max(1.0, std::fabs(x));
    };
    EXPECT_TRUE(close(s.sum(a.data(), n), v.sum(a.data(), n)));
    EXPECT_TRUE(close(s.dot(a.data(), b.data(), n), v.dot(a.data(), b.data(), n)));
    EXPECT_TRUE(close(s.dot_abs(w.data(), a.data(), n), v.dot_abs(w.data(), a.data(), n)));
    EXPECT_TRUE(close(s.dot_sq(w.data(), a.data(), n), v.dot_sq(w.data(), a.data(), n)));
    EXPECT_TRUE(close(s.dot_abs_prod(w.data(), a.data(), b.data(), n),
                      v.dot_abs_prod(w.data(), a.data(), b.data(), n)));
    EXPECT_EQ(s.max_abs(a.data(), n), v.max_abs(a.data(), n));
    EXPECT_EQ(s.max_abs_diff(a.data(), b.data(), n), v.max_abs_diff(a.data(), b.data(), n));

    auto y1 = b, y2 = b;
    s.axpy(0.75, a.data(), y1.data(), n);
    v.axpy(0.75, a.data(), y2.data(), n);
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(y1[i], y2[i], 1e-15);
}

INSTANTIATE_TEST_SUITE_P(Lengths, KernelEquivalence,
                         ::testing::Values(0, 1, 3, 4, 7, 8, 9, 31, 64, 1000, 4097));

TEST(Kernels, EmptyInputsGiveZero) {
    std::vector<double> e;
    EXPECT_EQ(sum(e), 0.0);
    EXPECT_EQ(max_abs(e), 0.0);
}

TEST(Kernels, ForcedScalarBackendIsReported) {
    Backend before = active_backend();
    force_backend(Backend::Scalar);
    EXPECT_EQ(active_backend(), Backend::Scalar);
    EXPECT_EQ(backend_name(active_backend()), "scalar");
    std::vector<double> a{1, -2, 3};
    EXPECT_EQ(max_abs(a), 3.0);
    force_backend(before);
}

TEST(Kernels, LengthMismatchThrows) {
    std::vector<double> a{1, 2}, b{1};
    EXPECT_ANY_THROW(dot(a, b));
}
