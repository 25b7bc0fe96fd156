#pragma once

// Reduction and row-update kernels used by norms, pairings and convolution.
// A scalar reference and an AVX2+FMA variant exist; the variant is chosen once
// at startup from CPUID and can be pinned with TRANSLAB_SIMD=scalar|avx2.

#include <cstddef>
#include <span>
#include <string_view>

namespace translab::simd {

enum class Backend { Scalar, Avx2 };

struct KernelTable {
    double (*sum)(const double* a, std::size_t n);
    double (*dot)(const double* a, const double* b, std::size_t n);
    double (*dot_abs)(const double* w, const double* v, std::size_t n);
    double (*dot_sq)(const double* w, const double* v, std::size_t n);
    double (*dot_abs_prod)(const double* w, const double* a, const double* b, std::size_t n);
    double (*max_abs)(const double* a, std::size_t n);
    double (*max_abs_diff)(const double* a, const double* b, std::size_t n);
    void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
};

const KernelTable& scalar_table();
#if defined(TRANSLAB_HAVE_AVX2)
const KernelTable& avx2_table();
#endif

bool backend_available(Backend b);
Backend active_backend();
std::string_view backend_name(Backend b);

// Testing hook: switch the process-wide table. Not thread safe.
void force_backend(Backend b);

const KernelTable& kernels();

inline double sum(std::span<const double> a) { return kernels().sum(a.data(), a.size()); }
double dot(std::span<const double> a, std::span<const double> b);
// sum w_i |v_i|
double dot_abs(std::span<const double> w, std::span<const double> v);
// sum w_i v_i^2
double dot_sq(std::span<const double> w, std::span<const double> v);
// sum w_i |a_i b_i|
double dot_abs_prod(std::span<const double> w, std::span<const double> a,
                    std::span<const double> b);
inline double max_abs(std::span<const double> a) { return kernels().max_abs(a.data(), a.size()); }
double max_abs_diff(std::span<const double> a, std::span<const double> b);
// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);

}  // namespace translab::simd
