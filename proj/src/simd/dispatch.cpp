#include <cstdlib>
#include <stdexcept>
#include <string>

#include "translab/errors.hpp"
#include "translab/simd/kernels.hpp"

namespace translab::simd {
namespace {

bool cpu_has_avx2() {
#if defined(TRANSLAB_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Backend initial_backend() {
    Backend chosen = cpu_has_avx2() ? Backend::Avx2 : Backend::Scalar;
    if (const char* env = std::getenv("TRANSLAB_SIMD")) {
        std::string v(env);
        if (v == "scalar") chosen = Backend::Scalar;
        else if (v == "avx2" && cpu_has_avx2()) chosen = Backend::Avx2;
    }
    return chosen;
}

const KernelTable& table_for(Backend b) {
#if defined(TRANSLAB_HAVE_AVX2)
    if (b == Backend::Avx2) return avx2_table();
#endif
    (void)b;
    return scalar_table();
}

struct State {
    Backend backend;
    const KernelTable* table;
    State() : backend(initial_backend()), table(&table_for(backend)) {}
};

State& state() {
    static State s;
    return s;
}

void require_same(std::size_t a, std::size_t b) {
    if (a != b) throw GridMismatchError("kernel operands differ in length");
}

}  // namespace

bool backend_available(Backend b) { return b == Backend::Scalar || cpu_has_avx2(); }

Backend active_backend() { return state().backend; }

std::string_view backend_name(Backend b) { return b == Backend::Avx2 ? "avx2" : "scalar"; }

void force_backend(Backend b) {
    if (!backend_available(b)) throw std::runtime_error("backend not available on this CPU");
    state().backend = b;
    state().table = &table_for(b);
}

const KernelTable& kernels() { return *state().table; }

double dot(std::span<const double> a, std::span<const double> b) {
    require_same(a.size(), b.size());
    return kernels().dot(a.data(), b.data(), a.size());
}

double dot_abs(std::span<const double> w, std::span<const double> v) {
    require_same(w.size(), v.size());
    return kernels().dot_abs(w.data(), v.data(), w.size());
}

double dot_sq(std::span<const double> w, std::span<const double> v) {
    require_same(w.size(), v.size());
    return kernels().dot_sq(w.data(), v.data(), w.size());
}

double dot_abs_prod(std::span<const double> w, std::span<const double> a,
                    std::span<const double> b) {
    require_same(w.size(), a.size());
    require_same(w.size(), b.size());
    return kernels().dot_abs_prod(w.data(), a.data(), b.data(), w.size());
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    require_same(a.size(), b.size());
    return kernels().max_abs_diff(a.data(), b.data(), a.size());
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    require_same(x.size(), y.size());
    kernels().axpy(alpha, x.data(), y.data(), x.size());
}

}  // namespace translab::simd
