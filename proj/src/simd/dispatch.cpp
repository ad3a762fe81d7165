#include "fmlab/simd/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace fmlab::simd {

namespace {

Isa initial_isa() {
    const char* env = std::getenv("FMLAB_ISA");
    if (env) {
        const std::string v(env);
        if (v == "scalar") return Isa::Scalar;
        if (v == "avx2" && detect_best_isa() == Isa::Avx2) return Isa::Avx2;
    }
    return detect_best_isa();
}

std::atomic<int>& isa_slot() {
    static std::atomic<int> slot{static_cast<int>(initial_isa())};
    return slot;
}

}  // namespace

Isa detect_best_isa() {
#if defined(FMLAB_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) return Isa::Avx2;
#endif
    return Isa::Scalar;
}

Isa active_isa() { return static_cast<Isa>(isa_slot().load()); }

void set_active_isa(Isa isa) {
    if (isa == Isa::Avx2 && detect_best_isa() != Isa::Avx2) isa = Isa::Scalar;
    isa_slot().store(static_cast<int>(isa));
}

std::string isa_name(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

void horner_complex(const double* c, std::size_t ncoef, const double* q_re, const double* q_im,
                    std::size_t npts, double* out_re, double* out_im) {
#if defined(FMLAB_HAVE_AVX2)
    if (active_isa() == Isa::Avx2) return avx2::horner_complex(c, ncoef, q_re, q_im, npts, out_re, out_im);
#endif
    scalar::horner_complex(c, ncoef, q_re, q_im, npts, out_re, out_im);
}

void weighted_row_sums(const double* A, std::size_t rows, std::size_t cols, std::size_t stride,
                       const double* w, bool square_minus_one, double* out) {
#if defined(FMLAB_HAVE_AVX2)
    if (active_isa() == Isa::Avx2) return avx2::weighted_row_sums(A, rows, cols, stride, w, square_minus_one, out);
#endif
    scalar::weighted_row_sums(A, rows, cols, stride, w, square_minus_one, out);
}

void power_sums(const double* x, std::size_t n, int max_power, double* out) {
#if defined(FMLAB_HAVE_AVX2)
    if (active_isa() == Isa::Avx2) return avx2::power_sums(x, n, max_power, out);
#endif
    scalar::power_sums(x, n, max_power, out);
}

}  // namespace fmlab::simd
