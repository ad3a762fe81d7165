#pragma once
// Hot loops with a scalar reference and an AVX2/FMA variant picked at runtime.
// The two variants agree to rounding (different association order), not bit-for-bit.
#include <cstddef>
#include <string>

namespace fmlab::simd {

enum class Isa { Scalar, Avx2 };

/// Best variant the running CPU supports (and the build contains).
Isa detect_best_isa();
/// Variant used by the dispatching entry points. Initialised from $FMLAB_ISA
/// ("scalar" / "avx2" / "auto"), else detect_best_isa().
Isa active_isa();
void set_active_isa(Isa isa);
std::string isa_name(Isa isa);

/// Evaluates sum_{n<ncoef} c[n] q^n at each complex point q = (q_re[i], q_im[i]).
void horner_complex(const double* c, std::size_t ncoef, const double* q_re, const double* q_im,
                    std::size_t npts, double* out_re, double* out_im);

/// out[r] = sum_c w[c] * f(A[r*stride + c]) for c < cols, where f(t) = t (square_minus_one = false)
/// or f(t) = t*t - 1.
void weighted_row_sums(const double* A, std::size_t rows, std::size_t cols, std::size_t stride,
                       const double* w, bool square_minus_one, double* out);

/// out[j] += sum_i x[i]^j for 0 <= j <= max_power.
void power_sums(const double* x, std::size_t n, int max_power, double* out);

namespace scalar {
void horner_complex(const double* c, std::size_t ncoef, const double* q_re, const double* q_im,
                    std::size_t npts, double* out_re, double* out_im);
void weighted_row_sums(const double* A, std::size_t rows, std::size_t cols, std::size_t stride,
                       const double* w, bool square_minus_one, double* out);
void power_sums(const double* x, std::size_t n, int max_power, double* out);
}  // namespace scalar

#if defined(FMLAB_HAVE_AVX2)
namespace avx2 {
void horner_complex(const double* c, std::size_t ncoef, const double* q_re, const double* q_im,
                    std::size_t npts, double* out_re, double* out_im);
void weighted_row_sums(const double* A, std::size_t rows, std::size_t cols, std::size_t stride,
                       const double* w, bool square_minus_one, double* out);
void power_sums(const double* x, std::size_t n, int max_power, double* out);
}  // namespace avx2
#endif

}  // namespace fmlab::simd
