// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.
#include "fmlab/simd/kernels.hpp"

#include <immintrin.h>

#include <vector>

namespace fmlab::simd::avx2 {

namespace {
inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v), hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}
}  // namespace

// Four evaluation points per lane group; coefficients are broadcast.
void horner_complex(const double* c, std::size_t ncoef, const double* q_re, const double* q_im,
                    std::size_t npts, double* out_re, double* out_im) {
    std::size_t i = 0;
    for (; i + 4 <= npts; i += 4) {
        const __m256d qr = _mm256_loadu_pd(q_re + i), qi = _mm256_loadu_pd(q_im + i);
        __m256d sr = _mm256_setzero_pd(), si = _mm256_setzero_pd();
        for (std::size_t n = ncoef; n-- > 0;) {
            const __m256d cn = _mm256_set1_pd(c[n]);
            const __m256d tr = _mm256_fmsub_pd(sr, qr, _mm256_fmsub_pd(si, qi, cn));
            const __m256d ti = _mm256_fmadd_pd(sr, qi, _mm256_mul_pd(si, qr));
            sr = tr;
            si = ti;
        }
        _mm256_storeu_pd(out_re + i, sr);
        _mm256_storeu_pd(out_im + i, si);
    }
    if (i < npts) scalar::horner_complex(c, ncoef, q_re + i, q_im + i, npts - i, out_re + i, out_im + i);
}

void weighted_row_sums(const double* A, std::size_t rows, std::size_t cols, std::size_t stride,
                       const double* w, bool square_minus_one, double* out) {
    const __m256d one = _mm256_set1_pd(1.0);
    for (std::size_t r = 0; r < rows; ++r) {
        const double* row = A + r * stride;
        __m256d acc0 = _mm256_setzero_pd(), acc1 = _mm256_setzero_pd();
        std::size_t c = 0;
        if (square_minus_one) {
            for (; c + 8 <= cols; c += 8) {
                const __m256d a0 = _mm256_loadu_pd(row + c), a1 = _mm256_loadu_pd(row + c + 4);
                acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(w + c), _mm256_fmsub_pd(a0, a0, one), acc0);
                acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(w + c + 4), _mm256_fmsub_pd(a1, a1, one), acc1);
            }
        } else {
            for (; c + 8 <= cols; c += 8) {
                acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(w + c), _mm256_loadu_pd(row + c), acc0);
                acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(w + c + 4), _mm256_loadu_pd(row + c + 4), acc1);
            }
        }
        double s = hsum(_mm256_add_pd(acc0, acc1));
        for (; c < cols; ++c) s += w[c] * (square_minus_one ? row[c] * row[c] - 1.0 : row[c]);
        out[r] = s;
    }
}

// Lane-parallel over samples: each lane keeps its running power; per-power partial sums
// are reduced once at the end.
void power_sums(const double* x, std::size_t n, int max_power, double* out) {
    std::vector<double> acc(4 * (static_cast<std::size_t>(max_power) + 1), 0.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d xv = _mm256_loadu_pd(x + i);
        __m256d p = _mm256_set1_pd(1.0);
        for (int j = 0; j <= max_power; ++j) {
            double* slot = acc.data() + 4 * j;
            _mm256_storeu_pd(slot, _mm256_add_pd(_mm256_loadu_pd(slot), p));
            p = _mm256_mul_pd(p, xv);
        }
    }
    for (int j = 0; j <= max_power; ++j) out[j] += hsum(_mm256_loadu_pd(acc.data() + 4 * j));
    if (i < n) scalar::power_sums(x + i, n - i, max_power, out);
}

}  // namespace fmlab::simd::avx2
