#include "fmlab/simd/kernels.hpp"

namespace fmlab::simd::scalar {

void horner_complex(const double* c, std::size_t ncoef, const double* q_re, const double* q_im,
                    std::size_t npts, double* out_re, double* out_im) {
    for (std::size_t i = 0; i < npts; ++i) {
        const double qr = q_re[i], qi = q_im[i];
        double sr = 0, si = 0;
        for (std::size_t n = ncoef; n-- > 0;) {
            const double tr = sr * qr - si * qi + c[n];
            const double ti = sr * qi + si * qr;
            sr = tr;
            si = ti;
        }
        out_re[i] = sr;
        out_im[i] = si;
    }
}

void weighted_row_sums(const double* A, std::size_t rows, std::size_t cols, std::size_t stride,
                       const double* w, bool square_minus_one, double* out) {
    for (std::size_t r = 0; r < rows; ++r) {
        const double* row = A + r * stride;
        double s = 0;
        if (square_minus_one) {
            for (std::size_t c = 0; c < cols; ++c) s += w[c] * (row[c] * row[c] - 1.0);
        } else {
            for (std::size_t c = 0; c < cols; ++c) s += w[c] * row[c];
        }
        out[r] = s;
    }
}

void power_sums(const double* x, std::size_t n, int max_power, double* out) {
    for (std::size_t i = 0; i < n; ++i) {
        double p = 1;
        for (int j = 0; j <= max_power; ++j) {
            out[j] += p;
            p *= x[i];
        }
    }
}

}  // namespace fmlab::simd::scalar
