#include "fmlab/simd/kernels.hpp"

#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

using namespace fmlab;

namespace {

std::vector<double> randoms(std::size_t n, std::uint64_t seed, double lo, double hi) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> d(lo, hi);
    std::vector<double> v(n);
    for (auto& x : v) x = d(rng);
    return v;
}

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); }

}  // namespace

TEST_CASE("dispatch names and override") {
    const auto best = simd::detect_best_isa();
    CHECK((simd::isa_name(best) == "scalar" || simd::isa_name(best) == "avx2"));
    const auto saved = simd::active_isa();
    simd::set_active_isa(simd::Isa::Scalar);
    CHECK(simd::active_isa() == simd::Isa::Scalar);
    simd::set_active_isa(saved);
}

TEST_CASE("horner_complex: scalar against direct powers") {
    const std::size_t nc = 60, np = 37;
    const auto c = randoms(nc, 1, -3, 3);
    const auto r = randoms(np, 2, 0, 0.9), th = randoms(np, 3, 0, 6.28);
    std::vector<double> qr(np), qi(np), outr(np), outi(np);
    for (std::size_t i = 0; i < np; ++i) {
        qr[i] = r[i] * std::cos(th[i]);
        qi[i] = r[i] * std::sin(th[i]);
    }
    simd::scalar::horner_complex(c.data(), nc, qr.data(), qi.data(), np, outr.data(), outi.data());
    for (std::size_t i = 0; i < np; ++i) {
        std::complex<double> q(qr[i], qi[i]), s = 0, qn = 1;
        for (std::size_t n = 0; n < nc; ++n) {
            s += c[n] * qn;
            qn *= q;
        }
        CHECK(close(outr[i], s.real(), 1e-12));
        CHECK(close(outi[i], s.imag(), 1e-12));
    }
}

#if defined(FMLAB_HAVE_AVX2)
TEST_CASE("AVX2 variants agree with the scalar reference") {
    if (simd::detect_best_isa() != simd::Isa::Avx2) return;  // CPU without AVX2: nothing to compare

    // odd sizes hit the vector tails
    for (std::size_t np : {1u, 3u, 4u, 7u, 64u, 1001u}) {
        const std::size_t nc = 90;
        const auto c = randoms(nc, 10 + np, -5, 5);
        const auto qr = randoms(np, 20 + np, -0.7, 0.7), qi = randoms(np, 30 + np, -0.7, 0.7);
        std::vector<double> ar(np), ai(np), br(np), bi(np);
        simd::scalar::horner_complex(c.data(), nc, qr.data(), qi.data(), np, ar.data(), ai.data());
        simd::avx2::horner_complex(c.data(), nc, qr.data(), qi.data(), np, br.data(), bi.data());
        for (std::size_t i = 0; i < np; ++i) {
            CHECK(close(br[i], ar[i], 1e-12));
            CHECK(close(bi[i], ai[i], 1e-12));
        }
    }

    for (std::size_t cols : {1u, 5u, 8u, 13u, 250u}) {
        const std::size_t rows = 9, stride = cols + 3;
        const auto A = randoms(rows * stride, 40 + cols, -2, 2);
        const auto w = randoms(cols, 50 + cols, -1, 1);
        for (bool sq : {false, true}) {
            std::vector<double> a(rows), b(rows);
            simd::scalar::weighted_row_sums(A.data(), rows, cols, stride, w.data(), sq, a.data());
            simd::avx2::weighted_row_sums(A.data(), rows, cols, stride, w.data(), sq, b.data());
            for (std::size_t r = 0; r < rows; ++r) CHECK(close(b[r], a[r], 1e-12));
        }
    }

    for (std::size_t n : {0u, 1u, 6u, 17u, 10000u}) {
        const auto x = randoms(n, 60 + n, -2, 2);
        for (int mp : {0, 1, 4, 9}) {
            std::vector<double> a(mp + 1, 0.5), b(mp + 1, 0.5);  // accumulate onto existing values
            simd::scalar::power_sums(x.data(), n, mp, a.data());
            simd::avx2::power_sums(x.data(), n, mp, b.data());
            for (int j = 0; j <= mp; ++j) CHECK(close(b[j], a[j], 1e-12));
        }
    }
}
#endif

TEST_CASE("dispatching entry points follow the active variant") {
    const auto x = randoms(101, 7, -2, 2);
    std::vector<double> a(5, 0), b(5, 0);
    const auto saved = simd::active_isa();
    simd::set_active_isa(simd::Isa::Scalar);
    simd::power_sums(x.data(), x.size(), 4, a.data());
    simd::set_active_isa(saved);
    simd::power_sums(x.data(), x.size(), 4, b.data());
    for (int j = 0; j <= 4; ++j) CHECK(close(b[j], a[j], 1e-12));
    CHECK(a[0] == 101);
}
