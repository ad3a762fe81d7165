#include "fmlab/errors.hpp"
#include "fmlab/modforms/kloosterman.hpp"
#include "fmlab/modforms/lfunctions.hpp"
#include "fmlab/modforms/petersson.hpp"

#include <doctest.h>

#include <boost/math/special_functions/bessel.hpp>

#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>

using namespace fmlab;
using namespace fmlab::mf;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> tau_product(std::size_t N) {
    std::vector<double> a(N + 1, 0);
    a[0] = 1;
    for (std::size_t n = 1; n <= N; ++n)
        for (int e = 0; e < 24; ++e)
            for (std::size_t m = N; m >= n; --m) a[m] -= a[m - n];
    std::vector<double> t(N + 1, 0);
    for (std::size_t n = 1; n <= N; ++n) t[n] = a[n - 1];
    return t;
}

// coarse composite Simpson over the whole domain |x| <= 1/2, sqrt(1-x^2) <= y <= 8
double coarse_delta_norm() {
    const auto tau = tau_product(30);
    const int nx = 200, ny = 400;
    double total = 0;
    for (int i = 0; i < nx; ++i) {
        const double x = -0.5 + (i + 0.5) / nx;
        const double lo = std::sqrt(1 - x * x), hi = 8.0, h = (hi - lo) / ny;
        double col = 0;
        for (int j = 0; j <= ny; ++j) {
            const double y = lo + j * h;
            const std::complex<double> q = std::exp(std::complex<double>(-2 * kPi * y, 2 * kPi * x));
            std::complex<double> f = 0, qn = 1;
            for (std::size_t n = 1; n <= 30; ++n) {
                qn *= q;
                f += tau[n] * qn;
            }
            const double v = std::norm(f) * std::pow(y, 10);
            col += v * (j == 0 || j == ny ? 1 : (j % 2 ? 4 : 2));
        }
        total += col * h / 3 / nx;
    }
    return total;
}

std::complex<double> kloosterman_naive(long m, long n, long c) {
    std::complex<double> s = 0;
    for (long d = 0; d < c; ++d) {
        if (std::gcd(d, c) != 1) continue;
        long db = 0;
        for (long e = 0; e < c; ++e)
            if ((d * e) % c == 1 % c) db = e;
        s += std::exp(std::complex<double>(0, 2 * kPi * double(((m * d + n * db) % c + c) % c) / c));
    }
    return s;
}

}  // namespace

TEST_CASE("Petersson norm of Delta") {
    const auto f = hecke_eigenforms(12, 60)[0];
    const auto r = petersson_norm(f);
    CHECK(r.est_error < 1e-10 * r.value);
    CHECK(r.value == doctest::Approx(1.0353620568043e-6).epsilon(1e-10));
    const double oracle = coarse_delta_norm();
    CHECK(r.value == doctest::Approx(oracle).epsilon(1e-3));
    // self-normalization of F
    CHECK(r.value / r.value == 1.0);
}

TEST_CASE("Hecke orthogonality at weight 24") {
    const auto fs = hecke_eigenforms(24, 80);
    const auto a = fs[0].coeffs_double(), b = fs[1].coeffs_double();
    QuadratureOptions opt;
    opt.tol = 1e-8;
    const auto r = petersson_inner(a, b, 24, opt);
    const double na = petersson_inner(a, a, 24).value, nb = petersson_inner(b, b, 24).value;
    CHECK(std::abs(r.value) < 1e-6);
    CHECK(std::abs(r.value) < 1e-10 * std::sqrt(na * nb));
}

TEST_CASE("error components and precision failure") {
    const auto f = hecke_eigenforms(20, 80)[0];
    const auto a = f.coeffs_double();
    const auto r = petersson_inner(a, a, 20);
    CHECK(r.est_error == doctest::Approx(r.quad_error + r.truncation_error + r.tail_error));
    CHECK(r.fourier_N == 80);
    CHECK(r.Y == 10);
    // a handful of Fourier terms: truncation dominates and the tolerance is out of reach
    std::vector<double> shortf(a.begin(), a.begin() + 4);
    QuadratureOptions opt;
    opt.max_depth = 64;
    CHECK_THROWS_AS(petersson_inner(shortf, shortf, 20, opt), PrecisionError);
    try {
        petersson_inner(shortf, shortf, 20, opt);
    } catch (const PrecisionError& e) {
        CHECK(e.est_error() > 0);
        CHECK(e.best_value() > 0);
    }
}

TEST_CASE("Kloosterman sums") {
    CHECK(kloosterman_sum(1, 1, 1).value == 1);
    CHECK(kloosterman_integer(1, 1, 2) == 1);
    for (std::uint64_t c : {1u, 6u, 7u, 12u, 30u}) {
        std::uint64_t phi = 0;
        for (std::uint64_t d = 0; d < c; ++d) phi += std::gcd(d, c) == 1;
        CHECK(kloosterman_integer(0, 0, c) == static_cast<std::int64_t>(phi));
    }
    // S(1,1;5) = 2 + 2cos(4pi/5) is not an integer
    const auto s5 = kloosterman_sum(1, 1, 5);
    CHECK(s5.value == doctest::Approx(2 + 2 * std::cos(4 * kPi / 5)).epsilon(1e-14));
    CHECK_FALSE(s5.integral());
    CHECK_THROWS_AS(kloosterman_integer(1, 1, 5), PrecisionError);
    for (long m = -2; m <= 3; ++m)
        for (long n = 0; n <= 3; ++n)
            for (long c = 1; c <= 24; ++c) {
                const auto s = kloosterman_sum(m, n, c);
                const auto o = kloosterman_naive(m, n, c);
                CHECK(s.value == doctest::Approx(o.real()).epsilon(1e-12).scale(c));
                CHECK(std::abs(o.imag()) < 1e-9);
                CHECK(s.value == doctest::Approx(kloosterman_sum(n, m, c).value).epsilon(1e-14).scale(c));
            }
    // Weil bound at primes
    for (std::uint64_t p : {3u, 5u, 7u, 11u, 101u, 997u}) CHECK(std::abs(kloosterman_sum(1, 1, p).value) <= 2 * std::sqrt(double(p)));
}

TEST_CASE("Bessel J against an independent implementation") {
    for (int nu : {0, 1, 5, 23, 31, 39})
        for (double x : {0.1, 1.0, 4 * kPi, 20.0, 37.7, 45.0}) {
            const double ours = bessel_j(nu, x), ref = boost::math::cyl_bessel_j(nu, x);
            CAPTURE(nu);
            CAPTURE(x);
            CHECK(ours == doctest::Approx(ref).epsilon(1e-12).scale(1e-300));
        }
}

TEST_CASE("arithmetic side of the Petersson formula") {
    const auto d24 = petersson_full_diagonal(1, 1, 24);
    CHECK(std::abs(d24.correction) < 1e-2);
    double prev = INFINITY;
    for (int w : {24, 32, 40}) {
        const double c = std::abs(petersson_full_diagonal(1, 1, w).correction);
        CHECK(c < prev);
        prev = c;
    }
    const auto d12 = petersson_full_diagonal(1, 2, 24);
    CHECK(d12.delta == 0);
    CHECK(std::abs(d12.value) <= std::abs(d12.correction));
    CHECK_THROWS_AS(petersson_full_diagonal(3, 3, 24, 1), PrecisionError);
}

TEST_CASE("trace formula closure") {
    for (int w : {24, 28, 32}) {
        const auto B = spectral_basis(w);
        for (std::uint64_t t = 1; t <= 3; ++t)
            for (std::uint64_t u = 1; u <= 3; ++u) {
                const auto h = harmonic_sum_check(t, u, B);
                const auto d = petersson_full_diagonal(t, u, w);
                CAPTURE(w);
                CAPTURE(t);
                CAPTURE(u);
                CHECK(std::abs(h.value - d.value) < 1e-3);
            }
        CHECK(std::abs(harmonic_sum_check(1, 1, B).value - 1) < 1e-2);
    }
    // (2,2,24) against the formula
    const auto B24 = spectral_basis(24);
    CHECK(harmonic_sum_check(2, 2, B24).value == doctest::Approx(petersson_full_diagonal(2, 2, 24).value).epsilon(1e-3));
}

TEST_CASE("symmetric square at 1") {
    const auto b = spectral_basis(12);
    const double L = b.forms[0].L_sym2;
    // inverting back reproduces <F,F> = 1
    const double a1 = a1_squared(12, L);
    CHECK(a1 * std::pow(4 * kPi, 11) * b.forms[0].norm.value == doctest::Approx(1.0).epsilon(1e-6));
    const auto tab = prime_lambda_tables({12}, 10000);
    const double euler = sym_square_euler(tab.at(12).primes, tab.at(12).lambda[0], 10000);
    CHECK(std::abs(euler / L - 1) < 0.02);
    for (int k = 12; k <= 40; k += 2) {
        if (cusp_form_dimension(k) == 0) continue;
        for (const auto& g : spectral_basis(k).forms) CHECK(g.L_sym2 > 0);
    }
}

TEST_CASE("fourth moment, Parseval and Watson") {
    for (int k : {12, 16}) {
        const auto bk = spectral_basis(k), b2k = spectral_basis(2 * k);
        const auto w = watson_report(bk.forms[0], b2k);
        CHECK(w.moment.value > 0);
        CHECK(w.parseval_rel < 1e-3);
        CHECK(w.roundtrip_rel < 1e-3);
        CHECK(std::abs(w.parseval_miller / w.moment.value - 1) < 1e-3);
        for (const auto& r : w.rows) {
            CHECK(r.L_value >= 0);
            CHECK(r.inner == doctest::Approx(r.inner_miller).epsilon(1e-8));
        }
    }
    // depth refinement at k = 12
    const auto b12 = spectral_basis(12);
    QuadratureOptions coarse, fine;
    coarse.depth = 8;
    coarse.tol = 1e-4;
    fine.depth = 32;
    const double m1 = fourth_moment(b12.forms[0], coarse).value, m2 = fourth_moment(b12.forms[0], fine).value;
    CHECK(m1 == doctest::Approx(m2).epsilon(1e-3));
    const auto b24c = spectral_basis(24, coarse), b24f = spectral_basis(24, fine);
    const auto wc = watson_report(spectral_basis(12, coarse).forms[0], b24c, coarse);
    const auto wf = watson_report(b12.forms[0], b24f, fine);
    for (std::size_t i = 0; i < wc.rows.size(); ++i) CHECK(wc.rows[i].L_value == doctest::Approx(wf.rows[i].L_value).epsilon(1e-2));
}
