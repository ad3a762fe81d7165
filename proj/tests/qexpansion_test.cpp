#include "fmlab/modforms/multimodular.hpp"
#include "fmlab/modforms/qexpansion.hpp"
#include "fmlab/errors.hpp"
#include "fmlab/primes.hpp"

#include <doctest.h>

using namespace fmlab;
using namespace fmlab::mf;

namespace {

BigInt naive_sigma(long n, unsigned r) {
    BigInt s = 0;
    for (long d = 1; d <= n; ++d)
        if (n % d == 0) s += boost::multiprecision::pow(BigInt(d), r);
    return s;
}

// q * prod_{n>=1} (1 - q^n)^24, truncated at q^N.
std::vector<BigInt> delta_product_oracle(std::size_t N) {
    std::vector<BigInt> c(N + 1, BigInt(0));
    c[0] = 1;  // running product, shifted by q later
    for (std::size_t n = 1; n <= N; ++n)
        for (int rep = 0; rep < 24; ++rep)
            for (std::size_t i = N; i >= n; --i) c[i] -= c[i - n];
    std::vector<BigInt> out(N + 1, BigInt(0));
    for (std::size_t i = 1; i <= N; ++i) out[i] = c[i - 1];
    return out;
}

// dim M_k = #{(a,b): 4a + 6b = k}; dim S_k = dim M_k - 1 for k >= 4.
int dimension_oracle(int k) {
    if (k < 4 || k % 2) return 0;
    int m = 0;
    for (int b = 0; 6 * b <= k; ++b)
        if ((k - 6 * b) % 4 == 0) ++m;
    return m - 1;
}

}  // namespace

TEST_CASE("Eisenstein series against divisor sums") {
    auto e4 = eisenstein_series(4, 30), e6 = eisenstein_series(6, 30);
    CHECK(e4.coeffs[1] == 240);
    CHECK(e6.coeffs[2] == -16632);
    for (long n = 1; n <= 30; ++n) {
        CHECK(e4.coeffs[n] == 240 * naive_sigma(n, 3));
        CHECK(e6.coeffs[n] == -504 * naive_sigma(n, 5));
    }
    CHECK((e4 * e4 * e4 - e6 * e6).coeffs[0] == 0);
    CHECK_THROWS_AS(eisenstein_series(8, 10), DomainError);
}

TEST_CASE("Delta against the product formula") {
    auto d = delta_series(200);
    auto o = delta_product_oracle(200);
    CHECK(d.coeffs[1] == 1);
    CHECK(d.coeffs[2] == -24);
    CHECK(d.coeffs[3] == 252);
    for (std::size_t n = 0; n <= 200; ++n) CHECK(d.coeffs[n] == o[n]);
    CHECK(d.is_cuspidal());
}

TEST_CASE("dimensions and Miller basis echelon form") {
    for (int k = 0; k <= 80; k += 2) CHECK(cusp_form_dimension(k) == (k >= 12 ? dimension_oracle(k) : 0));
    CHECK(cusp_form_dimension(24) == 2);
    CHECK(miller_basis(14, 40).empty());
    CHECK_THROWS_AS(miller_basis(24, 10), DomainError);
    CHECK_THROWS_AS(miller_basis(25, 40), DomainError);
    auto b12 = miller_basis(12, 40);
    REQUIRE(b12.size() == 1);
    CHECK(b12[0].coeffs[2] == -24);
    for (int k = 12; k <= 60; k += 2) {
        auto b = miller_basis(k, 60);
        const int d = cusp_form_dimension(k);
        REQUIRE(static_cast<int>(b.size()) == d);
        for (int i = 0; i < d; ++i) {
            CHECK(b[i].coeffs[0] == 0);
            for (int j = 1; j <= d; ++j) CHECK(b[i].coeffs[j] == (i + 1 == j ? 1 : 0));
        }
    }
}

TEST_CASE("q-expansion arithmetic respects truncation") {
    auto a = eisenstein_series(4, 10), b = eisenstein_series(4, 20);
    CHECK((a * b).N() == 10);
    CHECK((a + b).N() == 10);
    CHECK(divide_exact(scale(a, 7), 7).coeffs == a.coeffs);
    CHECK(a.to_json()["coeffs"][1] == "240");
}

TEST_CASE("NTT product matches schoolbook") {
    auto primes = ntt_primes(2);
    REQUIRE(primes.size() == 2);
    for (auto pr : primes) CHECK(is_prime(pr.p));
    std::vector<std::uint64_t> a(100), b(100);
    for (int i = 0; i < 100; ++i) {
        a[i] = (i * 7919 + 3) % 1000;
        b[i] = (i * i + 11) % 977;
    }
    auto c = ntt_multiply_mod(a, b, primes[0]);
    for (int n = 0; n < 100; ++n) {
        unsigned __int128 s = 0;
        for (int i = 0; i <= n; ++i) s += static_cast<unsigned __int128>(a[i]) * b[n - i];
        CHECK(c[n] == static_cast<std::uint64_t>(s % primes[0].p));
    }
}

TEST_CASE("multi-modular basis equals exact basis") {
    const std::size_t N = 300;
    std::vector<std::size_t> idx;
    for (std::size_t n = 0; n <= N; n += 7) idx.push_back(n);
    idx.push_back(N);
    auto lb = long_miller_basis({12, 24, 38, 40}, N, idx);
    for (int k : {12, 24, 38, 40}) {
        auto exact = miller_basis(k, N);
        const auto& v = lb.at(k);
        REQUIRE(v.values.size() == exact.size());
        for (std::size_t i = 0; i < exact.size(); ++i)
            for (std::size_t t = 0; t < idx.size(); ++t) CHECK(v.values[i][t] == exact[i].coeffs[idx[t]]);
    }
}
