#include "fmlab/errors.hpp"
#include "fmlab/modforms/eigenforms.hpp"
#include "fmlab/modforms/qexpansion.hpp"
#include "fmlab/primes.hpp"

#include <doctest.h>

#include <cmath>

using namespace fmlab;
using namespace fmlab::mf;

namespace {

// tau(n) from the product q prod (1 - q^n)^24, independent of the E4/E6 route
std::vector<long long> tau_product(std::size_t N) {
    std::vector<long long> a(N + 1, 0);
    a[0] = 1;
    for (std::size_t n = 1; n <= N; ++n)
        for (int e = 0; e < 24; ++e)
            for (std::size_t m = N; m >= n; --m) a[m] -= a[m - n];
    std::vector<long long> t(N + 1, 0);
    for (std::size_t n = 1; n <= N; ++n) t[n] = a[n - 1];
    return t;
}

}  // namespace

TEST_CASE("weight 12 eigenform is Delta") {
    const auto forms = hecke_eigenforms(12, 60);
    REQUIRE(forms.size() == 1);
    const auto& f = forms[0];
    REQUIRE(f.rational());
    const auto t = tau_product(60);
    for (std::size_t n = 1; n <= 60; ++n) CHECK(f.exact_coeffs[n] == t[n]);
    CHECK(f.exact_coeffs[2] == -24);
    CHECK(f.exact_coeffs[3] == 252);
    CHECK(f.lambda[2] == doctest::Approx(-24 / std::pow(2.0, 5.5)).epsilon(1e-14));
    CHECK(f.lambda[2] == doctest::Approx(-0.530330).epsilon(1e-6));
    CHECK(f.t2_eigenvalue == -24);
}

TEST_CASE("characteristic polynomial against 2x2 trace/determinant") {
    IntMatrix M{{BigInt(3), BigInt(-7)}, {BigInt(11), BigInt(5)}};
    const auto cp = characteristic_polynomial(M);
    CHECK(cp[2] == 1);
    CHECK(cp[1] == -8);
    CHECK(cp[0] == 15 + 77);
}

TEST_CASE("real roots of products of known linear and quadratic factors") {
    // (x - 3)(x + 5)(x^2 - 2) = x^4 + 2x^3 - 17x^2 - 4x + 30
    const std::vector<BigInt> p{30, -4, -17, 2, 1};
    const auto r = real_roots(p);
    REQUIRE(r.size() == 4);
    CHECK(r[0] == -5);
    CHECK(abs(r[1] + sqrt(HighFloat(2))) < HighFloat("1e-55"));
    CHECK(abs(r[2] - sqrt(HighFloat(2))) < HighFloat("1e-55"));
    CHECK(r[3] == 3);
    CHECK_THROWS_AS(real_roots({1, -2, 1}), DomainError);
}

TEST_CASE("weight 24: quadratic field, dimension 2, conjugate forms") {
    const auto forms = hecke_eigenforms(24, 40);
    REQUIRE(forms.size() == 2);
    // T_2 eigenvalues 540 -+ 12 sqrt(144169)
    const HighFloat s = sqrt(HighFloat(144169));
    CHECK(abs(forms[0].t2_eigenvalue - (540 - 12 * s)) < HighFloat("1e-40"));
    CHECK(abs(forms[1].t2_eigenvalue - (540 + 12 * s)) < HighFloat("1e-40"));
    for (const auto& f : forms) {
        CHECK_FALSE(f.rational());
        CHECK(f.residual < 1e-20);
        CHECK(f.coeffs[1] == 1);
    }
    // the sum of the two conjugates is an integer combination of the Miller basis
    const auto basis = miller_basis(24, 40);
    for (std::size_t n = 1; n <= 40; ++n) {
        const HighFloat tr = forms[0].coeffs[n] + forms[1].coeffs[n];
        CHECK(abs(tr - round(tr)) < HighFloat("1e-30") * (1 + abs(tr)));
    }
}

TEST_CASE("Deligne bound and Hecke relations for all weights up to 40") {
    for (int k = 12; k <= 40; k += 2) {
        if (cusp_form_dimension(k) == 0) continue;
        for (const auto& f : hecke_eigenforms(k, 300)) {
            const auto hc = check_hecke_relations(f, 1e-10);
            CAPTURE(k);
            CHECK(hc.deligne);
            CHECK(hc.multiplicative);
            CHECK(hc.relations > 100);
        }
    }
}

TEST_CASE("Satake angles reproduce lambda(p)") {
    const auto f = hecke_eigenforms(16, 100)[0];
    for (std::size_t i = 0; i < f.primes.size(); ++i)
        CHECK(2 * std::cos(f.theta[i]) == doctest::Approx(f.lambda[f.primes[i]]).epsilon(1e-12));
}

TEST_CASE("long prime tables agree with short exact expansions") {
    const auto tables = prime_lambda_tables({12, 24}, 500);
    for (int k : {12, 24}) {
        const auto forms = hecke_eigenforms(k, 500);
        const auto& t = tables.at(k);
        REQUIRE(t.lambda.size() == forms.size());
        for (std::size_t r = 0; r < forms.size(); ++r)
            for (std::size_t i = 0; i < t.primes.size(); ++i)
                CHECK(t.lambda[r][i] == doctest::Approx(forms[r].lambda[t.primes[i]]).epsilon(1e-13));
    }
}
