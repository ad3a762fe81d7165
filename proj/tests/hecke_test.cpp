#include "fmlab/hecke/combinatorics.hpp"
#include "fmlab/errors.hpp"

#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>
#include <random>

using namespace fmlab;
using namespace fmlab::hecke;

namespace {

// lambda(p)^alpha expanded by repeated multiplication with lambda(p), using
// lambda(p) lambda(p^m) = lambda(p^{m+1}) + lambda(p^{m-1}).
std::vector<BigInt> recursion_oracle(int alpha) {
    std::vector<BigInt> c(alpha + 2, BigInt(0));
    c[0] = 1;  // lambda(p)^0
    for (int step = 0; step < alpha; ++step) {
        std::vector<BigInt> n(alpha + 2, BigInt(0));
        for (int m = 0; m <= alpha; ++m) {
            if (c[m] == 0) continue;
            n[m + 1] += c[m];
            if (m) n[m - 1] += c[m];
        }
        c = n;
    }
    c.resize(alpha + 1);
    return c;
}

// Dyck paths of semilength m, counted by brute force over all step sequences.
long long ballot_count(int m) {
    long long count = 0;
    for (unsigned long mask = 0; mask < (1ul << (2 * m)); ++mask) {
        int h = 0;
        bool ok = true;
        for (int i = 0; i < 2 * m && ok; ++i) {
            h += (mask >> i & 1) ? 1 : -1;
            ok = h >= 0;
        }
        if (ok && h == 0) ++count;
    }
    return count;
}

// E[(lambda^2-1)^beta] under (2/pi) sin^2 dtheta, by Gauss-Kronrod.
double sato_tate_square_moment(int beta) {
    auto f = [beta](double t) {
        const double l = 2 * std::cos(t);
        return std::pow(l * l - 1, beta) * std::sin(t) * std::sin(t) * 2 / std::numbers::pi;
    };
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, std::numbers::pi, 15, 1e-14);
}

}  // namespace

TEST_CASE("expand_lambda_power small cases") {
    auto e1 = expand_lambda_power(1);
    CHECK(e1.B() == 1);
    CHECK(e1.coefficient.size() == 2);
    auto e2 = expand_lambda_power(2);
    CHECK(e2.A() == 1);
    CHECK(e2.C(1) == 1);
    auto e3 = expand_lambda_power(3);
    CHECK(e3.B() == 2);
    CHECK(e3.D(1) == 1);
    auto e4 = expand_lambda_power(4);
    CHECK(e4.A() == 2);
    CHECK(e4.C(1) == 3);
    CHECK(e4.C(2) == 1);
    CHECK_THROWS_AS(expand_lambda_power(0), DomainError);
    CHECK_THROWS_AS(expand_lambda_power(kMaxPower + 1), DomainError);
    CHECK_THROWS_AS(e4.B(), DomainError);
    CHECK_THROWS_AS(e3.D(2), DomainError);
}

TEST_CASE("expansion matches Hecke recursion oracle for alpha <= 64") {
    for (int a = 1; a <= kMaxPower; ++a) {
        auto e = expand_lambda_power(a);
        auto o = recursion_oracle(a);
        REQUIRE(e.coefficient.size() == o.size());
        for (std::size_t m = 0; m < o.size(); ++m) CHECK(e.coefficient[m] == o[m]);
    }
}

TEST_CASE("Chebyshev substitution reproduces (2cos t)^alpha") {
    for (int a = 1; a <= 20; ++a) {
        auto e = expand_lambda_power(a);
        for (int g = 1; g <= 200; ++g) {
            const double t = std::numbers::pi * g / 201.0;
            std::vector<double> vals(a + 1);
            for (int m = 0; m <= a; ++m) vals[m] = std::sin((m + 1) * t) / std::sin(t);
            const double want = std::pow(2 * std::cos(t), a);
            CHECK(std::fabs(e.evaluate(vals) - want) <= 1e-10 * std::max(1.0, std::fabs(want)));
        }
    }
}

TEST_CASE("coefficient bounds and theta=0 substitution are exact up to the cap") {
    for (int a = 1; a <= kMaxPower; ++a) {
        auto e = expand_lambda_power(a);
        const BigInt two_a = BigInt(1) << a;
        BigInt sum_rest = 0, at_zero = 0;
        for (int m = 0; m <= a; ++m) at_zero += e.coefficient[m] * (m + 1);
        CHECK(at_zero == two_a);
        if (e.even()) {
            CHECK(e.A() <= two_a);
            for (int l = 1; 2 * l <= a; ++l) sum_rest += e.C(l);
            CHECK(sum_rest <= two_a);
        } else {
            CHECK(e.B() <= 2 * two_a);
            for (int l = 1; 2 * l + 1 <= a; ++l) sum_rest += e.D(l);
            CHECK(sum_rest <= 2 * two_a);
        }
    }
}

TEST_CASE("catalan against ballot enumeration") {
    CHECK(catalan(0) == 1);
    CHECK(catalan(3) == 5);
    CHECK(catalan(5) == 42);
    for (int m = 0; m <= 10; ++m) CHECK(catalan(m) == ballot_count(m));
    CHECK_THROWS_AS(catalan(65), DomainError);
}

TEST_CASE("h1 values and Catalan identity") {
    const std::uint64_t p = 7, q = 11;
    CHECK(h1(PrimeFactorization::of(p)) == 0);
    CHECK(h1(PrimeFactorization::of(p * p)) == 1);
    CHECK(h1(PrimeFactorization::of(p * p * p * p)) == 2);
    CHECK(h1(PrimeFactorization::of(p * p * p * p * q * q)) == 2);
    for (int m = 0; m <= 20; ++m) CHECK(h1_prime_power(2 * m) == catalan(m));
    for (int m = 0; m < 20; ++m) CHECK(h1_prime_power(2 * m + 1) == 0);
}

TEST_CASE("h2 values against quadrature oracle") {
    CHECK(h2(PrimeFactorization::of(5)) == 0);
    CHECK(h2(PrimeFactorization::of(25)) == 1);
    CHECK(h2(PrimeFactorization::of(125)) == 1);
    for (int b = 0; b <= 12; ++b) {
        const double want = sato_tate_square_moment(b);
        CHECK(to_double(h2_prime_power(b)) == doctest::Approx(want).epsilon(1e-9));
    }
    for (int b = 0; b <= 20; ++b) {
        BigInt h = h2_prime_power(b);
        CHECK(boost::multiprecision::abs(h) <= boost::multiprecision::pow(BigInt(3), static_cast<unsigned>(b)));
    }
}

TEST_CASE("binomial_expand_square and h1 recombination") {
    auto t1 = binomial_expand_square(1);
    REQUIRE(t1.size() == 2);
    CHECK(t1[0].sign == 1);
    CHECK(t1[0].lambda_power == 2);
    CHECK(t1[1].sign == -1);
    CHECK(t1[1].lambda_power == 0);
    auto t2 = binomial_expand_square(2);
    REQUIRE(t2.size() == 3);
    CHECK(t2[1].binomial == 2);
    CHECK(t2[1].sign == -1);
    CHECK(h1_recombine(binomial_expand_square(3)) == 1);
    for (int b = 1; b <= 20; ++b) CHECK(h1_recombine(binomial_expand_square(b)) == h2_prime_power(b));
}

TEST_CASE("h1 and h2 are multiplicative on random coprime factorizations") {
    std::mt19937_64 rng(12345);
    const std::uint64_t primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29};
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<PrimePower> a, b;
        for (auto p : primes) {
            const int which = rng() % 3;
            const int e = 1 + rng() % 6;
            if (which == 1) a.push_back({p, e});
            if (which == 2) b.push_back({p, e});
        }
        PrimeFactorization fa(a), fb(b);
        REQUIRE(fa.coprime_to(fb));
        auto ab = fa * fb;
        CHECK(h1(ab) == h1(fa) * h1(fb));
        CHECK(h2(ab) == h2(fa) * h2(fb));
    }
}

TEST_CASE("PrimeFactorization parsing and validation") {
    auto f = PrimeFactorization::parse("2^4");
    REQUIRE(f.factors().size() == 1);
    CHECK(f.factors()[0].prime == 2);
    CHECK(f.factors()[0].exponent == 4);
    CHECK(PrimeFactorization::parse("2^4*3^2").value() == 144);
    CHECK(PrimeFactorization::parse("48").value() == 48);
    CHECK(PrimeFactorization::parse("12^2").value() == 144);
    CHECK(h1(PrimeFactorization::parse("2^4")) == 2);
    CHECK_THROWS_AS(PrimeFactorization::parse("2^x"), DomainError);
    CHECK_THROWS_AS(PrimeFactorization({{4, 1}}), DomainError);
    CHECK_THROWS_AS(PrimeFactorization({{3, 1}, {2, 1}}), DomainError);
    CHECK_THROWS_AS(PrimeFactorization({{3, 0}}), DomainError);
    CHECK(PrimeFactorization::parse("1").factors().empty());
}
