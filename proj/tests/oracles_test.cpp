#include "fmlab/oracles/petersson_oracles.hpp"
#include "fmlab/errors.hpp"
#include "fmlab/hecke/combinatorics.hpp"
#include "fmlab/satotate/model.hpp"

#include <doctest.h>

#include <cmath>

using namespace fmlab;
using namespace fmlab::oracles;

namespace {

// Unpruned ordered-tuple sum; h evaluated on the integer product through the factorization API.
double naive_tuple_sum(const WeightedWindow& w, int n, bool second) {
    const std::size_t P = w.primes.size();
    std::vector<std::size_t> idx(n, 0);
    double total = 0;
    if (P == 0) return n == 0 ? 1 : 0;
    for (;;) {
        double prod = 1;
        std::uint64_t N = 1;
        for (int i = 0; i < n; ++i) {
            const double p = w.primes[idx[i]];
            prod *= second ? w.weights[idx[i]] / p : w.weights[idx[i]] / std::sqrt(p);
            N *= w.primes[idx[i]];
        }
        auto f = hecke::PrimeFactorization::of(N);
        total += prod * to_double(second ? hecke::h2(f) : hecke::h1(f));
        int k = 0;
        while (k < n && ++idx[k] == P) idx[k++] = 0;
        if (k == n) break;
    }
    return total;
}

bool close(double a, double b, double tol) { return std::fabs(a - b) <= tol * std::max({1.0, std::fabs(a), std::fabs(b)}); }

}  // namespace

TEST_CASE("combinato_sum basic values") {
    auto u = random_weights(3, 2.0);
    auto win = make_window(10, 50, u);
    CHECK(win.primes.size() == 11);
    CHECK(combinato_sum(win, 3) == 0.0);
    CHECK(combinato_sum(win, 5, EvalMode::Partition) == 0.0);
    double s = 0;
    for (std::size_t i = 0; i < win.primes.size(); ++i) s += win.weights[i] * win.weights[i] / win.primes[i];
    CHECK(close(combinato_sum(win, 2), s, 1e-14));
    CHECK(combinato_bound(win, 2) == doctest::Approx(s).epsilon(1e-15));
    CHECK(close(combinato_bound(win, 4), 3 * s * s, 1e-15));
    CHECK(close(combinato_bound(win, 6), 15 * s * s * s, 1e-15));
    CHECK_THROWS_AS(combinato_bound(win, 3), DomainError);
    auto empty = make_window(24, 28, u);
    CHECK(combinato_sum(empty, 4) == 0.0);
}

TEST_CASE("direct, partition and naive evaluations agree") {
    auto one = [](std::uint32_t) { return 1.0; };
    auto w1030 = make_window(10, 30, one);
    const double d = combinato_sum(w1030, 4, EvalMode::Direct);
    const double p = combinato_sum(w1030, 4, EvalMode::Partition);
    CHECK(close(d, p, 1e-12));
    CHECK(close(d, naive_tuple_sum(w1030, 4, false), 1e-12));
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        auto win = make_window(2, 20, random_weights(seed, 2.0));
        for (int n : {2, 4, 6}) {
            const double a = combinato_sum(win, n, EvalMode::Direct);
            CHECK(close(a, combinato_sum(win, n, EvalMode::Partition), 1e-12));
            CHECK(close(a, naive_tuple_sum(win, n, false), 1e-12));
            CHECK(close(a, to_double(combinato_sum_exact(win, n)), 1e-12));
        }
        auto sq = dyadic_window(3, random_weights(seed + 100, 2.0));
        for (int M : {1, 2, 3}) {
            const double a = combinato2_sum(sq, M, EvalMode::Direct);
            CHECK(close(a, combinato2_sum(sq, M, EvalMode::Partition), 1e-12));
            CHECK(close(a, naive_tuple_sum(sq, 2 * M, true), 1e-12));
        }
    }
}

TEST_CASE("combinato2 values and bound") {
    auto single = make_window(4, 6, [](std::uint32_t) { return 1.5; });  // only p = 5
    CHECK(close(combinato2_sum(single, 1), 1.5 * 1.5 / 25.0, 1e-15));
    auto one = [](std::uint32_t) { return 1.0; };
    auto w5 = dyadic_window(5, one);
    CHECK(close(combinato2_sum(w5, 2, EvalMode::Direct), combinato2_sum(w5, 2, EvalMode::Partition), 1e-12));
    CHECK(combinato2_bound(0, 1, 1) == 144.0);
    CHECK(combinato2_bound(5, 2, 2) == doctest::Approx(972.0).epsilon(1e-15));
    const double direct = combinato2_bound(10, 1, 3);
    CHECK(std::fabs(std::log(direct) - combinato2_log_bound(10, 1, 3)) <= 1e-12 * std::fabs(std::log(direct)));
    CHECK(to_double(combinato2_bound_exact(5, 2, 2)) == 972.0);
}

TEST_CASE("gaussian main term") {
    auto u = random_weights(11, 2.0);
    auto w = make_window(20, 40, u);
    CHECK(gaussian_main_term({}, {3, 1, 0}) == 1.0);
    CHECK(gaussian_main_term({{w, 0}}, {3, 1, 0}) == 1.0);
    CHECK(gaussian_main_term({{w, 2}}, {3, 1, 0}) == doctest::Approx(combinato_bound(w, 2)).epsilon(1e-15));
    CHECK(gaussian_main_term({{w, 2}, {w, 3}}, {3, 1, 1}) == 0.0);
}

TEST_CASE("lemma reports") {
    auto u = random_weights(5, 2.0);
    auto r2 = verify_combinato(make_window(10, 50, u), 2);
    CHECK(r2.pass);
    CHECK(r2.slack == 0.0);
    auto r4 = verify_combinato(make_window(10, 50, u), 4);
    CHECK(r4.pass);
    CHECK(r4.slack > 0);
    auto two = [](std::uint32_t) { return 2.0; };
    auto r5 = verify_combinato2(dyadic_window(5, two), 5, 2.0, 2);
    CHECK(r5.pass);
    CHECK(r5.implied_constant < 72.0);
    CHECK(r5.to_json()["lemma"] == "combinato2");

    KeyValueConfig cfg = KeyValueConfig::parse("x1 = 10\nx2 = 50\nn = 4\nweights = random\nseed = 5\n");
    auto rc = verify_lemma_instance("combinato", cfg);
    CHECK(rc.lhs == r4.lhs);
    CHECK_THROWS_AS(verify_lemma_instance("nope", cfg), DomainError);
    KeyValueConfig g = KeyValueConfig::parse(
        "edges = 20, 40, 80\nn = 2, 4\nm = 3\nM = 1\nu_seed = 3\nw_weights = const\nw_value = 1\n");
    auto rg = verify_lemma_instance("gaussian", g);
    CHECK(rg.pass);
}

TEST_CASE("model equivalence: tuple sums are Sato-Tate expectations") {
    for (std::uint64_t seed = 20; seed < 30; ++seed) {
        auto win = make_window(10, 80, random_weights(seed, 2.0));
        std::vector<double> c;
        for (std::size_t i = 0; i < win.primes.size(); ++i) c.push_back(win.weights[i] / std::sqrt(double(win.primes[i])));
        for (int n = 1; n <= 6; ++n)
            CHECK(close(combinato_sum(win, n), satotate::linear_form_moment(c, n), 1e-9));
        auto sq = dyadic_window(4, random_weights(seed, 2.0));
        std::vector<double> d;
        for (std::size_t i = 0; i < sq.primes.size(); ++i) d.push_back(sq.weights[i] / sq.primes[i]);
        for (int M = 1; M <= 3; ++M)
            CHECK(close(combinato2_sum(sq, M), satotate::linear_form_moment(d, 2 * M, true), 1e-9));
    }
}
