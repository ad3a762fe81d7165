#include "fmlab/config.hpp"
#include "fmlab/errors.hpp"
#include "fmlab/output.hpp"
#include "fmlab/parallel.hpp"
#include "fmlab/primes.hpp"
#include "fmlab/quadrature.hpp"

#include <doctest.h>

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <numbers>

using namespace fmlab;

TEST_CASE("Gauss-Legendre rules") {
    for (int n : {2, 5, 20, 64}) {
        const auto& g = gauss_legendre(n);
        double s = 0;
        for (double w : g.weights) s += w;
        CHECK(s == doctest::Approx(2.0).epsilon(1e-14));
        // exact for degree 2n - 1
        double m = 0;
        for (int i = 0; i < n; ++i) m += g.weights[i] * std::pow(g.nodes[i], 2 * n - 2);
        CHECK(m == doctest::Approx(2.0 / (2 * n - 1)).epsilon(1e-12));
    }
    const auto r = integrate_adaptive([](double x) { return std::sqrt(x); }, 0, 1);
    CHECK(r.value == doctest::Approx(2.0 / 3).epsilon(1e-12));
    const auto s = integrate_adaptive([](double x) { return std::sin(x) * std::sin(x); }, 0, std::numbers::pi);
    CHECK(s.value == doctest::Approx(std::numbers::pi / 2).epsilon(1e-13));
}

TEST_CASE("primes") {
    CHECK(primes_up_to(30) == std::vector<std::uint32_t>{2, 3, 5, 7, 11, 13, 17, 19, 23, 29});
    CHECK(primes_up_to(1000000).size() == 78498);
    CHECK(primes_in_window(10, 20) == std::vector<std::uint32_t>{11, 13, 17, 19});
    CHECK(is_prime(2305843009213693951ULL));
    CHECK_FALSE(is_prime(3215031751ULL));
    const auto f = factorize(360);
    CHECK(f.size() == 3);
    CHECK(f[0] == std::pair<std::uint64_t, int>{2, 3});
}

TEST_CASE("key=value config") {
    auto c = KeyValueConfig::parse("# comment\na = 1.5\n b=2 # trailing\nlist = 1, 2.5,3\n\nname = x y\n");
    CHECK(c.get_double("a", 0) == 1.5);
    CHECK(c.get_int("b", 0) == 2);
    CHECK(c.get_double_list("list") == std::vector<double>{1, 2.5, 3});
    CHECK(c.get_string("name", "") == "x y");
    CHECK(c.get_double("missing", 7) == 7);
    CHECK(c.unused_keys().empty());
    CHECK_THROWS_AS(c.require_double("missing"), ConfigError);
    CHECK_THROWS_AS(KeyValueConfig::parse("novalue\n"), ConfigError);
    CHECK_THROWS_AS(KeyValueConfig::parse("a=1\na=2\n"), ConfigError);
    auto bad = KeyValueConfig::parse("a = 1.5x\n");
    CHECK_THROWS_AS(bad.get_double("a", 0), ConfigError);
    CHECK_THROWS_AS(c.get_int("a", 0), ConfigError);
    auto u = KeyValueConfig::parse("used = 1\nstray = 2\n");
    u.get_int("used", 0);
    CHECK(u.unused_keys() == std::vector<std::string>{"stray"});
    CHECK_THROWS_AS(KeyValueConfig::load("/nonexistent/file.cfg"), ConfigError);
}

TEST_CASE("17-digit output") {
    CHECK(format_real(0.1) == "0.10000000000000001");
    CHECK(format_real(INFINITY) == "inf");
    CHECK(format_real(-INFINITY) == "-inf");
    CHECK(format_real(NAN) == "nan");
    CHECK(std::stod(format_real(1.0 / 3)) == 1.0 / 3);
    nlohmann::json j{{"b", 1.0 / 3}, {"a", 2}};
    const auto s = dump_json(j);
    CHECK(s.find("0.33333333333333331") != std::string::npos);
    CHECK(s.find("\"a\"") < s.find("\"b\""));
    CsvWriter w({"x", "y"});
    w.cell(0.5).cell("s");
    w.end_row();
    CHECK(w.str() == "x,y\n0.5,s\n");
}

TEST_CASE("output directory resolution") {
    CHECK(output_directory("/tmp/explicit") == std::filesystem::path("/tmp/explicit"));
    setenv("FMLAB_OUTPUT_DIR", "/tmp/from_env", 1);
    CHECK(output_directory() == std::filesystem::path("/tmp/from_env"));
    unsetenv("FMLAB_OUTPUT_DIR");
}

TEST_CASE("parallel_for covers every index once") {
    for (unsigned t : {1u, 2u, 5u}) {
        std::vector<std::atomic<int>> hits(1000);
        parallel_for(hits.size(), [&](std::size_t i) { hits[i]++; }, t);
        int bad = 0;
        for (auto& h : hits) bad += h.load() != 1;
        CHECK(bad == 0);
    }
    parallel_for(0, [](std::size_t) { FAIL("no calls expected"); });
}
