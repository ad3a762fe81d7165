#include "fmlab/modforms/kloosterman.hpp"

#include "fmlab/errors.hpp"

#include <boost/math/constants/constants.hpp>

#include <cmath>
#include <numbers>
#include <numeric>
#include <tuple>

namespace fmlab::mf {

namespace {

std::uint64_t mod_c(std::int64_t a, std::uint64_t c) {
    const auto r = a % static_cast<std::int64_t>(c);
    return static_cast<std::uint64_t>(r < 0 ? r + static_cast<std::int64_t>(c) : r);
}

// inverse of d modulo c, gcd(d, c) = 1
std::uint64_t inverse_mod(std::uint64_t d, std::uint64_t c) {
    std::int64_t r0 = static_cast<std::int64_t>(c), r1 = static_cast<std::int64_t>(d % c);
    std::int64_t s0 = 0, s1 = 1;
    while (r1 != 0) {
        const std::int64_t q = r0 / r1;
        std::tie(r0, r1) = std::make_pair(r1, r0 - q * r1);
        std::tie(s0, s1) = std::make_pair(s1, s0 - q * s1);
    }
    return mod_c(s0, c);
}

}  // namespace

nlohmann::json KloostermanSum::to_json() const {
    return {{"m", m}, {"n", n}, {"c", c}, {"value", value}, {"nearest", nearest}, {"residual", residual},
            {"integral", integral()}};
}

KloostermanSum kloosterman_sum(std::int64_t m, std::int64_t n, std::uint64_t c) {
    if (c == 0) throw DomainError("kloosterman_sum: c must be >= 1");
    KloostermanSum s;
    s.m = m;
    s.n = n;
    s.c = c;
    s.counts.assign(c, 0);
    const std::uint64_t mm = mod_c(m, c), nn = mod_c(n, c);
    for (std::uint64_t d = 0; d < c; ++d) {
        if (std::gcd(d, c) != 1) continue;
        const std::uint64_t dbar = c == 1 ? 0 : inverse_mod(d, c);
        const unsigned __int128 r = static_cast<unsigned __int128>(mm) * d + static_cast<unsigned __int128>(nn) * dbar;
        ++s.counts[static_cast<std::uint64_t>(r % c)];
    }
    const HighFloat two_pi = 2 * boost::math::constants::pi<HighFloat>();
    HighFloat v = 0;
    for (std::uint64_t r = 0; r < c; ++r)
        if (s.counts[r]) v += HighFloat(s.counts[r]) * cos(two_pi * r / c);
    s.value_hp = v;
    s.value = to_double(v);
    s.nearest = static_cast<std::int64_t>(std::llround(s.value));
    s.residual = std::abs(s.value - static_cast<double>(s.nearest));
    return s;
}

std::int64_t kloosterman_integer(std::int64_t m, std::int64_t n, std::uint64_t c) {
    const auto s = kloosterman_sum(m, n, c);
    if (!s.integral()) throw PrecisionError("kloosterman_integer: S(m,n;c) is not an integer", s.value, s.residual);
    return s.nearest;
}

HighFloat bessel_j(int nu, const HighFloat& x) {
    if (nu < 0) throw DomainError("bessel_j: negative order");
    const HighFloat h = x / 2, h2 = h * h;
    // first term (x/2)^nu / nu!
    HighFloat term = 1;
    for (int i = 1; i <= nu; ++i) term *= h / i;
    HighFloat sum = term, scale = abs(term);
    const HighFloat eps("1e-40");
    for (int m = 1; m < 100000; ++m) {
        term *= -h2 / (HighFloat(m) * (m + nu));
        sum += term;
        scale = std::max(scale, HighFloat(abs(term)));
        if (m > h && abs(term) < eps * scale) return sum;
    }
    throw PrecisionError("bessel_j: series did not converge", to_double(sum), 0);
}

double bessel_j(int nu, double x) { return to_double(bessel_j(nu, HighFloat(x))); }

nlohmann::json DiagonalResult::to_json() const {
    return {{"t", t},
            {"u", u},
            {"weight", weight},
            {"c_max", c_max},
            {"delta", delta},
            {"correction", correction},
            {"value", value},
            {"tail_bound", tail_bound},
            {"terms", terms}};
}

DiagonalResult petersson_full_diagonal(std::uint64_t t, std::uint64_t u, int weight, std::uint64_t c_max,
                                       double tail_tol) {
    if (t == 0 || u == 0) throw DomainError("petersson_full_diagonal: t, u must be >= 1");
    if (weight % 2 || weight < 4) throw DomainError("petersson_full_diagonal: weight must be even and >= 4");
    if (c_max == 0) throw DomainError("petersson_full_diagonal: c_max must be >= 1");
    const HighFloat pi = boost::math::constants::pi<HighFloat>();
    const int nu = weight - 1;
    const HighFloat X = 4 * pi * sqrt(HighFloat(t) * HighFloat(u));
    const int sign = (weight / 2) % 2 ? -1 : 1;  // i^{-w} = (-1)^{w/2}
    DiagonalResult r;
    r.t = t;
    r.u = u;
    r.weight = weight;
    r.c_max = c_max;
    r.delta = t == u ? 1.0 : 0.0;
    HighFloat corr = 0;
    for (std::uint64_t c = 1; c <= c_max; ++c) {
        const auto S = kloosterman_sum(static_cast<std::int64_t>(t), static_cast<std::int64_t>(u), c);
        const HighFloat term = 2 * pi * sign * S.value_hp / c * bessel_j(nu, X / c);
        r.terms.push_back(to_double(term));
        corr += term;
    }
    r.correction = to_double(corr);
    r.value = r.delta + r.correction;
    // |S| <= c and |J_nu(y)| <= (y/2)^nu / nu!, then sum_{c > C} c^{-nu} <= C^{1-nu}/(nu-1)
    const double lg = nu * std::log(to_double(X) / 2) - std::lgamma(nu + 1.0) + (1 - nu) * std::log(double(c_max)) -
                      std::log(nu - 1.0);
    r.tail_bound = 2 * std::numbers::pi * std::exp(lg);
    if (r.tail_bound > tail_tol)
        throw PrecisionError("petersson_full_diagonal: c_max too small, tail bound above tolerance", r.value, r.tail_bound);
    return r;
}

}  // namespace fmlab::mf
