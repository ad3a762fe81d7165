#include "fmlab/satotate/model.hpp"

#include "fmlab/errors.hpp"
#include "fmlab/output.hpp"
#include "fmlab/parallel.hpp"
#include "fmlab/primes.hpp"
#include "fmlab/quadrature.hpp"
#include "fmlab/simd/kernels.hpp"

#include <json.hpp>

#include <cmath>
#include <numbers>

namespace fmlab::satotate {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

double ipow(double x, int n) {
    double r = 1;
    for (int i = 0; i < n; ++i) r *= x;
    return r;
}

// (2/pi) int_0^{pi/2} sin^2 t [F(2cos t) + F(-2cos t)] dt
template <class F>
double folded_expectation(F&& f) {
    auto integrand = [&](double t) {
        const double s = std::sin(t), l = 2 * std::cos(t);
        return s * s * (f(l) + f(-l));
    };
    return 2 / std::numbers::pi * integrate_adaptive(integrand, 0.0, std::numbers::pi / 2, 1e-14, 0.0, 24).value;
}
}  // namespace

std::uint64_t splitmix64(std::uint64_t x) {
    x += kGolden;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream_id)
    : key_(splitmix64(seed ^ splitmix64(stream_id + kGolden))) {}

std::uint64_t CounterRng::next_u64() { return splitmix64(key_ + (counter_++) * kGolden); }

double CounterRng::next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double sample_lambda(CounterRng& rng) {
    for (;;) {
        const double t = std::numbers::pi * rng.next_double();
        const double s = std::sin(t);
        if (rng.next_double() < s * s) return 2 * std::cos(t);
    }
}

double st_moment_exact(int power) {
    if (power < 0 || power > 40) throw DomainError("st_moment_exact: power outside [0, 40]");
    if (power % 2) return 0.0;
    return folded_expectation([power](double l) { return ipow(l, power); });
}

double mixed_moment(int a, int b) {
    if (a < 0 || b < 0 || a > 40 || b > 40) throw DomainError("mixed_moment: powers outside [0, 40]");
    if (a % 2) return 0.0;
    if (a == 0 && b == 0) return 1.0;
    return folded_expectation([a, b](double l) { return ipow(l, a) * ipow(l * l - 1, b); });
}

double exp_moment_exact(double a) {
    if (!(std::fabs(a) <= 50)) throw DomainError("exp_moment_exact: |a| > 50");
    if (a == 0) return 1.0;
    return folded_expectation([a](double l) { return std::exp(a * l); });
}

double model_expectation_product(const std::vector<MonomialFactor>& factors) {
    double v = 1;
    for (const auto& f : factors) {
        v *= mixed_moment(f.lambda_power, f.square_power);
        if (v == 0) return 0;
    }
    return v;
}

double linear_form_moment(const std::vector<double>& c, int n, bool squares) {
    if (n < 0 || n > 40) throw DomainError("linear_form_moment: n outside [0, 40]");
    std::vector<double> m(n + 1), inv_fact(n + 1);
    for (int j = 0; j <= n; ++j) m[j] = squares ? mixed_moment(0, j) : st_moment_exact(j);
    inv_fact[0] = 1;
    for (int j = 1; j <= n; ++j) inv_fact[j] = inv_fact[j - 1] / j;
    std::vector<double> poly(n + 1, 0.0);
    poly[0] = 1;
    for (double cp : c) {
        std::vector<double> factor(n + 1);
        double pw = 1;
        for (int j = 0; j <= n; ++j) {
            factor[j] = pw * m[j] * inv_fact[j];
            pw *= cp;
        }
        std::vector<double> next(n + 1, 0.0);
        for (int i = 0; i <= n; ++i)
            if (poly[i] != 0)
                for (int j = 0; i + j <= n; ++j) next[i + j] += poly[i] * factor[j];
        poly.swap(next);
    }
    return poly[n] / inv_fact[n];
}

FamilySample sample_family(double X, std::size_t n_forms, std::uint64_t seed, unsigned threads) {
    if (!(X >= 2)) throw DomainError("sample_family: X must be >= 2");
    if (n_forms < 1) throw DomainError("sample_family: need at least one form");
    FamilySample s;
    s.primes = primes_up_to(static_cast<std::uint64_t>(std::floor(X)));
    s.n_forms = n_forms;
    s.seed = seed;
    s.X = X;
    const std::size_t np = s.primes.size();
    s.values.resize(n_forms * np);
    // chunked so each task amortises thread dispatch; rows are independent of the chunking
    const std::size_t chunk = 4096, nchunks = (n_forms + chunk - 1) / chunk;
    parallel_for(nchunks, [&](std::size_t ci) {
        const std::size_t hi = std::min(n_forms, (ci + 1) * chunk);
        for (std::size_t f = ci * chunk; f < hi; ++f) {
            CounterRng rng(seed, f);
            double* row = s.values.data() + f * np;
            for (std::size_t j = 0; j < np; ++j) row[j] = sample_lambda(rng);
        }
    }, threads);
    return s;
}

void write_family_csv(const FamilySample& s, std::ostream& out) {
    for (std::size_t j = 0; j < s.primes.size(); ++j) out << (j ? "," : "") << s.primes[j];
    out << '\n';
    for (std::size_t f = 0; f < s.n_forms; ++f) {
        const double* r = s.row(f);
        for (std::size_t j = 0; j < s.primes.size(); ++j) out << (j ? "," : "") << format_real(r[j]);
        out << '\n';
    }
}

std::string family_metadata_json(const FamilySample& s) {
    nlohmann::json j;
    j["seed"] = s.seed;
    j["X"] = s.X;
    j["n_forms"] = s.n_forms;
    j["n_primes"] = s.primes.size();
    j["sampler_id"] = s.sampler_id;
    return dump_json(j);
}

bool MonteCarloEstimate::within(double exact, double k) const {
    return std::fabs(mean - exact) <= k * std_error;
}

MonteCarloEstimate mc_mean(const std::vector<double>& samples) {
    auto m = mc_power_moments(samples, 1);
    return m[1];
}

std::vector<MonteCarloEstimate> mc_power_moments(const std::vector<double>& samples, int max_power) {
    if (max_power < 0 || max_power > 20) throw DomainError("mc_power_moments: max_power outside [0, 20]");
    std::vector<double> sums(2 * max_power + 1, 0.0);
    simd::power_sums(samples.data(), samples.size(), 2 * max_power, sums.data());
    const double n = static_cast<double>(samples.size());
    std::vector<MonteCarloEstimate> out(max_power + 1);
    for (int j = 0; j <= max_power; ++j) {
        const double mean = sums[j] / n, second = sums[2 * j] / n;
        const double var = std::max(0.0, second - mean * mean) * n / std::max(1.0, n - 1);
        out[j] = {mean, std::sqrt(var / n), samples.size()};
    }
    return out;
}

}  // namespace fmlab::satotate
