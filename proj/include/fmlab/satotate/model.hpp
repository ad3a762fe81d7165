#pragma once
// Sato-Tate model for lambda_g(p): sampling, exact moments by quadrature, Monte Carlo helpers.
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace fmlab::satotate {

/// Counter-based generator: output i of stream (seed, id) is splitmix64(key + i * golden),
/// key = splitmix64(seed ^ splitmix64(id + golden)). Platform independent.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream_id);
    std::uint64_t next_u64();
    /// Uniform on [0, 1) with 53 random bits.
    double next_double();

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

std::uint64_t splitmix64(std::uint64_t x);

inline constexpr const char* kSamplerId = "splitmix64-counter+rejection-sin2-v1";

/// 2cos(theta), theta with density (2/pi) sin^2 on [0, pi]; rejection from the uniform envelope.
double sample_lambda(CounterRng& rng);

/// E[lambda^power] by adaptive Gauss-Legendre on the folded integrand (odd powers are exactly 0).
double st_moment_exact(int power);
/// E[lambda^a (lambda^2 - 1)^b].
double mixed_moment(int a, int b);
/// E[exp(a lambda)], |a| <= 50.
double exp_moment_exact(double a);

struct MonomialFactor {
    int lambda_power;   // power on lambda(p)
    int square_power;   // power on lambda(p^2) = lambda(p)^2 - 1
};
/// Product over distinct primes of mixed moments; each factor is one prime.
double model_expectation_product(const std::vector<MonomialFactor>& factors);

/// E[(sum_p c_p X_p)^n] for independent Sato-Tate lambda_p, by convolving per-prime
/// moment generating polynomials truncated at degree n. X_p = lambda_p, or lambda_p^2 - 1
/// when `squares` is set.
double linear_form_moment(const std::vector<double>& c, int n, bool squares = false);

struct FamilySample {
    std::vector<std::uint32_t> primes;
    std::size_t n_forms = 0;
    std::vector<double> values;  // row-major n_forms x primes.size()
    std::uint64_t seed = 0;
    double X = 0;
    std::string sampler_id = kSamplerId;

    double at(std::size_t form, std::size_t prime_index) const {
        return values[form * primes.size() + prime_index];
    }
    const double* row(std::size_t form) const { return values.data() + form * primes.size(); }
};

/// Form f draws its row from CounterRng(seed, f), primes in increasing order.
FamilySample sample_family(double X, std::size_t n_forms, std::uint64_t seed, unsigned threads = 0);

void write_family_csv(const FamilySample& s, std::ostream& out);
std::string family_metadata_json(const FamilySample& s);

struct MonteCarloEstimate {
    double mean = 0;
    double std_error = 0;
    std::size_t n = 0;
    bool within(double exact, double k = 3.0) const;
};

MonteCarloEstimate mc_mean(const std::vector<double>& samples);
/// Estimates of E[x^j] for j = 0..max_power from one pass of power sums up to 2*max_power.
std::vector<MonteCarloEstimate> mc_power_moments(const std::vector<double>& samples, int max_power);

}  // namespace fmlab::satotate
