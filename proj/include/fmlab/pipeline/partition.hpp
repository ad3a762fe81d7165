#pragma once
// beta-partition of the prime range and the coefficient systems u_{f,j}, w_{f,j}.
#include "fmlab/bigint.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <vector>

namespace fmlab::pipeline {

constexpr double kDefinitionThresholdExponent = 1e4;  // beta_i <= e^{-10000} in the definition of I
constexpr double kChainThresholdExponent = 1e5;       // beta_I <= 20 e^{-10^5} used in the final chain
constexpr double kDeskThresholdExponent = 2.0;

/// k is carried as log log log k so that astronomically large nominal weights stay representable;
/// log_k and loglog_k are +inf once they overflow.
struct PartitionParams {
    double log_k = 0;
    double loglog_k = 0;
    double log_loglog_k = 0;
    double threshold_exponent = 0;
    int I = 1;
    std::vector<double> log_beta;  // log_beta[i] for 1 <= i <= I; entry 0 is -inf (beta_0 = 0)

    double beta(int i) const { return i == 0 ? 0.0 : std::exp(log_beta.at(i)); }
    /// log x_j = beta_j log k (0 for j = 0)
    double log_x(int j) const { return j == 0 ? 0.0 : std::exp(log_beta.at(j) + std::log(log_k)); }
    bool desk() const { return std::isfinite(log_k); }
    /// 20^{i-1} / (loglog k)^2 as an exact rational in the double value of loglog k
    Rational beta_exact(int i) const;
    nlohmann::json to_json() const;
};

/// beta_i = 20^{i-1}/(loglog k)^2, I = 1 + max{i : beta_i <= e^{-threshold_exponent}} (I = 1 if none).
PartitionParams partition_params(double log_k, double threshold_exponent);
PartitionParams partition_params_tower(double log_loglog_k, double threshold_exponent);

/// lambda(p) of one form at increasing primes.
struct PrimeValues {
    std::vector<std::uint32_t> primes;
    std::vector<double> lambda;
};

struct CoefficientSystem {
    std::vector<std::uint32_t> primes;   // primes <= min(x_I, prime_cap)
    std::vector<double> lambda_f;
    std::vector<std::vector<double>> u;  // u[j][t], 1 <= j <= I; 0 for p > x_j
    std::vector<std::vector<double>> w;  // w[j][t]; 0 for p^2 > x_j
    std::uint32_t prime_cap = 0;
    bool truncated = false;              // x_I > prime_cap, so windows are cut at the cap
    nlohmann::json to_json() const;
};

/// u_{f,j}(p) = lambda_f(p)^2 p^{-1/log x_j} log(x_j/p)/log x_j,
/// w_{f,j}(p) = (lambda^4 - 4 lambda^2 + 4)/(2 p^{2/log x_j}) log(x_j/p^2)/log x_j.
CoefficientSystem coefficient_system(const PartitionParams& params, const PrimeValues& f, std::uint32_t prime_cap);

struct CoefficientCheck {
    bool u_bounded = true;   // 0 <= u <= lambda_f^2 everywhere
    bool w_bounded = true;   // w <= 2 everywhere
    double max_u_ratio = 0;  // max u / lambda_f^2
    double max_w = 0;
    nlohmann::json to_json() const;
};

CoefficientCheck check_coefficients(const CoefficientSystem& cs);

}  // namespace fmlab::pipeline
