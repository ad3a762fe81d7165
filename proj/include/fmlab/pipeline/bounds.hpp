#pragma once
// Upper-bound evaluators and log-space validators for the moment argument.
#include "fmlab/bigint.hpp"
#include "fmlab/pipeline/partition.hpp"

#include <json.hpp>

#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

namespace fmlab::pipeline {

inline constexpr double kChainC = 320.0 / std::numbers::e;  // 2^5 * 10 / e

struct SoundBound {
    double log_x = 0;
    double log_k = 0;
    double prime_sum = 0;
    double square_sum = 0;
    double conductor_term = 0;  // 6 log k / log x
    double value = 0;           // the three terms; the O(1) is not included
    std::string caveat = "bound holds up to an unspecified additive O(1), not included in value";
    nlohmann::json to_json() const;
};

/// Upper bound for log L(1/2, f x f x g) at x = e^{log_x} >= 2:
///   sum_{p<=x} lambda_f^2 lambda_g p^{-1/2-1/log x} log(x/p)/log x
/// + sum_{p^2<=x} (lambda_f^4 - 4 lambda_f^2 + 4)(lambda_g(p^2) - 1) / (2 p^{1+2/log x}) log(x/p^2)/log x
/// + 6 log k / log x.
/// f and g are lambda tables on the same primes, reaching x.
SoundBound sound_upper(const PrimeValues& f, const PrimeValues& g, double log_x, double log_k);

/// sum_{j<=ell} x^j / j! with compensated summation. ell must be even and >= 0.
double e_trunc(int ell, double x);
Rational e_trunc_exact(int ell, const Rational& x);

struct ETruncCheck {
    int ell = 0;
    double x = 0;
    double value = 0;
    bool positive = false;         // exact rational E_ell(x) > 0
    bool dominates_exp = false;    // exact E_ell(x) >= upper bound of e^x (x <= 0 only)
    nlohmann::json to_json() const;
};

/// Exact checks at the double x: E_ell(x) in rationals against an outward-rounded e^x.
ETruncCheck e_trunc_check(int ell, double x);

struct GaussianHeuristic {
    double log_x = 0;
    double mu = 0;          // -sum (lambda^4 - 4 lambda^2 + 4) / (2p)
    double sigma2 = 0;      // sum lambda^4 / p
    double prediction = 0;  // e^{mu + sigma2/2}
    double simplified = 0;  // exp(2 sum (lambda^2 - 1)/p)
    double identity_error = 0;  // |mu + sigma2/2 - 2 sum (lambda^2 - 1)/p|
    nlohmann::json to_json() const;
};

GaussianHeuristic gaussian_heuristic_prediction(const PrimeValues& f, double x);

struct ChainStep {
    int j = 0;
    double log_beta_j = 0;
    double scaled = 0;       // beta_j t_j = 6 + log(beta_{j+1}) / (80 C); the step needs scaled <= -4
    double log_abs_t = 0;    // log |t_j|
    bool pass = false;
};

struct ChainReport {
    double C = 0;
    double threshold_exponent = 0;
    double log_loglog_k = 0;
    int I = 1;
    std::vector<ChainStep> steps;
    bool all_pass = true;
    // sum_{1<=j<=I-1} e^{-4/beta_j} = exp(-exp(log_neg_log_sum)); -inf when there are no steps
    double log_neg_log_sum = 0;
    bool sum_finite = true;
    double min_threshold_exponent = 0;     // bisection at this log log log k
    double worst_case_threshold = 0;       // 800 C + log 20, over all k
    nlohmann::json to_json() const;
    std::string csv() const;  // j, beta_j, term, log_term, pass
};

ChainReport chain_validator(const PartitionParams& params, double C = kChainC);

struct MarkovReport {
    double V = 0;
    double log_k = 0;
    double loglog_k = 0;
    double n = 0;           // floor(V/20)
    double log_x = 0;       // x = k^{16/V}
    double log_bound = 0;   // n log(2^8 n loglog k / (V^2 e))
    bool in_regime = false; // V >= 10^30 loglog k
    bool bound_ok = true;   // log_bound <= -3V; only asserted in the regime
    double proof_ratio_log = 0;  // log(2^8 / (20 * 10^30 e)), compared with -60
    bool proof_ratio_ok = false;
    nlohmann::json to_json() const;
};

/// log_k may be +inf; then loglog_k must be given instead (pass log_k = inf and loglog_k).
MarkovReport markov_moment_bound(double V, double log_k, double loglog_k = 0);

struct ExceptionalZeroBound {
    double C = 0;
    double L = 0;            // floor((C beta_1)^{-1})
    double sum_lambda4 = 0;  // sum_{p <= x_1} lambda_f^4 / p, default 2^4 loglog k
    double log_ratio = 0;    // log(beta_1^{3/2} 2L/e sum)
    double log_bound = 0;    // log(I) + L log_ratio
    double log_bound_without_power = 0;  // the displayed line with the power L left off
    double log_target = 0;   // -(loglog k)^2 / C
    bool pass = false;       // log_bound <= log_target
    nlohmann::json to_json() const;
};

ExceptionalZeroBound exceptional_zero_bound(const PartitionParams& params, double C = kChainC, double sum_lambda4 = -1);

struct WindowReport {
    int i = 0;
    double log_x = 0;
    bool truncated = false;
    double techn_first = 0;   // (1/2) sum_{p<=x} lambda^4 p^{-1-2/log x} log^2(x/p)/log^2 x
    double techn_second = 0;  // (1/2) sum_{p<=sqrt x} lambda^4 p^{-1-2/log x} log(x/p^2)/log x
    double techn_product = 0; // exp(first - second)
    double inv_L = 0;         // 1 / L(1, sym^2 f)
    double sym_exp = 0;       // exp(sum_{p<=sqrt x} (2 lambda^2 - 2)/p)
    double sym_product = 0;   // sym_exp / L^2
};

/// Both finite checks at each x_i (cut at the largest tabulated prime).
std::vector<WindowReport> window_reports(const PartitionParams& params, const PrimeValues& f, double L_sym2);
nlohmann::json window_reports_json(const std::vector<WindowReport>& w);

}  // namespace fmlab::pipeline
