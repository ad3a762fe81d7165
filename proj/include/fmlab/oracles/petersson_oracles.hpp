#pragma once
// Finite-instance evaluators for the prime-tuple sums weighted by h1 / h2 and their upper bounds.
#include "fmlab/bigint.hpp"
#include "fmlab/config.hpp"

#include <json.hpp>

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace fmlab::oracles {

struct WeightedWindow {
    std::vector<std::uint32_t> primes;
    std::vector<double> weights;  // aligned with primes
};

/// Primes in (x1, x2] with weight u(p).
WeightedWindow make_window(double x1, double x2, const std::function<double(std::uint32_t)>& u);
/// Primes in (2^m, 2^{m+1}].
WeightedWindow dyadic_window(int m, const std::function<double(std::uint32_t)>& w);

enum class EvalMode { Auto, Direct, Partition };

/// Direct mode is refused when #primes^n exceeds this.
inline constexpr double kDirectTupleLimit = 1e8;

/// sum over p_1..p_n in the window of prod u(p_i)/sqrt(p_i) * h1(p_1...p_n).
double combinato_sum(const WeightedWindow& win, int n, EvalMode mode = EvalMode::Auto);
Rational combinato_sum_exact(const WeightedWindow& win, int n);
/// n!/(2^{n/2}(n/2)!) (sum u^2/p)^{n/2}; n must be even.
double combinato_bound(const WeightedWindow& win, int n);
Rational combinato_bound_exact(const WeightedWindow& win, int n);

/// sum over p_1..p_{2M} of prod w(p_i)/p_i * h2(p_1...p_{2M}).
double combinato2_sum(const WeightedWindow& win, int M, EvalMode mode = EvalMode::Auto);
Rational combinato2_sum_exact(const WeightedWindow& win, int M);
/// (2M)!/M! (72 C^2/2^m)^M.
double combinato2_bound(int m, double C, int M);
double combinato2_log_bound(int m, double C, int M);
Rational combinato2_bound_exact(int m, double C, int M);

struct GaussianWindow {
    WeightedWindow window;
    int n;
};
struct SquaredWindow {
    int m;
    double C;
    int M;
};
/// prod_i [1_{2|n_i} n_i!/(2^{n_i/2}(n_i/2)!) (sum u^2/p)^{n_i/2}] * (2M)!/M! (72C^2/2^m)^M.
double gaussian_main_term(const std::vector<GaussianWindow>& windows, const SquaredWindow& sq);
Rational gaussian_main_term_exact(const std::vector<GaussianWindow>& windows, const SquaredWindow& sq);

struct LemmaReport {
    std::string lemma;
    nlohmann::json config;
    double lhs = 0;
    double bound = 0;
    double slack = 0;  // bound - |lhs|, rounded from the exact value
    bool pass = false;
    /// combinato2 / gaussian: the smallest constant that could replace 72 on this instance.
    double implied_constant = 0;
    nlohmann::json to_json() const;
};

LemmaReport verify_combinato(const WeightedWindow& win, int n);
LemmaReport verify_combinato2(const WeightedWindow& win, int m, double C, int M);
/// Main term of the mixed moment in the independent model: product of the per-window exact sums
/// (prime sets are disjoint, so h1, h2 factor), against gaussian_main_term.
LemmaReport verify_gaussian(const std::vector<GaussianWindow>& windows, const WeightedWindow& sq_window,
                            const SquaredWindow& sq);

/// lemma-id in {combinato, combinato2, gaussian}; keys documented in README.
LemmaReport verify_lemma_instance(const std::string& lemma_id, const KeyValueConfig& cfg);

/// Weights u(p) = amplitude * (2U - 1) with U from CounterRng(seed, p), or a constant.
std::function<double(std::uint32_t)> random_weights(std::uint64_t seed, double amplitude);

}  // namespace fmlab::oracles
