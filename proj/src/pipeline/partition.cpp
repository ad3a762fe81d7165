#include "fmlab/pipeline/partition.hpp"

#include "fmlab/errors.hpp"
#include "fmlab/primes.hpp"

#include <algorithm>
#include <numbers>

namespace fmlab::pipeline {

namespace {

PartitionParams build(double log_k, double loglog_k, double lll, double threshold_exponent) {
    if (!(threshold_exponent > 0)) throw DomainError("partition_params: threshold exponent must be positive");
    PartitionParams p;
    p.log_k = log_k;
    p.loglog_k = loglog_k;
    p.log_loglog_k = lll;
    p.threshold_exponent = threshold_exponent;
    // log beta_i = (i-1) log 20 - 2 lll <= -T
    const double slack = 2 * lll - threshold_exponent;
    const double l20 = std::log(20.0);
    int imax = 0;
    if (slack >= 0) {
        imax = 1 + static_cast<int>(std::floor(slack / l20));
        // guard the floor against rounding at the boundary
        while (imax > 0 && (imax - 1) * l20 - 2 * lll > -threshold_exponent) --imax;
        while ((imax)*l20 - 2 * lll <= -threshold_exponent) ++imax;
    }
    p.I = 1 + imax;
    p.log_beta.assign(p.I + 1, -INFINITY);
    for (int i = 1; i <= p.I; ++i) p.log_beta[i] = (i - 1) * l20 - 2 * lll;
    return p;
}

}  // namespace

Rational PartitionParams::beta_exact(int i) const {
    if (i < 0 || i > I) throw DomainError("beta_exact: index out of range");
    if (i == 0) return Rational(0);
    if (!std::isfinite(loglog_k)) throw DomainError("beta_exact: loglog k not representable");
    const Rational ll = exact_rational(loglog_k);
    Rational b = 1 / (ll * ll);
    for (int t = 1; t < i; ++t) b *= 20;
    return b;
}

nlohmann::json PartitionParams::to_json() const {
    nlohmann::json j;
    j["log_k"] = log_k;
    j["loglog_k"] = loglog_k;
    j["log_loglog_k"] = log_loglog_k;
    j["threshold_exponent"] = threshold_exponent;
    j["I"] = I;
    auto lb = nlohmann::json::array(), lx = nlohmann::json::array();
    for (int i = 1; i <= I; ++i) {
        lb.push_back(log_beta[i]);
        lx.push_back(desk() ? log_x(i) : INFINITY);
    }
    j["log_beta"] = lb;
    j["log_x"] = lx;
    return j;
}

PartitionParams partition_params(double log_k, double threshold_exponent) {
    if (!(log_k > std::numbers::e)) throw DomainError("partition_params: need log k > e");
    const double ll = std::log(log_k);
    return build(log_k, ll, std::log(ll), threshold_exponent);
}

PartitionParams partition_params_tower(double lll, double threshold_exponent) {
    if (!(lll > 0)) throw DomainError("partition_params_tower: need log log log k > 0");
    const double ll = std::exp(lll);
    return build(std::exp(ll), ll, lll, threshold_exponent);
}

nlohmann::json CoefficientSystem::to_json() const {
    return {{"n_primes", primes.size()},
            {"max_prime", primes.empty() ? 0u : primes.back()},
            {"prime_cap", prime_cap},
            {"truncated", truncated}};
}

CoefficientSystem coefficient_system(const PartitionParams& params, const PrimeValues& f, std::uint32_t prime_cap) {
    if (!params.desk()) throw DomainError("coefficient_system: nominal k too large for explicit primes");
    if (f.primes.size() != f.lambda.size()) throw DomainError("coefficient_system: size mismatch");
    CoefficientSystem cs;
    cs.prime_cap = prime_cap;
    const double log_xI = params.log_x(params.I);
    cs.truncated = log_xI > std::log(double(prime_cap));
    for (std::size_t t = 0; t < f.primes.size(); ++t) {
        const double p = f.primes[t];
        if (p > prime_cap || std::log(p) > log_xI) break;
        cs.primes.push_back(f.primes[t]);
        cs.lambda_f.push_back(f.lambda[t]);
    }
    if (cs.primes.size() == f.primes.size()) {
        // the table ran out before min(x_I, prime_cap): only fine if no prime was skipped
        const double limit = std::min(double(prime_cap), std::exp(log_xI));
        if (primes_up_to(std::uint64_t(limit)).size() > cs.primes.size())
            throw DomainError("coefficient_system: lambda_f table does not reach min(x_I, prime_cap)");
    }
    const std::size_t n = cs.primes.size();
    cs.u.assign(params.I + 1, std::vector<double>(n, 0.0));
    cs.w.assign(params.I + 1, std::vector<double>(n, 0.0));
    for (int j = 1; j <= params.I; ++j) {
        const double lx = params.log_x(j);
        for (std::size_t t = 0; t < n; ++t) {
            const double lp = std::log(double(cs.primes[t]));
            const double l2 = cs.lambda_f[t] * cs.lambda_f[t];
            if (lp <= lx) cs.u[j][t] = l2 * std::exp(-lp / lx) * ((lx - lp) / lx);
            if (2 * lp <= lx) cs.w[j][t] = (l2 * l2 - 4 * l2 + 4) / 2 * std::exp(-2 * lp / lx) * ((lx - 2 * lp) / lx);
        }
    }
    return cs;
}

nlohmann::json CoefficientCheck::to_json() const {
    return {{"u_bounded", u_bounded}, {"w_bounded", w_bounded}, {"max_u_ratio", max_u_ratio}, {"max_w", max_w}};
}

CoefficientCheck check_coefficients(const CoefficientSystem& cs) {
    CoefficientCheck c;
    for (std::size_t j = 1; j < cs.u.size(); ++j)
        for (std::size_t t = 0; t < cs.primes.size(); ++t) {
            const double l2 = cs.lambda_f[t] * cs.lambda_f[t];
            const double u = cs.u[j][t], w = cs.w[j][t];
            if (u < 0 || u > l2) c.u_bounded = false;
            if (w > 2) c.w_bounded = false;
            if (l2 > 0) c.max_u_ratio = std::max(c.max_u_ratio, u / l2);
            c.max_w = std::max(c.max_w, w);
        }
    return c;
}

}  // namespace fmlab::pipeline
