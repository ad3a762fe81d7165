#include "fmlab/pipeline/dirichlet.hpp"

#include "fmlab/errors.hpp"
#include "fmlab/simd/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace fmlab::pipeline {

namespace {

void check_family(const Family& family, const CoefficientSystem& cs) {
    if (family.primes.size() < cs.primes.size() ||
        !std::equal(cs.primes.begin(), cs.primes.end(), family.primes.begin()))
        throw DomainError("family primes do not cover the coefficient system");
    if (family.values.size() != family.n_forms * family.primes.size())
        throw DomainError("family value matrix has the wrong shape");
}

std::size_t first_above_log(const CoefficientSystem& cs, double log_x) {
    // first index with log p > log_x; same comparison as coefficient_system
    return std::partition_point(cs.primes.begin(), cs.primes.end(),
                                [&](std::uint32_t p) { return std::log(double(p)) <= log_x; }) -
           cs.primes.begin();
}

std::vector<double> rows(const Family& family, std::size_t a, std::size_t b, const std::vector<double>& wt,
                         bool squares) {
    std::vector<double> out(family.n_forms, 0.0);
    if (a >= b || family.n_forms == 0) return out;
    simd::weighted_row_sums(family.values.data() + a, family.n_forms, b - a, family.primes.size(), wt.data(), squares,
                            out.data());
    return out;
}

std::vector<double> g_weights(int j, std::size_t a, std::size_t b, const CoefficientSystem& cs) {
    std::vector<double> wt(b - a);
    for (std::size_t t = a; t < b; ++t) wt[t - a] = cs.u[j][t] / std::sqrt(double(cs.primes[t]));
    return wt;
}

std::vector<double> p_weights(int I, std::size_t a, std::size_t b, const CoefficientSystem& cs) {
    std::vector<double> wt(b - a);
    for (std::size_t t = a; t < b; ++t) wt[t - a] = cs.w[I][t] / double(cs.primes[t]);
    return wt;
}

void check_ij(int i, int j, const PartitionParams& params) {
    if (i < 1 || i > j || j > params.I) throw DomainError("g_poly: need 1 <= i <= j <= I");
}

}  // namespace

Family family_from_table(const mf::PrimeLambdaTable& table) {
    Family f;
    f.primes = table.primes;
    f.n_forms = table.lambda.size();
    f.sampler_id = "eigenforms";
    for (const auto& row : table.lambda) f.values.insert(f.values.end(), row.begin(), row.end());
    return f;
}

Family family_from_rows(const std::vector<std::uint32_t>& primes, const std::vector<std::vector<double>>& rows) {
    Family f;
    f.primes = primes;
    f.n_forms = rows.size();
    f.sampler_id = "explicit";
    for (const auto& r : rows) {
        if (r.size() != primes.size()) throw DomainError("family_from_rows: row length mismatch");
        f.values.insert(f.values.end(), r.begin(), r.end());
    }
    return f;
}

std::pair<std::size_t, std::size_t> beta_window(const PartitionParams& params, const CoefficientSystem& cs, int i) {
    if (i < 1 || i > params.I) throw DomainError("beta_window: need 1 <= i <= I");
    const std::size_t a = i == 1 ? 0 : first_above_log(cs, params.log_x(i - 1));
    return {a, std::max(a, first_above_log(cs, params.log_x(i)))};
}

std::pair<std::size_t, std::size_t> dyadic_window(const CoefficientSystem& cs, int m) {
    if (m < 0 || m > 62) throw DomainError("dyadic_window: m out of range");
    const double lo = std::ldexp(1.0, m), hi = std::ldexp(1.0, m + 1);
    const auto a = std::upper_bound(cs.primes.begin(), cs.primes.end(), lo,
                                    [](double v, std::uint32_t p) { return v < double(p); }) -
                   cs.primes.begin();
    const auto b = std::upper_bound(cs.primes.begin(), cs.primes.end(), hi,
                                    [](double v, std::uint32_t p) { return v < double(p); }) -
                   cs.primes.begin();
    return {std::size_t(a), std::size_t(b)};
}

std::vector<double> g_poly_all(const Family& family, int i, int j, const PartitionParams& params,
                               const CoefficientSystem& cs) {
    check_ij(i, j, params);
    check_family(family, cs);
    const auto [a, b] = beta_window(params, cs, i);
    return rows(family, a, b, g_weights(j, a, b, cs), false);
}

double g_poly(const Family& family, std::size_t form, int i, int j, const PartitionParams& params,
              const CoefficientSystem& cs) {
    check_ij(i, j, params);
    check_family(family, cs);
    if (form >= family.n_forms) throw DomainError("g_poly: form index out of range");
    const auto [a, b] = beta_window(params, cs, i);
    const auto wt = g_weights(j, a, b, cs);
    double s = 0;
    if (a < b)
        simd::weighted_row_sums(family.row(form) + a, 1, b - a, family.primes.size(), wt.data(), false, &s);
    return s;
}

namespace {
// 2^{m+1} <= min(x_I, prime_cap)
void check_m(int m, const PartitionParams& params, const CoefficientSystem& cs) {
    if (m < 0) throw DomainError("p_poly: m must be non-negative");
    const double top = std::min(params.log_x(params.I), std::log(double(cs.prime_cap)));
    if ((m + 1) * std::log(2.0) > top + 1e-12) throw DomainError("p_poly: need 2^{m+1} <= min(x_I, prime cap)");
}
}  // namespace

std::vector<double> p_poly_all(const Family& family, int m, const PartitionParams& params, const CoefficientSystem& cs) {
    check_m(m, params, cs);
    check_family(family, cs);
    const auto [a, b] = dyadic_window(cs, m);
    return rows(family, a, b, p_weights(params.I, a, b, cs), true);
}

double p_poly(const Family& family, std::size_t form, int m, const PartitionParams& params, const CoefficientSystem& cs) {
    if (form >= family.n_forms) throw DomainError("p_poly: form index out of range");
    check_m(m, params, cs);
    check_family(family, cs);
    const auto [a, b] = dyadic_window(cs, m);
    const auto wt = p_weights(params.I, a, b, cs);
    double s = 0;
    if (a < b) simd::weighted_row_sums(family.row(form) + a, 1, b - a, family.primes.size(), wt.data(), true, &s);
    return s;
}

double g_poly_variance(int i, int j, const PartitionParams& params, const CoefficientSystem& cs) {
    check_ij(i, j, params);
    const auto [a, b] = beta_window(params, cs, i);
    double s = 0;
    for (std::size_t t = a; t < b; ++t) s += cs.u[j][t] * cs.u[j][t] / double(cs.primes[t]);
    return s;
}

double p_poly_weight(int m, const PartitionParams& params, const CoefficientSystem& cs) {
    const auto [a, b] = dyadic_window(cs, m);
    double s = 0;
    for (std::size_t t = a; t < b; ++t) s += cs.w[params.I][t] / double(cs.primes[t]);
    return s;
}

}  // namespace fmlab::pipeline
