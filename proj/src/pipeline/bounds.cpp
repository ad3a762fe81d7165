#include "fmlab/pipeline/bounds.hpp"

#include "fmlab/errors.hpp"
#include "fmlab/output.hpp"
#include "fmlab/primes.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fmlab::pipeline {

namespace {

void check_pair(const PrimeValues& f, const PrimeValues& g) {
    if (f.primes.size() != f.lambda.size() || g.primes.size() != g.lambda.size())
        throw DomainError("lambda table size mismatch");
    const std::size_t n = std::min(f.primes.size(), g.primes.size());
    if (!std::equal(f.primes.begin(), f.primes.begin() + n, g.primes.begin()))
        throw DomainError("lambda tables use different primes");
}

// number of tabulated primes with log p <= log_x; throws when the table stops short of x
std::size_t count_up_to(const PrimeValues& f, double log_x) {
    const std::size_t n = std::partition_point(f.primes.begin(), f.primes.end(),
                                               [&](std::uint32_t p) { return std::log(double(p)) <= log_x; }) -
                          f.primes.begin();
    if (n == f.primes.size()) {
        const double x = std::exp(log_x);
        if (x > 4e9 || primes_up_to(std::uint64_t(std::floor(x * (1 + 1e-15)))).size() > n)
            throw DomainError("lambda table does not reach x");
    }
    return n;
}

struct Neumaier {
    double sum = 0, c = 0;
    void add(double v) {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v))
            c += (sum - t) + v;
        else
            c += (v - t) + sum;
        sum = t;
    }
    double value() const { return sum + c; }
};

}  // namespace

nlohmann::json SoundBound::to_json() const {
    return {{"log_x", log_x},         {"log_k", log_k},         {"prime_sum", prime_sum},
            {"square_sum", square_sum}, {"conductor_term", conductor_term}, {"value", value},
            {"caveat", caveat}};
}

SoundBound sound_upper(const PrimeValues& f, const PrimeValues& g, double log_x, double log_k) {
    if (!(log_x >= std::log(2.0))) throw DomainError("sound_upper: need x >= 2");
    check_pair(f, g);
    SoundBound b;
    b.log_x = log_x;
    b.log_k = log_k;
    const std::size_t n = std::min(count_up_to(f, log_x), count_up_to(g, log_x));
    Neumaier ps, ss;
    for (std::size_t t = 0; t < n; ++t) {
        const double lp = std::log(double(f.primes[t]));
        const double lf = f.lambda[t], lg = g.lambda[t];
        const double l2 = lf * lf;
        ps.add(l2 * lg * std::exp(-lp * (0.5 + 1 / log_x)) * (log_x - lp) / log_x);
        if (2 * lp <= log_x)
            ss.add((l2 * l2 - 4 * l2 + 4) * (lg * lg - 2) / 2 * std::exp(-lp * (1 + 2 / log_x)) * (log_x - 2 * lp) /
                   log_x);
    }
    b.prime_sum = ps.value();
    b.square_sum = ss.value();
    b.conductor_term = 6 * log_k / log_x;
    b.value = b.prime_sum + b.square_sum + b.conductor_term;
    return b;
}

double e_trunc(int ell, double x) {
    if (ell < 0 || ell % 2 != 0) throw DomainError("e_trunc: ell must be even and non-negative");
    Neumaier s;
    double term = 1;
    s.add(term);
    for (int j = 1; j <= ell; ++j) {
        term *= x / j;
        s.add(term);
    }
    return s.value();
}

Rational e_trunc_exact(int ell, const Rational& x) {
    if (ell < 0 || ell % 2 != 0) throw DomainError("e_trunc_exact: ell must be even and non-negative");
    Rational s = 1, term = 1;
    for (int j = 1; j <= ell; ++j) {
        term = term * x / j;
        s += term;
    }
    return s;
}

nlohmann::json ETruncCheck::to_json() const {
    return {{"ell", ell}, {"x", x}, {"value", value}, {"positive", positive}, {"dominates_exp", dominates_exp}};
}

ETruncCheck e_trunc_check(int ell, double x) {
    ETruncCheck c;
    c.ell = ell;
    c.x = x;
    c.value = e_trunc(ell, x);
    const Rational xr = exact_rational(x);
    const Rational e = e_trunc_exact(ell, xr);
    c.positive = e > 0;
    if (x <= 0) {
        mpfr_t v;
        mpfr_init2(v, 256);
        mpfr_set_d(v, x, MPFR_RNDN);  // exact for a double at 256 bits
        mpfr_exp(v, v, MPFR_RNDU);
        mpq_t q;
        mpq_init(q);
        mpfr_get_q(q, v);
        const Rational upper(q);
        mpq_clear(q);
        mpfr_clear(v);
        c.dominates_exp = e >= upper;
    }
    return c;
}

nlohmann::json GaussianHeuristic::to_json() const {
    return {{"log_x", log_x},           {"mu", mu},
            {"sigma2", sigma2},         {"prediction", prediction},
            {"simplified", simplified}, {"identity_error", identity_error}};
}

GaussianHeuristic gaussian_heuristic_prediction(const PrimeValues& f, double x) {
    if (!(x >= 2)) throw DomainError("gaussian_heuristic_prediction: need x >= 2");
    GaussianHeuristic h;
    h.log_x = std::log(x);
    const std::size_t n = count_up_to(f, h.log_x);
    Neumaier mu, s2, d;
    for (std::size_t t = 0; t < n; ++t) {
        const double p = f.primes[t], l2 = f.lambda[t] * f.lambda[t];
        mu.add(-(l2 * l2 - 4 * l2 + 4) / (2 * p));
        s2.add(l2 * l2 / p);
        d.add(2 * (l2 - 1) / p);
    }
    h.mu = mu.value();
    h.sigma2 = s2.value();
    h.prediction = std::exp(h.mu + h.sigma2 / 2);
    h.simplified = std::exp(d.value());
    h.identity_error = std::abs(h.mu + h.sigma2 / 2 - d.value());
    return h;
}

namespace {

bool chain_passes(const PartitionParams& p, double C) {
    for (int j = 1; j < p.I; ++j)
        if (6 + p.log_beta[j + 1] / (80 * C) > -4) return false;
    return true;
}

}  // namespace

nlohmann::json ChainReport::to_json() const {
    nlohmann::json j;
    j["C"] = C;
    j["threshold_exponent"] = threshold_exponent;
    j["log_loglog_k"] = log_loglog_k;
    j["I"] = I;
    j["all_pass"] = all_pass;
    j["log_neg_log_sum"] = log_neg_log_sum;
    j["sum_finite"] = sum_finite;
    j["min_threshold_exponent"] = min_threshold_exponent;
    j["worst_case_threshold"] = worst_case_threshold;
    auto arr = nlohmann::json::array();
    for (const auto& s : steps)
        arr.push_back({{"j", s.j}, {"log_beta_j", s.log_beta_j}, {"scaled", s.scaled}, {"log_abs_t", s.log_abs_t},
                       {"pass", s.pass}});
    j["steps"] = arr;
    return j;
}

std::string ChainReport::csv() const {
    CsvWriter w({"j", "beta_j", "term", "log_term", "pass"});
    for (const auto& s : steps) {
        w.cell(s.j).cell(std::exp(s.log_beta_j)).cell(s.scaled).cell(s.log_abs_t).cell(s.pass ? "true" : "false");
        w.end_row();
    }
    return w.str();
}

ChainReport chain_validator(const PartitionParams& params, double C) {
    if (!(C > 0)) throw DomainError("chain_validator: C must be positive");
    ChainReport r;
    r.C = C;
    r.threshold_exponent = params.threshold_exponent;
    r.log_loglog_k = params.log_loglog_k;
    r.I = params.I;
    for (int j = 1; j < params.I; ++j) {
        ChainStep s;
        s.j = j;
        s.log_beta_j = params.log_beta[j];
        s.scaled = 6 + params.log_beta[j + 1] / (80 * C);
        s.log_abs_t = std::log(std::abs(s.scaled)) - s.log_beta_j;
        s.pass = s.scaled <= -4;
        r.all_pass = r.all_pass && s.pass;
        r.steps.push_back(s);
    }
    if (params.I < 2) {
        r.log_neg_log_sum = INFINITY;  // empty sum
        r.sum_finite = true;
    } else {
        // a_j = 4/beta_j with log a_j = log 4 - log beta_j; the last term dominates
        const double la_top = std::log(4.0) - params.log_beta[params.I - 1];
        const double a_top = std::exp(la_top);
        double s = 0;
        for (int j = 1; j < params.I - 1; ++j) {
            const double la = std::log(4.0) - params.log_beta[j];
            s += std::exp(-a_top * std::expm1(la - la_top));
        }
        r.log_neg_log_sum = la_top + std::log1p(-std::log1p(s) / a_top);
        r.sum_finite = std::isfinite(r.log_neg_log_sum);
    }

    r.worst_case_threshold = 800 * C + std::log(20.0);
    // smallest threshold exponent with every step passing, at this k (I >= 2 needs T <= 2 lll)
    const double lll = params.log_loglog_k;
    double lo = 0, hi = 2 * lll;
    if (!chain_passes(partition_params_tower(lll, hi), C)) {
        r.min_threshold_exponent = NAN;
    } else if (chain_passes(partition_params_tower(lll, std::max(lo, 1e-300)), C)) {
        r.min_threshold_exponent = 0;
    } else {
        for (int it = 0; it < 200 && hi - lo > 1e-9 * hi; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (chain_passes(partition_params_tower(lll, mid), C))
                hi = mid;
            else
                lo = mid;
        }
        r.min_threshold_exponent = hi;
    }
    return r;
}

nlohmann::json MarkovReport::to_json() const {
    return {{"V", V},
            {"log_k", log_k},
            {"loglog_k", loglog_k},
            {"n", n},
            {"log_x", log_x},
            {"log_bound", log_bound},
            {"in_regime", in_regime},
            {"bound_ok", bound_ok},
            {"proof_ratio_log", proof_ratio_log},
            {"proof_ratio_ok", proof_ratio_ok}};
}

MarkovReport markov_moment_bound(double V, double log_k, double loglog_k) {
    if (!(V > 0)) throw DomainError("markov_moment_bound: V must be positive");
    MarkovReport r;
    r.V = V;
    r.log_k = log_k;
    if (std::isfinite(log_k)) {
        if (!(log_k > 1)) throw DomainError("markov_moment_bound: need log k > 1");
        r.loglog_k = std::log(log_k);
    } else {
        if (!(loglog_k > 0)) throw DomainError("markov_moment_bound: loglog k required when log k is infinite");
        r.loglog_k = loglog_k;
    }
    r.n = std::floor(V / 20);
    r.log_x = 16 * log_k / V;
    r.log_bound = r.n > 0 ? r.n * (std::log(256.0) + std::log(r.n) + std::log(r.loglog_k) - 2 * std::log(V) - 1) : 0;
    r.in_regime = V >= 1e30 * r.loglog_k;
    r.bound_ok = !r.in_regime || r.log_bound <= -3 * V;
    r.proof_ratio_log = std::log(256.0) - std::log(20.0) - std::log(1e30) - 1;
    r.proof_ratio_ok = r.proof_ratio_log < -3 * 20;
    return r;
}

nlohmann::json ExceptionalZeroBound::to_json() const {
    return {{"C", C},
            {"L", L},
            {"sum_lambda4", sum_lambda4},
            {"log_ratio", log_ratio},
            {"log_bound", log_bound},
            {"log_bound_without_power", log_bound_without_power},
            {"log_target", log_target},
            {"pass", pass}};
}

ExceptionalZeroBound exceptional_zero_bound(const PartitionParams& params, double C, double sum_lambda4) {
    ExceptionalZeroBound b;
    b.C = C;
    const double ll = params.loglog_k;
    b.sum_lambda4 = sum_lambda4 < 0 ? 16 * ll : sum_lambda4;
    b.L = std::floor(std::exp(-params.log_beta[1]) / C);
    b.log_target = -ll * ll / C;
    b.log_ratio = 1.5 * params.log_beta[1] + std::log(2 * b.L / std::numbers::e) + std::log(b.sum_lambda4);
    b.log_bound = std::log(double(params.I)) + (b.L > 0 ? b.L * b.log_ratio : 0);
    b.log_bound_without_power = std::log(double(params.I)) + b.log_ratio;
    b.pass = b.log_bound <= b.log_target;
    return b;
}

std::vector<WindowReport> window_reports(const PartitionParams& params, const PrimeValues& f, double L_sym2) {
    if (f.primes.empty()) throw DomainError("window_reports: empty lambda table");
    std::vector<WindowReport> out;
    const double top = std::log(double(f.primes.back()));
    for (int i = 1; i <= params.I; ++i) {
        WindowReport w;
        w.i = i;
        w.log_x = params.log_x(i);
        if (w.log_x > top) {
            w.log_x = top;
            w.truncated = true;
        }
        const double lx = w.log_x;
        Neumaier a, b, s;
        for (std::size_t t = 0; t < f.primes.size(); ++t) {
            const double lp = std::log(double(f.primes[t]));
            if (lp > lx) break;
            const double l2 = f.lambda[t] * f.lambda[t];
            const double damp = l2 * l2 * std::exp(-lp * (1 + 2 / lx));
            a.add(0.5 * damp * (lx - lp) * (lx - lp) / (lx * lx));
            if (2 * lp <= lx) {
                b.add(0.5 * damp * (lx - 2 * lp) / lx);
                s.add((2 * l2 - 2) / double(f.primes[t]));
            }
        }
        w.techn_first = a.value();
        w.techn_second = b.value();
        w.techn_product = std::exp(w.techn_first - w.techn_second);
        w.inv_L = 1 / L_sym2;
        w.sym_exp = std::exp(s.value());
        w.sym_product = w.sym_exp / (L_sym2 * L_sym2);
        out.push_back(w);
    }
    return out;
}

nlohmann::json window_reports_json(const std::vector<WindowReport>& ws) {
    auto arr = nlohmann::json::array();
    for (const auto& w : ws)
        arr.push_back({{"i", w.i},
                       {"log_x", w.log_x},
                       {"truncated", w.truncated},
                       {"techn_first", w.techn_first},
                       {"techn_second", w.techn_second},
                       {"techn_product", w.techn_product},
                       {"inv_L", w.inv_L},
                       {"sym_exp", w.sym_exp},
                       {"sym_product", w.sym_product}});
    return arr;
}

}  // namespace fmlab::pipeline
