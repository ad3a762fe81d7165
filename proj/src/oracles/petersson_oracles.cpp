#include "fmlab/oracles/petersson_oracles.hpp"

#include "fmlab/errors.hpp"
#include "fmlab/hecke/combinatorics.hpp"
#include "fmlab/primes.hpp"
#include "fmlab/satotate/model.hpp"

#include <cmath>
#include <sstream>

namespace fmlab::oracles {

namespace {

double tuple_count(std::size_t primes, int n) { return std::pow(static_cast<double>(primes), n); }

// h table indexed by exponent
struct HTables {
    std::vector<double> h1d, h2d;
    std::vector<Rational> h1q, h2q;
    explicit HTables(int n) {
        for (int a = 0; a <= n; ++a) {
            const BigInt a1 = hecke::h1_prime_power(a), a2 = hecke::h2_prime_power(a);
            h1d.push_back(to_double(a1));
            h2d.push_back(to_double(a2));
            h1q.emplace_back(a1);
            h2q.emplace_back(a2);
        }
    }
};

// Direct n-fold loop over ordered tuples. `second` selects the h2 / (w/p) variant.
// Branches that can only reach exponent patterns where h vanishes are skipped:
// h1 needs every exponent even, h2 needs no exponent equal to 1.
struct DirectWalker {
    const std::vector<double>& term;  // u/sqrt(p) or w/p
    const std::vector<double>& h;
    bool second;
    int n;
    std::vector<int> count;
    std::vector<int> touched;
    int odd = 0, ones = 0;
    double total = 0;

    double leaf_h() const {
        double v = 1;
        for (int i : touched)
            if (count[i]) v *= h[count[i]];
        return v;
    }

    void run(int depth, double prod) {
        const int remaining = n - depth;
        if (second ? ones > remaining : (odd > remaining)) return;
        if (remaining == 0) {
            total += prod * leaf_h();
            return;
        }
        for (std::size_t i = 0; i < term.size(); ++i) {
            const int c = count[i]++;
            if (c == 0) touched.push_back(static_cast<int>(i));
            odd += (c % 2 == 0) ? 1 : -1;
            ones += (c == 0) ? 1 : (c == 1 ? -1 : 0);
            run(depth + 1, prod * term[i]);
            ones -= (c == 0) ? 1 : (c == 1 ? -1 : 0);
            odd -= (c % 2 == 0) ? 1 : -1;
            if (c == 0) touched.pop_back();
            --count[i];
        }
    }
};

double direct_sum(const std::vector<double>& term, const std::vector<double>& h, bool second, int n) {
    DirectWalker w{term, h, second, n, std::vector<int>(term.size(), 0), {}, 0, 0, 0.0};
    w.run(0, 1.0);
    return w.total;
}

// Partition reorganisation: p_1...p_n = q_1^{a_1}...q_r^{a_r} with q_1 < ... < q_r distinct,
// weighted by the multinomial count n!/(a_1!...a_r!). Compositions with h(q^a) = 0 are skipped.
template <class T>
struct PartitionEvaluator {
    // base[i] raised to exponent a gives the per-prime factor (u/sqrt p)^a or (w/p)^a.
    std::function<T(std::size_t, int)> factor;
    const std::vector<T>& h;
    std::size_t nprimes;
    int n;
    T total{0};
    std::vector<int> parts;

    void tuples(std::size_t start, std::size_t idx, const T& prod) {
        if (idx == parts.size()) {
            total += prod;
            return;
        }
        // leave room for the remaining parts
        for (std::size_t i = start; i + (parts.size() - idx) <= nprimes; ++i)
            tuples(i + 1, idx + 1, prod * factor(i, parts[idx]));
    }

    void compositions(int left, bool second) {
        if (left == 0) {
            T coeff = T(factorial(static_cast<unsigned>(n)));
            for (int a : parts) coeff = coeff / T(factorial(static_cast<unsigned>(a))) * h[a];
            if (coeff == T(0)) return;
            tuples(0, 0, coeff);
            return;
        }
        for (int a = 1; a <= left; ++a) {
            if (second ? a == 1 : a % 2 == 1) continue;
            parts.push_back(a);
            compositions(left - a, second);
            parts.pop_back();
        }
    }
};

void check_n(int n, const char* who) {
    if (n < 0 || n > 40) throw DomainError(std::string(who) + ": tuple length outside [0, 40]");
}

Rational rational_pow(const Rational& x, int e) {
    Rational r = 1;
    for (int i = 0; i < e; ++i) r *= x;
    return r;
}

Rational exact_square_sum(const WeightedWindow& win) {
    Rational s = 0;
    for (std::size_t i = 0; i < win.primes.size(); ++i) {
        const Rational u = exact_rational(win.weights[i]);
        s += u * u / Rational(win.primes[i]);
    }
    return s;
}

Rational gaussian_factor_exact(const WeightedWindow& win, int n) {
    if (n % 2) return 0;
    const unsigned h = static_cast<unsigned>(n / 2);
    Rational c(factorial(static_cast<unsigned>(n)), BigInt(factorial(h)) << h);
    return c * rational_pow(exact_square_sum(win), static_cast<int>(h));
}

double rel_error_to_double(const Rational& x) { return to_double(x); }

}  // namespace

WeightedWindow make_window(double x1, double x2, const std::function<double(std::uint32_t)>& u) {
    WeightedWindow w;
    w.primes = primes_in_window(x1, x2);
    for (auto p : w.primes) w.weights.push_back(u(p));
    return w;
}

WeightedWindow dyadic_window(int m, const std::function<double(std::uint32_t)>& w) {
    if (m < 0 || m > 30) throw DomainError("dyadic_window: m outside [0, 30]");
    return make_window(std::ldexp(1.0, m), std::ldexp(1.0, m + 1), w);
}

double combinato_sum(const WeightedWindow& win, int n, EvalMode mode) {
    check_n(n, "combinato_sum");
    if (win.primes.empty()) return n == 0 ? 1.0 : 0.0;
    if (n % 2) return 0.0;
    if (mode == EvalMode::Auto)
        mode = tuple_count(win.primes.size(), n) <= kDirectTupleLimit ? EvalMode::Direct : EvalMode::Partition;
    HTables h(n);
    std::vector<double> term(win.primes.size());
    for (std::size_t i = 0; i < term.size(); ++i) term[i] = win.weights[i] / std::sqrt(static_cast<double>(win.primes[i]));
    if (mode == EvalMode::Direct) {
        if (tuple_count(win.primes.size(), n) > kDirectTupleLimit)
            throw DomainError("combinato_sum: instance too large for direct mode");
        return direct_sum(term, h.h1d, false, n);
    }
    // even exponents only, so (u/sqrt p)^a = (u^2/p)^{a/2}: evaluate that way to avoid sqrt rounding
    std::vector<double> sq(win.primes.size());
    for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = win.weights[i] * win.weights[i] / win.primes[i];
    PartitionEvaluator<double> ev{[&](std::size_t i, int a) { return std::pow(sq[i], a / 2); }, h.h1d,
                                  win.primes.size(), n, 0.0, {}};
    ev.compositions(n, false);
    return ev.total;
}

Rational combinato_sum_exact(const WeightedWindow& win, int n) {
    check_n(n, "combinato_sum_exact");
    if (win.primes.empty()) return n == 0 ? 1 : 0;
    if (n % 2) return 0;
    HTables h(n);
    std::vector<Rational> sq(win.primes.size());
    for (std::size_t i = 0; i < sq.size(); ++i) {
        const Rational u = exact_rational(win.weights[i]);
        sq[i] = u * u / Rational(win.primes[i]);
    }
    PartitionEvaluator<Rational> ev{[&](std::size_t i, int a) { return rational_pow(sq[i], a / 2); }, h.h1q,
                                    win.primes.size(), n, Rational(0), {}};
    ev.compositions(n, false);
    return ev.total;
}

double combinato_bound(const WeightedWindow& win, int n) {
    return to_double(combinato_bound_exact(win, n));
}

Rational combinato_bound_exact(const WeightedWindow& win, int n) {
    check_n(n, "combinato_bound");
    if (n % 2) throw DomainError("combinato_bound: stated only for even n");
    return gaussian_factor_exact(win, n);
}

double combinato2_sum(const WeightedWindow& win, int M, EvalMode mode) {
    check_n(2 * M, "combinato2_sum");
    if (win.primes.empty()) return M == 0 ? 1.0 : 0.0;
    const int n = 2 * M;
    if (mode == EvalMode::Auto)
        mode = tuple_count(win.primes.size(), n) <= kDirectTupleLimit ? EvalMode::Direct : EvalMode::Partition;
    HTables h(n);
    std::vector<double> term(win.primes.size());
    for (std::size_t i = 0; i < term.size(); ++i) term[i] = win.weights[i] / win.primes[i];
    if (mode == EvalMode::Direct) {
        if (tuple_count(win.primes.size(), n) > kDirectTupleLimit)
            throw DomainError("combinato2_sum: instance too large for direct mode");
        return direct_sum(term, h.h2d, true, n);
    }
    PartitionEvaluator<double> ev{[&](std::size_t i, int a) { return std::pow(term[i], a); }, h.h2d,
                                  win.primes.size(), n, 0.0, {}};
    ev.compositions(n, true);
    return ev.total;
}

Rational combinato2_sum_exact(const WeightedWindow& win, int M) {
    check_n(2 * M, "combinato2_sum_exact");
    if (win.primes.empty()) return M == 0 ? 1 : 0;
    HTables h(2 * M);
    std::vector<Rational> term(win.primes.size());
    for (std::size_t i = 0; i < term.size(); ++i) term[i] = exact_rational(win.weights[i]) / Rational(win.primes[i]);
    PartitionEvaluator<Rational> ev{[&](std::size_t i, int a) { return rational_pow(term[i], a); }, h.h2q,
                                    win.primes.size(), 2 * M, Rational(0), {}};
    ev.compositions(2 * M, true);
    return ev.total;
}

double combinato2_bound(int m, double C, int M) {
    if (M < 0 || m < 0) throw DomainError("combinato2_bound: negative argument");
    double v = 1;
    for (int i = M + 1; i <= 2 * M; ++i) v *= i;
    const double base = 72 * C * C / std::ldexp(1.0, m);
    for (int i = 0; i < M; ++i) v *= base;
    return v;
}

double combinato2_log_bound(int m, double C, int M) {
    if (M < 0 || m < 0) throw DomainError("combinato2_bound: negative argument");
    if (M == 0) return 0.0;
    return std::lgamma(2.0 * M + 1) - std::lgamma(M + 1.0) +
           M * (std::log(72.0) + 2 * std::log(C) - m * std::log(2.0));
}

Rational combinato2_bound_exact(int m, double C, int M) {
    if (M < 0 || m < 0) throw DomainError("combinato2_bound: negative argument");
    const Rational c = exact_rational(C);
    const Rational base = Rational(72) * c * c / Rational(BigInt(1) << m);
    return Rational(factorial(static_cast<unsigned>(2 * M)) / factorial(static_cast<unsigned>(M))) *
           rational_pow(base, M);
}

double gaussian_main_term(const std::vector<GaussianWindow>& windows, const SquaredWindow& sq) {
    return to_double(gaussian_main_term_exact(windows, sq));
}

Rational gaussian_main_term_exact(const std::vector<GaussianWindow>& windows, const SquaredWindow& sq) {
    Rational v = 1;
    for (const auto& w : windows) {
        check_n(w.n, "gaussian_main_term");
        v *= gaussian_factor_exact(w.window, w.n);
    }
    return v * combinato2_bound_exact(sq.m, sq.C, sq.M);
}

nlohmann::json LemmaReport::to_json() const {
    nlohmann::json j;
    j["lemma"] = lemma;
    j["config"] = config;
    j["lhs"] = lhs;
    j["bound"] = bound;
    j["slack"] = slack;
    j["pass"] = pass;
    if (lemma != "combinato") j["implied_constant"] = implied_constant;
    return j;
}

namespace {

nlohmann::json window_json(const WeightedWindow& w) {
    nlohmann::json j;
    j["primes"] = w.primes;
    j["weights"] = w.weights;
    return j;
}

void finish(LemmaReport& r, const Rational& lhs, const Rational& bound) {
    const Rational a = boost::multiprecision::abs(lhs);
    r.lhs = to_double(lhs);
    r.bound = to_double(bound);
    r.slack = rel_error_to_double(bound - a);
    r.pass = a <= bound;
}

// smallest K with |W| <= (2M)!/M! (K C^2/2^m)^M
double implied_constant(const Rational& W, int m, double C, int M) {
    if (M == 0 || C == 0) return 0.0;
    const double ratio = to_double(boost::multiprecision::abs(W) * Rational(factorial(static_cast<unsigned>(M))) /
                                   Rational(factorial(static_cast<unsigned>(2 * M))));
    if (ratio <= 0) return 0.0;
    return std::pow(ratio, 1.0 / M) * std::ldexp(1.0, m) / (C * C);
}

}  // namespace

LemmaReport verify_combinato(const WeightedWindow& win, int n) {
    LemmaReport r;
    r.lemma = "combinato";
    r.config = {{"n", n}, {"window", window_json(win)}};
    finish(r, combinato_sum_exact(win, n), combinato_bound_exact(win, n));
    return r;
}

LemmaReport verify_combinato2(const WeightedWindow& win, int m, double C, int M) {
    for (double w : win.weights)
        if (std::fabs(w) > C) throw DomainError("verify_combinato2: C must dominate |w|");
    LemmaReport r;
    r.lemma = "combinato2";
    r.config = {{"m", m}, {"C", C}, {"M", M}, {"window", window_json(win)}};
    const Rational W = combinato2_sum_exact(win, M);
    finish(r, W, combinato2_bound_exact(m, C, M));
    r.implied_constant = implied_constant(W, m, C, M);
    return r;
}

LemmaReport verify_gaussian(const std::vector<GaussianWindow>& windows, const WeightedWindow& sq_window,
                            const SquaredWindow& sq) {
    for (double w : sq_window.weights)
        if (std::fabs(w) > sq.C) throw DomainError("verify_gaussian: C must dominate |w|");
    LemmaReport r;
    r.lemma = "gaussian";
    nlohmann::json wins = nlohmann::json::array();
    Rational lhs = 1;
    for (const auto& w : windows) {
        for (auto p : w.window.primes)
            for (auto q : sq_window.primes)
                if (p == q) throw DomainError("verify_gaussian: windows must be disjoint from the squared window");
        wins.push_back({{"n", w.n}, {"window", window_json(w.window)}});
        lhs *= combinato_sum_exact(w.window, w.n);
    }
    const Rational W = combinato2_sum_exact(sq_window, sq.M);
    lhs *= W;
    r.config = {{"windows", wins}, {"m", sq.m}, {"C", sq.C}, {"M", sq.M}, {"squared_window", window_json(sq_window)}};
    finish(r, lhs, gaussian_main_term_exact(windows, sq));
    r.implied_constant = implied_constant(W, sq.m, sq.C, sq.M);
    return r;
}

std::function<double(std::uint32_t)> random_weights(std::uint64_t seed, double amplitude) {
    return [seed, amplitude](std::uint32_t p) {
        satotate::CounterRng rng(seed, p);
        return amplitude * (2 * rng.next_double() - 1);
    };
}

namespace {

std::function<double(std::uint32_t)> weights_from_config(const KeyValueConfig& cfg, const std::string& prefix) {
    const std::string kind = cfg.get_string(prefix + "weights", "random");
    if (kind == "random")
        return random_weights(static_cast<std::uint64_t>(cfg.get_int(prefix + "seed", 1)),
                              cfg.get_double(prefix + "amplitude", 2.0));
    if (kind == "const") {
        const double v = cfg.get_double(prefix + "value", 1.0);
        return [v](std::uint32_t) { return v; };
    }
    throw ConfigError("unknown weights kind '" + kind + "' (expected random or const)");
}

int require_small_int(const KeyValueConfig& cfg, const std::string& key) {
    const long long v = cfg.require_int(key);
    if (v < 0 || v > 40) throw ConfigError("config key '" + key + "' outside [0, 40]");
    return static_cast<int>(v);
}

}  // namespace

LemmaReport verify_lemma_instance(const std::string& lemma_id, const KeyValueConfig& cfg) {
    if (lemma_id == "combinato") {
        auto win = make_window(cfg.require_double("x1"), cfg.require_double("x2"), weights_from_config(cfg, ""));
        return verify_combinato(win, require_small_int(cfg, "n"));
    }
    if (lemma_id == "combinato2") {
        const int m = require_small_int(cfg, "m");
        auto win = dyadic_window(m, weights_from_config(cfg, ""));
        double C = cfg.get_double("C", 0.0);
        if (!cfg.has("C"))
            for (double w : win.weights) C = std::max(C, std::fabs(w));
        return verify_combinato2(win, m, C, require_small_int(cfg, "M"));
    }
    if (lemma_id == "gaussian") {
        const auto edges = cfg.get_double_list("edges");
        const auto ns = cfg.get_double_list("n");
        if (edges.size() < 2 || ns.size() != edges.size() - 1)
            throw ConfigError("gaussian: need edges y_0,...,y_I and n_1,...,n_I");
        auto u = weights_from_config(cfg, "u_");
        std::vector<GaussianWindow> wins;
        for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
            if (ns[i] < 0 || ns[i] > 40 || ns[i] != std::floor(ns[i])) throw ConfigError("gaussian: bad n_i");
            wins.push_back({make_window(edges[i], edges[i + 1], u), static_cast<int>(ns[i])});
        }
        const int m = require_small_int(cfg, "m");
        const int M = require_small_int(cfg, "M");
        auto sqw = dyadic_window(m, weights_from_config(cfg, "w_"));
        double C = cfg.get_double("C", 0.0);
        if (!cfg.has("C"))
            for (double w : sqw.weights) C = std::max(C, std::fabs(w));
        if (M > 0 && std::ldexp(1.0, m + 1) > edges.front())
            throw ConfigError("gaussian: need 2^{m+1} <= y_0 when M > 0");
        return verify_gaussian(wins, sqw, {m, C, M});
    }
    throw DomainError("unknown lemma id '" + lemma_id + "' (expected combinato, combinato2 or gaussian)");
}

}  // namespace fmlab::oracles
