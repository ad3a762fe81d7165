#include "fmlab/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace fmlab {

namespace {

GaussLegendreRule build_rule(int n) {
    GaussLegendreRule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    const long double pi = std::numbers::pi_v<long double>;
    for (int i = 0; i < (n + 1) / 2; ++i) {
        long double x = std::cos(pi * (i + 0.75L) / (n + 0.5L));
        long double dp = 0;
        for (int it = 0; it < 100; ++it) {
            long double p0 = 1, p1 = x;
            for (int k = 2; k <= n; ++k) {
                long double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1);
            const long double dx = p1 / dp;
            x -= dx;
            if (std::fabs(dx) < 1e-19L) break;
        }
        // recompute derivative at the converged node
        long double p0 = 1, p1 = x;
        for (int k = 2; k <= n; ++k) {
            long double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1);
        const long double w = 2 / ((1 - x * x) * dp * dp);
        r.nodes[i] = static_cast<double>(-x);
        r.nodes[n - 1 - i] = static_cast<double>(x);
        r.weights[i] = r.weights[n - 1 - i] = static_cast<double>(w);
    }
    if (n % 2) r.nodes[n / 2] = 0.0;
    return r;
}

double apply_rule(const GaussLegendreRule& rule, const std::function<double(double)>& f, double a,
                  double b) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double s = 0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) s += rule.weights[i] * f(c + h * rule.nodes[i]);
    return s * h;
}

void adapt(const GaussLegendreRule& rule, const std::function<double(double)>& f, double a, double b,
           double whole, double tol, int depth, QuadratureResult& acc) {
    const double m = 0.5 * (a + b);
    const double left = apply_rule(rule, f, a, m), right = apply_rule(rule, f, m, b);
    const double diff = std::fabs(left + right - whole);
    if (diff <= tol || depth <= 0) {
        acc.value += left + right;
        acc.est_error += diff;
        acc.panels += 2;
        return;
    }
    adapt(rule, f, a, m, left, 0.5 * tol, depth - 1, acc);
    adapt(rule, f, m, b, right, 0.5 * tol, depth - 1, acc);
}

}  // namespace

const GaussLegendreRule& gauss_legendre(int n) {
    if (n < 1 || n > 512) throw std::invalid_argument("gauss_legendre: order out of range");
    static std::mutex mu;
    static std::map<int, GaussLegendreRule> cache;
    std::lock_guard<std::mutex> g(mu);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, build_rule(n)).first;
    return it->second;
}

QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    double rel_tol, double abs_tol, int order, int max_depth) {
    if (!(b > a)) return {};
    const auto& rule = gauss_legendre(order);
    const double whole = apply_rule(rule, f, a, b);
    // scale by the integral of |f| so integrals that cancel to ~0 still terminate
    const double magnitude = apply_rule(rule, [&](double x) { return std::fabs(f(x)); }, a, b);
    const double tol = std::max(abs_tol, rel_tol * magnitude);
    QuadratureResult acc;
    adapt(rule, f, a, b, whole, tol, max_depth, acc);
    return acc;
}

}  // namespace fmlab
