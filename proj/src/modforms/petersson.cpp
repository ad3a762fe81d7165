#include "fmlab/modforms/petersson.hpp"

#include "fmlab/errors.hpp"
#include "fmlab/parallel.hpp"
#include "fmlab/quadrature.hpp"
#include "fmlab/simd/kernels.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace fmlab::mf {

namespace {

constexpr double kPi = std::numbers::pi;
// heights where the rectangles above y = 1 are cut; the last one is replaced by opt.Y
const std::vector<double> kRectEdges{1.0, 1.5, 2.0, 3.0, 4.0, 5.5, 7.5};

struct Node {
    double x, y, w;
};

// curved tile (lower edge on |z| = 1) when y0 < 0, otherwise the rectangle [0,1/2] x [y0,y1]
std::vector<Node> tile_nodes(double y0, double y1, int n) {
    const auto& gl = gauss_legendre(n);
    std::vector<Node> out;
    out.reserve(2 * n * n);
    for (int panel = 0; panel < 2; ++panel) {
        const double xa = 0.25 * panel, xb = xa + 0.25;
        for (int i = 0; i < n; ++i) {
            const double x = xa + (xb - xa) * (gl.nodes[i] + 1) / 2;
            const double wx = gl.weights[i] * (xb - xa) / 2;
            const double lo = y0 < 0 ? std::sqrt(1 - x * x) : y0;
            for (int j = 0; j < n; ++j) {
                const double y = lo + (y1 - lo) * (gl.nodes[j] + 1) / 2;
                out.push_back({x, y, wx * gl.weights[j] * (y1 - lo) / 2});
            }
        }
    }
    return out;
}

struct TailModel {
    double log_c = -INFINITY;  // |a(n)| <= exp(log_c) n^s on the computed range
    double s = 0;
    std::size_t N = 0;

    TailModel(const std::vector<double>& a, std::size_t N_, int weight) : s((weight + 1) / 2.0), N(N_) {
        for (std::size_t n = 1; n <= N; ++n)
            if (a[n] != 0) log_c = std::max(log_c, std::log(std::abs(a[n])) - s * std::log(double(n)));
    }
    // bound for |sum_{n>N} a(n) q^n| at height y: the term ratios n^s r^n decrease, so the
    // first dropped term over (1 - first ratio) bounds the whole tail
    double operator()(double y) const {
        if (!std::isfinite(log_c)) return 0;
        const double n1 = double(N + 1);
        const double ratio = std::pow((n1 + 1) / n1, s) * std::exp(-2 * kPi * y);
        if (ratio >= 1) return INFINITY;
        return std::exp(log_c + s * std::log(n1) - 2 * kPi * n1 * y) / (1 - ratio);
    }
};

struct Pass {
    double value = 0, abs_value = 0, trunc = 0;
};

Pass integrate(const std::vector<double>& a, const std::vector<double>& b, bool same, std::size_t ncoef, int weight,
               double Y, int n, const TailModel& ta, const TailModel& tb) {
    std::vector<std::pair<double, double>> tiles{{-1.0, 1.0}};
    for (std::size_t i = 0; i < kRectEdges.size(); ++i) {
        const double hi = i + 1 < kRectEdges.size() ? kRectEdges[i + 1] : Y;
        if (kRectEdges[i] < Y) tiles.emplace_back(kRectEdges[i], std::min(hi, Y));
    }
    std::vector<Pass> parts(tiles.size());
    parallel_for(tiles.size(), [&](std::size_t t) {
        const auto nodes = tile_nodes(tiles[t].first, tiles[t].second, n);
        const std::size_t m = nodes.size();
        std::vector<double> qr(m), qi(m), fr(m), fi(m), gr, gi;
        for (std::size_t i = 0; i < m; ++i) {
            const double r = std::exp(-2 * kPi * nodes[i].y);
            qr[i] = r * std::cos(2 * kPi * nodes[i].x);
            qi[i] = r * std::sin(2 * kPi * nodes[i].x);
        }
        simd::horner_complex(a.data(), ncoef, qr.data(), qi.data(), m, fr.data(), fi.data());
        if (!same) {
            gr.resize(m);
            gi.resize(m);
            simd::horner_complex(b.data(), ncoef, qr.data(), qi.data(), m, gr.data(), gi.data());
        }
        const auto& GR = same ? fr : gr;
        const auto& GI = same ? fi : gi;
        Pass p;
        for (std::size_t i = 0; i < m; ++i) {
            const double yw = nodes[i].w * std::pow(nodes[i].y, weight - 2);
            const double fa = std::hypot(fr[i], fi[i]), ga = std::hypot(GR[i], GI[i]);
            // Re(f conj g)
            p.value += yw * (fr[i] * GR[i] + fi[i] * GI[i]);
            p.abs_value += yw * fa * ga;
            const double ea = ta(nodes[i].y), eb = same ? ea : tb(nodes[i].y);
            p.trunc += yw * (ea * ga + eb * fa + ea * eb);
        }
        parts[t] = p;
    });
    Pass total;
    for (const auto& p : parts) {
        // the half x <= 0 contributes the complex conjugate
        total.value += 2 * p.value;
        total.abs_value += 2 * p.abs_value;
        total.trunc += 2 * p.trunc;
    }
    return total;
}

// integral above Y: the x-integral over a full period keeps only the diagonal sum_n a(n) b(n) e^{-4 pi n y}
double diagonal_term(double ab, std::size_t n, int weight, double Y) {
    const double s = weight - 1;
    const double x = 4 * kPi * n * Y;
    return ab * std::exp(std::log(boost::math::tgamma(s, x)) - s * std::log(4 * kPi * n));
}

}  // namespace

nlohmann::json PeterssonResult::to_json() const {
    return {{"value", value},
            {"est_error", est_error},
            {"quad_error", quad_error},
            {"truncation_error", truncation_error},
            {"tail_error", tail_error},
            {"abs_integral", abs_integral},
            {"quad_depth", quad_depth},
            {"Y", Y},
            {"fourier_N", fourier_N}};
}

PeterssonResult petersson_inner(const std::vector<double>& a, const std::vector<double>& b, int weight,
                                const QuadratureOptions& opt) {
    if (a.size() < 2 || b.size() < 2) throw DomainError("petersson_inner: empty expansion");
    if (a[0] != 0 || b[0] != 0) throw DomainError("petersson_inner: forms must be cuspidal");
    if (opt.Y < 1) throw DomainError("petersson_inner: Y must be >= 1");
    const std::size_t ncoef = std::min(a.size(), b.size());
    const std::size_t N = ncoef - 1;
    const bool same = &a == &b || a == b;
    const TailModel ta(a, N, weight), tb(b, N, weight);

    PeterssonResult r;
    r.Y = opt.Y;
    r.fourier_N = N;
    // leading diagonal term above Y and the following one as its error
    std::size_t found = 0;
    for (std::size_t n = 1; n <= N && found < 2; ++n) {
        if (a[n] * b[n] == 0) continue;
        const double t = diagonal_term(a[n] * b[n], n, weight, opt.Y);
        if (found == 0)
            r.value = t;
        else
            r.tail_error = std::abs(t);
        ++found;
    }
    const double tail = r.value;

    int n = std::max(4, opt.depth);
    Pass lo = integrate(a, b, same, ncoef, weight, opt.Y, n, ta, tb);
    for (;;) {
        const Pass hi = integrate(a, b, same, ncoef, weight, opt.Y, 2 * n, ta, tb);
        r.value = hi.value + tail;
        r.abs_integral = hi.abs_value + std::abs(tail);
        r.quad_error = std::abs(hi.value - lo.value);
        r.truncation_error = hi.trunc;
        r.quad_depth = 2 * n;
        r.est_error = r.quad_error + r.truncation_error + r.tail_error;
        if (r.est_error <= opt.tol * r.abs_integral) return r;
        if (4 * n > opt.max_depth) break;
        lo = hi;
        n *= 2;
    }
    throw PrecisionError("petersson_inner: tolerance not reached at max depth", r.value, r.est_error);
}

PeterssonResult petersson_inner(const QExpansion& f, const QExpansion& g, const QuadratureOptions& opt) {
    if (f.weight != g.weight) throw DomainError("petersson_inner: weights differ");
    std::vector<double> a(f.coeffs.size()), b(g.coeffs.size());
    for (std::size_t n = 0; n < a.size(); ++n) a[n] = to_double(f.coeffs[n]);
    for (std::size_t n = 0; n < b.size(); ++n) b[n] = to_double(g.coeffs[n]);
    return petersson_inner(a, b, f.weight, opt);
}

PeterssonResult petersson_norm(const EigenformData& f, const QuadratureOptions& opt) {
    const auto a = f.coeffs_double();
    return petersson_inner(a, a, f.weight, opt);
}

std::vector<double> product_coeffs(const EigenformData& f, const EigenformData& g) {
    const std::size_t N = std::min(f.N(), g.N());
    std::vector<double> out(N + 1, 0.0);
    for (std::size_t n = 2; n <= N; ++n) {
        HighFloat s = 0;
        for (std::size_t i = 1; i < n; ++i) s += f.coeffs[i] * g.coeffs[n - i];
        out[n] = to_double(s);
    }
    return out;
}

}  // namespace fmlab::mf
