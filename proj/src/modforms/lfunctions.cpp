#include "fmlab/modforms/lfunctions.hpp"

#include "fmlab/errors.hpp"

#include <cmath>
#include <numbers>

namespace fmlab::mf {

namespace {
constexpr double kPi = std::numbers::pi;

double rel(double err, double v) { return v == 0 ? INFINITY : std::abs(err / v); }

// a(n) of f*g at HighFloat precision
HighFloat product_coeff(const EigenformData& f, const EigenformData& g, std::size_t n) {
    HighFloat s = 0;
    for (std::size_t i = 1; i < n; ++i) s += f.coeffs[i] * g.coeffs[n - i];
    return s;
}
}  // namespace

double sym_square_from_norm(int k, double norm) {
    return 2 * kPi * kPi * std::exp((k - 1) * std::log(4 * kPi) - std::lgamma(double(k))) * norm;
}

double a1_squared(int k, double L) { return 2 * kPi * kPi / (std::exp(std::lgamma(double(k))) * L); }

double sym_square_euler(const std::vector<std::uint32_t>& primes, const std::vector<double>& lambda_p, std::uint32_t x) {
    if (primes.size() != lambda_p.size()) throw DomainError("sym_square_euler: size mismatch");
    double log_l = 0;
    for (std::size_t i = 0; i < primes.size() && primes[i] <= x; ++i) {
        const double X = 1.0 / primes[i], l = lambda_p[i];
        // (1 - alpha^2 X)(1 - beta^2 X) = 1 - (lambda^2 - 2) X + X^2
        log_l -= std::log1p(-(l * l - 2) * X + X * X) + std::log1p(-X);
    }
    return std::exp(log_l);
}

nlohmann::json SpectralForm::to_json() const {
    return {{"weight", form.weight},
            {"index", form.index},
            {"norm", norm.to_json()},
            {"L_sym2", L_sym2},
            {"L_sym2_error", L_sym2_error}};
}

SpectralBasis spectral_basis(int weight, const QuadratureOptions& opt, std::size_t N) {
    SpectralBasis b;
    b.weight = weight;
    for (auto& f : hecke_eigenforms(weight, N)) {
        SpectralForm s;
        s.norm = petersson_norm(f, opt);
        s.L_sym2 = sym_square_from_norm(weight, s.norm.value);
        s.L_sym2_error = s.L_sym2 * rel(s.norm.est_error, s.norm.value);
        s.form = std::move(f);
        b.forms.push_back(std::move(s));
    }
    return b;
}

nlohmann::json HarmonicCheck::to_json() const {
    return {{"t", t}, {"u", u}, {"weight", weight}, {"value", value}, {"est_error", est_error}, {"terms", terms}};
}

HarmonicCheck harmonic_sum_check(std::uint64_t t, std::uint64_t u, const SpectralBasis& basis) {
    HarmonicCheck h;
    h.t = t;
    h.u = u;
    h.weight = basis.weight;
    const double c = 2 * kPi * kPi / (basis.weight - 1);
    for (const auto& g : basis.forms) {
        if (g.form.N() < std::max(t, u)) throw DomainError("harmonic_sum_check: eigenform expansion too short");
        const double term = c * g.form.lambda[t] * g.form.lambda[u] / g.L_sym2;
        h.terms.push_back(term);
        h.value += term;
        h.est_error += std::abs(term) * rel(g.L_sym2_error, g.L_sym2);
    }
    return h;
}

nlohmann::json FourthMoment::to_json() const {
    return {{"k", k}, {"f_index", f_index}, {"value", value}, {"est_error", est_error}, {"norm_f2", norm_f2.to_json()}};
}

FourthMoment fourth_moment(const SpectralForm& f, const QuadratureOptions& opt) {
    FourthMoment m;
    m.k = f.form.weight;
    m.f_index = f.form.index;
    const auto f2 = product_coeffs(f.form, f.form);
    m.norm_f2 = petersson_inner(f2, f2, 2 * m.k, opt);
    const double nf = f.norm.value;
    m.value = m.norm_f2.value / (nf * nf);
    m.est_error = m.value * (rel(m.norm_f2.est_error, m.norm_f2.value) + 2 * rel(f.norm.est_error, nf));
    if (!(m.value > 0)) throw PrecisionError("fourth_moment: non-positive value", m.value, m.est_error);
    return m;
}

double watson_L_value(double inner, int k, double L_f, double L_g) {
    return inner * inner * 2 * (2 * k - 1) * L_f * L_f * L_g / (kPi * kPi * kPi);
}

nlohmann::json WatsonReport::to_json() const {
    nlohmann::json j;
    j["k"] = k;
    j["f_index"] = f_index;
    j["L_f"] = L_f;
    j["fourth_moment"] = moment.to_json();
    auto arr = nlohmann::json::array();
    for (const auto& r : rows)
        arr.push_back({{"g_index", r.g_index},
                       {"inner", r.inner},
                       {"inner_error", r.inner_error},
                       {"inner_miller", r.inner_miller},
                       {"L_g", r.L_g},
                       {"L_value", r.L_value},
                       {"L_value_error", r.L_value_error}});
    j["rows"] = arr;
    j["parseval_sum"] = parseval_sum;
    j["parseval_miller"] = parseval_miller;
    j["reassembled"] = reassembled;
    j["roundtrip_rel"] = roundtrip_rel;
    j["parseval_rel"] = parseval_rel;
    return j;
}

WatsonReport watson_report(const SpectralForm& f, const SpectralBasis& basis, const QuadratureOptions& opt) {
    const int k = f.form.weight;
    if (basis.weight != 2 * k) throw DomainError("watson_report: basis must have weight 2k");
    WatsonReport w;
    w.k = k;
    w.f_index = f.form.index;
    w.L_f = f.L_sym2;
    w.moment = fourth_moment(f, opt);
    const double nf = f.norm.value;
    const double rel_nf = rel(f.norm.est_error, nf);
    const auto f2 = product_coeffs(f.form, f.form);

    // f^2 = sum_j gamma_j g_j from the first d coefficients (g_j(n) matrix, n = 1..d)
    const std::size_t d = basis.forms.size();
    std::vector<std::vector<HighFloat>> A(d, std::vector<HighFloat>(d + 1));
    for (std::size_t n = 0; n < d; ++n) {
        for (std::size_t j = 0; j < d; ++j) A[n][j] = basis.forms[j].form.coeffs[n + 1];
        A[n][d] = product_coeff(f.form, f.form, n + 1);
    }
    for (std::size_t col = 0; col < d; ++col) {
        std::size_t piv = col;
        for (std::size_t i = col + 1; i < d; ++i)
            if (abs(A[i][col]) > abs(A[piv][col])) piv = i;
        std::swap(A[col], A[piv]);
        if (A[col][col] == 0) throw PrecisionError("watson_report: singular eigenbasis coefficient matrix", 0, 0);
        for (std::size_t i = 0; i < d; ++i) {
            if (i == col) continue;
            const HighFloat r = A[i][col] / A[col][col];
            for (std::size_t j = col; j <= d; ++j) A[i][j] -= r * A[col][j];
        }
    }

    double lsum = 0;
    for (std::size_t j = 0; j < d; ++j) {
        const auto& g = basis.forms[j];
        WatsonRow row;
        row.g_index = g.form.index;
        const auto ip = petersson_inner(f2, g.form.coeffs_double(), 2 * k, opt);
        const double ng = g.norm.value;
        row.inner = ip.value / (nf * std::sqrt(ng));
        // quadrature error measured against the absolute integral, plus the norms
        row.inner_error = ip.est_error / (nf * std::sqrt(ng)) + std::abs(row.inner) * (rel_nf + 0.5 * rel(g.norm.est_error, ng));
        const double gamma = to_double(A[j][d] / A[j][j]);
        row.inner_miller = gamma * std::sqrt(ng) / nf;
        row.L_g = g.L_sym2;
        row.L_value = watson_L_value(row.inner, k, w.L_f, row.L_g);
        row.L_value_error = row.L_value * (2 * rel(row.inner_error, row.inner) + 2 * rel(f.L_sym2_error, w.L_f) +
                                           rel(g.L_sym2_error, row.L_g));
        w.parseval_sum += row.inner * row.inner;
        w.parseval_miller += row.inner_miller * row.inner_miller;
        lsum += row.L_value / (w.L_f * w.L_f * row.L_g);
        w.rows.push_back(row);
    }
    w.reassembled = kPi * kPi * kPi / (2.0 * (2 * k - 1)) * lsum;
    w.roundtrip_rel = std::abs(w.reassembled - w.moment.value) / w.moment.value;
    w.parseval_rel = std::abs(w.parseval_sum - w.moment.value) / w.moment.value;
    return w;
}

}  // namespace fmlab::mf
