#include "fmlab/modforms/qexpansion.hpp"

#include "fmlab/errors.hpp"
#include "fmlab/primes.hpp"

#include <gmp.h>

#include <algorithm>

namespace fmlab::mf {

nlohmann::json QExpansion::to_json() const {
    nlohmann::json j;
    j["weight"] = weight;
    j["N"] = N();
    auto arr = nlohmann::json::array();
    for (const auto& c : coeffs) arr.push_back(c.str());
    j["coeffs"] = arr;
    return j;
}

QExpansion operator*(const QExpansion& a, const QExpansion& b) {
    QExpansion r;
    r.weight = a.weight + b.weight;
    if (a.coeffs.empty() || b.coeffs.empty()) return r;
    const std::size_t len = std::min(a.coeffs.size(), b.coeffs.size());
    r.coeffs.assign(len, BigInt(0));
    // schoolbook with mpz_addmul; skip leading zeros of both operands
    std::size_t a0 = 0, b0 = 0;
    while (a0 < len && a.coeffs[a0] == 0) ++a0;
    while (b0 < len && b.coeffs[b0] == 0) ++b0;
    for (std::size_t n = a0 + b0; n < len; ++n) {
        mpz_ptr acc = r.coeffs[n].backend().data();
        for (std::size_t i = a0; i + b0 <= n; ++i)
            mpz_addmul(acc, a.coeffs[i].backend().data(), b.coeffs[n - i].backend().data());
    }
    return r;
}

namespace {
QExpansion combine(const QExpansion& a, const QExpansion& b, int sign) {
    if (a.weight != b.weight) throw DomainError("q-expansion sum: weights differ");
    QExpansion r;
    r.weight = a.weight;
    const std::size_t len = std::min(a.coeffs.size(), b.coeffs.size());
    r.coeffs.resize(len);
    for (std::size_t i = 0; i < len; ++i) r.coeffs[i] = sign > 0 ? BigInt(a.coeffs[i] + b.coeffs[i]) : BigInt(a.coeffs[i] - b.coeffs[i]);
    return r;
}
}  // namespace

QExpansion operator+(const QExpansion& a, const QExpansion& b) { return combine(a, b, 1); }
QExpansion operator-(const QExpansion& a, const QExpansion& b) { return combine(a, b, -1); }

QExpansion scale(const QExpansion& a, const BigInt& c) {
    QExpansion r = a;
    for (auto& x : r.coeffs) x *= c;
    return r;
}

QExpansion divide_exact(const QExpansion& a, const BigInt& d) {
    QExpansion r = a;
    for (auto& x : r.coeffs) {
        if (x % d != 0) throw std::logic_error("divide_exact: coefficient not divisible");
        x /= d;
    }
    return r;
}

QExpansion power(const QExpansion& a, int e, std::size_t N) {
    QExpansion r;
    r.weight = 0;
    r.coeffs.assign(N + 1, BigInt(0));
    r.coeffs[0] = 1;
    for (int i = 0; i < e; ++i) r = r * a;
    return r;
}

QExpansion eisenstein_series(int weight, std::size_t N) {
    if (weight != 4 && weight != 6) throw DomainError("eisenstein_series: only weights 4 and 6");
    if (N < 1) throw DomainError("eisenstein_series: N must be >= 1");
    QExpansion e;
    e.weight = weight;
    e.coeffs.assign(N + 1, BigInt(0));
    e.coeffs[0] = 1;
    const unsigned r = weight - 1;
    const long mult = weight == 4 ? 240 : -504;
    // sigma_r(n) fits in 64 bits only for small N; accumulate in BigInt.
    std::vector<BigInt> sigma(N + 1, BigInt(0));
    for (std::size_t d = 1; d <= N; ++d) {
        const BigInt dr = boost::multiprecision::pow(BigInt(d), r);
        for (std::size_t m = d; m <= N; m += d) sigma[m] += dr;
    }
    for (std::size_t n = 1; n <= N; ++n) e.coeffs[n] = sigma[n] * mult;
    return e;
}

QExpansion delta_series(std::size_t N) {
    const auto e4 = eisenstein_series(4, N), e6 = eisenstein_series(6, N);
    QExpansion d = (e4 * e4 * e4) - (e6 * e6);
    d = divide_exact(d, 1728);
    d.weight = 12;
    return d;
}

int cusp_form_dimension(int k) {
    if (k < 12 || k % 2) return 0;
    return k % 12 == 2 ? k / 12 - 1 : k / 12;
}

std::vector<QExpansion> cusp_generators(int k, std::size_t N) {
    const int d = cusp_form_dimension(k);
    std::vector<QExpansion> out;
    if (d == 0) return out;
    const auto e4 = eisenstein_series(4, N), e6 = eisenstein_series(6, N);
    const auto delta = delta_series(N);
    for (int c = 1; c <= d; ++c) {
        const int rest = k - 12 * c;
        const int b = (rest % 4 == 2) ? 1 : 0;
        const int a = (rest - 6 * b) / 4;
        QExpansion g = power(delta, c, N) * power(e4, a, N) * power(e6, b, N);
        g.weight = k;
        out.push_back(std::move(g));
    }
    return out;
}

std::vector<std::vector<BigInt>> miller_transform(const std::vector<QExpansion>& gens) {
    const std::size_t d = gens.size();
    std::vector<std::vector<BigInt>> R(d, std::vector<BigInt>(d, BigInt(0)));
    // rows of the current basis restricted to positions 1..d, plus the transform
    std::vector<std::vector<BigInt>> head(d, std::vector<BigInt>(d + 1, BigInt(0)));
    for (std::size_t i = 0; i < d; ++i) {
        R[i][i] = 1;
        for (std::size_t j = 1; j <= d; ++j) head[i][j] = gens[i].coeffs[j];
        if (head[i][i + 1] != 1) throw std::logic_error("miller_transform: generator not monic at q^c");
    }
    for (std::size_t i = d; i-- > 0;) {
        for (std::size_t j = i + 1; j < d; ++j) {
            const BigInt c = head[i][j + 1];
            if (c == 0) continue;
            for (std::size_t t = 1; t <= d; ++t) head[i][t] -= c * head[j][t];
            for (std::size_t t = 0; t < d; ++t) R[i][t] -= c * R[j][t];
        }
    }
    return R;
}

std::vector<QExpansion> miller_basis(int k, std::size_t N) {
    if (k % 2) throw DomainError("miller_basis: odd weight");
    if (k < 12) return {};
    const int d = cusp_form_dimension(k);
    if (N < static_cast<std::size_t>(d) + 20) throw DomainError("miller_basis: need N >= dim + 20");
    const auto gens = cusp_generators(k, N);
    const auto R = miller_transform(gens);
    std::vector<QExpansion> basis;
    for (int i = 0; i < d; ++i) {
        QExpansion f;
        f.weight = k;
        f.coeffs.assign(N + 1, BigInt(0));
        for (int j = 0; j < d; ++j)
            if (R[i][j] != 0)
                for (std::size_t n = 0; n <= N; ++n) f.coeffs[n] += R[i][j] * gens[j].coeffs[n];
        basis.push_back(std::move(f));
    }
    return basis;
}

}  // namespace fmlab::mf
