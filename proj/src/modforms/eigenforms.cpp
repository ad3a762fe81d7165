#include "fmlab/modforms/eigenforms.hpp"

#include "fmlab/errors.hpp"
#include "fmlab/modforms/multimodular.hpp"
#include "fmlab/parallel.hpp"
#include "fmlab/primes.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace fmlab::mf {

namespace {

using RPoly = std::vector<Rational>;  // constant term first

void trim(RPoly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

Rational eval(const RPoly& p, const Rational& x) {
    Rational r = 0;
    for (auto it = p.rbegin(); it != p.rend(); ++it) r = r * x + *it;
    return r;
}

RPoly derivative(const RPoly& p) {
    RPoly d;
    for (std::size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * static_cast<long>(i));
    trim(d);
    return d;
}

// remainder of a / b, b nonzero
RPoly remainder(RPoly a, const RPoly& b) {
    trim(a);
    while (a.size() >= b.size() && !a.empty()) {
        const Rational f = a.back() / b.back();
        const std::size_t shift = a.size() - b.size();
        for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= f * b[i];
        a.pop_back();
        trim(a);
    }
    return a;
}

struct Sturm {
    std::vector<RPoly> chain;

    explicit Sturm(const RPoly& p) {
        chain.push_back(p);
        chain.push_back(derivative(p));
        while (!chain.back().empty()) {
            RPoly r = remainder(chain[chain.size() - 2], chain.back());
            for (auto& c : r) c = -c;
            if (r.empty()) break;
            chain.push_back(std::move(r));
        }
        if (chain.back().size() > 1) throw DomainError("real_roots: repeated root (eigenvalues not separated)");
    }

    int variations(const Rational& x) const {
        int v = 0, last = 0;
        for (const auto& q : chain) {
            const Rational y = eval(q, x);
            const int s = y > 0 ? 1 : (y < 0 ? -1 : 0);
            if (s == 0) continue;
            if (last != 0 && s != last) ++v;
            last = s;
        }
        return v;
    }
};

HighFloat pow_half(std::uint64_t n, int k) {
    // n^{(k-1)/2} for even k: n^{(k-2)/2} * sqrt(n)
    BigInt p = 1;
    for (int i = 0; i < (k - 2) / 2; ++i) p *= n;
    return to_high(p) * sqrt(HighFloat(n));
}

std::string hf_str(const HighFloat& x) { return x.str(40, std::ios_base::scientific); }

// Solve B c = 0 with c_0 = 1 (B singular of corank one) by pivoted elimination on the
// columns 1..d-1; any row may serve as pivot.
template <class T>
std::vector<T> null_vector(std::vector<std::vector<T>> B) {
    const std::size_t d = B.size();
    std::vector<T> c(d, T(0));
    c[0] = 1;
    if (d == 1) return c;
    // augmented: columns 1..d-1 and rhs = -B[i][0]
    std::vector<std::vector<T>> A(d, std::vector<T>(d));
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 1; j < d; ++j) A[i][j - 1] = B[i][j];
        A[i][d - 1] = -B[i][0];
    }
    std::vector<bool> used(d, false);
    std::vector<std::size_t> pivot_row(d - 1);
    for (std::size_t col = 0; col + 1 < d; ++col) {
        std::size_t best = d;
        T best_abs = 0;
        for (std::size_t i = 0; i < d; ++i) {
            if (used[i]) continue;
            const T a = abs(A[i][col]);
            if (best == d || a > best_abs) {
                best = i;
                best_abs = a;
            }
        }
        if (best == d || best_abs == 0) throw PrecisionError("eigenvector: singular reduced system", 0, 0);
        used[best] = true;
        pivot_row[col] = best;
        for (std::size_t i = 0; i < d; ++i) {
            if (i == best || A[i][col] == 0) continue;
            const T f = A[i][col] / A[best][col];
            for (std::size_t j = col; j < d; ++j) A[i][j] -= f * A[best][j];
        }
    }
    for (std::size_t col = 0; col + 1 < d; ++col) c[col + 1] = A[pivot_row[col]][d - 1] / A[pivot_row[col]][col];
    return c;
}

}  // namespace

std::vector<double> EigenformData::coeffs_double() const {
    std::vector<double> out(coeffs.size());
    for (std::size_t n = 0; n < coeffs.size(); ++n) out[n] = to_double(coeffs[n]);
    return out;
}

nlohmann::json EigenformData::to_json() const {
    nlohmann::json j;
    j["weight"] = weight;
    j["index"] = index;
    j["dimension"] = dimension;
    auto cp = nlohmann::json::array();
    for (const auto& c : char_poly) cp.push_back(c.str());
    j["t2_char_poly"] = cp;
    j["t2_eigenvalue"] = hf_str(t2_eigenvalue);
    j["rational"] = rational();
    auto co = nlohmann::json::array();
    for (const auto& c : coordinates) co.push_back(hf_str(c));
    j["miller_coordinates"] = co;
    auto a = nlohmann::json::array();
    if (rational())
        for (const auto& c : exact_coeffs) a.push_back(c.str());
    else
        for (const auto& c : coeffs) a.push_back(hf_str(c));
    j["coeffs"] = a;
    j["lambda"] = lambda;
    j["residual"] = residual;
    return j;
}

IntMatrix hecke_t2_matrix(const std::vector<QExpansion>& basis) {
    const std::size_t d = basis.size();
    if (d == 0) return {};
    const int k = basis.front().weight;
    for (const auto& f : basis)
        if (f.N() < 2 * d) throw DomainError("hecke_t2_matrix: need N >= 2 dim");
    const BigInt p_k1 = BigInt(1) << (k - 1);
    IntMatrix M(d, std::vector<BigInt>(d));
    for (std::size_t i = 0; i < d; ++i) {
        const std::size_t n = i + 1;
        for (std::size_t j = 0; j < d; ++j) {
            BigInt v = basis[j].coeffs[2 * n];
            if (n % 2 == 0) v += p_k1 * basis[j].coeffs[n / 2];
            M[i][j] = v;
        }
    }
    return M;
}

std::vector<BigInt> characteristic_polynomial(const IntMatrix& A) {
    const std::size_t n = A.size();
    std::vector<BigInt> c(n + 1);
    c[n] = 1;
    IntMatrix Mk(n, std::vector<BigInt>(n, BigInt(0)));
    for (std::size_t k = 1; k <= n; ++k) {
        // Mk <- A * M_{k-1} + c_{n-k+1} I
        IntMatrix next(n, std::vector<BigInt>(n, BigInt(0)));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t l = 0; l < n; ++l) {
                if (A[i][l] == 0) continue;
                for (std::size_t j = 0; j < n; ++j) next[i][j] += A[i][l] * Mk[l][j];
            }
        for (std::size_t i = 0; i < n; ++i) next[i][i] += c[n - k + 1];
        Mk = std::move(next);
        BigInt tr = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t l = 0; l < n; ++l) tr += A[i][l] * Mk[l][i];
        if (tr % static_cast<long>(k) != 0) throw std::logic_error("characteristic_polynomial: inexact division");
        c[n - k] = -tr / static_cast<long>(k);
    }
    return c;
}

std::vector<HighFloat> real_roots(const std::vector<BigInt>& poly) {
    RPoly p(poly.begin(), poly.end());
    trim(p);
    if (p.size() < 2) return {};
    const Sturm st(p);
    // Cauchy bound, rounded up to a power of two
    Rational bound = 0;
    for (std::size_t i = 0; i + 1 < p.size(); ++i) bound = std::max(bound, Rational(abs(p[i] / p.back())));
    Rational B = 1;
    while (B <= bound + 1) B *= 2;

    struct Interval {
        Rational a, b;
        int count;
    };
    std::vector<Interval> todo{{-B, B, st.variations(-B) - st.variations(B)}};
    std::vector<Interval> isolated;
    while (!todo.empty()) {
        Interval iv = todo.back();
        todo.pop_back();
        if (iv.count == 0) continue;
        if (iv.count == 1) {
            isolated.push_back(iv);
            continue;
        }
        const Rational m = (iv.a + iv.b) / 2;
        const int vm = st.variations(m);
        todo.push_back({iv.a, m, st.variations(iv.a) - vm});
        todo.push_back({m, iv.b, vm - st.variations(iv.b)});
    }
    // exact bisection on (a, b] down to ~2^-230 relative to the bound
    const Rational width = B / (Rational(BigInt(1) << 230));
    std::vector<HighFloat> roots;
    for (auto iv : isolated) {
        bool exact = false;
        while (iv.b - iv.a > width) {
            const Rational m = (iv.a + iv.b) / 2;
            if (eval(p, m) == 0) {
                iv.a = iv.b = m;
                exact = true;
                break;
            }
            if (st.variations(iv.a) - st.variations(m) == 1)
                iv.b = m;
            else
                iv.a = m;
        }
        roots.push_back(exact ? to_high(iv.a) : to_high(Rational((iv.a + iv.b) / 2)));
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

std::vector<EigenformData> hecke_eigenforms(int k, std::size_t N) {
    const int d = cusp_form_dimension(k);
    if (k % 2 || d == 0) throw DomainError("hecke_eigenforms: S_k is zero for this weight");
    const std::size_t Nb = std::max<std::size_t>({N, 2 * static_cast<std::size_t>(d), static_cast<std::size_t>(d) + 20});
    const auto basis = miller_basis(k, Nb);
    const auto M = hecke_t2_matrix(basis);
    const auto cp = characteristic_polynomial(M);
    const auto roots = real_roots(cp);
    if (static_cast<int>(roots.size()) != d) throw PrecisionError("hecke_eigenforms: T_2 has non-real or missing roots", 0, 0);

    const auto primes = primes_up_to(static_cast<std::uint32_t>(N));
    std::vector<EigenformData> out;
    for (int r = 0; r < d; ++r) {
        EigenformData f;
        f.weight = k;
        f.index = r;
        f.dimension = d;
        f.char_poly = cp;
        f.t2_eigenvalue = roots[r];

        // integer eigenvalue -> exact rational eigenvector and integer coefficients
        const HighFloat rounded = round(roots[r]);
        BigInt mu_int;
        mpfr_get_z(mu_int.backend().data(), rounded.backend().data(), MPFR_RNDN);
        {
            Rational val = 0;
            for (auto it = cp.rbegin(); it != cp.rend(); ++it) val = val * mu_int + *it;
            if (val == 0) {
                std::vector<std::vector<Rational>> B(d, std::vector<Rational>(d));
                for (int i = 0; i < d; ++i)
                    for (int j = 0; j < d; ++j) B[i][j] = Rational(M[i][j]) - (i == j ? Rational(mu_int) : Rational(0));
                const auto c = null_vector(B);
                f.exact_coeffs.assign(N + 1, BigInt(0));
                for (std::size_t n = 0; n <= N; ++n) {
                    Rational a = 0;
                    for (int j = 0; j < d; ++j) a += c[j] * basis[j].coeffs[n];
                    if (denominator(a) != 1) throw std::logic_error("hecke_eigenforms: rational eigenform with non-integral coefficient");
                    f.exact_coeffs[n] = numerator(a);
                }
            }
        }

        std::vector<std::vector<HighFloat>> B(d, std::vector<HighFloat>(d));
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) B[i][j] = to_high(M[i][j]) - (i == j ? roots[r] : HighFloat(0));
        f.coordinates = null_vector(B);
        HighFloat res = 0, norm = 0;
        for (int i = 0; i < d; ++i) {
            HighFloat s = 0;
            for (int j = 0; j < d; ++j) s += B[i][j] * f.coordinates[j];
            res += s * s;
            norm += f.coordinates[i] * f.coordinates[i];
        }
        const HighFloat rel = sqrt(res / norm);
        f.residual = to_double(rel);
        if (rel > HighFloat("1e-20")) throw PrecisionError("hecke_eigenforms: eigenvector residual too large", 0, f.residual);

        f.coeffs.assign(N + 1, HighFloat(0));
        if (f.rational()) {
            for (std::size_t n = 0; n <= N; ++n) f.coeffs[n] = to_high(f.exact_coeffs[n]);
        } else {
            for (std::size_t n = 0; n <= N; ++n)
                for (int j = 0; j < d; ++j)
                    if (basis[j].coeffs[n] != 0) f.coeffs[n] += f.coordinates[j] * to_high(basis[j].coeffs[n]);
        }
        f.lambda.assign(N + 1, 0.0);
        for (std::size_t n = 1; n <= N; ++n) f.lambda[n] = to_double(f.coeffs[n] / pow_half(n, k));
        f.primes = primes;
        for (auto p : primes) f.theta.push_back(std::acos(std::clamp(f.lambda[p] / 2, -1.0, 1.0)));
        out.push_back(std::move(f));
    }
    return out;
}

nlohmann::json HeckeCheck::to_json() const {
    return {{"max_abs_lambda_p", max_abs_lambda_p},
            {"max_mult_error", max_mult_error},
            {"max_recursion_error", max_recursion_error},
            {"relations", relations},
            {"deligne", deligne},
            {"multiplicative", multiplicative}};
}

HeckeCheck check_hecke_relations(const EigenformData& f, double tol, std::size_t prime_limit) {
    HeckeCheck hc;
    const std::size_t N = f.N();
    const auto& L = f.lambda;
    for (auto p : f.primes)
        if (p <= prime_limit) hc.max_abs_lambda_p = std::max(hc.max_abs_lambda_p, std::abs(L[p]));
    for (std::size_t m = 2; m * m <= N; ++m)
        for (std::size_t n = m + 1; m * n <= N; ++n) {
            if (std::gcd(m, n) != 1) continue;
            hc.max_mult_error = std::max(hc.max_mult_error, std::abs(L[m] * L[n] - L[m * n]));
            ++hc.relations;
        }
    for (auto p : f.primes) {
        // L[1] = 1 covers r = 1 (lambda(p)^2 = lambda(p^2) + 1)
        for (std::size_t pr = p, prev = 1; pr * p <= N; prev = pr, pr *= p) {
            hc.max_recursion_error = std::max(hc.max_recursion_error, std::abs(L[p] * L[pr] - L[pr * p] - L[prev]));
            ++hc.relations;
        }
    }
    hc.deligne = hc.max_abs_lambda_p <= 2.0;
    hc.multiplicative = hc.max_mult_error <= tol && hc.max_recursion_error <= tol;
    return hc;
}

std::map<int, PrimeLambdaTable> prime_lambda_tables(const std::vector<int>& weights, std::uint32_t pmax, unsigned threads) {
    const auto primes = primes_up_to(pmax);
    const std::vector<std::size_t> idx(primes.begin(), primes.end());
    const auto long_vals = long_miller_basis(weights, pmax, idx, threads);
    std::map<int, PrimeLambdaTable> out;
    for (int k : weights) {
        const auto forms = hecke_eigenforms(k, 2);
        const auto& lv = long_vals.at(k);
        PrimeLambdaTable t;
        t.weight = k;
        t.primes = primes;
        t.lambda.assign(forms.size(), std::vector<double>(primes.size()));
        parallel_for(primes.size(), [&](std::size_t i) {
            const HighFloat scale = pow_half(primes[i], k);
            std::vector<HighFloat> b(lv.values.size());
            for (std::size_t j = 0; j < b.size(); ++j) b[j] = to_high(lv.values[j][i]);
            for (std::size_t r = 0; r < forms.size(); ++r) {
                HighFloat a = 0;
                for (std::size_t j = 0; j < b.size(); ++j) a += forms[r].coordinates[j] * b[j];
                t.lambda[r][i] = to_double(a / scale);
            }
        }, threads);
        out.emplace(k, std::move(t));
    }
    return out;
}

}  // namespace fmlab::mf
