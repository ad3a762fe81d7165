#include "fmlab/hecke/combinatorics.hpp"

#include "fmlab/errors.hpp"
#include "fmlab/primes.hpp"

#include <algorithm>
#include <cctype>
#include <string>

namespace fmlab::hecke {

PrimeFactorization::PrimeFactorization(std::vector<PrimePower> factors) : factors_(std::move(factors)) {
    for (std::size_t i = 0; i < factors_.size(); ++i) {
        if (!is_prime(factors_[i].prime))
            throw DomainError("PrimeFactorization: " + std::to_string(factors_[i].prime) + " is not prime");
        if (factors_[i].exponent < 1) throw DomainError("PrimeFactorization: exponent must be >= 1");
        if (i && factors_[i - 1].prime >= factors_[i].prime)
            throw DomainError("PrimeFactorization: primes must be strictly increasing");
    }
}

PrimeFactorization PrimeFactorization::of(std::uint64_t n) {
    if (n == 0) throw DomainError("PrimeFactorization: zero has no factorisation");
    std::vector<PrimePower> f;
    for (auto [p, e] : factorize(n)) f.push_back({p, e});
    return PrimeFactorization(std::move(f));
}

PrimeFactorization PrimeFactorization::parse(std::string_view text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) throw DomainError("PrimeFactorization: empty input");
    auto parse_u64 = [](const std::string& t) -> std::uint64_t {
        if (t.empty() || !std::all_of(t.begin(), t.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
            throw DomainError("PrimeFactorization: malformed number '" + t + "'");
        try {
            return std::stoull(t);
        } catch (const std::exception&) {
            throw DomainError("PrimeFactorization: number out of range '" + t + "'");
        }
    };
    PrimeFactorization acc;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        const std::size_t next = s.find_first_of("*.", pos);
        const std::string part = s.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
        const auto caret = part.find('^');
        std::uint64_t base = parse_u64(part.substr(0, caret));
        std::uint64_t exp = caret == std::string::npos ? 1 : parse_u64(part.substr(caret + 1));
        if (base == 0) throw DomainError("PrimeFactorization: zero factor");
        if (exp > 4096) throw DomainError("PrimeFactorization: exponent too large");
        PrimeFactorization f = of(base);
        std::vector<PrimePower> pw;
        for (auto pp : f.factors()) pw.push_back({pp.prime, pp.exponent * static_cast<int>(exp)});
        acc = acc * PrimeFactorization(std::move(pw));
        if (next == std::string::npos) break;
        pos = next + 1;
    }
    return acc;
}

BigInt PrimeFactorization::value() const {
    BigInt v = 1;
    for (auto pp : factors_) v *= boost::multiprecision::pow(BigInt(pp.prime), static_cast<unsigned>(pp.exponent));
    return v;
}

PrimeFactorization PrimeFactorization::operator*(const PrimeFactorization& other) const {
    std::vector<PrimePower> out;
    std::size_t i = 0, j = 0;
    const auto& a = factors_;
    const auto& b = other.factors_;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i].prime < b[j].prime)) {
            out.push_back(a[i++]);
        } else if (i == a.size() || b[j].prime < a[i].prime) {
            out.push_back(b[j++]);
        } else {
            out.push_back({a[i].prime, a[i].exponent + b[j].exponent});
            ++i;
            ++j;
        }
    }
    PrimeFactorization r;
    r.factors_ = std::move(out);
    return r;
}

bool PrimeFactorization::coprime_to(const PrimeFactorization& other) const {
    for (auto a : factors_)
        for (auto b : other.factors_)
            if (a.prime == b.prime) return false;
    return true;
}

namespace {
void check_power(int v, const char* what, int lo) {
    if (v < lo || v > kMaxPower)
        throw DomainError(std::string(what) + ": argument " + std::to_string(v) + " outside [" +
                          std::to_string(lo) + ", " + std::to_string(kMaxPower) + "]");
}
}  // namespace

const BigInt& HeckeExpansion::A() const {
    if (!even()) throw DomainError("HeckeExpansion::A: odd power has no constant term");
    return coefficient[0];
}
const BigInt& HeckeExpansion::C(int ell) const {
    if (!even() || ell < 1 || 2 * ell > alpha) throw DomainError("HeckeExpansion::C: index out of range");
    return coefficient[2 * ell];
}
const BigInt& HeckeExpansion::B() const {
    if (even()) throw DomainError("HeckeExpansion::B: even power");
    return coefficient[1];
}
const BigInt& HeckeExpansion::D(int ell) const {
    if (even() || ell < 1 || 2 * ell + 1 > alpha) throw DomainError("HeckeExpansion::D: index out of range");
    return coefficient[2 * ell + 1];
}

double HeckeExpansion::evaluate(const std::vector<double>& values) const {
    if (values.size() < coefficient.size()) throw DomainError("HeckeExpansion::evaluate: too few values");
    double s = 0;
    for (std::size_t m = 0; m < coefficient.size(); ++m)
        if (coefficient[m] != 0) s += to_double(coefficient[m]) * values[m];
    return s;
}

// coefficient of lambda(p^m) in lambda(p)^alpha:
//   alpha! (m+1) / (((alpha-m)/2)! ((alpha+m)/2 + 1)!)
// which is A_alpha (m=0), C_alpha(l) (m=2l), B_alpha (m=1), D_alpha(l) (m=2l+1).
HeckeExpansion expand_lambda_power(int alpha) {
    check_power(alpha, "expand_lambda_power", 1);
    HeckeExpansion e;
    e.alpha = alpha;
    e.coefficient.assign(static_cast<std::size_t>(alpha) + 1, BigInt(0));
    const BigInt af = factorial(static_cast<unsigned>(alpha));
    for (int m = alpha % 2; m <= alpha; m += 2) {
        const unsigned lo = static_cast<unsigned>((alpha - m) / 2);
        const unsigned hi = static_cast<unsigned>((alpha + m) / 2 + 1);
        BigInt num = af * (m + 1);
        BigInt den = factorial(lo) * factorial(hi);
        e.coefficient[m] = num / den;
        if (e.coefficient[m] * den != num) throw std::logic_error("expand_lambda_power: inexact division");
    }
    return e;
}

BigInt catalan(int m) {
    check_power(m, "catalan", 0);
    const unsigned u = static_cast<unsigned>(m);
    return factorial(2 * u) / (factorial(u) * factorial(u + 1));
}

BigInt h1_prime_power(int alpha) {
    if (alpha < 0) throw DomainError("h1_prime_power: negative exponent");
    if (alpha % 2) return 0;
    const unsigned h = static_cast<unsigned>(alpha / 2);
    const BigInt half_fact = factorial(h);
    return factorial(static_cast<unsigned>(alpha)) / (half_fact * half_fact * (h + 1));
}

BigInt h2_prime_power(int beta) {
    if (beta < 0) throw DomainError("h2_prime_power: negative exponent");
    BigInt s = 0;
    for (int k = 0; k <= beta; ++k) {
        const unsigned r = static_cast<unsigned>(beta - k);
        BigInt term = binomial(static_cast<unsigned>(beta), static_cast<unsigned>(k)) * factorial(2 * r) /
                      (factorial(r) * factorial(r + 1));
        if (k % 2) s -= term;
        else s += term;
    }
    return s;
}

BigInt h1(const PrimeFactorization& n) {
    BigInt v = 1;
    for (auto pp : n.factors()) {
        if (pp.exponent % 2) return 0;
        v *= h1_prime_power(pp.exponent);
    }
    return v;
}

BigInt h2(const PrimeFactorization& n) {
    BigInt v = 1;
    for (auto pp : n.factors()) {
        if (pp.exponent == 1) return 0;
        v *= h2_prime_power(pp.exponent);
    }
    return v;
}

std::vector<SquareTerm> binomial_expand_square(int beta) {
    check_power(beta, "binomial_expand_square", 1);
    std::vector<SquareTerm> out;
    for (int k = 0; k <= beta; ++k)
        out.push_back({k % 2 ? -1 : 1, binomial(static_cast<unsigned>(beta), static_cast<unsigned>(k)), 2 * (beta - k)});
    return out;
}

BigInt h1_recombine(const std::vector<SquareTerm>& terms) {
    BigInt s = 0;
    for (const auto& t : terms) s += t.sign * t.binomial * h1_prime_power(t.lambda_power);
    return s;
}

}  // namespace fmlab::hecke
