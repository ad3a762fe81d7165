#pragma once
// Exact Hecke-relation expansions and the moment functions h1, h2.
#include "fmlab/bigint.hpp"

#include <cstdint>
#include <string_view>
#include <vector>

namespace fmlab::hecke {

/// Largest power accepted by expand_lambda_power / catalan / binomial_expand_square.
inline constexpr int kMaxPower = 64;

struct PrimePower {
    std::uint64_t prime;
    int exponent;
};

class PrimeFactorization {
public:
    PrimeFactorization() = default;  // the integer 1
    /// Validates: primes pass is_prime, strictly increasing, exponents >= 1.
    explicit PrimeFactorization(std::vector<PrimePower> factors);
    static PrimeFactorization of(std::uint64_t n);
    /// Accepts "48", "2^4", "2^4*3^2", "2^4 * 3" (whitespace ignored, '.' also accepted as separator).
    static PrimeFactorization parse(std::string_view text);

    const std::vector<PrimePower>& factors() const { return factors_; }
    BigInt value() const;
    PrimeFactorization operator*(const PrimeFactorization& other) const;
    bool coprime_to(const PrimeFactorization& other) const;

private:
    std::vector<PrimePower> factors_;
};

/// lambda(p)^alpha = sum_m coefficient(m) * lambda(p^m), m = alpha, alpha-2, ..., >= 0.
struct HeckeExpansion {
    int alpha = 0;
    /// coefficient[m] multiplies lambda(p^m); zero when m and alpha differ in parity.
    std::vector<BigInt> coefficient;

    bool even() const { return alpha % 2 == 0; }
    // Named pieces of the parity-split form.
    const BigInt& A() const;          // even alpha: constant term
    const BigInt& C(int ell) const;   // even alpha: coefficient of lambda(p^{2 ell}), 1 <= ell <= alpha/2
    const BigInt& B() const;          // odd alpha: coefficient of lambda(p)
    const BigInt& D(int ell) const;   // odd alpha: coefficient of lambda(p^{2 ell + 1}), 1 <= ell <= (alpha-1)/2

    /// Substitutes lambda(p^m) = values[m].
    double evaluate(const std::vector<double>& values) const;
};

HeckeExpansion expand_lambda_power(int alpha);

BigInt catalan(int m);

/// h1 on a single prime power p^alpha (independent of p).
BigInt h1_prime_power(int alpha);
/// h2 on a single prime power p^beta.
BigInt h2_prime_power(int beta);

BigInt h1(const PrimeFactorization& n);
BigInt h2(const PrimeFactorization& n);

struct SquareTerm {
    int sign;             // +1 or -1
    BigInt binomial;      // binom(beta, k)
    int lambda_power;     // power of lambda(p): 2(beta - k)
};

/// (lambda(p)^2 - 1)^beta, highest power first.
std::vector<SquareTerm> binomial_expand_square(int beta);

/// sum of sign * binomial * h1(p^lambda_power) over the expansion.
BigInt h1_recombine(const std::vector<SquareTerm>& terms);

}  // namespace fmlab::hecke
