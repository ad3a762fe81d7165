#pragma once
#include <cstdint>
#include <utility>
#include <vector>

namespace fmlab {

/// All primes p with p <= n (Eratosthenes, odd-only bitmap).
std::vector<std::uint32_t> primes_up_to(std::uint64_t n);

/// Primes in the half-open window (lo, hi].
std::vector<std::uint32_t> primes_in_window(double lo, double hi);

/// Deterministic Miller-Rabin, exact for all 64-bit inputs.
bool is_prime(std::uint64_t n);

/// Trial-division factorisation into (prime, exponent), primes increasing.
std::vector<std::pair<std::uint64_t, int>> factorize(std::uint64_t n);

std::uint64_t mulmod64(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::uint64_t powmod64(std::uint64_t a, std::uint64_t e, std::uint64_t m);

/// Divisor power sums sigma_r(n) for 1 <= n <= N, reduced mod `modulus` (0 = no reduction;
/// caller is responsible for overflow in that case).
std::vector<std::uint64_t> divisor_power_sums(std::size_t N, unsigned r, std::uint64_t modulus);

}  // namespace fmlab
