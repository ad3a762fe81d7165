#pragma once
// Long q-expansions (millions of terms) of Miller basis forms: products are done modulo
// several NTT-friendly primes and coefficients recovered by CRT at requested indices only.
#include "fmlab/bigint.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <vector>

namespace fmlab::mf {

struct NttPrime {
    std::uint64_t p;
    std::uint64_t generator;  // primitive root mod p
};

/// Largest primes p < 2^62 with 2^26 | p - 1, in decreasing order.
std::vector<NttPrime> ntt_primes(std::size_t count);

/// Truncated product (a*b mod x^{len}) modulo p, len = min(a.size(), b.size()).
std::vector<std::uint64_t> ntt_multiply_mod(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b,
                                            const NttPrime& prime);

struct LongBasisValues {
    int weight = 0;
    std::size_t N = 0;
    std::vector<std::size_t> indices;          // sorted, each <= N
    std::vector<std::vector<BigInt>> values;   // values[i][t] = a_{f_i}(indices[t]) for Miller basis f_i
    std::size_t primes_used = 0;
};

/// Exact Miller-basis coefficients at `indices` for every requested weight, through one
/// multi-modular pass. Reconstruction is accepted once one extra prime confirms every value.
std::map<int, LongBasisValues> long_miller_basis(const std::vector<int>& weights, std::size_t N,
                                                 const std::vector<std::size_t>& indices, unsigned threads = 0);

}  // namespace fmlab::mf
