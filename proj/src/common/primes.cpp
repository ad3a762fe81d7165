#include "fmlab/primes.hpp"

#include <cmath>
#include <stdexcept>

namespace fmlab {

std::vector<std::uint32_t> primes_up_to(std::uint64_t n) {
    std::vector<std::uint32_t> out;
    if (n < 2) return out;
    if (n > 0xFFFFFFFFull) throw std::invalid_argument("primes_up_to: limit exceeds 32 bits");
    out.push_back(2);
    // bit i <-> odd number 2i+1
    const std::uint64_t half = (n - 1) / 2 + 1;
    std::vector<bool> composite(half, false);
    for (std::uint64_t i = 1; i < half; ++i) {
        if (composite[i]) continue;
        const std::uint64_t p = 2 * i + 1;
        out.push_back(static_cast<std::uint32_t>(p));
        for (std::uint64_t j = p * p / 2; j < half; j += p) composite[j] = true;
    }
    return out;
}

std::vector<std::uint32_t> primes_in_window(double lo, double hi) {
    std::vector<std::uint32_t> out;
    if (!(hi >= 2.0) || hi <= lo) return out;
    const auto all = primes_up_to(static_cast<std::uint64_t>(std::floor(hi)));
    for (auto p : all)
        if (static_cast<double>(p) > lo) out.push_back(p);
    return out;
}

std::uint64_t mulmod64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

std::uint64_t powmod64(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod64(r, a, m);
        a = mulmod64(a, a, m);
        e >>= 1;
    }
    return r;
}

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    static const std::uint64_t small[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    for (auto p : small) {
        if (n == p) return true;
        if (n % p == 0) return false;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (auto a : small) {
        std::uint64_t x = powmod64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod64(x, x, n);
            if (x == n - 1) {
                witness = false;
                break;
            }
        }
        if (witness) return false;
    }
    return true;
}

std::vector<std::pair<std::uint64_t, int>> factorize(std::uint64_t n) {
    std::vector<std::pair<std::uint64_t, int>> f;
    if (n == 0) throw std::invalid_argument("factorize: zero");
    for (std::uint64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        if (n % p) continue;
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        f.emplace_back(p, e);
    }
    if (n > 1) f.emplace_back(n, 1);
    return f;
}

std::vector<std::uint64_t> divisor_power_sums(std::size_t N, unsigned r, std::uint64_t modulus) {
    std::vector<std::uint64_t> s(N + 1, 0);
    for (std::size_t d = 1; d <= N; ++d) {
        std::uint64_t dr;
        if (modulus) {
            dr = powmod64(d % modulus, r, modulus);
        } else {
            dr = 1;
            for (unsigned i = 0; i < r; ++i) dr *= d;
        }
        for (std::size_t m = d; m <= N; m += d) {
            if (modulus) {
                s[m] += dr;
                if (s[m] >= modulus) s[m] -= modulus;
            } else {
                s[m] += dr;
            }
        }
    }
    return s;
}

}  // namespace fmlab
