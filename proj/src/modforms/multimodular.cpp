#include "fmlab/modforms/multimodular.hpp"

#include "fmlab/errors.hpp"
#include "fmlab/modforms/qexpansion.hpp"
#include "fmlab/parallel.hpp"
#include "fmlab/primes.hpp"

#include <gmp.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <tuple>

namespace fmlab::mf {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

constexpr int kTwoAdicity = 26;

// Montgomery arithmetic modulo an odd p < 2^62, R = 2^64.
struct Montgomery {
    u64 p, pinv_neg, r2;
    explicit Montgomery(u64 mod) : p(mod) {
        u64 inv = mod;  // Newton iteration for mod^{-1} mod 2^64
        for (int i = 0; i < 6; ++i) inv *= 2 - mod * inv;
        pinv_neg = ~inv + 1;
        const u128 r = (static_cast<u128>(1) << 64) % mod;
        r2 = static_cast<u64>((r * r) % mod);
    }
    u64 reduce(u128 t) const {
        const u64 m = static_cast<u64>(t) * pinv_neg;
        const u64 res = static_cast<u64>((t + static_cast<u128>(m) * p) >> 64);
        return fold(res - p);
    }
    u64 mul(u64 a, u64 b) const { return reduce(static_cast<u128>(a) * b); }
    u64 to_mont(u64 a) const { return mul(a % p, r2); }
    // Branch-free: operands are < p < 2^62, so a wrapped difference has its top bit set.
    u64 fold(u64 t) const { return t + (p & (0 - (t >> 63))); }
    u64 add(u64 a, u64 b) const { return fold(a + b - p); }
    u64 sub(u64 a, u64 b) const { return fold(a - b); }
};

// Radix-2 transforms with Shoup twiddle products and Harvey's lazy reduction: values
// stay in [0, 2p) (forward) or [0, 4p) (inverse) and are normalised only at the end.
struct NttPlan {
    Montgomery mont;
    std::size_t L;
    // per-level twiddles at offset h (level h uses primitive 2h-th roots), plus Shoup quotients
    std::vector<u64> fwd, fwd_q, inv, inv_q;
    u64 final_scale;  // R^2 / L: a Montgomery product with it turns x*R^{-1} into x/L

    NttPlan(const NttPrime& pr, std::size_t len)
        : mont(pr.p), L(len), fwd(len), fwd_q(len), inv(len), inv_q(len) {
        const u64 p = pr.p;
        const u64 w = powmod64(pr.generator, (p - 1) / len, p);
        const u64 winv = powmod64(w, p - 2, p);
        for (std::size_t h = 1; h < len; h *= 2) {
            const u64 step = powmod64(w, len / (2 * h), p), istep = powmod64(winv, len / (2 * h), p);
            const u64 sm = mont.to_mont(step), ism = mont.to_mont(istep);
            u64 a = mont.to_mont(1), b = a;
            for (std::size_t j = 0; j < h; ++j) {
                // leave Montgomery form: reduce(aR) = a
                fwd[h + j] = mont.reduce(a);
                inv[h + j] = mont.reduce(b);
                fwd_q[h + j] = static_cast<u64>((static_cast<u128>(fwd[h + j]) << 64) / p);
                inv_q[h + j] = static_cast<u64>((static_cast<u128>(inv[h + j]) << 64) / p);
                a = mont.mul(a, sm);
                b = mont.mul(b, ism);
            }
        }
        const u128 r = (static_cast<u128>(1) << 64) % p;
        const u64 r2 = static_cast<u64>((r * r) % p);
        final_scale = mulmod64(r2, powmod64(len % p, p - 2, p), p);
    }

    // natural order in (values < p), bit-reversed out (values < 2p)
    void forward(std::vector<u64>& a) const { forward_rec(a.data(), L); }
    // bit-reversed in (values < 4p), natural out (values < p), including the 1/L factor
    // and the R^{-1} left by a Montgomery pointwise product
    void inverse(std::vector<u64>& a) const {
        inverse_rec(a.data(), L);
        for (auto& v : a) v = mont.mul(v, final_scale);
    }

private:
    static constexpr std::size_t kBlock = std::size_t(1) << 14;

    // x * w mod p in [0, 2p) for any x < 2^64
    u64 shoup(u64 x, u64 w, u64 wq) const {
        const u64 q = static_cast<u64>((static_cast<u128>(x) * wq) >> 64);
        return x * w - q * mont.p;
    }
    u64 reduce2(u64 x, u64 two_p) const {
        const u64 t = x - two_p;
        return t + (two_p & (0 - (t >> 63)));
    }

    void dif_level(u64* a, std::size_t n, std::size_t h) const {
        const u64* tw = fwd.data() + h;
        const u64* tq = fwd_q.data() + h;
        const u64 two_p = 2 * mont.p;
        for (std::size_t s = 0; s < n; s += 2 * h) {
            u64* x = a + s;
            u64* y = x + h;
            for (std::size_t j = 0; j < h; ++j) {
                const u64 u = x[j], v = y[j];
                x[j] = reduce2(u + v, two_p);
                y[j] = shoup(u - v + two_p, tw[j], tq[j]);
            }
        }
    }
    void dit_level(u64* a, std::size_t n, std::size_t h) const {
        const u64* tw = inv.data() + h;
        const u64* tq = inv_q.data() + h;
        const u64 two_p = 2 * mont.p;
        for (std::size_t s = 0; s < n; s += 2 * h) {
            u64* x = a + s;
            u64* y = x + h;
            for (std::size_t j = 0; j < h; ++j) {
                const u64 u = reduce2(x[j], two_p), t = shoup(y[j], tw[j], tq[j]);
                x[j] = u + t;
                y[j] = u - t + two_p;
            }
        }
    }
    // a sub-block of size n uses the same per-level twiddles as a full transform of size n
    void forward_rec(u64* a, std::size_t n) const {
        if (n <= kBlock) {
            for (std::size_t h = n / 2; h >= 1; h /= 2) dif_level(a, n, h);
            return;
        }
        dif_level(a, n, n / 2);
        forward_rec(a, n / 2);
        forward_rec(a + n / 2, n / 2);
    }
    void inverse_rec(u64* a, std::size_t n) const {
        if (n <= kBlock) {
            for (std::size_t h = 1; h < n; h *= 2) dit_level(a, n, h);
            return;
        }
        inverse_rec(a, n / 2);
        inverse_rec(a + n / 2, n / 2);
        dit_level(a, n, n / 2);
    }
};

std::size_t transform_length(std::size_t len) {
    std::size_t L = 1;
    while (L < 2 * len) L *= 2;
    if (L > (std::size_t(1) << kTwoAdicity)) throw DomainError("ntt: expansion too long for the prime set");
    return L;
}

// Truncated series product with a cache of forward transforms keyed by factor identity.
class SeriesRing {
public:
    SeriesRing(const NttPrime& pr, std::size_t len) : plan_(pr, transform_length(len)), len_(len) {}

    std::vector<u64> transform(const std::vector<u64>& a) const {
        std::vector<u64> t(plan_.L, 0);
        std::copy(a.begin(), a.begin() + std::min(a.size(), len_), t.begin());
        plan_.forward(t);
        return t;
    }
    std::vector<u64> multiply_transformed(const std::vector<u64>& ta, const std::vector<u64>& tb) const {
        std::vector<u64> c(plan_.L);
        for (std::size_t i = 0; i < plan_.L; ++i) c[i] = plan_.mont.mul(ta[i], tb[i]);
        plan_.inverse(c);
        c.resize(len_);
        return c;
    }
    const Montgomery& mont() const { return plan_.mont; }

private:
    NttPlan plan_;
    std::size_t len_;
};

using Monomial = std::tuple<int, int, int>;  // (a, b, c) for E4^a E6^b Delta^c

struct PrimeWork {
    const NttPrime& prime;
    std::size_t len;  // N + 1
    SeriesRing ring;
    std::map<Monomial, std::vector<u64>> series;
    std::map<char, std::vector<u64>> base_transform;  // '4', '6', 'D'

    PrimeWork(const NttPrime& pr, std::size_t length, const std::vector<u64>& s3, const std::vector<u64>& s5)
        : prime(pr), len(length), ring(pr, length) {
        const u64 p = pr.p;
        std::vector<u64> e4(len), e6(len);
        e4[0] = e6[0] = 1;
        const u64 c4 = 240 % p, c6 = p - (504 % p);
        for (std::size_t n = 1; n < len; ++n) {
            e4[n] = mulmod64(c4, s3[n] % p, p);
            e6[n] = mulmod64(c6, s5[n] % p, p);
        }
        series[{1, 0, 0}] = std::move(e4);
        series[{0, 1, 0}] = std::move(e6);
        const auto& E4 = series[{1, 0, 0}];
        const auto& E6 = series[{0, 1, 0}];
        base_transform['4'] = ring.transform(E4);
        base_transform['6'] = ring.transform(E6);
        const auto e4sq = ring.multiply_transformed(base_transform['4'], base_transform['4']);
        series[{2, 0, 0}] = e4sq;
        const auto e4cube = ring.multiply_transformed(ring.transform(e4sq), base_transform['4']);
        series[{3, 0, 0}] = e4cube;
        const auto e6sq = ring.multiply_transformed(base_transform['6'], base_transform['6']);
        series[{0, 2, 0}] = e6sq;
        const u64 inv1728 = powmod64(1728 % p, p - 2, p);
        std::vector<u64> delta(len);
        for (std::size_t n = 0; n < len; ++n) delta[n] = mulmod64(ring.mont().sub(e4cube[n], e6sq[n]), inv1728, p);
        series[{0, 0, 1}] = delta;
        base_transform['D'] = ring.transform(series[{0, 0, 1}]);
    }

    const std::vector<u64>& monomial(int a, int b, int c) {
        const Monomial key{a, b, c};
        auto it = series.find(key);
        if (it != series.end()) return it->second;
        if (a == 0 && b == 0 && c == 0) throw std::logic_error("monomial: constant requested");
        // peel one generator whose transform is cached
        char f;
        Monomial rest;
        if (c > 0) {
            f = 'D';
            rest = {a, b, c - 1};
        } else if (a > 0) {
            f = '4';
            rest = {a - 1, b, c};
        } else {
            f = '6';
            rest = {a, b - 1, c};
        }
        const auto& [ra, rb, rc] = rest;
        std::vector<u64> out;
        if (ra == 0 && rb == 0 && rc == 0) {
            throw std::logic_error("monomial: base series missing");
        }
        const auto& r = monomial(ra, rb, rc);
        out = ring.multiply_transformed(ring.transform(r), base_transform[f]);
        return series.emplace(key, std::move(out)).first->second;
    }
};

// sigma_r(n) for n <= N as 128-bit integers (exact for r <= 5, N < 10^7).
std::vector<u128> sigma128(std::size_t N, unsigned r) {
    std::vector<u128> s(N + 1, 0);
    for (std::size_t d = 1; d <= N; ++d) {
        u128 dr = 1;
        for (unsigned i = 0; i < r; ++i) dr *= d;
        for (std::size_t m = d; m <= N; m += d) s[m] += dr;
    }
    return s;
}

std::vector<u64> reduce_all(const std::vector<u128>& s, u64 p) {
    std::vector<u64> out(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) out[i] = static_cast<u64>(s[i] % p);
    return out;
}

// Garner mixed-radix reconstruction into (-M/2, M/2], M = prod of moduli, with all
// modular constants precomputed once per prime set.
class CrtReconstructor {
public:
    explicit CrtReconstructor(const std::vector<u64>& moduli) : moduli_(moduli) {
        const std::size_t n = moduli.size();
        for (auto p : moduli) mont_.emplace_back(p);
        inv_.assign(n, std::vector<u64>(n, 0));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < i; ++j)
                inv_[i][j] = mont_[i].to_mont(powmod64(moduli[j] % moduli[i], moduli[i] - 2, moduli[i]));
        M_ = 1;
        for (auto p : moduli) M_ *= p;
        half_M_ = M_ / 2;
    }

    BigInt operator()(const std::vector<u64>& r) const {
        const std::size_t n = moduli_.size();
        u64 c[64];
        for (std::size_t i = 0; i < n; ++i) {
            u64 t = r[i];
            for (std::size_t j = 0; j < i; ++j) t = mont_[i].mul(mont_[i].sub(t, c[j] % moduli_[i]), inv_[i][j]);
            c[i] = t;
        }
        BigInt x = c[n - 1];
        for (std::size_t i = n - 1; i-- > 0;) {
            mpz_mul_ui(x.backend().data(), x.backend().data(), moduli_[i]);
            mpz_add_ui(x.backend().data(), x.backend().data(), c[i]);
        }
        if (x > half_M_) x -= M_;
        return x;
    }

private:
    std::vector<u64> moduli_;
    std::vector<Montgomery> mont_;
    std::vector<std::vector<u64>> inv_;
    BigInt M_, half_M_;
};

u64 mod_u64(const BigInt& v, u64 p) {
    const u64 r = mpz_fdiv_ui(v.backend().data(), p);  // non-negative remainder
    return r;
}

}  // namespace

std::vector<NttPrime> ntt_primes(std::size_t count) {
    std::vector<NttPrime> out;
    const u64 step = u64(1) << kTwoAdicity;
    for (u64 c = ((u64(1) << 62) - 1) / step; c > 0 && out.size() < count; --c) {
        const u64 p = c * step + 1;
        if (!is_prime(p)) continue;
        // primitive root: g^((p-1)/q) != 1 for every prime q | p-1
        auto fac = factorize(c);
        std::vector<u64> qs = {2};
        for (auto [q, e] : fac)
            if (q != 2) qs.push_back(q);
        for (u64 g = 3;; ++g) {
            bool ok = true;
            for (auto q : qs)
                if (powmod64(g, (p - 1) / q, p) == 1) {
                    ok = false;
                    break;
                }
            if (ok) {
                out.push_back({p, g});
                break;
            }
        }
    }
    return out;
}

std::vector<std::uint64_t> ntt_multiply_mod(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b,
                                            const NttPrime& prime) {
    const std::size_t len = std::min(a.size(), b.size());
    if (len == 0) return {};
    SeriesRing ring(prime, len);
    auto reduce = [&](const std::vector<u64>& v) {
        std::vector<u64> r(len);
        for (std::size_t i = 0; i < len; ++i) r[i] = v[i] % prime.p;
        return r;
    };
    return ring.multiply_transformed(ring.transform(reduce(a)), ring.transform(reduce(b)));
}

std::map<int, LongBasisValues> long_miller_basis(const std::vector<int>& weights, std::size_t N,
                                                 const std::vector<std::size_t>& indices, unsigned threads) {
    for (auto idx : indices)
        if (idx > N) throw DomainError("long_miller_basis: index beyond N");
    if (!std::is_sorted(indices.begin(), indices.end())) throw DomainError("long_miller_basis: indices must be sorted");
    if (N < 40) throw DomainError("long_miller_basis: N too small; use the exact backend");

    // exact echelon transforms from short expansions
    struct WeightPlan {
        int k;
        int d;
        std::vector<std::vector<BigInt>> R;
        std::vector<Monomial> gens;
    };
    std::vector<WeightPlan> plans;
    double bits_needed = 0;
    for (int k : weights) {
        const int d = cusp_form_dimension(k);
        if (d == 0) throw DomainError("long_miller_basis: no cusp forms of weight " + std::to_string(k));
        WeightPlan wp{k, d, miller_transform(cusp_generators(k, static_cast<std::size_t>(d) + 2)), {}};
        BigInt rsum = 0;
        for (int c = 1; c <= d; ++c) {
            const int rest = k - 12 * c;
            const int b = (rest % 4 == 2) ? 1 : 0;
            wp.gens.emplace_back((rest - 6 * b) / 4, b, c);
            for (const auto& x : wp.R[c - 1]) rsum += boost::multiprecision::abs(x);
        }
        // Basis forms are fixed combinations of eigenforms, so |a(n)| grows like n^{(k-1)/2}
        // times a divisor-function factor; the margin covers the combination constants and
        // the verification prime catches any shortfall.
        const double bits = 0.5 * (k - 1) * std::log2(double(N) + 1) + 0.5 * std::log2(double(N) + 1) +
                            std::log2(to_double(rsum) + 1) + 8 * d + 40;
        bits_needed = std::max(bits_needed, bits);
        plans.push_back(std::move(wp));
    }
    std::size_t nprimes = static_cast<std::size_t>(std::ceil(bits_needed / 61.0)) + 1;  // +1 verification

    const auto s3 = sigma128(N, 3), s5 = sigma128(N, 5);
    std::vector<NttPrime> primes;
    // residues[prime][plan][basis][t]
    std::vector<std::vector<std::vector<std::vector<u64>>>> residues;
    std::mutex mu;

    auto compute_prime = [&](const NttPrime& pr) {
        PrimeWork work(pr, N + 1, reduce_all(s3, pr.p), reduce_all(s5, pr.p));
        std::vector<std::vector<std::vector<u64>>> out;
        for (const auto& wp : plans) {
            std::vector<std::vector<u64>> gen_vals;
            for (const auto& [a, b, c] : wp.gens) {
                const auto& s = work.monomial(a, b, c);
                std::vector<u64> v(indices.size());
                for (std::size_t t = 0; t < indices.size(); ++t) v[t] = s[indices[t]];
                gen_vals.push_back(std::move(v));
            }
            std::vector<std::vector<u64>> basis(wp.d, std::vector<u64>(indices.size(), 0));
            for (int i = 0; i < wp.d; ++i)
                for (int j = 0; j < wp.d; ++j) {
                    if (wp.R[i][j] == 0) continue;
                    BigInt rm = wp.R[i][j] % pr.p;
                    if (rm < 0) rm += pr.p;
                    const u64 r = rm.convert_to<unsigned long long>();
                    for (std::size_t t = 0; t < indices.size(); ++t)
                        basis[i][t] = (basis[i][t] + mulmod64(r, gen_vals[j][t], pr.p)) % pr.p;
                }
            out.push_back(std::move(basis));
        }
        return out;
    };

    for (int attempt = 0; attempt < 4; ++attempt) {
        const auto want = ntt_primes(nprimes);
        if (want.size() < nprimes) throw DomainError("long_miller_basis: ran out of NTT primes");
        const std::size_t have = primes.size();
        std::vector<std::vector<std::vector<std::vector<u64>>>> fresh(nprimes - have);
        // bounded concurrency: each prime holds several transforms of length 2N
        const unsigned workers = std::min(threads ? threads : default_threads(), 2u);
        parallel_for(nprimes - have, [&](std::size_t i) { fresh[i] = compute_prime(want[have + i]); }, workers);
        for (std::size_t i = have; i < nprimes; ++i) {
            primes.push_back(want[i]);
            residues.push_back(std::move(fresh[i - have]));
        }
        // reconstruct with all but the last prime; the last one must confirm each value
        std::vector<u64> moduli;
        for (std::size_t i = 0; i + 1 < primes.size(); ++i) moduli.push_back(primes[i].p);
        const u64 check = primes.back().p;
        const CrtReconstructor crt(moduli);
        std::map<int, LongBasisValues> result;
        bool ok = true;
        for (std::size_t w = 0; w < plans.size() && ok; ++w) {
            LongBasisValues lv;
            lv.weight = plans[w].k;
            lv.N = N;
            lv.indices = indices;
            lv.primes_used = primes.size();
            lv.values.assign(plans[w].d, std::vector<BigInt>(indices.size()));
            std::vector<u64> rs(moduli.size());
            for (int i = 0; i < plans[w].d && ok; ++i)
                for (std::size_t t = 0; t < indices.size(); ++t) {
                    for (std::size_t q = 0; q < moduli.size(); ++q) rs[q] = residues[q][w][i][t];
                    BigInt v = crt(rs);
                    if (mod_u64(v, check) != residues.back()[w][i][t]) {
                        ok = false;
                        break;
                    }
                    lv.values[i][t] = std::move(v);
                }
            result[plans[w].k] = std::move(lv);
        }
        if (ok) return result;
        nprimes += 2;
    }
    throw PrecisionError("long_miller_basis: CRT reconstruction did not stabilise", 0.0, 0.0);
}

}  // namespace fmlab::mf
