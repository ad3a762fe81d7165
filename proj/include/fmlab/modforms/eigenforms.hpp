#pragma once
// Hecke eigenbases of S_k from the T_2 matrix on the Miller basis.
#include "fmlab/bigint.hpp"
#include "fmlab/modforms/qexpansion.hpp"

#include <json.hpp>

#include <cstddef>
#include <cstdint>
#include <map>
#include <vector>

namespace fmlab::mf {

using IntMatrix = std::vector<std::vector<BigInt>>;

struct EigenformData {
    int weight = 0;
    int index = 0;      // position among the eigenforms of this weight, by increasing T_2 eigenvalue
    int dimension = 0;  // dim S_k, also the degree of the T_2 characteristic polynomial
    std::vector<BigInt> char_poly;     // coefficients, constant term first
    HighFloat t2_eigenvalue;
    std::vector<HighFloat> coordinates;  // f = sum_j c_j f_j over the Miller basis; c_j = a(j)
    std::vector<HighFloat> coeffs;       // a(0..N)
    std::vector<BigInt> exact_coeffs;    // only when T_2 has an integer eigenvalue here
    std::vector<double> lambda;          // lambda[n] = a(n) / n^{(k-1)/2}; lambda[0] = 0
    std::vector<std::uint32_t> primes;   // primes <= N
    std::vector<double> theta;           // Satake angles, lambda(p) = 2 cos(theta)
    double residual = 0;                 // |T2 c - mu c| / |c|

    std::size_t N() const { return coeffs.empty() ? 0 : coeffs.size() - 1; }
    bool rational() const { return !exact_coeffs.empty(); }
    std::vector<double> coeffs_double() const;
    nlohmann::json to_json() const;
};

/// M[i][j] = a(i+1) of T_2 f_j, so T_2 acts on Miller coordinates as c -> M c.
IntMatrix hecke_t2_matrix(const std::vector<QExpansion>& basis);

/// det(x I - M), constant term first (Faddeev-LeVerrier over the integers).
std::vector<BigInt> characteristic_polynomial(const IntMatrix& M);

/// Real roots in increasing order via Sturm isolation then bisection at HighFloat precision.
/// Throws DomainError when the polynomial has a repeated root.
std::vector<HighFloat> real_roots(const std::vector<BigInt>& poly);

/// Normalized (a(1) = 1) eigenforms of weight k with coefficients up to N.
std::vector<EigenformData> hecke_eigenforms(int k, std::size_t N);

struct HeckeCheck {
    double max_abs_lambda_p = 0;   // over primes <= min(N, prime_limit)
    double max_mult_error = 0;     // |lambda(m)lambda(n) - lambda(mn)|, gcd(m,n)=1
    double max_recursion_error = 0;  // |lambda(p)lambda(p^r) - lambda(p^{r+1}) - lambda(p^{r-1})|
    std::size_t relations = 0;
    bool deligne = false;
    bool multiplicative = false;
    nlohmann::json to_json() const;
};

HeckeCheck check_hecke_relations(const EigenformData& f, double tol = 1e-10, std::size_t prime_limit = 1000);

/// lambda(p) for every prime p <= pmax and every eigenform of each weight (long multimodular pass).
struct PrimeLambdaTable {
    int weight = 0;
    std::vector<std::uint32_t> primes;
    std::vector<std::vector<double>> lambda;  // [form index][prime index]
};

std::map<int, PrimeLambdaTable> prime_lambda_tables(const std::vector<int>& weights, std::uint32_t pmax,
                                                    unsigned threads = 0);

}  // namespace fmlab::mf
