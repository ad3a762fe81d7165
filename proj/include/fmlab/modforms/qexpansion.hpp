#pragma once
// Exact q-expansions of level-1 modular forms.
#include "fmlab/bigint.hpp"

#include <json.hpp>

#include <cstddef>
#include <vector>

namespace fmlab::mf {

/// coeffs[n] = a(n) for 0 <= n <= N.
struct QExpansion {
    int weight = 0;
    std::vector<BigInt> coeffs;

    std::size_t N() const { return coeffs.empty() ? 0 : coeffs.size() - 1; }
    bool is_cuspidal() const { return !coeffs.empty() && coeffs[0] == 0; }
    nlohmann::json to_json() const;  // integers as decimal strings
};

/// Products and sums keep the shorter truncation.
QExpansion operator*(const QExpansion& a, const QExpansion& b);
QExpansion operator+(const QExpansion& a, const QExpansion& b);
QExpansion operator-(const QExpansion& a, const QExpansion& b);
QExpansion scale(const QExpansion& a, const BigInt& c);
/// Exact division of every coefficient; throws if some coefficient is not divisible.
QExpansion divide_exact(const QExpansion& a, const BigInt& d);
QExpansion power(const QExpansion& a, int e, std::size_t N);

QExpansion eisenstein_series(int weight, std::size_t N);
QExpansion delta_series(std::size_t N);

/// dim S_k for level 1 (0 for odd or k < 12).
int cusp_form_dimension(int k);

/// Monomial generators Delta^c E4^a E6^b, 4a + 6b = k - 12c, for c = 1..dim S_k.
std::vector<QExpansion> cusp_generators(int k, std::size_t N);

/// Integer upper-triangular R with miller_basis[i] = sum_j R[i][j] * cusp_generators[j].
std::vector<std::vector<BigInt>> miller_transform(const std::vector<QExpansion>& generators);

/// Echelon basis: a(j)(f_i) = delta_ij for 1 <= i, j <= dim S_k. Requires N >= dim + 20.
std::vector<QExpansion> miller_basis(int k, std::size_t N);

}  // namespace fmlab::mf
