#pragma once
// Kloosterman sums, integer-order Bessel J, and the arithmetic side of the Petersson formula.
#include "fmlab/bigint.hpp"

#include <json.hpp>

#include <cstdint>
#include <vector>

namespace fmlab::mf {

/// S(m,n;c) kept exactly as residue counts: S = sum_r counts[r] e(r/c), an element of Z[zeta_c].
/// The sum is real (d -> -d pairs conjugates) but an integer only for special c.
struct KloostermanSum {
    std::int64_t m = 0, n = 0;
    std::uint64_t c = 1;
    std::vector<std::uint64_t> counts;  // counts[r] = #{d mod c, (d,c)=1 : md + n dbar = r mod c}
    HighFloat value_hp;
    double value = 0;
    std::int64_t nearest = 0;  // nearest integer
    double residual = 0;       // |value - nearest|
    bool integral() const { return residual < 1e-6; }
    nlohmann::json to_json() const;
};

KloostermanSum kloosterman_sum(std::int64_t m, std::int64_t n, std::uint64_t c);

/// Nearest integer to S(m,n;c); PrecisionError when the residual is >= 1e-6.
std::int64_t kloosterman_integer(std::int64_t m, std::int64_t n, std::uint64_t c);

/// J_nu(x) for integer nu >= 0 by the ascending series at HighFloat precision,
/// summed until terms fall below 1e-40 of the running magnitude.
HighFloat bessel_j(int nu, const HighFloat& x);
double bessel_j(int nu, double x);

struct DiagonalResult {
    std::uint64_t t = 0, u = 0;
    int weight = 0;
    std::uint64_t c_max = 0;
    double delta = 0;       // 1_{t=u}
    double correction = 0;  // 2 pi i^{-w} sum_c S(t,u;c)/c J_{w-1}(4 pi sqrt(tu)/c)
    double value = 0;       // delta + correction
    double tail_bound = 0;  // bound for the dropped c > c_max
    std::vector<double> terms;  // per c
    nlohmann::json to_json() const;
};

/// Arithmetic side of the Petersson formula in weight w (even):
/// sum_g omega_g lambda_g(t) lambda_g(u) = delta + 2 pi i^{-w} sum_c S(t,u;c)/c J_{w-1}(4 pi sqrt(tu)/c).
/// PrecisionError when the tail bound beyond c_max exceeds tail_tol.
DiagonalResult petersson_full_diagonal(std::uint64_t t, std::uint64_t u, int weight, std::uint64_t c_max = 64,
                                       double tail_tol = 1e-12);

}  // namespace fmlab::mf
