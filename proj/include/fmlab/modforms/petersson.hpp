#pragma once
// Petersson inner products by quadrature over the standard fundamental domain.
#include "fmlab/modforms/eigenforms.hpp"
#include "fmlab/modforms/qexpansion.hpp"

#include <json.hpp>

#include <cstddef>
#include <vector>

namespace fmlab::mf {

struct QuadratureOptions {
    int depth = 24;        // Gauss-Legendre order per tile side; compared against 2*depth
    int max_depth = 192;   // doubling stops here
    double Y = 10.0;       // rectangles end at height Y, the rest is the leading Fourier term
    double tol = 1e-10;    // on est_error / integral of |f g| y^w dmu
};

struct PeterssonResult {
    double value = 0;
    double est_error = 0;
    double quad_error = 0;        // |I(n) - I(2n)|
    double truncation_error = 0;  // dropped Fourier terms beyond fourier_N
    double tail_error = 0;        // next Fourier term above Y
    double abs_integral = 0;      // integral of |f g| y^w dmu, the scale for tol
    int quad_depth = 0;
    double Y = 0;
    std::size_t fourier_N = 0;
    nlohmann::json to_json() const;
};

/// integral over |x| <= 1/2, |z| >= 1 of f(z) conj(g(z)) y^weight dx dy / y^2, for real
/// q-coefficients a(0..N), b(0..N) of two cusp forms of the given weight.
/// Throws PrecisionError (best value, est_error) when tol is not met by max_depth.
PeterssonResult petersson_inner(const std::vector<double>& a, const std::vector<double>& b, int weight,
                                const QuadratureOptions& opt = {});
PeterssonResult petersson_inner(const QExpansion& f, const QExpansion& g, const QuadratureOptions& opt = {});
PeterssonResult petersson_norm(const EigenformData& f, const QuadratureOptions& opt = {});

/// Coefficients of f*g from high precision coefficients, a(0..N) each.
std::vector<double> product_coeffs(const EigenformData& f, const EigenformData& g);

}  // namespace fmlab::mf
