#pragma once
#include <functional>
#include <vector>

namespace fmlab {

struct GaussLegendreRule {
    std::vector<double> nodes;    // on [-1, 1], ascending
    std::vector<double> weights;
};

/// n-point rule, computed once per n (Newton on P_n in long double) and cached.
const GaussLegendreRule& gauss_legendre(int n);

struct QuadratureResult {
    double value = 0.0;
    double est_error = 0.0;
    int panels = 0;
};

/// Adaptive Gauss-Legendre: a panel is accepted when its n-point value agrees with the sum
/// over its two halves. Global tolerance max(abs_tol, rel_tol * integral of |f|), halved per split.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    double rel_tol = 1e-13, double abs_tol = 0.0,
                                    int order = 20, int max_depth = 20);

}  // namespace fmlab
