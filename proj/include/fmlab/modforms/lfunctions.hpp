#pragma once
// L(1, sym^2 f), harmonic weights, the fourth moment and central values via Watson's identity.
#include "fmlab/modforms/eigenforms.hpp"
#include "fmlab/modforms/petersson.hpp"

#include <json.hpp>

#include <cstdint>
#include <vector>

namespace fmlab::mf {

/// L(1, sym^2 f) = 2 pi^2 (4 pi)^{k-1} <f,f> / Gamma(k) for f with a(1) = 1.
double sym_square_from_norm(int k, double norm);
/// |a_f(1)|^2 = 2 pi^2 / (Gamma(k) L(1, sym^2 f)): the scaling that makes <F,F> = 1
/// for F = a_f(1) sum lambda(n) (4 pi n)^{(k-1)/2} q^n y^{k/2}.
double a1_squared(int k, double L);

/// Partial Euler product prod_{p <= x} [(1 - alpha^2/p)(1 - 1/p)(1 - beta^2/p)]^{-1}.
double sym_square_euler(const std::vector<std::uint32_t>& primes, const std::vector<double>& lambda_p,
                        std::uint32_t x);

struct SpectralForm {
    EigenformData form;
    PeterssonResult norm;   // <f,f> with a(1) = 1
    double L_sym2 = 0;
    double L_sym2_error = 0;
    nlohmann::json to_json() const;
};

struct SpectralBasis {
    int weight = 0;
    std::vector<SpectralForm> forms;
};

/// Eigenbasis of S_weight with Petersson norms and L(1, sym^2 g); N Fourier terms.
SpectralBasis spectral_basis(int weight, const QuadratureOptions& opt = {}, std::size_t N = 80);

struct HarmonicCheck {
    std::uint64_t t = 0, u = 0;
    int weight = 0;
    double value = 0;
    double est_error = 0;
    std::vector<double> terms;  // per eigenform
    nlohmann::json to_json() const;
};

/// (2 pi^2 / (w-1)) sum_g lambda_g(t) lambda_g(u) / L(1, sym^2 g) over the basis.
HarmonicCheck harmonic_sum_check(std::uint64_t t, std::uint64_t u, const SpectralBasis& basis);

struct FourthMoment {
    int k = 0;
    int f_index = 0;
    double value = 0;  // integral of |F|^4 with <F,F> = 1
    double est_error = 0;
    PeterssonResult norm_f2;
    nlohmann::json to_json() const;
};

FourthMoment fourth_moment(const SpectralForm& f, const QuadratureOptions& opt = {});

/// L(1/2, f x f x g) = |<F^2,G>|^2 2(2k-1) L(1,sym^2 f)^2 L(1,sym^2 g) / pi^3.
double watson_L_value(double inner, int k, double L_f, double L_g);

struct WatsonRow {
    int g_index = 0;
    double inner = 0;          // <F^2, G>, both sides unit norm, by quadrature
    double inner_error = 0;
    double inner_miller = 0;   // same from the coordinates of f^2 in the eigenbasis
    double L_g = 0;
    double L_value = 0;
    double L_value_error = 0;
};

struct WatsonReport {
    int k = 0;
    int f_index = 0;
    double L_f = 0;
    FourthMoment moment;
    std::vector<WatsonRow> rows;
    double parseval_sum = 0;     // sum |<F^2,G>|^2 by quadrature
    double parseval_miller = 0;  // sum via eigenbasis coordinates
    double reassembled = 0;      // pi^3/(2(2k-1)) sum L(1/2)/(L_f^2 L_g)
    double roundtrip_rel = 0;    // |reassembled - moment| / moment
    double parseval_rel = 0;     // |parseval_sum - moment| / moment
    nlohmann::json to_json() const;
};

/// f of weight k against the eigenbasis of weight 2k (which must come from spectral_basis(2k)).
WatsonReport watson_report(const SpectralForm& f, const SpectralBasis& basis_2k, const QuadratureOptions& opt = {});

}  // namespace fmlab::mf
