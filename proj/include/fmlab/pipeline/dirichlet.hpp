#pragma once
// Dirichlet polynomials G_{(i,j)} over the beta-windows and P_m over dyadic windows.
#include "fmlab/modforms/eigenforms.hpp"
#include "fmlab/pipeline/partition.hpp"
#include "fmlab/satotate/model.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace fmlab::pipeline {

using Family = satotate::FamilySample;

/// lambda_g(p) rows of a weight-2k eigenbasis (seed/X left at 0, sampler_id "eigenforms").
Family family_from_table(const mf::PrimeLambdaTable& table);
/// n_forms rows of explicit values on the given primes.
Family family_from_rows(const std::vector<std::uint32_t>& primes, const std::vector<std::vector<double>>& rows);

/// Column range [first, last) of cs.primes lying in (x_{i-1}, x_i].
std::pair<std::size_t, std::size_t> beta_window(const PartitionParams& params, const CoefficientSystem& cs, int i);
/// Column range of primes 2^m < p <= 2^{m+1}.
std::pair<std::size_t, std::size_t> dyadic_window(const CoefficientSystem& cs, int m);

/// G_{(i,j)}(g) = sum_{x_{i-1} < p <= x_i} u_{f,j}(p) lambda_g(p) / sqrt(p), 1 <= i <= j <= I.
double g_poly(const Family& family, std::size_t form, int i, int j, const PartitionParams& params,
              const CoefficientSystem& cs);
/// Same for every form at once.
std::vector<double> g_poly_all(const Family& family, int i, int j, const PartitionParams& params,
                               const CoefficientSystem& cs);

/// P_m(g) = sum_{2^m < p <= 2^{m+1}} w_{f,I}(p) (lambda_g(p)^2 - 1) / p. Needs 2^{m+1} within the prime range.
double p_poly(const Family& family, std::size_t form, int m, const PartitionParams& params, const CoefficientSystem& cs);
std::vector<double> p_poly_all(const Family& family, int m, const PartitionParams& params, const CoefficientSystem& cs);

/// sum of u_{f,j}(p)^2 / p over the window of G_{(i,j)}: its variance under the Sato-Tate model.
double g_poly_variance(int i, int j, const PartitionParams& params, const CoefficientSystem& cs);
/// sum of w_{f,I}(p)/p over the dyadic window.
double p_poly_weight(int m, const PartitionParams& params, const CoefficientSystem& cs);

}  // namespace fmlab::pipeline
