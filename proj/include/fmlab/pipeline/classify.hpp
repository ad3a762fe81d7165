#pragma once
// Sorting a family into the good set, the exceptional sets E(j) and the dyadic sets P(m).
#include "fmlab/pipeline/dirichlet.hpp"

#include <json.hpp>

#include <cstddef>
#include <vector>

namespace fmlab::pipeline {

struct ClassifyOptions {
    double threshold_scale = 1.0;  // compare |G_{(i,l)}| with scale * beta_i^{-3/4}
    unsigned threads = 0;
};

struct FormClass {
    bool good = false;         // |G_{(i,I)}| <= beta_i^{-3/4} for every i
    int exceptional = -1;      // j with g in E(j), -1 when none
    bool good_strict = false;  // in no E(j)
    int p_index = 0;           // m with g in P(m)
};

struct ClassificationReport {
    int I = 1;
    int m_max = 0;                              // P_n evaluated for 1 <= n <= m_max
    std::vector<std::pair<int, int>> pairs;     // (i, l), 1 <= i <= l <= I
    std::vector<std::vector<double>> G;         // G[pair][form]
    std::vector<std::vector<double>> P;         // P[n-1][form]
    std::vector<FormClass> forms;
    std::size_t n_good = 0, n_good_strict = 0, n_overlap = 0;  // overlap: in the good set and in some E(j)
    std::vector<std::size_t> n_exceptional;     // per j = 0..I-1
    std::vector<std::size_t> n_p;               // per m = 0..m_max
    bool cover_ok = false;        // good or in some E(j), for every form
    bool partition_ok = false;    // strict good set and the E(j) are disjoint and cover
    bool p_partition_ok = false;  // exactly one P(m) per form

    double exceptional_fraction(int j) const;
    nlohmann::json to_json(bool with_values = true) const;
};

/// P(m) is taken as: m = the largest n with |P_n| > 2^{-n/10}, and m = 0 when there is none.
/// n runs up to min(log k / log 2, largest n with 2^{n+1} <= min(x_I, prime cap)).
ClassificationReport classify_family(const Family& family, const PartitionParams& params, const CoefficientSystem& cs,
                                     const ClassifyOptions& opt = {});

}  // namespace fmlab::pipeline
