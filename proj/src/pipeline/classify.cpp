#include "fmlab/pipeline/classify.hpp"

#include "fmlab/errors.hpp"
#include "fmlab/parallel.hpp"

#include <cmath>

namespace fmlab::pipeline {

double ClassificationReport::exceptional_fraction(int j) const {
    if (forms.empty() || j < 0 || j >= int(n_exceptional.size())) return 0;
    return double(n_exceptional[j]) / double(forms.size());
}

nlohmann::json ClassificationReport::to_json(bool with_values) const {
    nlohmann::json j;
    j["I"] = I;
    j["m_max"] = m_max;
    j["n_forms"] = forms.size();
    j["n_good"] = n_good;
    j["n_good_strict"] = n_good_strict;
    j["n_overlap"] = n_overlap;
    j["n_exceptional"] = n_exceptional;
    j["n_p"] = n_p;
    j["cover_ok"] = cover_ok;
    j["partition_ok"] = partition_ok;
    j["p_partition_ok"] = p_partition_ok;
    if (with_values) {
        auto arr = nlohmann::json::array();
        for (std::size_t f = 0; f < forms.size(); ++f) {
            nlohmann::json row;
            row["good"] = forms[f].good;
            row["good_strict"] = forms[f].good_strict;
            row["exceptional"] = forms[f].exceptional;
            row["p_index"] = forms[f].p_index;
            auto g = nlohmann::json::array();
            for (std::size_t q = 0; q < pairs.size(); ++q) g.push_back({pairs[q].first, pairs[q].second, G[q][f]});
            row["G"] = g;
            auto p = nlohmann::json::array();
            for (const auto& col : P) p.push_back(col[f]);
            row["P"] = p;
            arr.push_back(row);
        }
        j["forms"] = arr;
    }
    return j;
}

ClassificationReport classify_family(const Family& family, const PartitionParams& params, const CoefficientSystem& cs,
                                     const ClassifyOptions& opt) {
    ClassificationReport r;
    r.I = params.I;
    const std::size_t nf = family.n_forms;
    for (int i = 1; i <= params.I; ++i)
        for (int l = i; l <= params.I; ++l) r.pairs.emplace_back(i, l);
    r.G.resize(r.pairs.size());
    parallel_for(
        r.pairs.size(), [&](std::size_t q) { r.G[q] = g_poly_all(family, r.pairs[q].first, r.pairs[q].second, params, cs); },
        opt.threads);

    const double log2 = std::log(2.0);
    const double top = std::min(params.log_x(params.I), std::log(double(cs.prime_cap)));
    r.m_max = std::max(0, std::min(int(std::floor(params.log_k / log2)), int(std::floor(top / log2 + 1e-12)) - 1));
    r.P.resize(r.m_max);
    parallel_for(r.m_max, [&](std::size_t n) { r.P[n] = p_poly_all(family, int(n) + 1, params, cs); }, opt.threads);

    std::vector<double> thresh(params.I + 1);
    for (int i = 1; i <= params.I; ++i) thresh[i] = opt.threshold_scale * std::exp(-0.75 * params.log_beta[i]);
    auto pair_index = [&](int i, int l) {
        // pairs are listed row by row: (1,1..I), (2,2..I), ...
        std::size_t idx = 0;
        for (int a = 1; a < i; ++a) idx += params.I - a + 1;
        return idx + (l - i);
    };

    r.forms.resize(nf);
    r.n_exceptional.assign(params.I, 0);
    r.n_p.assign(r.m_max + 1, 0);
    r.cover_ok = r.partition_ok = r.p_partition_ok = true;
    for (std::size_t f = 0; f < nf; ++f) {
        FormClass c;
        c.good = true;
        for (int i = 1; i <= params.I; ++i)
            if (std::abs(r.G[pair_index(i, params.I)][f]) > thresh[i]) c.good = false;
        // E(j): every (i, l) with i <= j within threshold, some (j+1, l) above it
        auto above = [&](int i, int l) { return std::abs(r.G[pair_index(i, l)][f]) > thresh[i]; };
        std::vector<int> member;
        for (int j = 0; j < params.I; ++j) {
            bool prefix_ok = true, fails = false;
            for (int i = 1; i <= j; ++i)
                for (int l = i; l <= params.I; ++l)
                    if (above(i, l)) prefix_ok = false;
            for (int l = j + 1; l <= params.I; ++l)
                if (above(j + 1, l)) fails = true;
            if (prefix_ok && fails) member.push_back(j);
        }
        c.exceptional = member.empty() ? -1 : member.front();
        c.good_strict = member.empty();
        if (member.size() > 1) r.partition_ok = false;
        if (!c.good && member.empty()) r.cover_ok = false;
        if (c.good) ++r.n_good;
        if (c.good_strict) ++r.n_good_strict;
        if (c.good && !member.empty()) ++r.n_overlap;
        if (c.exceptional >= 0) ++r.n_exceptional[c.exceptional];

        int hits = 0;
        for (int n = r.m_max; n >= 1; --n)
            if (std::abs(r.P[n - 1][f]) > std::exp2(-n / 10.0)) {
                if (hits == 0) c.p_index = n;
                ++hits;
            }
        // P(m) for m >= 1 asks for |P_m| above and every larger n below; m = 0 when nothing is above
        int memberships = 0;
        for (int m = 0; m <= r.m_max; ++m) {
            bool in = m == 0 || std::abs(r.P[m - 1][f]) > std::exp2(-m / 10.0);
            for (int n = m + 1; n <= r.m_max && in; ++n)
                if (std::abs(r.P[n - 1][f]) > std::exp2(-n / 10.0)) in = false;
            if (in) {
                ++memberships;
                if (m != c.p_index) r.p_partition_ok = false;
            }
        }
        if (memberships != 1) r.p_partition_ok = false;
        ++r.n_p[c.p_index];
        r.forms[f] = c;
    }
    std::size_t total = r.n_good_strict;
    for (auto n : r.n_exceptional) total += n;
    if (total != nf) r.partition_ok = false;
    return r;
}

}  // namespace fmlab::pipeline
