// fmlab command-line driver.
#include "fmlab/acceptance/suite.hpp"
#include "fmlab/config.hpp"
#include "fmlab/errors.hpp"
#include "fmlab/hecke/combinatorics.hpp"
#include "fmlab/modforms/eigenforms.hpp"
#include "fmlab/modforms/lfunctions.hpp"
#include "fmlab/modforms/qexpansion.hpp"
#include "fmlab/oracles/petersson_oracles.hpp"
#include "fmlab/output.hpp"
#include "fmlab/parallel.hpp"
#include "fmlab/pipeline/bounds.hpp"
#include "fmlab/pipeline/classify.hpp"
#include "fmlab/satotate/model.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace fmlab;

namespace {

constexpr int kExitOk = 0, kExitUsage = 1, kExitFail = 2, kExitPrecision = 3;

std::string g_output_dir;

void emit(const std::string& name, const std::string& content) {
    const auto path = output_directory(g_output_dir) / name;
    write_text_file(path, content);
    std::cout << content;
    if (!content.empty() && content.back() != '\n') std::cout << '\n';
    std::cerr << "wrote " << path.string() << '\n';
}

void reject_unused(const KeyValueConfig& cfg) {
    const auto extra = cfg.unused_keys();
    if (!extra.empty()) {
        std::string s;
        for (const auto& k : extra) s += (s.empty() ? "" : ", ") + k;
        throw ConfigError("unknown config keys: " + s);
    }
}

// ---- hecke / moments / oracle / simulate

int cmd_hecke_expand(int alpha) {
    const auto e = hecke::expand_lambda_power(alpha);
    CsvWriter csv({"m", "coefficient"});
    for (std::size_t m = 0; m < e.coefficient.size(); ++m) {
        if (e.coefficient[m] == 0) continue;
        csv.cell(m).cell(e.coefficient[m].str());
        csv.end_row();
    }
    emit("hecke_expand_" + std::to_string(alpha) + ".csv", csv.str());
    return kExitOk;
}

int cmd_moments(const std::string& which, const std::string& n) {
    const auto f = hecke::PrimeFactorization::parse(n);
    const BigInt v = which == "h1" ? hecke::h1(f) : hecke::h2(f);
    std::cout << v.str() << '\n';
    return kExitOk;
}

int cmd_oracle(const std::string& lemma, const std::string& config) {
    const auto cfg = KeyValueConfig::load(config);
    const auto r = oracles::verify_lemma_instance(lemma, cfg);
    reject_unused(cfg);
    emit("oracle_" + lemma + ".json", dump_json(r.to_json()));
    return r.pass ? kExitOk : kExitFail;
}

int cmd_simulate(double X, std::size_t forms, std::uint64_t seed, const std::string& report) {
    const auto s = satotate::sample_family(X, forms, seed);
    std::ostringstream csv;
    satotate::write_family_csv(s, csv);
    const auto out = output_directory(g_output_dir);
    write_text_file(out / "family.csv", csv.str());
    write_text_file(out / "family_meta.json", satotate::family_metadata_json(s));
    std::cerr << "wrote " << (out / "family.csv").string() << '\n';
    if (report.empty()) {
        std::cout << satotate::family_metadata_json(s) << '\n';
        return kExitOk;
    }
    if (report != "heuristics") throw DomainError("unknown report '" + report + "'");
    // per form: D = sum lambda(p)/sqrt p and S = sum (lambda(p)^2 - 1)/p, with their model laws
    const std::size_t np = s.primes.size();
    std::vector<double> D(forms), D2(forms), S(forms), E(forms);
    double var_law = 0, exp_law = 1;
    for (std::size_t t = 0; t < np; ++t) {
        var_law += 1.0 / s.primes[t];
        exp_law *= satotate::exp_moment_exact(1 / std::sqrt(double(s.primes[t])));
    }
    for (std::size_t f = 0; f < forms; ++f) {
        double d = 0, q = 0;
        for (std::size_t t = 0; t < np; ++t) {
            const double l = s.at(f, t), p = s.primes[t];
            d += l / std::sqrt(p);
            q += (l * l - 1) / p;
        }
        D[f] = d;
        D2[f] = d * d;
        S[f] = q;
        E[f] = std::exp(d);
    }
    auto est = [](const satotate::MonteCarloEstimate& m, double exact) {
        return nlohmann::json{{"mc_mean", m.mean}, {"std_error", m.std_error}, {"exact", exact}, {"within_3se", m.within(exact)}};
    };
    nlohmann::json j;
    j["X"] = X;
    j["forms"] = forms;
    j["seed"] = seed;
    j["mean_D"] = est(satotate::mc_mean(D), 0.0);
    j["variance_D"] = est(satotate::mc_mean(D2), var_law);
    j["mean_S"] = est(satotate::mc_mean(S), 0.0);
    j["exp_D"] = est(satotate::mc_mean(E), exp_law);
    j["gaussian_exp_D"] = std::exp(var_law / 2);
    emit("simulate_heuristics.json", dump_json(j));
    return kExitOk;
}

// ---- mf

mf::QuadratureOptions quad(int depth, double tol) {
    mf::QuadratureOptions o;
    if (depth > 0) o.depth = depth;
    if (tol > 0) o.tol = tol;
    return o;
}

int cmd_mf(const std::string& action, int k, std::size_t N, int depth, double tol) {
    const std::string tag = "mf_" + action + "_" + std::to_string(k);
    if (action == "basis") {
        const auto B = mf::miller_basis(k, N);
        std::vector<std::string> header{"n"};
        for (std::size_t i = 0; i < B.size(); ++i) header.push_back("f" + std::to_string(i + 1));
        CsvWriter csv(header);
        for (std::size_t n = 0; n <= N; ++n) {
            csv.cell(n);
            for (const auto& f : B) csv.cell(f.coeffs[n].str());
            csv.end_row();
        }
        emit(tag + ".csv", csv.str());
        return kExitOk;
    }
    if (action == "eigen") {
        const auto forms = mf::hecke_eigenforms(k, N);
        std::vector<std::string> header{"n"};
        for (const auto& f : forms) header.push_back("a" + std::to_string(f.index));
        for (const auto& f : forms) header.push_back("lambda" + std::to_string(f.index));
        CsvWriter csv(header);
        for (std::size_t n = 1; n <= N; ++n) {
            csv.cell(n);
            for (const auto& f : forms) {
                if (f.rational())
                    csv.cell(f.exact_coeffs[n].str());
                else
                    csv.cell(to_double(f.coeffs[n]));
            }
            for (const auto& f : forms) csv.cell(f.lambda[n]);
            csv.end_row();
        }
        emit(tag + ".csv", csv.str());
        nlohmann::json j = nlohmann::json::array();
        for (const auto& f : forms) j.push_back(f.to_json());
        write_text_file(output_directory(g_output_dir) / (tag + ".json"), dump_json(j));
        return kExitOk;
    }
    const auto opt = quad(depth, tol);
    if (action == "petersson") {
        const auto b = mf::spectral_basis(k, opt, N);
        nlohmann::json j = nlohmann::json::array();
        for (const auto& f : b.forms) j.push_back(f.to_json());
        emit(tag + ".json", dump_json(j));
        return kExitOk;
    }
    if (action == "fourth-moment") {
        const auto b = mf::spectral_basis(k, opt, N);
        nlohmann::json j = nlohmann::json::array();
        for (const auto& f : b.forms) j.push_back(mf::fourth_moment(f, opt).to_json());
        emit(tag + ".json", dump_json(j));
        return kExitOk;
    }
    if (action == "watson") {
        const auto bk = mf::spectral_basis(k, opt, N), b2k = mf::spectral_basis(2 * k, opt, N);
        nlohmann::json j = nlohmann::json::array();
        bool ok = true;
        for (const auto& f : bk.forms) {
            const auto w = mf::watson_report(f, b2k, opt);
            ok = ok && w.roundtrip_rel < 1e-3;
            j.push_back(w.to_json());
        }
        emit(tag + ".json", dump_json(j));
        return ok ? kExitOk : kExitFail;
    }
    throw DomainError("unknown mf action '" + action + "'");
}

// ---- pipeline

pipeline::PrimeValues form_values(int weight, int index, std::uint32_t pmax) {
    const auto t = mf::prime_lambda_tables({weight}, pmax);
    const auto& tab = t.at(weight);
    if (index < 0 || index >= int(tab.lambda.size())) throw DomainError("form index out of range");
    return {tab.primes, tab.lambda[index]};
}

int cmd_pipeline_classify(const KeyValueConfig& cfg) {
    const double log_k = cfg.get_double("log_k", 30);
    const double T = cfg.get_double("threshold_exponent", pipeline::kDeskThresholdExponent);
    const auto cap = std::uint32_t(cfg.get_int("prime_cap", 2000));
    const int f_weight = int(cfg.get_int("f_weight", 12));
    const int f_index = int(cfg.get_int("f_index", 0));
    const std::string family_kind = cfg.get_string("family", "satotate");
    const auto forms = std::size_t(cfg.get_int("forms", 1000));
    const auto seed = std::uint64_t(cfg.get_int("seed", 1));
    pipeline::ClassifyOptions copt;
    copt.threshold_scale = cfg.get_double("threshold_scale", 1.0);
    const bool with_values = cfg.get_int("with_values", 0) != 0;
    reject_unused(cfg);

    const auto params = pipeline::partition_params(log_k, T);
    const auto f = form_values(f_weight, f_index, cap);
    const auto cs = pipeline::coefficient_system(params, f, cap);
    pipeline::Family fam;
    if (family_kind == "satotate")
        fam = satotate::sample_family(cap, forms, seed);
    else if (family_kind == "eigen")
        fam = pipeline::family_from_table(mf::prime_lambda_tables({2 * f_weight}, cap).at(2 * f_weight));
    else
        throw ConfigError("family must be satotate or eigen");
    const auto rep = pipeline::classify_family(fam, params, cs, copt);
    const auto spectral = mf::spectral_basis(f_weight);

    nlohmann::json j;
    j["params"] = params.to_json();
    j["coefficients"] = cs.to_json();
    j["coefficient_check"] = pipeline::check_coefficients(cs).to_json();
    j["classification"] = rep.to_json(with_values);
    j["exceptional_zero_bound"] = pipeline::exceptional_zero_bound(params).to_json();
    j["windows"] = pipeline::window_reports_json(pipeline::window_reports(params, f, spectral.forms.at(f_index).L_sym2));
    j["gaussian_heuristic"] = pipeline::gaussian_heuristic_prediction(f, std::min(1e4, double(cap))).to_json();
    j["L_sym2"] = spectral.forms.at(f_index).L_sym2;
    emit("pipeline_classify.json", dump_json(j));
    return rep.cover_ok && rep.partition_ok && rep.p_partition_ok ? kExitOk : kExitFail;
}

int cmd_pipeline_sound(const KeyValueConfig& cfg) {
    const int k = int(cfg.get_int("weight", 12));
    const int f_index = int(cfg.get_int("f_index", 0));
    auto powers = cfg.has("x_powers") ? cfg.get_double_list("x_powers") : std::vector<double>{2, 4, 6};
    reject_unused(cfg);
    const double log_k = std::log(double(k));
    double top = 0;
    for (double m : powers) top = std::max(top, m);
    const double pmax = std::exp(top * log_k);
    if (pmax > 4e8) throw DomainError("largest x too big for explicit prime tables");
    const auto tabs = mf::prime_lambda_tables({k, 2 * k}, std::uint32_t(std::floor(pmax * (1 + 1e-12))));
    const auto bk = mf::spectral_basis(k), b2k = mf::spectral_basis(2 * k);
    const auto w = mf::watson_report(bk.forms.at(f_index), b2k);
    const pipeline::PrimeValues f{tabs.at(k).primes, tabs.at(k).lambda.at(f_index)};
    CsvWriter csv({"g_index", "x_power", "log_x", "prime_sum", "square_sum", "conductor_term", "bound", "log_L", "margin"});
    for (std::size_t gi = 0; gi < tabs.at(2 * k).lambda.size(); ++gi) {
        const pipeline::PrimeValues g{tabs.at(2 * k).primes, tabs.at(2 * k).lambda[gi]};
        const double log_L = std::log(w.rows.at(gi).L_value);
        for (double m : powers) {
            const auto b = pipeline::sound_upper(f, g, m * log_k, log_k);
            csv.cell(gi).cell(m).cell(b.log_x).cell(b.prime_sum).cell(b.square_sum).cell(b.conductor_term).cell(b.value).cell(log_L).cell(b.value - log_L);
            csv.end_row();
        }
    }
    std::cerr << pipeline::SoundBound{}.caveat << '\n';
    emit("pipeline_sound_" + std::to_string(k) + ".csv", csv.str());
    return kExitOk;
}

pipeline::PartitionParams tower_params(const KeyValueConfig& cfg, double default_T) {
    const double T = cfg.get_double("threshold_exponent", default_T);
    if (cfg.has("log_k")) return pipeline::partition_params(cfg.require_double("log_k"), T);
    return pipeline::partition_params_tower(cfg.get_double("log_loglog_k", 5e4 + 10), T);
}

int cmd_pipeline_chain(const KeyValueConfig& cfg) {
    const double C = cfg.get_double("C", pipeline::kChainC);
    const auto params = tower_params(cfg, pipeline::kChainThresholdExponent);
    reject_unused(cfg);
    const auto r = pipeline::chain_validator(params, C);
    nlohmann::json j = r.to_json();
    j.erase("steps");
    j["n_steps"] = r.steps.size();
    j["failing_steps"] = std::count_if(r.steps.begin(), r.steps.end(), [](const auto& s) { return !s.pass; });
    write_text_file(output_directory(g_output_dir) / "pipeline_chain.csv", r.csv());
    emit("pipeline_chain.json", dump_json(j));
    return r.all_pass ? kExitOk : kExitFail;
}

int cmd_pipeline_markov(const KeyValueConfig& cfg) {
    double log_k = INFINITY, ll = 0;
    if (cfg.has("log_k")) {
        log_k = cfg.require_double("log_k");
        ll = std::log(log_k);
    } else {
        ll = cfg.get_double("loglog_k", 10);
        log_k = std::exp(ll);
    }
    const double V = cfg.has("V") ? cfg.require_double("V") : cfg.get_double("V_factor", 1e30) * ll;
    reject_unused(cfg);
    const auto r = pipeline::markov_moment_bound(V, log_k, ll);
    emit("pipeline_markov.json", dump_json(r.to_json()));
    return r.bound_ok && r.proof_ratio_ok ? kExitOk : kExitFail;
}

int cmd_pipeline(const std::string& action, const std::string& config) {
    const auto cfg = config.empty() ? KeyValueConfig{} : KeyValueConfig::load(config);
    if (action == "classify") return cmd_pipeline_classify(cfg);
    if (action == "sound") return cmd_pipeline_sound(cfg);
    if (action == "chain") return cmd_pipeline_chain(cfg);
    if (action == "markov") return cmd_pipeline_markov(cfg);
    throw DomainError("unknown pipeline action '" + action + "'");
}

int cmd_accept(const std::string& suite, const std::vector<int>& only, std::uint64_t seed) {
    if (suite != "primary") throw DomainError("only the primary suite exists");
    acceptance::SuiteOptions opt;
    opt.output_dir = output_directory(g_output_dir);
    opt.threads = default_threads();
    opt.only = only;
    opt.seed = seed;
    const auto results = acceptance::run_suite(opt, std::cout);
    std::size_t passed = 0;
    for (const auto& r : results) passed += r.pass();
    std::cout << passed << "/" << results.size() << " criteria passed\n";
    return passed == results.size() ? kExitOk : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fmlab: Hecke moments, modular forms and moment-bound pipeline"};
    app.require_subcommand(1);
    unsigned threads = 0;
    app.add_option("--threads", threads, "worker threads (default: all cores)");
    app.add_option("--output-dir", g_output_dir, "output directory (default: $FMLAB_OUTPUT_DIR or .)");

    auto* hecke_cmd = app.add_subcommand("hecke", "Hecke relation expansions");
    hecke_cmd->require_subcommand(1);
    auto* expand_cmd = hecke_cmd->add_subcommand("expand", "lambda(p)^alpha in lambda(p^m)");
    int alpha = 0;
    expand_cmd->add_option("--alpha", alpha)->required()->check(CLI::Range(0, hecke::kMaxPower));

    auto* moments_cmd = app.add_subcommand("moments", "h1 / h2 of a factorization");
    std::string which, n;
    moments_cmd->add_option("which", which)->required()->check(CLI::IsMember({"h1", "h2"}));
    moments_cmd->add_option("--n", n, "e.g. 2^4*3^2")->required();

    auto* oracle_cmd = app.add_subcommand("oracle", "verify one tuple-sum lemma instance");
    std::string lemma, config;
    oracle_cmd->add_option("--lemma", lemma)->required()->check(CLI::IsMember({"combinato", "combinato2", "gaussian"}));
    oracle_cmd->add_option("--config", config)->required();

    auto* simulate_cmd = app.add_subcommand("simulate", "sample a Sato-Tate family");
    double X = 0;
    std::size_t forms = 0;
    std::uint64_t seed = 1;
    std::string report;
    simulate_cmd->add_option("--x", X)->required();
    simulate_cmd->add_option("--forms", forms)->required();
    simulate_cmd->add_option("--seed", seed)->required();
    simulate_cmd->add_option("--report", report)->check(CLI::IsMember({"heuristics"}));

    auto* mfc = app.add_subcommand("mf", "modular forms lab");
    std::string mf_action;
    int weight = 0, depth = 0;
    std::size_t ncoeffs = 80;
    double tol = 0;
    mfc->add_option("action", mf_action)->required()->check(CLI::IsMember({"basis", "eigen", "petersson", "fourth-moment", "watson"}));
    mfc->add_option("--weight", weight)->required();
    mfc->add_option("--ncoeffs", ncoeffs);
    mfc->add_option("--quad-depth", depth);
    mfc->add_option("--tol", tol);

    auto* pipe_cmd = app.add_subcommand("pipeline", "moment-bound pipeline");
    std::string pipe_action, pipe_config;
    pipe_cmd->add_option("action", pipe_action)->required()->check(CLI::IsMember({"classify", "sound", "chain", "markov"}));
    pipe_cmd->add_option("--config", pipe_config);

    auto* accept_cmd = app.add_subcommand("accept", "run the acceptance battery");
    std::string suite = "primary";
    std::vector<int> only;
    std::uint64_t accept_seed = 20240611;
    accept_cmd->add_option("--suite", suite)->check(CLI::IsMember({"primary"}));
    accept_cmd->add_option("--only", only, "criterion numbers");
    accept_cmd->add_option("--seed", accept_seed);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }
    if (threads > 0) set_default_threads(threads);

    try {
        if (*hecke_cmd) return cmd_hecke_expand(alpha);
        if (*moments_cmd) return cmd_moments(which, n);
        if (*oracle_cmd) return cmd_oracle(lemma, config);
        if (*simulate_cmd) return cmd_simulate(X, forms, seed, report);
        if (*mfc) return cmd_mf(mf_action, weight, ncoeffs, depth, tol);
        if (*pipe_cmd) return cmd_pipeline(pipe_action, pipe_config);
        if (*accept_cmd) return cmd_accept(suite, only, accept_seed);
    } catch (const PrecisionError& e) {
        std::cerr << "precision failure: " << e.what() << " (best " << format_real(e.best_value()) << ", est. error "
                  << format_real(e.est_error()) << ")\n";
        return kExitPrecision;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}
