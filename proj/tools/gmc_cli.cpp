// Command-line front end: instance generation, solving, and the experiment
// harnesses. Every subcommand writes a JSON run manifest next to its outputs
// so any result can be regenerated from the recorded seed and parameters.

#include <chrono>
#include <iomanip>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gmcs/cv.hpp"
#include "gmcs/dataio.hpp"
#include "gmcs/datagen.hpp"
#include "gmcs/experiments.hpp"
#include "gmcs/parallel.hpp"
#include "gmcs/search.hpp"

namespace {

using nlohmann::json;

constexpr const char* kVersion = "0.1.0";

void write_manifest(const std::string& out_path, const std::string& subcommand,
                    const json& params, double seconds) {
    json manifest;
    manifest["subcommand"] = subcommand;
    manifest["params"] = params;
    manifest["artifact_version"] = kVersion;
    manifest["wall_clock_seconds"] = seconds;
    std::ofstream f(out_path + ".manifest.json");
    f << manifest.dump(2) << "\n";
}

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

json result_to_json(const gmcs::GmcResult& r) {
    json j;
    j["support"] = r.c_final.ones();
    j["energy"] = r.energy;
    j["n_conv"] = r.n_conv;
    j["exhaustive_invocations"] = r.exhaustive_invocations;
    j["terminated_by"] =
        r.terminated_by == gmcs::Termination::LocalOptimum ? "local_optimum" : "max_mcs";
    j["seed"] = r.seed;
    return j;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Greedy Monte-Carlo search for L0-constrained sparse linear regression"};
    app.require_subcommand(1);
    int threads = gmcs::default_thread_count();
    app.add_option("--threads", threads, "worker threads (env GMC_THREADS)")->capture_default_str();

    // ---- gen
    auto* gen = app.add_subcommand("gen", "generate a planted synthetic instance");
    int gen_n = 100;
    double gen_alpha = 0.5, gen_rho0 = 0.2, gen_noise = 0.0;
    std::uint64_t gen_seed = 0;
    std::string gen_out;
    gen->add_option("--n", gen_n, "signal dimension N")->required();
    gen->add_option("--alpha", gen_alpha, "measurement ratio M/N")->required();
    gen->add_option("--rho0", gen_rho0, "true density K0/N")->required();
    gen->add_option("--noise-var", gen_noise, "measurement noise variance");
    gen->add_option("--seed", gen_seed, "RNG seed");
    gen->add_option("--out", gen_out, "output instance JSON")->required();

    // ---- solve
    auto* solve = app.add_subcommand("solve", "run GMC with restarts on an instance file");
    std::string solve_in, solve_out;
    int solve_k = 0, solve_ninit = 100, solve_twait = 10;
    std::uint64_t solve_seed = 0;
    solve->add_option("--in", solve_in, "instance JSON")->required();
    solve->add_option("--k", solve_k, "sparsity level K")->required();
    solve->add_option("--n-init", solve_ninit, "number of restarts")->capture_default_str();
    solve->add_option("--t-wait", solve_twait, "stall threshold in MCS")->capture_default_str();
    solve->add_option("--seed", solve_seed, "master seed");
    solve->add_option("--out", solve_out, "report JSON (stdout if omitted)");

    // ---- phase
    auto* phase = app.add_subcommand("phase", "P_samp heat-map sweep over (alpha, rho0)");
    int ph_n = 100, ph_nsamp = 100, ph_ninit = 100, ph_twait = 10;
    std::uint64_t ph_seed = 0;
    std::string ph_out;
    std::vector<double> ph_alphas, ph_rho0s;
    phase->add_option("--n", ph_n, "signal dimension")->capture_default_str();
    phase->add_option("--n-samp", ph_nsamp, "instances per cell")->capture_default_str();
    phase->add_option("--n-init", ph_ninit, "restarts per instance")->capture_default_str();
    phase->add_option("--t-wait", ph_twait, "stall threshold")->capture_default_str();
    phase->add_option("--alpha", ph_alphas, "explicit alpha grid (default 0.05..0.95)");
    phase->add_option("--rho0", ph_rho0s, "explicit rho0 grid (default 0.05..0.95)");
    phase->add_option("--seed", ph_seed, "master seed");
    phase->add_option("--out", ph_out, "output CSV")->required();

    // ---- scaling
    auto* scaling = app.add_subcommand("scaling", "N_conv growth against system size");
    std::vector<int> sc_sizes{50, 100, 200, 400};
    double sc_alpha = 0.5, sc_rho = 0.2, sc_rho0 = 0.2;
    int sc_nsamp = 100, sc_twait = 10;
    std::uint64_t sc_seed = 0;
    std::string sc_out;
    scaling->add_option("--sizes", sc_sizes, "system sizes")->capture_default_str();
    scaling->add_option("--alpha", sc_alpha, "measurement ratio")->capture_default_str();
    scaling->add_option("--rho", sc_rho, "assumed density K/N")->capture_default_str();
    scaling->add_option("--rho0", sc_rho0, "true density")->capture_default_str();
    scaling->add_option("--n-samp", sc_nsamp, "instances per size")->capture_default_str();
    scaling->add_option("--t-wait", sc_twait, "stall threshold")->capture_default_str();
    scaling->add_option("--seed", sc_seed, "master seed");
    scaling->add_option("--out", sc_out, "output CSV")->required();

    // ---- noisy
    auto* noisy = app.add_subcommand("noisy", "MSE curves against rho in the noisy ensemble");
    int no_n = 100, no_nsamp = 20, no_ninit = 100, no_twait = 10;
    double no_alpha = 0.5, no_rho0 = 0.2, no_noise = 0.1;
    std::vector<double> no_rhos{0.1, 0.2, 0.3, 0.4};
    std::uint64_t no_seed = 0;
    std::string no_out;
    noisy->add_option("--n", no_n, "signal dimension")->capture_default_str();
    noisy->add_option("--alpha", no_alpha, "measurement ratio")->capture_default_str();
    noisy->add_option("--rho0", no_rho0, "true density")->capture_default_str();
    noisy->add_option("--noise-var", no_noise, "noise variance")->capture_default_str();
    noisy->add_option("--rho", no_rhos, "rho grid")->capture_default_str();
    noisy->add_option("--n-samp", no_nsamp, "instances per rho")->capture_default_str();
    noisy->add_option("--n-init", no_ninit, "restarts per instance")->capture_default_str();
    noisy->add_option("--t-wait", no_twait, "stall threshold")->capture_default_str();
    noisy->add_option("--seed", no_seed, "master seed");
    noisy->add_option("--out", no_out, "output CSV")->required();

    // ---- cv
    auto* cv = app.add_subcommand("cv", "leave-one-out CV over sparsity levels on CSV data");
    std::string cv_a, cv_y, cv_out = "cv.csv";
    int cv_kmax = 5, cv_ninit = 1, cv_twait = 10;
    bool cv_header = false, cv_no_std = false;
    std::uint64_t cv_seed = 0;
    cv->add_option("--a", cv_a, "predictor CSV (M rows x N columns)")->required();
    cv->add_option("--y", cv_y, "response CSV (M rows, one column)")->required();
    cv->add_option("--k-max", cv_kmax, "evaluate K = 1..k-max")->capture_default_str();
    cv->add_option("--n-init-per-fold", cv_ninit, "restarts per fold")->capture_default_str();
    cv->add_option("--t-wait", cv_twait, "stall threshold")->capture_default_str();
    cv->add_flag("--header", cv_header, "skip one header line in the CSVs");
    cv->add_flag("--no-standardize", cv_no_std, "skip centering/normalization");
    cv->add_option("--seed", cv_seed, "master seed");
    cv->add_option("--out", cv_out, "output CSV (counts go to <out>.counts.csv)")
        ->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gen) {
            Timer timer;
            gmcs::EnsembleParams params{gen_n, gen_alpha, gen_rho0, gen_noise, gen_seed};
            params.validate();
            const auto pi = gmcs::gen_planted(params);
            gmcs::InstanceFile file{pi.inst, pi.x0, pi.support0.ones(), pi.noise_var, {}};
            file.metadata = {{"generator", "mt19937_64/box-muller"},
                             {"seed", gen_seed},
                             {"n", gen_n},
                             {"alpha", gen_alpha},
                             {"rho0", gen_rho0},
                             {"noise_var", gen_noise}};
            gmcs::save_instance(file, gen_out);
            write_manifest(gen_out, "gen", file.metadata, timer.seconds());
            std::cout << "M = " << params.m() << ", K0 = " << params.k0() << "\n";
        } else if (*solve) {
            Timer timer;
            const auto file = gmcs::load_instance(solve_in);
            if (solve_k < 1) throw gmcs::InvalidParams("--k must be >= 1");
            if (solve_k > file.inst.M()) throw gmcs::InvalidParams("K exceeds M");
            gmcs::GmcConfig cfg;
            cfg.t_wait = solve_twait;
            cfg.seed = solve_seed;
            const auto runs = gmcs::multi_restart(file.inst, solve_k, solve_ninit, cfg, threads);
            json report;
            report["best"] = result_to_json(runs.best);
            json restarts = json::array();
            long nconv_total = 0;
            for (const auto& r : runs.all) {
                restarts.push_back(result_to_json(r));
                nconv_total += r.n_conv;
            }
            report["restarts"] = restarts;
            report["n_conv_mean"] = static_cast<double>(nconv_total) / runs.all.size();
            if (file.x0) {
                const auto fit = gmcs::fit_least_squares(file.inst, runs.best.c_final);
                const double ex = gmcs::input_mse(*file.x0, runs.best.c_final, fit);
                report["eps_x"] = ex;
                report["recovered"] = ex <= gmcs::kRecoveryTol;
            }
            if (solve_out.empty()) {
                std::cout << report.dump(2) << "\n";
            } else {
                std::ofstream f(solve_out);
                f << report.dump(2) << "\n";
                write_manifest(solve_out, "solve",
                               {{"in", solve_in}, {"k", solve_k}, {"n_init", solve_ninit},
                                {"t_wait", solve_twait}, {"seed", solve_seed}},
                               timer.seconds());
            }
        } else if (*phase) {
            Timer timer;
            if (ph_alphas.empty()) ph_alphas = gmcs::default_phase_axis();
            if (ph_rho0s.empty()) ph_rho0s = gmcs::default_phase_axis();
            gmcs::GmcConfig cfg;
            cfg.t_wait = ph_twait;
            cfg.seed = gmcs::derive_seed(ph_seed, 1);
            const auto cells = gmcs::phase_sweep(ph_alphas, ph_rho0s, ph_n, ph_nsamp, ph_ninit,
                                                 cfg, gmcs::derive_seed(ph_seed, 2), threads);
            std::ofstream f(ph_out);
            f << std::setprecision(17);
            f << "alpha,rho0,n_samp,p_samp\n";
            for (const auto& c : cells)
                f << c.alpha << "," << c.rho0 << "," << c.n_samp << "," << c.p_samp << "\n";
            write_manifest(ph_out, "phase",
                           {{"n", ph_n}, {"n_samp", ph_nsamp}, {"n_init", ph_ninit},
                            {"t_wait", ph_twait}, {"seed", ph_seed}},
                           timer.seconds());
        } else if (*scaling) {
            Timer timer;
            gmcs::GmcConfig cfg;
            cfg.t_wait = sc_twait;
            cfg.seed = gmcs::derive_seed(sc_seed, 1);
            const auto report = gmcs::nconv_scaling(sc_sizes, sc_alpha, sc_rho, sc_rho0, sc_nsamp,
                                                    cfg, gmcs::derive_seed(sc_seed, 2), threads);
            std::ofstream f(sc_out);
            f << std::setprecision(17);
            f << "N,nconv_mean,nconv_stderr\n";
            for (const auto& r : report.records)
                f << r.n << "," << r.nconv_mean << "," << r.nconv_stderr << "\n";
            json params = {{"sizes", sc_sizes}, {"alpha", sc_alpha}, {"rho", sc_rho},
                           {"rho0", sc_rho0}, {"n_samp", sc_nsamp}, {"seed", sc_seed}};
            if (report.loglog_slope) {
                params["loglog_slope"] = *report.loglog_slope;
                std::cout << "log-log slope: " << *report.loglog_slope << "\n";
            } else {
                std::cout << "log-log slope: undefined (single size)\n";
            }
            write_manifest(sc_out, "scaling", params, timer.seconds());
        } else if (*noisy) {
            Timer timer;
            gmcs::EnsembleParams params{no_n, no_alpha, no_rho0, no_noise,
                                        gmcs::derive_seed(no_seed, 2)};
            gmcs::GmcConfig cfg;
            cfg.t_wait = no_twait;
            cfg.seed = gmcs::derive_seed(no_seed, 1);
            const auto report =
                gmcs::noisy_mse_curve(params, no_rhos, no_nsamp, no_ninit, cfg, threads);
            std::ofstream f(no_out);
            f << std::setprecision(17);
            f << "rho,eps_y_mean,eps_y_stderr,eps_x_mean,eps_x_stderr\n";
            for (const auto& p : report.points)
                f << p.rho << "," << p.eps_y_mean << "," << p.eps_y_stderr << ","
                  << p.eps_x_mean << "," << p.eps_x_stderr << "\n";
            write_manifest(no_out, "noisy",
                           {{"n", no_n}, {"alpha", no_alpha}, {"rho0", no_rho0},
                            {"noise_var", no_noise}, {"rho", no_rhos}, {"n_samp", no_nsamp},
                            {"n_init", no_ninit}, {"seed", no_seed}},
                           timer.seconds());
        } else if (*cv) {
            Timer timer;
            const auto raw = gmcs::load_csv(cv_a, cv_y, cv_header);
            std::cout << "loaded M = " << raw.M() << ", N = " << raw.N() << "\n";
            std::optional<gmcs::StandardizedData> std_data;
            if (!cv_no_std) std_data = gmcs::standardize(raw);
            const gmcs::Instance& data = cv_no_std ? raw : std_data->data;
            gmcs::GmcConfig cfg;
            cfg.t_wait = cv_twait;
            std::ofstream f(cv_out);
            f << std::setprecision(17);
            f << "K,eps_cv\n";
            std::ofstream fc(cv_out + ".counts.csv");
            fc << "K,variable,count\n";
            for (int k = 1; k <= cv_kmax; ++k) {
                gmcs::GmcConfig k_cfg = cfg;
                k_cfg.seed = gmcs::derive_seed(cv_seed, 0xCE000 + k);
                const auto report = gmcs::loo_cv_error(data, k, cv_ninit, k_cfg, threads);
                f << k << "," << report.eps_cv << "\n";
                std::cout << "K = " << k << ": eps_cv = " << report.eps_cv << "\n";
                for (const auto& [var, count] : gmcs::selection_counts(report))
                    fc << k << "," << var + 1 << "," << count << "\n";  // 1-based variable ids
            }
            write_manifest(cv_out, "cv",
                           {{"a", cv_a}, {"y", cv_y}, {"k_max", cv_kmax},
                            {"n_init_per_fold", cv_ninit}, {"standardize", !cv_no_std},
                            {"seed", cv_seed}},
                           timer.seconds());
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
