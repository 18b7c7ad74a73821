#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <optional>
#include <vector>

#include "gmcs/datagen.hpp"
#include "gmcs/parallel.hpp"
#include "gmcs/search.hpp"

namespace gmcs {

// Threshold operationalizing "perfect reconstruction" in the noiseless case.
inline constexpr double kRecoveryTol = 1e-10;

// Input MSE: (1/2N) ||x0 - xhat||^2 with the fit embedded at ONES positions.
inline double input_mse(const Eigen::VectorXd& x0, const SparseWeight& c,
                        const LeastSquaresFit& fit) {
    if (x0.size() != c.N()) throw DimensionMismatch("x0 length != N");
    if (fit.coefficients.size() != c.K()) throw DimensionMismatch("fit size != K");
    Eigen::VectorXd xhat = Eigen::VectorXd::Zero(c.N());
    for (int p = 0; p < c.K(); ++p) xhat(c.ones()[p]) = fit.coefficients(p);
    return (x0 - xhat).squaredNorm() / (2.0 * c.N());
}

inline double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / v.size();
}

inline double stderr_of(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    const double mu = mean_of(v);
    double ss = 0.0;
    for (double x : v) ss += (x - mu) * (x - mu);
    return std::sqrt(ss / (v.size() - 1)) / std::sqrt(static_cast<double>(v.size()));
}

struct SuccessReport {
    std::vector<double> p_suc;  // per instance
    double mean;
    double se;
    int n_samp;
    int n_init;
};

// Fraction of restarts on one instance achieving perfect reconstruction;
// the search runs at the true sparsity K = K0.
inline double success_rate(const PlantedInstance& pi, int n_init, const GmcConfig& cfg) {
    if (n_init < 1) throw InvalidParams("n_init must be >= 1");
    const auto runs = multi_restart(pi.inst, pi.support0.K(), n_init, cfg);
    int hits = 0;
    for (const auto& run : runs.all) {
        const auto fit = fit_least_squares(pi.inst, run.c_final);
        if (input_mse(pi.x0, run.c_final, fit) <= kRecoveryTol) ++hits;
    }
    return static_cast<double>(hits) / n_init;
}

inline SuccessReport success_ensemble(const EnsembleParams& params, int n_samp, int n_init,
                                      const GmcConfig& cfg, int threads = 1) {
    SuccessReport report;
    report.p_suc.assign(n_samp, 0.0);
    report.n_samp = n_samp;
    report.n_init = n_init;
    parallel_for(n_samp, threads, [&](long s) {
        EnsembleParams p = params;
        p.seed = derive_seed(params.seed, 0xA000 + s);
        const PlantedInstance pi = gen_planted(p);
        GmcConfig run_cfg = cfg;
        run_cfg.seed = derive_seed(cfg.seed, 0xB000 + s);
        report.p_suc[s] = success_rate(pi, n_init, run_cfg);
    });
    report.mean = mean_of(report.p_suc);
    report.se = stderr_of(report.p_suc);
    return report;
}

struct PhaseCell {
    double alpha;
    double rho0;
    double p_samp;  // fraction of instances with p_suc > 0
    int n_samp;
};

inline std::vector<double> default_phase_axis() {
    std::vector<double> axis;
    for (int i = 1; i <= 19; ++i) axis.push_back(0.05 * i);
    return axis;
}

// P_samp over a grid of (alpha, rho0); infeasible cells (K0 > M) skipped.
inline std::vector<PhaseCell> phase_sweep(const std::vector<double>& alphas,
                                          const std::vector<double>& rho0s, int n,
                                          int n_samp, int n_init, const GmcConfig& cfg,
                                          std::uint64_t data_seed, int threads = 1) {
    std::vector<std::pair<double, double>> cells;
    for (double a : alphas)
        for (double r : rho0s) {
            EnsembleParams probe{n, a, r, 0.0, 0};
            if (probe.k0() >= 1 && probe.m() >= 1 && probe.k0() <= probe.m())
                cells.emplace_back(a, r);
        }
    std::vector<PhaseCell> out(cells.size());
    for (std::size_t ci = 0; ci < cells.size(); ++ci) {
        const auto [a, r] = cells[ci];
        std::vector<int> positive(n_samp, 0);
        parallel_for(n_samp, threads, [&](long s) {
            EnsembleParams p{n, a, r, 0.0,
                             derive_seed(data_seed, ci * 100003ULL + s)};
            const PlantedInstance pi = gen_planted(p);
            GmcConfig run_cfg = cfg;
            run_cfg.seed = derive_seed(cfg.seed, ci * 100003ULL + s);
            // P_samp only needs p_suc > 0: stop at the first successful restart
            for (int rstart = 0; rstart < n_init && !positive[s]; ++rstart) {
                GmcConfig one = run_cfg;
                one.seed = derive_seed(run_cfg.seed, rstart);
                Rng init_rng(derive_seed(one.seed, 0x1717ULL));
                const SparseWeight c0 = SparseWeight::random(pi.inst.N(), pi.support0.K(), init_rng);
                const GmcResult res = gmc(pi.inst, c0, one);
                const auto fit = fit_least_squares(pi.inst, res.c_final);
                if (input_mse(pi.x0, res.c_final, fit) <= kRecoveryTol) positive[s] = 1;
            }
        });
        int pos = 0;
        for (int v : positive) pos += v;
        out[ci] = {a, r, static_cast<double>(pos) / n_samp, n_samp};
    }
    return out;
}

struct ScalingRecord {
    int n;
    double nconv_mean;
    double nconv_stderr;
    int n_converged;
    int n_capped;  // runs that hit max_mcs, excluded from the mean
};

struct ScalingReport {
    std::vector<ScalingRecord> records;
    std::optional<double> loglog_slope;
};

// Mean MCS count until convergence per system size, with the log-log slope
// across sizes fitted by least squares.
inline ScalingReport nconv_scaling(const std::vector<int>& sizes, double alpha, double rho,
                                   double rho0, int n_samp, const GmcConfig& cfg,
                                   std::uint64_t data_seed, int threads = 1) {
    ScalingReport report;
    for (std::size_t si = 0; si < sizes.size(); ++si) {
        const int n = sizes[si];
        EnsembleParams probe{n, alpha, rho0, 0.0, 0};
        probe.validate();
        const int k = static_cast<int>(std::floor(rho * n + 0.5));
        if (k < 1 || k > probe.m()) throw InvalidParams("rho infeasible at this size");
        std::vector<double> nconv(n_samp, -1.0);
        parallel_for(n_samp, threads, [&](long s) {
            EnsembleParams p{n, alpha, rho0, 0.0, derive_seed(data_seed, si * 7919ULL + s)};
            const PlantedInstance pi = gen_planted(p);
            GmcConfig run_cfg = cfg;
            run_cfg.seed = derive_seed(cfg.seed, si * 7919ULL + s);
            Rng init_rng(derive_seed(run_cfg.seed, 0x1717ULL));
            const SparseWeight c0 = SparseWeight::random(n, k, init_rng);
            const GmcResult res = gmc(pi.inst, c0, run_cfg);
            if (res.terminated_by == Termination::LocalOptimum)
                nconv[s] = static_cast<double>(res.n_conv);
        });
        std::vector<double> converged;
        for (double v : nconv)
            if (v >= 0.0) converged.push_back(v);
        ScalingRecord rec;
        rec.n = n;
        rec.n_converged = static_cast<int>(converged.size());
        rec.n_capped = n_samp - rec.n_converged;
        rec.nconv_mean = converged.empty() ? 0.0 : mean_of(converged);
        rec.nconv_stderr = converged.empty() ? 0.0 : stderr_of(converged);
        report.records.push_back(rec);
    }
    if (report.records.size() >= 2) {
        // least-squares slope of log(mean) on log(N)
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const int m = static_cast<int>(report.records.size());
        for (const auto& r : report.records) {
            const double x = std::log(static_cast<double>(r.n));
            const double y = std::log(r.nconv_mean);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        report.loglog_slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    }
    return report;
}

struct MsePoint {
    double rho;
    double eps_y_mean;
    double eps_y_stderr;
    double eps_x_mean;
    double eps_x_stderr;
};

struct MseReport {
    std::vector<MsePoint> points;
};

// Best-of-n_init estimator per instance along a rho grid (noisy ensemble).
inline MseReport noisy_mse_curve(const EnsembleParams& params, const std::vector<double>& rho_grid,
                                 int n_samp, int n_init, const GmcConfig& cfg, int threads = 1) {
    params.validate();
    if (params.noise_var <= 0.0) throw InvalidParams("noisy curve requires noise_var > 0");
    MseReport report;
    for (std::size_t ri = 0; ri < rho_grid.size(); ++ri) {
        const double rho = rho_grid[ri];
        const int k = static_cast<int>(std::floor(rho * params.n + 0.5));
        EnsembleParams probe = params;
        if (k < 1 || k > probe.m()) throw InvalidParams("rho infeasible: K out of [1, M]");
        std::vector<double> eps_y(n_samp), eps_x(n_samp);
        parallel_for(n_samp, threads, [&](long s) {
            EnsembleParams p = params;
            p.seed = derive_seed(params.seed, 0xC000 + s);  // same instances across rho
            const PlantedInstance pi = gen_planted(p);
            GmcConfig run_cfg = cfg;
            run_cfg.seed = derive_seed(cfg.seed, ri * 104729ULL + s);
            const auto runs = multi_restart(pi.inst, k, n_init, run_cfg);
            eps_y[s] = runs.best.energy;
            const auto fit = fit_least_squares(pi.inst, runs.best.c_final);
            eps_x[s] = input_mse(pi.x0, runs.best.c_final, fit);
        });
        report.points.push_back({rho, mean_of(eps_y), stderr_of(eps_y), mean_of(eps_x),
                                 stderr_of(eps_x)});
    }
    return report;
}

}  // namespace gmcs
