#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <vector>

#include "gmcs/parallel.hpp"
#include "gmcs/search.hpp"

namespace gmcs {

// Instance with row mu removed (0-based).
inline Instance loo_system(const Instance& inst, int mu) {
    if (mu < 0 || mu >= inst.M()) throw IndexOutOfRange("fold index outside [0, M)");
    if (inst.M() < 2) throw InvalidParams("LOO requires M >= 2");
    const int m = inst.M();
    Eigen::MatrixXd A(m - 1, inst.N());
    Eigen::VectorXd y(m - 1);
    A.topRows(mu) = inst.A().topRows(mu);
    A.bottomRows(m - 1 - mu) = inst.A().bottomRows(m - 1 - mu);
    y.head(mu) = inst.y().head(mu);
    y.tail(m - 1 - mu) = inst.y().tail(m - 1 - mu);
    return Instance(std::move(A), std::move(y));
}

struct LooReport {
    double eps_cv;
    int k;
    std::vector<std::vector<int>> fold_supports;  // per fold, active indices
    std::vector<int> selection_count;             // per variable, out of M folds
};

// Leave-one-out CV error at sparsity K: each fold reruns the search from
// scratch on the reduced system and predicts the held-out observation.
inline LooReport loo_cv_error(const Instance& inst, int k, int n_init_per_fold,
                              const GmcConfig& cfg, int threads = 1) {
    if (k >= inst.M()) throw InvalidParams("K must be < M for LOO folds");
    if (n_init_per_fold < 1) throw InvalidParams("n_init_per_fold must be >= 1");
    const int m = inst.M();
    LooReport report;
    report.k = k;
    report.fold_supports.assign(m, {});
    report.selection_count.assign(inst.N(), 0);
    std::vector<double> sq_err(m, 0.0);
    parallel_for(m, threads, [&](long mu) {
        const Instance fold = loo_system(inst, static_cast<int>(mu));
        GmcConfig fold_cfg = cfg;
        fold_cfg.seed = derive_seed(cfg.seed, 0xF01D0000ULL + mu);
        const auto runs = multi_restart(fold, k, n_init_per_fold, fold_cfg);
        const auto fit = fit_least_squares(fold, runs.best.c_final);
        double pred = 0.0;
        for (int p = 0; p < k; ++p)
            pred += inst.A()(mu, runs.best.c_final.ones()[p]) * fit.coefficients(p);
        const double err = inst.y()(mu) - pred;
        sq_err[mu] = err * err;
        report.fold_supports[mu] = runs.best.c_final.ones();
        std::sort(report.fold_supports[mu].begin(), report.fold_supports[mu].end());
    });
    double total = 0.0;
    for (double e : sq_err) total += e;
    report.eps_cv = total / (2.0 * m);
    for (const auto& sup : report.fold_supports)
        for (int v : sup) ++report.selection_count[v];
    return report;
}

// Variables ranked by how often the LOO folds selected them; count
// descending, index ascending on ties.
inline std::vector<std::pair<int, int>> selection_counts(const LooReport& report) {
    if (report.fold_supports.empty()) throw InvalidParams("empty report");
    std::vector<std::pair<int, int>> ranked;
    for (int v = 0; v < static_cast<int>(report.selection_count.size()); ++v)
        if (report.selection_count[v] > 0) ranked.emplace_back(v, report.selection_count[v]);
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        return a.second != b.second ? a.second > b.second : a.first < b.first;
    });
    return ranked;
}

}  // namespace gmcs
