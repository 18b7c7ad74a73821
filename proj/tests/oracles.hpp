// Test-only reference implementations, kept independent of the library's
// solve path: explicit normal-equations fits, brute-force support
// enumeration, and full neighbor scans.
#pragma once

#include <Eigen/Dense>
#include <limits>
#include <vector>

#include "gmcs/instance.hpp"

namespace oracle {

// Explicit Gram inversion, nothing shared with the library's COD/Cholesky
// paths.
inline Eigen::VectorXd normal_equations_fit(const gmcs::Instance& inst,
                                            const std::vector<int>& support) {
    const int k = static_cast<int>(support.size());
    Eigen::MatrixXd Ac(inst.M(), k);
    for (int p = 0; p < k; ++p) Ac.col(p) = inst.A().col(support[p]);
    const Eigen::MatrixXd gram = Ac.transpose() * Ac;
    return gram.inverse() * (Ac.transpose() * inst.y());
}

inline double refit_energy(const gmcs::Instance& inst, const std::vector<int>& support) {
    const int k = static_cast<int>(support.size());
    Eigen::MatrixXd Ac(inst.M(), k);
    for (int p = 0; p < k; ++p) Ac.col(p) = inst.A().col(support[p]);
    const Eigen::VectorXd x = normal_equations_fit(inst, support);
    return (inst.y() - Ac * x).squaredNorm() / (2.0 * inst.M());
}

// Global minimum over all K-subsets of {0..N-1}.
inline double enumerate_best_energy(const gmcs::Instance& inst, int k,
                                    std::vector<int>* best_support = nullptr) {
    std::vector<int> support(k);
    for (int i = 0; i < k; ++i) support[i] = i;
    double best = std::numeric_limits<double>::infinity();
    while (true) {
        const double e = refit_energy(inst, support);
        if (e < best) {
            best = e;
            if (best_support) *best_support = support;
        }
        // next combination
        int i = k - 1;
        while (i >= 0 && support[i] == inst.N() - k + i) --i;
        if (i < 0) break;
        ++support[i];
        for (int j = i + 1; j < k; ++j) support[j] = support[j - 1] + 1;
    }
    return best;
}

// Minimum energy among all K(N-K) pair-flip neighbors of c.
inline double best_neighbor_energy(const gmcs::Instance& inst, const gmcs::SparseWeight& c) {
    double best = std::numeric_limits<double>::infinity();
    for (int i : c.ones())
        for (int j : c.zeros()) {
            std::vector<int> sup;
            for (int o : c.ones())
                if (o != i) sup.push_back(o);
            sup.push_back(j);
            best = std::min(best, refit_energy(inst, sup));
        }
    return best;
}

}  // namespace oracle
