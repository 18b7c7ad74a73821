#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>

#include "gmcs/instance.hpp"
#include "gmcs/rng.hpp"

namespace gmcs {

struct EnsembleParams {
    int n;
    double alpha;      // M / N
    double rho0;       // K0 / N
    double noise_var = 0.0;
    std::uint64_t seed = 0;

    // nearest, ties up
    int m() const { return static_cast<int>(std::floor(alpha * n + 0.5)); }
    int k0() const { return static_cast<int>(std::floor(rho0 * n + 0.5)); }

    void validate() const {
        if (n < 1) throw InvalidParams("N must be >= 1");
        if (noise_var < 0.0) throw InvalidParams("noise variance must be >= 0");
        if (m() < 1) throw InvalidParams("alpha * N rounds to zero rows");
        if (k0() < 1) throw InvalidParams("rho0 * N rounds to zero nonzeros");
        if (k0() > m()) throw InvalidParams("K0 > M: infeasible ensemble");
    }
};

inline SparseWeight random_support(int n, int k, Rng& rng) {
    return SparseWeight::random(n, k, rng);
}

// Planted ensemble: A_ij ~ N(0, 1/N), nonzero signal entries ~ N(0, 1/rho)
// with rho the realized K0/N so the signal power is exactly unity, and
// y = A x0 + noise.
inline PlantedInstance gen_planted(const EnsembleParams& params) {
    params.validate();
    const int n = params.n;
    const int m = params.m();
    const int k0 = params.k0();
    Rng rng(params.seed);

    Eigen::MatrixXd A(m, n);
    const double col_sd = 1.0 / std::sqrt(static_cast<double>(n));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) A(i, j) = col_sd * rng.gaussian();

    SparseWeight support0 = random_support(n, k0, rng);
    Eigen::VectorXd x0 = Eigen::VectorXd::Zero(n);
    const double sig_sd = std::sqrt(static_cast<double>(n) / k0);
    for (int idx : support0.ones()) x0(idx) = sig_sd * rng.gaussian();

    Eigen::VectorXd y = A * x0;
    if (params.noise_var > 0.0) {
        const double noise_sd = std::sqrt(params.noise_var);
        for (int i = 0; i < m; ++i) y(i) += noise_sd * rng.gaussian();
    }
    return PlantedInstance{Instance(std::move(A), std::move(y)), std::move(x0),
                           std::move(support0), params.noise_var};
}

}  // namespace gmcs
