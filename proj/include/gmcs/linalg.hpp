#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "gmcs/errors.hpp"
#include "gmcs/instance.hpp"

namespace gmcs {

struct LeastSquaresFit {
    Eigen::VectorXd coefficients;  // aligned with the ONES order of c
    Eigen::VectorXd residual;      // y - A_c x_c, length M
    double energy;                 // ||residual||^2 / (2M)
    bool rank_deficient;
};

// Minimum-norm least squares restricted to the active columns. Rank detection
// via complete orthogonal decomposition at threshold 1e-10 relative to the
// largest pivot; rank deficiency is flagged, never thrown.
inline LeastSquaresFit fit_least_squares(const Instance& inst, const SparseWeight& c) {
    if (c.N() != inst.N()) throw DimensionMismatch("sparse weight length != N");
    if (c.K() > inst.M()) throw InvalidParams("K exceeds M");

    const int m = inst.M();
    const int k = c.K();
    Eigen::MatrixXd Ac(m, k);
    for (int p = 0; p < k; ++p) Ac.col(p) = inst.A().col(c.ones()[p]);

    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(Ac.rows(), Ac.cols());
    cod.setThreshold(1e-10);
    cod.compute(Ac);

    LeastSquaresFit fit;
    fit.coefficients = cod.solve(inst.y());
    fit.residual = inst.y() - Ac * fit.coefficients;
    fit.energy = fit.residual.squaredNorm() / (2.0 * m);
    fit.rank_deficient = cod.rank() < k;
    return fit;
}

// Output MSE of the least-squares fit on the active set.
inline double energy(const Instance& inst, const SparseWeight& c) {
    return fit_least_squares(inst, c).energy;
}

// Cached Cholesky factorization of A_c^T A_c supporting single pair flips at
// O(K^2 + MK). The sparse weight lives inside the state so search code can
// sample and flip through one object.
class FactorState {
public:
    static constexpr int kRebuildInterval = 256;

    FactorState(const Instance& inst, SparseWeight c) : inst_(&inst), c_(std::move(c)) {
        if (c_.N() != inst.N()) throw DimensionMismatch("sparse weight length != N");
        if (c_.K() > inst.M()) throw InvalidParams("K exceeds M");
        rebuild();
    }

    const Instance& instance() const { return *inst_; }
    const SparseWeight& weight() const { return c_; }
    const std::vector<int>& active() const { return active_; }
    double energy() const { return energy_; }
    bool degenerate() const { return degenerate_; }

    // Energy of the state with i_out swapped for j_in, without mutating this.
    double energy_after_pair_flip(int i_out, int j_in) const {
        check_membership(i_out, j_in);
        if (degenerate_) return flipped_energy_by_refit(i_out, j_in);
        Core scratch = core_;
        if (!apply_flip(scratch, i_out, j_in)) return flipped_energy_by_refit(i_out, j_in);
        return core_energy(scratch);
    }

    void commit_pair_flip(int i_out, int j_in) {
        check_membership(i_out, j_in);
        const int p = position_of(i_out);
        bool ok = !degenerate_ && apply_flip(core_, i_out, j_in);
        active_.erase(active_.begin() + p);
        active_.push_back(j_in);
        c_.flip(i_out, j_in);
        if (!ok || ++commits_ >= kRebuildInterval) {
            rebuild();
        } else {
            energy_ = core_energy(core_);
        }
    }

private:
    struct Core {
        Eigen::MatrixXd L;   // lower triangular, K x K
        Eigen::VectorXd b;   // A_c^T y in active order
        std::vector<int> active;
    };

    void rebuild() {
        const int k = c_.K();
        active_ = c_.ones();
        core_.active = active_;
        Eigen::MatrixXd Ac(inst_->M(), k);
        for (int p = 0; p < k; ++p) Ac.col(p) = inst_->A().col(active_[p]);
        yty_ = inst_->y().squaredNorm();
        core_.b = Ac.transpose() * inst_->y();
        Eigen::LLT<Eigen::MatrixXd> llt(Ac.transpose() * Ac);
        degenerate_ = llt.info() != Eigen::Success;
        commits_ = 0;
        if (degenerate_) {
            energy_ = fit_least_squares(*inst_, c_).energy;
        } else {
            core_.L = llt.matrixL();
            energy_ = core_energy(core_);
        }
    }

    double core_energy(const Core& core) const {
        const Eigen::VectorXd w =
            core.L.triangularView<Eigen::Lower>().solve(core.b);
        return std::max(0.0, yty_ - w.squaredNorm()) / (2.0 * inst_->M());
    }

    // Remove active position p (column downdate), then append column j.
    // Returns false when the updated factor loses positive definiteness.
    bool apply_flip(Core& core, int i_out, int j_in) const {
        const int k = static_cast<int>(core.active.size());
        int p = 0;
        while (core.active[p] != i_out) ++p;

        // Deleting row/col p of the Gram: keep the leading p x p block, shift
        // the trailing columns of L left, then restore triangularity of the
        // trailing block by a rank-1 Cholesky update with the dropped column.
        const int t = k - p - 1;
        Eigen::VectorXd u = core.L.col(p).tail(t);
        Eigen::MatrixXd Lnew(k, k);
        Lnew.setZero();
        Lnew.topLeftCorner(p, p) = core.L.topLeftCorner(p, p);
        Lnew.block(p, 0, t, p) = core.L.block(p + 1, 0, t, p);
        Lnew.block(p, p, t, t) = core.L.block(p + 1, p + 1, t, t);
        for (int i = 0; i < t; ++i) {
            auto Ltt = Lnew.block(p, p, t, t);
            const double r2 = Ltt(i, i) * Ltt(i, i) + u(i) * u(i);
            if (r2 <= 0.0) return false;
            const double r = std::sqrt(r2);
            const double cth = r / Ltt(i, i);
            const double sth = u(i) / Ltt(i, i);
            Ltt(i, i) = r;
            if (i + 1 < t) {
                Ltt.col(i).tail(t - i - 1) =
                    (Ltt.col(i).tail(t - i - 1) + sth * u.tail(t - i - 1)) / cth;
                u.tail(t - i - 1) =
                    cth * u.tail(t - i - 1) - sth * Ltt.col(i).tail(t - i - 1);
            }
        }

        std::vector<int> act = core.active;
        act.erase(act.begin() + p);
        Eigen::VectorXd bnew(k);
        bnew.head(p) = core.b.head(p);
        bnew.segment(p, t) = core.b.tail(t);

        // Append column j_in: new Gram row from one matrix-vector product,
        // new factor row from one forward solve.
        const auto aj = inst_->A().col(j_in);
        Eigen::VectorXd g(k - 1);
        for (int q = 0; q < k - 1; ++q) g(q) = inst_->A().col(act[q]).dot(aj);
        const Eigen::VectorXd v = Lnew.topLeftCorner(k - 1, k - 1)
                                      .triangularView<Eigen::Lower>()
                                      .solve(g);
        const double ajj = aj.squaredNorm();
        const double d2 = ajj - v.squaredNorm();
        if (d2 <= 1e-12 * ajj) return false;
        Lnew.row(k - 1).head(k - 1) = v.transpose();
        Lnew(k - 1, k - 1) = std::sqrt(d2);
        bnew(k - 1) = aj.dot(inst_->y());

        act.push_back(j_in);
        core.L = std::move(Lnew);
        core.b = std::move(bnew);
        core.active = std::move(act);
        return true;
    }

    // Fallback when the incremental factor is unusable (collinear columns).
    double flipped_energy_by_refit(int i_out, int j_in) const {
        SparseWeight flipped = c_;
        flipped.flip(i_out, j_in);
        return fit_least_squares(*inst_, flipped).energy;
    }

    int position_of(int idx) const {
        for (int p = 0; p < static_cast<int>(active_.size()); ++p)
            if (active_[p] == idx) return p;
        throw IndexNotActive("index not in active set");
    }

    void check_membership(int i_out, int j_in) const {
        if (i_out < 0 || i_out >= c_.N() || !c_.test(i_out))
            throw IndexNotActive("i_out is not active");
        if (j_in < 0 || j_in >= c_.N() || c_.test(j_in))
            throw IndexNotInactive("j_in is not inactive");
    }

    const Instance* inst_;
    SparseWeight c_;
    std::vector<int> active_;  // insertion order
    Core core_;
    double yty_ = 0.0;
    double energy_ = 0.0;
    bool degenerate_ = false;
    int commits_ = 0;
};

inline FactorState factor_init(const Instance& inst, const SparseWeight& c) {
    return FactorState(inst, c);
}

}  // namespace gmcs
