#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <vector>

#include "gmcs/errors.hpp"
#include "gmcs/rng.hpp"

namespace gmcs {

// Design matrix plus response. Immutable after construction.
class Instance {
public:
    Instance(Eigen::MatrixXd A, Eigen::VectorXd y) : A_(std::move(A)), y_(std::move(y)) {
        if (A_.rows() < 1 || A_.cols() < 1)
            throw InvalidParams("Instance requires M >= 1 and N >= 1");
        if (y_.size() != A_.rows())
            throw DimensionMismatch("y length does not match row count of A");
        if (!A_.allFinite() || !y_.allFinite())
            throw InvalidParams("Instance entries must be finite");
    }

    const Eigen::MatrixXd& A() const { return A_; }
    const Eigen::VectorXd& y() const { return y_; }
    int M() const { return static_cast<int>(A_.rows()); }
    int N() const { return static_cast<int>(A_.cols()); }

private:
    Eigen::MatrixXd A_;
    Eigen::VectorXd y_;
};

// Length-N indicator vector with fixed popcount K. Maintains ONES/ZEROS as
// dense index lists with a position map so uniform sampling and pair flips
// are O(1).
class SparseWeight {
public:
    SparseWeight(int n, std::vector<int> active) : n_(n) {
        if (n < 1) throw InvalidParams("SparseWeight requires N >= 1");
        if (active.empty()) throw InvalidParams("SparseWeight requires K >= 1");
        std::sort(active.begin(), active.end());
        if (std::adjacent_find(active.begin(), active.end()) != active.end())
            throw InvalidParams("duplicate index in active set");
        if (active.front() < 0 || active.back() >= n)
            throw IndexOutOfRange("active index outside [0, N)");
        bits_.assign(n, 0);
        pos_.assign(n, -1);
        ones_ = std::move(active);
        for (std::size_t p = 0; p < ones_.size(); ++p) {
            bits_[ones_[p]] = 1;
            pos_[ones_[p]] = static_cast<int>(p);
        }
        for (int i = 0; i < n; ++i)
            if (!bits_[i]) {
                pos_[i] = static_cast<int>(zeros_.size());
                zeros_.push_back(i);
            }
    }

    static SparseWeight random(int n, int k, Rng& rng) {
        if (k < 1 || k > n) throw InvalidParams("random support requires 1 <= K <= N");
        // Fisher-Yates prefix over the index pool
        std::vector<int> pool(n);
        for (int i = 0; i < n; ++i) pool[i] = i;
        for (int i = 0; i < k; ++i) {
            const std::size_t j = i + rng.uniform_index(n - i);
            std::swap(pool[i], pool[j]);
        }
        return SparseWeight(n, std::vector<int>(pool.begin(), pool.begin() + k));
    }

    int N() const { return n_; }
    int K() const { return static_cast<int>(ones_.size()); }
    bool test(int i) const { return bits_[i] != 0; }
    const std::vector<int>& ones() const { return ones_; }
    const std::vector<int>& zeros() const { return zeros_; }
    const std::vector<std::uint8_t>& bits() const { return bits_; }

    // Deactivate i_out, activate j_in. K is conserved.
    void flip(int i_out, int j_in) {
        if (i_out < 0 || i_out >= n_ || !bits_[i_out])
            throw IndexNotActive("flip source is not active");
        if (j_in < 0 || j_in >= n_ || bits_[j_in])
            throw IndexNotInactive("flip target is not inactive");
        remove_from(ones_, i_out);
        remove_from(zeros_, j_in);
        bits_[i_out] = 0;
        bits_[j_in] = 1;
        pos_[j_in] = static_cast<int>(ones_.size());
        ones_.push_back(j_in);
        pos_[i_out] = static_cast<int>(zeros_.size());
        zeros_.push_back(i_out);
    }

    bool operator==(const SparseWeight& o) const { return n_ == o.n_ && bits_ == o.bits_; }

private:
    void remove_from(std::vector<int>& list, int idx) {
        const int p = pos_[idx];
        const int last = list.back();
        list[p] = last;
        pos_[last] = p;
        list.pop_back();
    }

    int n_;
    std::vector<std::uint8_t> bits_;
    std::vector<int> ones_;
    std::vector<int> zeros_;
    std::vector<int> pos_;  // position of each index inside its current list
};

// Planted ground truth attached to an instance.
struct PlantedInstance {
    Instance inst;
    Eigen::VectorXd x0;
    SparseWeight support0;
    double noise_var;
};

}  // namespace gmcs
