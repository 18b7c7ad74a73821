#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "gmcs/instance.hpp"
#include "gmcs/linalg.hpp"
#include "gmcs/parallel.hpp"
#include "gmcs/rng.hpp"

namespace gmcs {

struct GmcConfig {
    int t_wait = 10;
    std::optional<long> max_mcs;  // defaults to 100 * t_wait * N when unset
    std::uint64_t seed = 0;
    bool record_trajectory = false;
};

enum class Termination { LocalOptimum, MaxMcs };

struct GmcResult {
    SparseWeight c_final;
    double energy;
    long n_conv;                  // completed MCS sweeps
    long exhaustive_invocations;
    Termination terminated_by;
    std::uint64_t seed;
    std::vector<double> trajectory;  // energy after each sweep, when recorded
};

// One pair-flip proposal: i uniform from ONES, j uniform from ZEROS, commit
// iff the energy strictly decreases. Returns whether the flip was accepted.
inline bool mc_pair_flip(FactorState& state, Rng& rng) {
    const SparseWeight& c = state.weight();
    if (c.zeros().empty()) throw DegenerateState("K = N leaves no inactive index");
    const int i = c.ones()[rng.uniform_index(c.ones().size())];
    const int j = c.zeros()[rng.uniform_index(c.zeros().size())];
    const double next = state.energy_after_pair_flip(i, j);
    if (next < state.energy()) {
        state.commit_pair_flip(i, j);
        return true;
    }
    return false;
}

// One MCS: N pair-flipping trials. Returns whether c changed over the sweep.
inline bool run_one_mcs(FactorState& state, Rng& rng) {
    const SparseWeight before = state.weight();
    for (int trial = 0; trial < state.weight().N(); ++trial) mc_pair_flip(state, rng);
    return !(state.weight() == before);
}

struct LocalSearchOutcome {
    bool moved;
    double energy;  // energy after the (possible) move
};

// Scan all K(N-K) pair-flip neighbors. If some neighbor is strictly lower,
// move to a minimum-energy one, chosen uniformly among exact ties; otherwise
// leave the state untouched.
inline LocalSearchOutcome exhaustive_local_search(FactorState& state, Rng& rng) {
    double best = state.energy();
    std::vector<std::pair<int, int>> ties;
    for (int i : state.weight().ones()) {
        for (int j : state.weight().zeros()) {
            const double e = state.energy_after_pair_flip(i, j);
            if (e < best) {
                best = e;
                ties.assign(1, {i, j});
            } else if (e == best && !ties.empty()) {
                ties.emplace_back(i, j);
            }
        }
    }
    if (ties.empty()) return {false, state.energy()};
    const auto [i, j] = ties[rng.uniform_index(ties.size())];
    state.commit_pair_flip(i, j);
    return {true, state.energy()};
}

// Greedy Monte-Carlo search: zero-temperature pair-flip descent with a stall
// detector. After t_wait sweeps without a state change the full neighborhood
// is scanned; no improving neighbor means a certified local optimum.
inline GmcResult gmc(const Instance& inst, const SparseWeight& c_init, const GmcConfig& cfg) {
    if (cfg.t_wait < 1) throw InvalidParams("t_wait must be >= 1");
    FactorState state(inst, c_init);
    Rng rng(cfg.seed);
    const long max_mcs = cfg.max_mcs.value_or(100L * cfg.t_wait * inst.N());

    GmcResult result{state.weight(), state.energy(), 0, 0, Termination::MaxMcs, cfg.seed, {}};
    int stall = 0;
    while (result.n_conv < max_mcs) {
        const bool changed = run_one_mcs(state, rng);
        ++result.n_conv;
        if (cfg.record_trajectory) result.trajectory.push_back(state.energy());
        stall = changed ? 0 : stall + 1;
        if (stall >= cfg.t_wait) {
            ++result.exhaustive_invocations;
            const auto outcome = exhaustive_local_search(state, rng);
            if (!outcome.moved) {
                result.terminated_by = Termination::LocalOptimum;
                break;
            }
            stall = 0;
        }
    }
    result.c_final = state.weight();
    result.energy = state.energy();
    return result;
}

struct MultiRestartResult {
    GmcResult best;
    std::vector<GmcResult> all;
};

// Independent restarts from uniform-random K-subsets. Restart seeds are
// derived from the master seed by index, so results do not depend on
// execution order. Best = minimum energy, lowest restart index on ties.
inline MultiRestartResult multi_restart(const Instance& inst, int k, int n_init,
                                        const GmcConfig& cfg, int threads = 1) {
    if (n_init < 1) throw InvalidParams("n_init must be >= 1");
    std::vector<std::optional<GmcResult>> slots(n_init);
    parallel_for(n_init, threads, [&](long r) {
        GmcConfig run_cfg = cfg;
        run_cfg.seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(r));
        Rng init_rng(derive_seed(run_cfg.seed, 0x1717ULL));
        const SparseWeight c_init = SparseWeight::random(inst.N(), k, init_rng);
        slots[r] = gmc(inst, c_init, run_cfg);
    });
    std::vector<GmcResult> all;
    all.reserve(n_init);
    for (auto& s : slots) all.push_back(std::move(*s));
    std::size_t best = 0;
    for (std::size_t r = 1; r < all.size(); ++r)
        if (all[r].energy < all[best].energy) best = r;
    GmcResult best_copy = all[best];
    return {std::move(best_copy), std::move(all)};
}

}  // namespace gmcs
