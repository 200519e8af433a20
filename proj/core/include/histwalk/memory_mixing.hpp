#pragma once

#include "histwalk/coined_walk.hpp"
#include "histwalk/types.hpp"

#include <deque>
#include <utility>
#include <vector>

namespace histwalk {

// Convex mixing weights over the M most recent states, Gamma_k for k = 1..M.
struct MixingWeights {
    std::vector<double> gamma;

    int M() const { return static_cast<int>(gamma.size()); }
};

void validate(const MixingWeights& w);

// Ring of recent density matrices, newest first (front() is t-1).
using HistoryBuffer = std::deque<Matrix>;

// Weights actually applied when only `available` past states exist (warm-up):
// the first min(M, available) entries renormalized to sum 1, falling back to
// uniform if every available entry is zero.
std::vector<double> effective_weights(const MixingWeights& w, std::size_t available);

// Walker-space Kraus pair (A_plus, A_minus) of the k-step fresh-coin channel:
// A_sigma = <sigma| U^k |C> with U the full coin-walker step from cfg.
std::pair<Matrix, Matrix> kraus_pair(const WalkConfig& cfg, int k);

// One update of the walker-space history mixture:
//   rho' = sum_k w_k sum_sigma A_sigma^(k) rho(t-k) A_sigma^(k)^dag.
// kraus[k-1] is the pair for memory depth k. Throws invariant_error if trace
// or Hermiticity drift exceeds budget.
Matrix step_kraus_mixing(const HistoryBuffer& history, const MixingWeights& w,
                         const std::vector<std::pair<Matrix, Matrix>>& kraus);

// One update of the coin-walker mixed-unitary model:
//   rho' = sum_k w_k U_k rho(t-k) U_k^dag.
Matrix step_unitary_mixing(const HistoryBuffer& history, const MixingWeights& w,
                           const std::vector<Matrix>& unitaries);

// Walker-density evolution under the k-step Kraus mixture for t = 0..cfg.T,
// starting from the walker localized at cfg.walker_init. Requires
// L >= T + M. Distributions are the density diagonal at every step.
std::vector<Distribution> run_model_a(const MixingWeights& w, const WalkConfig& cfg);

// As run_model_a but only the t = T distribution (used by parameter sweeps
// where intermediate marginals are not needed).
Distribution model_a_final(const MixingWeights& w, const WalkConfig& cfg);

// Coin-walker density evolution under the mixed-unitary model. cfgs[k-1]
// supplies the coin bias of the k-step-lag unitary; all must share p-agnostic
// geometry (L, T, initial state).
std::vector<Distribution> run_model_b(const MixingWeights& w,
                                      const std::vector<WalkConfig>& cfgs);

Distribution model_b_final(const MixingWeights& w, const std::vector<WalkConfig>& cfgs);

}  // namespace histwalk
