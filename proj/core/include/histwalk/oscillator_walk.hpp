#pragma once

#include "histwalk/coined_walk.hpp"
#include "histwalk/types.hpp"

#include <utility>
#include <vector>

namespace histwalk {

struct OscillatorParams {
    double omega = 5.0;   // oscillator frequency
    double lambda = 0.0;  // walker-oscillator coupling in [0, 1]
    int n_max = 10;       // Fock-space truncation (levels 0..n_max)
    int init_level = 0;

    int levels() const { return n_max + 1; }
};

void validate(const OscillatorParams& params);

// Truncated ladder operators on levels 0..n_max: a[n-1, n] = sqrt(n).
std::pair<Matrix, Matrix> ladder_matrices(int n_max);

// Per-momentum oscillator propagators exp(-i[(omega/2) a^dag a
// + lambda theta_k (a + a^dag)]), theta_k = 2 pi k/(2L+1), k = -L..L.
// Carries the walker DFT so steps need no external transform plumbing.
struct BlockPropagator {
    int L = 0;
    std::vector<Matrix> blocks;  // index j = k + L
    Matrix F;                    // walker-factor momentum transform
    bool uniform = false;        // all blocks equal (zero coupling): the kick
                                 // commutes with position, so steps skip the
                                 // momentum round-trip and preserve the
                                 // even/odd support exactly
};

BlockPropagator build_block_propagator(const OscillatorParams& params, int L);

// One full step on the coin (x) walker (x) oscillator state (oscillator index
// fastest): momentum transform on the walker factor, per-momentum block,
// inverse transform, then U_cw on the coin-walker factor.
Vector cwo_step(const Vector& state, const Matrix& U_cw, const BlockPropagator& prop);

struct OscillatorRun {
    std::vector<Distribution> distributions;  // walker marginal, t = 0..T
    RealVector final_level_populations;       // oscillator marginal at t = T
};

OscillatorRun run_oscillator_walk(const OscillatorParams& params, const WalkConfig& cfg);

}  // namespace histwalk
