#pragma once

#include "histwalk/types.hpp"

#include <vector>

namespace histwalk {

// How the lattice edge is treated. Both modes use the same cyclic shift
// (|L> -> |-L>); none_reachable additionally validates that L is large enough
// that the walker can never arrive at the edge, making the wrap entry inert.
enum class Boundary { periodic, none_reachable };

struct WalkConfig {
    double p = 0.5;                    // coin bias
    int L = 0;                         // lattice half-width, sites x in [-L, L]
    Boundary boundary = Boundary::periodic;
    int T = 100;                       // number of steps
    cxd coin_plus{1.0 / 1.4142135623730951, 0.0};   // C_+
    cxd coin_minus{0.0, 1.0 / 1.4142135623730951};  // C_-
    int walker_init = 0;               // starting site

    int sites() const { return 2 * L + 1; }
};

// Throws config_error on invalid parameters. margin: extra sites beyond T that
// must be unreachable for Boundary::none_reachable (memory models pass M).
void validate(const WalkConfig& cfg, int margin = 0);

// 2x2 coin flip [[sqrt(p), sqrt(1-p)], [sqrt(1-p), -sqrt(p)]].
Matrix coin_operator(double p);

// Cyclic one-site right shift on 2L+1 sites: S|x> = |x+1>, S|L> = |-L>.
Matrix shift_operator(int L, Boundary boundary = Boundary::periodic);

// Full step unitary (P_+ (x) S + P_- (x) S^dag)(u_C (x) 1), dimension 2(2L+1),
// coin-major ordering: index c*(2L+1) + (x+L), c=0 for +, c=1 for -.
Matrix walk_unitary(const WalkConfig& cfg);

// Unitary evolution of the pure coin-walker state; returns the position
// distribution at every t = 0..T.
std::vector<Distribution> evolve_pure(const WalkConfig& cfg);

// Momentum-basis transform row k, column x: exp(i*theta_k*x)/sqrt(N) with
// theta_k = 2*pi*k/N, k and x in [-L, L], N = 2L+1. Unitary; diagonalizes the
// shift: F S F^dag = diag(exp(i*theta_k)).
Matrix dft_matrix(int L);

// Lattice translation generator: Hermitian P with P = F^dag diag(theta_k) F,
// so that exp(iP) = S exactly.
Matrix momentum_operator(int L);

// Max-abs-entry residual of the product form
//   exp(i*pi/2) * exp(i Z(x)P) * exp(-i(pi/2)(sqrt(1-p)X + sqrt(p)Z)) (x) 1
// against walk_unitary(cfg). Requires periodic boundary.
double verify_bch_form(const WalkConfig& cfg);

// Position marginal of a coin-major pure state on coin (x) walker.
Distribution distribution_from_state(const Vector& psi, int L, int t);

}  // namespace histwalk
