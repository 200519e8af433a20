#pragma once

#include "histwalk/types.hpp"

#include <cstdint>
#include <vector>

namespace histwalk {

struct CrwConfig {
    double u = 0.0;        // information energy density (u>0 attracts, u<0 repels)
    double kappa = 1e-4;   // per-tick memory decay exponent
    double s_max = 13.0;   // information saturation level
    int T = 60;
    int reps = 10000;
    std::uint64_t seed = 42;
    int L = 0;             // lattice half-width; must satisfy L >= T
};

void validate(const CrwConfig& cfg);

// Per-site remaining information s_i over x in [-L, L].
using InfoField = RealVector;

// One tick of the information field: every site decays by e^{-kappa}, the
// visited site gains 1, and the stored value saturates at s_max.
InfoField info_update(InfoField field, int visited_index, double kappa, double s_max);

// Two-neighbor hop probabilities proportional to e^{u(s_neighbor - s_here)};
// exponent arguments are clamped to |arg| <= 50.
std::pair<double, double> hop_probabilities(double s_left, double s_right, double s_here,
                                            double u);

// Ensemble-averaged memory-dependent walk: `reps` independent trajectories,
// each drawing from its own deterministic sub-seed, with per-(t, x) visit
// counts accumulated in integers so serial and parallel runs agree exactly.
std::vector<Distribution> run_memory_crw(const CrwConfig& cfg, int jobs = 1);

// Exact unbiased-walk distribution P(x, T) = C(T, (T+x)/2) / 2^T on L = T.
Distribution binomial_distribution(int T);

// Deterministic per-repetition seed derivation (exposed for tests).
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t rep);

}  // namespace histwalk
