#include "histwalk/oscillator_walk.hpp"

#include "histwalk/errors.hpp"
#include "histwalk/linalg.hpp"

#include <cmath>
#include <numbers>

namespace histwalk {

void validate(const OscillatorParams& params) {
    if (params.n_max < 1)
        throw config_error("oscillator params: n_max must be >= 1, got " +
                           std::to_string(params.n_max));
    if (params.init_level < 0 || params.init_level > params.n_max)
        throw config_error("oscillator params: init_level outside [0, n_max]");
    if (params.lambda < 0.0 || params.lambda > 1.0)
        throw config_error("oscillator params: coupling lambda must lie in [0,1], got " +
                           std::to_string(params.lambda));
    if (!(params.omega > 0.0))
        throw config_error("oscillator params: omega must be positive");
}

std::pair<Matrix, Matrix> ladder_matrices(int n_max) {
    if (n_max < 1) throw config_error("ladder_matrices: n_max must be >= 1");
    const int dim = n_max + 1;
    Matrix a = Matrix::Zero(dim, dim);
    for (int n = 1; n <= n_max; ++n) a(n - 1, n) = std::sqrt(double(n));
    return {a, a.adjoint()};
}

BlockPropagator build_block_propagator(const OscillatorParams& params, int L) {
    validate(params);
    if (L < 1) throw config_error("build_block_propagator: L must be >= 1");
    const int N = 2 * L + 1;
    const auto [a, a_dag] = ladder_matrices(params.n_max);
    const Matrix number_term = 0.5 * params.omega * (a_dag * a);
    const Matrix coupling = a + a_dag;

    BlockPropagator prop;
    prop.L = L;
    prop.F = dft_matrix(L);
    prop.uniform = params.lambda == 0.0;
    prop.blocks.reserve(N);
    for (int j = 0; j < N; ++j) {
        const double theta = 2.0 * std::numbers::pi * (j - L) / N;
        prop.blocks.push_back(unitary_exp(number_term + params.lambda * theta * coupling, 1.0));
    }
    return prop;
}

Vector cwo_step(const Vector& state, const Matrix& U_cw, const BlockPropagator& prop) {
    const int N = 2 * prop.L + 1;
    const int n_osc = static_cast<int>(prop.blocks.front().rows());
    if (state.size() != Eigen::Index(2 * N) * n_osc)
        throw config_error("cwo_step: state dimension " + std::to_string(state.size()) +
                           " does not match coin*walker*oscillator = " +
                           std::to_string(2 * N * n_osc));
    if (U_cw.rows() != 2 * N || U_cw.cols() != 2 * N)
        throw config_error("cwo_step: coin-walker unitary has wrong dimension");

    using RowMat = Eigen::Matrix<cxd, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    RowMat psi = Eigen::Map<const RowMat>(state.data(), 2 * N, n_osc);

    const double norm_in = psi.norm();
    if (prop.uniform) {
        // position-independent kick: apply the single block in place
        const Matrix bt = prop.blocks.front().transpose();
        psi = psi * bt;
    } else {
        for (int c = 0; c < 2; ++c) {
            RowMat slab = prop.F * psi.middleRows(c * N, N);     // walker -> momentum
            for (int j = 0; j < N; ++j)
                slab.row(j) = (prop.blocks[j] * slab.row(j).transpose()).transpose();
            psi.middleRows(c * N, N) = prop.F.adjoint() * slab;  // momentum -> walker
        }
    }
    psi = U_cw * psi;

    if (std::abs(psi.norm() - norm_in) > 1e-10)
        throw invariant_error("cwo_step: state norm drifted beyond 1e-10 in one step");
    return Eigen::Map<const Vector>(psi.data(), state.size());
}

OscillatorRun run_oscillator_walk(const OscillatorParams& params, const WalkConfig& cfg) {
    validate(params);
    validate(cfg);
    const int N = cfg.sites();
    const int n_osc = params.levels();

    const Matrix U_cw = walk_unitary(cfg);
    const BlockPropagator prop = build_block_propagator(params, cfg.L);

    Vector psi = Vector::Zero(Eigen::Index(2 * N) * n_osc);
    const int x0 = cfg.walker_init + cfg.L;
    psi(Eigen::Index(0 * N + x0) * n_osc + params.init_level) = cfg.coin_plus;
    psi(Eigen::Index(1 * N + x0) * n_osc + params.init_level) = cfg.coin_minus;

    auto walker_marginal = [&](int t) {
        Distribution d{t, cfg.L, RealVector::Zero(N)};
        for (int c = 0; c < 2; ++c)
            for (int x = 0; x < N; ++x)
                for (int n = 0; n < n_osc; ++n)
                    d.p(x) += std::norm(psi(Eigen::Index(c * N + x) * n_osc + n));
        return d;
    };

    OscillatorRun run;
    run.distributions.reserve(cfg.T + 1);
    run.distributions.push_back(walker_marginal(0));
    for (int t = 1; t <= cfg.T; ++t) {
        psi = cwo_step(psi, U_cw, prop);
        run.distributions.push_back(walker_marginal(t));
    }

    run.final_level_populations = RealVector::Zero(n_osc);
    for (int c = 0; c < 2; ++c)
        for (int x = 0; x < N; ++x)
            for (int n = 0; n < n_osc; ++n)
                run.final_level_populations(n) +=
                    std::norm(psi(Eigen::Index(c * N + x) * n_osc + n));
    return run;
}

}  // namespace histwalk
