#include "histwalk/memory_mixing.hpp"

#include "histwalk/errors.hpp"
#include "histwalk/linalg.hpp"

#include <Eigen/Eigenvalues>

#include <array>
#include <cmath>
#include <numbers>

namespace histwalk {

namespace {

constexpr double kTraceBudget = 1e-12;
constexpr double kHermBudget = 1e-12;
constexpr double kEigenFloor = -1e-8;
constexpr int kPositivityStride = 10;

// Momentum-space 2x2 coin block of the full step: diag(e^{i theta}, e^{-i theta}) u_C.
Matrix momentum_block(double p, double theta) {
    Matrix W = coin_operator(p);
    W.row(0) *= std::polar(1.0, theta);
    W.row(1) *= std::polar(1.0, -theta);
    return W;
}

double momentum_angle(int j_index, int L) {
    return 2.0 * std::numbers::pi * (j_index - L) / (2 * L + 1);
}

void check_trace(const cxd& tr, const char* model) {
    if (std::abs(tr - 1.0) > kTraceBudget)
        throw invariant_error(std::string(model) + ": trace drifted to " +
                              std::to_string(tr.real()) + " (budget 1e-12)");
}

void check_min_eigenvalue(const Matrix& herm, const char* model) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(herm, Eigen::EigenvaluesOnly);
    const double lo = solver.eigenvalues().minCoeff();
    if (lo < kEigenFloor)
        throw invariant_error(std::string(model) + ": density matrix lost positivity, "
                              "min eigenvalue " + std::to_string(lo));
}

// Re(diag(F^dag chi F)) with sub-1e-9 negative dust clamped to zero.
RealVector position_marginal(const Matrix& chi, const Matrix& F, const char* model) {
    const Matrix Y = chi * F;
    RealVector p(F.rows());
    for (Eigen::Index x = 0; x < F.cols(); ++x) {
        double v = F.col(x).dot(Y.col(x)).real();
        if (v < -1e-9)
            throw invariant_error(std::string(model) + ": negative probability " +
                                  std::to_string(v));
        p(x) = std::max(v, 0.0);
    }
    return p;
}

}  // namespace

void validate(const MixingWeights& w) {
    if (w.gamma.empty())
        throw config_error("mixing weights: memory depth M must be >= 1");
    double sum = 0;
    for (double g : w.gamma) {
        if (!(g >= 0.0 && g <= 1.0))
            throw config_error("mixing weights: each Gamma_k must lie in [0,1], got " +
                               std::to_string(g));
        sum += g;
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw config_error("mixing weights: Gamma must sum to 1, got " + std::to_string(sum));
}

std::vector<double> effective_weights(const MixingWeights& w, std::size_t available) {
    const std::size_t h = std::min<std::size_t>(w.gamma.size(), available);
    std::vector<double> out(w.gamma.begin(), w.gamma.begin() + h);
    double sum = 0;
    for (double g : out) sum += g;
    if (sum > 0) {
        for (double& g : out) g /= sum;
    } else if (h > 0) {
        for (double& g : out) g = 1.0 / double(h);
    }
    return out;
}

std::pair<Matrix, Matrix> kraus_pair(const WalkConfig& cfg, int k) {
    validate(cfg);
    if (k < 1) throw config_error("kraus_pair: k must be >= 1");
    const int N = cfg.sites();
    const Matrix U = walk_unitary(cfg);
    Matrix Uk = Matrix::Identity(2 * N, 2 * N);
    for (int i = 0; i < k; ++i) Uk = U * Uk;

    auto block = [&](int sigma, int c) { return Uk.block(sigma * N, c * N, N, N); };
    Matrix A_plus = block(0, 0) * cfg.coin_plus + block(0, 1) * cfg.coin_minus;
    Matrix A_minus = block(1, 0) * cfg.coin_plus + block(1, 1) * cfg.coin_minus;
    return {std::move(A_plus), std::move(A_minus)};
}

Matrix step_kraus_mixing(const HistoryBuffer& history, const MixingWeights& w,
                         const std::vector<std::pair<Matrix, Matrix>>& kraus) {
    validate(w);
    if (history.empty()) throw config_error("step_kraus_mixing: empty history");
    const std::vector<double> weights = effective_weights(w, history.size());
    if (kraus.size() < weights.size())
        throw config_error("step_kraus_mixing: need a Kraus pair per active memory depth");

    Matrix out = Matrix::Zero(history.front().rows(), history.front().cols());
    for (std::size_t k = 0; k < weights.size(); ++k) {
        if (weights[k] == 0.0) continue;
        const auto& [ap, am] = kraus[k];
        const Matrix& rho = history[k];
        out += weights[k] * (ap * rho * ap.adjoint() + am * rho * am.adjoint());
    }
    check_trace(out.trace(), "kraus mixing");
    if ((out - out.adjoint()).cwiseAbs().maxCoeff() > kHermBudget)
        throw invariant_error("kraus mixing: output not Hermitian within 1e-12");
    return out;
}

Matrix step_unitary_mixing(const HistoryBuffer& history, const MixingWeights& w,
                           const std::vector<Matrix>& unitaries) {
    validate(w);
    if (history.empty()) throw config_error("step_unitary_mixing: empty history");
    const std::vector<double> weights = effective_weights(w, history.size());
    if (unitaries.size() < weights.size())
        throw config_error("step_unitary_mixing: need a unitary per active memory depth");

    Matrix out = Matrix::Zero(history.front().rows(), history.front().cols());
    for (std::size_t k = 0; k < weights.size(); ++k) {
        if (weights[k] == 0.0) continue;
        out += weights[k] * (unitaries[k] * history[k] * unitaries[k].adjoint());
    }
    check_trace(out.trace(), "unitary mixing");
    if ((out - out.adjoint()).cwiseAbs().maxCoeff() > kHermBudget)
        throw invariant_error("unitary mixing: output not Hermitian within 1e-12");
    return out;
}

namespace {

// --- walker-space model, momentum representation ---------------------------
//
// Every k-step Kraus operator is translation invariant, hence diagonal in the
// momentum basis with eigenvalues <sigma| W_j^k |C>, W_j the 2x2 momentum
// block. A step is then an elementwise product on chi = F rho F^dag:
//   chi' = sum_k w_k E_k o chi(t-k),  E_k = d+ d+^dag + d- d-^dag.

std::vector<Matrix> kraus_hadamard_kernels(const WalkConfig& cfg, int M) {
    const int N = cfg.sites();
    Vector C(2);
    C << cfg.coin_plus, cfg.coin_minus;
    std::vector<Matrix> kernels;
    kernels.reserve(M);
    std::vector<Matrix> Wk(N, Matrix::Identity(2, 2));
    for (int k = 1; k <= M; ++k) {
        Vector d_plus(N), d_minus(N);
        for (int j = 0; j < N; ++j) {
            Wk[j] = momentum_block(cfg.p, momentum_angle(j, cfg.L)) * Wk[j];
            const Vector amp = Wk[j] * C;
            d_plus(j) = amp(0);
            d_minus(j) = amp(1);
        }
        kernels.push_back(d_plus * d_plus.adjoint() + d_minus * d_minus.adjoint());
    }
    return kernels;
}

std::vector<Distribution> run_model_a_impl(const MixingWeights& w, const WalkConfig& cfg,
                                           bool final_only) {
    validate(w);
    validate(cfg, w.M());
    if (cfg.L < cfg.T + w.M())
        throw config_error("model A: need L >= T + M so the wrap stays unreachable");

    const int N = cfg.sites();
    const Matrix F = dft_matrix(cfg.L);
    const std::vector<Matrix> kernels = kraus_hadamard_kernels(cfg, w.M());

    std::deque<Matrix> chi_history;  // newest first
    chi_history.emplace_back(F.col(cfg.walker_init + cfg.L) *
                             F.col(cfg.walker_init + cfg.L).adjoint());

    std::vector<Distribution> out;
    auto emit = [&](int t) {
        out.push_back({t, cfg.L, position_marginal(chi_history.front(), F, "model A")});
    };
    if (!final_only) emit(0);

    for (int t = 1; t <= cfg.T; ++t) {
        const std::vector<double> weights = effective_weights(w, chi_history.size());
        Matrix next = Matrix::Zero(N, N);
        for (std::size_t k = 0; k < weights.size(); ++k) {
            if (weights[k] == 0.0) continue;
            next += weights[k] * kernels[k].cwiseProduct(chi_history[k]);
        }
        chi_history.push_front(std::move(next));
        if (int(chi_history.size()) > w.M()) chi_history.pop_back();

        const Matrix& chi = chi_history.front();
        check_trace(chi.trace(), "model A");
        if ((chi - chi.adjoint()).cwiseAbs().maxCoeff() > kHermBudget)
            throw invariant_error("model A: state not Hermitian within 1e-12");
        if (t % kPositivityStride == 0 || t == cfg.T)
            check_min_eigenvalue(chi, "model A");
        if (!final_only || t == cfg.T) emit(t);
    }
    return out;
}

// --- coin-walker model, momentum representation ----------------------------
//
// The step unitary is block diagonal over momentum, U = sum_j W_j (x) |j><j|
// in coin-major order, so the density matrix is tracked as four N x N walker
// blocks xi[c][c'] and a step maps
//   xi'[c][c'] = sum_k w_k sum_{a,b} (Wv[c][a] Wv[c'][b]^*T) o xi_k[a][b]
// with Wv[c][a] the length-N vector j -> W_j[c,a].

using CoinBlocks = std::array<Matrix, 4>;  // index c*2 + c'

struct UnitaryOuterKernels {
    // outer[(c*2+a)*4 + c'*2+b] = Wv[c][a] * Wv[c'][b]^dag
    std::vector<Matrix> outer;
};

UnitaryOuterKernels unitary_kernels(double p, int L) {
    const int N = 2 * L + 1;
    std::array<Vector, 4> Wv;
    for (auto& v : Wv) v.resize(N);
    for (int j = 0; j < N; ++j) {
        const Matrix W = momentum_block(p, momentum_angle(j, L));
        for (int c = 0; c < 2; ++c)
            for (int a = 0; a < 2; ++a) Wv[c * 2 + a](j) = W(c, a);
    }
    UnitaryOuterKernels k;
    k.outer.resize(16);
    for (int ca = 0; ca < 4; ++ca)
        for (int cb = 0; cb < 4; ++cb) k.outer[ca * 4 + cb] = Wv[ca] * Wv[cb].adjoint();
    return k;
}

std::vector<Distribution> run_model_b_impl(const MixingWeights& w,
                                           const std::vector<WalkConfig>& cfgs,
                                           bool final_only) {
    validate(w);
    if (cfgs.size() != std::size_t(w.M()))
        throw config_error("model B: need one walk config per memory depth");
    for (const auto& cfg : cfgs) validate(cfg, w.M());
    const WalkConfig& base = cfgs.front();
    for (const auto& cfg : cfgs)
        if (cfg.L != base.L || cfg.T != base.T || cfg.walker_init != base.walker_init ||
            cfg.coin_plus != base.coin_plus || cfg.coin_minus != base.coin_minus)
            throw config_error("model B: configs must share L, T, and initial state");
    if (base.L < base.T + w.M())
        throw config_error("model B: need L >= T + M so the wrap stays unreachable");

    const int N = base.sites();
    const Matrix F = dft_matrix(base.L);

    std::vector<UnitaryOuterKernels> kernels;
    kernels.reserve(w.M());
    for (const auto& cfg : cfgs) kernels.push_back(unitary_kernels(cfg.p, cfg.L));

    const Vector f = F.col(base.walker_init + base.L);
    const Matrix ff = f * f.adjoint();
    const cxd C[2] = {base.coin_plus, base.coin_minus};

    std::deque<CoinBlocks> history;  // newest first
    CoinBlocks init;
    for (int c = 0; c < 2; ++c)
        for (int cp = 0; cp < 2; ++cp) init[c * 2 + cp] = C[c] * std::conj(C[cp]) * ff;
    history.push_back(std::move(init));

    auto marginal = [&](const CoinBlocks& xi) {
        RealVector p = position_marginal(xi[0], F, "model B");
        p += position_marginal(xi[3], F, "model B");
        return p;
    };

    std::vector<Distribution> out;
    if (!final_only) out.push_back({0, base.L, marginal(history.front())});

    for (int t = 1; t <= base.T; ++t) {
        const std::vector<double> weights = effective_weights(w, history.size());
        CoinBlocks next;
        for (auto& blk : next) blk = Matrix::Zero(N, N);
        for (std::size_t k = 0; k < weights.size(); ++k) {
            if (weights[k] == 0.0) continue;
            const auto& outer = kernels[k].outer;
            const CoinBlocks& xi = history[k];
            for (int c = 0; c < 2; ++c)
                for (int cp = 0; cp < 2; ++cp) {
                    Matrix& dst = next[c * 2 + cp];
                    for (int a = 0; a < 2; ++a)
                        for (int b = 0; b < 2; ++b)
                            dst += weights[k] * outer[(c * 2 + a) * 4 + cp * 2 + b]
                                       .cwiseProduct(xi[a * 2 + b]);
                }
        }
        history.push_front(std::move(next));
        if (int(history.size()) > w.M()) history.pop_back();

        const CoinBlocks& xi = history.front();
        check_trace(xi[0].trace() + xi[3].trace(), "model B");
        if ((xi[1] - xi[2].adjoint()).cwiseAbs().maxCoeff() > kHermBudget ||
            (xi[0] - xi[0].adjoint()).cwiseAbs().maxCoeff() > kHermBudget ||
            (xi[3] - xi[3].adjoint()).cwiseAbs().maxCoeff() > kHermBudget)
            throw invariant_error("model B: state not Hermitian within 1e-12");
        if (t % kPositivityStride == 0 || t == base.T) {
            Matrix full(2 * N, 2 * N);
            full.topLeftCorner(N, N) = xi[0];
            full.topRightCorner(N, N) = xi[1];
            full.bottomLeftCorner(N, N) = xi[2];
            full.bottomRightCorner(N, N) = xi[3];
            check_min_eigenvalue(full, "model B");
        }
        if (!final_only || t == base.T) out.push_back({t, base.L, marginal(xi)});
    }
    return out;
}

}  // namespace

std::vector<Distribution> run_model_a(const MixingWeights& w, const WalkConfig& cfg) {
    return run_model_a_impl(w, cfg, false);
}

Distribution model_a_final(const MixingWeights& w, const WalkConfig& cfg) {
    return run_model_a_impl(w, cfg, true).back();
}

std::vector<Distribution> run_model_b(const MixingWeights& w,
                                      const std::vector<WalkConfig>& cfgs) {
    return run_model_b_impl(w, cfgs, false);
}

Distribution model_b_final(const MixingWeights& w, const std::vector<WalkConfig>& cfgs) {
    return run_model_b_impl(w, cfgs, true).back();
}

}  // namespace histwalk
