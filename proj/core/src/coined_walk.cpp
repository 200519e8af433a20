#include "histwalk/coined_walk.hpp"

#include "histwalk/errors.hpp"
#include "histwalk/linalg.hpp"

#include <cmath>
#include <numbers>

namespace histwalk {

void validate(const WalkConfig& cfg, int margin) {
    if (cfg.p < 0.0 || cfg.p > 1.0)
        throw config_error("walk config: coin bias p must lie in [0,1], got " +
                           std::to_string(cfg.p));
    if (cfg.L < 1)
        throw config_error("walk config: lattice half-width L must be >= 1, got " +
                           std::to_string(cfg.L));
    if (cfg.T < 1)
        throw config_error("walk config: step count T must be >= 1, got " +
                           std::to_string(cfg.T));
    const double norm = std::norm(cfg.coin_plus) + std::norm(cfg.coin_minus);
    if (std::abs(norm - 1.0) > 1e-12)
        throw config_error("walk config: coin state must be normalized, |C+|^2+|C-|^2 = " +
                           std::to_string(norm));
    if (cfg.walker_init < -cfg.L || cfg.walker_init > cfg.L)
        throw config_error("walk config: walker_init outside [-L, L]");
    if (cfg.boundary == Boundary::none_reachable && cfg.L < cfg.T + margin)
        throw config_error("walk config: none-reachable boundary needs L >= T + " +
                           std::to_string(margin) + ", got L = " + std::to_string(cfg.L));
}

Matrix coin_operator(double p) {
    if (p < 0.0 || p > 1.0)
        throw config_error("coin_operator: p must lie in [0,1], got " + std::to_string(p));
    const double sp = std::sqrt(p), sq = std::sqrt(1.0 - p);
    Matrix u(2, 2);
    u << sp, sq, sq, -sp;
    return u;
}

Matrix shift_operator(int L, Boundary) {
    const int N = 2 * L + 1;
    Matrix S = Matrix::Zero(N, N);
    for (int i = 0; i < N; ++i) S((i + 1) % N, i) = 1.0;
    return S;
}

Matrix walk_unitary(const WalkConfig& cfg) {
    validate(cfg);
    const int N = cfg.sites();
    const Matrix S = shift_operator(cfg.L, cfg.boundary);
    Matrix P_plus = Matrix::Zero(2, 2), P_minus = Matrix::Zero(2, 2);
    P_plus(0, 0) = 1.0;
    P_minus(1, 1) = 1.0;
    const Matrix shift_part = tensor(P_plus, S) + tensor(P_minus, S.adjoint());
    return shift_part * tensor(coin_operator(cfg.p), Matrix::Identity(N, N));
}

Distribution distribution_from_state(const Vector& psi, int L, int t) {
    const int N = 2 * L + 1;
    Distribution d{t, L, RealVector::Zero(N)};
    for (int i = 0; i < N; ++i)
        d.p(i) = std::norm(psi(i)) + std::norm(psi(N + i));
    return d;
}

std::vector<Distribution> evolve_pure(const WalkConfig& cfg) {
    validate(cfg);
    const int N = cfg.sites();
    const double sp = std::sqrt(cfg.p), sq = std::sqrt(1.0 - cfg.p);

    Vector plus = Vector::Zero(N), minus = Vector::Zero(N);
    plus(cfg.walker_init + cfg.L) = cfg.coin_plus;
    minus(cfg.walker_init + cfg.L) = cfg.coin_minus;

    std::vector<Distribution> out;
    out.reserve(cfg.T + 1);
    auto snapshot = [&](int t) {
        Distribution d{t, cfg.L, RealVector::Zero(N)};
        for (int i = 0; i < N; ++i) d.p(i) = std::norm(plus(i)) + std::norm(minus(i));
        out.push_back(std::move(d));
    };
    snapshot(0);

    Vector tp(N), tm(N);
    for (int t = 1; t <= cfg.T; ++t) {
        tp = sp * plus + sq * minus;   // coin flip
        tm = sq * plus - sp * minus;
        for (int i = 0; i < N; ++i) {  // conditional shift with cyclic wrap
            plus((i + 1) % N) = tp(i);
            minus(i) = tm((i + 1) % N);
        }
        snapshot(t);
    }
    return out;
}

Matrix dft_matrix(int L) {
    const int N = 2 * L + 1;
    const double w = 2.0 * std::numbers::pi / N;
    const double scale = 1.0 / std::sqrt(double(N));
    Matrix F(N, N);
    for (int ki = 0; ki < N; ++ki)
        for (int xi = 0; xi < N; ++xi)
            F(ki, xi) = std::polar(scale, w * (ki - L) * (xi - L));
    return F;
}

Matrix momentum_operator(int L) {
    const int N = 2 * L + 1;
    const Matrix F = dft_matrix(L);
    RealVector theta(N);
    for (int ki = 0; ki < N; ++ki) theta(ki) = 2.0 * std::numbers::pi * (ki - L) / N;
    Matrix P = F.adjoint() * theta.cast<cxd>().asDiagonal() * F;
    return (P + P.adjoint()) / 2.0;  // strip the ~1e-16 anti-Hermitian dust
}

double verify_bch_form(const WalkConfig& cfg) {
    validate(cfg);
    if (cfg.boundary != Boundary::periodic)
        throw config_error("verify_bch_form: the product form is exact only for "
                           "the periodic boundary");
    const int N = cfg.sites();
    const Matrix P = momentum_operator(cfg.L);
    Matrix Z = Matrix::Zero(2, 2);
    Z(0, 0) = 1.0;
    Z(1, 1) = -1.0;
    Matrix X = Matrix::Zero(2, 2);
    X(0, 1) = 1.0;
    X(1, 0) = 1.0;

    const Matrix shift_factor = unitary_exp(tensor(Z, P), -1.0);  // exp(+i Z(x)P)
    const Matrix coin_axis = std::sqrt(1.0 - cfg.p) * X + std::sqrt(cfg.p) * Z;
    const Matrix coin_factor = unitary_exp(coin_axis, std::numbers::pi / 2.0);
    const cxd global_phase = std::polar(1.0, std::numbers::pi / 2.0);

    const Matrix product =
        global_phase * shift_factor * tensor(coin_factor, Matrix::Identity(N, N));
    return (product - walk_unitary(cfg)).cwiseAbs().maxCoeff();
}

}  // namespace histwalk
