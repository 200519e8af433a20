#pragma once

#include "histwalk/types.hpp"

#include <functional>
#include <vector>

namespace histwalk {

// sigma^2(t) = <x^2> - <x>^2 for each distribution.
TimeSeries variance_series(const std::vector<Distribution>& dists);

// Ordinary least squares for v(t) ~ a t^2 + b t + c over t in [t_min, t_max]
// (t_max < 0 means the last index). Throws config_error on fewer than three
// usable points.
QuadraticFit fit_quadratic(const TimeSeries& series, int t_min = 0, int t_max = -1);

// P_{x*}(t) extracted at a fixed site.
TimeSeries probability_series(const std::vector<Distribution>& dists, int x_star);

// C(tau) = sum_{t=0}^{T-tau} v(t) v(t+tau), tau = 0..T.
TimeSeries autocorrelation(const TimeSeries& series);

// Nonlinear least squares for C(tau) ~ a + b tau^-gamma on lags in
// [tau_min, tau_max] (tau_max < 0 means the last lag), optionally restricted
// to even lags. Initialization: a := min C over the window, then log-log
// regression of C - a for (b, gamma); refinement by damped Gauss-Newton,
// budget 200 iterations, convergence when the parameter step drops below
// 1e-10. Throws config_error on fewer than six usable points.
PowerLawFit fit_power_law(const TimeSeries& corr, bool even_only = true, int tau_min = 2,
                          int tau_max = -1);

// Strict local maxima of the distribution on its parity-restricted support
// (sites of the unpopulated parity are dropped when their total mass is
// negligible), kept only if the peak exceeds the nearest local minimum on each
// side by at least `prominence`. Returns peak site positions, ascending.
std::vector<int> find_peaks(const Distribution& dist, double prominence = 1e-4);

struct BifurcationResult {
    std::vector<double> grid;
    std::vector<std::vector<int>> peaks;  // per grid point
    double gamma_star = 0;                // transition midpoint
    bool transition_found = false;
};

// Runs `final_dist` per grid point, detects peaks, and reports the
// bimodal-to-unimodal transition as the midpoint between the last grid point
// with >= 2 peaks and the first following point with <= 1.
BifurcationResult bifurcation_sweep(const std::vector<double>& grid,
                                    const std::function<Distribution(double)>& final_dist,
                                    double prominence = 1e-4, int jobs = 1);

struct GammaPoint {
    double lambda = 0;
    PowerLawFit fit;
};

// For each lambda: run the model, take P_{x*}(t), autocorrelate, and fit the
// power law with the default lag window.
std::vector<GammaPoint> gamma_sweep(
    const std::vector<double>& lambda_grid,
    const std::function<std::vector<Distribution>(double)>& run_model, int x_star = 0,
    int jobs = 1);

}  // namespace histwalk
