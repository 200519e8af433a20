#include "histwalk/analysis.hpp"

#include "histwalk/errors.hpp"
#include "histwalk/parallel.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>

namespace histwalk {

TimeSeries variance_series(const std::vector<Distribution>& dists) {
    TimeSeries series;
    series.values.reserve(dists.size());
    for (const auto& d : dists) {
        double mean = 0, second = 0;
        for (int i = 0; i < d.size(); ++i) {
            const double x = d.site(i);
            mean += d.p(i) * x;
            second += d.p(i) * x * x;
        }
        const double var = second - mean * mean;
        if (var < -1e-12)
            throw invariant_error("variance_series: negative variance " + std::to_string(var));
        series.values.push_back(std::max(var, 0.0));
    }
    return series;
}

QuadraticFit fit_quadratic(const TimeSeries& series, int t_min, int t_max) {
    const int T = series.length() - 1;
    if (t_max < 0) t_max = T;
    if (t_min < 0 || t_max > T || t_max - t_min + 1 < 3)
        throw config_error("fit_quadratic: need at least three points in [t_min, t_max]");

    const int n = t_max - t_min + 1;
    Eigen::MatrixXd A(n, 3);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) {
        const double t = t_min + i;
        A(i, 0) = t * t;
        A(i, 1) = t;
        A(i, 2) = 1.0;
        y(i) = series.values[t_min + i];
    }
    const Eigen::VectorXd coeff = A.colPivHouseholderQr().solve(y);

    QuadraticFit fit;
    fit.a = coeff(0);
    fit.b = coeff(1);
    fit.c = coeff(2);
    fit.rss = (A * coeff - y).squaredNorm();
    fit.t_min = t_min;
    fit.t_max = t_max;
    fit.converged = true;
    return fit;
}

TimeSeries probability_series(const std::vector<Distribution>& dists, int x_star) {
    if (dists.empty()) throw config_error("probability_series: no distributions");
    const int L = dists.front().L;
    if (x_star < -L || x_star > L)
        throw config_error("probability_series: site " + std::to_string(x_star) +
                           " outside [-L, L] with L = " + std::to_string(L));
    TimeSeries series;
    series.x_star = x_star;
    series.values.reserve(dists.size());
    for (const auto& d : dists) series.values.push_back(d.at_site(x_star));
    return series;
}

TimeSeries autocorrelation(const TimeSeries& series) {
    const int T = series.length() - 1;
    if (T < 1) throw config_error("autocorrelation: need a series of length >= 2");
    TimeSeries corr;
    corr.x_star = series.x_star;
    corr.meta = series.meta;
    corr.values.assign(T + 1, 0.0);
    for (int tau = 0; tau <= T; ++tau) {
        double c = 0;
        for (int t = 0; t + tau <= T; ++t) c += series.values[t] * series.values[t + tau];
        corr.values[tau] = c;
    }
    return corr;
}

PowerLawFit fit_power_law(const TimeSeries& corr, bool even_only, int tau_min, int tau_max) {
    const int T = corr.length() - 1;
    if (tau_max < 0) tau_max = T;
    if (tau_min < 1 || tau_max > T)
        throw config_error("fit_power_law: lag window outside [1, T]");

    std::vector<double> taus, values;
    for (int tau = tau_min; tau <= tau_max; ++tau) {
        if (even_only && tau % 2 != 0) continue;
        taus.push_back(double(tau));
        values.push_back(corr.values[tau]);
    }
    if (taus.size() < 6)
        throw config_error("fit_power_law: need at least six usable lags, got " +
                           std::to_string(taus.size()));
    const int n = static_cast<int>(taus.size());

    // Stage 1: a = window minimum, then log-log regression of C - a.
    double a = *std::min_element(values.begin(), values.end());
    double b = 1.0, gamma = 1.0;
    {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int m = 0;
        for (int i = 0; i < n; ++i) {
            const double dv = values[i] - a;
            if (dv <= 0) continue;
            const double lx = std::log(taus[i]), ly = std::log(dv);
            sx += lx;
            sy += ly;
            sxx += lx * lx;
            sxy += lx * ly;
            ++m;
        }
        if (m >= 2 && (m * sxx - sx * sx) > 0) {
            const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
            gamma = -slope;
            b = std::exp((sy - slope * sx) / m);
        }
    }

    // Stage 2: damped Gauss-Newton on (a, b, gamma).
    auto rss_at = [&](double pa, double pb, double pg) {
        double s = 0;
        for (int i = 0; i < n; ++i) {
            const double r = pa + pb * std::pow(taus[i], -pg) - values[i];
            s += r * r;
        }
        return s;
    };

    PowerLawFit fit;
    fit.even_only = even_only;
    fit.tau_min = tau_min;
    fit.tau_max = tau_max;

    double rss = rss_at(a, b, gamma);
    double mu = 1e-3;
    const int budget = 200;
    int iter = 0;
    for (; iter < budget; ++iter) {
        Eigen::Matrix3d JtJ = Eigen::Matrix3d::Zero();
        Eigen::Vector3d Jtr = Eigen::Vector3d::Zero();
        for (int i = 0; i < n; ++i) {
            const double pw = std::pow(taus[i], -gamma);
            const double r = a + b * pw - values[i];
            const Eigen::Vector3d J(1.0, pw, -b * std::log(taus[i]) * pw);
            JtJ += J * J.transpose();
            Jtr += J * r;
        }
        const Eigen::Vector3d step =
            (JtJ + mu * Eigen::Matrix3d::Identity()).ldlt().solve(-Jtr);
        const double trial_rss = rss_at(a + step(0), b + step(1), gamma + step(2));
        if (std::isfinite(trial_rss) && trial_rss <= rss) {
            a += step(0);
            b += step(1);
            gamma += step(2);
            rss = trial_rss;
            mu = std::max(mu / 3.0, 1e-12);
            if (step.norm() < 1e-10) {
                fit.converged = true;
                ++iter;
                break;
            }
        } else {
            mu *= 10.0;
            if (mu > 1e14) break;  // stuck; report best iterate
        }
    }

    fit.a = a;
    fit.b = b;
    fit.gamma = gamma;
    fit.rss = rss;
    fit.iterations = iter;
    return fit;
}

std::vector<int> find_peaks(const Distribution& dist, double prominence) {
    // Parity-aware support: drop the unpopulated parity class when its total
    // mass is negligible (pure-walk distributions), else keep every site.
    double odd_mass = 0;
    for (int i = 0; i < dist.size(); ++i)
        if (((dist.site(i) + dist.t) % 2 + 2) % 2 == 1) odd_mass += dist.p(i);

    std::vector<int> pos;
    std::vector<double> v;
    for (int i = 0; i < dist.size(); ++i) {
        if (odd_mass < 1e-12 && ((dist.site(i) + dist.t) % 2 + 2) % 2 == 1) continue;
        pos.push_back(dist.site(i));
        v.push_back(dist.p(i));
    }

    const int n = static_cast<int>(v.size());
    std::vector<int> peaks;
    for (int i = 0; i < n; ++i) {
        const bool up_left = (i == 0) || v[i] > v[i - 1];
        const bool up_right = (i == n - 1) || v[i] > v[i + 1];
        if (!(up_left && up_right) || n < 2) continue;
        if (i == 0 || i == n - 1) continue;  // edge maxima have no flanking minimum

        int j = i;
        while (j > 0 && v[j - 1] < v[j]) --j;
        const double left_min = v[j];
        j = i;
        while (j < n - 1 && v[j + 1] < v[j]) ++j;
        const double right_min = v[j];
        if (v[i] - left_min >= prominence && v[i] - right_min >= prominence)
            peaks.push_back(pos[i]);
    }
    return peaks;
}

BifurcationResult bifurcation_sweep(const std::vector<double>& grid,
                                    const std::function<Distribution(double)>& final_dist,
                                    double prominence, int jobs) {
    for (double g : grid)
        if (g < 0.0 || g > 1.0)
            throw config_error("bifurcation_sweep: grid values must lie in [0,1]");
    BifurcationResult result;
    result.grid = grid;
    result.peaks.resize(grid.size());
    parallel_for(static_cast<int>(grid.size()), jobs, [&](int i) {
        result.peaks[i] = find_peaks(final_dist(grid[i]), prominence);
    });
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (result.peaks[i - 1].size() >= 2 && result.peaks[i].size() <= 1) {
            result.gamma_star = (grid[i - 1] + grid[i]) / 2.0;
            result.transition_found = true;
            break;
        }
    }
    return result;
}

std::vector<GammaPoint> gamma_sweep(
    const std::vector<double>& lambda_grid,
    const std::function<std::vector<Distribution>(double)>& run_model, int x_star,
    int jobs) {
    for (double l : lambda_grid)
        if (l < 0.0 || l > 1.0)
            throw config_error("gamma_sweep: grid values must lie in [0,1]");
    std::vector<GammaPoint> points(lambda_grid.size());
    parallel_for(static_cast<int>(lambda_grid.size()), jobs, [&](int i) {
        const auto dists = run_model(lambda_grid[i]);
        const TimeSeries corr = autocorrelation(probability_series(dists, x_star));
        points[i] = {lambda_grid[i], fit_power_law(corr)};
    });
    return points;
}

}  // namespace histwalk
