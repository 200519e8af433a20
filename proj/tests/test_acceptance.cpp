// Full acceptance sweep: every statement checked here prints one [PASS]/[FAIL]
// line with the measured numbers so a log scan shows the whole picture.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "histwalk/analysis.hpp"
#include "histwalk/classical_walk.hpp"
#include "histwalk/coined_walk.hpp"
#include "histwalk/csv.hpp"
#include "histwalk/digest.hpp"
#include "histwalk/experiment.hpp"
#include "histwalk/memory_mixing.hpp"
#include "histwalk/oscillator_walk.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>

using namespace histwalk;

namespace {

class Stopwatch {
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();

  public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
            .count();
    }
};

void report(int id, bool pass, const std::string& detail) {
    std::cout << (pass ? "[PASS]" : "[FAIL]") << " criterion " << id << ": " << detail
              << std::endl;
    const std::string line = "criterion " + std::to_string(id) + ": " + detail;
    CHECK_MESSAGE(pass, line);
}

std::string fmt(double v) { return format_double(v); }

std::string sci(double v) {
    std::ostringstream os;
    os.precision(2);
    os << std::scientific << v;
    return os.str();
}

double dist_variance(const Distribution& d) {
    double mean = 0, second = 0;
    for (int i = 0; i < d.size(); ++i) {
        mean += d.p(i) * d.site(i);
        second += d.p(i) * d.site(i) * d.site(i);
    }
    return second - mean * mean;
}

// Oscillator runs at the shared figure geometry (T=60, L=75, n_max=10),
// computed once and reused across criteria.
const OscillatorRun& oscillator_run(double lambda) {
    static std::map<double, OscillatorRun> cache;
    auto it = cache.find(lambda);
    if (it == cache.end()) {
        WalkConfig cfg;
        cfg.L = 75;
        cfg.T = 60;
        OscillatorParams params;
        params.omega = 5.0;
        params.n_max = 10;
        params.lambda = lambda;
        it = cache.emplace(lambda, run_oscillator_walk(params, cfg)).first;
    }
    return it->second;
}

PowerLawFit quantum_gamma(double lambda, int tau_min = 2, int tau_max = -1) {
    const auto& run = oscillator_run(lambda);
    const TimeSeries corr = autocorrelation(probability_series(run.distributions, 0));
    return fit_power_law(corr, true, tau_min, tau_max);
}

WalkConfig mixing_config(int T) {
    WalkConfig cfg;
    cfg.T = T;
    cfg.L = T + 2;
    cfg.boundary = Boundary::none_reachable;
    return cfg;
}

}  // namespace

TEST_CASE("criterion 1: memoryless ballistic coefficient") {
    Stopwatch clock;
    double a[2];
    const int horizons[2] = {60, 100};
    for (int i = 0; i < 2; ++i) {
        WalkConfig cfg;
        cfg.T = horizons[i];
        cfg.L = horizons[i];
        cfg.boundary = Boundary::none_reachable;
        a[i] = fit_quadratic(variance_series(evolve_pure(cfg))).a;
    }
    const double secs = clock.seconds();
    const bool pass = std::abs(a[0] - 0.292) <= 0.01 && std::abs(a[1] - 0.292) <= 0.01 &&
                      secs < 5.0;
    report(1, pass,
           "quadratic coefficient a(T=60)=" + fmt(a[0]) + ", a(T=100)=" + fmt(a[1]) +
               ", target 0.292 +- 0.01, runtime " + fmt(secs) + " s (budget 5 s)");
}

TEST_CASE("criterion 2: oscillator-coupled coefficients") {
    Stopwatch clock;
    oscillator_run(0.0);
    oscillator_run(0.1);
    oscillator_run(1.0);
    const double secs = clock.seconds();

    // lambda=1 saturates near t~30 when the front wraps the useful window, so
    // the ballistic coefficient is read from the pre-saturation range [0,15];
    // the weakly coupled runs stay quadratic over the whole horizon.
    const double a1 =
        fit_quadratic(variance_series(oscillator_run(1.0).distributions), 0, 15).a;
    const double a01 =
        fit_quadratic(variance_series(oscillator_run(0.1).distributions)).a;
    const bool pass =
        std::abs(a1 - 2.519) <= 0.1 && std::abs(a01 - 0.295) <= 0.01 && secs < 120.0;
    report(2, pass,
           "a(lambda=1)=" + fmt(a1) + " on t in [0,15] (target 2.519 +- 0.1), a(0.1)=" +
               fmt(a01) + " (target 0.295 +- 0.01), runtime " + fmt(secs) +
               " s (budget 120 s)");
}

TEST_CASE("criterion 3: oscillator truncation validity") {
    std::string values;
    bool pass = true;
    for (double lambda : {0.0, 0.01, 0.1, 1.0}) {
        const double top = oscillator_run(lambda).final_level_populations(10);
        if (!values.empty()) values += ", ";
        values += "lambda=" + fmt(lambda) + ": " + sci(top);
        if (!(top <= 1e-20)) pass = false;
    }
    report(3, pass, "top Fock level population at T=60 must be <= 1e-20; measured " + values);
}

TEST_CASE("criterion 4: variance ordering in the coupling") {
    const double weak = dist_variance(oscillator_run(0.01).distributions.back());
    const double strong = dist_variance(oscillator_run(0.1).distributions.back());
    report(4, strong > weak,
           "sigma^2(lambda=0.1, T=60)=" + fmt(strong) + " must exceed sigma^2(0.01)=" +
               fmt(weak));
}

TEST_CASE("criterion 5: fully Markovian mixture is the unbiased classical walk") {
    const WalkConfig cfg = mixing_config(100);
    const MixingWeights w{{1.0, 0.0}};
    const auto dists = run_model_a(w, cfg);

    double worst = 0;
    for (int t = 0; t <= cfg.T; ++t) {
        const Distribution oracle = binomial_distribution(t);
        for (int i = 0; i < dists[t].size(); ++i) {
            const int x = dists[t].site(i);
            const double expect =
                (std::abs(x) <= oracle.L) ? oracle.at_site(x) : 0.0;
            worst = std::max(worst, std::abs(dists[t].p(i) - expect));
        }
    }
    const QuadraticFit fit = fit_quadratic(variance_series(dists));
    const bool pass = worst <= 1e-10 && std::abs(fit.a) <= 1e-3 &&
                      std::abs(fit.b - 1.0) <= 0.02;
    report(5, pass,
           "max |P - binomial| = " + sci(worst) + " (budget 1e-10), variance fit a=" +
               fmt(fit.a) + " (|a| <= 1e-3), b=" + fmt(fit.b) + " (1 +- 0.02)");
}

TEST_CASE("criterion 6: history-mixture bifurcation threshold") {
    Stopwatch clock;
    const WalkConfig cfg = mixing_config(100);
    std::vector<double> grid;
    for (int i = 0; i <= 50; ++i) grid.push_back(std::round(i * 0.02 * 1e12) / 1e12);
    const BifurcationResult res = bifurcation_sweep(
        grid, [&](double g) { return model_a_final(MixingWeights{{g, 1.0 - g}}, cfg); },
        1e-4, 1);
    const double secs = clock.seconds();
    const bool pass =
        res.transition_found && std::abs(res.gamma_star - 0.80) <= 0.05 && secs < 600.0;
    report(6, pass,
           "peak-merge threshold Gamma* = " +
               (res.transition_found ? fmt(res.gamma_star) : std::string("none")) +
               ", target 0.80 +- 0.05, runtime " + fmt(secs) + " s (budget 600 s)");
}

TEST_CASE("criterion 7: unitary mixture stays bimodal across the sweep") {
    const WalkConfig cfg = mixing_config(100);
    const std::vector<WalkConfig> cfgs{cfg, cfg};
    std::string offenders;
    int checked = 0;
    for (int i = 0; i <= 49; ++i) {
        const double g = std::round(i * 0.02 * 1e12) / 1e12;
        const auto peaks =
            find_peaks(model_b_final(MixingWeights{{g, 1.0 - g}}, cfgs));
        ++checked;
        if (peaks.size() != 2) {
            if (!offenders.empty()) offenders += ", ";
            offenders += "Gamma=" + fmt(g) + ": " + std::to_string(peaks.size());
        }
    }
    report(7, offenders.empty(),
           "peak count must equal 2 at every grid point in [0, 0.98]; " +
               (offenders.empty()
                    ? "all " + std::to_string(checked) + " points bimodal"
                    : "deviating counts {" + offenders + "}"));
}

TEST_CASE("criterion 8: quantum correlation exponent") {
    const PowerLawFit fit = quantum_gamma(0.0);
    const PowerLawFit half = quantum_gamma(0.0, 2, 30);
    const bool pass = std::abs(fit.gamma - 1.153) <= 0.15;
    report(8, pass,
           "gamma(lambda=0) = " + fmt(fit.gamma) + " on even tau in [2,60], target 1.153 "
               "+- 0.15 (the half-horizon window [2,30] reads " + fmt(half.gamma) +
               "; see fit-window note in the fits documentation)");
}

TEST_CASE("criterion 9: classical correlation exponents and ordering") {
    Stopwatch clock;
    CrwConfig cfg;
    cfg.T = 60;
    cfg.L = 60;
    cfg.kappa = 1e-4;
    cfg.s_max = 13.0;
    cfg.reps = 10000;
    cfg.seed = 42;

    std::map<double, double> gamma;
    for (double u : {0.1, 0.0, -0.1}) {
        cfg.u = u;
        const auto dists = run_memory_crw(cfg, 2);
        gamma[u] = fit_power_law(autocorrelation(probability_series(dists, 0))).gamma;
    }
    const double secs = clock.seconds();
    const bool ordered = gamma[0.1] < gamma[0.0] && gamma[0.0] < gamma[-0.1];
    const bool near = std::abs(gamma[0.1] - 0.003) <= 0.01 &&
                      std::abs(gamma[0.0] - 0.005) <= 0.01 &&
                      std::abs(gamma[-0.1] - 0.01) <= 0.01;
    const bool pass = ordered && near && secs < 300.0;
    report(9, pass,
           "gamma(u=+0.1)=" + fmt(gamma[0.1]) + " < gamma(0)=" + fmt(gamma[0.0]) +
               " < gamma(-0.1)=" + fmt(gamma[-0.1]) +
               " required, targets 0.003/0.005/0.01 +- 0.01, runtime " + fmt(secs) +
               " s (budget 300 s)");
}

TEST_CASE("criterion 10: exponent grows with the coupling") {
    std::string values;
    std::vector<double> gammas;
    for (double lambda : {0.0, 0.05, 0.1, 0.2}) {
        gammas.push_back(quantum_gamma(lambda).gamma);
        if (!values.empty()) values += ", ";
        values += "gamma(" + fmt(lambda) + ")=" + fmt(gammas.back());
    }
    bool increasing = true;
    for (std::size_t i = 1; i < gammas.size(); ++i)
        if (!(gammas[i] > gammas[i - 1])) increasing = false;
    report(10, increasing,
           "gamma must increase over lambda in {0, 0.05, 0.1, 0.2}; measured " + values);
}

TEST_CASE("criterion 11: odd-site support follows the coupling") {
    const auto& coupled = oscillator_run(0.1).distributions.back();
    const auto& bare = oscillator_run(0.0).distributions.back();
    double coupled_odd = 0, bare_odd = 0;
    for (int i = 0; i < coupled.size(); ++i) {
        if (((coupled.site(i) + coupled.t) % 2 + 2) % 2 == 1) {
            coupled_odd += coupled.p(i);
            bare_odd = std::max(bare_odd, std::abs(bare.p(i)));
        }
    }
    const bool pass = coupled_odd > 0.0 && bare_odd == 0.0;
    report(11, pass,
           "odd-site mass at T=60: lambda=0.1 carries " + sci(coupled_odd) +
               " (> 0 required), lambda=0 peak residue " + sci(bare_odd) +
               " (exact 0 required)");
}

TEST_CASE("criterion 12: always-on property suites") {
    std::string fails;
    auto expect = [&](bool ok, const char* label) {
        if (!ok) {
            if (!fails.empty()) fails += ", ";
            fails += label;
        }
    };

    {  // density-matrix trace retention over full runs
        const WalkConfig cfg = mixing_config(40);
        const MixingWeights w{{0.6, 0.4}};
        const auto a = run_model_a(w, cfg);
        const auto b = run_model_b(w, {cfg, cfg});
        expect(std::abs(a.back().p.sum() - 1.0) <= 1e-10, "model-A trace");
        expect(std::abs(b.back().p.sum() - 1.0) <= 1e-10, "model-B trace");
    }

    {  // state norm over 60 unitary steps
        WalkConfig cfg;
        cfg.L = 62;
        cfg.T = 60;
        OscillatorParams params;
        params.lambda = 0.5;
        params.n_max = 6;
        const auto run = run_oscillator_walk(params, cfg);
        const double norm = std::sqrt(run.distributions.back().p.sum());
        expect(std::abs(norm - 1.0) <= 1e-10, "cwo norm");
    }

    {  // Kraus completeness for memory depths 1..3
        const WalkConfig cfg = mixing_config(8);
        double worst = 0;
        for (int k = 1; k <= 3; ++k) {
            const auto [ap, am] = kraus_pair(cfg, k);
            const Matrix sum = ap.adjoint() * ap + am.adjoint() * am;
            worst = std::max(
                worst,
                (sum - Matrix::Identity(sum.rows(), sum.cols())).cwiseAbs().maxCoeff());
        }
        expect(worst <= 1e-10, "Kraus completeness");
    }

    {  // product-form residual across the bias range
        WalkConfig cfg;
        cfg.L = 6;
        double worst = 0;
        for (double p : {0.0, 0.3, 0.5, 1.0}) {
            cfg.p = p;
            worst = std::max(worst, verify_bch_form(cfg));
        }
        expect(worst <= 1e-10, "product-form residual");
    }

    {  // synthetic fit recovery
        TimeSeries series;
        for (int t = 0; t <= 40; ++t)
            series.values.push_back(2.5 * t * t + 0.3 * t + 1.0);
        const QuadraticFit qf = fit_quadratic(series);
        expect(std::abs(qf.a - 2.5) < 1e-9 && std::abs(qf.b - 0.3) < 1e-8, "quadratic fit");

        TimeSeries corr;
        corr.values.push_back(6.0);
        for (int tau = 1; tau <= 60; ++tau)
            corr.values.push_back(1.0 + 5.0 * std::pow(double(tau), -0.7));
        const PowerLawFit pf = fit_power_law(corr);
        expect(std::abs(pf.gamma - 0.7) < 1e-4, "power-law fit");
    }

    {  // byte determinism of emitted artifacts under parallel execution
        namespace fs = std::filesystem;
        const fs::path base = fs::temp_directory_path() / "histwalk_acceptance";
        fs::remove_all(base);
        ExperimentConfig cfg;
        cfg.experiment = "fig1-variance";
        cfg.out_dir = base / "serial";
        cfg.params["T"] = {10.0};
        cfg.params["L"] = {12.0};
        cfg.params["gammas"] = {0.0, 0.5};
        const RunManifest serial = run_experiment(cfg);
        cfg.out_dir = base / "parallel";
        cfg.jobs = 3;
        const RunManifest parallel = run_experiment(cfg);
        bool same = serial.files.size() == parallel.files.size();
        for (std::size_t i = 0; same && i < serial.files.size(); ++i)
            same = serial.files[i].path == parallel.files[i].path &&
                   serial.files[i].sha256 == parallel.files[i].sha256;
        expect(same, "CSV determinism");

        CrwConfig crw;
        crw.T = 20;
        crw.L = 20;
        crw.reps = 2000;
        const auto lone = run_memory_crw(crw, 1);
        const auto fanned = run_memory_crw(crw, 4);
        bool identical = true;
        for (std::size_t t = 0; t < lone.size(); ++t)
            if ((lone[t].p - fanned[t].p).cwiseAbs().maxCoeff() != 0.0) identical = false;
        expect(identical, "ensemble determinism");
    }

    report(12, fails.empty(),
           fails.empty() ? "trace, norm, completeness, product form, fit recovery, and "
                           "determinism properties all hold"
                         : "failing property groups: " + fails);
}
