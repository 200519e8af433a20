#include "histwalk/experiment.hpp"

#include "histwalk/analysis.hpp"
#include "histwalk/classical_walk.hpp"
#include "histwalk/coined_walk.hpp"
#include "histwalk/csv.hpp"
#include "histwalk/digest.hpp"
#include "histwalk/errors.hpp"
#include "histwalk/memory_mixing.hpp"
#include "histwalk/oscillator_walk.hpp"
#include "histwalk/parallel.hpp"
#include "histwalk/svg_plot.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace histwalk {
namespace {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

const std::set<std::string> kExperiments = {
    "fig1-variance", "fig2-bifurcation", "fig3-modelb",      "fig4-probdist",
    "fig5-variance", "fig6-correlation", "fig7-gamma-sweep", "custom"};

const std::set<std::string> kFormats = {"csv", "json", "svg"};

const std::map<std::string, std::set<std::string>>& known_params() {
    static const std::map<std::string, std::set<std::string>> table = {
        {"fig1-variance", {"T", "p", "L", "gammas"}},
        {"fig2-bifurcation",
         {"T", "p", "L", "gamma_min", "gamma_max", "grid_step", "prominence"}},
        {"fig3-modelb", {"T", "p", "L", "gamma", "gamma_max", "grid_step", "prominence"}},
        {"fig4-probdist", {"T", "L", "omega", "n_max", "lambdas"}},
        {"fig5-variance", {"T", "L", "omega", "n_max", "lambdas", "ballistic_tmax"}},
        {"fig6-correlation",
         {"T", "L", "omega", "n_max", "lambdas", "us", "reps", "kappa", "s_max", "x_star",
          "tau_min", "tau_max"}},
        {"fig7-gamma-sweep",
         {"T", "L", "omega", "n_max", "lambda_min", "lambda_max", "lambda_step", "x_star"}},
        {"custom",
         {"model", "T", "L", "p", "gamma", "omega", "lambda", "n_max", "u", "kappa",
          "s_max", "reps", "x_star"}},
    };
    return table;
}

// ---- parameter lookup -------------------------------------------------------

double scalar_param(const ExperimentConfig& cfg, const std::string& key, double def) {
    auto it = cfg.params.find(key);
    if (it == cfg.params.end()) return def;
    if (it->second.size() != 1)
        throw config_error("parameter '" + key + "' expects a single number");
    return it->second.front();
}

int int_param(const ExperimentConfig& cfg, const std::string& key, int def) {
    const double v = scalar_param(cfg, key, static_cast<double>(def));
    if (!(std::floor(v) == v) || std::abs(v) > 1e9)
        throw config_error("parameter '" + key + "' expects an integer");
    return static_cast<int>(v);
}

std::vector<double> list_param(const ExperimentConfig& cfg, const std::string& key,
                               std::vector<double> def) {
    auto it = cfg.params.find(key);
    if (it == cfg.params.end()) return def;
    if (it->second.empty()) throw config_error("parameter '" + key + "' is empty");
    return it->second;
}

std::string string_param(const ExperimentConfig& cfg, const std::string& key,
                         const std::string& def) {
    auto it = cfg.string_params.find(key);
    return it == cfg.string_params.end() ? def : it->second;
}

std::string join_list(const std::vector<double>& values) {
    std::string out = "[";
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ",";
        out += format_double(values[i]);
    }
    return out + "]";
}

// Evenly spaced grid snapped to 1e-12 so labels stay short.
std::vector<double> make_grid(double lo, double hi, double step) {
    if (step <= 0) throw config_error("grid step must be positive");
    if (hi < lo) throw config_error("grid range is empty");
    const int n = static_cast<int>(std::llround((hi - lo) / step));
    std::vector<double> grid;
    grid.reserve(n + 1);
    for (int i = 0; i <= n; ++i) {
        double g = lo + i * step;
        g = std::round(g * 1e12) / 1e12;
        if (g > hi) g = hi;
        grid.push_back(g);
    }
    return grid;
}

// ---- run bookkeeping --------------------------------------------------------

struct RunContext {
    const ExperimentConfig* cfg = nullptr;
    std::filesystem::path root;
    std::map<std::string, std::string> effective;
    std::vector<std::string> files;  // relative paths, emission order
    ordered_json fits = ordered_json::object();
    std::vector<PlotSeries> plot;
    std::string plot_x, plot_y;
    bool plot_log = false;

    bool wants(const std::string& fmt) const {
        return std::find(cfg->formats.begin(), cfg->formats.end(), fmt) !=
               cfg->formats.end();
    }
    void note(const std::string& key, const std::string& value) { effective[key] = value; }
};

void write_table(RunContext& ctx, const std::string& rel, const Table& table) {
    if (!ctx.wants("csv")) return;
    const auto path = ctx.root / rel;
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw io_error("cannot create directory " + path.parent_path().string());
    emit_csv(table, path);
    ctx.files.push_back(rel);
}

void write_text(RunContext& ctx, const std::string& rel, const std::string& text,
                bool record = true) {
    const auto path = ctx.root / rel;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot open " + path.string() + " for writing");
    out << text;
    if (!out) throw io_error("failed writing " + path.string());
    out.close();
    if (record) ctx.files.push_back(rel);
}

Table distribution_table(const std::vector<Distribution>& dists) {
    Table table;
    table.header = {"t", "x", "p"};
    for (const auto& d : dists)
        for (int i = 0; i < d.size(); ++i)
            table.rows.push_back({static_cast<double>(d.t), static_cast<double>(d.site(i)),
                                  d.p(i)});
    return table;
}

Table series_table(const TimeSeries& series, const std::string& index_name,
                   const std::string& value_name) {
    Table table;
    table.header = {index_name, value_name};
    for (int t = 0; t < series.length(); ++t)
        table.rows.push_back({static_cast<double>(t), series.values[t]});
    return table;
}

std::string window_label(int lo, int hi, bool even_only = false) {
    std::string s = "[" + std::to_string(lo) + "," + std::to_string(hi) + "]";
    return even_only ? s + " even" : s;
}

ordered_json fit_json(const QuadraticFit& fit) {
    return ordered_json{{"a", fit.a},
                        {"b", fit.b},
                        {"c", fit.c},
                        {"residual", fit.rss},
                        {"window", window_label(fit.t_min, fit.t_max)},
                        {"converged", fit.converged}};
}

ordered_json fit_json(const PowerLawFit& fit) {
    return ordered_json{{"a", fit.a},
                        {"b", fit.b},
                        {"gamma", fit.gamma},
                        {"residual", fit.rss},
                        {"window", window_label(fit.tau_min, fit.tau_max, fit.even_only)},
                        {"converged", fit.converged}};
}

PlotSeries final_dist_series(const std::string& label, const Distribution& d) {
    PlotSeries s;
    s.label = label;
    for (int i = 0; i < d.size(); ++i) {
        s.x.push_back(d.site(i));
        s.y.push_back(d.p(i));
    }
    return s;
}

// ---- shared model builders --------------------------------------------------

WalkConfig mixing_walk_config(const ExperimentConfig& cfg, RunContext& ctx) {
    WalkConfig wc;
    wc.T = int_param(cfg, "T", 100);
    wc.p = scalar_param(cfg, "p", 0.5);
    wc.L = int_param(cfg, "L", wc.T + 2);
    wc.boundary = Boundary::none_reachable;
    validate(wc, 2);
    ctx.note("T", std::to_string(wc.T));
    ctx.note("p", format_double(wc.p));
    ctx.note("L", std::to_string(wc.L));
    ctx.note("M", "2");
    return wc;
}

struct OscillatorSetup {
    WalkConfig wc;
    OscillatorParams params;
};

OscillatorSetup oscillator_setup(const ExperimentConfig& cfg, double lambda) {
    OscillatorSetup s;
    s.wc.T = int_param(cfg, "T", 60);
    s.wc.L = int_param(cfg, "L", 75);
    s.wc.boundary = Boundary::periodic;
    s.params.omega = scalar_param(cfg, "omega", 5.0);
    s.params.n_max = int_param(cfg, "n_max", 10);
    s.params.lambda = lambda;
    validate(s.wc);
    validate(s.params);
    return s;
}

void note_oscillator(RunContext& ctx, const OscillatorSetup& s) {
    ctx.note("T", std::to_string(s.wc.T));
    ctx.note("L", std::to_string(s.wc.L));
    ctx.note("omega", format_double(s.params.omega));
    ctx.note("n_max", std::to_string(s.params.n_max));
}

// ---- experiments ------------------------------------------------------------

void run_fig1(const ExperimentConfig& cfg, RunContext& ctx) {
    const WalkConfig wc = mixing_walk_config(cfg, ctx);
    const std::vector<double> gammas =
        list_param(cfg, "gammas", {0.0, 0.25, 0.5, 0.75, 1.0});
    ctx.note("gammas", join_list(gammas));

    std::vector<TimeSeries> variances(gammas.size());
    parallel_for(static_cast<int>(gammas.size()), cfg.jobs, [&](int i) {
        MixingWeights w{{gammas[i], 1.0 - gammas[i]}};
        variances[i] = variance_series(run_model_a(w, wc));
    });

    for (std::size_t i = 0; i < gammas.size(); ++i) {
        const std::string tag = "gamma_" + format_double(gammas[i]);
        write_table(ctx, tag + "/variance.csv", series_table(variances[i], "t", "sigma2"));
        ctx.fits[tag] = fit_json(fit_quadratic(variances[i]));
        PlotSeries s;
        s.label = "gamma=" + format_double(gammas[i]);
        for (int t = 0; t < variances[i].length(); ++t) {
            s.x.push_back(t);
            s.y.push_back(variances[i].values[t]);
        }
        ctx.plot.push_back(std::move(s));
    }
    ctx.plot_x = "t";
    ctx.plot_y = "sigma^2";
}

Table peaks_table(const BifurcationResult& result) {
    Table table;
    table.header = {"gamma", "peak_x"};
    for (std::size_t i = 0; i < result.grid.size(); ++i)
        for (int x : result.peaks[i])
            table.rows.push_back({result.grid[i], static_cast<double>(x)});
    return table;
}

PlotSeries peaks_series(const BifurcationResult& result) {
    PlotSeries s;
    s.label = "peak positions";
    s.scatter = true;
    for (std::size_t i = 0; i < result.grid.size(); ++i)
        for (int x : result.peaks[i]) {
            s.x.push_back(result.grid[i]);
            s.y.push_back(x);
        }
    return s;
}

void run_fig2(const ExperimentConfig& cfg, RunContext& ctx) {
    const WalkConfig wc = mixing_walk_config(cfg, ctx);
    const double lo = scalar_param(cfg, "gamma_min", 0.0);
    const double hi = scalar_param(cfg, "gamma_max", 1.0);
    const double step = scalar_param(cfg, "grid_step", 0.02);
    const double prominence = scalar_param(cfg, "prominence", 1e-4);
    const auto grid = make_grid(lo, hi, step);
    ctx.note("grid", "[" + format_double(lo) + ":" + format_double(step) + ":" +
                         format_double(hi) + "]");
    ctx.note("prominence", format_double(prominence));

    const auto result = bifurcation_sweep(
        grid,
        [&](double g) {
            return model_a_final(MixingWeights{{g, 1.0 - g}}, wc);
        },
        prominence, cfg.jobs);

    write_table(ctx, "peaks.csv", peaks_table(result));
    ctx.note("transition_found", result.transition_found ? "true" : "false");
    if (result.transition_found) ctx.note("gamma_star", format_double(result.gamma_star));
    ctx.plot.push_back(peaks_series(result));
    ctx.plot_x = "gamma";
    ctx.plot_y = "peak position";
}

void run_fig3(const ExperimentConfig& cfg, RunContext& ctx) {
    const WalkConfig wc = mixing_walk_config(cfg, ctx);
    const double gamma = scalar_param(cfg, "gamma", 2.0 / 3.0);
    const double hi = scalar_param(cfg, "gamma_max", 0.98);
    const double step = scalar_param(cfg, "grid_step", 0.02);
    const double prominence = scalar_param(cfg, "prominence", 1e-4);
    ctx.note("gamma", format_double(gamma));
    ctx.note("grid", "[0:" + format_double(step) + ":" + format_double(hi) + "]");
    ctx.note("prominence", format_double(prominence));

    const std::vector<WalkConfig> cfgs = {wc, wc};
    const auto dists = run_model_b(MixingWeights{{gamma, 1.0 - gamma}}, cfgs);
    write_table(ctx, "distribution.csv", distribution_table(dists));

    const auto result = bifurcation_sweep(
        make_grid(0.0, hi, step),
        [&](double g) {
            return model_b_final(MixingWeights{{g, 1.0 - g}}, cfgs);
        },
        prominence, cfg.jobs);
    write_table(ctx, "peaks.csv", peaks_table(result));
    ctx.note("transition_found", result.transition_found ? "true" : "false");
    if (result.transition_found) ctx.note("gamma_star", format_double(result.gamma_star));

    ctx.plot.push_back(
        final_dist_series("P(x," + std::to_string(wc.T) + ")", dists.back()));
    ctx.plot_x = "x";
    ctx.plot_y = "P";
}

void run_fig4(const ExperimentConfig& cfg, RunContext& ctx) {
    const std::vector<double> lambdas = list_param(cfg, "lambdas", {0.0, 0.1});
    ctx.note("lambdas", join_list(lambdas));

    note_oscillator(ctx, oscillator_setup(cfg, lambdas.front()));
    std::vector<OscillatorRun> runs(lambdas.size());
    parallel_for(static_cast<int>(lambdas.size()), cfg.jobs, [&](int i) {
        const auto setup = oscillator_setup(cfg, lambdas[i]);
        runs[i] = run_oscillator_walk(setup.params, setup.wc);
    });

    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        const std::string tag = "lambda_" + format_double(lambdas[i]);
        write_table(ctx, tag + "/distribution.csv",
                    distribution_table(runs[i].distributions));
        ctx.plot.push_back(final_dist_series("lambda=" + format_double(lambdas[i]),
                                             runs[i].distributions.back()));
    }
    ctx.plot_x = "x";
    ctx.plot_y = "P";
}

void run_fig5(const ExperimentConfig& cfg, RunContext& ctx) {
    const std::vector<double> lambdas = list_param(cfg, "lambdas", {0.0, 0.1, 1.0});
    const int early_tmax = int_param(cfg, "ballistic_tmax", 15);
    ctx.note("lambdas", join_list(lambdas));
    ctx.note("ballistic_tmax", std::to_string(early_tmax));

    note_oscillator(ctx, oscillator_setup(cfg, lambdas.front()));
    std::vector<TimeSeries> variances(lambdas.size());
    parallel_for(static_cast<int>(lambdas.size()), cfg.jobs, [&](int i) {
        const auto setup = oscillator_setup(cfg, lambdas[i]);
        variances[i] =
            variance_series(run_oscillator_walk(setup.params, setup.wc).distributions);
    });

    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        const std::string tag = "lambda_" + format_double(lambdas[i]);
        write_table(ctx, tag + "/variance.csv", series_table(variances[i], "t", "sigma2"));
        ctx.fits[tag + "_full"] = fit_json(fit_quadratic(variances[i]));
        ctx.fits[tag + "_early"] = fit_json(fit_quadratic(variances[i], 0, early_tmax));
        PlotSeries s;
        s.label = "lambda=" + format_double(lambdas[i]);
        for (int t = 0; t < variances[i].length(); ++t) {
            s.x.push_back(t);
            s.y.push_back(variances[i].values[t]);
        }
        ctx.plot.push_back(std::move(s));
    }
    ctx.plot_x = "t";
    ctx.plot_y = "sigma^2";
}

void run_fig6(const ExperimentConfig& cfg, RunContext& ctx) {
    const std::vector<double> lambdas = list_param(cfg, "lambdas", {0.0, 0.01, 0.1});
    const std::vector<double> us = list_param(cfg, "us", {0.0, 0.1, -0.1});
    const int x_star = int_param(cfg, "x_star", 0);
    const int T = int_param(cfg, "T", 60);
    const int tau_min = int_param(cfg, "tau_min", 2);
    const int tau_max = int_param(cfg, "tau_max", T);
    ctx.note("lambdas", join_list(lambdas));
    ctx.note("us", join_list(us));
    ctx.note("x_star", std::to_string(x_star));
    ctx.note("tau_window", window_label(tau_min, tau_max, true));

    auto add_run = [&](const std::string& tag, const std::vector<Distribution>& dists) {
        const auto corr = autocorrelation(probability_series(dists, x_star));
        write_table(ctx, tag + "/correlation.csv", series_table(corr, "tau", "C"));
        const auto fit = fit_power_law(corr, true, tau_min, tau_max);
        ctx.fits[tag] = fit_json(fit);
        PlotSeries s;
        s.label = tag;
        for (int tau = std::max(tau_min, 1); tau < corr.length(); ++tau)
            if (tau % 2 == 0 && corr.values[tau] > 0) {
                s.x.push_back(tau);
                s.y.push_back(corr.values[tau]);
            }
        ctx.plot.push_back(std::move(s));
    };

    note_oscillator(ctx, oscillator_setup(cfg, lambdas.front()));
    for (double lambda : lambdas) {
        const auto setup = oscillator_setup(cfg, lambda);
        add_run("qrw_lambda_" + format_double(lambda),
                run_oscillator_walk(setup.params, setup.wc).distributions);
    }

    CrwConfig crw;
    crw.T = T;
    crw.L = T;
    crw.kappa = scalar_param(cfg, "kappa", 1e-4);
    crw.s_max = scalar_param(cfg, "s_max", 13.0);
    crw.reps = int_param(cfg, "reps", 10000);
    crw.seed = cfg.seed;
    ctx.note("kappa", format_double(crw.kappa));
    ctx.note("s_max", format_double(crw.s_max));
    ctx.note("reps", std::to_string(crw.reps));
    for (double u : us) {
        crw.u = u;
        validate(crw);
        add_run("crw_u_" + format_double(u), run_memory_crw(crw, cfg.jobs));
    }

    ctx.plot_x = "tau";
    ctx.plot_y = "C(tau)";
    ctx.plot_log = true;
}

void run_fig7(const ExperimentConfig& cfg, RunContext& ctx) {
    const double lo = scalar_param(cfg, "lambda_min", 0.0);
    const double hi = scalar_param(cfg, "lambda_max", 0.5);
    const double step = scalar_param(cfg, "lambda_step", 0.05);
    const int x_star = int_param(cfg, "x_star", 0);
    const auto grid = make_grid(lo, hi, step);
    ctx.note("lambda_grid", "[" + format_double(lo) + ":" + format_double(step) + ":" +
                                format_double(hi) + "]");
    ctx.note("x_star", std::to_string(x_star));
    note_oscillator(ctx, oscillator_setup(cfg, lo));

    const auto points = gamma_sweep(
        grid,
        [&](double lambda) {
            const auto setup = oscillator_setup(cfg, lambda);
            return run_oscillator_walk(setup.params, setup.wc).distributions;
        },
        x_star, cfg.jobs);

    Table table;
    table.header = {"lambda", "gamma", "a", "b", "residual"};
    PlotSeries s;
    s.label = "gamma(lambda)";
    for (const auto& pt : points) {
        table.rows.push_back({pt.lambda, pt.fit.gamma, pt.fit.a, pt.fit.b, pt.fit.rss});
        s.x.push_back(pt.lambda);
        s.y.push_back(pt.fit.gamma);
    }
    write_table(ctx, "gamma_sweep.csv", table);
    ctx.plot.push_back(std::move(s));
    ctx.plot_x = "lambda";
    ctx.plot_y = "gamma";
}

void run_custom(const ExperimentConfig& cfg, RunContext& ctx) {
    const std::string model = string_param(cfg, "model", "qrw");
    ctx.note("model", model);
    const int T = int_param(cfg, "T", 100);
    std::vector<Distribution> dists;

    if (model == "qrw") {
        WalkConfig wc;
        wc.T = T;
        wc.p = scalar_param(cfg, "p", 0.5);
        wc.L = int_param(cfg, "L", T);
        wc.boundary = Boundary::none_reachable;
        validate(wc);
        ctx.note("p", format_double(wc.p));
        ctx.note("L", std::to_string(wc.L));
        dists = evolve_pure(wc);
    } else if (model == "model-a" || model == "model-b") {
        WalkConfig wc;
        wc.T = T;
        wc.p = scalar_param(cfg, "p", 0.5);
        wc.L = int_param(cfg, "L", T + 2);
        wc.boundary = Boundary::none_reachable;
        validate(wc, 2);
        const double gamma = scalar_param(cfg, "gamma", 0.5);
        ctx.note("p", format_double(wc.p));
        ctx.note("L", std::to_string(wc.L));
        ctx.note("gamma", format_double(gamma));
        MixingWeights w{{gamma, 1.0 - gamma}};
        dists = (model == "model-a") ? run_model_a(w, wc)
                                     : run_model_b(w, {wc, wc});
    } else if (model == "oscillator") {
        ExperimentConfig local = cfg;
        local.params["T"] = {static_cast<double>(T)};
        if (!local.params.count("L")) local.params["L"] = {static_cast<double>(T)};
        const auto setup = oscillator_setup(local, scalar_param(cfg, "lambda", 0.0));
        note_oscillator(ctx, setup);
        ctx.note("lambda", format_double(setup.params.lambda));
        dists = run_oscillator_walk(setup.params, setup.wc).distributions;
    } else if (model == "crw") {
        CrwConfig crw;
        crw.T = T;
        crw.L = int_param(cfg, "L", T);
        crw.u = scalar_param(cfg, "u", 0.0);
        crw.kappa = scalar_param(cfg, "kappa", 1e-4);
        crw.s_max = scalar_param(cfg, "s_max", 13.0);
        crw.reps = int_param(cfg, "reps", 10000);
        crw.seed = cfg.seed;
        validate(crw);
        ctx.note("u", format_double(crw.u));
        ctx.note("L", std::to_string(crw.L));
        ctx.note("kappa", format_double(crw.kappa));
        ctx.note("reps", std::to_string(crw.reps));
        dists = run_memory_crw(crw, cfg.jobs);
    } else {
        throw config_error("unknown model '" + model +
                           "' (expected qrw, model-a, model-b, oscillator, or crw)");
    }

    ctx.note("T", std::to_string(T));
    write_table(ctx, "distribution.csv", distribution_table(dists));
    const auto variance = variance_series(dists);
    write_table(ctx, "variance.csv", series_table(variance, "t", "sigma2"));
    ctx.fits["variance"] = fit_json(fit_quadratic(variance));
    ctx.plot.push_back(final_dist_series("P(x," + std::to_string(T) + ")", dists.back()));
    ctx.plot_x = "x";
    ctx.plot_y = "P";
}

// ---- config parsing ---------------------------------------------------------

void assign_params_object(ExperimentConfig& cfg, const json& obj) {
    if (!obj.is_object()) throw config_error("'params' must be an object");
    for (const auto& [key, value] : obj.items()) {
        if (value.is_number()) {
            cfg.params[key] = {value.get<double>()};
        } else if (value.is_array()) {
            std::vector<double> list;
            for (const auto& entry : value) {
                if (!entry.is_number())
                    throw config_error("parameter '" + key +
                                       "' contains a non-numeric entry");
                list.push_back(entry.get<double>());
            }
            cfg.params[key] = std::move(list);
        } else if (value.is_string()) {
            cfg.string_params[key] = value.get<std::string>();
        } else {
            throw config_error("parameter '" + key +
                               "' must be a number, array of numbers, or string");
        }
    }
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw config_error(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw config_error("config root must be a JSON object");

    ExperimentConfig cfg;
    for (const auto& [key, value] : j.items()) {
        if (key == "experiment") {
            if (!value.is_string()) throw config_error("'experiment' must be a string");
            cfg.experiment = value.get<std::string>();
        } else if (key == "seed") {
            if (!value.is_number_unsigned())
                throw config_error("'seed' must be a non-negative integer");
            cfg.seed = value.get<std::uint64_t>();
        } else if (key == "out") {
            if (!value.is_string()) throw config_error("'out' must be a string");
            cfg.out_dir = value.get<std::string>();
        } else if (key == "formats") {
            if (!value.is_array()) throw config_error("'formats' must be an array");
            cfg.formats.clear();
            for (const auto& entry : value) {
                if (!entry.is_string() || !kFormats.count(entry.get<std::string>()))
                    throw config_error("'formats' entries must be csv, json, or svg");
                cfg.formats.push_back(entry.get<std::string>());
            }
        } else if (key == "jobs") {
            if (!value.is_number_integer() || value.get<int>() < 1)
                throw config_error("'jobs' must be a positive integer");
            cfg.jobs = value.get<int>();
        } else if (key == "params") {
            assign_params_object(cfg, value);
        } else {
            throw config_error("unknown config key '" + key + "'");
        }
    }
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot read config file " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str());
}

void apply_param(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
    if (key.empty()) throw config_error("--param key must not be empty");
    json parsed = json::parse(value, nullptr, false);
    if (parsed.is_number()) {
        cfg.params[key] = {parsed.get<double>()};
        cfg.string_params.erase(key);
        return;
    }
    if (parsed.is_array()) {
        json wrapper = json::object();
        wrapper[key] = parsed;
        cfg.params.erase(key);
        assign_params_object(cfg, wrapper);
        return;
    }
    cfg.params.erase(key);
    cfg.string_params[key] = parsed.is_string() ? parsed.get<std::string>() : value;
}

void validate(const ExperimentConfig& cfg) {
    if (!kExperiments.count(cfg.experiment)) {
        std::string names;
        for (const auto& name : kExperiments) names += (names.empty() ? "" : ", ") + name;
        throw config_error("unknown experiment '" + cfg.experiment + "' (expected one of " +
                           names + ")");
    }
    if (cfg.jobs < 1) throw config_error("jobs must be >= 1");
    if (cfg.formats.empty()) throw config_error("at least one output format is required");
    for (const auto& fmt : cfg.formats)
        if (!kFormats.count(fmt))
            throw config_error("unknown format '" + fmt + "' (expected csv, json, or svg)");

    const auto& allowed = known_params().at(cfg.experiment);
    for (const auto& [key, _] : cfg.params)
        if (!allowed.count(key))
            throw config_error("parameter '" + key + "' is not recognized by experiment '" +
                               cfg.experiment + "'");
    for (const auto& [key, _] : cfg.string_params)
        if (!allowed.count(key))
            throw config_error("parameter '" + key + "' is not recognized by experiment '" +
                               cfg.experiment + "'");
}

std::string serialize_config(const ExperimentConfig& cfg) {
    ordered_json j;
    j["experiment"] = cfg.experiment;
    j["seed"] = cfg.seed;
    j["out"] = cfg.out_dir.string();
    j["formats"] = cfg.formats;
    j["jobs"] = cfg.jobs;
    ordered_json params = ordered_json::object();
    for (const auto& [key, values] : cfg.params) {
        if (values.size() == 1)
            params[key] = values.front();
        else
            params[key] = values;
    }
    for (const auto& [key, value] : cfg.string_params) params[key] = value;
    j["params"] = params;
    return j.dump(2) + "\n";
}

RunManifest run_experiment(const ExperimentConfig& cfg) {
    validate(cfg);
    const auto start = std::chrono::steady_clock::now();

    RunContext ctx;
    ctx.cfg = &cfg;
    ctx.root = cfg.out_dir / cfg.experiment;
    std::error_code ec;
    std::filesystem::create_directories(ctx.root, ec);
    if (ec) throw io_error("cannot create output directory " + ctx.root.string());

    if (cfg.experiment == "fig1-variance")
        run_fig1(cfg, ctx);
    else if (cfg.experiment == "fig2-bifurcation")
        run_fig2(cfg, ctx);
    else if (cfg.experiment == "fig3-modelb")
        run_fig3(cfg, ctx);
    else if (cfg.experiment == "fig4-probdist")
        run_fig4(cfg, ctx);
    else if (cfg.experiment == "fig5-variance")
        run_fig5(cfg, ctx);
    else if (cfg.experiment == "fig6-correlation")
        run_fig6(cfg, ctx);
    else if (cfg.experiment == "fig7-gamma-sweep")
        run_fig7(cfg, ctx);
    else
        run_custom(cfg, ctx);

    if (ctx.wants("json") && !ctx.fits.empty())
        write_text(ctx, "fits.json", ctx.fits.dump(2) + "\n");
    if (ctx.wants("svg") && !ctx.plot.empty()) {
        emit_svg_plot(ctx.plot, ctx.plot_x, ctx.plot_y, ctx.root / "figure.svg",
                      ctx.plot_log);
        ctx.files.push_back("figure.svg");
    }

    RunManifest manifest;
    manifest.experiment = cfg.experiment;
    manifest.version = kToolVersion;
    manifest.seed = cfg.seed;
    manifest.effective = ctx.effective;
    manifest.run_dir = ctx.root;
    std::sort(ctx.files.begin(), ctx.files.end());
    for (const auto& rel : ctx.files)
        manifest.files.push_back({rel, sha256_hex_file(ctx.root / rel)});

    const auto stop = std::chrono::steady_clock::now();
    manifest.duration_ms =
        std::chrono::duration<double, std::milli>(stop - start).count();

    ordered_json j;
    j["experiment"] = manifest.experiment;
    j["tool_version"] = manifest.version;
    j["seed"] = manifest.seed;
    j["jobs"] = cfg.jobs;
    j["duration_ms"] = manifest.duration_ms;
    ordered_json eff = ordered_json::object();
    for (const auto& [key, value] : manifest.effective) eff[key] = value;
    j["config"] = eff;
    ordered_json files = ordered_json::array();
    for (const auto& f : manifest.files)
        files.push_back(ordered_json{{"path", f.path}, {"sha256", f.sha256}});
    j["files"] = files;
    write_text(ctx, "manifest.json", j.dump(2) + "\n", /*record=*/false);

    return manifest;
}

}  // namespace histwalk
