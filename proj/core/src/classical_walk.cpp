#include "histwalk/classical_walk.hpp"

#include "histwalk/errors.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <thread>

namespace histwalk {

void validate(const CrwConfig& cfg) {
    if (cfg.kappa < 0.0)
        throw config_error("crw config: kappa must be >= 0, got " + std::to_string(cfg.kappa));
    if (!(cfg.s_max > 0.0))
        throw config_error("crw config: s_max must be positive, got " +
                           std::to_string(cfg.s_max));
    if (cfg.reps < 1) throw config_error("crw config: reps must be >= 1");
    if (cfg.T < 1) throw config_error("crw config: T must be >= 1");
    if (cfg.L < cfg.T)
        throw config_error("crw config: need L >= T so the edge stays unreachable, got L = " +
                           std::to_string(cfg.L) + ", T = " + std::to_string(cfg.T));
}

InfoField info_update(InfoField field, int visited_index, double kappa, double s_max) {
    if (visited_index < 0 || visited_index >= field.size())
        throw config_error("info_update: visited site outside the lattice");
    field *= std::exp(-kappa);
    field(visited_index) = std::min(s_max, field(visited_index) + 1.0);
    return field;
}

std::pair<double, double> hop_probabilities(double s_left, double s_right, double s_here,
                                            double u) {
    const double clamp = 50.0;
    const double wl = std::exp(std::clamp(u * (s_left - s_here), -clamp, clamp));
    const double wr = std::exp(std::clamp(u * (s_right - s_here), -clamp, clamp));
    return {wl / (wl + wr), wr / (wl + wr)};
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t rep) {
    auto splitmix = [](std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ull;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    };
    return splitmix(seed ^ splitmix(rep));
}

namespace {

using Counts = std::vector<std::vector<std::int64_t>>;  // [t][site index]

void run_reps(const CrwConfig& cfg, int rep_begin, int rep_end, Counts& counts) {
    const int N = 2 * cfg.L + 1;
    const double decay = std::exp(-cfg.kappa);
    std::vector<double> s(N);
    for (int r = rep_begin; r < rep_end; ++r) {
        std::mt19937_64 rng(mix_seed(cfg.seed, std::uint64_t(r)));
        auto uniform = [&rng] { return double(rng() >> 11) * 0x1.0p-53; };

        std::fill(s.begin(), s.end(), 0.0);
        int x = cfg.L;  // origin
        for (int t = 0; t <= cfg.T; ++t) {
            ++counts[t][x];
            for (double& v : s) v *= decay;
            s[x] = std::min(cfg.s_max, s[x] + 1.0);
            if (t < cfg.T) {
                const auto [pl, pr] = hop_probabilities(s[x - 1], s[x + 1], s[x], cfg.u);
                x += (uniform() < pl) ? -1 : +1;
            }
        }
    }
}

}  // namespace

std::vector<Distribution> run_memory_crw(const CrwConfig& cfg, int jobs) {
    validate(cfg);
    const int N = 2 * cfg.L + 1;
    Counts counts(cfg.T + 1, std::vector<std::int64_t>(N, 0));

    jobs = std::max(1, jobs);
    if (jobs == 1) {
        run_reps(cfg, 0, cfg.reps, counts);
    } else {
        std::vector<Counts> partial(jobs, Counts(cfg.T + 1, std::vector<std::int64_t>(N, 0)));
        std::vector<std::thread> pool;
        const int chunk = (cfg.reps + jobs - 1) / jobs;
        for (int w = 0; w < jobs; ++w) {
            const int lo = w * chunk, hi = std::min(cfg.reps, lo + chunk);
            if (lo >= hi) break;
            pool.emplace_back([&, w, lo, hi] { run_reps(cfg, lo, hi, partial[w]); });
        }
        for (auto& th : pool) th.join();
        for (const auto& part : partial)
            for (int t = 0; t <= cfg.T; ++t)
                for (int i = 0; i < N; ++i) counts[t][i] += part[t][i];
    }

    std::vector<Distribution> out;
    out.reserve(cfg.T + 1);
    for (int t = 0; t <= cfg.T; ++t) {
        Distribution d{t, cfg.L, RealVector::Zero(N)};
        for (int i = 0; i < N; ++i) d.p(i) = double(counts[t][i]) / double(cfg.reps);
        out.push_back(std::move(d));
    }
    return out;
}

Distribution binomial_distribution(int T) {
    if (T < 0) throw config_error("binomial_distribution: T must be >= 0");
    const int L = std::max(T, 1);
    Distribution d{T, L, RealVector::Zero(2 * L + 1)};
    if (T == 0) {
        d.p(L) = 1.0;
        return d;
    }
    double v = std::pow(2.0, -double(T));  // P(x = -T) = 2^-T
    for (int k = 0; k <= T; ++k) {
        d.p((2 * k - T) + L) = v;
        v *= double(T - k) / double(k + 1);
    }
    return d;
}

}  // namespace histwalk
