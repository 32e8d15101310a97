#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "hypercolor/coloring.hpp"
#include "hypercolor/errors.hpp"
#include "hypercolor/format.hpp"
#include "hypercolor/hypergraph.hpp"
#include "hypercolor/rng.hpp"

namespace hypercolor {

enum class Model { uniform, multi, bernoulli };

inline const char* to_string(Model m) {
    switch (m) {
        case Model::uniform: return "uniform";
        case Model::multi: return "multi";
        case Model::bernoulli: return "bernoulli";
    }
    return "?";
}

inline Model parse_model(const std::string& s) {
    if (s == "uniform") return Model::uniform;
    if (s == "multi") return Model::multi;
    if (s == "bernoulli") return Model::bernoulli;
    throw std::invalid_argument("unknown model: " + s);
}

inline std::size_t edges_for_density(double c, std::size_t n) {
    return static_cast<std::size_t>(std::floor(c * static_cast<double>(n)));
}

struct WilsonInterval {
    double low = 0, high = 1;
};

inline constexpr double kZ95 = 1.959964;

inline WilsonInterval wilson_interval(std::size_t successes, std::size_t trials, double z = kZ95) {
    if (trials == 0) return {0, 1};
    const double n = static_cast<double>(trials), p = static_cast<double>(successes) / n;
    const double z2 = z * z, denom = 1 + z2 / n;
    const double center = (p + z2 / (2 * n)) / denom;
    const double half = z * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

// Runs fn(i) for i in [0, count) on up to `threads` workers. Each index is
// handled exactly once and results are stored by index, so the outcome does
// not depend on scheduling.
template <class Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
    if (threads == 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    for (unsigned t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            try {
                for (std::size_t i; (i = next.fetch_add(1)) < count && !failed;) fn(i);
            } catch (...) {
                if (!failed.exchange(true)) error = std::current_exception();
            }
        });
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

inline unsigned default_threads() {
    const unsigned h = std::thread::hardware_concurrency();
    return h == 0 ? 1 : h;
}

struct SweepConfig {
    std::size_t r = 3, k = 2, n = 30;
    std::vector<double> c_grid;
    std::size_t trials = 100;
    Model model = Model::uniform;
    Seed seed{};
    unsigned threads = 1;
    double instance_timeout_s = 10.0;
};

struct SweepPoint {
    double c = 0;
    std::size_t m = 0;
    std::size_t trials = 0;
    std::size_t colorable = 0;
    double p_hat = 0, wilson_low = 0, wilson_high = 0;
    bool censored = false;
};

struct SweepResult {
    SweepConfig config;
    std::vector<SweepPoint> points;
    double wall_seconds = 0;
};

// Largest n for which exact colorability is decided in a sweep.
inline std::size_t sweep_vertex_guard(std::size_t k) {
    if (k <= 2) return 40;
    if (k == 3) return 24;
    return 20;
}

inline void validate(const SweepConfig& cfg) {
    if (cfg.trials == 0) throw std::invalid_argument("trials must be positive");
    if (cfg.r < 2) throw std::invalid_argument("edge size must be at least 2");
    if (cfg.k < 2) throw std::invalid_argument("need at least two colors");
    if (cfg.n < cfg.r) throw std::invalid_argument("need n >= r");
    if (cfg.c_grid.empty()) throw std::invalid_argument("density grid is empty");
    for (std::size_t i = 0; i < cfg.c_grid.size(); ++i) {
        if (!(cfg.c_grid[i] > 0)) throw std::invalid_argument("densities must be positive");
        if (i > 0 && !(cfg.c_grid[i] > cfg.c_grid[i - 1]))
            throw std::invalid_argument("density grid must be strictly increasing");
    }
    if (!(cfg.instance_timeout_s > 0)) throw std::invalid_argument("timeout must be positive");
    const auto N = static_cast<double>(binomial_saturating(cfg.n, cfg.r));
    const double cmax = cfg.c_grid.back();
    if (cfg.model == Model::bernoulli && cmax * static_cast<double>(cfg.n) > N)
        throw std::invalid_argument("edge probability c n / C(n,r) exceeds 1");
    if (cfg.model == Model::uniform && static_cast<double>(edges_for_density(cmax, cfg.n)) > N)
        throw std::invalid_argument("more edges than r-subsets");
    if (cfg.n > sweep_vertex_guard(cfg.k))
        throw GuardError("n = " + std::to_string(cfg.n) + " exceeds the exact-decision guard " +
                         std::to_string(sweep_vertex_guard(cfg.k)) + " for k = " + std::to_string(cfg.k));
}

inline Hypergraph sample_model(Model model, std::size_t n, std::size_t r, double c, Seed seed) {
    switch (model) {
        case Model::uniform: return sample_uniform(n, r, edges_for_density(c, n), seed);
        case Model::multi: return sample_multi(n, r, edges_for_density(c, n), seed);
        case Model::bernoulli: {
            const double p = c * static_cast<double>(n) / static_cast<double>(binomial_saturating(n, r));
            return sample_bernoulli(n, r, std::min(1.0, p), seed);
        }
    }
    throw std::logic_error("unhandled model");
}

inline SweepResult run_sweep(const SweepConfig& cfg) {
    validate(cfg);
    const auto start = std::chrono::steady_clock::now();
    SweepResult res{cfg, {}, 0};
    const auto timeout = std::chrono::duration_cast<std::chrono::steady_clock::duration>(
        std::chrono::duration<double>(cfg.instance_timeout_s));
    for (std::size_t g = 0; g < cfg.c_grid.size(); ++g) {
        const double c = cfg.c_grid[g];
        std::vector<std::int8_t> verdict(cfg.trials, -1);
        parallel_for(cfg.trials, cfg.threads, [&](std::size_t i) {
            const auto h = sample_model(cfg.model, cfg.n, cfg.r, c, derive_seed(cfg.seed, g, i));
            const auto v = decide_k_colorable(h, cfg.k, std::chrono::steady_clock::now() + timeout);
            verdict[i] = v == ColorabilityVerdict::colorable ? 1 : v == ColorabilityVerdict::not_colorable ? 0 : -1;
        });
        SweepPoint pt;
        pt.c = c;
        pt.m = edges_for_density(c, cfg.n);
        for (auto v : verdict) {
            if (v < 0) { pt.censored = true; continue; }
            ++pt.trials;
            pt.colorable += static_cast<std::size_t>(v);
        }
        pt.p_hat = pt.trials ? static_cast<double>(pt.colorable) / static_cast<double>(pt.trials) : 0.0;
        const auto w = wilson_interval(pt.colorable, pt.trials);
        pt.wilson_low = w.low;
        pt.wilson_high = w.high;
        res.points.push_back(pt);
    }
    res.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return res;
}

inline constexpr const char* kSweepCsvHeader = "r,k,n,model,c,m,trials,colorable,p_hat,wilson_low,wilson_high,censored";

inline std::string sweep_csv(const SweepResult& res) {
    std::ostringstream os;
    os << kSweepCsvHeader << '\n';
    const auto& cfg = res.config;
    for (const auto& p : res.points)
        os << cfg.r << ',' << cfg.k << ',' << cfg.n << ',' << to_string(cfg.model) << ',' << shortest(p.c) << ','
           << p.m << ',' << p.trials << ',' << p.colorable << ',' << fixed(p.p_hat, 6) << ','
           << fixed(p.wilson_low, 6) << ',' << fixed(p.wilson_high, 6) << ',' << (p.censored ? "true" : "false")
           << '\n';
    return os.str();
}

struct BadEdgeSummary {
    std::size_t r = 0, n = 0, m = 0, trials = 0;
    double c = 0;
    std::size_t no_bad = 0;
    double p_hat = 0;
    double predicted = 0;
    double sigma = 0;    // binomial standard error at the predicted probability
    double z_score = 0;  // (p_hat - predicted) / sigma
    double mean_bad = 0;
    double fraction_over_2ln_n = 0;
};

inline BadEdgeSummary bad_edge_experiment(std::size_t r, double c, std::size_t n, std::size_t trials, Seed seed,
                                          unsigned threads = 1) {
    if (trials == 0) throw std::invalid_argument("trials must be positive");
    BadEdgeSummary s;
    s.r = r;
    s.c = c;
    s.n = n;
    s.trials = trials;
    s.m = edges_for_density(c, n);
    std::vector<std::size_t> bad(trials);
    parallel_for(trials, threads, [&](std::size_t i) {
        bad[i] = classify_bad_edges(sample_multi(n, r, s.m, derive_seed(seed, 0, i))).bad_count();
    });
    const double limit = 2 * std::log(static_cast<double>(n));
    double total = 0;
    std::size_t over = 0;
    for (auto b : bad) {
        if (b == 0) ++s.no_bad;
        if (static_cast<double>(b) > limit) ++over;
        total += static_cast<double>(b);
    }
    const double t = static_cast<double>(trials);
    s.p_hat = static_cast<double>(s.no_bad) / t;
    s.predicted = asymptotic_no_bad_probability(r, c);
    s.sigma = std::sqrt(s.predicted * (1 - s.predicted) / t);
    s.z_score = s.sigma > 0 ? (s.p_hat - s.predicted) / s.sigma : 0;
    s.mean_bad = total / t;
    s.fraction_over_2ln_n = static_cast<double>(over) / t;
    return s;
}

struct IsolatedSummary {
    std::size_t r = 0, n = 0, m = 0, trials = 0;
    double c = 0;
    std::vector<std::size_t> counts;  // isolated vertices per trial
    double mean = 0;
    double expected = 0;  // n (1 - 1/n)^{rm}
    std::size_t min = 0, max = 0;

    double fraction_at_least(std::size_t t) const {
        if (counts.empty()) return 0;
        return static_cast<double>(std::count_if(counts.begin(), counts.end(), [t](std::size_t y) { return y >= t; })) /
               static_cast<double>(counts.size());
    }
};

inline IsolatedSummary isolated_vertex_experiment(std::size_t r, double c, std::size_t n, std::size_t trials,
                                                  Seed seed, unsigned threads = 1) {
    if (trials == 0) throw std::invalid_argument("trials must be positive");
    IsolatedSummary s;
    s.r = r;
    s.c = c;
    s.n = n;
    s.trials = trials;
    s.m = edges_for_density(c, n);
    s.counts.resize(trials);
    parallel_for(trials, threads, [&](std::size_t i) {
        s.counts[i] = isolated_vertices(sample_multi(n, r, s.m, derive_seed(seed, 1, i))).size();
    });
    double total = 0;
    for (auto y : s.counts) total += static_cast<double>(y);
    s.mean = total / static_cast<double>(trials);
    s.expected = expected_isolated(n, r, s.m);
    s.min = *std::min_element(s.counts.begin(), s.counts.end());
    s.max = *std::max_element(s.counts.begin(), s.counts.end());
    return s;
}

}  // namespace hypercolor
