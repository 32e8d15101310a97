#include <gtest/gtest.h>

#include <cmath>

#include "hypercolor/experiments.hpp"

using namespace hypercolor;

namespace {

SweepConfig small_config() {
    SweepConfig cfg;
    cfg.r = 3;
    cfg.k = 2;
    cfg.n = 18;
    cfg.c_grid = {0.5, 1.5, 3.0, 6.0};
    cfg.trials = 60;
    cfg.seed = Seed{99, 0};
    return cfg;
}

}  // namespace

TEST(Wilson, ContainsEstimate) {
    for (std::size_t t : {1, 10, 100, 1000})
        for (std::size_t s = 0; s <= t; s += std::max<std::size_t>(1, t / 7)) {
            const auto w = wilson_interval(s, t);
            const double p = static_cast<double>(s) / static_cast<double>(t);
            EXPECT_LE(w.low, p + 1e-15);
            EXPECT_GE(w.high, p - 1e-15);
            EXPECT_GE(w.low, 0.0);
            EXPECT_LE(w.high, 1.0);
        }
    // textbook value: 81 of 263 -> [0.2553, 0.3662]
    const auto w = wilson_interval(81, 263);
    EXPECT_NEAR(w.low, 0.2553, 5e-4);
    EXPECT_NEAR(w.high, 0.3662, 5e-4);
}

TEST(Sweep, RejectsBadConfigs) {
    auto cfg = small_config();
    cfg.trials = 0;
    EXPECT_THROW(validate(cfg), std::invalid_argument);
    cfg = small_config();
    cfg.c_grid = {1.0, 0.5};
    EXPECT_THROW(validate(cfg), std::invalid_argument);
    cfg = small_config();
    cfg.c_grid = {1.0, 1.0};
    EXPECT_THROW(validate(cfg), std::invalid_argument);
    cfg = small_config();
    cfg.n = 41;
    EXPECT_THROW(validate(cfg), GuardError);
    cfg = small_config();
    cfg.k = 3;
    cfg.n = 25;
    EXPECT_THROW(validate(cfg), GuardError);
    cfg = small_config();
    cfg.model = Model::bernoulli;
    cfg.n = 6;
    cfg.c_grid = {10.0};  // 60 edges out of 20
    EXPECT_THROW(validate(cfg), std::invalid_argument);
}

TEST(Sweep, ResultInvariants) {
    for (Model model : {Model::uniform, Model::multi, Model::bernoulli}) {
        auto cfg = small_config();
        cfg.model = model;
        const auto res = run_sweep(cfg);
        ASSERT_EQ(res.points.size(), cfg.c_grid.size());
        for (const auto& p : res.points) {
            EXPECT_EQ(p.trials, cfg.trials);
            EXPECT_FALSE(p.censored);
            EXPECT_GE(p.p_hat, 0.0);
            EXPECT_LE(p.p_hat, 1.0);
            EXPECT_LE(p.wilson_low, p.p_hat);
            EXPECT_GE(p.wilson_high, p.p_hat);
            EXPECT_EQ(p.m, edges_for_density(p.c, cfg.n));
        }
        // multi-model draws can carry a bad edge, which blocks every coloring
        if (model == Model::multi)
            EXPECT_GE(res.points.front().p_hat, 0.8);
        else
            EXPECT_EQ(res.points.front().p_hat, 1.0) << to_string(model);
        EXPECT_EQ(res.points.back().p_hat, 0.0) << to_string(model);
    }
}

TEST(Sweep, ThreadCountDoesNotChangeResult) {
    auto cfg = small_config();
    cfg.threads = 1;
    const auto a = sweep_csv(run_sweep(cfg));
    cfg.threads = 4;
    const auto b = sweep_csv(run_sweep(cfg));
    EXPECT_EQ(a, b);
    EXPECT_EQ(a.substr(0, a.find('\n')), kSweepCsvHeader);
}

TEST(Sweep, UniformAgreesWithConditionedMulti) {
    // multi-model sweeps conditioned on no bad edge against the uniform model
    const std::size_t n = 30, r = 3, trials = 300;
    const std::vector<double> grid = {0.5, 1.0, 1.5, 2.0};
    for (std::size_t g = 0; g < grid.size(); ++g) {
        const std::size_t m = edges_for_density(grid[g], n);
        std::size_t uni = 0, kept = 0, multi = 0;
        for (std::size_t i = 0; i < trials; ++i)
            uni += is_k_colorable(sample_uniform(n, r, m, derive_seed(Seed{5, 0}, g, i)), 2);
        for (std::size_t i = 0; kept < trials; ++i) {
            const auto h = sample_multi(n, r, m, derive_seed(Seed{6, 0}, g, i));
            if (!classify_bad_edges(h).empty()) continue;
            ++kept;
            multi += is_k_colorable(h, 2);
        }
        const auto a = wilson_interval(uni, trials), b = wilson_interval(multi, kept);
        EXPECT_TRUE(a.low <= b.high && b.low <= a.high) << "c=" << grid[g];
    }
}

TEST(Sweep, TimeoutCensors) {
    auto cfg = small_config();
    cfg.n = 40;
    cfg.c_grid = {2.5};
    cfg.trials = 4;
    cfg.instance_timeout_s = 1e-9;
    const auto res = run_sweep(cfg);
    // With an effectively zero budget some instances may still finish before the first check.
    for (const auto& p : res.points) EXPECT_EQ(p.censored, p.trials < cfg.trials);
}

TEST(BadEdges, SummaryFields) {
    const auto s = bad_edge_experiment(3, 1.0, 2000, 400, Seed{1, 0});
    EXPECT_EQ(s.m, 2000u);
    EXPECT_NEAR(s.predicted, std::exp(-3.0), 1e-15);
    EXPECT_LE(s.fraction_over_2ln_n, 0.01);
    EXPECT_LT(std::fabs(s.z_score), 4.0);
    EXPECT_THROW(bad_edge_experiment(3, 1.0, 100, 0, Seed{}), std::invalid_argument);
}

TEST(Isolated, ZeroDensityAndMean) {
    const auto z = isolated_vertex_experiment(3, 0.0, 50, 5, Seed{2, 0});
    EXPECT_EQ(z.min, 50u);
    EXPECT_EQ(z.max, 50u);
    const auto s = isolated_vertex_experiment(2, 1.0, 1000, 200, Seed{3, 0});
    EXPECT_NEAR(s.expected, 1000 * std::pow(1 - 1e-3, 2000), 1e-9);
    EXPECT_NEAR(s.mean / s.expected, 1.0, 0.02);
    for (std::size_t k = 2; k <= 5; ++k) EXPECT_GE(s.fraction_at_least(k - 1), 0.99);
}

TEST(Models, ParseRoundTrip) {
    for (Model m : {Model::uniform, Model::multi, Model::bernoulli}) EXPECT_EQ(parse_model(to_string(m)), m);
    EXPECT_THROW(parse_model("erdos"), std::invalid_argument);
}

TEST(Format, Numbers) {
    EXPECT_EQ(fixed(1.5, 3), "1.500");
    EXPECT_EQ(shortest(0.1), "0.1");
    EXPECT_EQ(shortest(6.0), "6");
    EXPECT_EQ(shortest(2.5), "2.5");
}
