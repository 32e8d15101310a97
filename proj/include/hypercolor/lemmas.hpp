#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <locale>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hypercolor/hypergraph.hpp"
#include "hypercolor/moments.hpp"
#include "hypercolor/rng.hpp"
#include "hypercolor/thresholds.hpp"

namespace hypercolor {

// Outcome of evaluating one inequality over its grid. worst_margin is the
// smallest slack seen (negative means a violation).
struct LemmaCheck {
    std::string lemma_id;
    std::string domain;
    std::size_t grid_size = 0;
    double worst_margin = std::numeric_limits<double>::infinity();
    bool passed = false;
};

inline constexpr double kLemmaTolerance = 1e-12;

// Knobs for mutation testing: a correct run uses the defaults.
struct LemmaOptions {
    double sqrt_log_coefficient = 4.0;
    std::uint64_t seed = 20240611;
};

inline const std::vector<std::string>& registered_lemmas() {
    static const std::vector<std::string> ids = {
        "log1p-upper", "log1p-linear-lower", "log-complement-sandwich", "reciprocal-sandwich", "power-sandwich", "isolated-vertex-count",
        "level-crossings", "power-comparison", "eta-endpoint-order", "k2-midpoint-curvature", "bracket-width-decay", "regularity-monotone",
        "xi-scale-small", "log-gap-regular", "sqrt-log-linear", "block-gram-closed-form", "log-ratio-below-one"};
    return ids;
}

namespace detail {

class MarginTracker {
public:
    MarginTracker(std::string id, std::string domain) {
        c_.lemma_id = std::move(id);
        c_.domain = std::move(domain);
    }
    void add(double margin) {
        ++c_.grid_size;
        if (std::isnan(margin)) margin = -std::numeric_limits<double>::infinity();
        c_.worst_margin = std::min(c_.worst_margin, margin);
    }
    LemmaCheck finish() {
        c_.passed = c_.worst_margin > -kLemmaTolerance;
        return c_;
    }

private:
    LemmaCheck c_;
};

inline double lin(double a, double b, std::size_t i, std::size_t n) {
    return a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
}

constexpr std::size_t kGrid = 10000;

inline LemmaCheck log1p_upper() {
    MarginTracker t("log1p-upper", "z in (-1+1e-6, 10], linear, equality at z=0");
    for (std::size_t i = 0; i < kGrid; ++i) {
        const double z = lin(-1 + 1e-6, 10, i, kGrid);
        t.add(z - std::log1p(z));
    }
    t.add(0.0 - std::log1p(0.0));
    return t.finish();
}

inline LemmaCheck log1p_linear_lower() {
    MarginTracker t("log1p-linear-lower", "z in [0, 1/2], linear");
    for (std::size_t i = 0; i < kGrid; ++i) {
        const double z = lin(0, 0.5, i, kGrid);
        t.add(std::log1p(-z) + 1.5 * z);
    }
    return t.finish();
}

inline LemmaCheck log_complement_sandwich() {
    MarginTracker t("log-complement-sandwich", "z in (0, 1), linear, endpoints excluded");
    for (std::size_t i = 1; i <= kGrid; ++i) {
        const double z = static_cast<double>(i) / static_cast<double>(kGrid + 1);
        const double l = std::log1p(-z);
        t.add(std::min((1 - z) * l + z, -z - (1 - 0.5 * z) * l));
    }
    return t.finish();
}

inline LemmaCheck reciprocal_sandwich() {
    MarginTracker t("reciprocal-sandwich", "z in [0, 1/2], linear");
    for (std::size_t i = 0; i < kGrid; ++i) {
        const double z = lin(0, 0.5, i, kGrid);
        const double inv = 1 / (1 - z);
        t.add(std::min({inv - (1 + z), (1 + z + 2 * z * z) - inv, (1 + 2 * z) - (1 + z + 2 * z * z)}));
    }
    return t.finish();
}

inline LemmaCheck power_sandwich() {
    MarginTracker t("power-sandwich", "p in 1..30, z in [0, 1] linear (1000 points)");
    for (std::size_t p = 1; p <= 30; ++p)
        for (std::size_t i = 0; i < 1000; ++i) {
            const double z = lin(0, 1, i, 1000), pd = static_cast<double>(p);
            const double pw = std::pow(1 - z, pd);
            t.add(std::min({pw - (1 - pd * z), 1 - pd * z + 0.5 * pd * z * pd * z - pw,
                            1 / (1 + pd * z) - pw}));
        }
    return t.finish();
}

// Isolated vertices of G*(n,r,cn): the count should exceed both k-1 and half its mean.
inline LemmaCheck isolated_vertex_count(std::uint64_t seed) {
    struct Case { std::size_t r; double c; std::size_t k; };
    const Case cases[] = {{2, 1.0, 2}, {3, 1.5, 2}, {2, 1.8, 3}, {3, 1.0, 2}};
    const std::size_t n = 20000, trials = 20;
    MarginTracker t("isolated-vertex-count", "n=20000, 20 trials at (r,c,k) in {(2,1,2),(3,1.5,2),(2,1.8,3),(3,1,2)}");
    std::uint64_t group = 0;
    for (const auto& cs : cases) {
        const auto m = static_cast<std::size_t>(std::floor(cs.c * static_cast<double>(n)));
        const double mean = expected_isolated(n, cs.r, m);
        for (std::size_t i = 0; i < trials; ++i) {
            const auto h = sample_multi(n, cs.r, m, derive_seed(Seed{seed, 7}, group, i));
            const double y = static_cast<double>(isolated_vertices(h).size());
            t.add((y - std::max(static_cast<double>(cs.k - 1), mean / 2)) / mean);
        }
        ++group;
    }
    return t.finish();
}

// phi(x) = x(1-x)^{r-1} + (1-x)x^{r-1}/(k-1)^{r-1} = l has at most two solutions.
inline LemmaCheck level_crossings(std::uint64_t seed) {
    MarginTracker t("level-crossings",
                    "r in 2..12, k in 2..6, 50 seeded levels each, 1e5-point grid; [0,1] when r <= 2k, "
                    "else [0, 1-1/k] with lambda < lambda0");
    constexpr std::size_t N = 100000;
    CounterRng rng(Seed{seed, 9});
    std::vector<double> phi(N);
    for (std::size_t r = 2; r <= 12; ++r)
        for (std::size_t k = 2; k <= 6; ++k) {
            const double rd = static_cast<double>(r), kd = static_cast<double>(k);
            const double kap = 1 / std::pow(kd - 1, rd - 1);
            const double top = r <= 2 * k ? 1.0 : 1 - 1 / kd;
            double phi_max = 0;
            for (std::size_t i = 0; i < N; ++i) {
                const double x = lin(0, top, i, N);
                phi[i] = x * std::pow(1 - x, rd - 1) + kap * (1 - x) * std::pow(x, rd - 1);
                phi_max = std::max(phi_max, phi[i]);
            }
            double floor_level = 0;
            if (auto l0 = lambda0(r, k)) floor_level = 1 / (*l0 * rd * (rd - 1));
            for (int draw = 0; draw < 50; ++draw) {
                const double level = floor_level + (phi_max - floor_level) * rng.uniform01();
                int changes = 0;
                bool above = phi[0] > level;
                for (std::size_t i = 1; i < N; ++i) {
                    const bool a = phi[i] > level;
                    if (a != above) ++changes;
                    above = a;
                }
                t.add(2.0 - changes);
            }
        }
    return t.finish();
}

inline LemmaCheck power_comparison() {
    MarginTracker t("power-comparison", "r in 5..30, relative slack");
    for (std::size_t r = 5; r <= 30; ++r) {
        const double rd = static_cast<double>(r);
        const double lhs = (rd - 2) * std::pow(2.0, rd - 1) + std::pow(rd / 2, rd);
        const double rhs = std::pow(rd - 1, rd - 1);
        t.add(1 - lhs / rhs);
    }
    return t.finish();
}

inline LemmaCheck eta_endpoint_order() {
    MarginTracker t("eta-endpoint-order", "k in 2..20, r in 2k+1..20 (r <= 20), relative slack");
    for (std::size_t k = 2; k <= 20; ++k)
        for (std::size_t r = 2 * k + 1; r <= 20; ++r) {
            const UnivariateFns fns(r, k);
            const double e0 = fns.eta_at_0(), e1 = fns.eta_at_x0(), l0 = *lambda0(r, k);
            t.add(std::min((e1 - e0) / e1, (l0 - e1) / l0));
        }
    return t.finish();
}

// k = 2: x = 1/2 is a local minimum of eta for r <= 4 and a local maximum for r >= 5.
inline LemmaCheck k2_midpoint_curvature() {
    MarginTracker t("k2-midpoint-curvature", "k=2, r in 2..30: Taylor coefficients and eta at 0.49, 0.495");
    for (std::size_t r = 2; r <= 30; ++r) {
        const double rd = static_cast<double>(r);
        const double coef = (2 - (rd - 2) * (rd - 3)) / 12;
        const double expected = r <= 4 ? 1.0 : -1.0;
        if (r == 4) {
            t.add(coef == 0 ? 1.0 / 15 : -1.0);
        } else {
            t.add(expected * coef);
        }
        const UnivariateFns fns(r, 2);
        const double mid = fns.eta(0.5);
        for (double x : {0.49, 0.495}) t.add(expected * (fns.eta(x) - mid) / mid);
    }
    return t.finish();
}

inline LemmaCheck bracket_width_decay() {
    MarginTracker t("bracket-width-decay", "r in 3..30, k in 2..30: monotone in r and k; < 1 on the listed region");
    auto phi = [](double r, double k) { return r * r * (k + 2) / std::pow(k, r); };
    for (std::size_t r = 3; r <= 30; ++r)
        for (std::size_t k = 2; k <= 30; ++k) {
            const double rd = static_cast<double>(r), kd = static_cast<double>(k), p = phi(rd, kd);
            t.add(std::min(1 - phi(rd + 1, kd) / p, 1 - phi(rd, kd + 1) / p));
            const bool listed = (k == 2 && r >= 9) || (k == 3 && r >= 4) || (k >= 4);
            if (listed) t.add(1 - p);
        }
    return t.finish();
}

inline LemmaCheck regularity_monotone() {
    MarginTracker t("regularity-monotone", "r in 3..30, k in 2..30: left side increasing; inequality closed upward");
    auto lhs = [](double r, double k) { return 3 * std::pow(k, r) / (r * r * (k + 2) * (k + 2) * std::log(k)); };
    for (std::size_t r = 3; r <= 30; ++r)
        for (std::size_t k = 2; k <= 30; ++k) {
            const double rd = static_cast<double>(r), kd = static_cast<double>(k), v = lhs(rd, kd);
            t.add(std::min(lhs(rd + 1, kd) / v - 1, lhs(rd, kd + 1) / v - 1));
            if (regularity_inequality_holds(r, k))
                t.add(regularity_inequality_holds(r + 1, k) && regularity_inequality_holds(r, k + 1) ? 0.0 : -1.0);
        }
    return t.finish();
}

inline LemmaCheck xi_scale_small() {
    MarginTracker t("xi-scale-small", "regular pairs with r, k <= 30, computed xi");
    for (std::size_t r = 3; r <= 30; ++r)
        for (std::size_t k = 2; k <= 30; ++k) {
            if (!check_regularity(r, k)) continue;
            const double rd = static_cast<double>(r), kd = static_cast<double>(k), lk = std::log(kd);
            const double xi = find_xi(r, k).xi;
            const double bound = rd * (rd * lk + 1) * (kd + 2) / std::pow(kd, rd);
            t.add(std::min(1 - rd * (rd * lk + 1) * xi, 1 - bound));
        }
    return t.finish();
}

inline LemmaCheck log_gap_regular() {
    MarginTracker t("log-gap-regular", "regular pairs with r, k <= 30");
    for (std::size_t r = 3; r <= 30; ++r)
        for (std::size_t k = 2; k <= 30; ++k) {
            if (!check_regularity(r, k)) continue;
            const double rd = static_cast<double>(r), kd = static_cast<double>(k);
            t.add(std::log(kd) - 2 * (kd + 2) / std::pow(kd, rd) - std::log(kd - 1));
        }
    return t.finish();
}

inline LemmaCheck sqrt_log_linear(double coefficient) {
    MarginTracker t("sqrt-log-linear", "integer k in 1..30 and real k in [1, 30] (1e4 points)");
    auto margin = [&](double k) { return coefficient * (k - 1) - std::sqrt(k) * std::log(k); };
    for (std::size_t k = 1; k <= 30; ++k) t.add(margin(static_cast<double>(k)));
    for (std::size_t i = 0; i < kGrid; ++i) t.add(margin(lin(1, 30, i, kGrid)));
    return t.finish();
}

inline LemmaCheck block_gram_closed_form() {
    MarginTracker t("block-gram-closed-form", "p, q in 1..6: closed form against dense determinant");
    for (std::size_t p = 1; p <= 6; ++p)
        for (std::size_t q = 1; q <= 6; ++q)
            t.add(block_gram_det(p, q) == dense_block_gram_det(p, q) ? 0.0 : -1.0);
    return t.finish();
}

inline LemmaCheck log_ratio_below_one() {
    MarginTracker t("log-ratio-below-one",
                    "k=2, r in 5..30; k in 3..30, r in 3..30; r=2 for k in 4..30 "
                    "(r=2, k=3 excluded: value ln 3 > 1)");
    auto phi = [](double r, double k) { return r * (r - 1) * std::log(k) / (std::pow(k, r - 1) - 1); };
    for (std::size_t k = 2; k <= 30; ++k)
        for (std::size_t r = 2; r <= 30; ++r) {
            if (k == 2 && r < 5) continue;
            if (k == 3 && r == 2) continue;
            t.add(1 - phi(static_cast<double>(r), static_cast<double>(k)));
        }
    return t.finish();
}

}  // namespace detail

inline LemmaCheck run_check(const std::string& id, const LemmaOptions& opt = {}) {
    if (id == "log1p-upper") return detail::log1p_upper();
    if (id == "log1p-linear-lower") return detail::log1p_linear_lower();
    if (id == "log-complement-sandwich") return detail::log_complement_sandwich();
    if (id == "reciprocal-sandwich") return detail::reciprocal_sandwich();
    if (id == "power-sandwich") return detail::power_sandwich();
    if (id == "isolated-vertex-count") return detail::isolated_vertex_count(opt.seed);
    if (id == "level-crossings") return detail::level_crossings(opt.seed);
    if (id == "power-comparison") return detail::power_comparison();
    if (id == "eta-endpoint-order") return detail::eta_endpoint_order();
    if (id == "k2-midpoint-curvature") return detail::k2_midpoint_curvature();
    if (id == "bracket-width-decay") return detail::bracket_width_decay();
    if (id == "regularity-monotone") return detail::regularity_monotone();
    if (id == "xi-scale-small") return detail::xi_scale_small();
    if (id == "log-gap-regular") return detail::log_gap_regular();
    if (id == "sqrt-log-linear") return detail::sqrt_log_linear(opt.sqrt_log_coefficient);
    if (id == "block-gram-closed-form") return detail::block_gram_closed_form();
    if (id == "log-ratio-below-one") return detail::log_ratio_below_one();
    throw std::invalid_argument("unknown lemma id: " + id);
}

inline std::vector<LemmaCheck> run_all(const LemmaOptions& opt = {}) {
    std::vector<LemmaCheck> out;
    for (const auto& id : registered_lemmas()) out.push_back(run_check(id, opt));
    return out;
}

inline std::string lemma_csv(const std::vector<LemmaCheck>& checks) {
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os.precision(17);
    os << "lemma_id,domain,grid_size,worst_margin,passed\n";
    for (const auto& c : checks)
        os << c.lemma_id << ",\"" << c.domain << "\"," << c.grid_size << ',' << c.worst_margin << ','
           << (c.passed ? "true" : "false") << '\n';
    return os.str();
}

}  // namespace hypercolor
