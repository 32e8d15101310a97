// Command-line front end: thresholds, moments, sampling, sweeps, lemma checks
// and bad-edge statistics. Exit codes: 0 ok, 1 failed checks, 2 usage, 3 guard/timeout.

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "hypercolor/hypercolor.hpp"

namespace {

using json = nlohmann::json;
using namespace hypercolor;

constexpr const char* kVersion = "1.0.0";

constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitGuard = 3;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Range {
    std::size_t lo = 0, hi = 0;
};

Range parse_range(const std::string& text, std::size_t min, std::size_t max) {
    const auto dots = text.find("..");
    Range r;
    try {
        std::size_t used = 0;
        if (dots == std::string::npos) {
            r.lo = r.hi = std::stoul(text, &used);
            if (used != text.size()) throw std::invalid_argument(text);
        } else {
            const std::string a = text.substr(0, dots), b = text.substr(dots + 2);
            r.lo = std::stoul(a, &used);
            if (used != a.size()) throw std::invalid_argument(text);
            r.hi = std::stoul(b, &used);
            if (used != b.size()) throw std::invalid_argument(text);
        }
    } catch (const std::exception&) {
        throw UsageError("malformed range '" + text + "' (expected a..b)");
    }
    if (r.lo > r.hi) throw UsageError("empty range '" + text + "'");
    if (r.lo < min || r.hi > max)
        throw UsageError("range '" + text + "' outside " + std::to_string(min) + ".." + std::to_string(max));
    return r;
}

std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    ss.imbue(std::locale::classic());
    for (std::string item; std::getline(ss, item, ',');) {
        std::istringstream is(item);
        is.imbue(std::locale::classic());
        double v;
        if (!(is >> v) || !is.eof()) throw UsageError("malformed density '" + item + "'");
        out.push_back(v);
    }
    if (out.empty()) throw UsageError("empty density grid");
    return out;
}

std::string long_fixed(long double v, int decimals) { return fixed(static_cast<double>(v), decimals); }

std::string rational_text(const Rational& q) {
    if (boost::multiprecision::denominator(q) == 1) return boost::multiprecision::numerator(q).str();
    return q.str();
}

// ---- thresholds ----------------------------------------------------------

struct ThresholdArgs {
    std::string r_range = "2..8", k_range = "2..5", format = "csv";
    bool refined = false;
};

int cmd_thresholds(const ThresholdArgs& a) {
    const Range rr = parse_range(a.r_range, 2, 64), kr = parse_range(a.k_range, 2, 64);
    std::vector<ThresholdReport> rows;
    for (std::size_t r = rr.lo; r <= rr.hi; ++r)
        for (std::size_t k = kr.lo; k <= kr.hi; ++k) rows.push_back(c_threshold(r, k, a.refined));
    if (a.format == "json") {
        json out = json::array();
        for (const auto& t : rows) {
            json row = {{"r", t.r},
                        {"k", t.k},
                        {"u_low", t.u_low},
                        {"c_rk", t.c_rk},
                        {"u_high", t.u_high},
                        {"u_improved", t.u_improved},
                        {"xi", t.xi},
                        {"eta_min", t.eta_min},
                        {"classification", to_string(t.classification)},
                        {"bracket", {t.bracket_lo, t.bracket_hi}},
                        {"iterations", t.iterations}};
            if (t.c_refined) row["c_refined"] = *t.c_refined;
            out.push_back(row);
        }
        std::cout << out.dump(2) << '\n';
        return 0;
    }
    std::cout << "r,k,u_low,c_rk," << (a.refined ? "c_refined," : "") << "u_high,classification\n";
    for (const auto& t : rows) {
        std::cout << t.r << ',' << t.k << ',' << fixed(t.u_low, 10) << ',' << fixed(t.c_rk, 10) << ',';
        if (a.refined) std::cout << fixed(*t.c_refined, 10) << ',';
        std::cout << fixed(t.u_high, 10) << ',' << to_string(t.classification) << '\n';
    }
    return 0;
}

// ---- moments -------------------------------------------------------------

struct MomentArgs {
    std::size_t n = 0, r = 0, k = 0, m = 0;
    bool exact_z2 = false, asymptotic = false;
    std::string format = "text";
};

int cmd_moments(const MomentArgs& a) {
    if (a.r < 2) throw UsageError("--r must be at least 2");
    if (a.k < 1 || a.n % a.k != 0) throw UsageError("--k must divide --n");
    json out = {{"n", a.n}, {"r", a.r}, {"k", a.k}, {"m", a.m}};
    const auto z = expected_Z(a.n, a.r, a.k, a.m);
    out["E_Z"] = {{"log", static_cast<double>(z.log_value)}};
    if (z.exact) out["E_Z"]["exact"] = rational_text(*z.exact);
    std::optional<MomentEstimate> z2;
    if (a.exact_z2) {
        try {
            z2 = expected_Z2_exact(a.n, a.r, a.k, a.m);
        } catch (const GuardError& e) {
            throw UsageError(std::string("second moment: ") + e.what());
        }
        out["E_Z2"] = {{"log", static_cast<double>(z2->log_value)}};
        if (z2->exact) out["E_Z2"]["exact"] = rational_text(*z2->exact);
        out["ratio_Z_sq_over_Z2"] = static_cast<double>(std::exp(2 * z.log_value - z2->log_value));
    }
    if (a.asymptotic) {
        const double c = static_cast<double>(a.m) / static_cast<double>(a.n);
        out["E_Z"]["log_asymptotic"] = static_cast<double>(z.log_asymptotic);
        out["c"] = c;
        try {
            const auto lc = laplace_constants(a.r, a.k, c);
            const long double la = log_asymptotic_Z2(a.n, a.r, a.k, c);
            out["alpha"] = lc.alpha;
            out["ratio_limit"] = lc.ratio_limit;
            out["log_asymptotic_E_Z2"] = static_cast<double>(la);
            if (z2) out["ratio_exact_over_asymptotic_Z2"] = static_cast<double>(std::exp(z2->log_value - la));
        } catch (const std::domain_error& e) {
            out["alpha"] = nullptr;
            std::cerr << "note: " << e.what() << '\n';
        }
    }
    if (a.format == "json") {
        std::cout << out.dump(2) << '\n';
        return 0;
    }
    std::cout << "n=" << a.n << " r=" << a.r << " k=" << a.k << " m=" << a.m << '\n';
    auto print = [](const char* name, const MomentEstimate& e) {
        if (e.exact) std::cout << name << " = " << rational_text(*e.exact) << '\n';
        else std::cout << name << " ~ " << shortest(static_cast<double>(e.value())) << '\n';
        std::cout << "ln " << name << " = " << long_fixed(e.log_value, 12) << '\n';
    };
    print("E[Z]", z);
    if (z2) {
        print("E[Z^2]", *z2);
        std::cout << "E[Z]^2/E[Z^2] = " << fixed(out["ratio_Z_sq_over_Z2"].get<double>(), 12) << '\n';
    }
    if (a.asymptotic) {
        std::cout << "ln E[Z] asymptotic = " << long_fixed(z.log_asymptotic, 12) << '\n';
        if (!out["alpha"].is_null()) {
            std::cout << "alpha = " << fixed(out["alpha"].get<double>(), 12) << '\n';
            std::cout << "ratio limit = " << fixed(out["ratio_limit"].get<double>(), 12) << '\n';
            std::cout << "ln E[Z^2] asymptotic = " << fixed(out["log_asymptotic_E_Z2"].get<double>(), 12) << '\n';
            if (out.contains("ratio_exact_over_asymptotic_Z2"))
                std::cout << "E[Z^2]/asymptotic = " << fixed(out["ratio_exact_over_asymptotic_Z2"].get<double>(), 12)
                          << '\n';
        } else {
            std::cout << "alpha <= 0: asymptotic second moment undefined\n";
        }
    }
    return 0;
}

// ---- sample --------------------------------------------------------------

struct SampleArgs {
    std::size_t n = 0, r = 0, m = 0;
    double p = -1;
    std::string model = "multi";
    std::uint64_t seed = 0, stream = 0;
};

int cmd_sample(const SampleArgs& a) {
    Model model;
    try {
        model = parse_model(a.model);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    if (a.r < 1 || a.n < 1) throw UsageError("--n and --r must be positive");
    const Seed seed{a.seed, a.stream};
    Hypergraph h = [&] {
        switch (model) {
            case Model::multi: return sample_multi(a.n, a.r, a.m, seed);
            case Model::uniform:
                if (a.m > binomial_saturating(a.n, a.r)) throw UsageError("--m exceeds C(n,r)");
                return sample_uniform(a.n, a.r, a.m, seed);
            case Model::bernoulli:
                if (!(a.p >= 0 && a.p <= 1)) throw UsageError("bernoulli model needs --p in [0,1]");
                return sample_bernoulli(a.n, a.r, a.p, seed);
        }
        throw UsageError("unknown model");
    }();
    std::cout << "# n=" << a.n << " r=" << a.r << " model=" << to_string(model) << " seed=" << a.seed
              << " stream=" << a.stream << " m=" << h.edge_count();
    if (model == Model::bernoulli) std::cout << " p=" << shortest(a.p);
    std::cout << '\n';
    for (std::size_t i = 0; i < h.edge_count(); ++i) {
        const auto e = h.edge(i);
        for (std::size_t j = 0; j < e.size(); ++j) std::cout << (j ? " " : "") << e[j];
        std::cout << '\n';
    }
    return 0;
}

// ---- sweep ---------------------------------------------------------------

struct SweepArgs {
    std::size_t r = 3, k = 2, n = 30, trials = 100;
    std::string grid = "0.5,1,1.5,2,2.5,3,4,6", model = "uniform", out, meta;
    std::uint64_t seed = 1, stream = 0;
    double timeout = 10.0;
};

std::string utc_now() {
    const std::time_t t = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

int cmd_sweep(const SweepArgs& a, unsigned threads) {
    SweepConfig cfg;
    cfg.r = a.r;
    cfg.k = a.k;
    cfg.n = a.n;
    cfg.trials = a.trials;
    cfg.c_grid = parse_grid(a.grid);
    cfg.seed = Seed{a.seed, a.stream};
    cfg.threads = threads;
    cfg.instance_timeout_s = a.timeout;
    try {
        cfg.model = parse_model(a.model);
        validate(cfg);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    const std::string started = utc_now();
    const auto res = run_sweep(cfg);
    const std::string csv = sweep_csv(res);
    if (a.out.empty()) {
        std::cout << csv;
    } else {
        std::ofstream f(a.out, std::ios::binary);
        if (!f) throw UsageError("cannot write " + a.out);
        f << csv;
    }
    const std::string meta_path = !a.meta.empty() ? a.meta : (a.out.empty() ? "" : a.out + ".json");
    if (!meta_path.empty()) {
        json meta = {
            {"tool", "hypercolor"},
            {"version", kVersion},
            {"config",
             {{"r", cfg.r},
              {"k", cfg.k},
              {"n", cfg.n},
              {"model", to_string(cfg.model)},
              {"c_grid", cfg.c_grid},
              {"trials", cfg.trials},
              {"instance_timeout_s", cfg.instance_timeout_s}}},
            {"seed", {{"value", cfg.seed.value}, {"stream", cfg.seed.stream}}},
            {"threads", threads},
            {"started_utc", started},
            {"finished_utc", utc_now()},
            {"wall_seconds", res.wall_seconds},
            {"note",
             "finite n: colorability frequencies show a smooth transition; the sharp threshold is an "
             "n -> infinity statement and its location is not estimated here"}};
        std::ofstream f(meta_path, std::ios::binary);
        if (!f) throw UsageError("cannot write " + meta_path);
        f << meta.dump(2) << '\n';
    }
    for (const auto& p : res.points)
        if (p.censored) {
            std::cerr << "grid point c=" << shortest(p.c) << " censored (instance timeout)\n";
            return kExitGuard;
        }
    return 0;
}

// ---- verify --------------------------------------------------------------

struct VerifyArgs {
    std::vector<std::string> lemmas;
    std::string format = "text";
};

int cmd_verify(const VerifyArgs& a) {
    std::vector<LemmaCheck> checks;
    if (a.lemmas.empty()) {
        checks = run_all();
    } else {
        for (const auto& id : a.lemmas) {
            try {
                checks.push_back(run_check(id));
            } catch (const std::invalid_argument& e) {
                throw UsageError(e.what());
            }
        }
    }
    bool all = true;
    for (const auto& c : checks) all = all && c.passed;
    if (a.format == "csv") {
        std::cout << lemma_csv(checks);
    } else if (a.format == "json") {
        json out = json::array();
        for (const auto& c : checks)
            out.push_back({{"lemma_id", c.lemma_id},
                           {"domain", c.domain},
                           {"grid_size", c.grid_size},
                           {"worst_margin", c.worst_margin},
                           {"passed", c.passed}});
        std::cout << out.dump(2) << '\n';
    } else {
        for (const auto& c : checks) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%-11s %-4s %10zu  %+.6e  ", c.lemma_id.c_str(),
                          c.passed ? "ok" : "FAIL", c.grid_size, c.worst_margin);
            std::cout << buf << c.domain << '\n';
        }
        std::cout << (all ? "all checks passed" : "some checks FAILED") << '\n';
    }
    return all ? 0 : kExitFailed;
}

// ---- badedges ------------------------------------------------------------

struct BadEdgeArgs {
    std::size_t r = 3, n = 10000, trials = 10000;
    double c = 1.0;
    std::uint64_t seed = 1, stream = 0;
    std::string format = "text";
};

int cmd_badedges(const BadEdgeArgs& a, unsigned threads) {
    if (a.r < 2) throw UsageError("--r must be at least 2");
    if (a.trials == 0) throw UsageError("--trials must be positive");
    if (!(a.c >= 0)) throw UsageError("--c must be nonnegative");
    const Seed seed{a.seed, a.stream};
    const auto b = bad_edge_experiment(a.r, a.c, a.n, a.trials, seed, threads);
    const auto iso = isolated_vertex_experiment(a.r, a.c, a.n, a.trials, seed, threads);
    if (a.format == "json") {
        json out = {{"r", b.r},
                    {"c", b.c},
                    {"n", b.n},
                    {"m", b.m},
                    {"trials", b.trials},
                    {"seed", {{"value", a.seed}, {"stream", a.stream}}},
                    {"no_bad_edges", b.no_bad},
                    {"p_no_bad", b.p_hat},
                    {"p_no_bad_limit", b.predicted},
                    {"sigma", b.sigma},
                    {"z_score", b.z_score},
                    {"mean_bad_edges", b.mean_bad},
                    {"fraction_over_2ln_n", b.fraction_over_2ln_n},
                    {"isolated",
                     {{"mean", iso.mean},
                      {"expected", iso.expected},
                      {"min", iso.min},
                      {"max", iso.max},
                      {"fraction_at_least_k_minus_1",
                       {{"k=2", iso.fraction_at_least(1)},
                        {"k=3", iso.fraction_at_least(2)},
                        {"k=4", iso.fraction_at_least(3)},
                        {"k=5", iso.fraction_at_least(4)}}}}}};
        std::cout << out.dump(2) << '\n';
        return 0;
    }
    std::cout << "r=" << b.r << " c=" << shortest(b.c) << " n=" << b.n << " m=" << b.m << " trials=" << b.trials
              << '\n'
              << "P(no bad edge)       = " << fixed(b.p_hat, 6) << "  (limit " << fixed(b.predicted, 6)
              << ", z = " << fixed(b.z_score, 3) << ")\n"
              << "mean bad edges       = " << fixed(b.mean_bad, 6) << '\n'
              << "P(bad > 2 ln n)      = " << fixed(b.fraction_over_2ln_n, 6) << '\n'
              << "isolated mean        = " << fixed(iso.mean, 4) << "  (expected " << fixed(iso.expected, 4)
              << ")\n"
              << "isolated min/max     = " << iso.min << '/' << iso.max << '\n';
    for (std::size_t k = 2; k <= 5; ++k)
        std::cout << "P(isolated >= " << k - 1 << ")    = " << fixed(iso.fraction_at_least(k - 1), 6) << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Coloring thresholds, moments and experiments for random r-uniform hypergraphs"};
    app.require_subcommand(1);
    unsigned threads = default_threads();
    app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
    app.fallthrough();
    app.set_version_flag("--version", kVersion);

    ThresholdArgs ta;
    auto* th = app.add_subcommand("thresholds", "u bounds and the second-moment threshold c_{r,k}");
    th->add_option("--r-range", ta.r_range, "edge sizes, a..b within 2..64")->capture_default_str();
    th->add_option("--k-range", ta.k_range, "color counts, a..b within 2..64")->capture_default_str();
    th->add_option("--format", ta.format)->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    th->add_flag("--refined", ta.refined, "also report the bound using the t=2 term");

    MomentArgs ma;
    auto* mo = app.add_subcommand("moments", "first and second moments of the balanced coloring count");
    mo->add_option("--n", ma.n)->required()->check(CLI::PositiveNumber);
    mo->add_option("--r", ma.r)->required();
    mo->add_option("--k", ma.k)->required()->check(CLI::PositiveNumber);
    mo->add_option("--m", ma.m)->required();
    mo->add_flag("--exact-z2", ma.exact_z2, "sum the second moment over all overlap matrices");
    mo->add_flag("--asymptotic", ma.asymptotic, "report asymptotic forms and the Laplace constants");
    mo->add_option("--format", ma.format)->check(CLI::IsMember({"text", "json"}))->capture_default_str();

    SampleArgs sa;
    auto* sm = app.add_subcommand("sample", "draw one random hypergraph as an edge list");
    sm->add_option("--n", sa.n)->required();
    sm->add_option("--r", sa.r)->required();
    sm->add_option("--m", sa.m, "edge count (multi, uniform)");
    sm->add_option("--p", sa.p, "edge probability (bernoulli)");
    sm->add_option("--model", sa.model)->check(CLI::IsMember({"multi", "uniform", "bernoulli"}))->capture_default_str();
    sm->add_option("--seed", sa.seed)->capture_default_str();
    sm->add_option("--stream", sa.stream)->capture_default_str();

    SweepArgs wa;
    auto* sw = app.add_subcommand("sweep", "Monte Carlo colorability frequency over a density grid");
    sw->add_option("--r", wa.r)->capture_default_str();
    sw->add_option("--k", wa.k)->capture_default_str();
    sw->add_option("--n", wa.n)->capture_default_str();
    sw->add_option("--c-grid", wa.grid, "comma-separated, strictly increasing")->capture_default_str();
    sw->add_option("--trials", wa.trials)->capture_default_str();
    sw->add_option("--model", wa.model)->check(CLI::IsMember({"multi", "uniform", "bernoulli"}))->capture_default_str();
    sw->add_option("--seed", wa.seed)->capture_default_str();
    sw->add_option("--stream", wa.stream)->capture_default_str();
    sw->add_option("--timeout", wa.timeout, "seconds per instance")->capture_default_str();
    sw->add_option("--out", wa.out, "CSV path (default stdout)");
    sw->add_option("--meta", wa.meta, "JSON metadata path (default <out>.json)");

    VerifyArgs va;
    auto* ve = app.add_subcommand("verify", "numeric checks of the supporting inequalities");
    ve->add_option("--lemma", va.lemmas, "restrict to these ids");
    ve->add_option("--format", va.format)->check(CLI::IsMember({"text", "csv", "json"}))->capture_default_str();

    BadEdgeArgs ba;
    auto* be = app.add_subcommand("badedges", "bad-edge and isolated-vertex statistics of the multigraph model");
    be->add_option("--r", ba.r)->capture_default_str();
    be->add_option("--c", ba.c)->capture_default_str();
    be->add_option("--n", ba.n)->capture_default_str()->check(CLI::PositiveNumber);
    be->add_option("--trials", ba.trials)->capture_default_str();
    be->add_option("--seed", ba.seed)->capture_default_str();
    be->add_option("--stream", ba.stream)->capture_default_str();
    be->add_option("--format", ba.format)->check(CLI::IsMember({"text", "json"}))->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*th) return cmd_thresholds(ta);
        if (*mo) return cmd_moments(ma);
        if (*sm) return cmd_sample(sa);
        if (*sw) return cmd_sweep(wa, threads);
        if (*ve) return cmd_verify(va);
        if (*be) return cmd_badedges(ba, threads);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const GuardError& e) {
        std::cerr << "guard: " << e.what() << '\n';
        return kExitGuard;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitGuard;
    }
    return kExitUsage;
}
