// End-to-end acceptance run: one PASS/FAIL line per criterion.
// Exit status is the number of failed criteria.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "hypercolor/hypercolor.hpp"
#include "oracles.hpp"

#ifndef HYPERCOLOR_CLI
#error "HYPERCOLOR_CLI must name the command-line binary"
#endif

using namespace hypercolor;

namespace {

// Pinned tolerances.
constexpr double kTableTol = 5e-5;
constexpr double kClosedTol = 1e-12;
constexpr double kGapTol = 1e-10;
constexpr double kHessianRelTol = 1e-4;
constexpr double kLaplaceBand = 0.1;
constexpr double kRatioLimitTol = 0.05;
constexpr double kSigmas = 3.0;
constexpr double kIsolatedRelTol = 0.02;
constexpr double kSweepLow = 0.9, kSweepHigh = 0.1;
constexpr double kMonotoneSigmas = 2.0;

struct Outcome {
    bool pass = true;
    std::string detail;
};

struct RunResult {
    int status = -1;
    std::string out;
};

RunResult run(const std::string& args) {
    const std::string cmd = std::string(HYPERCOLOR_CLI) + " " + args + " 2>/dev/null";
    RunResult res;
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return res;
    std::array<char, 4096> buf;
    for (std::size_t got; (got = fread(buf.data(), 1, buf.size(), p)) > 0;) res.out.append(buf.data(), got);
    const int st = pclose(p);
    res.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return res;
}

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream is(text);
    for (std::string line; std::getline(is, line);) {
        std::vector<std::string> cells;
        std::istringstream ls(line);
        for (std::string c; std::getline(ls, c, ',');) cells.push_back(c);
        rows.push_back(cells);
    }
    return rows;
}

std::string fmt(double v, int prec = 6) {
    char b[64];
    std::snprintf(b, sizeof b, "%.*f", prec, v);
    return b;
}

// r, k, u_{r,k-1}, c_{r,k}, u_{r,k}
struct TableRow {
    std::size_t r, k;
    double u_low, c, u_high;
};

const std::vector<TableRow>& published_table() {
    static const std::vector<TableRow> rows = {
        {5, 2, 0.0000, 9.8771, 11.0904},       {6, 2, 0.0000, 21.2990, 22.1807},
        {7, 2, 0.0000, 43.7678, 44.3614},      {8, 2, 0.0000, 88.3486, 88.7228},
        {3, 3, 2.7726, 8.1566, 9.8875},        {4, 3, 5.5452, 27.9595, 29.6625},
        {5, 3, 11.0904, 87.4703, 88.9876},     {3, 4, 9.8875, 20.0491, 22.1807},
        {4, 4, 29.6625, 86.6829, 88.7228},     {3, 5, 22.1807, 37.8417, 40.2359},
        {3, 6, 40.2359, 61.8958, 64.5033},     {3, 7, 64.5033, 92.5637, 95.3496},
        {3, 8, 95.3496, 130.1457, 133.0843},   {3, 9, 133.0843, 174.9034, 177.9752},
        {3, 10, 177.9752, 227.0688, 230.2585}, {3, 11, 230.2585, 286.8499, 290.1453},
        {3, 12, 290.1453, 354.4353, 357.8266}, {3, 13, 357.8266, 429.9977, 433.4764},
        {3, 14, 433.4764, 513.6960, 517.2552},
    };
    return rows;
}

Outcome table_reproduction() {
    Outcome o;
    const auto res = run("thresholds --r-range 2..8 --k-range 2..14 --format csv");
    if (res.status != 0) return {false, "thresholds exited " + std::to_string(res.status)};
    std::map<std::pair<std::size_t, std::size_t>, std::vector<std::string>> got;
    for (const auto& row : parse_csv(res.out))
        if (row.size() == 6 && row[0] != "r") got[{std::stoul(row[0]), std::stoul(row[1])}] = row;
    int c_bad = 0, u_bad = 0, irregular = 0;
    double worst_c = 0;
    std::string first;
    for (const auto& t : published_table()) {
        auto it = got.find({t.r, t.k});
        if (it == got.end()) return {false, "missing row"};
        const auto& row = it->second;
        irregular += row[5] == "IRREGULAR";
        const double ul = std::stod(row[2]), c = std::stod(row[3]), uh = std::stod(row[4]);
        if (std::fabs(ul - t.u_low) > kTableTol || std::fabs(uh - t.u_high) > kTableTol) ++u_bad;
        if (std::fabs(c - t.c) > kTableTol) {
            ++c_bad;
            if (first.empty())
                first = "c_{" + std::to_string(t.r) + "," + std::to_string(t.k) + "}=" + fmt(c, 4) + " vs " + fmt(t.c, 4);
        }
        worst_c = std::max(worst_c, std::fabs(c - t.c));
    }
    o.pass = c_bad == 0 && u_bad == 0 && irregular == 19;
    o.detail = "irregular rows " + std::to_string(irregular) + "/19, u mismatches " + std::to_string(u_bad) +
               ", c mismatches " + std::to_string(c_bad) + " (max |dc| " + fmt(worst_c, 4) + ")";
    if (!first.empty()) o.detail += ", e.g. " + first;
    return o;
}

Outcome closed_forms() {
    double worst = 0;
    worst = std::max(worst, std::fabs(c_threshold(2, 2).c_rk - 0.5));
    worst = std::max(worst, std::fabs(c_threshold(3, 2).c_rk - 1.5));
    worst = std::max(worst, std::fabs(c_threshold(4, 2).c_rk - 49.0 / 12));
    for (std::size_t k = 3; k <= 50; ++k) {
        const double kd = static_cast<double>(k);
        const double closed = (kd - 1) * (kd - 1) * (kd - 1) * std::log(kd - 1) / (kd * (kd - 2));
        worst = std::max(worst, std::fabs(c_threshold(2, k).c_rk - closed));
    }
    double gap = 0;
    for (std::size_t k = 3; k <= 50; ++k) gap = std::max(gap, std::fabs(stationarity_gap(1.0 / k, 2, k)));
    return {worst <= kClosedTol && gap <= kGapTol,
            "max |c - closed| " + std::to_string(worst) + ", max |s(1/k)| " + std::to_string(gap)};
}

Outcome sandwich() {
    int bad = 0;
    for (std::size_t r = 2; r <= 8; ++r)
        for (std::size_t k = 2; k <= 15; ++k) {
            const auto t = c_threshold(r, k);
            const double K = std::pow(static_cast<double>(k), static_cast<double>(r - 1));
            const double cap = (K - 1) * (K - 1) / static_cast<double>(r * (r - 1));
            if (!(t.u_low < t.c_rk && t.c_rk < t.u_high && t.c_rk <= cap)) ++bad;
        }
    return {bad == 0, std::to_string(98 - bad) + "/98 pairs satisfy both"};
}

Outcome moment_oracle() {
    int cases = 0, bad = 0;
    bool worked = false;
    for (int n = 1; n <= 4; ++n)
        for (int k = 1; k <= n; ++k) {
            if (n % k) continue;
            for (int r = 2; r <= 8; ++r)
                for (int m = 0; r * m <= 8; ++m) {
                    const auto [z, z2] = oracle::moments_by_enumeration(n, r, k, m);
                    const auto ez = expected_Z(n, r, k, m, Arithmetic::exact);
                    const auto ez2 = expected_Z2_exact(n, r, k, m, Arithmetic::exact);
                    ++cases;
                    if (!ez.exact || !ez2.exact || *ez.exact != z || *ez2.exact != z2) ++bad;
                    if (n == 4 && r == 2 && k == 2 && m == 1)
                        worked = ez.exact && ez2.exact && *ez.exact == 3 && *ez2.exact == 12;
                }
        }
    return {bad == 0 && worked, std::to_string(cases - bad) + "/" + std::to_string(cases) +
                                    " cases equal; (4,2,2,1) -> 3, 12: " + (worked ? "yes" : "no")};
}

Outcome laplace() {
    auto ratio = [](std::size_t n) {
        return std::exp(static_cast<double>(expected_Z2_exact(n, 3, 2, n).log_value - log_asymptotic_Z2(n, 3, 2, 1.0L)));
    };
    const double q1 = ratio(1000), q2 = ratio(2000);
    const double second = std::exp(static_cast<double>(2 * expected_Z(2000, 3, 2, 2000).log_value -
                                                       expected_Z2_exact(2000, 3, 2, 2000).log_value));
    const double limit = laplace_constants(3, 2, 1.0).ratio_limit;
    const bool ok = std::fabs(q1 - 1) <= kLaplaceBand && std::fabs(q2 - 1) < std::fabs(q1 - 1) &&
                    std::fabs(second - limit) <= kRatioLimitTol;
    return {ok, "ratio(1000)=" + fmt(q1) + " ratio(2000)=" + fmt(q2) + " EZ^2/EZ2=" + fmt(second) +
                    " alpha^(1/2)=" + fmt(limit)};
}

Outcome determinants() {
    int gram_bad = 0;
    for (std::size_t p = 1; p <= 6; ++p)
        for (std::size_t q = 1; q <= 6; ++q) gram_bad += block_gram_det(p, q) != dense_block_gram_det(p, q);
    double worst = 0;
    for (std::size_t r : {2, 3, 4})
        for (std::size_t k : {2, 3}) {
            const double K = std::pow(static_cast<double>(k), static_cast<double>(r - 1));
            const double c = 0.5 * (K - 1) * (K - 1) / static_cast<double>(r * (r - 1));
            const double closed = laplace_constants(r, k, c).hessian_det;
            worst = std::max(worst, std::fabs(hessian_numeric_det(r, k, c) / closed - 1));
        }
    return {gram_bad == 0 && worst <= kHessianRelTol,
            std::to_string(36 - gram_bad) + "/36 Gram determinants exact; max Hessian rel err " + fmt(worst, 9)};
}

Outcome lemma_suite() {
    const auto res = run("verify --format csv");
    int rows = 0, failed = 0;
    double worst = 1e300;
    for (const auto& row : parse_csv(res.out)) {
        if (row.empty() || row[0] == "lemma_id") continue;
        ++rows;
        // lemma_id,domain,grid_size,worst_margin,passed; the domain may contain commas
        const double margin = std::stod(row[row.size() - 2]);
        worst = std::min(worst, margin);
        failed += row.back() != "true" || !(margin > -1e-12);
    }
    const bool ok = res.status == 0 && rows == static_cast<int>(registered_lemmas().size()) && failed == 0;
    return {ok, std::to_string(rows - failed) + "/" + std::to_string(rows) + " checks passed, worst margin " +
                    fmt(worst, 3) + ", exit " + std::to_string(res.status)};
}

Outcome stochastic_laws() {
    const unsigned threads = default_threads();
    const auto a = bad_edge_experiment(3, 1.0, 10000, 10000, Seed{20240611, 0}, threads);
    const auto b = bad_edge_experiment(2, 1.0, 10000, 10000, Seed{20240611, 1}, threads);
    const auto iso = isolated_vertex_experiment(2, 1.0, 1000, 1000, Seed{20240611, 2}, threads);
    const double rel = std::fabs(iso.mean / iso.expected - 1);
    const bool ok = std::fabs(a.z_score) <= kSigmas && std::fabs(b.z_score) <= kSigmas && rel <= kIsolatedRelTol;
    return {ok, "r=3: " + fmt(a.p_hat, 4) + " vs " + fmt(a.predicted, 4) + " (z=" + fmt(a.z_score, 2) +
                    "); r=2: " + fmt(b.p_hat, 4) + " vs " + fmt(b.predicted, 4) + " (z=" + fmt(b.z_score, 2) +
                    "); isolated mean rel err " + fmt(rel, 4)};
}

Outcome sweep_properties(const std::string& csv_path) {
    const auto res = run("sweep --r 3 --k 2 --n 30 --trials 500 --c-grid 0.5,1,1.5,2,2.5,3,4,6 --seed 1 --out " +
                         csv_path + " --meta " + csv_path + ".json");
    if (res.status != 0) return {false, "sweep exited " + std::to_string(res.status)};
    std::vector<double> c, p, sigma;
    for (const auto& row : parse_csv(slurp(csv_path))) {
        if (row.size() != 12 || row[0] == "r") continue;
        c.push_back(std::stod(row[4]));
        p.push_back(std::stod(row[8]));
        sigma.push_back((std::stod(row[10]) - std::stod(row[9])) / (2 * kZ95));
    }
    if (c.size() != 8) return {false, "expected 8 grid points"};
    int violations = 0;
    for (std::size_t i = 0; i + 1 < p.size(); ++i)
        if (p[i + 1] > p[i] + kMonotoneSigmas * std::hypot(sigma[i], sigma[i + 1])) ++violations;
    const bool ok = p.front() >= kSweepLow && p.back() <= kSweepHigh && violations == 0;
    return {ok, "p(0.5)=" + fmt(p.front(), 3) + " p(6)=" + fmt(p.back(), 3) + ", monotonicity violations " +
                    std::to_string(violations)};
}

Outcome determinism(const std::string& dir) {
    const std::vector<std::string> cmds = {
        "thresholds --r-range 2..6 --k-range 2..6 --format json --refined",
        "thresholds --r-range 2..6 --k-range 2..6 --format csv",
        "moments --n 12 --r 3 --k 2 --m 9 --exact-z2 --asymptotic --format json",
        "sample --n 30 --r 3 --m 40 --model uniform --seed 11 --stream 2",
        "sample --n 30 --r 3 --p 0.01 --model bernoulli --seed 11",
        "badedges --r 3 --c 1 --n 2000 --trials 300 --seed 5 --format json",
        "verify --format json",
        "sweep --r 3 --k 2 --n 24 --trials 80 --seed 9 --threads 1",
        "sweep --r 3 --k 2 --n 24 --trials 80 --seed 9 --threads 3",
    };
    int differing = 0;
    std::string first_out;
    for (std::size_t i = 0; i < cmds.size(); ++i) {
        const auto a = run(cmds[i]), b = run(cmds[i]);
        if (a.status != 0 || a.out != b.out || a.out.empty()) ++differing;
        if (i == cmds.size() - 2) first_out = a.out;
        if (i == cmds.size() - 1 && a.out != first_out) ++differing;  // thread count must not matter
    }
    // CSV files written by two sweeps
    const std::string f1 = dir + "/det_a.csv", f2 = dir + "/det_b.csv";
    run("sweep --r 3 --k 2 --n 20 --trials 50 --seed 3 --model multi --out " + f1);
    run("sweep --r 3 --k 2 --n 20 --trials 50 --seed 3 --model multi --out " + f2);
    const bool files_same = !slurp(f1).empty() && slurp(f1) == slurp(f2);
    return {differing == 0 && files_same, std::to_string(cmds.size() - differing) + "/" + std::to_string(cmds.size()) +
                                              " commands byte-identical, sweep CSV files " +
                                              (files_same ? "identical" : "differ")};
}

}  // namespace

int main(int argc, char** argv) {
    const std::string dir = argc > 1 ? argv[1] : ".";
    struct Criterion {
        const char* name;
        double budget_s;  // 0: none
        std::function<Outcome()> fn;
    };
    const std::vector<Criterion> criteria = {
        {"table reproduction", 2, table_reproduction},
        {"closed forms", 0, closed_forms},
        {"sandwich and bound", 10, sandwich},
        {"moment oracle equivalence", 60, moment_oracle},
        {"Laplace convergence", 30, laplace},
        {"determinants", 0, determinants},
        {"lemma suite", 60, lemma_suite},
        {"stochastic laws", 300, stochastic_laws},
        {"sweep properties", 600, [&] { return sweep_properties(dir + "/acceptance_sweep.csv"); }},
        {"determinism", 0, [&] { return determinism(dir); }},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto& c = criteria[i];
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (c.budget_s > 0 && secs > c.budget_s) {
            o.pass = false;
            o.detail += " (over time budget " + fmt(c.budget_s, 0) + " s)";
        }
        failed += !o.pass;
        std::printf("%s %2zu %-26s %7.2fs  %s\n", o.pass ? "PASS" : "FAIL", i + 1, c.name, secs, o.detail.c_str());
        std::fflush(stdout);
    }
    return failed;
}
