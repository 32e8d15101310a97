#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hypercolor/roots.hpp"

namespace hypercolor {

namespace detail {

// log(1 + u) - u, accurate for small |u| (u > -1).
inline double log1pmx(double u) {
    if (std::fabs(u) < 0.05) {
        // -u^2/2 + u^3/3 - ...
        double term = -u, sum = 0;
        for (int j = 2; j < 40; ++j) {
            term *= -u;
            const double add = term / j;
            sum -= add;
            if (std::fabs(add) < 1e-18 * std::fabs(sum)) break;
        }
        return sum;
    }
    return std::log1p(u) - u;
}

}  // namespace detail

// The one-variable functions behind the second-moment threshold, on
// x in [0, 1 - 1/k]:
//   f(x) = ln k - x ln(k-1) + (1-x) ln(1-x) + x ln x
//   g(x) = (1-x)^r + x^r/(k-1)^{r-1} - 1/k^{r-1}
// Both vanish to second order at x0 = 1 - 1/k; near there the code uses
// expansions in d = x - x0 instead of the raw formulas.
class UnivariateFns {
public:
    UnivariateFns(std::size_t r, std::size_t k) : r_(r), k_(k) {
        if (r < 2 || k < 2) throw std::invalid_argument("need r >= 2 and k >= 2");
        kd_ = static_cast<double>(k);
        rd_ = static_cast<double>(r);
        x0_ = 1.0 - 1.0 / kd_;
        K_ = std::pow(kd_, rd_ - 1);
        km1_pow_ = std::pow(kd_ - 1, rd_ - 1);
    }

    std::size_t r() const noexcept { return r_; }
    std::size_t k() const noexcept { return k_; }
    double x0() const noexcept { return x0_; }
    // k^{r-1}
    double K() const noexcept { return K_; }

    // f is the KL divergence of Bernoulli(x) from Bernoulli(x0).
    double f(double x) const {
        if (x <= 0) return std::log(kd_);
        if (x < 0.5 * x0_) return x * std::log(x / x0_) + (1 - x) * (std::log(kd_) + std::log1p(-x));
        const double d = x - x0_;
        if (d == 0) return 0;
        const double u = d / x0_, v = -d / (1 - x0_);
        return d * d / (x0_ * (1 - x0_)) + x * detail::log1pmx(u) + (1 - x) * detail::log1pmx(v);
    }

    double g(double x) const {
        const double a = kd_ * (x - x0_);
        if (std::fabs(a) <= 0.25) {
            // k^r g = sum_{j>=2} C(r,j) ((-a)^j + (k-1) b^j), b = a/(k-1)
            const double b = a / (kd_ - 1);
            double s = 0, pa = 1, pb = 1, c = 1;
            for (std::size_t j = 1; j <= r_; ++j) {
                pa *= -a;
                pb *= b;
                c = c * static_cast<double>(r_ - j + 1) / static_cast<double>(j);
                if (j >= 2) s += c * (pa + (kd_ - 1) * pb);
            }
            return s / (K_ * kd_);
        }
        return std::exp(rd_ * std::log1p(-x)) + std::pow(x, rd_) / km1_pow_ - 1.0 / K_;
    }

    double df(double x) const {
        if (x <= 0) return -std::numeric_limits<double>::infinity();
        // ln(x/x0) - ln(k(1-x)); x - x0 loses the low digits of a small x
        if (x < 0.5 * x0_) return std::log(x / x0_) - std::log1p(-x) - std::log(kd_);
        const double d = x - x0_;
        return std::log1p(d / x0_) - std::log1p(-d / (1 - x0_));
    }

    double dg(double x) const {
        const double a = kd_ * (x - x0_);
        if (std::fabs(a) <= 0.25) {
            const double b = a / (kd_ - 1);
            double s = 0, pa = 1, pb = 1, c = 1;
            for (std::size_t j = 1; j < r_; ++j) {
                pa *= -a;
                pb *= b;
                c = c * static_cast<double>(r_ - j) / static_cast<double>(j);
                s += c * (pa - pb);
            }
            return -rd_ * s / K_;
        }
        return -rd_ * (std::pow(1 - x, rd_ - 1) - std::pow(x, rd_ - 1) / km1_pow_);
    }

    double d2f(double x) const { return 1.0 / (x * (1 - x)); }

    double d2g(double x) const {
        return rd_ * (rd_ - 1) * (std::pow(1 - x, rd_ - 2) + std::pow(x, rd_ - 2) / km1_pow_);
    }

    // Values at x0 by continuity.
    double eta_at_x0() const { return K_ / (rd_ * (rd_ - 1)); }
    double eta_prime_at_x0() const {
        return (kd_ - 2) * std::pow(kd_, rd_) / (3 * rd_ * (kd_ - 1));
    }
    double eta_at_0() const { return K_ * std::log(kd_) / (K_ - 1); }

    double eta(double x) const {
        if (x == x0_) return eta_at_x0();
        return f(x) / g(x);
    }

    double eta_prime(double x) const {
        if (x <= 0) return -std::numeric_limits<double>::infinity();
        if (x == x0_) return eta_prime_at_x0();
        const double gx = g(x);
        return (df(x) - f(x) / gx * dg(x)) / gx;
    }

    double omega(double x) const {
        if (x == x0_) return eta_at_x0();
        return df(x) / dg(x);
    }

    // Sign test for stationary points of eta: positive where eta decreases.
    double stationarity_gap(double x) const {
        if (!(x > 0) || !(x <= x0_ - 1e-9))
            throw std::domain_error("stationarity gap evaluated at or beyond the boundary");
        const double a = kd_ * (x - x0_);
        return (x - g(x) / dg(x)) - std::log1p(-a) / (-df(x));
    }

private:
    std::size_t r_, k_;
    double kd_, rd_, x0_, K_, km1_pow_;
};

inline double stationarity_gap(double x, std::size_t r, std::size_t k) {
    return UnivariateFns(r, k).stationarity_gap(x);
}

enum class PairClass { r2_closed, k2_small_r, regular, irregular };

inline const char* to_string(PairClass c) {
    switch (c) {
        case PairClass::r2_closed: return "R2_CLOSED";
        case PairClass::k2_small_r: return "K2_SMALL_R";
        case PairClass::regular: return "REGULAR";
        case PairClass::irregular: return "IRREGULAR";
    }
    return "?";
}

inline double u_bound(std::size_t r, std::size_t k) {
    if (k <= 1) return 0.0;
    return std::pow(static_cast<double>(k), static_cast<double>(r - 1)) * std::log(static_cast<double>(k));
}

inline double u_improved(std::size_t r, std::size_t k) {
    return (std::pow(static_cast<double>(k), static_cast<double>(r - 1)) - 0.5) *
           std::log(static_cast<double>(k));
}

// 3k^r / (r^2 (k+2)^2 ln k) >= 1 + 0.52/r + 2/(r(k+2)) + 3/(2 r ln k), compared in logs.
inline bool regularity_inequality_holds(std::size_t r, std::size_t k) {
    const double rd = static_cast<double>(r), kd = static_cast<double>(k), lk = std::log(kd);
    const double lhs = std::log(3.0) + rd * lk - 2 * std::log(rd) - 2 * std::log(kd + 2) - std::log(lk);
    const double rhs = std::log(1 + 0.52 / rd + 2 / (rd * (kd + 2)) + 3 / (2 * rd * lk));
    return lhs >= rhs;
}

// Minimal regular pairs (r, k); every pair dominating one of them is regular.
inline constexpr std::size_t kRegularBase[][2] = {{9, 2}, {6, 3}, {5, 4}, {4, 5}, {3, 15}};

inline bool check_regularity(std::size_t r, std::size_t k) {
    if (r < 3) return false;
    for (const auto& b : kRegularBase)
        if (r >= b[0] && k >= b[1]) return true;
    return false;
}

inline PairClass classify_pair(std::size_t r, std::size_t k) {
    if (r == 2) return PairClass::r2_closed;
    if (k == 2 && r <= 4) return PairClass::k2_small_r;
    if (check_regularity(r, k)) return PairClass::regular;
    return PairClass::irregular;
}

// Upper limit on eta when r > 2k; nullopt stands for "unbounded" (r <= 2k).
inline std::optional<double> lambda0(std::size_t r, std::size_t k) {
    if (r <= 2 * k) return std::nullopt;
    const double rd = static_cast<double>(r), kd = static_cast<double>(k);
    const double inner = (rd - 2) * std::pow(2.0, rd - 1) / std::pow(rd, rd) + 1 / std::pow(kd, rd);
    return 1.0 / (rd * (rd - 1) * inner);
}

struct XiResult {
    double xi = 0;
    PairClass classification = PairClass::irregular;
    double bracket_lo = 0, bracket_hi = 0;
    std::size_t iterations = 0;
};

namespace detail {

// Log-spaced points on [lo, x0/2] followed by linear points up to x0 - gap.
inline std::vector<double> x_grid(double lo, double x0, std::size_t per_part, double gap = 1e-9) {
    std::vector<double> xs;
    const double mid = x0 / 2;
    const double llo = std::log(lo), lmid = std::log(mid);
    for (std::size_t i = 0; i < per_part; ++i)
        xs.push_back(std::exp(llo + (lmid - llo) * static_cast<double>(i) / static_cast<double>(per_part)));
    for (std::size_t i = 0; i <= per_part; ++i)
        xs.push_back(mid + (x0 - gap - mid) * static_cast<double>(i) / static_cast<double>(per_part));
    return xs;
}

}  // namespace detail

// Location of the minimum of eta over [0, 1 - 1/k].
// Absolute rounding floor of the stationarity gap.
inline constexpr double kGapRoundoff = 1e-14;

inline XiResult find_xi(std::size_t r, std::size_t k) {
    const UnivariateFns fns(r, k);
    XiResult res;
    res.classification = classify_pair(r, k);
    auto s = [&](double x) { return fns.stationarity_gap(x); };
    switch (res.classification) {
        case PairClass::r2_closed:
            res.xi = res.bracket_lo = res.bracket_hi = 1.0 / static_cast<double>(k);
            return res;
        case PairClass::k2_small_r:
            res.xi = res.bracket_lo = res.bracket_hi = 0.5;
            return res;
        case PairClass::regular: {
            const double kr = std::pow(static_cast<double>(k), static_cast<double>(r));
            const double lo = (static_cast<double>(k) - 1) / kr, hi = (static_cast<double>(k) + 2) / kr;
            res.bracket_lo = lo;
            res.bracket_hi = hi;
            // For large k^r the root sits at lo to within the rounding of s,
            // whose two terms are O(1/r) and cancel.
            const double s_lo = s(lo);
            if (!(s_lo > 0) && s_lo > -kGapRoundoff) {
                res.xi = lo;
                return res;
            }
            auto root = bisect_decreasing(s, lo, hi);
            res.xi = root.x;
            res.iterations = root.iterations;
            return res;
        }
        case PairClass::irregular: {
            // First + to - change of s on a scan, then bisection inside it.
            const auto xs = detail::x_grid(1e-12, fns.x0(), 2000);
            double prev = s(xs[0]);
            if (!(prev > 0)) throw std::logic_error("stationarity gap not positive near zero");
            for (std::size_t i = 1; i < xs.size(); ++i) {
                const double cur = s(xs[i]);
                if (cur < 0) {
                    auto root = bisect_decreasing(s, xs[i - 1], xs[i]);
                    res.xi = root.x;
                    res.bracket_lo = xs[i - 1];
                    res.bracket_hi = xs[i];
                    res.iterations = root.iterations;
                    return res;
                }
                prev = cur;
            }
            throw std::logic_error("stationarity gap has no sign change");
        }
    }
    return res;
}

struct ThresholdReport {
    std::size_t r = 0, k = 0;
    double u_low = 0, u_high = 0, u_improved = 0;
    double xi = 0, eta_min = 0, c_rk = 0;
    std::optional<double> c_refined;
    PairClass classification = PairClass::irregular;
    double bracket_lo = 0, bracket_hi = 0;
    std::size_t iterations = 0;
};

// c_{r,k} = ((k^{r-1}-1)^2 / k^{r-1}) * min eta.
inline double threshold_from_eta(std::size_t r, std::size_t k, double eta) {
    const double K = std::pow(static_cast<double>(k), static_cast<double>(r - 1));
    return (K - 1) * (K - 1) / K * eta;
}

inline double c_closed_form_k2(std::size_t r) {
    const double a = std::pow(2.0, static_cast<double>(r - 1)) - 1;
    return a * a / static_cast<double>(r * (r - 1));
}

inline double c_closed_form_r2(std::size_t k) {
    const double kd = static_cast<double>(k);
    return (kd - 1) * (kd - 1) * (kd - 1) * std::log(kd - 1) / (kd * (kd - 2));
}

inline double refined_c(std::size_t r, std::size_t k);

inline ThresholdReport c_threshold(std::size_t r, std::size_t k, bool with_refined = false) {
    const UnivariateFns fns(r, k);
    const auto xr = find_xi(r, k);
    ThresholdReport rep;
    rep.r = r;
    rep.k = k;
    rep.u_low = u_bound(r, k - 1);
    rep.u_high = u_bound(r, k);
    rep.u_improved = u_improved(r, k);
    rep.xi = xr.xi;
    rep.classification = xr.classification;
    rep.bracket_lo = xr.bracket_lo;
    rep.bracket_hi = xr.bracket_hi;
    rep.iterations = xr.iterations;
    const double K = fns.K();
    if (k == 2 && r <= 4) {
        rep.c_rk = c_closed_form_k2(r);
        rep.eta_min = rep.c_rk * K / ((K - 1) * (K - 1));
    } else if (r == 2) {
        rep.c_rk = c_closed_form_r2(k);
        rep.eta_min = rep.c_rk * K / ((K - 1) * (K - 1));
    } else {
        rep.eta_min = fns.eta(rep.xi);
        rep.c_rk = threshold_from_eta(r, k, rep.eta_min);
    }
    if (with_refined) rep.c_refined = refined_c(r, k);
    return rep;
}

// Bound from also using the t = 2 term: minimum over x of
// 2 f(x) / (k ln(1 + 2 k^{r-2} g(x) / (k^{r-1}-1)^2)).
inline double refined_c(std::size_t r, std::size_t k) {
    const UnivariateFns fns(r, k);
    const double kd = static_cast<double>(k), K = fns.K(), x0 = fns.x0();
    const double scale = 2 * K / kd / ((K - 1) * (K - 1));
    auto R = [&](double x) { return 2 * fns.f(x) / (kd * std::log1p(scale * fns.g(x))); };
    double best = threshold_from_eta(r, k, fns.eta_at_x0());  // limit at x0
    const double lo = 1e-3 * std::pow(kd, -static_cast<double>(r));
    const auto xs = detail::x_grid(lo, x0, 5000, 1e-6);
    std::size_t arg = xs.size();
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double v = R(xs[i]);
        if (v < best) { best = v; arg = i; }
    }
    if (arg < xs.size()) {
        const double a = xs[arg == 0 ? 0 : arg - 1], b = xs[std::min(arg + 1, xs.size() - 1)];
        const auto m = golden_section_minimize(R, a, b);
        best = std::min(best, m.value);
    }
    return best;
}

inline double asymptotic_c(std::size_t r, std::size_t k) {
    const double kd = static_cast<double>(k), lk = std::log(kd);
    if (r == 2) return kd * lk - (kd - 2) / kd * lk + (2 * kd - 1) / (2 * kd);
    return std::pow(kd, static_cast<double>(r - 1)) * lk - (kd - 1) / kd * (1 + lk);
}

struct FeasibleOverlap {
    double rho = 0;
    double epsilon = 0;
    Eigen::MatrixXd matrix;  // doubly stochastic
};

// A(eps) = (1-eps)/k J + eps I with k^{r-2} sum a_ij^r = rho.
inline FeasibleOverlap feasible_overlap(double rho, std::size_t r, std::size_t k) {
    if (r < 2 || k < 2) throw std::invalid_argument("need r >= 2 and k >= 2");
    const double kd = static_cast<double>(k), rd = static_cast<double>(r);
    const double top = std::pow(kd, rd - 1);
    if (!(rho >= 1.0 && rho <= top)) throw std::domain_error("rho outside [1, k^{r-1}]");
    auto psi = [&](double e) {
        const double off = (1 - e) / kd;
        return std::pow(kd, rd - 2) * (kd * std::pow(off + e, rd) + (kd * kd - kd) * std::pow(off, rd));
    };
    double lo = 0, hi = 1, eps;
    if (rho == 1.0) eps = 0;
    else if (rho == top) eps = 1;
    else {
        for (int i = 0; i < 200 && hi - lo > 1e-17; ++i) {
            const double mid = 0.5 * (lo + hi);
            (psi(mid) < rho ? lo : hi) = mid;
        }
        eps = std::fabs(psi(lo) - rho) <= std::fabs(psi(hi) - rho) ? lo : hi;
    }
    FeasibleOverlap out{rho, eps, Eigen::MatrixXd::Constant(static_cast<Eigen::Index>(k),
                                                            static_cast<Eigen::Index>(k), (1 - eps) / kd)};
    out.matrix.diagonal().array() += eps;
    return out;
}

struct ChromaticWindow {
    std::size_t k = 0;
    bool unique = false;
};

// Chromatic number is k or k+1; unique means it is a.a.s. exactly k.
inline ChromaticWindow predict_chromatic_window(std::size_t r, double c) {
    if (r < 2) throw std::invalid_argument("edge size must be at least 2");
    if (!(c > 0)) throw std::invalid_argument("density must be positive");
    std::size_t k = 2;
    while (c > u_bound(r, k)) ++k;
    const bool unique = c < c_threshold(r, k).c_rk && std::max(r, k) >= 3;
    return {k, unique};
}

}  // namespace hypercolor
