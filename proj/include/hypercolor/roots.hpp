#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace hypercolor {

struct RootResult {
    double x = 0;
    double lo = 0, hi = 0;  // final bracket
    std::size_t iterations = 0;
};

// Bisection for a sign change of fn on [lo, hi], with fn(lo) > 0 > fn(hi).
// Splits at the geometric mean while the bracket spans orders of magnitude,
// which keeps the iteration count low for roots close to zero.
template <class Fn>
RootResult bisect_decreasing(Fn&& fn, double lo, double hi, double rel_tol = 1e-13,
                             std::size_t max_iter = 200) {
    if (!(lo < hi)) throw std::invalid_argument("empty bracket");
    if (!(fn(lo) > 0) || !(fn(hi) < 0)) throw std::domain_error("bracket has no + to - sign change");
    RootResult res;
    for (; res.iterations < max_iter; ++res.iterations) {
        if (hi - lo <= rel_tol * hi) break;
        const double mid = (lo > 0 && hi > 4 * lo) ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (fn(mid) > 0) lo = mid; else hi = mid;
    }
    res.lo = lo;
    res.hi = hi;
    res.x = 0.5 * (lo + hi);
    return res;
}

struct MinimumResult {
    double x = 0;
    double value = 0;
};

// Golden-section search for a minimum of a unimodal fn on [a, b].
template <class Fn>
MinimumResult golden_section_minimize(Fn&& fn, double a, double b, double rel_tol = 1e-12,
                                      std::size_t max_iter = 300) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
    double fc = fn(c), fd = fn(d);
    for (std::size_t i = 0; i < max_iter && (b - a) > rel_tol * std::fabs(c) + 1e-300; ++i) {
        if (fc < fd) {
            b = d; d = c; fd = fc;
            c = b - inv_phi * (b - a);
            fc = fn(c);
        } else {
            a = c; c = d; fc = fd;
            d = a + inv_phi * (b - a);
            fd = fn(d);
        }
    }
    return fc < fd ? MinimumResult{c, fc} : MinimumResult{d, fd};
}

}  // namespace hypercolor
