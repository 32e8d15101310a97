#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>

#include "hypercolor/errors.hpp"
#include "hypercolor/overlap.hpp"

namespace hypercolor {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// A moment of the balanced-coloring count: exact rational when it was
// computed, natural log of the value always, log of the asymptotic form
// (NaN where that form is undefined).
struct MomentEstimate {
    std::size_t n = 0, r = 0, k = 0, m = 0;
    std::optional<Rational> exact;
    long double log_value = 0;
    long double log_asymptotic = std::numeric_limits<long double>::quiet_NaN();

    long double value() const { return std::exp(log_value); }
    long double asymptotic() const { return std::exp(log_asymptotic); }
};

struct LaplaceConstants {
    double alpha = 0;
    double lattice_det = 0;
    double hessian_det = 0;
    double ratio_limit = 0;
};

enum class Arithmetic { automatic, exact, log_domain };

namespace detail {

inline BigInt ipow(std::uint64_t base, std::size_t e) {
    return boost::multiprecision::pow(BigInt(base), static_cast<unsigned>(e));
}

inline BigInt factorial(std::size_t n) {
    BigInt f = 1;
    for (std::size_t i = 2; i <= n; ++i) f *= i;
    return f;
}

// Exact arithmetic is used while the integers involved stay modest.
inline bool prefer_exact(std::size_t n, std::size_t r, std::size_t m, Arithmetic a) {
    if (a == Arithmetic::exact) return true;
    if (a == Arithmetic::log_domain) return false;
    return n <= 64 && static_cast<double>(m) * static_cast<double>(r) * std::log2(n + 1.0) <= 4096;
}

inline long double log_k_pow(std::size_t k, std::size_t e) {
    return static_cast<long double>(e) * std::log(static_cast<long double>(k));
}

// Streaming log-sum-exp with Neumaier-compensated accumulation.
class LogSumExp {
public:
    void add(long double t) {
        if (t == -std::numeric_limits<long double>::infinity()) return;
        if (empty_) { max_ = t; sum_ = 1; comp_ = 0; empty_ = false; return; }
        if (t > max_) {
            const long double s = std::exp(max_ - t);
            sum_ *= s;
            comp_ *= s;
            max_ = t;
            accumulate(1);
        } else {
            accumulate(std::exp(t - max_));
        }
    }
    long double value() const {
        if (empty_) return -std::numeric_limits<long double>::infinity();
        return max_ + std::log(sum_ + comp_);
    }

private:
    void accumulate(long double x) {
        const long double t = sum_ + x;
        if (std::fabs(sum_) >= std::fabs(x)) comp_ += (sum_ - t) + x;
        else comp_ += (x - t) + sum_;
        sum_ = t;
    }
    bool empty_ = true;
    long double max_ = 0, sum_ = 0, comp_ = 0;
};

inline void check_divides(std::size_t n, std::size_t k) {
    if (k == 0 || n == 0 || n % k != 0) throw std::invalid_argument("k must divide n");
}

}  // namespace detail

// ln of the Stirling form k^{k/2} (2 pi n)^{-(k-1)/2} k^n (1 - 1/k^{r-1})^m.
inline long double log_asymptotic_Z(std::size_t n, std::size_t r, std::size_t k, long double m) {
    const long double lk = std::log(static_cast<long double>(k));
    const long double K = std::pow(static_cast<long double>(k), static_cast<long double>(r - 1));
    const long double two_pi_n = 2 * std::numbers::pi_v<long double> * n;
    return 0.5L * k * lk - 0.5L * (k - 1) * std::log(two_pi_n) + n * lk + m * std::log1p(-1 / K);
}

inline MomentEstimate expected_Z(std::size_t n, std::size_t r, std::size_t k, std::size_t m,
                                 Arithmetic arith = Arithmetic::automatic) {
    detail::check_divides(n, k);
    if (r < 2) throw std::invalid_argument("edge size must be at least 2");
    MomentEstimate est;
    est.n = n;
    est.r = r;
    est.k = k;
    est.m = m;
    const std::size_t s = n / k;
    const long double K = std::pow(static_cast<long double>(k), static_cast<long double>(r - 1));
    est.log_value = std::lgamma(static_cast<long double>(n + 1)) -
                    k * std::lgamma(static_cast<long double>(s + 1)) + m * std::log1p(-1 / K);
    est.log_asymptotic = log_asymptotic_Z(n, r, k, static_cast<long double>(m));
    if (detail::prefer_exact(n, r, m, arith)) {
        const BigInt Kb = detail::ipow(k, r - 1);
        BigInt multinomial = detail::factorial(n) / boost::multiprecision::pow(detail::factorial(s),
                                                                               static_cast<unsigned>(k));
        est.exact = Rational(multinomial * boost::multiprecision::pow(BigInt(Kb - 1), static_cast<unsigned>(m)),
                             boost::multiprecision::pow(Kb, static_cast<unsigned>(m)));
    }
    return est;
}

// ln of n!/prod l_ij! (1 - 2/k^{r-1} + sum (l_ij/n)^r)^m for one overlap matrix.
inline long double log_overlap_summand(const OverlapMatrix& L, std::size_t n, std::size_t r,
                                       std::size_t m) {
    const std::size_t k = L.k;
    const long double K = std::pow(static_cast<long double>(k), static_cast<long double>(r - 1));
    long double t = std::lgamma(static_cast<long double>(n + 1));
    long double power_sum = 0;
    for (auto l : L.entries) {
        t -= std::lgamma(static_cast<long double>(l) + 1);
        power_sum += std::pow(static_cast<long double>(l) / n, static_cast<long double>(r));
    }
    const long double base = 1 - 2 / K + power_sum;
    if (m == 0) return t;
    if (base <= 0) return -std::numeric_limits<long double>::infinity();
    return t + m * std::log(base);
}

// ln of the second moment's asymptotic form; requires alpha > 0.
inline long double log_asymptotic_Z2(std::size_t n, std::size_t r, std::size_t k, long double c) {
    const long double K = std::pow(static_cast<long double>(k), static_cast<long double>(r - 1));
    const long double alpha = 1 - c * r * (r - 1) / ((K - 1) * (K - 1));
    if (!(alpha > 0)) throw std::domain_error("alpha is not positive; Laplace form undefined");
    const long double lk = std::log(static_cast<long double>(k));
    const long double two_pi_n = 2 * std::numbers::pi_v<long double> * n;
    const long double kk = static_cast<long double>((k - 1) * (k - 1));
    return k * lk - (k - 1) * std::log(two_pi_n) - 0.5L * kk * std::log(alpha) +
           2 * n * (lk + c * std::log1p(-1 / K));
}

inline long double asymptotic_Z2(std::size_t n, std::size_t r, std::size_t k, long double c) {
    detail::check_divides(n, k);
    return std::exp(log_asymptotic_Z2(n, r, k, c));
}

inline MomentEstimate expected_Z2_exact(std::size_t n, std::size_t r, std::size_t k, std::size_t m,
                                        Arithmetic arith = Arithmetic::automatic) {
    detail::check_divides(n, k);
    if (r < 2) throw std::invalid_argument("edge size must be at least 2");
    MomentEstimate est;
    est.n = n;
    est.r = r;
    est.k = k;
    est.m = m;
    const bool exact = detail::prefer_exact(n, r, m, arith);

    detail::LogSumExp lse;
    BigInt numer_sum = 0;
    BigInt n_fact, Kb, nr;
    if (exact) {
        n_fact = detail::factorial(n);
        Kb = detail::ipow(k, r - 1);
        nr = detail::ipow(n, r);
    }
    for_each_overlap_matrix(n, k, [&](const OverlapMatrix& L) {
        lse.add(log_overlap_summand(L, n, r, m));
        if (!exact) return;
        // base = (K n^r - 2 n^r + K sum l^r) / (K n^r)
        BigInt coef = n_fact, power_sum = 0;
        for (auto l : L.entries) {
            coef /= detail::factorial(l);
            power_sum += detail::ipow(l, r);
        }
        BigInt base = Kb * nr - 2 * nr + Kb * power_sum;
        numer_sum += coef * boost::multiprecision::pow(base, static_cast<unsigned>(m));
    });
    est.log_value = lse.value();
    if (exact)
        est.exact = Rational(numer_sum, boost::multiprecision::pow(BigInt(Kb * nr), static_cast<unsigned>(m)));
    try {
        est.log_asymptotic = log_asymptotic_Z2(n, r, k, static_cast<long double>(m) / n);
    } catch (const std::domain_error&) {
    }
    return est;
}

// F(X) = -sum x ln x + c ln(1 - 2/k^{r-1} + sum x^r), with 0 ln 0 = 0.
template <class Real = long double>
Real eval_F(const Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>& X, Real c, std::size_t r) {
    const auto k = static_cast<std::size_t>(X.rows());
    if (X.cols() != X.rows()) throw std::invalid_argument("F needs a square matrix");
    const Real K = std::pow(static_cast<Real>(k), static_cast<Real>(r - 1));
    Real entropy = 0, power_sum = 0;
    for (Eigen::Index i = 0; i < X.size(); ++i) {
        const Real x = X.data()[i];
        if (x < 0) throw std::invalid_argument("F needs nonnegative entries");
        if (x > 0) entropy -= x * std::log(x);
        power_sum += std::pow(x, static_cast<Real>(r));
    }
    if (c == 0) return entropy;
    return entropy + c * std::log(1 - 2 / K + power_sum);
}

inline double eval_F(const Eigen::MatrixXd& X, double c, std::size_t r) {
    return static_cast<double>(eval_F<long double>(X.cast<long double>(), c, r));
}

inline LaplaceConstants laplace_constants(std::size_t r, std::size_t k, double c) {
    const double K = std::pow(static_cast<double>(k), static_cast<double>(r - 1));
    const double alpha = 1.0 - c * static_cast<double>(r * (r - 1)) / ((K - 1) * (K - 1));
    if (!(alpha > 0)) throw std::domain_error("alpha is not positive; Laplace method inapplicable");
    const double kk = static_cast<double>((k - 1) * (k - 1));
    return {alpha, std::pow(static_cast<double>(k), static_cast<double>(k - 1)),
            std::pow(static_cast<double>(k * k) * alpha, kk), std::pow(alpha, kk / 2)};
}

// Basis of the tangent space of doubly stochastic perturbations:
// column (i,j) is E_ij - E_ik - E_kj + E_kk for i, j < k (0-based k-1).
inline Eigen::MatrixXd tangent_basis(std::size_t k) {
    const auto d = static_cast<Eigen::Index>(k * k), b = static_cast<Eigen::Index>((k - 1) * (k - 1));
    Eigen::MatrixXd U = Eigen::MatrixXd::Zero(d, b);
    auto idx = [k](std::size_t i, std::size_t j) { return static_cast<Eigen::Index>(i * k + j); };
    for (std::size_t i = 0; i + 1 < k; ++i)
        for (std::size_t j = 0; j + 1 < k; ++j) {
            const auto col = static_cast<Eigen::Index>(i * (k - 1) + j);
            U(idx(i, j), col) += 1;
            U(idx(i, k - 1), col) -= 1;
            U(idx(k - 1, j), col) -= 1;
            U(idx(k - 1, k - 1), col) += 1;
        }
    return U;
}

namespace detail {

inline Eigen::MatrixXd hessian_at_center(std::size_t r, std::size_t k, long double c, long double h) {
    using MatL = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
    const auto d = static_cast<Eigen::Index>(k * k);
    const MatL J0 = MatL::Constant(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k),
                                   1.0L / static_cast<long double>(k * k));
    auto F = [&](Eigen::Index a, long double da, Eigen::Index b, long double db) {
        MatL X = J0;
        X.data()[a] += da;
        X.data()[b] += db;
        return eval_F<long double>(X, c, r);
    };
    const long double f0 = eval_F<long double>(J0, c, r);
    Eigen::MatrixXd H(d, d);
    for (Eigen::Index a = 0; a < d; ++a) {
        H(a, a) = static_cast<double>((F(a, h, a, 0) - 2 * f0 + F(a, -h, a, 0)) / (h * h));
        for (Eigen::Index b = a + 1; b < d; ++b) {
            const long double v =
                (F(a, h, b, h) - F(a, h, b, -h) - F(a, -h, b, h) + F(a, -h, b, -h)) / (4 * h * h);
            H(a, b) = H(b, a) = static_cast<double>(v);
        }
    }
    return H;
}

}  // namespace detail

// det(U^T (-H) U) / det(U^T U) for the finite-difference Hessian H of F at
// the uniform matrix, refined by one Richardson step (h and h/2).
inline double hessian_numeric_det(std::size_t r, std::size_t k, double c, double h = 1e-5) {
    if (k < 2) throw std::invalid_argument("need at least two colors");
    const Eigen::MatrixXd H1 = detail::hessian_at_center(r, k, c, h);
    const Eigen::MatrixXd H2 = detail::hessian_at_center(r, k, c, h / 2);
    const Eigen::MatrixXd H = (4.0 * H2 - H1) / 3.0;
    const Eigen::MatrixXd U = tangent_basis(k);
    const Eigen::MatrixXd A = U.transpose() * (-H) * U;
    const Eigen::MatrixXd G = U.transpose() * U;
    return A.determinant() / G.determinant();
}

// Gram matrix of the p x q block family: (1 + [a = b]) (1 + [i = j]).
inline std::vector<std::vector<BigInt>> block_gram_matrix(std::size_t p, std::size_t q) {
    std::vector<std::vector<BigInt>> M(p * q, std::vector<BigInt>(p * q));
    for (std::size_t a = 0; a < p; ++a)
        for (std::size_t i = 0; i < q; ++i)
            for (std::size_t b = 0; b < p; ++b)
                for (std::size_t j = 0; j < q; ++j)
                    M[a * q + i][b * q + j] = (a == b ? 2 : 1) * (i == j ? 2 : 1);
    return M;
}

// Fraction-free Gaussian elimination; exact for integer matrices.
inline BigInt bareiss_determinant(std::vector<std::vector<BigInt>> M) {
    const std::size_t n = M.size();
    if (n == 0) return 1;
    BigInt prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (M[k][k] == 0) {
            std::size_t p = k + 1;
            while (p < n && M[p][k] == 0) ++p;
            if (p == n) return 0;
            std::swap(M[k], M[p]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j)
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) / prev;
            M[i][k] = 0;
        }
        prev = M[k][k];
    }
    return sign * M[n - 1][n - 1];
}

inline BigInt block_gram_det(std::size_t p, std::size_t q) {
    if (p < 1 || q < 1) throw std::invalid_argument("block dimensions must be positive");
    return detail::ipow(p + 1, q) * detail::ipow(q + 1, p);
}

inline BigInt dense_block_gram_det(std::size_t p, std::size_t q) {
    if (p < 1 || q < 1) throw std::invalid_argument("block dimensions must be positive");
    return bareiss_determinant(block_gram_matrix(p, q));
}

}  // namespace hypercolor
