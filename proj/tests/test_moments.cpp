#include <gtest/gtest.h>

#include <cmath>

#include "hypercolor/moments.hpp"
#include "oracles.hpp"

using namespace hypercolor;

namespace {

Rational exact_of(const MomentEstimate& e) {
    EXPECT_TRUE(e.exact.has_value());
    return e.exact.value_or(Rational(-1));
}

}  // namespace

TEST(ExpectedZ, Examples) {
    EXPECT_EQ(exact_of(expected_Z(4, 2, 2, 1)), Rational(3));
    EXPECT_EQ(exact_of(expected_Z(4, 2, 2, 0)), Rational(6));
    EXPECT_EQ(exact_of(expected_Z(2, 2, 2, 0)), Rational(2));
    EXPECT_THROW(expected_Z(5, 2, 2, 1), std::invalid_argument);
}

TEST(ExpectedZ2, Examples) {
    EXPECT_EQ(exact_of(expected_Z2_exact(4, 2, 2, 1)), Rational(12));
    EXPECT_EQ(exact_of(expected_Z2_exact(4, 2, 2, 0)), Rational(36));
    EXPECT_EQ(exact_of(expected_Z2_exact(2, 2, 2, 0)), Rational(4));
}

TEST(Moments, MatchEnumerationSmall) {
    for (int n : {2, 3, 4})
        for (int k : {1, 2, 3, 4}) {
            if (n % k) continue;
            for (int r = 2; r <= 4; ++r)
                for (int m = 0; r * m <= 6; ++m) {
                    const auto [z, z2] = oracle::moments_by_enumeration(n, r, k, m);
                    EXPECT_EQ(exact_of(expected_Z(n, r, k, m)), z) << n << ' ' << r << ' ' << k << ' ' << m;
                    EXPECT_EQ(exact_of(expected_Z2_exact(n, r, k, m)), z2) << n << ' ' << r << ' ' << k << ' ' << m;
                }
        }
}

TEST(Moments, LogValuesAgreeWithExact) {
    for (auto [n, r, k, m] : {std::array<std::size_t, 4>{6, 3, 2, 5}, {9, 3, 3, 7}, {8, 2, 4, 3}, {12, 4, 2, 20}}) {
        const auto z = expected_Z(n, r, k, m);
        const auto z2 = expected_Z2_exact(n, r, k, m);
        const auto lz = expected_Z(n, r, k, m, Arithmetic::log_domain);
        const auto lz2 = expected_Z2_exact(n, r, k, m, Arithmetic::log_domain);
        EXPECT_FALSE(lz.exact.has_value());
        EXPECT_NEAR(static_cast<double>(lz.log_value), std::log(z.exact->convert_to<double>()), 1e-12);
        EXPECT_NEAR(static_cast<double>(lz2.log_value), std::log(z2.exact->convert_to<double>()), 1e-12);
    }
}

TEST(Moments, CauchySchwarz) {
    for (std::size_t n : {4, 6, 8, 12})
        for (std::size_t k : {2, 3, 4}) {
            if (n % k) continue;
            for (std::size_t r : {2, 3, 4})
                for (std::size_t m : {0, 1, 3, 8}) {
                    const auto z = exact_of(expected_Z(n, r, k, m));
                    EXPECT_GE(exact_of(expected_Z2_exact(n, r, k, m)), z * z);
                }
        }
}

TEST(Moments, CentralSummandIsPolynomiallySmall) {
    for (std::size_t n : {100, 500, 1000, 2000}) {
        const std::size_t m = n;  // c = 1, r = 3, k = 2
        OverlapMatrix center{2, {static_cast<std::uint32_t>(n / 4), static_cast<std::uint32_t>(n / 4),
                                 static_cast<std::uint32_t>(n / 4), static_cast<std::uint32_t>(n / 4)}};
        if (n % 4) continue;
        const long double ls = log_overlap_summand(center, n, 3, m);
        const long double lz = expected_Z(n, 3, 2, m).log_value;
        const long double lz2 = expected_Z2_exact(n, 3, 2, m).log_value;
        EXPECT_LE(ls, lz2 + 1e-12L);
        const long double ratio = ls - 2 * lz;
        EXPECT_LE(ratio, 0.0L);
        EXPECT_GE(ratio, -4 * std::log(static_cast<long double>(n)));
    }
}

TEST(Moments, ExactGuard) {
    EXPECT_THROW(expected_Z2_exact(120, 3, 4, 10), GuardError);
}

TEST(EvalF, Examples) {
    const Eigen::MatrixXd J3 = Eigen::MatrixXd::Constant(3, 3, 1.0 / 9);
    EXPECT_NEAR(eval_F(J3, 1.0, 2), 2 * std::log(3.0) + 2 * std::log(2.0 / 3), 1e-14);
    const Eigen::MatrixXd J2 = Eigen::MatrixXd::Constant(2, 2, 0.25);
    EXPECT_NEAR(eval_F(J2, 0.0, 3), 2 * std::log(2.0), 1e-14);
    Eigen::MatrixXd E = Eigen::MatrixXd::Zero(3, 3);
    E(1, 2) = 1;
    EXPECT_EQ(eval_F(E, 0.0, 2), 0.0);
}

TEST(Laplace, Constants) {
    const auto a = laplace_constants(3, 3, 8.0);
    EXPECT_NEAR(a.alpha, 0.25, 1e-15);
    EXPECT_NEAR(a.ratio_limit, 0.0625, 1e-15);
    const auto b = laplace_constants(2, 2, 0.0);
    EXPECT_EQ(b.alpha, 1.0);
    EXPECT_NEAR(b.hessian_det, 4.0, 1e-15);
    EXPECT_THROW(laplace_constants(3, 2, 1.5), std::domain_error);
    EXPECT_THROW(log_asymptotic_Z2(1000, 3, 2, 1.5L), std::domain_error);
}

TEST(Laplace, HessianMatchesClosedForm) {
    EXPECT_NEAR(hessian_numeric_det(2, 2, 0.0), 4.0, 1e-6);
    EXPECT_NEAR(hessian_numeric_det(3, 3, 1.0) / std::pow(9 * (1 - 6.0 / 64), 4), 1.0, 1e-4);
    EXPECT_NEAR(hessian_numeric_det(2, 3, 1.0) / std::pow(9 * 0.5, 4), 1.0, 1e-4);
    for (std::size_t r : {2, 3, 4})
        for (std::size_t k : {2, 3}) {
            const double K = std::pow(static_cast<double>(k), static_cast<double>(r - 1));
            const double c = 0.5 * (K - 1) * (K - 1) / static_cast<double>(r * (r - 1));
            const double closed = laplace_constants(r, k, c).hessian_det;
            EXPECT_NEAR(hessian_numeric_det(r, k, c) / closed, 1.0, 1e-4) << r << ' ' << k;
        }
}

TEST(Laplace, TangentBasisIsDoublyStochasticDirection) {
    for (std::size_t k : {2, 3, 4}) {
        const auto U = tangent_basis(k);
        EXPECT_EQ(U.cols(), static_cast<Eigen::Index>((k - 1) * (k - 1)));
        for (Eigen::Index c = 0; c < U.cols(); ++c)
            for (std::size_t i = 0; i < k; ++i) {
                double row = 0, col = 0;
                for (std::size_t j = 0; j < k; ++j) {
                    row += U(static_cast<Eigen::Index>(i * k + j), c);
                    col += U(static_cast<Eigen::Index>(j * k + i), c);
                }
                EXPECT_EQ(row, 0.0);
                EXPECT_EQ(col, 0.0);
            }
        EXPECT_NEAR((U.transpose() * U).determinant(), std::pow(static_cast<double>(k), 2.0 * (k - 1)), 1e-9);
    }
}

TEST(Laplace, RatioConverges) {
    const long double r1 = expected_Z2_exact(1000, 3, 2, 1000).log_value - log_asymptotic_Z2(1000, 3, 2, 1.0L);
    const long double r2 = expected_Z2_exact(2000, 3, 2, 2000).log_value - log_asymptotic_Z2(2000, 3, 2, 1.0L);
    const double q1 = std::exp(static_cast<double>(r1)), q2 = std::exp(static_cast<double>(r2));
    EXPECT_GE(q1, 0.9);
    EXPECT_LE(q1, 1.1);
    EXPECT_LT(std::fabs(q2 - 1), std::fabs(q1 - 1));
    const double second = std::exp(static_cast<double>(2 * expected_Z(2000, 3, 2, 2000).log_value -
                                                       expected_Z2_exact(2000, 3, 2, 2000).log_value));
    EXPECT_NEAR(second, laplace_constants(3, 2, 1.0).ratio_limit, 0.05);
}

TEST(BlockGram, Examples) {
    EXPECT_EQ(block_gram_det(1, 1), BigInt(4));
    EXPECT_EQ(block_gram_det(2, 2), BigInt(81));
    EXPECT_EQ(block_gram_det(3, 2), BigInt(432));
    for (std::size_t p = 1; p <= 6; ++p)
        for (std::size_t q = 1; q <= 6; ++q) EXPECT_EQ(block_gram_det(p, q), dense_block_gram_det(p, q));
}

TEST(BlockGram, BareissOnKnownMatrix) {
    std::vector<std::vector<BigInt>> M = {{2, -1, 0}, {-1, 2, -1}, {0, -1, 2}};
    EXPECT_EQ(bareiss_determinant(M), BigInt(4));
    std::vector<std::vector<BigInt>> S = {{0, 1}, {1, 0}};
    EXPECT_EQ(bareiss_determinant(S), BigInt(-1));
}
