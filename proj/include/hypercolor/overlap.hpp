#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "hypercolor/errors.hpp"

namespace hypercolor {

// k x k nonnegative integer matrix with every row and column summing to n/k.
struct OverlapMatrix {
    std::size_t k = 0;
    std::vector<std::uint32_t> entries;  // row-major

    std::uint32_t operator()(std::size_t i, std::size_t j) const { return entries[i * k + j]; }
    std::uint32_t& operator()(std::size_t i, std::size_t j) { return entries[i * k + j]; }
};

inline constexpr std::uint64_t kOverlapGuard = 10'000'000;

// Upper bound on |D|: each of the (k-1)^2 free entries lies in [0, n/k].
inline double overlap_count_bound(std::size_t n, std::size_t k) {
    return std::pow(static_cast<double>(n / k + 1), static_cast<double>((k - 1) * (k - 1)));
}

// Calls visit(const OverlapMatrix&) for each matrix in D in a fixed order.
// The first k-1 rows are chosen freely; the last row is forced by the column sums.
template <class Visitor>
std::uint64_t for_each_overlap_matrix(std::size_t n, std::size_t k, Visitor&& visit,
                                      std::uint64_t guard = kOverlapGuard) {
    if (k == 0 || n % k != 0) throw std::invalid_argument("k must divide n");
    const auto s = static_cast<std::uint32_t>(n / k);
    OverlapMatrix L{k, std::vector<std::uint32_t>(k * k, 0)};
    std::vector<std::uint32_t> col_left(k, s);
    std::uint64_t count = 0;
    bool counting = overlap_count_bound(n, k) > static_cast<double>(guard);

    auto fill = [&](auto&& self, std::size_t i, std::size_t j, std::uint32_t row_left) -> void {
        if (i + 1 == k) {
            for (std::size_t c = 0; c < k; ++c) L(i, c) = col_left[c];
            if (counting) {
                if (++count > guard) throw GuardError("overlap enumeration exceeds guard");
                return;
            }
            ++count;
            visit(static_cast<const OverlapMatrix&>(L));
            return;
        }
        if (j + 1 == k) {
            if (row_left > col_left[j]) return;
            L(i, j) = row_left;
            col_left[j] -= row_left;
            self(self, i + 1, 0, s);
            col_left[j] += row_left;
            return;
        }
        // the remaining columns of this row must be able to absorb what is left
        std::uint32_t tail_cap = 0;
        for (std::size_t c = j + 1; c < k; ++c) tail_cap += col_left[c];
        const std::uint32_t hi = std::min(row_left, col_left[j]);
        const std::uint32_t lo = row_left > tail_cap ? row_left - tail_cap : 0;
        for (std::uint32_t a = lo; a <= hi; ++a) {
            L(i, j) = a;
            col_left[j] -= a;
            self(self, i, j + 1, row_left - a);
            col_left[j] += a;
        }
    };
    if (k == 1) {
        L(0, 0) = s;
        visit(static_cast<const OverlapMatrix&>(L));
        return 1;
    }
    if (counting) {
        // Dry run first so that no visit happens when the guard trips.
        fill(fill, 0, 0, s);
        counting = false;
        count = 0;
    }
    fill(fill, 0, 0, s);
    return count;
}

inline std::vector<OverlapMatrix> enumerate_overlap_matrices(std::size_t n, std::size_t k) {
    std::vector<OverlapMatrix> out;
    for_each_overlap_matrix(n, k, [&](const OverlapMatrix& L) { out.push_back(L); });
    return out;
}

}  // namespace hypercolor
