#pragma once

// Independent brute-force references used by the unit and acceptance tests.
// Nothing here calls into the library's counting or moment code.

#include <cstdint>
#include <functional>
#include <numeric>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace oracle {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// All colorings of [0, n) with exactly n/k vertices per color (colors 0..k-1).
inline std::vector<std::vector<int>> balanced_colorings(int n, int k) {
    std::vector<std::vector<int>> out;
    std::vector<int> col(n), used(k, 0);
    std::function<void(int)> rec = [&](int v) {
        if (v == n) {
            out.push_back(col);
            return;
        }
        for (int c = 0; c < k; ++c) {
            if (used[c] == n / k) continue;
            col[v] = c;
            ++used[c];
            rec(v + 1);
            --used[c];
        }
    };
    rec(0);
    return out;
}

// Averages of Z and Z^2 over every v-vector in [0,n)^{rm}, where Z counts the
// balanced k-colorings with no edge (consecutive r-block) in one color.
inline std::pair<Rational, Rational> moments_by_enumeration(int n, int r, int k, int m) {
    const auto cols = balanced_colorings(n, k);
    const int len = r * m;
    std::vector<int> v(len, 0);
    BigInt sum_z = 0, sum_z2 = 0, total = 0;
    while (true) {
        std::int64_t z = 0;
        for (const auto& col : cols) {
            bool ok = true;
            for (int e = 0; e < m && ok; ++e) {
                bool mono = true;
                for (int j = 1; j < r; ++j)
                    if (col[v[e * r + j]] != col[v[e * r]]) mono = false;
                if (mono) ok = false;
            }
            z += ok;
        }
        sum_z += z;
        sum_z2 += z * z;
        ++total;
        int i = 0;
        while (i < len && ++v[i] == n) v[i++] = 0;
        if (i == len) break;
    }
    return {Rational(sum_z, total), Rational(sum_z2, total)};
}

// Smallest k admitting a proper coloring of a simple graph, by trying all k^n maps.
inline int chromatic_by_sweep(int n, const std::vector<std::pair<int, int>>& edges) {
    for (int k = 1;; ++k) {
        std::vector<int> col(n, 0);
        while (true) {
            bool ok = true;
            for (auto [a, b] : edges)
                if (col[a] == col[b]) { ok = false; break; }
            if (ok) return k;
            int i = 0;
            while (i < n && ++col[i] == k) col[i++] = 0;
            if (i == n) break;
        }
    }
}

// Number of k-colorings (all k^n maps, 0-based) with no monochromatic edge.
inline std::uint64_t count_weak_colorings(int n, int k, const std::vector<std::vector<int>>& edges) {
    std::uint64_t count = 0;
    std::vector<int> col(n, 0);
    while (true) {
        bool ok = true;
        for (const auto& e : edges) {
            bool mono = true;
            for (int v : e)
                if (col[v] != col[e[0]]) mono = false;
            if (mono) { ok = false; break; }
        }
        count += ok;
        int i = 0;
        while (i < n && ++col[i] == k) col[i++] = 0;
        if (i == n) break;
    }
    return count;
}

}  // namespace oracle
