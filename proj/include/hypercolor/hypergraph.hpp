#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "hypercolor/rng.hpp"

namespace hypercolor {

using Vertex = std::uint32_t;

// r-uniform hypergraph on vertices 1..n. Edges keep the vertex order in
// which they were drawn; comparisons treat them as multisets.
class Hypergraph {
public:
    Hypergraph(std::size_t n, std::size_t r) : n_(n), r_(r) {
        if (n == 0) throw std::invalid_argument("hypergraph needs at least one vertex");
        if (r == 0) throw std::invalid_argument("edge size must be positive");
        if (n > std::numeric_limits<Vertex>::max())
            throw std::invalid_argument("vertex count exceeds label range");
    }

    static Hypergraph from_edges(std::size_t n, std::size_t r,
                                 const std::vector<std::vector<Vertex>>& edges) {
        Hypergraph h(n, r);
        h.reserve(edges.size());
        for (const auto& e : edges) h.add_edge(e);
        return h;
    }

    std::size_t n() const noexcept { return n_; }
    std::size_t r() const noexcept { return r_; }
    std::size_t edge_count() const noexcept { return labels_.size() / r_; }
    bool simple() const noexcept { return simple_; }
    void set_simple(bool s) noexcept { simple_ = s; }

    std::span<const Vertex> edge(std::size_t i) const {
        return {labels_.data() + i * r_, r_};
    }
    const std::vector<Vertex>& labels() const noexcept { return labels_; }

    void reserve(std::size_t edges) { labels_.reserve(edges * r_); }

    void add_edge(std::span<const Vertex> e) {
        if (e.size() != r_) throw std::invalid_argument("edge has wrong size");
        for (Vertex v : e)
            if (v < 1 || v > n_) throw std::invalid_argument("vertex label out of range");
        labels_.insert(labels_.end(), e.begin(), e.end());
    }
    void add_edge(std::initializer_list<Vertex> e) {
        add_edge(std::span<const Vertex>(e.begin(), e.size()));
    }
    void add_edge(const std::vector<Vertex>& e) { add_edge(std::span<const Vertex>(e)); }

    // Unchecked append used by the samplers, which only produce valid labels.
    void push_label(Vertex v) { labels_.push_back(v); }

    std::vector<Vertex> sorted_edge(std::size_t i) const {
        auto e = edge(i);
        std::vector<Vertex> out(e.begin(), e.end());
        std::sort(out.begin(), out.end());
        return out;
    }

private:
    std::size_t n_;
    std::size_t r_;
    std::vector<Vertex> labels_;
    bool simple_ = false;
};

struct BadEdgeReport {
    std::vector<std::size_t> defective;
    std::vector<std::size_t> duplicate;

    bool empty() const noexcept { return defective.empty() && duplicate.empty(); }
    std::size_t bad_count() const {
        std::vector<std::size_t> all(defective);
        all.insert(all.end(), duplicate.begin(), duplicate.end());
        std::sort(all.begin(), all.end());
        return static_cast<std::size_t>(std::unique(all.begin(), all.end()) - all.begin());
    }
};

// C(n, r), saturating at the maximum of uint64.
inline std::uint64_t binomial_saturating(std::uint64_t n, std::uint64_t r) noexcept {
    constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
    if (r > n) return 0;
    r = std::min(r, n - r);
    __uint128_t acc = 1;
    for (std::uint64_t i = 1; i <= r; ++i) {
        acc = acc * (n - r + i) / i;
        if (acc > kMax) return kMax;
    }
    return static_cast<std::uint64_t>(acc);
}

namespace detail {

// Table of C(c, j) for c < n, j <= r, saturating.
class BinomialTable {
public:
    BinomialTable(std::size_t n, std::size_t r) : r_(r), t_((n + 1) * (r + 1), 0) {
        constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
        for (std::size_t c = 0; c <= n; ++c) {
            at(c, 0) = 1;
            for (std::size_t j = 1; j <= std::min(c, r); ++j) {
                std::uint64_t a = at(c - 1, j - 1), b = j <= c - 1 ? at(c - 1, j) : 0;
                at(c, j) = (a > kMax - b) ? kMax : a + b;
            }
        }
    }
    std::uint64_t operator()(std::size_t c, std::size_t j) const { return t_[c * (r_ + 1) + j]; }

private:
    std::uint64_t& at(std::size_t c, std::size_t j) { return t_[c * (r_ + 1) + j]; }
    std::size_t r_;
    std::vector<std::uint64_t> t_;
};

// Decodes `rank` in the combinatorial number system into an increasing
// r-subset of {1..n}; ranks 0..C(n,r)-1 cover every subset once.
inline void unrank_subset(std::uint64_t rank, std::size_t n, std::size_t r,
                          const BinomialTable& C, Vertex* out) {
    std::size_t hi = n;
    for (std::size_t i = r; i >= 1; --i) {
        // largest c < hi with C(c, i) <= rank
        std::size_t lo = i - 1, top = hi - 1;
        while (lo < top) {
            std::size_t mid = (lo + top + 1) / 2;
            if (C(mid, i) <= rank) lo = mid; else top = mid - 1;
        }
        rank -= C(lo, i);
        out[i - 1] = static_cast<Vertex>(lo + 1);
        hi = lo;
    }
}

struct EdgeHash {
    std::size_t operator()(const std::vector<Vertex>& e) const noexcept {
        std::uint64_t h = 0x84222325cbf29ce4ULL;
        for (Vertex v : e) h = mix64(h ^ v);
        return static_cast<std::size_t>(h);
    }
};

}  // namespace detail

// G*(n,r,m): rm independent uniform labels cut into consecutive r-chunks.
inline Hypergraph sample_multi(std::size_t n, std::size_t r, std::size_t m, CounterRng& rng) {
    Hypergraph h(n, r);
    h.reserve(m);
    for (std::size_t i = 0; i < r * m; ++i)
        h.push_label(static_cast<Vertex>(rng.uniform_below(n) + 1));
    return h;
}

inline Hypergraph sample_multi(std::size_t n, std::size_t r, std::size_t m, Seed seed) {
    CounterRng rng(seed);
    return sample_multi(n, r, m, rng);
}

// G(n,r,m): m distinct r-subsets, uniformly among all such families.
inline Hypergraph sample_uniform(std::size_t n, std::size_t r, std::size_t m, CounterRng& rng) {
    const std::uint64_t N = binomial_saturating(n, r);
    if (m > N) throw std::invalid_argument("more edges requested than r-subsets exist");
    Hypergraph h(n, r);
    h.set_simple(true);
    h.reserve(m);
    if (m == 0) return h;

    if (N < std::numeric_limits<std::uint64_t>::max() && m > N / 2) {
        // Drop N - m ranks, keep the rest, then shuffle the edge order.
        detail::BinomialTable C(n, r);
        std::unordered_set<std::uint64_t> dropped;
        for (std::uint64_t want = N - m; dropped.size() < want;)
            dropped.insert(rng.uniform_below(N));
        std::vector<std::uint64_t> kept;
        kept.reserve(m);
        for (std::uint64_t i = 0; i < N; ++i)
            if (!dropped.count(i)) kept.push_back(i);
        for (std::size_t i = kept.size(); i > 1; --i)
            std::swap(kept[i - 1], kept[rng.uniform_below(i)]);
        std::vector<Vertex> e(r);
        for (auto rank : kept) {
            detail::unrank_subset(rank, n, r, C, e.data());
            for (Vertex v : e) h.push_label(v);
        }
        return h;
    }

    std::unordered_set<std::vector<Vertex>, detail::EdgeHash> seen;
    seen.reserve(m * 2);
    std::vector<Vertex> e;
    while (seen.size() < m) {
        // Floyd's method: uniform r-subset of [1..n].
        e.clear();
        for (std::size_t j = n - r; j < n; ++j) {
            auto t = static_cast<Vertex>(rng.uniform_below(j + 1) + 1);
            if (std::find(e.begin(), e.end(), t) == e.end()) e.push_back(t);
            else e.push_back(static_cast<Vertex>(j + 1));
        }
        std::sort(e.begin(), e.end());
        if (seen.insert(e).second)
            for (Vertex v : e) h.push_label(v);
    }
    return h;
}

inline Hypergraph sample_uniform(std::size_t n, std::size_t r, std::size_t m, Seed seed) {
    CounterRng rng(seed);
    return sample_uniform(n, r, m, rng);
}

// Ĝ(n,r,p): every r-subset independently with probability p, emitted in rank order.
inline Hypergraph sample_bernoulli(std::size_t n, std::size_t r, double p, CounterRng& rng) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("probability must lie in [0,1]");
    const std::uint64_t N = binomial_saturating(n, r);
    if (N == std::numeric_limits<std::uint64_t>::max())
        throw std::invalid_argument("too many r-subsets to index");
    Hypergraph h(n, r);
    h.set_simple(true);
    if (p == 0.0 || N == 0) return h;
    detail::BinomialTable C(n, r);
    std::vector<Vertex> e(r);
    auto emit = [&](std::uint64_t rank) {
        detail::unrank_subset(rank, n, r, C, e.data());
        for (Vertex v : e) h.push_label(v);
    };
    if (p == 1.0) {
        h.reserve(N);
        for (std::uint64_t i = 0; i < N; ++i) emit(i);
        return h;
    }
    // Geometric skips between successive present subsets.
    const double log_q = std::log1p(-p);
    std::uint64_t pos = 0;
    while (true) {
        double u = rng.uniform01();
        double skip = std::floor(std::log1p(-u) / log_q);
        if (skip >= static_cast<double>(N - pos)) break;
        pos += static_cast<std::uint64_t>(skip);
        emit(pos);
        if (++pos >= N) break;
    }
    return h;
}

inline Hypergraph sample_bernoulli(std::size_t n, std::size_t r, double p, Seed seed) {
    CounterRng rng(seed);
    return sample_bernoulli(n, r, p, rng);
}

inline BadEdgeReport classify_bad_edges(const Hypergraph& h) {
    const std::size_t m = h.edge_count(), r = h.r();
    std::vector<Vertex> sorted(h.labels());
    BadEdgeReport rep;
    for (std::size_t i = 0; i < m; ++i) {
        auto first = sorted.begin() + static_cast<std::ptrdiff_t>(i * r);
        std::sort(first, first + static_cast<std::ptrdiff_t>(r));
        if (std::adjacent_find(first, first + static_cast<std::ptrdiff_t>(r)) !=
            first + static_cast<std::ptrdiff_t>(r))
            rep.defective.push_back(i);
    }
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    auto less = [&](std::size_t a, std::size_t b) {
        auto pa = sorted.begin() + static_cast<std::ptrdiff_t>(a * r);
        auto pb = sorted.begin() + static_cast<std::ptrdiff_t>(b * r);
        if (std::lexicographical_compare(pa, pa + static_cast<std::ptrdiff_t>(r), pb,
                                         pb + static_cast<std::ptrdiff_t>(r)))
            return true;
        if (std::lexicographical_compare(pb, pb + static_cast<std::ptrdiff_t>(r), pa,
                                         pa + static_cast<std::ptrdiff_t>(r)))
            return false;
        return a < b;
    };
    std::sort(order.begin(), order.end(), less);
    for (std::size_t i = 1; i < m; ++i) {
        auto pa = sorted.begin() + static_cast<std::ptrdiff_t>(order[i - 1] * r);
        auto pb = sorted.begin() + static_cast<std::ptrdiff_t>(order[i] * r);
        if (std::equal(pa, pa + static_cast<std::ptrdiff_t>(r), pb)) rep.duplicate.push_back(order[i]);
    }
    std::sort(rep.duplicate.begin(), rep.duplicate.end());
    return rep;
}

inline std::vector<Vertex> isolated_vertices(const Hypergraph& h) {
    std::vector<char> seen(h.n() + 1, 0);
    for (Vertex v : h.labels()) seen[v] = 1;
    std::vector<Vertex> out;
    for (std::size_t v = 1; v <= h.n(); ++v)
        if (!seen[v]) out.push_back(static_cast<Vertex>(v));
    return out;
}

// Limit of P(no defective or duplicate edge) in G*(n,r,cn) as n grows.
inline double asymptotic_no_bad_probability(std::size_t r, double c) {
    if (r < 2) throw std::invalid_argument("edge size must be at least 2");
    if (!(c >= 0.0)) throw std::invalid_argument("density must be nonnegative");
    if (r == 2) return std::exp(-c * (c + 1.0));
    return std::exp(-c * static_cast<double>(r * (r - 1)) / 2.0);
}

// E[#isolated vertices] in G*(n,r,m) = n (1 - 1/n)^{rm}.
inline double expected_isolated(std::size_t n, std::size_t r, std::size_t m) {
    const double nn = static_cast<double>(n);
    return nn * std::exp(static_cast<double>(r * m) * std::log1p(-1.0 / nn));
}

}  // namespace hypercolor
