#pragma once

#include <algorithm>
#include <bit>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "hypercolor/errors.hpp"
#include "hypercolor/hypergraph.hpp"

namespace hypercolor {

// Map from vertices 1..n to colors 1..k (stored 0-based by vertex).
struct KPartition {
    std::size_t k = 0;
    std::vector<std::uint32_t> assignment;

    KPartition() = default;
    KPartition(std::size_t k_, std::vector<std::uint32_t> a) : k(k_), assignment(std::move(a)) {
        for (auto c : assignment)
            if (c < 1 || c > k) throw std::invalid_argument("color out of range");
    }

    std::uint32_t color_of(Vertex v) const { return assignment[v - 1]; }

    std::vector<std::size_t> block_sizes() const {
        std::vector<std::size_t> s(k, 0);
        for (auto c : assignment) ++s[c - 1];
        return s;
    }
    bool balanced() const {
        const std::size_t n = assignment.size();
        for (auto s : block_sizes())
            if (s != n / k && s != (n + k - 1) / k) return false;
        return true;
    }
};

struct ColoringCount {
    std::uint64_t value = 0;
};

enum class ColorabilityVerdict { colorable, not_colorable, timed_out };

struct ChromaticNumber {
    enum class Kind { finite, uncolorable };
    Kind kind = Kind::finite;
    std::size_t value = 0;

    static ChromaticNumber of(std::size_t k) { return {Kind::finite, k}; }
    static ChromaticNumber never() { return {Kind::uncolorable, 0}; }
    bool uncolorable() const noexcept { return kind == Kind::uncolorable; }
    friend bool operator==(const ChromaticNumber&, const ChromaticNumber&) = default;
};

inline bool is_monochromatic(std::span<const Vertex> edge, const KPartition& sigma) {
    if (edge.empty()) return true;
    const auto c = sigma.color_of(edge[0]);
    return std::all_of(edge.begin(), edge.end(), [&](Vertex v) { return sigma.color_of(v) == c; });
}

inline bool is_coloring(const Hypergraph& h, const KPartition& sigma) {
    if (sigma.assignment.size() != h.n())
        throw std::invalid_argument("partition length differs from vertex count");
    for (std::size_t i = 0; i < h.edge_count(); ++i)
        if (is_monochromatic(h.edge(i), sigma)) return false;
    return true;
}

namespace detail {

// Distinct vertex supports (0-based, sorted) of all edges, deduplicated.
struct Supports {
    std::vector<std::vector<std::uint32_t>> edges;
    bool has_singleton = false;
};

inline Supports edge_supports(const Hypergraph& h) {
    Supports s;
    for (std::size_t i = 0; i < h.edge_count(); ++i) {
        auto e = h.edge(i);
        std::vector<std::uint32_t> sup;
        for (Vertex v : e) sup.push_back(v - 1);
        std::sort(sup.begin(), sup.end());
        sup.erase(std::unique(sup.begin(), sup.end()), sup.end());
        if (sup.size() == 1) s.has_singleton = true;
        s.edges.push_back(std::move(sup));
    }
    std::sort(s.edges.begin(), s.edges.end());
    s.edges.erase(std::unique(s.edges.begin(), s.edges.end()), s.edges.end());
    return s;
}

class TimeoutSignal {};

// Backtracking search for a weak k-coloring. When all but one vertex of an
// edge share a color, that color is removed from the last vertex's domain.
class ColoringSearch {
public:
    ColoringSearch(std::size_t n, std::size_t k, const std::vector<std::vector<std::uint32_t>>& edges,
                   std::optional<std::chrono::steady_clock::time_point> deadline)
        : n_(n), k_(k), edges_(edges), deadline_(deadline), inc_(n), color_(n, kNone),
          domain_(n, k >= 64 ? ~0ULL : ((1ULL << k) - 1)), assigned_(edges.size(), 0),
          counts_(edges.size() * k, 0) {
        for (std::size_t e = 0; e < edges_.size(); ++e)
            for (auto v : edges_[e]) inc_[v].push_back(static_cast<std::uint32_t>(e));
    }

    // Returns the coloring (0-based colors) if one exists.
    std::optional<std::vector<std::uint32_t>> solve() {
        for (std::size_t v = 0; v < n_; ++v)
            if (inc_[v].empty()) color_[v] = 0;
        if (!search(0)) return std::nullopt;
        return color_;
    }

private:
    static constexpr std::uint32_t kNone = 0xffffffffu;

    struct Removal {
        std::uint32_t vertex;
        std::uint32_t color;
    };

    bool assign(std::uint32_t v, std::uint32_t c) {
        color_[v] = c;
        bool ok = true;
        for (auto e : inc_[v]) {
            const auto& ev = edges_[e];
            const std::size_t sz = ev.size();
            ++assigned_[e];
            const auto cnt = ++counts_[e * k_ + c];
            if (!ok) continue;
            if (cnt == sz) { ok = false; continue; }
            if (assigned_[e] == sz - 1 && cnt == sz - 1) {
                for (auto u : ev) {
                    if (color_[u] != kNone) continue;
                    if (domain_[u] >> c & 1ULL) {
                        domain_[u] &= ~(1ULL << c);
                        trail_.push_back({u, c});
                        if (domain_[u] == 0) ok = false;
                    }
                    break;
                }
            }
        }
        return ok;
    }

    void unassign(std::uint32_t v, std::size_t trail_mark) {
        const auto c = color_[v];
        for (auto e : inc_[v]) {
            --assigned_[e];
            --counts_[e * k_ + c];
        }
        color_[v] = kNone;
        while (trail_.size() > trail_mark) {
            auto r = trail_.back();
            trail_.pop_back();
            domain_[r.vertex] |= 1ULL << r.color;
        }
    }

    std::uint32_t pick() const {
        std::uint32_t best = kNone;
        int best_dom = 65;
        std::size_t best_deg = 0;
        for (std::uint32_t v = 0; v < n_; ++v) {
            if (color_[v] != kNone) continue;
            int d = std::popcount(domain_[v]);
            if (d < best_dom || (d == best_dom && inc_[v].size() > best_deg)) {
                best = v;
                best_dom = d;
                best_deg = inc_[v].size();
            }
        }
        return best;
    }

    bool search(std::size_t used) {
        if (deadline_ && (++nodes_ & 1023) == 0 && std::chrono::steady_clock::now() > *deadline_)
            throw TimeoutSignal{};
        const auto v = pick();
        if (v == kNone) return true;
        // A fresh color is interchangeable with any other unused one.
        const std::size_t limit = std::min(k_, used + 1);
        for (std::uint32_t c = 0; c < limit; ++c) {
            if (!(domain_[v] >> c & 1ULL)) continue;
            const auto mark = trail_.size();
            if (assign(v, c) && search(std::max<std::size_t>(used, c + 1))) return true;
            unassign(v, mark);
        }
        return false;
    }

    std::size_t n_, k_;
    const std::vector<std::vector<std::uint32_t>>& edges_;
    std::optional<std::chrono::steady_clock::time_point> deadline_;
    std::vector<std::vector<std::uint32_t>> inc_;
    std::vector<std::uint32_t> color_;
    std::vector<std::uint64_t> domain_;
    std::vector<std::uint32_t> assigned_;
    std::vector<std::uint32_t> counts_;
    std::vector<Removal> trail_;
    std::uint64_t nodes_ = 0;
};

}  // namespace detail

// Largest n for which balanced colorings are counted exhaustively.
inline constexpr std::size_t kBalancedCountGuard = 20;

inline ColoringCount count_balanced_colorings(const Hypergraph& h, std::size_t k) {
    const std::size_t n = h.n();
    if (k == 0 || n % k != 0) throw std::invalid_argument("k must divide n");
    if (n > kBalancedCountGuard) throw GuardError("too many vertices for exhaustive counting");

    // Each edge is checked at its largest vertex, once the support is fully colored.
    auto sup = detail::edge_supports(h);
    std::vector<std::vector<const std::vector<std::uint32_t>*>> closing(n);
    for (const auto& e : sup.edges) closing[e.back()].push_back(&e);

    std::vector<std::size_t> left(k, n / k);
    std::vector<std::uint32_t> color(n, 0);
    std::uint64_t total = 0;
    auto rec = [&](auto&& self, std::size_t v) -> void {
        if (v == n) { ++total; return; }
        for (std::uint32_t c = 0; c < k; ++c) {
            if (left[c] == 0) continue;
            color[v] = c;
            bool ok = true;
            for (auto* e : closing[v]) {
                bool mono = true;
                for (auto u : *e)
                    if (color[u] != c) { mono = false; break; }
                if (mono) { ok = false; break; }
            }
            if (!ok) continue;
            --left[c];
            self(self, v + 1);
            ++left[c];
        }
    };
    rec(rec, 0);
    return {total};
}

// Tri-state decision with an optional wall-clock deadline.
inline ColorabilityVerdict decide_k_colorable(
    const Hypergraph& h, std::size_t k,
    std::optional<std::chrono::steady_clock::time_point> deadline = std::nullopt,
    KPartition* witness = nullptr) {
    auto sup = detail::edge_supports(h);
    if (sup.has_singleton) return ColorabilityVerdict::not_colorable;
    if (sup.edges.empty()) {
        if (k == 0) return ColorabilityVerdict::not_colorable;
        if (witness) *witness = KPartition(k, std::vector<std::uint32_t>(h.n(), 1));
        return ColorabilityVerdict::colorable;
    }
    if (k <= 1) return ColorabilityVerdict::not_colorable;
    if (k >= h.n()) {
        if (witness) {
            std::vector<std::uint32_t> a(h.n());
            for (std::size_t i = 0; i < a.size(); ++i) a[i] = static_cast<std::uint32_t>(i + 1);
            *witness = KPartition(k, std::move(a));
        }
        return ColorabilityVerdict::colorable;
    }
    if (k > 64) throw std::invalid_argument("at most 64 colors supported");
    detail::ColoringSearch search(h.n(), k, sup.edges, deadline);
    try {
        auto sol = search.solve();
        if (!sol) return ColorabilityVerdict::not_colorable;
        if (witness) {
            std::vector<std::uint32_t> a(sol->size());
            for (std::size_t i = 0; i < a.size(); ++i) a[i] = (*sol)[i] + 1;
            *witness = KPartition(k, std::move(a));
        }
        return ColorabilityVerdict::colorable;
    } catch (const detail::TimeoutSignal&) {
        return ColorabilityVerdict::timed_out;
    }
}

inline bool is_k_colorable(const Hypergraph& h, std::size_t k) {
    return decide_k_colorable(h, k) == ColorabilityVerdict::colorable;
}

inline std::optional<KPartition> find_k_coloring(const Hypergraph& h, std::size_t k) {
    KPartition w;
    if (decide_k_colorable(h, k, std::nullopt, &w) == ColorabilityVerdict::colorable) return w;
    return std::nullopt;
}

inline ChromaticNumber chromatic_number(const Hypergraph& h) {
    auto sup = detail::edge_supports(h);
    if (sup.has_singleton) return ChromaticNumber::never();
    for (std::size_t k = 1;; ++k)
        if (is_k_colorable(h, k)) return ChromaticNumber::of(k);
}

}  // namespace hypercolor
