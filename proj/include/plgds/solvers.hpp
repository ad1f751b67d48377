#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <optional>
#include <queue>
#include <sstream>
#include <string>
#include <vector>

#include "degree_model.hpp"
#include "errors.hpp"
#include "graph.hpp"

namespace plgds {

enum class Algorithm { Exact, Greedy, Structured };
enum class LowerBoundKind { ExactOpt, Lemma2a, Lemma2b, Trivial };

inline const char* algorithm_name(Algorithm a) {
    switch (a) {
        case Algorithm::Exact: return "exact";
        case Algorithm::Greedy: return "greedy";
        case Algorithm::Structured: return "structured";
    }
    return "?";
}

inline const char* lb_kind_name(LowerBoundKind k) {
    switch (k) {
        case LowerBoundKind::ExactOpt: return "exact";
        case LowerBoundKind::Lemma2a: return "lemma2a";
        case LowerBoundKind::Lemma2b: return "lemma2b";
        case LowerBoundKind::Trivial: return "trivial";
    }
    return "?";
}

struct DecompositionStats {
    std::size_t W = 0, M = 0, R = 0, D_R = 0;
};

struct SolveReport {
    VertexSet solution;
    Algorithm algorithm = Algorithm::Greedy;
    std::size_t lower_bound = 0;
    LowerBoundKind lb_kind = LowerBoundKind::Trivial;
    std::optional<DecompositionStats> decomposition;
    bool budget_exhausted = false;

    double ratio() const {
        return lower_bound ? static_cast<double>(solution.size()) / static_cast<double>(lower_bound) : 1.0;
    }
};

inline const char* kSolveCsvHeader = "algo,n,m,beta,size,lower_bound,lb_kind,ratio";

inline std::string csv_row(const SolveReport& r, const MultiGraph& g, std::optional<double> beta) {
    std::ostringstream os;
    os.precision(6);
    os << algorithm_name(r.algorithm) << ',' << g.n() << ',' << g.m() << ',';
    if (beta)
        os << *beta;
    else
        os << "NA";
    os << ',' << r.solution.size() << ',' << r.lower_bound << ',' << lb_kind_name(r.lb_kind) << ',' << std::fixed
       << r.ratio();
    return os.str();
}

// ---------------------------------------------------------------- greedy

// Picks the vertex that dominates the most undominated vertices (itself
// included) until none remain; ties go to the lowest id. Lazy max-heap.
inline VertexSet greedy_set(const MultiGraph& g) {
    const std::size_t n = g.n();
    std::vector<std::vector<Vertex>> nb(n);
    for (Vertex v = 0; v < n; ++v) nb[v] = g.distinct_neighbors(v);
    std::vector<bool> dominated(n, false);
    auto gain = [&](Vertex v) {
        std::size_t c = dominated[v] ? 0 : 1;
        for (auto u : nb[v]) c += dominated[u] ? 0 : 1;
        return c;
    };
    using Item = std::pair<std::size_t, Vertex>;
    auto worse = [](const Item& a, const Item& b) { return a.first != b.first ? a.first < b.first : a.second > b.second; };
    std::priority_queue<Item, std::vector<Item>, decltype(worse)> pq(worse);
    for (Vertex v = 0; v < n; ++v) pq.push({nb[v].size() + 1, v});
    std::size_t left = n;
    VertexSet out;
    while (left > 0) {
        auto [gv, v] = pq.top();
        pq.pop();
        auto now = gain(v);
        if (now != gv) {
            if (now > 0) pq.push({now, v});
            continue;
        }
        out.push_back(v);
        if (!dominated[v]) {
            dominated[v] = true;
            --left;
        }
        for (auto u : nb[v])
            if (!dominated[u]) {
                dominated[u] = true;
                --left;
            }
    }
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------- lower bounds

// Each dominator of degree d covers at most d + 1 vertices.
inline std::size_t counting_lower_bound(const MultiGraph& g) {
    if (g.n() == 0) return 0;
    std::vector<std::uint64_t> cov;
    cov.reserve(g.n());
    for (Vertex v = 0; v < g.n(); ++v) cov.push_back(g.distinct_neighbors(v).size() + 1);
    std::sort(cov.rbegin(), cov.rend());
    std::uint64_t acc = 0;
    std::size_t k = 0;
    while (acc < g.n()) acc += cov[k++];
    return k;
}

struct Lemma2Result {
    bool found = false;
    std::uint64_t t = 0;  // lowest degree of the top interval
    double x_star = 0;    // t / Delta
    std::uint64_t bound = 1;
};

enum class Lemma2Variant { A, B };

// Minimal t with vol([t, D]) below the target, on any degree histogram.
// Variant A compares against `target_a` (floor(e^alpha) for model params, the
// degree-1 count for a graph); variant B against |[1, t-1]|.
inline Lemma2Result lemma2_from_counts(const std::vector<std::uint64_t>& counts, Lemma2Variant variant,
                                       u128 target_a) {
    Lemma2Result r;
    if (counts.size() < 2) return r;
    const std::uint64_t D = counts.size() - 1;
    std::vector<u128> suf_vol(D + 2, 0), suf_size(D + 2, 0);
    for (std::uint64_t i = D; i >= 1; --i) {
        suf_vol[i] = suf_vol[i + 1] + static_cast<u128>(counts[i]) * i;
        suf_size[i] = suf_size[i + 1] + counts[i];
    }
    auto ok = [&](std::uint64_t t) {
        u128 rhs = variant == Lemma2Variant::A ? target_a : suf_size[1] - suf_size[t];
        return suf_vol[t] < rhs;
    };
    std::uint64_t t = 0;
    for (std::uint64_t i = 1; i <= D; ++i)
        if (counts[i] && ok(i)) {
            t = i;
            break;
        }
    if (!t || suf_size[t] == 0) return r;
    r.found = true;
    r.t = t;
    r.x_star = static_cast<double>(t) / static_cast<double>(D);
    r.bound = static_cast<std::uint64_t>(suf_size[t]);
    return r;
}

inline Lemma2Result lemma2_for_graph(const MultiGraph& g, Lemma2Variant variant) {
    auto h = g.degree_histogram();
    if (h.size() < 2) return {};
    return lemma2_from_counts(h, variant, h[1]);
}

// Model version: binary search on the degree grid with exact interval sums.
inline Lemma2Result lemma2_lower_bound(const PlgParams& p, Lemma2Variant variant) {
    if (p.is_functional()) throw DomainError("lemma2 needs a fixed beta");
    const std::uint64_t D = p.delta();
    const bool bump = parity_bump(p);
    const u128 target = static_cast<u128>(std::floor(p.scale));
    const u128 n_total = interval_estimate(p, 1, D, bump).exact_size;
    auto ok = [&](std::uint64_t t) {
        auto e = interval_estimate(p, t, D, bump);
        u128 rhs = variant == Lemma2Variant::A ? target : n_total - e.exact_size;
        return e.exact_volume < rhs;
    };
    Lemma2Result r;
    // vol([t, D]) falls and |[1, t-1]| grows with t, so ok() is monotone.
    if (!ok(D)) return r;
    std::uint64_t lo = 1, hi = D;
    while (lo < hi) {
        std::uint64_t mid = lo + (hi - lo) / 2;
        if (ok(mid))
            hi = mid;
        else
            lo = mid + 1;
    }
    r.found = true;
    r.t = lo;
    r.x_star = static_cast<double>(lo) / static_cast<double>(D);
    r.bound = static_cast<std::uint64_t>(interval_estimate(p, lo, D, bump).exact_size);
    return r;
}

// Best cheap certificate for a graph: counting bound or Lemma 2 (variant A).
inline std::pair<std::size_t, LowerBoundKind> certified_lower_bound(const MultiGraph& g) {
    std::size_t trivial = counting_lower_bound(g);
    auto l2 = lemma2_for_graph(g, Lemma2Variant::A);
    if (l2.found && l2.bound > trivial) return {l2.bound, LowerBoundKind::Lemma2a};
    return {trivial, LowerBoundKind::Trivial};
}

inline SolveReport greedy_min_ds(const MultiGraph& g) {
    SolveReport r;
    r.algorithm = Algorithm::Greedy;
    r.solution = greedy_set(g);
    std::tie(r.lower_bound, r.lb_kind) = certified_lower_bound(g);
    return r;
}

// ---------------------------------------------------------------- exact

namespace detail {

struct Bits {
    std::vector<std::uint64_t> w;
    explicit Bits(std::size_t n = 0) : w((n + 63) / 64, 0) {}
    void set(std::size_t i) { w[i >> 6] |= 1ULL << (i & 63); }
    void reset(std::size_t i) { w[i >> 6] &= ~(1ULL << (i & 63)); }
    bool test(std::size_t i) const { return (w[i >> 6] >> (i & 63)) & 1; }
    std::size_t count() const {
        std::size_t c = 0;
        for (auto x : w) c += static_cast<std::size_t>(std::popcount(x));
        return c;
    }
    bool none() const {
        return std::all_of(w.begin(), w.end(), [](std::uint64_t x) { return x == 0; });
    }
    template <class F>
    void for_each(F f) const {
        for (std::size_t k = 0; k < w.size(); ++k)
            for (auto x = w[k]; x; x &= x - 1) f(k * 64 + static_cast<std::size_t>(std::countr_zero(x)));
    }
};

inline std::size_t and_count(const Bits& a, const Bits& b) {
    std::size_t c = 0;
    for (std::size_t k = 0; k < a.w.size(); ++k) c += static_cast<std::size_t>(std::popcount(a.w[k] & b.w[k]));
    return c;
}

inline std::size_t andnot_count(const Bits& a, const Bits& b) {
    std::size_t c = 0;
    for (std::size_t k = 0; k < a.w.size(); ++k) c += static_cast<std::size_t>(std::popcount(a.w[k] & ~b.w[k]));
    return c;
}

// (a & u) subset of (b & u)
inline bool subset_within(const Bits& a, const Bits& b, const Bits& u) {
    for (std::size_t k = 0; k < a.w.size(); ++k)
        if (a.w[k] & u.w[k] & ~b.w[k]) return false;
    return true;
}

inline bool equal_within(const Bits& a, const Bits& b, const Bits& u) {
    for (std::size_t k = 0; k < a.w.size(); ++k)
        if ((a.w[k] ^ b.w[k]) & u.w[k]) return false;
    return true;
}

struct OutOfBudget {};

// Branch and bound on one connected graph: branch on the undominated vertex
// with the fewest candidate dominators, skip dominated candidates, prune with
// a counting bound and a disjoint-candidate packing bound.
class BranchAndBound {
public:
    BranchAndBound(const MultiGraph& g, std::uint64_t budget) : n_(g.n()), budget_(budget), U0_(g.n()) {
        N_.assign(n_, Bits(n_));
        for (Vertex v = 0; v < n_; ++v) {
            N_[v].set(v);
            U0_.set(v);
            auto [b, e] = g.neighbors(v);
            for (auto it = b; it != e; ++it) N_[v].set(*it);
        }
    }

    // Only `targets` must be dominated; closed[v] is N[v] within the part.
    BranchAndBound(std::vector<Bits> closed, Bits targets, std::uint64_t budget)
        : n_(closed.size()), budget_(budget), N_(std::move(closed)), U0_(std::move(targets)) {}

    std::size_t root_bound() const {
        Bits ex(n_);
        return lower_bound(U0_, ex);
    }

    // Returns an optimum; `incumbent` seeds the upper bound and holds the best
    // set found when the budget runs out.
    VertexSet solve(VertexSet& incumbent) {
        best_ = &incumbent;
        Bits ex(n_);
        rec(U0_, ex);
        return incumbent;
    }

    std::uint64_t nodes() const { return nodes_; }

private:
    std::size_t lower_bound(const Bits& U, const Bits& ex) const {
        std::size_t left = U.count();
        if (left == 0) return 0;
        std::vector<std::size_t> cov;
        for (std::size_t v = 0; v < n_; ++v)
            if (!ex.test(v)) {
                auto c = and_count(N_[v], U);
                if (c) cov.push_back(c);
            }
        std::sort(cov.rbegin(), cov.rend());
        std::size_t acc = 0, k = 0;
        while (k < cov.size() && acc < left) acc += cov[k++];
        if (acc < left) return n_ + 1;  // cannot be dominated
        // packing: undominated vertices with pairwise disjoint candidate sets
        std::vector<std::pair<std::size_t, std::size_t>> order;
        U.for_each([&](std::size_t u) { order.push_back({andnot_count(N_[u], ex), u}); });
        std::sort(order.begin(), order.end());
        Bits used(n_);
        std::size_t pack = 0;
        for (auto [c, u] : order) {
            bool clash = false;
            for (std::size_t w = 0; w < used.w.size(); ++w)
                if (N_[u].w[w] & ~ex.w[w] & used.w[w]) {
                    clash = true;
                    break;
                }
            if (clash) continue;
            ++pack;
            for (std::size_t w = 0; w < used.w.size(); ++w) used.w[w] |= N_[u].w[w] & ~ex.w[w];
        }
        return std::max(k, pack);
    }

    void rec(const Bits& U, Bits& ex) {
        if (++nodes_ > budget_) throw OutOfBudget{};
        if (U.none()) {
            if (chosen_.size() < best_->size()) {
                *best_ = chosen_;
                std::sort(best_->begin(), best_->end());
            }
            return;
        }
        if (chosen_.size() + lower_bound(U, ex) >= best_->size()) return;
        std::size_t pick = n_, fewest = n_ + 1;
        U.for_each([&](std::size_t u) {
            auto c = andnot_count(N_[u], ex);
            if (c < fewest) {
                fewest = c;
                pick = u;
            }
        });
        if (fewest == 0) return;
        std::vector<std::size_t> cands;
        for (std::size_t v = 0; v < n_; ++v)
            if (N_[pick].test(v) && !ex.test(v)) cands.push_back(v);
        std::vector<std::size_t> keep;
        for (auto v : cands) {
            bool dominated = false;
            for (auto w : cands) {
                if (w == v || !subset_within(N_[v], N_[w], U)) continue;
                if (!equal_within(N_[v], N_[w], U) || w < v) {
                    dominated = true;
                    break;
                }
            }
            if (!dominated) keep.push_back(v);
        }
        std::vector<std::pair<std::size_t, std::size_t>> order;
        for (auto v : keep) order.push_back({and_count(N_[v], U), v});
        std::sort(order.begin(), order.end(), [](auto a, auto b) { return a.first != b.first ? a.first > b.first : a.second < b.second; });
        std::vector<std::size_t> excluded_here;
        for (auto [c, v] : order) {
            Bits next = U;
            for (std::size_t w = 0; w < next.w.size(); ++w) next.w[w] &= ~N_[v].w[w];
            chosen_.push_back(static_cast<Vertex>(v));
            rec(next, ex);
            chosen_.pop_back();
            ex.set(v);
            excluded_here.push_back(v);
            if (chosen_.size() + 1 >= best_->size()) break;
        }
        for (auto v : excluded_here) ex.reset(v);
    }

    std::size_t n_;
    std::uint64_t budget_;
    std::uint64_t nodes_ = 0;
    std::vector<Bits> N_;
    Bits U0_;
    VertexSet chosen_;
    VertexSet* best_ = nullptr;
};

}  // namespace detail

// Leaf rule: the neighbor of a degree-1 vertex (the smaller end of an
// isolated edge) lies in some optimum. What is left to dominate splits into
// independent parts, each a vertex set whose targets must be covered.
struct LeafKernel {
    VertexSet forced;
    std::vector<VertexSet> parts;
    std::vector<std::vector<bool>> is_target;  // parallel to parts
};

inline LeafKernel leaf_kernel(const MultiGraph& g) {
    const std::size_t n = g.n();
    LeafKernel k;
    std::vector<bool> forced(n, false), dom(n, false);
    for (Vertex v = 0; v < n; ++v) {
        if (g.degree(v) != 1) continue;
        Vertex u = *g.neighbors(v).first;
        if (g.degree(u) >= 2) forced[u] = true;
        else if (v < u) forced[v] = true;
    }
    for (Vertex v = 0; v < n; ++v)
        if (forced[v]) {
            k.forced.push_back(v);
            dom[v] = true;
            auto [b, e] = g.neighbors(v);
            for (auto it = b; it != e; ++it) dom[*it] = true;
        }
    std::vector<Vertex> parent(n);
    for (Vertex v = 0; v < n; ++v) parent[v] = v;
    auto find = [&](Vertex v) {
        while (parent[v] != v) v = parent[v] = parent[parent[v]];
        return v;
    };
    std::vector<bool> used(n, false);
    for (Vertex u = 0; u < n; ++u) {
        if (dom[u]) continue;
        used[u] = true;
        auto [b, e] = g.neighbors(u);
        for (auto it = b; it != e; ++it)
            if (!forced[*it]) {
                used[*it] = true;
                parent[find(*it)] = find(u);
            }
    }
    std::vector<std::int64_t> slot(n, -1);
    for (Vertex v = 0; v < n; ++v) {
        if (!used[v]) continue;
        Vertex r = find(v);
        if (slot[r] < 0) {
            slot[r] = static_cast<std::int64_t>(k.parts.size());
            k.parts.emplace_back();
            k.is_target.emplace_back();
        }
        k.parts[slot[r]].push_back(v);
        k.is_target[slot[r]].push_back(!dom[v]);
    }
    return k;
}

namespace detail {

struct KernelPart {
    std::vector<Bits> closed;
    Bits targets;
};

inline KernelPart make_part(const MultiGraph& g, const VertexSet& part, const std::vector<bool>& is_target,
                            std::vector<std::int64_t>& local) {
    KernelPart kp{std::vector<Bits>(part.size(), Bits(part.size())), Bits(part.size())};
    for (std::size_t i = 0; i < part.size(); ++i) local[part[i]] = static_cast<std::int64_t>(i);
    for (std::size_t i = 0; i < part.size(); ++i) {
        kp.closed[i].set(i);
        if (is_target[i]) kp.targets.set(i);
        auto [b, e] = g.neighbors(part[i]);
        for (auto it = b; it != e; ++it)
            if (local[*it] >= 0) kp.closed[i].set(static_cast<std::size_t>(local[*it]));
    }
    for (auto v : part) local[v] = -1;
    return kp;
}

// Greedy cover of the targets of a part, ties to the lowest index.
inline VertexSet part_greedy(const KernelPart& kp) {
    Bits left = kp.targets;
    VertexSet out;
    while (!left.none()) {
        std::size_t best = 0, gain = 0;
        for (std::size_t v = 0; v < kp.closed.size(); ++v) {
            auto c = and_count(kp.closed[v], left);
            if (c > gain) {
                gain = c;
                best = v;
            }
        }
        out.push_back(static_cast<Vertex>(best));
        for (std::size_t w = 0; w < left.w.size(); ++w) left.w[w] &= ~kp.closed[best].w[w];
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace detail

struct ExactOptions {
    std::size_t vertex_cap = 64;                // per part left after the leaf rule
    std::optional<std::uint64_t> node_budget;  // total search nodes; unlimited if absent
};

// Minimum dominating set: leaf rule, then branch and bound per part. A part
// larger than vertex_cap needs a node budget.
inline SolveReport exact_min_ds(const MultiGraph& g, const ExactOptions& opt = {}) {
    auto k = leaf_kernel(g);
    for (auto& part : k.parts)
        if (part.size() > opt.vertex_cap && !opt.node_budget)
            throw DomainError("component of " + std::to_string(part.size()) + " vertices exceeds the exact-solver cap");
    std::uint64_t remaining = opt.node_budget.value_or(UINT64_MAX);
    VertexSet solution = k.forced;
    std::size_t lb = k.forced.size();
    bool exhausted = false;
    std::vector<std::int64_t> local(g.n(), -1);
    for (std::size_t p = 0; p < k.parts.size(); ++p) {
        auto& part = k.parts[p];
        auto kp = detail::make_part(g, part, k.is_target[p], local);
        VertexSet inc = detail::part_greedy(kp);
        std::size_t part_lb = 0;
        if (inc.size() <= 1) {
            part_lb = inc.size();
        } else {
            detail::BranchAndBound bb(std::move(kp.closed), std::move(kp.targets), exhausted ? 0 : remaining);
            if (!exhausted) {
                try {
                    bb.solve(inc);
                    part_lb = inc.size();
                } catch (detail::OutOfBudget&) {
                    exhausted = true;
                }
                remaining -= std::min(remaining, bb.nodes());
            }
            if (exhausted && part_lb == 0) part_lb = std::max<std::size_t>(1, bb.root_bound());
        }
        lb += part_lb;
        for (auto v : inc) solution.push_back(part[v]);
    }
    std::sort(solution.begin(), solution.end());
    if (exhausted) throw BudgetExceeded(solution, lb);
    SolveReport r;
    r.algorithm = Algorithm::Exact;
    r.solution = std::move(solution);
    r.lower_bound = r.solution.size();
    r.lb_kind = LowerBoundKind::ExactOpt;
    return r;
}

inline std::size_t exact_size(const MultiGraph& g, const ExactOptions& opt = {}) {
    return exact_min_ds(g, opt).solution.size();
}

// ---------------------------------------------------------------- structured

// D = W + greedy(g[R]) + M'; greedy on g[R] only has to dominate R.
inline SolveReport structured_min_ds(const MultiGraph& g) {
    auto d = structural_decomposition(g);
    auto ind = induced_subgraph(g, d.R);
    auto dr = greedy_set(ind.graph);
    SolveReport r;
    r.algorithm = Algorithm::Structured;
    r.solution = d.W;
    for (auto v : dr) r.solution.push_back(ind.to_parent[v]);
    r.solution.insert(r.solution.end(), d.M_prime.begin(), d.M_prime.end());
    std::sort(r.solution.begin(), r.solution.end());
    if (!is_dominating(g, r.solution))
        throw InternalInvariantViolation("structured solution does not dominate");
    r.decomposition = DecompositionStats{d.W.size(), d.M.size(), d.R.size(), dr.size()};
    std::tie(r.lower_bound, r.lb_kind) = certified_lower_bound(g);
    return r;
}

// Upper envelope of the two cases of the structured analysis:
// |D| <= min(|R|, (ln(Delta+1) + 1) |OPT_R|) + |W| + |M|/2.
inline double structured_envelope(const DecompositionStats& s, std::size_t opt_r, std::uint64_t delta) {
    double greedy_cap = (std::log(static_cast<double>(delta) + 1.0) + 1.0) * static_cast<double>(opt_r);
    return std::min(static_cast<double>(s.R), greedy_cap) + static_cast<double>(s.W) + static_cast<double>(s.M) / 2.0;
}

}  // namespace plgds
