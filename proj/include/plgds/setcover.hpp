#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <istream>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "graph.hpp"
#include "rng.hpp"

namespace plgds {

struct PartitionSystem {
    std::size_t m_ground = 0, L = 0, k_parts = 0, d_cover = 0;
    std::vector<std::vector<std::vector<std::uint32_t>>> parts;  // parts[j][h]
};

// Partition j is read off a uniform permutation pi_j: part h holds the
// images of positions h*m/k .. (h+1)*m/k - 1. Each j has its own stream.
inline PartitionSystem build_partition_system(std::size_t m, std::size_t L, std::size_t k, std::uint64_t seed,
                                              std::size_t d_cover = 0) {
    if (k == 0 || m % k != 0) throw DivisibilityError("k must divide m");
    if (L < 1) throw DomainError("L must be >= 1");
    PartitionSystem ps{m, L, k, d_cover, {}};
    const std::size_t w = m / k;
    ps.parts.resize(L);
    for (std::size_t j = 0; j < L; ++j) {
        Rng rng(substream(seed, static_cast<std::uint64_t>(j)));
        std::vector<std::uint32_t> pi(m);
        std::iota(pi.begin(), pi.end(), 0u);
        fisher_yates(pi.begin(), pi.end(), rng);
        ps.parts[j].resize(k);
        for (std::size_t h = 0; h < k; ++h) {
            ps.parts[j][h].assign(pi.begin() + static_cast<std::ptrdiff_t>(h * w),
                                  pi.begin() + static_cast<std::ptrdiff_t>((h + 1) * w));
            std::sort(ps.parts[j][h].begin(), ps.parts[j][h].end());
        }
    }
    return ps;
}

inline double covering_probability(std::size_t k, std::size_t d) {
    if (k < 1) throw DomainError("k must be >= 1");
    return 1.0 - std::pow(1.0 - 1.0 / static_cast<double>(k), static_cast<double>(d));
}

// d = (1 - f(k)) k ln m; f defaults to 1/sqrt(k), an arbitrary choice.
inline double cover_distance_schedule(std::size_t k, std::size_t m,
                                      const std::function<double(double)>& f = {}) {
    double kk = static_cast<double>(k);
    double fk = f ? f(kk) : 1.0 / std::sqrt(kk);
    return (1.0 - fk) * kk * std::log(static_cast<double>(m));
}

// Smallest cover of the ground set using at most one part per partition,
// by exhaustive search; nullopt when no such cover exists.
inline std::optional<std::size_t> min_distinct_partition_cover(const PartitionSystem& ps) {
    std::optional<std::size_t> best;
    std::vector<int> cnt(ps.m_ground, 0);
    std::size_t uncovered = ps.m_ground;
    std::function<void(std::size_t, std::size_t)> go = [&](std::size_t j, std::size_t used) {
        if (best && used >= *best) return;
        if (uncovered == 0) {
            best = used;
            return;
        }
        if (j == ps.L) return;
        go(j + 1, used);
        for (auto& part : ps.parts[j]) {
            for (auto e : part)
                if (cnt[e]++ == 0) --uncovered;
            go(j + 1, used + 1);
            for (auto e : part)
                if (--cnt[e] == 0) ++uncovered;
        }
    };
    go(0, 0);
    return best;
}

struct SetCoverInstance {
    std::size_t universe = 0;
    std::vector<std::vector<std::uint32_t>> sets;
    std::vector<std::string> names;

    bool covers(const std::vector<std::size_t>& chosen) const {
        std::vector<bool> hit(universe, false);
        for (auto s : chosen)
            for (auto e : sets[s]) hit[e] = true;
        return std::all_of(hit.begin(), hit.end(), [](bool b) { return b; });
    }
    bool coverable() const {
        std::vector<std::size_t> all(sets.size());
        std::iota(all.begin(), all.end(), std::size_t{0});
        return covers(all);
    }
    std::vector<std::size_t> element_degrees() const {
        std::vector<std::size_t> d(universe, 0);
        for (auto& s : sets)
            for (auto e : s) ++d[e];
        return d;
    }
};

struct FeigeShapeParams {
    std::size_t R_strings = 4, m_block = 8, k_provers = 2, L = 4, Q = 6;
    double epsilon = 0.1;

    std::size_t set_count() const { return Q * k_provers; }
    std::size_t root_r() const {
        auto r = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(R_strings))));
        return r;
    }
    std::size_t set_size() const { return root_r() * m_block / k_provers; }
};

struct FeigeShaped {
    SetCoverInstance instance;
    std::size_t resamples = 0;
    double mean_element_degree = 0;
    double expected_element_degree = 0;  // Q sqrt(R) / R
};

inline constexpr std::size_t kMaxUniverse = 1'000'000;

// Universe = R disjoint partition-system blocks of m elements. Set (q, i)
// takes, in each of sqrt(R) distinct random blocks, part i of a random
// partition a of that block. Resampled until every element is covered.
inline FeigeShaped feige_shaped_instance(const FeigeShapeParams& p, std::uint64_t seed, std::size_t max_tries = 1000) {
    if (p.R_strings == 0 || p.m_block == 0) throw DomainError("R and m must be positive");
    if (p.m_block * p.R_strings > kMaxUniverse) throw ScaleError("universe exceeds the desk-scale cap");
    const std::size_t rr = p.root_r();
    if (rr * rr != p.R_strings) throw DomainError("R must be a perfect square");
    if (p.k_provers == 0 || p.m_block % p.k_provers != 0) throw DivisibilityError("k must divide m");
    FeigeShaped out;
    out.expected_element_degree = static_cast<double>(p.Q) * static_cast<double>(rr) / static_cast<double>(p.R_strings);
    for (std::size_t attempt = 0; attempt < max_tries; ++attempt) {
        std::uint64_t s = substream(substream(seed, "feige"), static_cast<std::uint64_t>(attempt));
        std::vector<PartitionSystem> blocks;
        for (std::size_t r = 0; r < p.R_strings; ++r)
            blocks.push_back(build_partition_system(p.m_block, p.L, p.k_provers, substream(s, "block" + std::to_string(r))));
        Rng rng(substream(s, "sets"));
        SetCoverInstance sc;
        sc.universe = p.m_block * p.R_strings;
        std::vector<std::uint32_t> ids(p.R_strings);
        for (std::size_t q = 0; q < p.Q; ++q)
            for (std::size_t i = 0; i < p.k_provers; ++i) {
                std::iota(ids.begin(), ids.end(), 0u);
                fisher_yates(ids.begin(), ids.end(), rng);
                std::vector<std::uint32_t> set;
                for (std::size_t t = 0; t < rr; ++t) {
                    auto r = ids[t];
                    auto a = uniform_below(rng, p.L);
                    for (auto e : blocks[r].parts[a][i])
                        set.push_back(static_cast<std::uint32_t>(r * p.m_block + e));
                }
                std::sort(set.begin(), set.end());
                sc.sets.push_back(std::move(set));
                sc.names.push_back("q" + std::to_string(q) + "_i" + std::to_string(i));
            }
        if (sc.coverable()) {
            out.instance = std::move(sc);
            out.resamples = attempt;
            auto deg = out.instance.element_degrees();
            double sum = 0;
            for (auto d : deg) sum += static_cast<double>(d);
            out.mean_element_degree = sum / static_cast<double>(deg.size());
            return out;
        }
    }
    throw DomainError("no coverable instance after " + std::to_string(max_tries) + " samples");
}

struct GusGraph {
    MultiGraph graph;
    std::vector<bool> is_set;  // element vertices first, then one per set
    std::size_t set_vertex(std::size_t s, std::size_t universe) const { return universe + s; }
};

inline GusGraph gus_graph(const SetCoverInstance& sc) {
    GusGraph g;
    const std::size_t U = sc.universe, S = sc.sets.size();
    g.graph = MultiGraph(U + S);
    g.is_set.assign(U + S, false);
    for (std::size_t s = 0; s < S; ++s) {
        g.is_set[U + s] = true;
        for (auto e : sc.sets[s]) g.graph.add_edge(e, static_cast<Vertex>(U + s));
    }
    std::vector<std::vector<std::uint32_t>> where(U);
    for (std::size_t s = 0; s < S; ++s)
        for (auto e : sc.sets[s]) where[e].push_back(static_cast<std::uint32_t>(s));
    std::vector<std::uint32_t> mark(S, UINT32_MAX);
    for (std::size_t s = 0; s < S; ++s)
        for (auto e : sc.sets[s])
            for (auto t : where[e])
                if (t > s && mark[t] != s) {
                    mark[t] = static_cast<std::uint32_t>(s);
                    g.graph.add_edge(static_cast<Vertex>(U + s), static_cast<Vertex>(U + t));
                }
    return g;
}

// Element vertices in d are swapped for their lowest-index containing set.
inline std::vector<std::size_t> ds_to_cover(const SetCoverInstance& sc, const VertexSet& d) {
    auto g = gus_graph(sc);
    if (!is_dominating(g.graph, d)) throw NotDominating("vertex set does not dominate G_{U,S}");
    const std::size_t U = sc.universe;
    std::vector<std::size_t> lowest(U, SIZE_MAX);
    for (std::size_t s = 0; s < sc.sets.size(); ++s)
        for (auto e : sc.sets[s]) lowest[e] = std::min(lowest[e], s);
    std::vector<std::size_t> out;
    for (auto v : d) out.push_back(v < U ? lowest[v] : v - U);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// Exhaustive minimum set cover (small set counts only).
inline std::size_t min_set_cover_size(const SetCoverInstance& sc) {
    const std::size_t S = sc.sets.size();
    if (S > 24) throw DomainError("min_set_cover_size: too many sets");
    std::vector<std::uint64_t> mask(S, 0);
    if (sc.universe > 64) throw DomainError("min_set_cover_size: universe too large");
    for (std::size_t s = 0; s < S; ++s)
        for (auto e : sc.sets[s]) mask[s] |= 1ULL << e;
    const std::uint64_t full = sc.universe == 64 ? ~0ULL : (1ULL << sc.universe) - 1;
    std::size_t best = SIZE_MAX;
    for (std::uint64_t c = 0; c < (1ULL << S); ++c) {
        auto k = static_cast<std::size_t>(std::popcount(c));
        if (k >= best) continue;
        std::uint64_t cov = 0;
        for (auto t = c; t; t &= t - 1) cov |= mask[std::countr_zero(t)];
        if (cov == full) best = k;
    }
    return best;
}

struct DegreeWindow {
    double a_emp, b_emp;
};

inline DegreeWindow degree_window(const MultiGraph& g) {
    if (g.n() < 2) throw DomainError("degree_window needs at least 2 vertices");
    std::uint64_t lo = UINT64_MAX, hi = 0;
    for (auto d : g.degrees()) {
        lo = std::min(lo, d);
        hi = std::max(hi, d);
    }
    if (lo == 0) throw DegreeZeroError("graph has an isolated vertex");
    double ln = std::log(static_cast<double>(g.n()));
    return {std::log(static_cast<double>(lo)) / ln, std::log(static_cast<double>(hi)) / ln};
}

// Set-cover file: `sc <|U|> <|S|>` then `s <name> <e1> <e2> ...` per set.
inline void write_set_cover(std::ostream& os, const SetCoverInstance& sc) {
    os << "sc " << sc.universe << ' ' << sc.sets.size() << '\n';
    for (std::size_t s = 0; s < sc.sets.size(); ++s) {
        os << "s " << (s < sc.names.size() && !sc.names[s].empty() ? sc.names[s] : "S" + std::to_string(s));
        for (auto e : sc.sets[s]) os << ' ' << e;
        os << '\n';
    }
}

inline SetCoverInstance read_set_cover(std::istream& is) {
    SetCoverInstance sc;
    std::string line;
    bool header = false;
    std::size_t declared = 0;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == 'c') continue;
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag == "sc") {
            long long u = -1, s = -1;
            if (header || !(ls >> u >> s) || u < 0 || s < 0) throw ParseError("bad set-cover header");
            sc.universe = static_cast<std::size_t>(u);
            declared = static_cast<std::size_t>(s);
            header = true;
        } else if (tag == "s") {
            if (!header) throw ParseError("set before header");
            std::string name;
            if (!(ls >> name)) throw ParseError("set line without name");
            std::vector<std::uint32_t> set;
            long long e;
            while (ls >> e) {
                if (e < 0 || static_cast<std::size_t>(e) >= sc.universe) throw ParseError("element out of range");
                set.push_back(static_cast<std::uint32_t>(e));
            }
            if (!ls.eof()) throw ParseError("bad element token");
            sc.sets.push_back(std::move(set));
            sc.names.push_back(name);
        } else {
            throw ParseError("unknown line tag '" + tag + "'");
        }
    }
    if (!header) throw ParseError("missing set-cover header");
    if (sc.sets.size() != declared) throw ParseError("set count does not match header");
    return sc;
}

}  // namespace plgds
