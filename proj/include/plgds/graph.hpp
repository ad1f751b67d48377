#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace plgds {

using Vertex = std::uint32_t;
using Edge = std::pair<Vertex, Vertex>;
using VertexSet = std::vector<Vertex>;

class MultiGraph {
public:
    MultiGraph() = default;
    explicit MultiGraph(std::size_t n) : deg_(n, 0) {}

    std::size_t n() const { return deg_.size(); }
    std::size_t m() const { return edges_.size(); }
    const std::vector<Edge>& edges() const { return edges_; }
    std::uint64_t degree(Vertex v) const { return deg_[v]; }
    const std::vector<std::uint64_t>& degrees() const { return deg_; }

    Vertex add_vertex() {
        deg_.push_back(0);
        return static_cast<Vertex>(deg_.size() - 1);
    }
    Vertex add_vertices(std::size_t k) {
        auto first = static_cast<Vertex>(deg_.size());
        deg_.resize(deg_.size() + k, 0);
        return first;
    }

    void add_edge(Vertex u, Vertex v) {
        if (u == v) throw SelfLoopError("self-loop at vertex " + std::to_string(u));
        if (u >= n() || v >= n()) throw DomainError("edge endpoint out of range");
        edges_.emplace_back(std::min(u, v), std::max(u, v));
        ++deg_[u];
        ++deg_[v];
        adj_valid_ = false;
    }

    void reserve_edges(std::size_t k) { edges_.reserve(k); }

    void add_edges_bulk(const std::vector<Edge>& es) {
        for (auto [u, v] : es) add_edge(u, v);
    }

    // Removes edge i by swapping with the last one (order not preserved).
    void remove_edge(std::size_t i) {
        auto [u, v] = edges_[i];
        --deg_[u];
        --deg_[v];
        edges_[i] = edges_.back();
        edges_.pop_back();
        adj_valid_ = false;
    }

    bool recount_check() const {
        std::vector<std::uint64_t> d(n(), 0);
        for (auto [u, v] : edges_) {
            if (u == v) return false;
            ++d[u];
            ++d[v];
        }
        std::uint64_t sum = 0;
        for (auto x : deg_) sum += x;
        return d == deg_ && sum == 2 * m();
    }

    // Neighbor list with multiplicity, from a CSR built on first use.
    std::pair<const Vertex*, const Vertex*> neighbors(Vertex v) const {
        build_adj();
        return {adj_.data() + off_[v], adj_.data() + off_[v + 1]};
    }

    std::vector<Vertex> distinct_neighbors(Vertex v) const {
        auto [b, e] = neighbors(v);
        std::vector<Vertex> out(b, e);
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    std::vector<std::uint64_t> degree_histogram() const {
        std::uint64_t mx = 0;
        for (auto d : deg_) mx = std::max(mx, d);
        std::vector<std::uint64_t> h(mx + 1, 0);
        for (auto d : deg_) ++h[d];
        return h;
    }

    std::uint64_t max_degree() const {
        std::uint64_t mx = 0;
        for (auto d : deg_) mx = std::max(mx, d);
        return mx;
    }

    // Edge multiset in canonical sorted order, for equality checks.
    std::vector<Edge> sorted_edges() const {
        auto e = edges_;
        std::sort(e.begin(), e.end());
        return e;
    }

private:
    void build_adj() const {
        if (adj_valid_) return;
        off_.assign(n() + 1, 0);
        for (auto [u, v] : edges_) {
            ++off_[u + 1];
            ++off_[v + 1];
        }
        for (std::size_t i = 0; i < n(); ++i) off_[i + 1] += off_[i];
        adj_.assign(2 * m(), 0);
        std::vector<std::size_t> pos(off_.begin(), off_.end() - 1);
        for (auto [u, v] : edges_) {
            adj_[pos[u]++] = v;
            adj_[pos[v]++] = u;
        }
        adj_valid_ = true;
    }

    std::vector<Edge> edges_;
    std::vector<std::uint64_t> deg_;
    mutable std::vector<std::size_t> off_;
    mutable std::vector<Vertex> adj_;
    mutable bool adj_valid_ = false;
};

inline std::vector<bool> membership(std::size_t n, const VertexSet& s) {
    std::vector<bool> in(n, false);
    for (auto v : s) {
        if (v >= n) throw DomainError("vertex " + std::to_string(v) + " out of range");
        in[v] = true;
    }
    return in;
}

inline bool is_dominating(const MultiGraph& g, const VertexSet& d) {
    auto in = membership(g.n(), d);
    for (Vertex v = 0; v < g.n(); ++v) {
        if (in[v]) continue;
        auto [b, e] = g.neighbors(v);
        if (std::none_of(b, e, [&](Vertex u) { return in[u]; })) return false;
    }
    return true;
}

// Component id per vertex, numbered by smallest member.
inline std::vector<std::uint32_t> components(const MultiGraph& g, std::uint32_t* count = nullptr) {
    const auto none = UINT32_MAX;
    std::vector<std::uint32_t> comp(g.n(), none);
    std::uint32_t c = 0;
    std::vector<Vertex> stack;
    for (Vertex s = 0; s < g.n(); ++s) {
        if (comp[s] != none) continue;
        comp[s] = c;
        stack.push_back(s);
        while (!stack.empty()) {
            Vertex v = stack.back();
            stack.pop_back();
            auto [b, e] = g.neighbors(v);
            for (auto it = b; it != e; ++it)
                if (comp[*it] == none) {
                    comp[*it] = c;
                    stack.push_back(*it);
                }
        }
        ++c;
    }
    if (count) *count = c;
    return comp;
}

inline bool is_connected(const MultiGraph& g) {
    std::uint32_t c = 0;
    components(g, &c);
    return c <= 1;
}

struct Induced {
    MultiGraph graph;
    std::vector<Vertex> to_parent;  // local id -> parent id
};

inline Induced induced_subgraph(const MultiGraph& g, const VertexSet& vs) {
    std::vector<Vertex> local(g.n(), UINT32_MAX);
    Induced r;
    r.to_parent = vs;
    std::sort(r.to_parent.begin(), r.to_parent.end());
    r.to_parent.erase(std::unique(r.to_parent.begin(), r.to_parent.end()), r.to_parent.end());
    for (std::size_t i = 0; i < r.to_parent.size(); ++i) local[r.to_parent[i]] = static_cast<Vertex>(i);
    r.graph = MultiGraph(r.to_parent.size());
    for (auto [u, v] : g.edges())
        if (local[u] != UINT32_MAX && local[v] != UINT32_MAX) r.graph.add_edge(local[u], local[v]);
    return r;
}

enum class Role : std::uint8_t { Core, Gamma, X, W, V1 };

inline const char* role_name(Role r) {
    switch (r) {
        case Role::Core: return "CORE";
        case Role::Gamma: return "GAMMA";
        case Role::X: return "X";
        case Role::W: return "W";
        case Role::V1: return "V1";
    }
    return "?";
}

inline std::optional<Role> parse_role(const std::string& s) {
    for (auto r : {Role::Core, Role::Gamma, Role::X, Role::W, Role::V1})
        if (s == role_name(r)) return r;
    return std::nullopt;
}

// Per-vertex roles. Gamma vertices are also W members (w_member()).
struct RoleMap {
    std::vector<Role> role;

    bool empty() const { return role.empty(); }
    static bool w_member(Role r) { return r == Role::W || r == Role::Gamma; }
    VertexSet with(Role r) const {
        VertexSet out;
        for (Vertex v = 0; v < role.size(); ++v)
            if (role[v] == r) out.push_back(v);
        return out;
    }
    std::size_t count(Role r) const { return static_cast<std::size_t>(std::count(role.begin(), role.end(), r)); }
};

struct Decomposition {
    VertexSet W, V1, M, M_prime, R;
    std::vector<bool> in_W, in_R;
};

inline Decomposition structural_decomposition(const MultiGraph& g) {
    Decomposition d;
    d.in_W.assign(g.n(), false);
    d.in_R.assign(g.n(), false);
    for (Vertex v = 0; v < g.n(); ++v) {
        if (g.degree(v) != 1) continue;
        d.V1.push_back(v);
        Vertex u = *g.neighbors(v).first;
        if (g.degree(u) == 1) {
            d.M.push_back(v);
            if (v < u) d.M_prime.push_back(v);
        } else {
            d.in_W[u] = true;
        }
    }
    for (Vertex v = 0; v < g.n(); ++v) {
        if (d.in_W[v]) d.W.push_back(v);
        else if (g.degree(v) != 1) {
            d.in_R[v] = true;
            d.R.push_back(v);
        }
    }
    return d;
}

// Graph file: `p plg <n> <m>`, `e <u> <v>` per edge, `c ` comments,
// optional `r <v> <ROLE>` lines.
struct GraphFile {
    MultiGraph graph;
    RoleMap roles;
    std::vector<std::string> comments;
};

inline void write_graph(std::ostream& os, const MultiGraph& g, const RoleMap* roles = nullptr,
                        const std::vector<std::string>& comments = {}) {
    os << "p plg " << g.n() << ' ' << g.m() << '\n';
    for (auto& c : comments) os << "c " << c << '\n';
    for (auto [u, v] : g.edges()) os << "e " << u << ' ' << v << '\n';
    if (roles && !roles->empty())
        for (Vertex v = 0; v < roles->role.size(); ++v) os << "r " << v << ' ' << role_name(roles->role[v]) << '\n';
}

inline GraphFile read_graph(std::istream& is) {
    GraphFile f;
    std::string line;
    bool have_header = false;
    std::size_t declared_m = 0, lineno = 0;
    auto fail = [&](const std::string& why) { throw ParseError("line " + std::to_string(lineno) + ": " + why); };
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == 'c' && (line.size() == 1 || line[1] == ' ')) {
            f.comments.push_back(line.size() > 2 ? line.substr(2) : "");
            continue;
        }
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag == "p") {
            std::string kind;
            long long n = -1, m = -1;
            if (have_header) fail("duplicate header");
            if (!(ls >> kind >> n >> m) || kind != "plg" || n < 0 || m < 0) fail("bad header");
            f.graph = MultiGraph(static_cast<std::size_t>(n));
            declared_m = static_cast<std::size_t>(m);
            have_header = true;
        } else if (tag == "e") {
            long long u = -1, v = -1;
            if (!have_header) fail("edge before header");
            if (!(ls >> u >> v) || u < 0 || v < 0 || static_cast<std::size_t>(u) >= f.graph.n() ||
                static_cast<std::size_t>(v) >= f.graph.n())
                fail("bad edge");
            if (u == v) fail("self-loop");
            f.graph.add_edge(static_cast<Vertex>(u), static_cast<Vertex>(v));
        } else if (tag == "r") {
            long long v = -1;
            std::string name;
            if (!have_header) fail("role before header");
            if (!(ls >> v >> name) || v < 0 || static_cast<std::size_t>(v) >= f.graph.n()) fail("bad role line");
            auto r = parse_role(name);
            if (!r) fail("unknown role " + name);
            if (f.roles.role.empty()) f.roles.role.assign(f.graph.n(), Role::W);
            f.roles.role[static_cast<std::size_t>(v)] = *r;
        } else {
            fail("unknown line tag '" + tag + "'");
        }
        std::string rest;
        if (ls >> rest) fail("trailing tokens");
    }
    if (!have_header) throw ParseError("missing header");
    if (f.graph.m() != declared_m) throw ParseError("edge count does not match header");
    return f;
}

}  // namespace plgds
