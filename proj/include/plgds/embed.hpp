#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "bounds.hpp"
#include "degree_model.hpp"
#include "errors.hpp"
#include "graph.hpp"
#include "rng.hpp"
#include "setcover.hpp"
#include "special.hpp"

namespace plgds {

inline constexpr std::uint64_t kMaxScaledVertices = 10'000'000;
inline constexpr std::uint64_t kMaxBuildEdges = 60'000'000;

// ---------------------------------------------------------------- scaling

// N0^(d-1) disjoint copies of g; vertex v of copy i becomes i*N0 + v.
inline MultiGraph scale_instance(const MultiGraph& g, int d, std::uint64_t cap = kMaxScaledVertices) {
    if (d < 1) throw DomainError("scaling exponent must be at least 1");
    const std::uint64_t n0 = g.n();
    if (n0 < 2) throw DomainError("scaling needs at least 2 vertices");
    std::uint64_t total = n0;
    for (int i = 1; i < d; ++i) {
        if (total > cap / n0) throw ScaleError("N0^d exceeds the scaling cap of " + std::to_string(cap) + " vertices");
        total *= n0;
    }
    if (total > cap) throw ScaleError("N0^d exceeds the scaling cap of " + std::to_string(cap) + " vertices");
    const std::uint64_t copies = total / n0;
    MultiGraph out(total);
    for (std::uint64_t c = 0; c < copies; ++c) {
        auto off = static_cast<Vertex>(c * n0);
        for (auto [u, v] : g.edges()) out.add_edge(off + u, off + v);
    }
    return out;
}

// ---------------------------------------------------------------- fill_wheel

struct ResidualState {
    std::vector<std::uint64_t> residual;
    std::vector<std::uint64_t> target;
};

// Instrumentation for fill_wheel.
struct WheelHook {
    virtual ~WheelHook() = default;
    virtual void begin(const ResidualState&, const std::vector<Vertex>&) {}
    virtual void edge(const ResidualState&, Vertex, Vertex) {}
    virtual void end(const ResidualState&) {}
};

namespace detail {

// Degree classes of a node list. A class is (base, q): its last q nodes hold
// base + 1 and the rest base. Taking from a class decrements its leftmost
// maximum, which keeps the profile non-decreasing with spread <= 1. Class
// maxima sit in a segment tree for leftmost-argmax queries.
class WheelClasses {
public:
    WheelClasses(const std::vector<Vertex>& nodes, const ResidualState& rs) : nodes_(nodes) {
        std::size_t i = 0;
        while (i < nodes.size()) {
            const auto t = rs.target[nodes[i]];
            if (!cls_.empty() && t <= last_target_)
                throw DomainError("fill_wheel: nodes are not grouped by ascending target degree");
            last_target_ = t;
            std::size_t j = i;
            Class c{i, 0, rs.residual[nodes[i]], 0};
            while (j < nodes.size() && rs.target[nodes[j]] == t) {
                auto r = rs.residual[nodes[j]];
                if (r == c.base + 1) ++c.q;
                else if (!(r == c.base && c.q == 0))
                    throw DomainError("fill_wheel: initial residuals violate Invariant 1 in degree class " + std::to_string(t));
                ++j;
            }
            c.size = j - i;
            sum_ += c.base * c.size + c.q;
            cls_.push_back(c);
            i = j;
        }
        leaves_ = 1;
        while (leaves_ < cls_.size()) leaves_ *= 2;
        tree_.assign(2 * leaves_, 0);
        for (std::size_t k = 0; k < cls_.size(); ++k) tree_[leaves_ + k] = cls_[k].max();
        for (std::size_t n = leaves_ - 1; n >= 1; --n) tree_[n] = std::max(tree_[2 * n], tree_[2 * n + 1]);
    }

    bool empty() const { return tree_.empty() || tree_[1] == 0; }
    std::uint64_t sum() const { return sum_; }
    std::uint64_t max() const { return tree_.empty() ? 0 : tree_[1]; }
    bool feasible() const { return 2 * max() <= sum_; }

    // Class holding the largest residual, ties to the lowest class. A class
    // of one node is skipped when it equals `skip` (its node was just used).
    std::optional<std::uint32_t> top(std::optional<std::uint32_t> skip = {}) {
        if (skip && cls_[*skip].size == 1) {
            auto saved = tree_[leaves_ + *skip];
            set_leaf(*skip, 0);
            auto r = argmax();
            set_leaf(*skip, saved);
            return r;
        }
        return argmax();
    }

    Vertex take(std::uint32_t k, ResidualState& rs) {
        auto& c = cls_[k];
        const auto before = c.max();
        std::size_t pos;
        if (c.q > 0) {
            pos = c.size - c.q;
            --c.q;
        } else {
            pos = 0;
            --c.base;
            c.q = c.size - 1;
        }
        Vertex v = nodes_[c.begin + pos];
        --rs.residual[v];
        --sum_;
        if (c.max() != before) set_leaf(k, c.max());
        return v;
    }

private:
    struct Class {
        std::size_t begin, size;
        std::uint64_t base;
        std::size_t q;
        std::uint64_t max() const { return q > 0 ? base + 1 : base; }
    };

    void set_leaf(std::size_t k, std::uint64_t v) {
        std::size_t n = leaves_ + k;
        tree_[n] = v;
        cached_ = false;
        for (n /= 2; n >= 1; n /= 2) {
            auto m = std::max(tree_[2 * n], tree_[2 * n + 1]);
            if (tree_[n] == m) break;
            tree_[n] = m;
        }
    }

    std::optional<std::uint32_t> argmax() {
        if (empty()) return std::nullopt;
        if (cached_) return top_;
        std::size_t n = 1;
        while (n < leaves_) n = tree_[2 * n] >= tree_[2 * n + 1] ? 2 * n : 2 * n + 1;
        top_ = static_cast<std::uint32_t>(n - leaves_);
        cached_ = true;
        return top_;
    }

    const std::vector<Vertex>& nodes_;
    std::vector<Class> cls_;
    std::vector<std::uint64_t> tree_;
    std::size_t leaves_ = 1;
    std::uint32_t top_ = 0;
    bool cached_ = false;
    std::uint64_t sum_ = 0;
    std::uint64_t last_target_ = 0;
};

}  // namespace detail

struct WheelRange {
    std::size_t first_edge = 0, count = 0;
};

// Wires the residual degrees of `nodes` among themselves. Each step joins the
// node of largest residual with the largest among the others, each taken as
// the leftmost maximum of its degree class. This never stalls on a profile
// with max <= sum - max and keeps Invariant 1 after every edge.
inline WheelRange fill_wheel(MultiGraph& g, ResidualState& rs, const std::vector<Vertex>& nodes,
                             std::uint64_t seed = 0, WheelHook* hook = nullptr) {
    (void)seed;  // the schedule is fixed by the node order
    detail::WheelClasses wc(nodes, rs);
    if (wc.sum() % 2) throw ParityError("fill_wheel: odd residual sum " + std::to_string(wc.sum()));
    if (hook) hook->begin(rs, nodes);
    WheelRange out{g.m(), 0};
    while (!wc.empty()) {
        auto c1 = *wc.top();
        Vertex u = wc.take(c1, rs);
        auto c2 = wc.top(c1);
        if (!c2) throw WheelStall("fill_wheel: vertex " + std::to_string(u) + " left with residual " +
                                  std::to_string(rs.residual[u] + 1) + " and no partner");
        Vertex v = wc.take(*c2, rs);
        g.add_edge(u, v);
        ++out.count;
        if (hook) hook->edge(rs, u, v);
    }
    if (hook) hook->end(rs);
    return out;
}

// Step-by-step Invariant 1 checker, driven by the fill_wheel hook. It keeps
// per-class descent counts so each edge costs O(1).
class InvariantChecker : public WheelHook {
public:
    void begin(const ResidualState& rs, const std::vector<Vertex>& nodes) override {
        nodes_ = nodes;
        cls_.clear();
        where_.assign(rs.residual.size(), {UINT32_MAX, 0});
        std::size_t i = 0;
        while (i < nodes.size()) {
            std::size_t j = i;
            Cls c;
            while (j < nodes.size() && rs.target[nodes[j]] == rs.target[nodes[i]]) {
                where_[nodes[j]] = {static_cast<std::uint32_t>(cls_.size()), static_cast<std::uint32_t>(j - i)};
                c.vals.push_back(rs.residual[nodes[j]]);
                ++j;
            }
            for (std::size_t k = 1; k < c.vals.size(); ++k) c.descents += c.vals[k - 1] > c.vals[k];
            cls_.push_back(std::move(c));
            check(cls_.size() - 1, 0);
            i = j;
        }
    }

    void edge(const ResidualState& rs, Vertex u, Vertex v) override {
        ++edges_;
        if (u == v) fail("self-loop at " + std::to_string(u));
        update(rs, u);
        update(rs, v);
        if (where_[u].first != UINT32_MAX) check(where_[u].first, edges_);
        if (where_[v].first != UINT32_MAX) check(where_[v].first, edges_);
    }

    void end(const ResidualState& rs) override {
        for (auto v : nodes_)
            if (rs.residual[v] != 0) {
                fail("vertex " + std::to_string(v) + " ends with residual " + std::to_string(rs.residual[v]));
                break;
            }
        ++calls_;
    }

    bool ok() const { return failures_ == 0; }
    std::size_t failures() const { return failures_; }
    std::size_t edges_checked() const { return edges_; }
    std::size_t calls() const { return calls_; }
    const std::string& first_failure() const { return first_; }

private:
    struct Cls {
        std::vector<std::uint64_t> vals;
        std::size_t descents = 0;
    };

    void fail(const std::string& why) {
        if (failures_++ == 0) first_ = why;
    }

    void update(const ResidualState& rs, Vertex w) {
        auto [k, p] = where_[w];
        if (k == UINT32_MAX) {
            fail("edge endpoint " + std::to_string(w) + " outside the wheel");
            return;
        }
        auto& c = cls_[k];
        auto old = c.vals[p], now = rs.residual[w];
        if (old == 0 || now + 1 != old) fail("residual of " + std::to_string(w) + " did not drop by one");
        auto pair_desc = [&](std::size_t i) { return i + 1 < c.vals.size() && c.vals[i] > c.vals[i + 1] ? 1u : 0u; };
        if (p > 0) c.descents -= pair_desc(p - 1);
        c.descents -= pair_desc(p);
        c.vals[p] = now;
        if (p > 0) c.descents += pair_desc(p - 1);
        c.descents += pair_desc(p);
    }

    void check(std::size_t k, std::size_t edge_no) {
        auto& c = cls_[k];
        // with no descents the values are sorted, so the spread is back - front
        if (c.descents != 0 || c.vals.back() - c.vals.front() > 1)
            fail("Invariant 1 broken " + (edge_no ? "after edge " + std::to_string(edge_no) : std::string("in the initial profile")));
    }

    std::vector<Vertex> nodes_;
    std::vector<Cls> cls_;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> where_;
    std::size_t edges_ = 0, failures_ = 0, calls_ = 0;
    std::string first_;
};

// ---------------------------------------------------------------- parameters

struct Certificate {
    std::string name;
    bool pass = false;
    long double lhs = 0, rhs = 0;
    std::string relation;  // lhs <relation> rhs must hold
    bool exact = false;    // from exact interval sums, else from brackets

    std::string to_text() const {
        std::ostringstream os;
        os << std::setprecision(10) << "cert " << name << ' ' << (pass ? "PASS" : "FAIL") << ": " << lhs << ' '
           << relation << ' ' << rhs << (exact ? " (exact)" : " (bracket)");
        return os.str();
    }
};

struct EmbeddingParams {
    BetaRegime regime{RegimeKind::OneToTwo, NAN};
    double beta = NAN;          // fixed beta of the target model
    std::string beta_fn_name;   // set for functional inputs
    double eps = 0.1;
    double a_exp = 0, b_exp = 0;
    int d_scale = 1;
    double x = 0, y = 1;
    double x_gap = 1;           // 1 - x, kept separately for x close to 1
    double x_cap = NAN;         // analytic cap on x, NaN where none applies
    double alpha = 0, scale = 1;
    double theta = 0.5;
    std::uint64_t N0 = 0;
    long double N = 0;          // N0^d
    bool relaxed = false;
    PlgParams model;
    std::vector<Certificate> certificates;
    std::vector<std::string> trace;

    bool certified() const {
        return std::all_of(certificates.begin(), certificates.end(), [](const Certificate& c) { return c.pass; });
    }

    std::uint64_t x_low(std::uint64_t D) const {
        long double Dl = static_cast<long double>(D);
        long double v = x_gap < 1e-3 ? Dl - floorl(static_cast<long double>(x_gap) * Dl + 1e-9L)
                                     : ceill(static_cast<long double>(x) * Dl - 1e-9L);
        if (v < 1) v = 1;
        return static_cast<std::uint64_t>(v);
    }
    std::uint64_t x_high(std::uint64_t D) const {
        return static_cast<std::uint64_t>(floorl(static_cast<long double>(y) * static_cast<long double>(D) + 1e-9L));
    }

    std::string line() const {
        std::ostringstream os;
        os << std::setprecision(10) << "params: regime=" << regime_name(regime.kind) << " beta=" << beta;
        if (!beta_fn_name.empty()) os << " f=" << beta_fn_name;
        os << " eps=" << eps << " a=" << a_exp << " b=" << b_exp << " d=" << d_scale << " x=" << x << " y=" << y
           << " alpha=" << alpha << " N0=" << N0 << " N=" << N << " relaxed=" << (relaxed ? 1 : 0);
        return os.str();
    }
};

namespace detail {

using ld = long double;

struct Bracket {
    ld size_lo = 0, size_hi = 0, vol_lo = 0, vol_hi = 0;
    bool exact = false;
};

inline ld ld_power_integral(ld s, ld lo, ld hi) {
    if (fabsl(s - 1) < 1e-12L) return logl(hi / lo);
    return (powl(hi, 1 - s) - powl(lo, 1 - s)) / (1 - s);
}

// sum_{j=a}^{b} j^{-s}, bracketed by integrals
inline std::pair<ld, ld> ld_power_sum(ld s, ld a, ld b) {
    if (s >= 0) return {ld_power_integral(s, a, b + 1), powl(a, -s) + ld_power_integral(s, a, b)};
    return {ld_power_integral(s, a - 1, b), ld_power_integral(s, a, b + 1)};
}

inline ld model_delta(ld E, double beta) { return floorl(powl(E, 1.0L / beta) * (1 + 1e-15L)); }

inline bool exact_ok(ld E, ld D) { return D <= static_cast<ld>(kMaxSequenceDelta) && E <= 4e18L && E > 1; }

// Size and volume of [a, b] in the model with scale E; exact when small.
inline Bracket interval_bracket(ld E, double beta, ld a, ld b) {
    Bracket r;
    ld D = model_delta(E, beta);
    if (a < 1) a = 1;
    if (b > D) b = D;
    if (a > b) {
        r.exact = true;
        return r;
    }
    if (exact_ok(E, D)) {
        auto p = PlgParams::from_scale(static_cast<double>(E), beta);
        auto s = raw_interval_sums(p, static_cast<std::uint64_t>(a), static_cast<std::uint64_t>(b));
        r.size_lo = r.size_hi = to_ld(s.size);
        r.vol_lo = r.vol_hi = to_ld(s.volume);
        if (a == 1 && parity_bump(p)) {
            r.size_lo = r.size_hi += 1;
            r.vol_lo = r.vol_hi += 1;
        }
        r.exact = true;
        return r;
    }
    auto sb = ld_power_sum(beta, a, b);
    auto vb = ld_power_sum(beta - 1.0L, a, b);
    ld len = b - a + 1, jsum = (a + b) * len / 2;
    ld bump = a == 1 ? 1 : 0;
    r.size_lo = std::max<ld>(0, E * sb.first - len);
    r.size_hi = E * sb.second + bump;
    r.vol_lo = std::max<ld>(0, E * vb.first - jsum);
    r.vol_hi = E * vb.second + bump;
    return r;
}

// Node count of the model: exact when small, else the zeta estimate (beta > 1)
// or the upper bracket.
inline ld model_size(ld E, double beta) {
    ld D = model_delta(E, beta);
    if (exact_ok(E, D)) return to_ld(exact_totals(PlgParams::from_scale(static_cast<double>(E), beta)).nodes);
    return interval_bracket(E, beta, 1, D).size_hi;
}

struct Plan {
    RegimeKind kind;
    int d = 1;
    ld N0 = 0, N = 0, E = 0;
    double beta = NAN;
    double x = 0, x_gap = 1, x_cap = NAN;
    double d_limit = NAN;
    double window_lo = NAN, window_hi = NAN;  // sub-one x window
    std::vector<std::string> trace;
};

inline std::string num(ld v) {
    std::ostringstream os;
    os << std::setprecision(10) << v;
    return os.str();
}

// Effective beta of a functional model at scale E (fixed point in n).
inline double functional_beta(const BetaFunction& bf, ld E) {
    double beta = 2.0 + 1.0 / static_cast<double>(bf.f_at(static_cast<std::uint64_t>(std::min<ld>(zeta(2.0) * E, 1.8e19L))));
    for (int it = 0; it < 8; ++it) {
        ld n = model_size(E, beta);
        double next = bf.beta_at(static_cast<std::uint64_t>(std::min<ld>(n, 1.8e19L)));
        if (next == beta) break;
        beta = next;
    }
    return beta;
}

inline int smallest_d_above(double lim) { return static_cast<int>(std::floor(lim)) + 1; }

inline Plan make_plan(const BetaRegime& regime, ld N0, double a, double b, const BetaFunction* bf,
                      std::optional<int> d_fix, std::optional<ld> E_fix) {
    Plan p;
    p.kind = regime.kind;
    p.N0 = N0;
    p.beta = regime.beta;
    auto set_N = [&] { p.N = powl(N0, p.d); };
    switch (regime.kind) {
        case RegimeKind::OneToTwo: {
            double beta = p.beta;
            p.d_limit = (b + 1) * beta / (beta - 1);
            p.d = d_fix ? *d_fix : smallest_d_above(p.d_limit);
            set_N();
            p.E = E_fix ? *E_fix : powl(p.N, 1 + b * beta / p.d);
            p.x_cap = std::pow(beta / 2, 1 / (2 - beta));
            p.x = p.x_cap / 2;
            p.trace.push_back("d > (b+1)beta/(beta-1) = " + num(p.d_limit) + ", d = " + std::to_string(p.d));
            p.trace.push_back("x < (beta/2)^(1/(2-beta)) = " + num(p.x_cap) + ", x = " + num(p.x));
            break;
        }
        case RegimeKind::Two: {
            p.x_cap = std::exp(-zeta(2.0));
            p.x = p.x_cap / 2;
            double x_log = std::log(p.x);
            // d from the disjointness display, at least the size bound's d
            int d0 = smallest_d_above(2 * (b + 1));
            p.d = d_fix ? *d_fix : d0;
            if (!d_fix) {
                for (int d = d0; d < 256; ++d) {
                    ld alpha = (1 + 2 * b / d) * logl(powl(N0, d));
                    ld den = alpha / 2 + x_log;
                    if (den > 0 && d > alpha * b / den - 2 * b) {
                        p.d = d;
                        break;
                    }
                    p.d = d + 1;
                }
            }
            set_N();
            p.E = E_fix ? *E_fix : powl(p.N, 1 + 2 * b / p.d);
            ld alpha = logl(p.E);
            p.d_limit = static_cast<double>(alpha * b / (alpha / 2 + x_log) - 2 * b);
            p.trace.push_back("x <= e^-zeta(2) = " + num(p.x_cap) + ", x = " + num(p.x));
            p.trace.push_back("d > alpha b/(alpha/beta + ln x) - b beta = " + num(p.d_limit) + ", d = " + std::to_string(p.d));
            break;
        }
        case RegimeKind::One: {
            p.d = d_fix ? *d_fix : 1;
            set_N();
            p.E = E_fix ? *E_fix : powl(p.N, 1 + b);
            p.x = 0.5;
            p.x_gap = 0.5;
            p.trace.push_back("no scaling, e^alpha = N0^(1+b) = " + num(p.E) + ", x = 0.5");
            break;
        }
        case RegimeKind::SubOne: {
            double beta = p.beta;
            p.d = d_fix ? *d_fix : 2;
            set_N();
            p.E = E_fix ? *E_fix : powl(p.N, (p.d + b * beta) / p.d);
            ld alpha = logl(p.E);
            ld one_minus_delta = static_cast<ld>(p.d - 1) / (p.d + b * beta);
            ld one_minus_delta_p = one_minus_delta / 2;
            ld k = alpha * (1 / static_cast<ld>(beta) - one_minus_delta_p);
            ld c = 1 / (1 / (2 - static_cast<ld>(beta)) - 0.5L);
            // gaps 1 - x at both ends of the window
            ld gap_lo = -expm1l(log1pl(-(1 - beta) * expl(-k)) / (1 - beta));
            ld gap_hi = -expm1l(0.5L * log1pl(-c * expl(-alpha / beta)));
            p.window_lo = static_cast<double>(1 - gap_lo);
            p.window_hi = static_cast<double>(1 - gap_hi);
            ld gap = (gap_lo + gap_hi) / 2;
            p.x_gap = static_cast<double>(gap);
            p.x = static_cast<double>(1 - gap);
            p.trace.push_back("delta = " + num(1 - one_minus_delta) + ", delta' = " + num(1 - one_minus_delta_p));
            p.trace.push_back("x window [" + num(1 - gap_lo) + ", " + num(1 - gap_hi) + "), 1 - x = " + num(gap));
            break;
        }
        case RegimeKind::FunctionalHard: {
            if (!bf) throw DomainError("functional regime needs a beta function");
            p.x_cap = std::exp(-zeta(2.0));
            p.x = p.x_cap / 2;
            double beta = 2.0 + 1.0 / static_cast<double>(bf->f_at(static_cast<std::uint64_t>(
                                   std::min<ld>(powl(N0, 4), 1.8e19L))));
            p.d = d_fix ? *d_fix : smallest_d_above((b + 1) * beta / (beta - 1));
            for (int it = 0; it < 6; ++it) {
                set_N();
                if (E_fix) {
                    p.E = *E_fix;
                } else {
                    p.E = powl(p.N, 1 + a / p.d);
                    ld lo = ceill(powl(p.N, a / p.d) - 1e-9L), hi = floorl(powl(p.N, b / p.d) + 1e-9L);
                    for (int k = 0; k < 400 && interval_bracket(p.E, beta, lo, hi).size_lo < p.N; ++k) p.E *= 1.05L;
                }
                double nb = functional_beta(*bf, p.E);
                int nd = d_fix ? *d_fix : smallest_d_above((b + 1) * nb / (nb - 1));
                bool settled = nb == beta && nd == p.d;
                beta = nb;
                p.d = nd;
                if (settled) break;
            }
            set_N();
            p.beta = beta;
            p.d_limit = (b + 1) * beta / (beta - 1);
            p.trace.push_back("beta_f = " + num(beta) + " with f = " + bf->name);
            p.trace.push_back("e^alpha ~ N^(1+a/d) raised until (1) holds: " + num(p.E));
            p.trace.push_back("d > (b+1)beta_f/(beta_f-1) = " + num(p.d_limit) + ", d = " + std::to_string(p.d));
            p.trace.push_back("x = e^-zeta(2)/2 = " + num(p.x));
            break;
        }
        default:
            throw RegimeViolation(std::string("no embedding for regime ") + regime_name(regime.kind));
    }
    if (p.x_gap == 1) p.x_gap = 1 - p.x;
    return p;
}

inline std::vector<Certificate> certify(const Plan& p, double a, double b, double theta) {
    std::vector<Certificate> out;
    auto add = [&](std::string name, ld lhs, std::string rel, ld rhs, bool exact) {
        bool pass = rel == ">=" ? lhs >= rhs : rel == "<=" ? lhs <= rhs : rel == ">" ? lhs > rhs : lhs < rhs;
        out.push_back({std::move(name), pass, lhs, rhs, std::move(rel), exact});
    };
    const ld E = p.E, N = p.N;
    const ld D = model_delta(E, p.beta);
    const int d = p.d;
    const ld wa = ceill(powl(N, a / d) - 1e-9L), wb = floorl(powl(N, b / d) + 1e-9L);
    auto win = interval_bracket(E, p.beta, wa, wb);
    add("(1) window-size", win.size_lo, ">=", N, win.exact);

    EmbeddingParams tmp;
    tmp.x = p.x;
    tmp.x_gap = p.x_gap;
    const ld xlo = D >= 1 && D < 1.8e19L ? static_cast<ld>(tmp.x_low(static_cast<std::uint64_t>(D)))
                                          : ceill(static_cast<ld>(p.x) * D);
    auto xs = interval_bracket(E, p.beta, xlo, D);
    if (p.kind == RegimeKind::One)
        add("(2) x-size", logl(1 / static_cast<ld>(p.x)), "<=", theta * powl(E, 1 / (1 + static_cast<ld>(b))), true);
    else
        add("(2) x-size", xs.size_hi, "<=", theta * powl(N, static_cast<ld>(d - 1) / d), xs.exact);
    if (p.beta > 1) {
        double z = p.kind == RegimeKind::FunctionalHard ? zeta(2.0) : zeta(p.beta);
        add("(3) x-volume", xs.vol_lo, ">=", z * E, xs.exact);
    } else {
        auto all = interval_bracket(E, p.beta, 1, D);
        add("(3) x-volume", xs.vol_lo, ">=", all.size_hi, xs.exact && all.exact);
    }
    switch (p.kind) {
        case RegimeKind::OneToTwo:
            add("x-cap", p.x, "<", p.x_cap, true);
            add("d-bound", d, ">", p.d_limit, true);
            break;
        case RegimeKind::Two:
            add("x-cap", p.x, "<=", p.x_cap, true);
            add("d-bound", d, ">", p.d_limit, true);
            add("disjoint", wb, "<", xlo, true);
            break;
        case RegimeKind::SubOne:
            add("x-window-lo", p.window_lo, "<=", p.x, true);
            add("x-window-hi", p.x, "<", p.window_hi, true);
            break;
        case RegimeKind::FunctionalHard:
            add("d-bound", d, ">", p.d_limit, true);
            add("disjoint", wb, "<", xlo, true);
            break;
        default: break;
    }
    return out;
}

inline bool all_pass(const std::vector<Certificate>& cs) {
    return std::all_of(cs.begin(), cs.end(), [](const Certificate& c) { return c.pass; });
}

inline EmbeddingParams to_params(const Plan& p, const BetaRegime& regime, double a, double b, double eps, double theta,
                                 const BetaFunction* bf) {
    EmbeddingParams ep;
    ep.regime = regime;
    ep.regime.beta = p.beta;
    ep.beta = p.beta;
    if (bf) ep.beta_fn_name = bf->name;
    ep.eps = eps;
    ep.a_exp = a;
    ep.b_exp = b;
    ep.d_scale = p.d;
    ep.x = p.x;
    ep.x_gap = p.x_gap;
    ep.x_cap = p.x_cap;
    ep.y = 1;
    ep.scale = static_cast<double>(p.E);
    ep.alpha = static_cast<double>(logl(p.E));
    ep.theta = theta;
    ep.N0 = static_cast<std::uint64_t>(std::min<ld>(p.N0, 1.8e19L));
    ep.N = p.N;
    ep.trace = p.trace;
    if (p.E > 1 && p.E <= 4e18L) ep.model = PlgParams::from_scale(ep.scale, p.beta);
    return ep;
}

}  // namespace detail

struct ChooseOptions {
    double theta = 0.5;                 // constant of the size certificate (2)
    std::optional<BetaFunction> beta_fn;
    std::optional<int> d_scale;
};

// Parameters (alpha, d, x, y) for embedding a core of n0 vertices with degree
// window [N0^a, N0^b], certified against the degree model. Throws
// InfeasibleScale with the smallest core size that passes when any fails.
inline EmbeddingParams choose_parameters(const BetaRegime& regime, std::uint64_t n0, double a_exp, double b_exp,
                                         double eps, const ChooseOptions& opt = {}) {
    if (!regime.has_lower_bound())
        throw RegimeViolation(std::string("regime ") + regime_name(regime.kind) + " has no embedding");
    if (!(a_exp >= 0 && a_exp < b_exp && b_exp < 1)) throw DomainError("need 0 <= a < b < 1");
    if (!(eps > 0 && eps < 1)) throw DomainError("eps must lie in (0, 1)");
    if (n0 < 2) throw DomainError("core needs at least 2 vertices");
    const BetaFunction* bf = opt.beta_fn ? &*opt.beta_fn : nullptr;
    auto eval = [&](detail::ld N0) {
        auto plan = detail::make_plan(regime, N0, a_exp, b_exp, bf, opt.d_scale, std::nullopt);
        auto certs = detail::certify(plan, a_exp, b_exp, opt.theta);
        return std::make_pair(plan, certs);
    };
    auto [plan, certs] = eval(static_cast<detail::ld>(n0));
    if (detail::all_pass(certs)) {
        auto ep = detail::to_params(plan, regime, a_exp, b_exp, eps, opt.theta, bf);
        ep.certificates = certs;
        return ep;
    }
    std::string failed;
    for (auto& c : certs)
        if (!c.pass) failed += (failed.empty() ? "" : ", ") + c.name;
    // doubling search for a passing core size, then bisection
    detail::ld lo = n0, hi = 0;
    for (int k = 0; k < 4000; ++k) {
        detail::ld cand = lo * 2;
        auto trial = detail::make_plan(regime, cand, a_exp, b_exp, bf, opt.d_scale, std::nullopt);
        if (!(trial.E < 1e4000L) || !std::isfinite(static_cast<double>(logl(trial.E)))) break;
        if (detail::all_pass(detail::certify(trial, a_exp, b_exp, opt.theta))) {
            hi = cand;
            break;
        }
        lo = cand;
    }
    if (hi > 0) {
        for (int it = 0; it < 200 && hi - lo > 1; ++it) {
            detail::ld mid = floorl((lo + hi) / 2);
            if (detail::all_pass(eval(mid).second)) hi = mid;
            else lo = mid;
        }
    }
    std::string msg = "certificates " + failed + " fail at N0 = " + std::to_string(n0);
    msg += hi > 0 ? "; minimum core size N0 = " + detail::num(hi) : "; no passing core size found";
    throw InfeasibleScale(msg, static_cast<double>(hi));
}

// ---------------------------------------------------------------- construction

struct EmbeddingStats {
    std::size_t core = 0, gamma = 0, x = 0, w = 0, v1 = 0, pairs = 0, balance_edges = 0;
};

struct EmbeddingResult {
    MultiGraph graph;
    RoleMap roles;
    EmbeddingParams params;
    std::uint64_t x_lo = 0, x_hi = 0;
    EmbeddingStats stats;
    bool allow_pairs = false;  // generated graphs may pair leftover degree-1 vertices

    std::vector<std::string> comments() const {
        std::vector<std::string> c{params.line()};
        std::ostringstream os;
        os << "stats: core=" << stats.core << " gamma=" << stats.gamma << " x=" << stats.x << " w=" << stats.w
           << " v1=" << stats.v1 << " pairs=" << stats.pairs << " balance=" << stats.balance_edges << " x_interval=["
           << x_lo << ',' << x_hi << ']';
        c.push_back(os.str());
        for (auto& t : params.trace) c.push_back("trace: " + t);
        for (auto& cert : params.certificates) c.push_back(cert.to_text());
        return c;
    }
};

namespace detail {

struct BuildOptions {
    bool gen = false;
    std::uint64_t seed = 0;
    WheelHook* hook = nullptr;
};

// The Figure-1 wiring: core + Gamma matching, one X edge for each Gamma, W and
// V1 vertex, balancing X-W edges, then fill_wheel(X) and fill_wheel(W).
inline EmbeddingResult build_embedding(const MultiGraph& core, const DegreeSequence& seq, std::uint64_t lo,
                                       std::uint64_t hi, const BuildOptions& bo) {
    const std::uint64_t D = seq.delta();
    if (seq.edges() > kMaxBuildEdges)
        throw ScaleError("target has " + std::to_string(seq.edges()) + " edges, above the build cap of " +
                         std::to_string(kMaxBuildEdges));
    if (seq.total_nodes >= UINT32_MAX) throw ScaleError("target has too many vertices");
    std::vector<std::uint64_t> left = seq.counts;
    const std::size_t N = core.n();
    std::vector<std::uint64_t> target;
    target.reserve(seq.total_nodes);
    for (Vertex v = 0; v < N; ++v) {
        auto t = core.degree(v) + 1;
        if (t > D || left[t] == 0)
            throw InfeasibleEmbedding("core-slots", "no free degree-" + std::to_string(t) + " slot for core vertex " + std::to_string(v));
        --left[t];
        target.push_back(t);
    }
    if (N > 0 && (D < 2 || left[2] < N))
        throw InfeasibleEmbedding("gamma-slots", "need " + std::to_string(N) + " degree-2 slots, have " +
                                                     std::to_string(D < 2 ? 0 : left[2]));
    if (N > 0) left[2] -= N;
    if (lo < 2 && !(bo.gen && lo > hi)) throw InfeasibleEmbedding("x-interval", "lower end " + std::to_string(lo) + " below 2");
    std::vector<std::uint64_t> xcount(D + 1, 0);
    std::size_t nx = 0;
    for (std::uint64_t j = std::max<std::uint64_t>(lo, 2); j <= std::min(hi, D); ++j) {
        xcount[j] = left[j];
        nx += left[j];
        left[j] = 0;
    }
    if (nx == 0 && !bo.gen) throw InfeasibleEmbedding("x-interval", "no free slots in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");

    EmbeddingResult r;
    auto& roles = r.roles.role;
    roles.assign(N, Role::Core);
    for (Vertex v = 0; v < N; ++v) {
        roles.push_back(Role::Gamma);
        target.push_back(2);
    }
    std::vector<Vertex> xs, ws, v1s, gam;
    auto push = [&](Role role, std::uint64_t deg, std::vector<Vertex>& into) {
        into.push_back(static_cast<Vertex>(roles.size()));
        roles.push_back(role);
        target.push_back(deg);
    };
    for (std::uint64_t j = 2; j <= D; ++j)
        for (std::uint64_t k = 0; k < xcount[j]; ++k) push(Role::X, j, xs);
    for (std::uint64_t j = 2; j <= D; ++j)
        for (std::uint64_t k = 0; k < left[j]; ++k) push(Role::W, j, ws);
    for (std::uint64_t k = 0; k < (D >= 1 ? left[1] : 0); ++k) push(Role::V1, 1, v1s);
    for (Vertex v = 0; v < N; ++v) gam.push_back(static_cast<Vertex>(N + v));

    auto& g = r.graph;
    g = MultiGraph(roles.size());
    g.reserve_edges(seq.edges());
    for (auto [u, v] : core.edges()) g.add_edge(u, v);
    for (Vertex v = 0; v < N; ++v) g.add_edge(v, static_cast<Vertex>(N + v));
    ResidualState rs{std::vector<std::uint64_t>(roles.size()), target};
    for (Vertex v = 0; v < roles.size(); ++v) rs.residual[v] = target[v] - g.degree(v);

    Rng rng(substream(bo.seed, "attach"));
    std::vector<Vertex> v1_order = v1s, w_order = ws;
    fisher_yates(v1_order.begin(), v1_order.end(), rng);
    fisher_yates(w_order.begin(), w_order.end(), rng);

    auto link = [&](Vertex a, Vertex b) {
        g.add_edge(a, b);
        --rs.residual[a];
        --rs.residual[b];
    };
    // one leaf per X vertex first, in X order
    if (v1_order.size() < xs.size() && !bo.gen)
        throw InfeasibleEmbedding("leaves", std::to_string(v1_order.size()) + " degree-1 vertices for " + std::to_string(xs.size()) + " X vertices");
    const std::size_t first = std::min(v1_order.size(), xs.size());
    for (std::size_t i = 0; i < first; ++i) link(v1_order[i], xs[i]);

    WheelClasses wx(xs, rs);
    std::vector<Vertex> leftover;
    auto attach = [&](Vertex p, bool may_pair) {
        if (wx.empty()) {
            if (may_pair) {
                leftover.push_back(p);
                return;
            }
            throw InfeasibleEmbedding("x-volume", "X residual exhausted before every Gamma/W/V1 vertex got its X edge");
        }
        Vertex x = wx.take(*wx.top(), rs);
        g.add_edge(p, x);
        --rs.residual[p];
    };
    for (std::size_t i = first; i < v1_order.size(); ++i) attach(v1_order[i], bo.gen);
    for (auto p : gam) attach(p, false);
    for (auto p : w_order) attach(p, false);

    WheelClasses ww(ws, rs);
    if (leftover.size() % 2) {
        if (ww.empty()) throw InternalInvariantViolation("odd number of unattached degree-1 vertices");
        Vertex w = ww.take(*ww.top(), rs);
        g.add_edge(leftover.back(), w);
        --rs.residual[leftover.back()];
        leftover.pop_back();
    }
    for (std::size_t i = 0; i + 1 < leftover.size(); i += 2) {
        link(leftover[i], leftover[i + 1]);
        ++r.stats.pairs;
    }
    while (wx.sum() % 2 || !wx.feasible() || !ww.feasible()) {
        if (wx.empty() || ww.empty())
            throw InfeasibleEmbedding("wheel-balance", "residual profiles of X and W cannot be completed");
        Vertex a = wx.take(*wx.top(), rs);
        Vertex b = ww.take(*ww.top(), rs);
        g.add_edge(a, b);
        ++r.stats.balance_edges;
    }
    fill_wheel(g, rs, xs, bo.seed, bo.hook);
    fill_wheel(g, rs, ws, bo.seed, bo.hook);

    for (Vertex v = 0; v < roles.size(); ++v)
        if (rs.residual[v] != 0) throw InternalInvariantViolation("vertex " + std::to_string(v) + " keeps residual degree");
    auto h = g.degree_histogram();
    h.resize(seq.counts.size(), 0);
    auto want = seq.counts;
    want[0] = 0;
    if (h != want) throw InternalInvariantViolation("built degree histogram differs from the target sequence");

    r.stats.core = N;
    r.stats.gamma = N;
    r.stats.x = xs.size();
    r.stats.w = ws.size();
    r.stats.v1 = v1s.size();
    r.x_lo = lo;
    r.x_hi = hi;
    r.allow_pairs = bo.gen;
    return r;
}

}  // namespace detail

// Embeds `core` into the model of `params` (core vertex ids are kept).
inline EmbeddingResult construct_plg(const MultiGraph& core, const EmbeddingParams& params, std::uint64_t seed = 0,
                                     WheelHook* hook = nullptr) {
    auto seq = build_sequence(params.model);
    const std::uint64_t D = seq.delta();
    if (!params.relaxed && core.n() > 0) {
        long double lo = powl(params.N, params.a_exp / params.d_scale), hi = powl(params.N, params.b_exp / params.d_scale);
        for (auto d : core.degrees())
            if (static_cast<long double>(d) < lo * (1 - 1e-9L) || static_cast<long double>(d) > hi * (1 + 1e-9L))
                throw InfeasibleEmbedding("degree-window", "core degree " + std::to_string(d) + " outside [N^(a/d), N^(b/d)]");
    }
    auto r = detail::build_embedding(core, seq, params.x_low(D), params.x_high(D), {false, seed, hook});
    r.params = params;
    return r;
}

// A PLG realizing the exact degree sequence of p: construct_plg with an empty
// core and X a top interval [t, Delta]. Falls back to X = [2, Delta] with
// leftover degree-1 vertices paired off.
inline EmbeddingResult generate_plg(const PlgParams& p0, std::uint64_t seed = 0, WheelHook* hook = nullptr) {
    PlgParams p = p0;
    if (p0.is_functional()) p = p0.at_size(functional_size(p0));
    auto seq = build_sequence(p);
    if (seq.edges() > kMaxBuildEdges)
        throw ScaleError("target has " + std::to_string(seq.edges()) + " edges, above the build cap of " +
                         std::to_string(kMaxBuildEdges));
    const std::uint64_t D = seq.delta();
    EmbeddingParams ep;
    ep.regime = classify_regime(p.beta);
    ep.beta = p.beta;
    if (p0.is_functional()) ep.beta_fn_name = p0.beta_fn->name;
    ep.alpha = p.alpha;
    ep.scale = p.scale;
    ep.relaxed = true;
    ep.model = p;
    MultiGraph empty;
    detail::BuildOptions bo{true, seed, hook};
    auto finish = [&](EmbeddingResult r, std::uint64_t t) {
        ep.x = D ? static_cast<double>(t) / static_cast<double>(D) : 0;
        ep.x_gap = 1 - ep.x;
        r.params = ep;
        return r;
    };
    if (D >= 2) {
        std::vector<u128> suf_vol(D + 2, 0);
        std::vector<std::uint64_t> pre(D + 2, 0);
        for (std::uint64_t j = D; j >= 1; --j) suf_vol[j] = suf_vol[j + 1] + static_cast<u128>(seq.counts[j]) * j;
        for (std::uint64_t j = 1; j <= D; ++j) pre[j + 1] = pre[j] + seq.counts[j];
        // pre[t] = |[1, t-1]|
        int tries = 0;
        for (std::uint64_t t = D; t >= 2 && tries < 8; --t) {
            std::uint64_t nx = pre[D + 1] - pre[t];
            if (nx == 0 || suf_vol[t] < pre[t] || seq.counts[1] < nx) continue;
            ++tries;
            try {
                return finish(detail::build_embedding(empty, seq, t, D, bo), t);
            } catch (const InfeasibleEmbedding&) {
            } catch (const WheelStall&) {
            }
        }
        return finish(detail::build_embedding(empty, seq, 2, D, bo), 2);
    }
    return finish(detail::build_embedding(empty, seq, 2, 1, bo), 0);
}

// ---------------------------------------------------------------- verification

struct CheckReport {
    struct Check {
        std::string name;
        bool pass;
        std::string detail;
    };
    std::vector<Check> checks;

    bool all_pass() const {
        return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
    }
    const Check* find(const std::string& name) const {
        for (auto& c : checks)
            if (c.name == name) return &c;
        return nullptr;
    }
    std::vector<std::string> lines() const {
        std::vector<std::string> out;
        for (auto& c : checks) out.push_back("verify " + c.name + ' ' + (c.pass ? "PASS" : "FAIL") + (c.detail.empty() ? "" : ": " + c.detail));
        return out;
    }
};

inline CheckReport verify_embedding(const EmbeddingResult& r) {
    CheckReport rep;
    const auto& g = r.graph;
    const auto& role = r.roles.role;
    auto add = [&](std::string name, bool pass, std::string detail = {}) {
        rep.checks.push_back({std::move(name), pass, std::move(detail)});
    };
    add("handshake", g.recount_check());
    bool part = role.size() == g.n();
    add("roles-partition", part, part ? "" : "role count differs from vertex count");
    if (!part) return rep;

    if (g.n() == 0) {
        add("degree-sequence", true, "empty graph");
    } else {
        bool ok = false;
        std::string why;
        try {
            auto seq = build_sequence(r.params.model);
            auto h = g.degree_histogram();
            auto want = seq.counts;
            want[0] = 0;
            h.resize(std::max(h.size(), want.size()), 0);
            want.resize(h.size(), 0);
            ok = h == want;
            if (!ok) why = "histogram differs from the model sequence";
        } catch (const Error& e) {
            why = e.what();
        }
        add("degree-sequence", ok, why);
    }

    std::size_t ncore = r.roles.count(Role::Core), ngam = r.roles.count(Role::Gamma);
    bool match = ncore == ngam;
    std::string mwhy = match ? "" : "|Gamma| != |core|";
    auto nb_role = [&](Vertex v, Role want) {
        std::size_t c = 0;
        auto [b, e] = g.neighbors(v);
        for (auto it = b; it != e; ++it) c += role[*it] == want;
        return c;
    };
    for (Vertex v = 0; v < g.n() && match; ++v) {
        if (role[v] == Role::Gamma && (g.degree(v) != 2 || nb_role(v, Role::Core) != 1)) {
            match = false;
            mwhy = "Gamma vertex " + std::to_string(v) + " lacks a unique core partner";
        }
        if (role[v] == Role::Core && nb_role(v, Role::Gamma) != 1) {
            match = false;
            mwhy = "core vertex " + std::to_string(v) + " lacks a unique Gamma partner";
        }
    }
    add("gamma-matching", match, mwhy);

    bool v1ok = true, wok = true, xok = true, xwin = true;
    std::string v1why, wwhy, xwhy, xwwhy;
    for (Vertex v = 0; v < g.n(); ++v) {
        switch (role[v]) {
            case Role::V1: {
                if (!v1ok) break;
                if (g.degree(v) != 1) {
                    v1ok = false;
                    v1why = "V1 vertex " + std::to_string(v) + " has degree " + std::to_string(g.degree(v));
                    break;
                }
                Vertex u = *g.neighbors(v).first;
                bool paired = r.allow_pairs && role[u] == Role::V1;
                bool to_w = r.allow_pairs && role[u] == Role::W;
                if (role[u] != Role::X && !paired && !to_w) {
                    v1ok = false;
                    v1why = "V1 vertex " + std::to_string(v) + " is not attached to X";
                }
                break;
            }
            case Role::W:
            case Role::Gamma:
                if (wok && nb_role(v, Role::X) < 1) {
                    wok = false;
                    wwhy = "vertex " + std::to_string(v) + " has no X neighbor";
                }
                break;
            case Role::X: {
                if (xok) {
                    std::size_t leaves = 0;
                    auto [b, e] = g.neighbors(v);
                    for (auto it = b; it != e; ++it) leaves += g.degree(*it) == 1;
                    if (leaves == 0 && !r.allow_pairs) {
                        xok = false;
                        xwhy = "X vertex " + std::to_string(v) + " has no degree-1 neighbor";
                    }
                }
                if (xwin && (g.degree(v) < r.x_lo || g.degree(v) > r.x_hi)) {
                    xwin = false;
                    xwwhy = "X vertex " + std::to_string(v) + " has degree outside the X interval";
                }
                break;
            }
            case Role::Core: break;
        }
    }
    add("v1-attach", v1ok, v1why);
    add("w-attach", wok, wwhy);
    add("x-leaf", xok, xwhy);
    add("x-window", xwin, xwwhy);
    return rep;
}

// Core dominating set from a PLG dominating set: keep its core vertices and
// replace each Gamma vertex by its core partner.
inline VertexSet transfer_solution(const EmbeddingResult& r, const VertexSet& d_plg) {
    if (!is_dominating(r.graph, d_plg)) throw NotDominating("transfer_solution: input does not dominate the PLG");
    const auto& role = r.roles.role;
    VertexSet out;
    for (auto v : d_plg) {
        if (role[v] == Role::Core) out.push_back(v);
        else if (role[v] == Role::Gamma) {
            auto [b, e] = r.graph.neighbors(v);
            for (auto it = b; it != e; ++it)
                if (role[*it] == Role::Core) out.push_back(*it);
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// ---------------------------------------------------------------- pipeline

struct EmbedOptions {
    bool relax = false;
    double eps = 0.1;
    double theta = 0.5;
    std::uint64_t seed = 0;
    std::optional<BetaFunction> beta_fn;
    std::optional<double> a_exp, b_exp;  // default: the core's degree window
    WheelHook* hook = nullptr;
};

// choose_parameters -> scale_instance -> construct_plg. With relax the core is
// embedded unscaled (d = 1) at the smallest scale on a geometric grid that
// builds; certificates are reported, not enforced.
inline EmbeddingResult embed_instance(const MultiGraph& core, const BetaRegime& regime, const EmbedOptions& opt) {
    if (core.n() < 2) throw DomainError("core needs at least 2 vertices");
    const BetaFunction* bf = opt.beta_fn ? &*opt.beta_fn : nullptr;
    double a = 0, b = 0;
    if (opt.a_exp && opt.b_exp) {
        a = *opt.a_exp;
        b = *opt.b_exp;
    } else {
        std::uint64_t lo = UINT64_MAX, hi = 0;
        for (auto d : core.degrees()) {
            lo = std::min(lo, d);
            hi = std::max(hi, d);
        }
        double ln = std::log(static_cast<double>(core.n()));
        a = opt.a_exp.value_or(lo == 0 ? 0.0 : std::log(static_cast<double>(lo)) / ln);
        b = opt.b_exp.value_or(std::log(static_cast<double>(std::max<std::uint64_t>(hi, 1))) / ln);
        if (!(b > a)) b = a + 1e-6;
    }
    if (!opt.relax) {
        ChooseOptions co{opt.theta, opt.beta_fn, std::nullopt};
        auto params = choose_parameters(regime, core.n(), a, b, opt.eps, co);
        auto scaled = scale_instance(core, params.d_scale);
        return construct_plg(scaled, params, opt.seed, opt.hook);
    }
    // smallest grid scale whose model has room for the core targets and Gamma
    std::map<std::uint64_t, std::uint64_t> mult;
    for (auto d : core.degrees()) ++mult[d + 1];
    double beta0 = regime.kind == RegimeKind::FunctionalHard ? 2.0 : regime.beta;
    long double E = 2;
    for (auto [t, m] : mult) E = std::max(E, static_cast<long double>(m) * powl(t, beta0));
    E = std::max(E, static_cast<long double>(core.n() + mult[2]) * powl(2.0L, beta0));
    std::string last = "no attempt";
    for (int k = 0; k < 160; ++k, E *= 1.15L) {
        auto plan = detail::make_plan(regime, core.n(), a, b, bf, 1, E);
        if (!(E <= 4e18L)) break;
        auto seq = build_sequence(PlgParams::from_scale(static_cast<double>(E), regime.kind == RegimeKind::FunctionalHard ? plan.beta : regime.beta));
        if (seq.edges() > kMaxBuildEdges)
            throw InfeasibleEmbedding("relax-search", "scale grid reached the build cap after: " + last);
        // the planned x first, then top intervals [t, Delta] with room for the leaves
        const std::uint64_t D = seq.delta();
        std::vector<std::pair<double, double>> xs{{plan.x, plan.x_gap}};
        {
            std::uint64_t size = 0;
            u128 vol = 0;
            int found = 0;
            for (std::uint64_t t = D; t >= 2 && found < 6; --t) {
                size += seq.counts[t];
                vol += static_cast<u128>(seq.counts[t]) * t;
                if (size == 0 || size > seq.counts[1]) continue;
                if (vol < static_cast<u128>(seq.total_nodes - size)) continue;
                double Dd = static_cast<double>(D);
                xs.push_back({static_cast<double>(t) / Dd, static_cast<double>(D - t) / Dd});
                ++found;
            }
        }
        for (auto [x, gap] : xs) {
            plan.x = x;
            plan.x_gap = gap;
            auto ep = detail::to_params(plan, regime, a, b, opt.eps, opt.theta, bf);
            ep.relaxed = true;
            ep.certificates = detail::certify(plan, a, b, opt.theta);
            ep.trace.push_back("relaxed window: d = 1, e^alpha = " + detail::num(E) + " (grid step " +
                               std::to_string(k) + "), x = " + detail::num(x));
            try {
                return construct_plg(core, ep, opt.seed, opt.hook);
            } catch (const InfeasibleEmbedding& e) {
                last = e.what();
            } catch (const WheelStall& e) {
                last = e.what();
            } catch (const ScaleError& e) {
                throw InfeasibleEmbedding("relax-search", std::string(e.what()) + " after: " + last);
            }
        }
    }
    throw InfeasibleEmbedding("relax-search", last);
}

}  // namespace plgds
