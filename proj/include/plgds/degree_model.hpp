#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "special.hpp"

namespace plgds {

using u128 = unsigned __int128;

inline long double to_ld(u128 v) { return static_cast<long double>(v); }

inline std::string to_string(u128 v) {
    if (v == 0) return "0";
    std::string s;
    while (v > 0) {
        s.insert(s.begin(), static_cast<char>('0' + static_cast<int>(v % 10)));
        v /= 10;
    }
    return s;
}

enum class ParityRule { TotalDegree, NodeCount };
enum class Growth { OmegaLogN, LittleOLogN, Undeclared };

struct BetaFunction {
    std::function<std::uint64_t(std::uint64_t)> f;
    Growth growth = Growth::Undeclared;
    std::string name;

    std::uint64_t f_at(std::uint64_t n) const {
        auto v = f(n);
        return v < 1 ? 1 : v;
    }
    double beta_at(std::uint64_t n) const { return 2.0 + 1.0 / static_cast<double>(f_at(n)); }
};

inline double safe_ln(std::uint64_t n) { return std::log(static_cast<double>(n < 3 ? 3 : n)); }

// f(n) = ceil(ln^2 n), declared omega(log n)
inline BetaFunction log_squared() {
    return {[](std::uint64_t n) {
                double l = safe_ln(n);
                return static_cast<std::uint64_t>(std::ceil(l * l));
            },
            Growth::OmegaLogN, "ceil(ln^2 n)"};
}

// f(n) = ceil(ln n / ln ln n), declared o(log n)
inline BetaFunction log_over_loglog() {
    return {[](std::uint64_t n) {
                double l = safe_ln(n);
                double ll = std::log(l);
                if (ll < 1.0) ll = 1.0;
                return static_cast<std::uint64_t>(std::ceil(l / ll));
            },
            Growth::LittleOLogN, "ceil(ln n / ln ln n)"};
}

struct PlgParams {
    double alpha = 0;
    double scale = 1;  // e^alpha
    double beta = NAN;
    std::optional<BetaFunction> beta_fn;
    ParityRule parity = ParityRule::TotalDegree;

    static PlgParams from_alpha(double alpha, double beta) {
        PlgParams p;
        p.alpha = alpha;
        p.scale = std::exp(alpha);
        p.beta = beta;
        p.validate();
        return p;
    }
    static PlgParams from_scale(double scale, double beta) {
        PlgParams p;
        p.alpha = std::log(scale);
        p.scale = scale;
        p.beta = beta;
        p.validate();
        return p;
    }
    static PlgParams functional(double alpha, BetaFunction bf) {
        PlgParams p;
        p.alpha = alpha;
        p.scale = std::exp(alpha);
        p.beta_fn = std::move(bf);
        if (!(alpha > 0)) throw DomainError("alpha must be positive");
        return p;
    }

    bool is_functional() const { return beta_fn.has_value(); }

    // Fixed-beta view of a functional model at graph size n.
    PlgParams at_size(std::uint64_t n) const {
        if (!is_functional()) return *this;
        PlgParams p;
        p.alpha = alpha;
        p.scale = scale;
        p.parity = parity;
        p.beta = beta_fn->beta_at(n);
        return p;
    }

    void validate() const {
        if (!(alpha > 0)) throw DomainError("alpha must be positive");
        if (!(beta > 0)) throw DomainError("beta must be positive");
        if (scale > 4.0e18) throw ScaleError("e^alpha exceeds the count range");
    }

    std::uint64_t delta() const {
        if (is_functional()) throw DomainError("delta of a functional model needs a graph size");
        double d = snap_floor(std::pow(scale, 1.0 / beta));
        if (d > 1.8e19) throw ScaleError("Delta exceeds the count range");
        return d < 1 ? 1 : static_cast<std::uint64_t>(d);
    }

    // floor(e^alpha / i^beta) before the parity correction
    std::uint64_t raw_count(std::uint64_t i) const {
        return static_cast<std::uint64_t>(snap_floor(scale / std::pow(static_cast<double>(i), beta)));
    }

    bool near_branch() const {
        if (is_functional()) return false;
        return (beta != 1.0 && std::fabs(beta - 1.0) < 1e-9) || (beta != 2.0 && std::fabs(beta - 2.0) < 1e-9);
    }
};

// Calls cb(j0, j1, q) for maximal runs j0..j1 within [a, b] on which the raw
// count is the constant q. The number of runs is far below b - a for large b.
template <class Cb>
void for_each_run(const PlgParams& p, std::uint64_t a, std::uint64_t b, Cb cb) {
    std::uint64_t j = a;
    while (j <= b) {
        std::uint64_t q = p.raw_count(j);
        if (q == 0) break;
        std::uint64_t j1 = j;
        double est = snap_floor(std::pow(p.scale / static_cast<double>(q), 1.0 / p.beta));
        if (est > static_cast<double>(j)) j1 = est >= static_cast<double>(b) ? b : static_cast<std::uint64_t>(est);
        while (j1 > j && p.raw_count(j1) < q) --j1;
        while (j1 < b && p.raw_count(j1 + 1) >= q) ++j1;
        cb(j, j1, q);
        if (j1 == UINT64_MAX) break;
        j = j1 + 1;
    }
}

struct RawSums {
    u128 size = 0;
    u128 volume = 0;
};

inline RawSums raw_interval_sums(const PlgParams& p, std::uint64_t a, std::uint64_t b) {
    RawSums s;
    for_each_run(p, a, b, [&](std::uint64_t j0, std::uint64_t j1, std::uint64_t q) {
        u128 len = static_cast<u128>(j1 - j0 + 1);
        u128 jsum = (static_cast<u128>(j0) + j1) * len / 2;
        s.size += len * q;
        s.volume += jsum * q;
    });
    return s;
}

struct Totals {
    u128 nodes = 0;
    u128 degree = 0;
    bool parity_bump = false;
};

inline Totals exact_totals(const PlgParams& params) {
    if (params.is_functional()) throw DomainError("exact_totals needs a fixed beta");
    auto s = raw_interval_sums(params, 1, params.delta());
    Totals t{s.size, s.volume, false};
    bool odd = params.parity == ParityRule::TotalDegree ? (s.volume & 1) != 0 : (s.size & 1) != 0;
    if (odd) {
        t.parity_bump = true;
        t.nodes += 1;
        t.degree += 1;
    }
    return t;
}

struct DegreeSequence {
    std::vector<std::uint64_t> counts;  // counts[i], i in [1, Delta]; counts[0] unused
    std::uint64_t total_nodes = 0;
    std::uint64_t total_degree = 0;
    bool parity_bump = false;

    std::uint64_t delta() const { return counts.empty() ? 0 : counts.size() - 1; }
    std::uint64_t edges() const { return total_degree / 2; }
};

inline constexpr std::uint64_t kMaxSequenceDelta = 10'000'000;

inline DegreeSequence build_sequence(const PlgParams& p0, std::optional<std::uint64_t> n_for_functional = {}) {
    PlgParams p = p0;
    if (p0.is_functional()) {
        if (!n_for_functional) throw DomainError("functional model needs n_for_functional");
        p = p0.at_size(*n_for_functional);
    }
    std::uint64_t D = p.delta();
    if (D > kMaxSequenceDelta) throw ScaleError("Delta = " + std::to_string(D) + " exceeds the materialization cap");
    DegreeSequence s;
    s.counts.assign(D + 1, 0);
    u128 nodes = 0, degree = 0;
    for (std::uint64_t i = 1; i <= D; ++i) {
        s.counts[i] = p.raw_count(i);
        nodes += s.counts[i];
        degree += static_cast<u128>(s.counts[i]) * i;
    }
    bool odd = p.parity == ParityRule::TotalDegree ? (degree & 1) != 0 : (nodes & 1) != 0;
    if (odd) {
        s.counts[1] += 1;
        nodes += 1;
        degree += 1;
        s.parity_bump = true;
    }
    if (degree > static_cast<u128>(UINT64_MAX)) throw ScaleError("total degree exceeds the count range");
    s.total_nodes = static_cast<std::uint64_t>(nodes);
    s.total_degree = static_cast<std::uint64_t>(degree);
    return s;
}

struct ClosedForm {
    double n_approx;
    double m_approx;
    bool near_branch;
};

inline ClosedForm closed_form_counts(const PlgParams& p) {
    if (p.is_functional()) throw DomainError("closed_form_counts needs a fixed beta");
    double b = p.beta, E = p.scale, a = p.alpha;
    double n, m;
    if (b > 1)
        n = zeta(b) * E;
    else if (b == 1)
        n = a * E;
    else
        n = std::pow(E, 1.0 / b) / (1.0 - b);
    if (b > 2)
        m = 0.5 * zeta(b - 1) * E;
    else if (b == 2)
        m = 0.25 * a * E;
    else
        m = 0.5 * std::pow(E, 2.0 / b) / (2.0 - b);
    return {n, m, p.near_branch()};
}

// integral of x^{-s} over [lo, hi]
inline double power_integral(double s, double lo, double hi) {
    if (std::fabs(s - 1.0) < 1e-12) return std::log(hi / lo);
    return (std::pow(hi, 1.0 - s) - std::pow(lo, 1.0 - s)) / (1.0 - s);
}

// Bracket for sum_{j=a}^{b} j^{-s} by comparison with the integral.
inline std::pair<double, double> power_sum_bracket(double s, double a, double b) {
    if (s >= 0) return {power_integral(s, a, b + 1), std::pow(a, -s) + power_integral(s, a, b)};
    return {power_integral(s, a - 1, b), power_integral(s, a, b + 1)};
}

struct IntervalEstimate {
    std::uint64_t a = 0, b = 0;
    u128 exact_size = 0;
    u128 exact_volume = 0;
    double closed_form_size = 0;
    double closed_form_volume = 0;
    std::pair<double, double> size_bracket;
    std::pair<double, double> rounding_bracket;  // for the volume

    bool size_in_bracket(double rel = 1e-9) const {
        double v = static_cast<double>(to_ld(exact_size));
        return v >= size_bracket.first * (1 - rel) - 1e-9 && v <= size_bracket.second * (1 + rel) + 1e-9;
    }
    bool volume_in_bracket(double rel = 1e-9) const {
        double v = static_cast<double>(to_ld(exact_volume));
        return v >= rounding_bracket.first * (1 - rel) - 1e-9 && v <= rounding_bracket.second * (1 + rel) + 1e-9;
    }
};

// Exact parity correction of counts[1] for params (cached by callers that loop).
inline bool parity_bump(const PlgParams& p) { return exact_totals(p).parity_bump; }

inline IntervalEstimate interval_estimate(const PlgParams& p, std::uint64_t a, std::uint64_t b,
                                          std::optional<bool> bump_hint = {}) {
    if (p.is_functional()) throw DomainError("interval_estimate needs a fixed beta");
    std::uint64_t D = p.delta();
    if (a < 1 || a > b || b > D) throw DomainError("interval [" + std::to_string(a) + ", " + std::to_string(b) + "] outside [1, Delta]");
    IntervalEstimate e;
    e.a = a;
    e.b = b;
    auto s = raw_interval_sums(p, a, b);
    bool bump = a == 1 && (bump_hint ? *bump_hint : parity_bump(p));
    e.exact_size = s.size + (bump ? 1 : 0);
    e.exact_volume = s.volume + (bump ? 1 : 0);
    double E = p.scale, da = static_cast<double>(a), db = static_cast<double>(b);
    e.closed_form_size = E * power_integral(p.beta, da, db);
    e.closed_form_volume = E * power_integral(p.beta - 1.0, da, db);
    auto sb = power_sum_bracket(p.beta, da, db);
    auto vb = power_sum_bracket(p.beta - 1.0, da, db);
    double len = db - da + 1;
    double jsum = (da + db) * len / 2;
    double extra = bump ? 1.0 : 0.0;
    e.size_bracket = {E * sb.first - len, E * sb.second + extra};
    e.rounding_bracket = {E * vb.first - jsum, E * vb.second + extra};
    return e;
}

// Graph size of the functional model: the fixed point n = |V| of
// beta = 2 + 1/f(n). f is integer-valued and monotone, so this settles fast.
inline std::uint64_t functional_size(const PlgParams& p) {
    if (!p.is_functional()) return static_cast<std::uint64_t>(to_ld(exact_totals(p).nodes));
    std::uint64_t n = static_cast<std::uint64_t>(zeta(2.0) * p.scale) + 1;
    for (int it = 0; it < 64; ++it) {
        auto q = p.at_size(n);
        auto next = static_cast<std::uint64_t>(to_ld(exact_totals(q).nodes));
        if (p.beta_fn->f_at(next) == p.beta_fn->f_at(n)) return next;
        n = next;
    }
    throw InternalInvariantViolation("functional size iteration did not settle");
}

inline std::uint64_t functional_delta(const BetaFunction& bf, double alpha, std::uint64_t n) {
    return static_cast<std::uint64_t>(snap_floor(std::exp(alpha / bf.beta_at(n))));
}

inline double tau_bound(const BetaFunction& bf, std::uint64_t n, std::uint64_t delta_f = 0) {
    double f = static_cast<double>(bf.f_at(n));
    if (!(std::pow(1.0 + 1.0 / (2.0 * f), f) < 2.0))
        throw InternalInvariantViolation("tau: (1 + 1/(2f))^f < 2 fails");
    double inv = 1.0 / f;
    auto h = [&](double j) { return std::pow(j, -2.0) - std::pow(j, -2.0 - inv); };
    std::uint64_t top = delta_f ? delta_f : (n < 2 ? 2 : n);
    double best = h(2.0);
    auto check = [&](std::uint64_t j) {
        if (j != 2 && h(static_cast<double>(j)) > best)
            throw InternalInvariantViolation("tau: maximizer is j = " + std::to_string(j) + ", not 2");
    };
    for (std::uint64_t j = 1; j <= top && j <= 1000; ++j) check(j);
    for (double j = 1000; j <= static_cast<double>(top); j *= 1.05) check(static_cast<std::uint64_t>(j));
    check(top);
    return (std::pow(2.0, inv) - 1.0) / std::pow(2.0, 2.0 + inv);
}

inline std::pair<double, double> multiplicative_band(const BetaFunction& bf, std::uint64_t n, std::uint64_t j) {
    if (j < 1) throw DomainError("multiplicative_band: j must be >= 1");
    double f = static_cast<double>(bf.f_at(n));
    double j2 = static_cast<double>(j) * static_cast<double>(j);
    return {std::pow(static_cast<double>(n), -1.0 / f) / j2, 1.0 / j2};
}

inline void write_degree_csv(std::ostream& os, const std::vector<std::uint64_t>& counts) {
    os << "degree,count\n";
    for (std::size_t i = 1; i < counts.size(); ++i)
        if (counts[i]) os << i << ',' << counts[i] << '\n';
}

}  // namespace plgds
