#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>

#include "degree_model.hpp"
#include "errors.hpp"
#include "special.hpp"

namespace plgds {

enum class RegimeKind { SubOne, One, OneToTwo, Two, AboveTwo, CaseI, FunctionalHard, FunctionalApx };

inline const char* regime_name(RegimeKind k) {
    switch (k) {
        case RegimeKind::SubOne: return "SubOne";
        case RegimeKind::One: return "One";
        case RegimeKind::OneToTwo: return "OneToTwo";
        case RegimeKind::Two: return "Two";
        case RegimeKind::AboveTwo: return "AboveTwo";
        case RegimeKind::CaseI: return "CaseI";
        case RegimeKind::FunctionalHard: return "FunctionalHard";
        case RegimeKind::FunctionalApx: return "FunctionalApx";
    }
    return "?";
}

struct BetaRegime {
    RegimeKind kind;
    double beta;  // effective beta (beta_f at the given n for functional inputs)

    bool above_two() const { return kind == RegimeKind::AboveTwo || kind == RegimeKind::CaseI; }
    bool has_lower_bound() const {
        return kind == RegimeKind::SubOne || kind == RegimeKind::One || kind == RegimeKind::OneToTwo ||
               kind == RegimeKind::Two || kind == RegimeKind::FunctionalHard;
    }
    bool is_apx() const { return !has_lower_bound(); }
};

inline BetaRegime classify_regime(double beta) {
    if (!(beta > 0)) throw DomainError("beta must be positive");
    if (beta < 1) return {RegimeKind::SubOne, beta};
    if (beta == 1) return {RegimeKind::One, beta};
    if (beta < 2) return {RegimeKind::OneToTwo, beta};
    if (beta == 2) return {RegimeKind::Two, beta};
    if (beta - 1 > 1 + kZetaMinGap && zeta(beta - 1) < 2) return {RegimeKind::CaseI, beta};
    return {RegimeKind::AboveTwo, beta};
}

inline BetaRegime classify_regime(const BetaFunction& bf, std::uint64_t n) {
    switch (bf.growth) {
        case Growth::OmegaLogN: return {RegimeKind::FunctionalHard, bf.beta_at(n)};
        case Growth::LittleOLogN: return {RegimeKind::FunctionalApx, bf.beta_at(n)};
        case Growth::Undeclared: break;
    }
    throw AmbiguousGrowth("beta function '" + bf.name + "' has no declared growth class");
}

inline double case_i_ratio(double beta) {
    if (!(beta > 2 + kZetaMinGap)) throw RegimeViolation("case I needs beta > 2");
    double z1 = zeta(beta - 1);
    if (z1 >= 2) throw RegimeViolation("zeta(beta-1) >= 2: case II applies");
    return (zeta(beta) - z1 / 2) / (1 - z1 / 2);
}

inline double shen_ratio(double beta) {
    if (!(beta > 2)) throw RegimeViolation("shen ratio needs beta > 2");
    double z = zeta(beta);
    return (z - 0.5) / (z - 1);
}

// Root of zeta(beta - 1) = 2.
inline double case_i_crossover(double tol = kBisectTol) {
    return bisect([](double b) { return 2.0 - zeta(b - 1); }, 2.5, 3.5, tol);
}

enum class ThresholdBase { KPlusOne, K };

inline double beta_threshold(int k, ThresholdBase base = ThresholdBase::KPlusOne, double tol = kBisectTol) {
    if (k < 2) throw DomainError("beta_threshold needs k >= 2");
    double B = base == ThresholdBase::KPlusOne ? k + 1.0 : static_cast<double>(k);
    auto h = [&](double b) {
        return partial_zeta(b, static_cast<std::uint64_t>(k)) - 1.0 / (std::pow(B, b - 2) * (b - 2));
    };
    return bisect(h, 2.0 + 1e-9, 12.0, tol);
}

inline double lemma3_bound(double beta, int k) {
    double thr = beta_threshold(k);
    if (beta < thr) throw RegimeViolation("beta below beta_" + std::to_string(k));
    return (zeta(beta) - 0.5) * (beta - 2) * std::pow(k + 1.0, beta - 2);
}

struct CaseII {
    std::uint64_t d;
    double ratio;
};

// Largest d with vol([d, Delta]) > floor(e^alpha), i.e. the smallest top
// interval whose volume still covers the degree-1 targets.
inline CaseII case_ii_bound(double beta, double alpha) {
    if (!(beta > 2 + kZetaMinGap)) throw RegimeViolation("case II needs beta > 2");
    if (zeta(beta - 1) < 2) throw RegimeViolation("zeta(beta-1) < 2: case I applies");
    auto p = PlgParams::from_alpha(alpha, beta);
    std::uint64_t D = p.delta();
    bool bump = parity_bump(p);
    u128 target = static_cast<u128>(std::floor(p.scale));
    auto vol_from = [&](std::uint64_t d) { return interval_estimate(p, d, D, bump).exact_volume; };
    std::uint64_t lo = 1, hi = D;  // vol_from(lo) > target assumed
    if (!(vol_from(1) > target)) throw RegimeViolation("no interval has enough volume");
    while (lo < hi) {
        std::uint64_t mid = lo + (hi - lo + 1) / 2;
        if (vol_from(mid) > target)
            lo = mid;
        else
            hi = mid - 1;
    }
    std::uint64_t d = lo;
    double z = zeta(beta);
    return {d, (z - 1) / (z - partial_zeta(beta, d - 1))};
}

inline double lemma1_b(double eps) { return (eps + 4) / (2 * eps + 4); }

inline double hardness_prefactor(double eps) {
    double r = eps / (2 + eps);
    return (1 - eps) * r * std::pow(0.5, r);
}

// Displayed factor of the matching hardness theorem with o(1)/O(1) terms
// dropped (leading-term convention).
inline double hardness_factor(const BetaRegime& regime, double n, double eps, int d_scale, double b_exp) {
    if (!(eps > 0 && eps < 1)) throw DomainError("eps must lie in (0,1)");
    if (!(n > 1)) throw DomainError("n must exceed 1");
    double pre = hardness_prefactor(eps);
    double beta = regime.beta;
    double ln_n = std::log(n);
    switch (regime.kind) {
        case RegimeKind::OneToTwo:
            if (!(d_scale > (b_exp + 1) * beta / (beta - 1)))
                throw DomainError("d_scale must exceed (b+1)beta/(beta-1)");
            return pre * (ln_n - std::log(zeta(beta))) / (d_scale + b_exp * beta);
        case RegimeKind::Two:
        case RegimeKind::FunctionalHard:
            if (d_scale < 1) throw DomainError("d_scale must be >= 1");
            return pre * (ln_n - std::log(zeta(2.0))) / (d_scale + b_exp * 2.0);
        case RegimeKind::SubOne:
            if (d_scale < 1) throw DomainError("d_scale must be >= 1");
            return pre * (beta / (d_scale + b_exp * beta)) * (ln_n - std::log(1.0 / (1.0 - beta)));
        case RegimeKind::One:
            return pre * ln_n / (1 + b_exp);
        default:
            throw RegimeViolation(std::string("no lower bound in regime ") + regime_name(regime.kind));
    }
}

// ln n at which hardness_factor reaches 1.
inline double hardness_log_n_min(const BetaRegime& regime, double eps, int d_scale, double b_exp) {
    double base = hardness_factor(regime, std::exp(1.0), eps, d_scale, b_exp);
    double slope = hardness_factor(regime, std::exp(2.0), eps, d_scale, b_exp) - base;
    return 1.0 + (1.0 - base) / slope;
}

// Scaling exponent used by the 1 < beta < 2 construction.
inline int min_scale_exponent(double beta, double b_exp) {
    double lim = (b_exp + 1) * beta / (beta - 1);
    return static_cast<int>(std::floor(lim)) + 1;
}

struct BoundReport {
    BetaRegime regime;
    std::optional<double> hardness_factor;
    std::optional<double> upper_ratio;
    std::optional<double> log_n_min;
    double n = 0, eps = 0, b_exp = 0;
    int d_scale = 0;
    std::string upper_kind;

    std::string to_text() const {
        std::ostringstream os;
        os.precision(10);
        os << "regime=" << regime_name(regime.kind) << '\n';
        os << "beta=" << regime.beta << '\n';
        os << "n=" << n << '\n';
        os << "eps=" << eps << '\n';
        os << "d_scale=" << d_scale << '\n';
        os << "b_exp=" << b_exp << '\n';
        os << "convention=leading-term\n";
        if (hardness_factor) os << "hardness_factor=" << *hardness_factor << '\n';
        if (log_n_min) os << "ln_n_min=" << *log_n_min << '\n';
        if (upper_ratio) os << "upper_ratio=" << *upper_ratio << '\n' << "upper_kind=" << upper_kind << '\n';
        return os.str();
    }
};

// Default scaling exponent per lower-bound regime.
inline int default_d_scale(const BetaRegime& r, double b_exp) {
    switch (r.kind) {
        case RegimeKind::OneToTwo: return min_scale_exponent(r.beta, b_exp);
        case RegimeKind::One: return 1;
        case RegimeKind::FunctionalHard: return min_scale_exponent(r.beta, b_exp);
        default: return 2;
    }
}

inline BoundReport bound_report(const BetaRegime& r, double n, double eps, std::optional<int> d_scale = {}) {
    BoundReport rep;
    rep.regime = r;
    rep.n = n;
    rep.eps = eps;
    rep.b_exp = lemma1_b(eps);
    if (r.has_lower_bound()) {
        rep.d_scale = d_scale ? *d_scale : default_d_scale(r, rep.b_exp);
        rep.hardness_factor = hardness_factor(r, n, eps, rep.d_scale, rep.b_exp);
        rep.log_n_min = hardness_log_n_min(r, eps, rep.d_scale, rep.b_exp);
    } else if (r.kind == RegimeKind::CaseI) {
        rep.upper_ratio = case_i_ratio(r.beta);
        rep.upper_kind = "case_i";
    } else if (r.kind == RegimeKind::AboveTwo) {
        auto c2 = case_ii_bound(r.beta, std::log(n / zeta(r.beta)));
        rep.upper_ratio = c2.ratio;
        rep.upper_kind = "case_ii(d=" + std::to_string(c2.d) + ")";
    }
    return rep;
}

}  // namespace plgds
