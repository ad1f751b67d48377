#include <catch_amalgamated.hpp>

#include <cmath>

#include "plgds/bounds.hpp"

using namespace plgds;
using Catch::Approx;

// Oracle: plain partial sum to 10^6 terms plus the integral tail.
static double zeta_oracle(double s) {
    double acc = 0;
    const double T = 1e6;
    for (double j = T; j >= 1; j -= 1) acc += std::pow(j, -s);
    return acc + std::pow(T, 1 - s) / (s - 1) - 0.5 * std::pow(T, -s);
}

TEST_CASE("zeta: closed forms and oracle") {
    CHECK(zeta(2, 1e-10) == Approx(M_PI * M_PI / 6).margin(1e-10));
    CHECK(zeta(4, 1e-10) == Approx(std::pow(M_PI, 4) / 90).margin(1e-10));
    CHECK(zeta(3, 1e-10) == Approx(1.2020569031595942).margin(1e-10));
    CHECK(zeta(3, 1e-10) == Approx(zeta_oracle(3)).margin(1e-9));
    CHECK(zeta(1.5, 1e-10) == Approx(zeta_oracle(1.5)).margin(1e-8));
    CHECK(zeta(1.1, 1e-10) == Approx(10.584448464950810).margin(1e-8));
    CHECK_THROWS_AS(zeta(1.0), DivergentSeries);
    CHECK_THROWS_AS(zeta(0.5), DivergentSeries);
    CHECK_THROWS_AS(zeta(1.0 + 1e-7), DivergentSeries);
}

TEST_CASE("zeta: monotone and tends to one") {
    double prev = zeta(1.1);
    for (double s = 1.15; s <= 10.0; s += 0.05) {
        double z = zeta(s);
        CHECK(z < prev);
        prev = z;
    }
    CHECK(zeta(20) - 1 < 1e-5);
}

TEST_CASE("case_i_ratio") {
    double z3 = zeta_oracle(3), z2 = zeta_oracle(2);
    CHECK(case_i_ratio(3) == Approx((z3 - z2 / 2) / (1 - z2 / 2)).epsilon(1e-9));
    CHECK(case_i_ratio(3) == Approx(2.138).margin(1e-3));
    CHECK(std::fabs(case_i_ratio(50) - 1) < 1e-3);
    CHECK_THROWS_AS(case_i_ratio(2.5), RegimeViolation);
    double prev = case_i_ratio(2.75);
    for (double b = 2.76; b <= 10.0; b += 0.01) {
        double r = case_i_ratio(b);
        CHECK(r < prev);
        prev = r;
    }
}

TEST_CASE("shen_ratio") {
    double z3 = zeta_oracle(3);
    CHECK(shen_ratio(3) == Approx((z3 - 0.5) / (z3 - 1)).epsilon(1e-9));
    CHECK(shen_ratio(3) == Approx(3.474).margin(1e-3));
    CHECK_THROWS_AS(shen_ratio(2.0), RegimeViolation);
    // (zeta - 1/2)/(zeta - 1) grows without bound as zeta -> 1
    CHECK(shen_ratio(50) > 1e12);
    CHECK(shen_ratio(10) > shen_ratio(6));
}

TEST_CASE("case_i_ratio versus shen_ratio") {
    // case I lies below on [2.87, 10]; just above the crossover its
    // denominator 1 - zeta(beta-1)/2 vanishes and it lies above.
    CHECK(case_i_ratio(2.75) > shen_ratio(2.75));
    CHECK(case_i_ratio(2.86) > shen_ratio(2.86));
    for (int i = 0; i <= 713; ++i) {
        double b = 2.87 + 0.01 * i;
        CHECK(case_i_ratio(b) < shen_ratio(b));
    }
}

TEST_CASE("case_i_crossover") {
    double c = case_i_crossover();
    CHECK(c == Approx(2.729).margin(0.005));
    CHECK(zeta(c - 1) == Approx(2).margin(1e-3));
    CHECK(zeta(c + 0.01 - 1) < 2);
}

TEST_CASE("beta_threshold") {
    double b2 = beta_threshold(2), b3 = beta_threshold(3), b4 = beta_threshold(4);
    CHECK(b2 == Approx(2.48).margin(0.02));
    CHECK(b3 == Approx(2.44).margin(0.02));
    CHECK(b4 == Approx(2.40).margin(0.02));
    CHECK(b2 > b3);
    CHECK(b3 > b4);
    CHECK_THROWS_AS(beta_threshold(1), DomainError);
    // the base-k reading gives different thresholds
    CHECK(std::fabs(beta_threshold(2, ThresholdBase::K) - b2) > 0.02);
}

TEST_CASE("lemma3_bound") {
    CHECK(lemma3_bound(3, 2) == Approx((zeta_oracle(3) - 0.5) * 3).epsilon(1e-9));
    CHECK(lemma3_bound(3, 2) == Approx(2.106).margin(1e-3));
    double at = lemma3_bound(beta_threshold(2), 2);
    CHECK(std::isfinite(at));
    CHECK(at > 0);
    CHECK_THROWS_AS(lemma3_bound(2.3, 2), RegimeViolation);
    for (int k = 2; k <= 4; ++k)
        for (double b = 3; b <= 8; b += 0.5) CHECK(lemma3_bound(b, k) >= 1);
}

TEST_CASE("case_ii_bound") {
    auto r = case_ii_bound(2.6, std::log(1e6));
    CHECK(r.ratio >= 1);
    CHECK(r.d >= 2);
    double c = case_i_crossover();
    CHECK_NOTHROW(case_ii_bound(c - 0.01, std::log(1e5)));
    CHECK_THROWS_AS(case_ii_bound(c + 0.01, std::log(1e5)), RegimeViolation);
    // maximality: vol([d+1, Delta]) no longer exceeds floor(e^alpha)
    auto p = PlgParams::from_alpha(std::log(1e6), 2.6);
    auto D = p.delta();
    CHECK(interval_estimate(p, r.d, D).exact_volume > static_cast<u128>(1000000));
    CHECK(!(interval_estimate(p, r.d + 1, D).exact_volume > static_cast<u128>(1000000)));
    for (double b = 2.3; b < 2.7; b += 0.1) CHECK(case_ii_bound(b, std::log(1e5)).ratio >= 1);
}

TEST_CASE("hardness_factor") {
    double b = lemma1_b(0.2);
    CHECK(b == Approx(4.2 / 4.4));
    CHECK(lemma1_b(0.1) == Approx(4.1 / 4.2));
    CHECK(lemma1_b(0.1) == Approx(0.976).margin(1e-3));
    BetaRegime r{RegimeKind::OneToTwo, 1.5};
    double f6 = hardness_factor(r, 1e6, 0.2, 8, b);
    double f9 = hardness_factor(r, 1e9, 0.2, 8, b);
    CHECK(f6 > 0);
    CHECK(f9 > f6);
    double pre = hardness_prefactor(0.2);
    CHECK(f9 - f6 == Approx(pre * std::log(1e3) / (8 + b * 1.5)));
    CHECK_THROWS_AS(hardness_factor({RegimeKind::AboveTwo, 3}, 1e6, 0.2, 8, b), RegimeViolation);
    CHECK_THROWS_AS(hardness_factor({RegimeKind::FunctionalApx, 2.1}, 1e6, 0.2, 8, b), RegimeViolation);
    CHECK_THROWS_AS(hardness_factor(r, 1e6, 0.2, 3, b), DomainError);
    for (auto k : {RegimeKind::SubOne, RegimeKind::One, RegimeKind::OneToTwo, RegimeKind::Two}) {
        BetaRegime rr{k, k == RegimeKind::SubOne ? 0.5 : k == RegimeKind::One ? 1.0 : k == RegimeKind::Two ? 2.0 : 1.5};
        double prev = 0;
        for (double n = 1e3; n < 1e15; n *= 10) {
            double f = hardness_factor(rr, n, 0.1, 8, lemma1_b(0.1));
            CHECK(f > prev);
            prev = f;
        }
        double lnmin = hardness_log_n_min(rr, 0.1, 8, lemma1_b(0.1));
        CHECK(hardness_factor(rr, std::exp(lnmin + 1), 0.1, 8, lemma1_b(0.1)) > 1);
    }
}

TEST_CASE("classify_regime") {
    CHECK(classify_regime(0.5).kind == RegimeKind::SubOne);
    CHECK(classify_regime(1.0).kind == RegimeKind::One);
    CHECK(classify_regime(1.5).kind == RegimeKind::OneToTwo);
    CHECK(classify_regime(2.0).kind == RegimeKind::Two);
    CHECK(classify_regime(2.5).kind == RegimeKind::AboveTwo);
    CHECK(classify_regime(3.0).kind == RegimeKind::CaseI);
    CHECK(classify_regime(3.0).above_two());
    CHECK_THROWS_AS(classify_regime(0.0), DomainError);
    CHECK(classify_regime(log_squared(), 1000000).kind == RegimeKind::FunctionalHard);
    CHECK(classify_regime(log_over_loglog(), 1000000).kind == RegimeKind::FunctionalApx);
    BetaFunction undeclared{[](std::uint64_t) { return std::uint64_t{5}; }, Growth::Undeclared, "five"};
    CHECK_THROWS_AS(classify_regime(undeclared, 100), AmbiguousGrowth);
    // CaseI holds iff zeta(beta-1) < 2
    for (double b = 2.05; b < 6; b += 0.05)
        CHECK((classify_regime(b).kind == RegimeKind::CaseI) == (zeta(b - 1) < 2));
}

TEST_CASE("bound_report") {
    auto rep = bound_report(classify_regime(3.0), 1e6, 0.1);
    CHECK(rep.upper_ratio.has_value());
    CHECK(!rep.hardness_factor.has_value());
    auto rep2 = bound_report(classify_regime(1.2), 1e6, 0.1);
    CHECK(rep2.hardness_factor.has_value());
    CHECK(!rep2.upper_ratio.has_value());
    CHECK(rep2.to_text().find("regime=OneToTwo") != std::string::npos);
    auto rep3 = bound_report(classify_regime(log_over_loglog(), 1000000), 1e6, 0.1);
    CHECK(!rep3.hardness_factor.has_value());
}
