#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "gradeswap/valuation.hpp"
#include "oracles.hpp"

using namespace gradeswap;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("grade value decays exponentially") {
    CHECK(grade_value(100.0, 0.5, 0.0) == 100.0);
    // Frozen from a 40-digit evaluation of 100*exp(-1).
    CHECK_THAT(grade_value(100.0, 0.5, 2.0), WithinRel(36.78794411714423, 1e-12));
    CHECK(grade_value(100.0, 0.0, 10.0) == 100.0);
    CHECK(grade_value(0.0, 0.5, 3.0) == 0.0);
    CHECK_THROWS_AS(grade_value(-1.0, 0.5, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(grade_value(1.0, -0.5, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(grade_value(1.0, 0.5, -1.0), std::invalid_argument);

    double prev = grade_value(80.0, 0.3, 0.0);
    for (double t = 0.25; t <= 10.0; t += 0.25) {
        const double now = grade_value(80.0, 0.3, t);
        CHECK(now < prev);
        CHECK(now > 0.0);
        prev = now;
    }
}

TEST_CASE("growth value compounds continuously") {
    // Frozen from a 40-digit evaluation of 50*exp(0.1).
    CHECK_THAT(growth_value(50.0, 0.05, 2.0), WithinRel(55.25854590378238, 1e-12));
    CHECK(growth_value(50.0, 0.0, 7.0) == 50.0);
    CHECK(growth_value(0.0, 0.3, 7.0) == 0.0);
    CHECK_THROWS_AS(growth_value(-1.0, 0.1, 1.0), std::invalid_argument);

    std::mt19937 gen(5);
    std::uniform_real_distribution<double> v0(0.0, 500.0), rate(0.0, 0.6), years(0.0, 8.0);
    for (int i = 0; i < 2000; ++i) {
        const double v = v0(gen), r = rate(gen), t = years(gen);
        // Growing and then discounting at the same rate is the identity.
        CHECK_THAT(discounted(growth_value(v, r, t), r, t), WithinAbs(v, 1e-9 * (1.0 + v)));
        // Decay and growth are mirror images.
        CHECK_THAT(grade_value(v, r, t) * std::exp(r * t), WithinAbs(v, 1e-9 * (1.0 + v)));
    }
}

TEST_CASE("fee cap is one percent, strictly") {
    CHECK(fee_cap(10000.0) == 100.0);
    CHECK(fee_cap(1.0) == 0.01);
    CHECK_THROWS_AS(fee_cap(0.0), std::invalid_argument);
    CHECK_THROWS_AS(fee_cap(-5.0), std::invalid_argument);

    CHECK(fee_within_cap(99.99, 10000.0));
    CHECK_FALSE(fee_within_cap(100.0, 10000.0));  // equality is out
    CHECK_FALSE(fee_within_cap(100.01, 10000.0));
    CHECK(fee_within_cap(0.0, 10000.0));
    CHECK_FALSE(fee_within_cap(-0.01, 10000.0));
}

TEST_CASE("reversal floor equals the forgone investment growth") {
    // Frozen from a 40-digit evaluation of 50*(exp(0.1)-1).
    CHECK_THAT(reversal_floor(50.0, 0.05, 2.0), WithinRel(5.258545903782381, 1e-12));
    CHECK(reversal_floor(50.0, 0.0, 2.0) == 0.0);
    CHECK(reversal_floor(0.0, 0.05, 2.0) == 0.0);
    CHECK(reversal_floor(50.0, 0.05, 0.0) == 0.0);

    std::mt19937 gen(23);
    std::uniform_real_distribution<double> fee(0.0, 100.0), rate(0.0, 0.4), years(0.0, 6.0);
    for (int i = 0; i < 5000; ++i) {
        const double f = fee(gen), r = rate(gen), t = years(gen);
        // fee + floor must reproduce the fully grown fee to near machine
        // precision; expm1 keeps this honest for tiny r*t.
        const double grown = f * std::exp(r * t);
        CHECK_THAT(f + reversal_floor(f, r, t), WithinAbs(grown, 1e-12 * (1.0 + grown)));
        CHECK(reversal_floor(f, r, t) >= 0.0);
    }
}

TEST_CASE("discounting spot values") {
    CHECK(discounted(100.0, 0.1, 0.0) == 100.0);
    // Frozen from a 40-digit evaluation of 100*exp(-0.1).
    CHECK_THAT(discounted(100.0, 0.1, 1.0), WithinRel(90.48374180359596, 1e-12));
    CHECK(discounted(0.0, 0.1, 5.0) == 0.0);
    CHECK_THROWS_AS(discounted(1.0, -0.1, 1.0), std::invalid_argument);
}

TEST_CASE("forgone grade utility agrees with direct quadrature") {
    TimeValueParams params;  // defaults: decay 0.5, discount 0.02, utilization 0.5

    // Frozen from a 40-digit evaluation of the closed form at the defaults.
    CHECK_THAT(forgone_grade_utility(40.0, params, 2.0), WithinRel(24.867127616969994, 1e-12));
    CHECK(forgone_grade_utility(40.0, params, 0.0) == 0.0);
    CHECK(forgone_grade_utility(0.0, params, 3.0) == 0.0);

    // The zero-rate limit is exactly linear in time.
    TimeValueParams zero;
    zero.grade_decay = 0.0;
    zero.discount_rate = 0.0;
    zero.utilization = 1.0;
    CHECK(forgone_grade_utility(10.0, zero, 3.0) == 30.0);

    // Long horizons approach utilization * value / total rate.
    TimeValueParams flat;
    flat.grade_decay = 0.5;
    flat.discount_rate = 0.0;
    flat.utilization = 1.0;
    CHECK_THAT(forgone_grade_utility(100.0, flat, 1e7), WithinRel(200.0, 1e-9));

    std::mt19937 gen(29);
    std::uniform_real_distribution<double> value(0.0, 100.0), rate(0.0, 0.8), years(0.01, 5.0),
        util(0.0, 1.0);
    for (int i = 0; i < 300; ++i) {
        TimeValueParams p;
        p.grade_decay = rate(gen);
        p.discount_rate = rate(gen);
        p.utilization = util(gen);
        const double v = value(gen), t = years(gen);
        const double direct = oracles::simpson(
            [&](double s) { return p.utilization * v * std::exp(-(p.grade_decay + p.discount_rate) * s); },
            0.0, t, 2000);
        CHECK_THAT(forgone_grade_utility(v, p, t), WithinAbs(direct, 1e-8 * (1.0 + direct)));
    }
}

TEST_CASE("trade npv at the reference point") {
    TimeValueParams params;
    TradeEconomics econ{50.0, 10000.0, 40.0, 10.0, 2.0};
    const auto value = trade_npv(econ, params);
    // Frozen from a 40-digit evaluation of the closed forms.
    CHECK_THAT(value.seller, WithinRel(37.691952755642837, 1e-12));
    CHECK_THAT(value.buyer, WithinRel(9952.454369633309, 1e-12));
}

TEST_CASE("degenerate trade carries no value beyond the notional") {
    TimeValueParams params;
    TradeEconomics econ{0.0, 10000.0, 0.0, 0.0, 2.0};
    const auto value = trade_npv(econ, params);
    CHECK(value.seller == 0.0);
    CHECK(value.buyer == 10000.0);
}

TEST_CASE("trade economics validation") {
    TimeValueParams params;
    CHECK_THROWS_AS(trade_npv({100.0, 10000.0, 0.0, 0.0, 1.0}, params), std::invalid_argument);
    CHECK_THROWS_AS(trade_npv({-1.0, 10000.0, 0.0, 0.0, 1.0}, params), std::invalid_argument);
    CHECK_THROWS_AS(trade_npv({10.0, 0.0, 0.0, 0.0, 1.0}, params), std::invalid_argument);
    CHECK_THROWS_AS(trade_npv({10.0, 10000.0, -1.0, 0.0, 1.0}, params), std::invalid_argument);
    CHECK_THROWS_AS(trade_npv({10.0, 10000.0, 0.0, 0.0, -1.0}, params), std::invalid_argument);
    CHECK_NOTHROW(trade_npv({99.99, 10000.0, 0.0, 0.0, 1.0}, params));

    TimeValueParams bad;
    bad.utilization = 1.5;
    CHECK_THROWS_AS(trade_npv({10.0, 10000.0, 0.0, 0.0, 1.0}, bad), std::invalid_argument);
}

TEST_CASE("npv moves the right way with each term") {
    TimeValueParams params;  // friendship growth 0.3 > discount 0.02
    const double years = 2.0;

    // Seller gains with the fee, the buyer pays for it.
    double prev_seller = -1e18, prev_buyer = 1e18;
    for (double fee : {0.0, 10.0, 25.0, 50.0, 99.0}) {
        const auto v = trade_npv({fee, 10000.0, 40.0, 10.0, years}, params);
        CHECK(v.seller > prev_seller);
        CHECK(v.buyer < prev_buyer);
        prev_seller = v.seller;
        prev_buyer = v.buyer;
    }

    // Both sides share the friendship upside.
    prev_seller = -1e18;
    prev_buyer = -1e18;
    for (double fr : {0.0, 5.0, 10.0, 20.0, 40.0}) {
        const auto v = trade_npv({50.0, 10000.0, 40.0, fr, years}, params);
        CHECK(v.seller > prev_seller);
        CHECK(v.buyer > prev_buyer);
        prev_seller = v.seller;
        prev_buyer = v.buyer;
    }

    // A faster friendship clock helps the seller.
    prev_seller = -1e18;
    for (double g : {0.05, 0.1, 0.2, 0.3, 0.5}) {
        TimeValueParams p;
        p.friendship_growth = g;
        const auto v = trade_npv({50.0, 10000.0, 40.0, 10.0, years}, p);
        CHECK(v.seller > prev_seller);
        prev_seller = v.seller;
    }

    // A more valuable grade costs the seller more to lend out.
    prev_seller = 1e18;
    for (double gv : {0.0, 10.0, 20.0, 40.0}) {
        const auto v = trade_npv({50.0, 10000.0, gv, 10.0, years}, params);
        CHECK(v.seller < prev_seller);
        prev_seller = v.seller;
    }
}

TEST_CASE("both sides stay positive across the documented grid") {
    TimeValueParams params;
    for (const auto& econ : default_npv_grid()) {
        if (!(econ.initial_fee > 0.0) || !(econ.initial_friendship_value > 0.0)) continue;
        const auto v = trade_npv(econ, params);
        INFO("fee " << econ.initial_fee << " friendship " << econ.initial_friendship_value
                    << " grade " << econ.initial_grade_value << " years " << econ.holding_years);
        CHECK(v.seller > 0.0);
        CHECK(v.buyer > 0.0);
    }
}
