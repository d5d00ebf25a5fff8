#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace gradeswap {

/// Market-wide rates for valuing grades, friendships and money over time.
/// All rates are continuously compounded, per year.
struct TimeValueParams {
    double grade_decay = 0.5;        ///< how fast the usefulness of a grade fades
    double friendship_growth = 0.3;  ///< growth of goodwill created by a swap
    double money_growth = 0.05;      ///< growth rate of invested money
    double discount_rate = 0.02;     ///< rate used to discount future amounts
    double utilization = 0.5;        ///< share of a held grade's value actually enjoyed

    void validate() const {
        auto ok = [](double v) { return std::isfinite(v) && v >= 0.0; };
        if (!ok(grade_decay) || !ok(friendship_growth) || !ok(money_growth) || !ok(discount_rate))
            throw std::invalid_argument("time value params: rates must be finite and non-negative");
        if (!(utilization >= 0.0 && utilization <= 1.0))
            throw std::invalid_argument("time value params: utilization must lie in [0, 1]");
    }
};

/// Value of a grade `years` after it was earned: exponential decay.
inline double grade_value(double initial, double decay_rate, double years) {
    if (!(initial >= 0.0) || !(decay_rate >= 0.0) || !(years >= 0.0))
        throw std::invalid_argument("grade_value: arguments must be non-negative");
    return initial * std::exp(-decay_rate * years);
}

/// Value of a growing holding (friendship, invested money) after `years`.
inline double growth_value(double initial, double growth_rate, double years) {
    if (!(initial >= 0.0) || !(growth_rate >= 0.0) || !(years >= 0.0))
        throw std::invalid_argument("growth_value: arguments must be non-negative");
    return initial * std::exp(growth_rate * years);
}

/// Highest fee the venue tolerates: one percent of the protected notional.
/// Admissible fees are strictly below this bound.
inline double fee_cap(double notional) {
    if (!(notional > 0.0))
        throw std::invalid_argument("fee_cap: notional must be positive");
    return 0.01 * notional;
}

inline bool fee_within_cap(double fee, double notional) {
    return fee >= 0.0 && fee < fee_cap(notional);
}

/// Smallest acceptable reversal payment: the growth the initial fee would
/// have earned had it been invested for the holding period.
inline double reversal_floor(double initial_fee, double money_growth, double years) {
    if (!(initial_fee >= 0.0) || !(money_growth >= 0.0) || !(years >= 0.0))
        throw std::invalid_argument("reversal_floor: arguments must be non-negative");
    return initial_fee * std::expm1(money_growth * years);
}

/// Present value of an amount received `years` from now.
inline double discounted(double amount, double discount_rate, double years) {
    if (!(discount_rate >= 0.0) || !(years >= 0.0))
        throw std::invalid_argument("discounted: rate and years must be non-negative");
    return amount * std::exp(-discount_rate * years);
}

/// Present value of the grade enjoyment a seller gives up while the swap is
/// on: the utilized, decaying grade value integrated and discounted over the
/// holding period. Closed form, with the exact limit at a zero total rate.
inline double forgone_grade_utility(double initial_grade_value, const TimeValueParams& params,
                                    double years) {
    if (!(initial_grade_value >= 0.0) || !(years >= 0.0))
        throw std::invalid_argument("forgone_grade_utility: arguments must be non-negative");
    params.validate();
    const double total_rate = params.grade_decay + params.discount_rate;
    const double scale = params.utilization * initial_grade_value;
    if (total_rate == 0.0) return scale * years;
    return scale * (-std::expm1(-total_rate * years)) / total_rate;
}

/// Negotiated terms of one swap.
struct TradeEconomics {
    double initial_fee = 0.0;            ///< paid by the buyer at inception
    double notional = 0.0;               ///< scholarship amount the swap protects
    double initial_grade_value = 0.0;    ///< worth of the swapped grade at inception
    double initial_friendship_value = 0.0;  ///< goodwill created at inception
    double holding_years = 0.0;          ///< time until the reversal is due

    void validate() const {
        if (!(notional > 0.0))
            throw std::invalid_argument("trade economics: notional must be positive");
        if (!(initial_fee >= 0.0) || !fee_within_cap(initial_fee, notional))
            throw std::invalid_argument("trade economics: fee must lie in [0, cap)");
        if (!(initial_grade_value >= 0.0) || !(initial_friendship_value >= 0.0) ||
            !(holding_years >= 0.0))
            throw std::invalid_argument("trade economics: values and horizon must be non-negative");
    }
};

struct PartyNpv {
    double seller = 0.0;
    double buyer = 0.0;
};

/// Net present value of a swap for each side.
///
/// The seller collects the fee now, the discounted reversal payment at the
/// end, and the discounted friendship growth, and forgoes the enjoyment of
/// the grade while it is lent out. The buyer keeps the notional alive, pays
/// the fee and the reversal payment, and shares the friendship growth.
inline PartyNpv trade_npv(const TradeEconomics& econ, const TimeValueParams& params) {
    econ.validate();
    params.validate();
    const double years = econ.holding_years;
    const double floor_payment = reversal_floor(econ.initial_fee, params.money_growth, years);
    const double floor_now = discounted(floor_payment, params.discount_rate, years);
    // Friendship appreciates at its own rate and is discounted back; only the
    // growth beyond the initial level counts as swap-created value.
    const double friendship_gain =
        econ.initial_friendship_value *
        std::expm1((params.friendship_growth - params.discount_rate) * years);
    const double forgone = forgone_grade_utility(econ.initial_grade_value, params, years);

    PartyNpv npv;
    npv.seller = econ.initial_fee + floor_now + friendship_gain - forgone;
    npv.buyer = econ.notional - econ.initial_fee - floor_now + friendship_gain;
    return npv;
}

/// The grid of negotiable terms covered by the valuation test suite. Rates
/// stay at the library defaults; fee, friendship, grade value and horizon
/// vary across realistic magnitudes around a 10,000 scholarship.
inline std::vector<TradeEconomics> default_npv_grid() {
    std::vector<TradeEconomics> grid;
    for (double fee : {0.0, 25.0, 50.0, 99.0})
        for (double friendship : {0.0, 10.0, 20.0, 40.0})
            for (double grade : {0.0, 20.0, 40.0})
                for (double years : {0.5, 1.0, 2.0, 4.0})
                    grid.push_back({fee, 10000.0, grade, friendship, years});
    return grid;
}

}  // namespace gradeswap
