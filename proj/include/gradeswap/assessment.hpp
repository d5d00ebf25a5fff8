#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "gradeswap/score_sheet.hpp"

namespace gradeswap {

/// Leading constant of the mid-term weight rule. The defining expression is
/// evaluated every time rather than folded into a literal; the surrounding
/// tests pin its value against an independent extended-precision evaluation.
inline double structural_constant() {
    return std::pow(10.0, std::sqrt(std::log(std::exp(4.0)))) /
           std::sqrt(std::log(std::exp(25.0)));
}

/// Mid-term weight as a function of the cohort's score volatility. Flat at 15
/// for low volatility, then falls one-for-one, floored at zero.
inline double midterm_weight(double volatility) {
    if (!(volatility >= 0.0))
        throw std::invalid_argument("midterm_weight: volatility must be non-negative");
    return std::min(15.0, std::max(0.0, structural_constant() - volatility));
}

/// Final-exam weight; together the two exams always carry 40 points.
inline double final_weight(double volatility) {
    return 40.0 - midterm_weight(volatility);
}

/// Population standard deviation (divide by n, not n - 1).
inline double population_stddev(std::span<const double> values) {
    if (values.empty())
        throw std::invalid_argument("population_stddev: empty sample");
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    return std::sqrt(ss / static_cast<double>(values.size()));
}

/// Volatility of a score sheet: population standard deviation of its scores.
inline double volatility(const ScoreSheet& sheet) {
    if (sheet.empty())
        throw std::invalid_argument("volatility: empty score sheet");
    std::vector<double> values;
    values.reserve(sheet.size());
    for (const auto& [id, score] : sheet.entries()) values.push_back(score);
    return population_stddev(values);
}

/// Weight assigned to any scored entity from its historical score series.
inline double entity_weight(std::span<const double> series) {
    return midterm_weight(population_stddev(series));
}

/// Complete split of the 100 course points for one cohort volatility.
struct WeightScheme {
    double score_volatility = 0.0;
    double midterm = 15.0;
    double final_exam = 25.0;
    /// Attendance, assignments and participation: fixed at 60 regardless of
    /// how noisy the exam scores are.
    double fixed = 60.0;

    static WeightScheme from_volatility(double volatility) {
        WeightScheme w;
        w.score_volatility = volatility;
        w.midterm = midterm_weight(volatility);
        w.final_exam = final_weight(volatility);
        w.fixed = 60.0;
        return w;
    }

    double total() const noexcept { return midterm + final_exam + fixed; }
};

/// Blend of the two phases of a time-to-live score. Both phase scores live on
/// [0, 100]; the first phase's weight is a fraction of 100.
inline double ttl_combine(double phase1, double phase2, double phase1_weight) {
    if (!(phase1 >= 0.0 && phase1 <= 100.0) || !(phase2 >= 0.0 && phase2 <= 100.0))
        throw std::invalid_argument("ttl_combine: phase scores must lie in [0, 100]");
    if (!(phase1_weight >= 0.0 && phase1_weight <= 100.0))
        throw std::invalid_argument("ttl_combine: weight must lie in [0, 100]");
    return (phase1 * phase1_weight + phase2 * (100.0 - phase1_weight)) / 100.0;
}

/// Percentage growth that may be unbounded. Finite values are plain percents;
/// growth from a zero base is reported as infinite rather than an error.
class ExtendedPercent {
public:
    static ExtendedPercent infinite() noexcept {
        return ExtendedPercent(std::numeric_limits<double>::infinity());
    }
    static ExtendedPercent finite(double percent) noexcept { return ExtendedPercent(percent); }

    bool is_infinite() const noexcept { return std::isinf(value_); }
    /// The percent value; +infinity when the growth is unbounded.
    double value() const noexcept { return value_; }

    friend auto operator<=>(const ExtendedPercent&, const ExtendedPercent&) = default;

private:
    explicit ExtendedPercent(double v) noexcept : value_(v) {}
    double value_;
};

/// Relative progress from `start` to `end`, in percent. Any positive step
/// away from a zero start is infinite progress.
inline ExtendedPercent progress_ratio(double start, double end) {
    if (!(start >= 0.0) || !(end >= 0.0))
        throw std::invalid_argument("progress_ratio: levels must be non-negative");
    if (start == 0.0) {
        if (end == 0.0) return ExtendedPercent::finite(0.0);
        return ExtendedPercent::infinite();
    }
    return ExtendedPercent::finite((end - start) / start * 100.0);
}

}  // namespace gradeswap
