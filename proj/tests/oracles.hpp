#pragma once

// Independent reference implementations used to pin expected values. These
// deliberately take different routes than the library: extended precision,
// closed forms, exhaustive enumeration and plain quadrature, so agreement is
// evidence rather than tautology.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

#include "gradeswap/order_book.hpp"

namespace oracles {

/// The exam-weight rule evaluated entirely in long double.
inline double midterm_weight_reference(double volatility) {
    const long double constant =
        std::pow(10.0L, std::sqrt(std::log(std::exp(4.0L)))) / std::sqrt(std::log(std::exp(25.0L)));
    const long double raw = constant - static_cast<long double>(volatility);
    return static_cast<double>(std::min(15.0L, std::max(0.0L, raw)));
}

/// Composite Simpson quadrature with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
    if (n % 2 != 0) ++n;
    const double h = (b - a) / n;
    double sum = f(a) + f(b);
    for (int i = 1; i < n; ++i) sum += f(a + h * i) * (i % 2 == 0 ? 2.0 : 4.0);
    return sum * h / 3.0;
}

/// Standard normal CDF via the closed erfc form.
inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

/// Minimum total |count - target| over every order-respecting assignment of
/// whole tie groups to buckets. `groups` holds tie-group sizes best-first,
/// `targets` the integer seats per bucket.
inline long long min_deviation_assignment(const std::vector<long long>& groups,
                                          const std::vector<long long>& targets) {
    long long best = std::numeric_limits<long long>::max();
    std::vector<long long> counts(targets.size(), 0);
    // Bucket choices must be non-decreasing so better scores never land on
    // worse grades.
    std::function<void(std::size_t, std::size_t)> walk = [&](std::size_t g, std::size_t min_bucket) {
        if (g == groups.size()) {
            long long dev = 0;
            for (std::size_t b = 0; b < targets.size(); ++b) dev += std::llabs(counts[b] - targets[b]);
            best = std::min(best, dev);
            return;
        }
        for (std::size_t b = min_bucket; b < targets.size(); ++b) {
            counts[b] += groups[g];
            walk(g + 1, b);
            counts[b] -= groups[g];
        }
    };
    walk(0, 0);
    return best;
}

/// Brute-force restatement of the matching rule with linear scans instead of
/// the book's sorted sweep: repeatedly pick the most generous unmatched bid,
/// then its cheapest-then-earliest compatible ask.
inline std::vector<gradeswap::MatchProposal> naive_match(std::vector<gradeswap::Order> bids,
                                                         std::vector<gradeswap::Order> asks,
                                                         gradeswap::FeePolicy policy) {
    using gradeswap::Order;
    auto bid_before = [](const Order& a, const Order& b) {
        if (a.max_fee != b.max_fee) return a.max_fee > b.max_fee;
        return a.submitted_at < b.submitted_at;
    };
    auto ask_before = [](const Order& a, const Order& b) {
        if (a.min_fee != b.min_fee) return a.min_fee < b.min_fee;
        return a.submitted_at < b.submitted_at;
    };
    auto compatible = [](const Order& bid, const Order& ask) {
        return bid.course == ask.course &&
               gradeswap::rank(ask.current_grade) > gradeswap::rank(bid.current_grade) &&
               gradeswap::rank(ask.current_grade) >= gradeswap::rank(bid.min_acceptable_grade) &&
               ask.min_fee <= bid.max_fee;
    };

    std::vector<bool> bid_done(bids.size(), false), ask_done(asks.size(), false);
    std::vector<gradeswap::MatchProposal> out;
    for (std::size_t round = 0; round < bids.size(); ++round) {
        std::size_t bi = bids.size();
        for (std::size_t i = 0; i < bids.size(); ++i)
            if (!bid_done[i] && (bi == bids.size() || bid_before(bids[i], bids[bi]))) bi = i;
        if (bi == bids.size()) break;
        bid_done[bi] = true;

        std::size_t ai = asks.size();
        for (std::size_t i = 0; i < asks.size(); ++i) {
            if (ask_done[i] || !compatible(bids[bi], asks[i])) continue;
            if (ai == asks.size() || ask_before(asks[i], asks[ai])) ai = i;
        }
        if (ai == asks.size()) continue;
        ask_done[ai] = true;

        double fee = asks[ai].min_fee;
        if (policy == gradeswap::FeePolicy::Midpoint) {
            const double midpoint = (asks[ai].min_fee + bids[bi].max_fee) / 2.0;
            fee = std::max(asks[ai].min_fee, std::floor(midpoint * 100.0) / 100.0);
        }
        out.push_back({bids[bi].id, asks[ai].id, bids[bi].student, asks[ai].student,
                       bids[bi].course, fee});
    }
    return out;
}

}  // namespace oracles
