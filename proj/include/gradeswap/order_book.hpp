#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "gradeswap/gradebook.hpp"
#include "gradeswap/grades.hpp"
#include "gradeswap/ledger.hpp"
#include "gradeswap/licenses.hpp"
#include "gradeswap/result.hpp"
#include "gradeswap/valuation.hpp"

namespace gradeswap {

enum class Side { Bid, Ask };

constexpr std::string_view to_string(Side s) noexcept { return s == Side::Bid ? "bid" : "ask"; }

inline Side side_from_string(std::string_view s) {
    if (s == "bid") return Side::Bid;
    if (s == "ask") return Side::Ask;
    throw parse_error("unknown order side '" + std::string(s) + "'");
}

/// A resting order. Bids come from licensed buyers who need a better grade;
/// asks from licensed sellers offering one. `current_grade` is attested
/// against the gradebook on submission.
struct Order {
    std::uint64_t id = 0;
    std::uint64_t submitted_at = 0;  // venue-assigned arrival number
    Side side = Side::Bid;
    std::string student;
    std::string course;
    LetterGrade current_grade = LetterGrade::F;
    // Bid terms.
    LetterGrade min_acceptable_grade = LetterGrade::F;
    double max_fee = 0.0;
    double notional = 0.0;
    // Ask terms.
    double min_fee = 0.0;

    bool operator==(const Order&) const = default;

    json to_json() const {
        json j;
        j["id"] = id;
        j["submitted_at"] = submitted_at;
        j["side"] = to_string(side);
        j["student"] = student;
        j["course"] = course;
        j["current_grade"] = to_string(current_grade);
        if (side == Side::Bid) {
            j["min_acceptable_grade"] = to_string(min_acceptable_grade);
            j["max_fee"] = max_fee;
            j["notional"] = notional;
        } else {
            j["min_fee"] = min_fee;
        }
        return j;
    }
};

/// A crossed pair the matcher proposes to the venue.
struct MatchProposal {
    std::uint64_t bid_id = 0;
    std::uint64_t ask_id = 0;
    std::string buyer;
    std::string seller;
    std::string course;
    double fee = 0.0;

    bool operator==(const MatchProposal&) const = default;

    json to_json() const {
        json j;
        j["bid_id"] = bid_id;
        j["ask_id"] = ask_id;
        j["buyer"] = buyer;
        j["seller"] = seller;
        j["course"] = course;
        j["fee"] = fee;
        return j;
    }
};

/// How the agreed fee is struck when a bid crosses an ask.
enum class FeePolicy {
    Midpoint,  ///< halfway between limits, rounded down to the cent
    AtAsk,     ///< the seller's limit
};

inline FeePolicy fee_policy_from_string(std::string_view s) {
    if (s == "midpoint") return FeePolicy::Midpoint;
    if (s == "at-ask" || s == "at_ask") return FeePolicy::AtAsk;
    throw parse_error("unknown fee policy '" + std::string(s) + "'");
}

constexpr std::string_view to_string(FeePolicy p) noexcept {
    return p == FeePolicy::Midpoint ? "midpoint" : "at-ask";
}

/// Price-time priority book for grade swaps, fully transparent: snapshots
/// expose every resting order with its identity.
///
/// Matching walks bids from the most generous (highest max_fee, then earliest
/// arrival) and pairs each with the cheapest compatible ask (lowest min_fee,
/// then earliest arrival). Compatibility: same course, the ask's grade is
/// strictly better than the bid's current grade and no worse than the bid's
/// minimum acceptable grade, and the limits cross. Matched orders leave the
/// book; one sweep reaches the fixpoint because a skipped bid can never gain
/// a compatible ask when later matches only remove asks.
class OrderBook {
public:
    explicit OrderBook(FeePolicy policy = FeePolicy::Midpoint) : policy_(policy) {}

    FeePolicy policy() const noexcept { return policy_; }

    /// Admission control. The order must come from a student licensed for its
    /// side, its attested grade must match the gradebook, and bid fees must
    /// respect the cap. Accepted orders receive an id and an arrival number.
    Result<Order> submit(Order order, const LicenseSet& licenses, const Gradebook& gradebook) {
        const Role needed = order.side == Side::Bid ? Role::Buyer : Role::Seller;
        if (!licenses.has_active(order.student, needed))
            return Result<Order>::refused(order.side == Side::Bid ? Refusal::UnlicensedBuyer
                                                                  : Refusal::UnlicensedSeller,
                                          order.student);
        auto recorded = gradebook.find(order.student, order.course);
        if (!recorded || *recorded != order.current_grade)
            return Result<Order>::refused(Refusal::UnknownGrade,
                                          "attested grade does not match the gradebook");
        if (order.side == Side::Bid) {
            if (!(order.notional > 0.0) || !(order.max_fee >= 0.0) ||
                !fee_within_cap(order.max_fee, order.notional))
                return Result<Order>::refused(Refusal::FeeCap,
                                              "bid limit must lie in [0, cap) of a positive notional");
        } else {
            if (!(order.min_fee >= 0.0))
                return Result<Order>::refused(Refusal::FeeCap, "ask limit must be non-negative");
        }

        order.id = next_id_++;
        order.submitted_at = next_arrival_++;
        auto& side = order.side == Side::Bid ? bids_ : asks_;
        side.push_back(order);
        return Result<Order>::accepted(side.back());
    }

    /// Removes a resting order. Matched or unknown ids refuse alike: the book
    /// no longer knows them.
    Result<std::uint64_t> cancel(std::uint64_t order_id) {
        for (auto* side : {&bids_, &asks_}) {
            auto it = std::find_if(side->begin(), side->end(),
                                   [&](const Order& o) { return o.id == order_id; });
            if (it != side->end()) {
                side->erase(it);
                return Result<std::uint64_t>::accepted(order_id);
            }
        }
        return Result<std::uint64_t>::refused(Refusal::UnknownOrder, std::to_string(order_id));
    }

    /// Runs one matching sweep and returns the proposals, best bids first.
    std::vector<MatchProposal> match() {
        std::vector<MatchProposal> proposals;
        std::stable_sort(bids_.begin(), bids_.end(), bid_priority);
        std::stable_sort(asks_.begin(), asks_.end(), ask_priority);

        std::vector<Order> resting_bids;
        std::vector<bool> ask_taken(asks_.size(), false);
        for (auto& bid : bids_) {
            bool matched = false;
            for (std::size_t i = 0; i < asks_.size(); ++i) {
                if (ask_taken[i] || !compatible(bid, asks_[i])) continue;
                proposals.push_back({bid.id, asks_[i].id, bid.student, asks_[i].student,
                                     bid.course, agreed_fee(bid, asks_[i])});
                ask_taken[i] = true;
                matched = true;
                break;
            }
            if (!matched) resting_bids.push_back(bid);
        }

        bids_ = std::move(resting_bids);
        std::vector<Order> resting_asks;
        for (std::size_t i = 0; i < asks_.size(); ++i)
            if (!ask_taken[i]) resting_asks.push_back(asks_[i]);
        asks_ = std::move(resting_asks);
        return proposals;
    }

    /// Every resting order: bids in priority order, then asks. Serializing
    /// the same book twice yields identical bytes.
    json snapshot() const {
        std::vector<Order> bids = bids_;
        std::vector<Order> asks = asks_;
        std::stable_sort(bids.begin(), bids.end(), bid_priority);
        std::stable_sort(asks.begin(), asks.end(), ask_priority);
        json j;
        j["bids"] = json::array();
        j["asks"] = json::array();
        for (const auto& o : bids) j["bids"].push_back(o.to_json());
        for (const auto& o : asks) j["asks"].push_back(o.to_json());
        return j;
    }

    std::size_t open_orders() const noexcept { return bids_.size() + asks_.size(); }

private:
    static bool bid_priority(const Order& a, const Order& b) {
        if (a.max_fee != b.max_fee) return a.max_fee > b.max_fee;
        return a.submitted_at < b.submitted_at;
    }

    static bool ask_priority(const Order& a, const Order& b) {
        if (a.min_fee != b.min_fee) return a.min_fee < b.min_fee;
        return a.submitted_at < b.submitted_at;
    }

    static bool compatible(const Order& bid, const Order& ask) {
        return bid.course == ask.course && rank(ask.current_grade) > rank(bid.current_grade) &&
               rank(ask.current_grade) >= rank(bid.min_acceptable_grade) &&
               ask.min_fee <= bid.max_fee;
    }

    double agreed_fee(const Order& bid, const Order& ask) const {
        if (policy_ == FeePolicy::AtAsk) return ask.min_fee;
        const double midpoint = (ask.min_fee + bid.max_fee) / 2.0;
        // Round down to the cent, but never below the ask's limit.
        return std::max(ask.min_fee, std::floor(midpoint * 100.0) / 100.0);
    }

    FeePolicy policy_;
    std::vector<Order> bids_;
    std::vector<Order> asks_;
    std::uint64_t next_id_ = 1;
    std::uint64_t next_arrival_ = 0;
};

}  // namespace gradeswap
