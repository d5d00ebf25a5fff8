#pragma once

#include <cassert>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
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

enum class ContractState { Proposed, Licensed, Active, Reversed, Cancelled };

constexpr std::string_view to_string(ContractState s) noexcept {
    switch (s) {
        case ContractState::Proposed: return "proposed";
        case ContractState::Licensed: return "licensed";
        case ContractState::Active: return "active";
        case ContractState::Reversed: return "reversed";
        case ContractState::Cancelled: return "cancelled";
    }
    return "?";
}

/// One grade swap. The grade fields snapshot the gradebook at proposal time;
/// execution refuses to run if the book has moved since.
struct SwapContract {
    std::uint64_t id = 0;
    std::string buyer;
    std::string seller;
    std::string course;
    LetterGrade buyer_grade = LetterGrade::F;
    LetterGrade seller_grade = LetterGrade::F;
    std::uint64_t snapshot_version = 0;
    double fee = 0.0;
    double notional = 0.0;
    double initiated_at = 0.0;
    double reversal_due_at = 0.0;
    double reversal_payment = 0.0;
    ContractState state = ContractState::Proposed;

    bool operator==(const SwapContract&) const = default;

    json to_json() const {
        json j;
        j["id"] = id;
        j["buyer"] = buyer;
        j["seller"] = seller;
        j["course"] = course;
        j["buyer_grade"] = to_string(buyer_grade);
        j["seller_grade"] = to_string(seller_grade);
        j["fee"] = fee;
        j["notional"] = notional;
        j["initiated_at"] = initiated_at;
        j["reversal_due_at"] = reversal_due_at;
        j["reversal_payment"] = reversal_payment;
        j["state"] = to_string(state);
        return j;
    }
};

/// Public recognition of the seller's side of an executed swap.
struct Certificate {
    std::string recipient;
    std::uint64_t contract_id = 0;
    std::string citation;
    double issued_at = 0.0;

    bool operator==(const Certificate&) const = default;

    json to_json() const {
        json j;
        j["recipient"] = recipient;
        j["contract_id"] = contract_id;
        j["citation"] = citation;
        j["issued_at"] = issued_at;
        return j;
    }
};

/// The trading venue. Owns the gradebook, the license set, all contracts and
/// certificates, and an append-only event log from which the whole trading
/// state can be rebuilt.
///
/// Contract lifecycle: Proposed -> Licensed -> Active -> Reversed, with
/// Cancelled reachable from Proposed and Licensed only. Each transition is
/// validated, applied, and logged in that order; a refusal leaves no trace in
/// the state or the log.
class SwapEngine {
public:
    explicit SwapEngine(Gradebook initial, TimeValueParams params = {})
        : gradebook_(std::move(initial)), params_(params) {
        params_.validate();
    }

    // The registrar's own writes (imports, fresh allocations). These do not
    // go through the trade log; the log records trades, not coursework.
    void import_grade(const std::string& student, const std::string& course, LetterGrade grade) {
        gradebook_.set(student, course, grade);
    }

    Result<TradingLicense> issue_license(const std::string& holder, Role role,
                                         const std::string& evidence, double clock) {
        auto issued = licenses_.issue(holder, role, evidence, clock);
        if (!issued) return issued;
        json payload;
        payload["holder"] = holder;
        payload["role"] = to_string(role);
        payload["evidence"] = evidence;
        ledger_.append(clock, EventKind::LicenseIssued, payload);
        return issued;
    }

    /// Books a new contract in Proposed state against the current gradebook.
    Result<SwapContract> propose(const std::string& buyer, const std::string& seller,
                                 const std::string& course, double fee, double notional,
                                 double reversal_due_at, double clock) {
        if (!(fee >= 0.0) || !(notional > 0.0))
            throw std::invalid_argument("propose: fee must be non-negative and notional positive");
        if (!(reversal_due_at >= clock))
            throw std::invalid_argument("propose: reversal must not be due before inception");
        if (buyer == seller)
            return Result<SwapContract>::refused(Refusal::SelfTrade, buyer + " on both sides");
        auto buyer_grade = gradebook_.find(buyer, course);
        auto seller_grade = gradebook_.find(seller, course);
        if (!buyer_grade || !seller_grade) {
            if (!gradebook_.has_course(course))
                return Result<SwapContract>::refused(Refusal::UnknownCourse, course);
            return Result<SwapContract>::refused(Refusal::UnknownStudent,
                                                 !buyer_grade ? buyer : seller);
        }

        SwapContract c;
        c.id = next_contract_id_++;
        c.buyer = buyer;
        c.seller = seller;
        c.course = course;
        c.buyer_grade = *buyer_grade;
        c.seller_grade = *seller_grade;
        c.snapshot_version = gradebook_.version();
        c.fee = fee;
        c.notional = notional;
        c.initiated_at = clock;
        c.reversal_due_at = reversal_due_at;
        c.state = ContractState::Proposed;
        contracts_.emplace(c.id, c);

        json payload;
        payload["id"] = c.id;
        payload["buyer"] = buyer;
        payload["seller"] = seller;
        payload["course"] = course;
        payload["buyer_grade"] = to_string(c.buyer_grade);
        payload["seller_grade"] = to_string(c.seller_grade);
        payload["fee"] = fee;
        payload["notional"] = notional;
        payload["reversal_due_at"] = reversal_due_at;
        ledger_.append(clock, EventKind::ContractProposed, payload);
        return Result<SwapContract>::accepted(c);
    }

    /// Proposed -> Licensed: both parties licensed for their roles, the
    /// seller's grade strictly better than the buyer's, and the fee strictly
    /// under the cap.
    Result<SwapContract> validate(std::uint64_t id, double clock) {
        SwapContract* c = find_mut(id);
        if (!c) return Result<SwapContract>::refused(Refusal::UnknownContract, std::to_string(id));
        if (c->state != ContractState::Proposed)
            return Result<SwapContract>::refused(Refusal::InvalidState,
                                                 std::string(to_string(c->state)));
        if (!licenses_.has_active(c->buyer, Role::Buyer))
            return Result<SwapContract>::refused(Refusal::UnlicensedBuyer, c->buyer);
        if (!licenses_.has_active(c->seller, Role::Seller))
            return Result<SwapContract>::refused(Refusal::UnlicensedSeller, c->seller);
        if (rank(c->seller_grade) <= rank(c->buyer_grade))
            return Result<SwapContract>::refused(
                Refusal::GradeOrder, "seller must hold the strictly better grade");
        if (!fee_within_cap(c->fee, c->notional))
            return Result<SwapContract>::refused(Refusal::FeeCap,
                                                 "fee must stay strictly under one percent");

        c->state = ContractState::Licensed;
        json payload;
        payload["id"] = id;
        ledger_.append(clock, EventKind::ContractValidated, payload);
        return Result<SwapContract>::accepted(*c);
    }

    /// Licensed -> Active: swaps the two gradebook records and issues the
    /// seller's certificate. Refuses if the book moved since the proposal or
    /// if another active contract already occupies either record.
    Result<SwapContract> execute(std::uint64_t id, double clock) {
        SwapContract* c = find_mut(id);
        if (!c) return Result<SwapContract>::refused(Refusal::UnknownContract, std::to_string(id));
        if (c->state != ContractState::Licensed)
            return Result<SwapContract>::refused(Refusal::InvalidState,
                                                 std::string(to_string(c->state)));
        if (gradebook_.find(c->buyer, c->course) != c->buyer_grade ||
            gradebook_.find(c->seller, c->course) != c->seller_grade)
            return Result<SwapContract>::refused(Refusal::StaleSnapshot,
                                                 "gradebook changed since the proposal");
        for (const auto& [other_id, other] : contracts_) {
            if (other.state != ContractState::Active || other.course != c->course) continue;
            if (other.buyer == c->buyer || other.buyer == c->seller || other.seller == c->buyer ||
                other.seller == c->seller)
                return Result<SwapContract>::refused(
                    Refusal::RecordBusy, "record already held by contract " + std::to_string(other_id));
        }

        gradebook_.exchange(c->buyer, c->seller, c->course);
        c->state = ContractState::Active;

        json payload;
        payload["id"] = id;
        payload["buyer_grade_now"] = to_string(c->seller_grade);
        payload["seller_grade_now"] = to_string(c->buyer_grade);
        payload["fee_paid"] = c->fee;
        ledger_.append(clock, EventKind::ContractExecuted, payload);

        Certificate cert;
        cert.recipient = c->seller;
        cert.contract_id = id;
        cert.citation = "Awarded to " + c->seller + " for lending an earned " +
                        std::string(to_string(c->seller_grade)) + " in " + c->course +
                        " so that a fellow student could stay in school.";
        cert.issued_at = clock;
        certificates_.push_back(cert);
        ledger_.append(clock, EventKind::CertificateIssued, cert.to_json());
        return Result<SwapContract>::accepted(*c);
    }

    /// Active -> Reversed: only at or after the due time, and only for a
    /// payment at least as large as the growth the fee would have earned.
    /// Restores both records to their pre-swap grades.
    Result<SwapContract> reverse(std::uint64_t id, double clock, double payment) {
        SwapContract* c = find_mut(id);
        if (!c) return Result<SwapContract>::refused(Refusal::UnknownContract, std::to_string(id));
        if (c->state != ContractState::Active)
            return Result<SwapContract>::refused(Refusal::InvalidState,
                                                 std::string(to_string(c->state)));
        if (clock < c->reversal_due_at)
            return Result<SwapContract>::refused(Refusal::NotYetDue,
                                                 "due at " + std::to_string(c->reversal_due_at));
        const double floor_payment =
            reversal_floor(c->fee, params_.money_growth, clock - c->initiated_at);
        if (payment < floor_payment)
            return Result<SwapContract>::refused(
                Refusal::NpvConstraint, "payment must cover the invested growth of the fee");

        gradebook_.set_pair(c->buyer, c->buyer_grade, c->seller, c->seller_grade, c->course);
        c->state = ContractState::Reversed;
        c->reversal_payment = payment;

        json payload;
        payload["id"] = id;
        payload["payment"] = payment;
        ledger_.append(clock, EventKind::ContractReversed, payload);
        return Result<SwapContract>::accepted(*c);
    }

    /// Proposed or Licensed -> Cancelled. Once grades have moved the only way
    /// out is a reversal.
    Result<SwapContract> cancel(std::uint64_t id, double clock) {
        SwapContract* c = find_mut(id);
        if (!c) return Result<SwapContract>::refused(Refusal::UnknownContract, std::to_string(id));
        if (c->state != ContractState::Proposed && c->state != ContractState::Licensed)
            return Result<SwapContract>::refused(Refusal::InvalidState,
                                                 std::string(to_string(c->state)));
        c->state = ContractState::Cancelled;
        json payload;
        payload["id"] = id;
        ledger_.append(clock, EventKind::ContractCancelled, payload);
        return Result<SwapContract>::accepted(*c);
    }

    /// Order traffic is logged through the venue so the ledger is the one
    /// complete record of market activity.
    void record_order_event(EventKind kind, const json& payload, double clock) {
        assert(kind == EventKind::OrderSubmitted || kind == EventKind::OrderCancelled);
        ledger_.append(clock, kind, payload);
    }

    const Gradebook& gradebook() const noexcept { return gradebook_; }
    const LicenseSet& licenses() const noexcept { return licenses_; }
    const Ledger& ledger() const noexcept { return ledger_; }
    const std::vector<Certificate>& certificates() const noexcept { return certificates_; }
    const std::map<std::uint64_t, SwapContract>& contracts() const noexcept { return contracts_; }
    const TimeValueParams& params() const noexcept { return params_; }

    const SwapContract* find_contract(std::uint64_t id) const {
        auto it = contracts_.find(id);
        return it == contracts_.end() ? nullptr : &it->second;
    }

    /// Everything the event log determines, given the starting gradebook.
    struct State {
        Gradebook gradebook;
        LicenseSet licenses;
        std::map<std::uint64_t, SwapContract> contracts;
        std::vector<Certificate> certificates;

        bool operator==(const State&) const = default;
    };

    State state() const { return State{gradebook_, licenses_, contracts_, certificates_}; }

    /// Rebuilds the trading state by replaying events over the starting
    /// gradebook. The same moves are applied in the same order, so the result
    /// matches the live state bit for bit.
    static State replay(Gradebook initial, std::span<const LedgerEvent> events) {
        State s{std::move(initial), {}, {}, {}};
        for (const auto& e : events) {
            switch (e.kind) {
                case EventKind::LicenseIssued: {
                    auto issued = s.licenses.issue(e.payload.at("holder").get<std::string>(),
                                                   role_from_string(e.payload.at("role").get<std::string>()),
                                                   e.payload.at("evidence").get<std::string>(),
                                                   e.timestamp);
                    if (!issued) throw std::logic_error("replay: license refused");
                    break;
                }
                case EventKind::ContractProposed: {
                    SwapContract c;
                    c.id = e.payload.at("id").get<std::uint64_t>();
                    c.buyer = e.payload.at("buyer").get<std::string>();
                    c.seller = e.payload.at("seller").get<std::string>();
                    c.course = e.payload.at("course").get<std::string>();
                    c.buyer_grade = grade_from_string(e.payload.at("buyer_grade").get<std::string>());
                    c.seller_grade = grade_from_string(e.payload.at("seller_grade").get<std::string>());
                    c.snapshot_version = s.gradebook.version();
                    c.fee = e.payload.at("fee").get<double>();
                    c.notional = e.payload.at("notional").get<double>();
                    c.initiated_at = e.timestamp;
                    c.reversal_due_at = e.payload.at("reversal_due_at").get<double>();
                    c.state = ContractState::Proposed;
                    s.contracts.emplace(c.id, c);
                    break;
                }
                case EventKind::ContractValidated:
                    s.contracts.at(e.payload.at("id").get<std::uint64_t>()).state =
                        ContractState::Licensed;
                    break;
                case EventKind::ContractExecuted: {
                    auto& c = s.contracts.at(e.payload.at("id").get<std::uint64_t>());
                    s.gradebook.exchange(c.buyer, c.seller, c.course);
                    c.state = ContractState::Active;
                    break;
                }
                case EventKind::ContractReversed: {
                    auto& c = s.contracts.at(e.payload.at("id").get<std::uint64_t>());
                    s.gradebook.set_pair(c.buyer, c.buyer_grade, c.seller, c.seller_grade, c.course);
                    c.state = ContractState::Reversed;
                    c.reversal_payment = e.payload.at("payment").get<double>();
                    break;
                }
                case EventKind::ContractCancelled:
                    s.contracts.at(e.payload.at("id").get<std::uint64_t>()).state =
                        ContractState::Cancelled;
                    break;
                case EventKind::CertificateIssued: {
                    Certificate cert;
                    cert.recipient = e.payload.at("recipient").get<std::string>();
                    cert.contract_id = e.payload.at("contract_id").get<std::uint64_t>();
                    cert.citation = e.payload.at("citation").get<std::string>();
                    cert.issued_at = e.payload.at("issued_at").get<double>();
                    s.certificates.push_back(std::move(cert));
                    break;
                }
                case EventKind::OrderSubmitted:
                case EventKind::OrderCancelled:
                    // Book traffic does not move engine state.
                    break;
            }
        }
        return s;
    }

private:
    SwapContract* find_mut(std::uint64_t id) {
        auto it = contracts_.find(id);
        return it == contracts_.end() ? nullptr : &it->second;
    }

    Gradebook gradebook_;
    TimeValueParams params_;
    LicenseSet licenses_;
    std::map<std::uint64_t, SwapContract> contracts_;
    std::vector<Certificate> certificates_;
    Ledger ledger_;
    std::uint64_t next_contract_id_ = 1;
};

}  // namespace gradeswap
