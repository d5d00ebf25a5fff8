#pragma once

#include <cassert>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

namespace gradeswap {

/// Why the venue refused an action. Every refusal carries exactly one code so
/// callers and tests can tell the failure modes apart.
enum class Refusal {
    MissingEvidence,
    DuplicateLicense,
    UnknownStudent,
    UnknownCourse,
    UnknownGrade,
    SelfTrade,
    UnlicensedBuyer,
    UnlicensedSeller,
    GradeOrder,
    FeeCap,
    InvalidState,
    StaleSnapshot,
    RecordBusy,
    NotYetDue,
    NpvConstraint,
    UnknownContract,
    UnknownOrder,
};

constexpr std::string_view to_string(Refusal r) noexcept {
    switch (r) {
        case Refusal::MissingEvidence: return "missing-evidence";
        case Refusal::DuplicateLicense: return "duplicate-license";
        case Refusal::UnknownStudent: return "unknown-student";
        case Refusal::UnknownCourse: return "unknown-course";
        case Refusal::UnknownGrade: return "unknown-grade";
        case Refusal::SelfTrade: return "self-trade";
        case Refusal::UnlicensedBuyer: return "unlicensed-buyer";
        case Refusal::UnlicensedSeller: return "unlicensed-seller";
        case Refusal::GradeOrder: return "grade-order";
        case Refusal::FeeCap: return "fee-cap";
        case Refusal::InvalidState: return "invalid-state";
        case Refusal::StaleSnapshot: return "stale-snapshot";
        case Refusal::RecordBusy: return "record-busy";
        case Refusal::NotYetDue: return "not-yet-due";
        case Refusal::NpvConstraint: return "npv-constraint";
        case Refusal::UnknownContract: return "unknown-contract";
        case Refusal::UnknownOrder: return "unknown-order";
    }
    return "?";
}

/// Accepted-or-refused outcome of a venue operation. A refusal is a normal
/// answer, not an exception: the caller decides what to do with it.
template <typename T>
class Result {
public:
    static Result accepted(T value) {
        Result r;
        r.value_ = std::move(value);
        return r;
    }

    static Result refused(Refusal code, std::string detail = {}) {
        Result r;
        r.code_ = code;
        r.detail_ = std::move(detail);
        return r;
    }

    bool ok() const noexcept { return value_.has_value(); }
    explicit operator bool() const noexcept { return ok(); }

    const T& value() const {
        assert(ok());
        return *value_;
    }
    T& value() {
        assert(ok());
        return *value_;
    }

    Refusal refusal() const {
        assert(!ok());
        return code_;
    }
    const std::string& detail() const noexcept { return detail_; }

private:
    Result() = default;

    std::optional<T> value_;
    Refusal code_{};
    std::string detail_;
};

}  // namespace gradeswap
