#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "gradeswap/errors.hpp"
#include "gradeswap/result.hpp"

namespace gradeswap {

enum class Role { Buyer, Seller };

constexpr std::string_view to_string(Role r) noexcept {
    return r == Role::Buyer ? "buyer" : "seller";
}

inline Role role_from_string(std::string_view s) {
    if (s == "buyer") return Role::Buyer;
    if (s == "seller") return Role::Seller;
    throw parse_error("unknown role '" + std::string(s) + "'");
}

/// Permission to act on one side of the market, granted against documented
/// evidence (scholarship need for buyers, a strong held grade for sellers).
struct TradingLicense {
    std::string holder;
    Role role = Role::Buyer;
    std::string evidence;
    double issued_at = 0.0;

    bool operator==(const TradingLicense&) const = default;
};

/// The set of licenses currently in force. At most one license per holder and
/// role; evidence must not be blank.
class LicenseSet {
public:
    Result<TradingLicense> issue(const std::string& holder, Role role, const std::string& evidence,
                                 double issued_at) {
        if (holder.empty() || evidence.empty())
            return Result<TradingLicense>::refused(Refusal::MissingEvidence,
                                                   "a license needs a holder and evidence");
        if (has_active(holder, role))
            return Result<TradingLicense>::refused(
                Refusal::DuplicateLicense, holder + " already holds a " +
                                               std::string(to_string(role)) + " license");
        licenses_.push_back({holder, role, evidence, issued_at});
        return Result<TradingLicense>::accepted(licenses_.back());
    }

    bool has_active(const std::string& holder, Role role) const {
        for (const auto& l : licenses_)
            if (l.holder == holder && l.role == role) return true;
        return false;
    }

    const std::vector<TradingLicense>& all() const noexcept { return licenses_; }

    bool operator==(const LicenseSet&) const = default;

private:
    std::vector<TradingLicense> licenses_;
};

}  // namespace gradeswap
