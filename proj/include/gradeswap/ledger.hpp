#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>
#include <openssl/evp.h>

#include "gradeswap/errors.hpp"

namespace gradeswap {

using json = nlohmann::ordered_json;

/// Lowercase hex SHA-256 of a byte string.
inline std::string sha256_hex(std::string_view data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int length = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("sha256: digest failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(2 * length);
    for (unsigned int i = 0; i < length; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0x0f]);
    }
    return out;
}

/// Everything the venue writes down.
enum class EventKind {
    LicenseIssued,
    OrderSubmitted,
    OrderCancelled,
    ContractProposed,
    ContractValidated,
    ContractExecuted,
    ContractReversed,
    ContractCancelled,
    CertificateIssued,
};

constexpr std::string_view to_string(EventKind k) noexcept {
    switch (k) {
        case EventKind::LicenseIssued: return "license_issued";
        case EventKind::OrderSubmitted: return "order_submitted";
        case EventKind::OrderCancelled: return "order_cancelled";
        case EventKind::ContractProposed: return "contract_proposed";
        case EventKind::ContractValidated: return "contract_validated";
        case EventKind::ContractExecuted: return "contract_executed";
        case EventKind::ContractReversed: return "contract_reversed";
        case EventKind::ContractCancelled: return "contract_cancelled";
        case EventKind::CertificateIssued: return "certificate_issued";
    }
    return "?";
}

inline EventKind event_kind_from_string(std::string_view s) {
    for (EventKind k : {EventKind::LicenseIssued, EventKind::OrderSubmitted,
                        EventKind::OrderCancelled, EventKind::ContractProposed,
                        EventKind::ContractValidated, EventKind::ContractExecuted,
                        EventKind::ContractReversed, EventKind::ContractCancelled,
                        EventKind::CertificateIssued})
        if (to_string(k) == s) return k;
    throw parse_error("ledger: unknown event kind '" + std::string(s) + "'");
}

/// One ledger entry. `chain` commits to every prior entry: it is the SHA-256
/// of the previous entry's chain digest concatenated with this entry's
/// canonical serialization (the JSON object without the chain field, compact,
/// fields in fixed order).
struct LedgerEvent {
    std::uint64_t sequence = 0;
    double timestamp = 0.0;
    EventKind kind = EventKind::LicenseIssued;
    json payload;
    std::string chain;

    std::string canonical() const {
        json j;
        j["sequence"] = sequence;
        j["timestamp"] = timestamp;
        j["kind"] = to_string(kind);
        j["payload"] = payload;
        return j.dump();
    }

    json to_json() const {
        json j;
        j["sequence"] = sequence;
        j["timestamp"] = timestamp;
        j["kind"] = to_string(kind);
        j["payload"] = payload;
        j["chain"] = chain;
        return j;
    }

    static LedgerEvent from_json(const json& j) {
        LedgerEvent e;
        e.sequence = j.at("sequence").get<std::uint64_t>();
        e.timestamp = j.at("timestamp").get<double>();
        e.kind = event_kind_from_string(j.at("kind").get<std::string>());
        e.payload = j.at("payload");
        e.chain = j.at("chain").get<std::string>();
        return e;
    }

    bool operator==(const LedgerEvent&) const = default;
};

/// Recomputes the digest chain. Returns the sequence number of the first
/// entry whose digest (or position) does not check out, or nothing if the
/// whole log is intact. The chain of the first entry hashes an empty
/// previous digest.
inline std::optional<std::uint64_t> verify_ledger(std::span<const LedgerEvent> events) {
    std::string prev;
    for (std::size_t i = 0; i < events.size(); ++i) {
        const auto& e = events[i];
        if (e.sequence != i) return static_cast<std::uint64_t>(i);
        if (e.chain != sha256_hex(prev + e.canonical())) return e.sequence;
        prev = e.chain;
    }
    return std::nullopt;
}

/// Append-only event log with a tamper-evident digest chain. Events are
/// numbered gaplessly from zero; nothing is ever rewritten.
class Ledger {
public:
    const LedgerEvent& append(double timestamp, EventKind kind, json payload) {
        LedgerEvent e;
        e.sequence = events_.size();
        e.timestamp = timestamp;
        e.kind = kind;
        e.payload = std::move(payload);
        e.chain = sha256_hex(last_digest() + e.canonical());
        events_.push_back(std::move(e));
        return events_.back();
    }

    const std::vector<LedgerEvent>& events() const noexcept { return events_; }
    std::size_t size() const noexcept { return events_.size(); }

    /// Digest of the newest entry; empty for an empty ledger.
    std::string last_digest() const { return events_.empty() ? std::string() : events_.back().chain; }

    std::optional<std::uint64_t> verify() const { return verify_ledger(events_); }

    /// One JSON object per line, in sequence order.
    void save(std::ostream& out) const {
        for (const auto& e : events_) out << e.to_json().dump() << '\n';
    }

    /// Loads a JSON-lines file as written by save. The chain is not checked
    /// here; call verify for that.
    static Ledger load(std::istream& in) {
        Ledger ledger;
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (line.empty()) continue;
            json j;
            try {
                j = json::parse(line);
            } catch (const nlohmann::json::exception& e) {
                throw parse_error("ledger: line " + std::to_string(lineno) + ": " + e.what());
            }
            try {
                ledger.events_.push_back(LedgerEvent::from_json(j));
            } catch (const nlohmann::json::exception& e) {
                throw parse_error("ledger: line " + std::to_string(lineno) + ": " + e.what());
            }
        }
        return ledger;
    }

private:
    std::vector<LedgerEvent> events_;
};

}  // namespace gradeswap
