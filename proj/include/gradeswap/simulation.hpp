#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gradeswap/curve.hpp"
#include "gradeswap/order_book.hpp"
#include "gradeswap/scenario.hpp"
#include "gradeswap/score_sheet.hpp"
#include "gradeswap/swap_engine.hpp"
#include "gradeswap/valuation.hpp"

namespace gradeswap {

/// Deterministic normal sampler: a mt19937_64 stream mapped through an
/// explicit Box-Muller transform (the "mt19937_64-boxmuller-v1" recipe).
/// Implemented by hand because the distribution adapters in the standard
/// library are free to differ between implementations, which would silently
/// break cross-toolchain reproducibility.
class ScoreRng {
public:
    explicit ScoreRng(std::uint64_t seed) : engine_(seed) {}

    /// Normal draw. A zero spread returns the mean without consuming any
    /// randomness, so degenerate students do not shift everyone else's draws.
    double normal(double mean, double stddev) {
        if (stddev == 0.0) return mean;
        if (have_spare_) {
            have_spare_ = false;
            return mean + stddev * spare_;
        }
        const double u1 = 1.0 - unit();  // in (0, 1], keeps the log finite
        const double u2 = unit();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return mean + stddev * radius * std::cos(angle);
    }

    /// A score draw, clamped onto the [0, 100] scale.
    double score(double mean, double stddev) {
        return std::clamp(normal(mean, stddev), 0.0, 100.0);
    }

private:
    // 53 uniform bits in [0, 1).
    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

/// One sampled point of the three time-value trajectories.
struct CurvePoint {
    double years = 0.0;
    double grade = 0.0;
    double friendship = 0.0;
    double money = 0.0;
};

/// Samples the decaying grade curve against the growing friendship and money
/// curves on an even time grid from zero to `horizon`.
inline std::vector<CurvePoint> emit_curves(const TimeValueParams& params, double grade0,
                                           double friendship0, double money0, double horizon,
                                           int steps) {
    params.validate();
    if (steps < 2) throw std::invalid_argument("emit_curves: need at least two samples");
    if (!(horizon > 0.0)) throw std::invalid_argument("emit_curves: horizon must be positive");
    std::vector<CurvePoint> points;
    points.reserve(static_cast<std::size_t>(steps));
    for (int i = 0; i < steps; ++i) {
        const double t = horizon * static_cast<double>(i) / static_cast<double>(steps - 1);
        points.push_back({t, grade_value(grade0, params.grade_decay, t),
                          growth_value(friendship0, params.friendship_growth, t),
                          growth_value(money0, params.money_growth, t)});
    }
    return points;
}

inline void write_curves_csv(std::ostream& out, const std::vector<CurvePoint>& points) {
    out << "years,grade_value,friendship_value,money_value\n";
    for (const auto& p : points)
        out << json(p.years).dump() << ',' << json(p.grade).dump() << ',' << json(p.friendship).dump()
            << ',' << json(p.money).dump() << '\n';
}

/// Mean grade points over every record a student holds.
inline double grade_point_average(const Gradebook& book, const std::string& student) {
    double sum = 0.0;
    int count = 0;
    for (const auto& [key, grade] : book.records()) {
        if (key.first != student) continue;
        sum += gpa_points(grade);
        ++count;
    }
    if (count == 0) throw std::invalid_argument("gpa: no records for " + student);
    return sum / static_cast<double>(count);
}

namespace detail {

/// Course instance id for one semester's offering.
inline std::string instance_id(const std::string& course, int semester) {
    return course + "-s" + std::to_string(semester);
}

/// Scores and curved grades of one semester, in draw order.
struct SemesterAllocation {
    struct Row {
        std::string course;  // instance id
        std::string student;
        double score = 0.0;
        LetterGrade grade = LetterGrade::F;
    };
    std::vector<Row> rows;
    std::map<std::string, std::map<std::string, LetterGrade>> by_instance;
};

/// Draws every score of semester `s` and curves them. Draw order is the
/// scenario order (courses outer, students inner); changing it would change
/// which random values land where, so it is part of the format.
inline SemesterAllocation draw_semester(const Scenario& sc, int semester, ScoreRng& rng) {
    SemesterAllocation alloc;
    for (const auto& course : sc.courses) {
        const std::string inst = instance_id(course.id, semester);
        ScoreSheet sheet(inst);
        for (const auto& student : sc.students)
            sheet.add(student.id, rng.score(student.ability_mean, student.ability_stddev));
        auto grades = allocate_curve(sheet, course.quota);
        if (course.tough) {
            for (const auto& student : sc.students)
                if (student.fixed_components_met)
                    grades[student.id] = apply_floor(grades[student.id], true);
        }
        for (const auto& student : sc.students) {
            alloc.rows.push_back({inst, student.id, sheet.entries().at(student.id),
                                  grades.at(student.id)});
            alloc.by_instance[inst][student.id] = grades.at(student.id);
        }
    }
    return alloc;
}

inline json distributions_json(const Scenario& sc, int semester, const SemesterAllocation& alloc) {
    json out;
    for (const auto& course : sc.courses) {
        const std::string inst = instance_id(course.id, semester);
        std::map<LetterGrade, int> counts;
        for (const auto& [student, grade] : alloc.by_instance.at(inst)) ++counts[grade];
        json per;
        for (LetterGrade g : grade_ladder)
            if (auto it = counts.find(g); it != counts.end())
                per[std::string(to_string(g))] = it->second;
        out[inst] = std::move(per);
    }
    return out;
}

/// Students whose scholarship is still needed and currently under water.
inline json at_risk_json(const Scenario& sc, int semester, const Gradebook& book) {
    json out = json::array();
    for (const auto& student : sc.students) {
        if (!student.scholarship || semester >= student.need_expiry) continue;
        const double gpa = grade_point_average(book, student.id);
        if (gpa < student.gpa_threshold) {
            json entry;
            entry["student"] = student.id;
            entry["gpa"] = gpa;
            entry["threshold"] = student.gpa_threshold;
            out.push_back(std::move(entry));
        }
    }
    return out;
}

inline json match_json(const MatchProposal& m, std::uint64_t contract_id) {
    json j = m.to_json();
    j["contract_id"] = contract_id;
    return j;
}

inline json reversal_json(std::uint64_t contract_id, double payment, double clock) {
    json j;
    j["contract_id"] = contract_id;
    j["payment"] = payment;
    j["clock"] = clock;
    return j;
}

/// The upgrade one at-risk student shops for: which current-semester record
/// to improve and to what. Prefers the smallest upgrade that lifts the GPA
/// back over the threshold; when no single record can, it falls back to the
/// biggest available gain. Returns nothing when every record is already at
/// the top.
struct BidPlan {
    std::string course;  // instance id
    LetterGrade current = LetterGrade::F;
    LetterGrade target = LetterGrade::F;
};

inline std::optional<BidPlan> plan_bid(const Scenario& sc, const StudentSpec& student, int semester,
                                       const Gradebook& book) {
    const double gpa = grade_point_average(book, student.id);
    double record_count = 0.0;
    for (const auto& [key, grade] : book.records())
        if (key.first == student.id) record_count += 1.0;

    std::optional<BidPlan> reaching;   // smallest sufficient upgrade
    int reaching_deficit = 0;
    std::optional<BidPlan> best_gain;  // fallback: largest possible gain
    double best_gain_points = 0.0;
    for (const auto& course : sc.courses) {
        const std::string inst = instance_id(course.id, semester);
        const LetterGrade held = book.find(student.id, inst).value();
        for (int target_rank = rank(held) + 1; target_rank <= rank(LetterGrade::APlus);
             ++target_rank) {
            const LetterGrade target = grade_ladder[static_cast<std::size_t>(10 - target_rank)];
            const double lifted = gpa + (gpa_points(target) - gpa_points(held)) / record_count;
            if (lifted >= student.gpa_threshold) {
                const int deficit = target_rank - rank(held);
                if (!reaching || deficit < reaching_deficit) {
                    reaching = BidPlan{inst, held, target};
                    reaching_deficit = deficit;
                }
                break;
            }
        }
        const double gain = gpa_points(LetterGrade::APlus) - gpa_points(held);
        if (gain > best_gain_points) {
            best_gain = BidPlan{inst, held, LetterGrade::APlus};
            best_gain_points = gain;
        }
    }
    if (reaching) return reaching;
    return best_gain;
}

}  // namespace detail

/// Everything one simulation run produces.
struct SimulationOutput {
    json report;
    SwapEngine engine;
    /// Rendered per-semester score/grade files, (name, content).
    std::vector<std::pair<std::string, std::string>> semester_csvs;
};

/// Runs a scenario end to end and assembles the deterministic report.
///
/// Each semester: first the reversals that fall due, then the semester's
/// allocation, then order submission (bids from at-risk scholarship holders,
/// asks from holders of strong current grades), then one matching sweep whose
/// proposals go through the full contract lifecycle. A final tick at the
/// horizon reverses whatever has fallen due by then.
inline SimulationOutput run_scenario(const Scenario& sc) {
    sc.validate();
    const double length = sc.semester_length_years;
    SwapEngine engine{Gradebook{}, sc.params};
    ScoreRng rng(sc.seed);

    json semesters = json::array();
    std::map<std::string, std::pair<double, double>> npv;  // student -> (as buyer, as seller)
    std::set<std::string> dual_role_students;
    std::vector<std::pair<std::string, std::string>> csvs;

    for (int s = 0; s < sc.semesters; ++s) {
        const double clock = length * static_cast<double>(s);
        json block;
        block["semester"] = s;
        block["clock"] = clock;

        // Contracts whose buyer's need has lapsed unwind first, at exactly
        // the floor payment.
        json reversals = json::array();
        for (const auto& [id, contract] : engine.contracts()) {
            if (contract.state != ContractState::Active || contract.reversal_due_at > clock)
                continue;
            const double payment = reversal_floor(contract.fee, sc.params.money_growth,
                                                  clock - contract.initiated_at);
            auto done = engine.reverse(id, clock, payment);
            if (!done) throw std::logic_error("simulation: reversal refused");
            reversals.push_back(detail::reversal_json(id, payment, clock));
        }
        block["reversals"] = std::move(reversals);

        const auto alloc = detail::draw_semester(sc, s, rng);
        for (const auto& row : alloc.rows) engine.import_grade(row.student, row.course, row.grade);
        block["distributions"] = detail::distributions_json(sc, s, alloc);

        std::string csv = "course,student,score,grade\n";
        for (const auto& row : alloc.rows)
            csv += row.course + ',' + row.student + ',' + json(row.score).dump() + ',' +
                   std::string(to_string(row.grade)) + '\n';
        csvs.emplace_back("semester_" + std::to_string(s) + ".csv", std::move(csv));

        block["at_risk"] = detail::at_risk_json(sc, s, engine.gradebook());

        // Order submission. Bids first, then asks, both in scenario order; a
        // bidder never offers the very record it wants upgraded.
        OrderBook book(sc.fee_policy);
        json orders = json::array();
        std::map<std::uint64_t, Order> submitted;
        std::set<std::string> bidders;
        std::set<std::string> askers;
        std::map<std::string, std::string> bid_instance;  // student -> instance bid on
        for (const auto& student : sc.students) {
            if (!student.scholarship || s >= student.need_expiry) continue;
            if (grade_point_average(engine.gradebook(), student.id) >= student.gpa_threshold)
                continue;
            auto plan = detail::plan_bid(sc, student, s, engine.gradebook());
            if (!plan) continue;
            if (!engine.licenses().has_active(student.id, Role::Buyer)) {
                auto lic = engine.issue_license(student.id, Role::Buyer,
                                                "scholarship-need:" + student.id, clock);
                if (!lic) throw std::logic_error("simulation: buyer license refused");
            }
            Order bid;
            bid.side = Side::Bid;
            bid.student = student.id;
            bid.course = plan->course;
            bid.current_grade = plan->current;
            bid.min_acceptable_grade = plan->target;
            bid.notional = *student.scholarship;
            bid.max_fee = std::min(sc.bid_fee_fraction * *student.scholarship,
                                   fee_cap(*student.scholarship) - 0.01);
            auto placed = book.submit(bid, engine.licenses(), engine.gradebook());
            if (!placed) throw std::logic_error("simulation: bid refused: " + placed.detail());
            engine.record_order_event(EventKind::OrderSubmitted, placed.value().to_json(), clock);
            orders.push_back(placed.value().to_json());
            submitted.emplace(placed.value().id, placed.value());
            bidders.insert(student.id);
            bid_instance[student.id] = plan->course;
        }
        for (const auto& student : sc.students) {
            for (const auto& course : sc.courses) {
                const std::string inst = detail::instance_id(course.id, s);
                if (auto it = bid_instance.find(student.id);
                    it != bid_instance.end() && it->second == inst)
                    continue;
                const LetterGrade held = engine.gradebook().find(student.id, inst).value();
                if (rank(held) < rank(sc.ask_min_grade)) continue;
                if (!engine.licenses().has_active(student.id, Role::Seller)) {
                    auto lic = engine.issue_license(
                        student.id, Role::Seller,
                        "held-grade:" + inst + ":" + std::string(to_string(held)), clock);
                    if (!lic) throw std::logic_error("simulation: seller license refused");
                }
                Order ask;
                ask.side = Side::Ask;
                ask.student = student.id;
                ask.course = inst;
                ask.current_grade = held;
                ask.min_fee = sc.ask_min_fee;
                auto placed = book.submit(ask, engine.licenses(), engine.gradebook());
                if (!placed) throw std::logic_error("simulation: ask refused: " + placed.detail());
                engine.record_order_event(EventKind::OrderSubmitted, placed.value().to_json(), clock);
                orders.push_back(placed.value().to_json());
                submitted.emplace(placed.value().id, placed.value());
                askers.insert(student.id);
            }
        }
        block["orders"] = std::move(orders);

        // Matching and the contract lifecycle. Every proposal must clear all
        // three gates; a refusal here means the venue and the matcher
        // disagree, which is a bug, not a market outcome.
        json matches = json::array();
        json executed = json::array();
        json certificates = json::array();
        for (const auto& proposal : book.match()) {
            const Order& bid = submitted.at(proposal.bid_id);
            const auto& buyer_spec = *std::find_if(sc.students.begin(), sc.students.end(),
                                                   [&](const StudentSpec& st) { return st.id == proposal.buyer; });
            const double due = length * static_cast<double>(buyer_spec.need_expiry);
            auto proposed = engine.propose(proposal.buyer, proposal.seller, proposal.course,
                                           proposal.fee, bid.notional, due, clock);
            if (!proposed) throw std::logic_error("simulation: proposal refused: " + proposed.detail());
            const std::uint64_t cid = proposed.value().id;
            if (auto v = engine.validate(cid, clock); !v)
                throw std::logic_error("simulation: validation refused: " + v.detail());
            auto done = engine.execute(cid, clock);
            if (!done) throw std::logic_error("simulation: execution refused: " + done.detail());

            matches.push_back(detail::match_json(proposal, cid));
            executed.push_back(done.value().to_json());
            certificates.push_back(engine.certificates().back().to_json());

            TradeEconomics econ{proposal.fee, bid.notional, sc.trade_grade_value,
                                sc.trade_friendship_value, due - clock};
            const PartyNpv value = trade_npv(econ, sc.params);
            npv[proposal.buyer].first += value.buyer;
            npv[proposal.seller].second += value.seller;
        }
        block["matches"] = std::move(matches);
        block["executed_contracts"] = std::move(executed);
        block["certificates"] = std::move(certificates);

        json dual = json::array();
        for (const auto& id : bidders)
            if (askers.count(id)) {
                dual.push_back(id);
                dual_role_students.insert(id);
            }
        block["dual_role"] = std::move(dual);

        semesters.push_back(std::move(block));
    }

    // The horizon tick: unwind whatever has fallen due by the end.
    const double horizon = length * static_cast<double>(sc.semesters);
    json final_reversals = json::array();
    for (const auto& [id, contract] : engine.contracts()) {
        if (contract.state != ContractState::Active || contract.reversal_due_at > horizon) continue;
        const double payment =
            reversal_floor(contract.fee, sc.params.money_growth, horizon - contract.initiated_at);
        auto done = engine.reverse(id, horizon, payment);
        if (!done) throw std::logic_error("simulation: final reversal refused");
        final_reversals.push_back(detail::reversal_json(id, payment, horizon));
    }
    json still_active = json::array();
    for (const auto& [id, contract] : engine.contracts())
        if (contract.state == ContractState::Active) still_active.push_back(id);

    json report;
    report["schema_version"] = sc.schema_version;
    report["seed"] = sc.seed;
    report["rng"] = sc.rng_algorithm;
    report["semester_length_years"] = sc.semester_length_years;
    report["fee_policy"] = to_string(sc.fee_policy);
    report["semesters"] = std::move(semesters);
    report["final_reversals"] = std::move(final_reversals);
    report["still_active_contracts"] = std::move(still_active);
    json npv_json = json::object();
    for (const auto& [student, sides] : npv) {
        json entry;
        entry["as_buyer"] = sides.first;
        entry["as_seller"] = sides.second;
        npv_json[student] = std::move(entry);
    }
    report["npv_by_student"] = std::move(npv_json);
    json dual = json::array();
    for (const auto& id : dual_role_students) dual.push_back(id);
    report["dual_role_students"] = std::move(dual);
    report["certificates_total"] = engine.certificates().size();
    json book_json;
    book_json["version"] = engine.gradebook().version();
    json records = json::array();
    for (const auto& [key, grade] : engine.gradebook().records()) {
        json r;
        r["student"] = key.first;
        r["course"] = key.second;
        r["grade"] = to_string(grade);
        records.push_back(std::move(r));
    }
    book_json["records"] = std::move(records);
    report["final_gradebook"] = std::move(book_json);
    report["final_ledger_digest"] = engine.ledger().last_digest();

    return SimulationOutput{std::move(report), std::move(engine), std::move(csvs)};
}

/// Rebuilds the report from the scenario and the event log alone: the
/// allocations are re-derived from the seeded stream and every trading fact
/// is taken from the ledger instead of the matcher and the engine. If the
/// ledger really is the complete record of the run, the result is
/// byte-identical to the live report.
inline json rebuild_report_from_ledger(const Scenario& sc, const Ledger& ledger) {
    sc.validate();
    const double length = sc.semester_length_years;
    const auto& events = ledger.events();
    std::size_t next = 0;

    Gradebook book;
    std::map<std::uint64_t, SwapContract> contracts;
    ScoreRng rng(sc.seed);
    json semesters = json::array();
    std::map<std::string, std::pair<double, double>> npv;
    std::set<std::string> dual_role_students;
    std::size_t certificate_count = 0;

    auto apply_reversal = [&](const LedgerEvent& e) {
        auto& c = contracts.at(e.payload.at("id").get<std::uint64_t>());
        book.set_pair(c.buyer, c.buyer_grade, c.seller, c.seller_grade, c.course);
        c.state = ContractState::Reversed;
        c.reversal_payment = e.payload.at("payment").get<double>();
        return detail::reversal_json(c.id, c.reversal_payment, e.timestamp);
    };

    for (int s = 0; s < sc.semesters; ++s) {
        const double clock = length * static_cast<double>(s);
        json block;
        block["semester"] = s;
        block["clock"] = clock;

        json reversals = json::array();
        while (next < events.size() && events[next].kind == EventKind::ContractReversed &&
               events[next].timestamp == clock)
            reversals.push_back(apply_reversal(events[next++]));
        block["reversals"] = std::move(reversals);

        const auto alloc = detail::draw_semester(sc, s, rng);
        for (const auto& row : alloc.rows) book.set(row.student, row.course, row.grade);
        block["distributions"] = detail::distributions_json(sc, s, alloc);
        block["at_risk"] = detail::at_risk_json(sc, s, book);

        json orders = json::array();
        json matches = json::array();
        json executed = json::array();
        json certificates = json::array();
        std::set<std::string> bidders;
        std::set<std::string> askers;
        std::vector<json> semester_orders;
        while (next < events.size() && events[next].timestamp == clock) {
            const auto& e = events[next++];
            switch (e.kind) {
                case EventKind::LicenseIssued:
                    break;  // licenses leave no report section of their own
                case EventKind::OrderSubmitted: {
                    orders.push_back(e.payload);
                    semester_orders.push_back(e.payload);
                    const auto student = e.payload.at("student").get<std::string>();
                    if (e.payload.at("side").get<std::string>() == "bid") bidders.insert(student);
                    else askers.insert(student);
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
                    c.fee = e.payload.at("fee").get<double>();
                    c.notional = e.payload.at("notional").get<double>();
                    c.initiated_at = e.timestamp;
                    c.reversal_due_at = e.payload.at("reversal_due_at").get<double>();
                    contracts.emplace(c.id, c);
                    break;
                }
                case EventKind::ContractValidated:
                    contracts.at(e.payload.at("id").get<std::uint64_t>()).state =
                        ContractState::Licensed;
                    break;
                case EventKind::ContractExecuted: {
                    auto& c = contracts.at(e.payload.at("id").get<std::uint64_t>());
                    book.exchange(c.buyer, c.seller, c.course);
                    c.state = ContractState::Active;

                    MatchProposal proposal;
                    proposal.buyer = c.buyer;
                    proposal.seller = c.seller;
                    proposal.course = c.course;
                    proposal.fee = c.fee;
                    for (const auto& o : semester_orders) {
                        if (o.at("side") == "bid" && o.at("student") == c.buyer)
                            proposal.bid_id = o.at("id").get<std::uint64_t>();
                        if (o.at("side") == "ask" && o.at("student") == c.seller &&
                            o.at("course") == c.course)
                            proposal.ask_id = o.at("id").get<std::uint64_t>();
                    }
                    matches.push_back(detail::match_json(proposal, c.id));
                    executed.push_back(c.to_json());

                    TradeEconomics econ{c.fee, c.notional, sc.trade_grade_value,
                                        sc.trade_friendship_value, c.reversal_due_at - clock};
                    const PartyNpv value = trade_npv(econ, sc.params);
                    npv[c.buyer].first += value.buyer;
                    npv[c.seller].second += value.seller;
                    break;
                }
                case EventKind::CertificateIssued:
                    certificates.push_back(e.payload);
                    ++certificate_count;
                    break;
                case EventKind::ContractReversed:
                    reversals.push_back(apply_reversal(e));  // unreachable for boundary dues
                    break;
                case EventKind::ContractCancelled:
                    contracts.at(e.payload.at("id").get<std::uint64_t>()).state =
                        ContractState::Cancelled;
                    break;
                case EventKind::OrderCancelled:
                    break;
            }
        }
        block["orders"] = std::move(orders);
        block["matches"] = std::move(matches);
        block["executed_contracts"] = std::move(executed);
        block["certificates"] = std::move(certificates);

        json dual = json::array();
        for (const auto& id : bidders)
            if (askers.count(id)) {
                dual.push_back(id);
                dual_role_students.insert(id);
            }
        block["dual_role"] = std::move(dual);
        semesters.push_back(std::move(block));
    }

    json final_reversals = json::array();
    while (next < events.size() && events[next].kind == EventKind::ContractReversed)
        final_reversals.push_back(apply_reversal(events[next++]));
    json still_active = json::array();
    for (const auto& [id, c] : contracts)
        if (c.state == ContractState::Active) still_active.push_back(id);

    json report;
    report["schema_version"] = sc.schema_version;
    report["seed"] = sc.seed;
    report["rng"] = sc.rng_algorithm;
    report["semester_length_years"] = sc.semester_length_years;
    report["fee_policy"] = to_string(sc.fee_policy);
    report["semesters"] = std::move(semesters);
    report["final_reversals"] = std::move(final_reversals);
    report["still_active_contracts"] = std::move(still_active);
    json npv_json = json::object();
    for (const auto& [student, sides] : npv) {
        json entry;
        entry["as_buyer"] = sides.first;
        entry["as_seller"] = sides.second;
        npv_json[student] = std::move(entry);
    }
    report["npv_by_student"] = std::move(npv_json);
    json dual = json::array();
    for (const auto& id : dual_role_students) dual.push_back(id);
    report["dual_role_students"] = std::move(dual);
    report["certificates_total"] = certificate_count;
    json book_json;
    book_json["version"] = book.version();
    json records = json::array();
    for (const auto& [key, grade] : book.records()) {
        json r;
        r["student"] = key.first;
        r["course"] = key.second;
        r["grade"] = to_string(grade);
        records.push_back(std::move(r));
    }
    book_json["records"] = std::move(records);
    report["final_gradebook"] = std::move(book_json);
    report["final_ledger_digest"] = ledger.last_digest();
    return report;
}

}  // namespace gradeswap
