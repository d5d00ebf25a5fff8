#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "gradeswap/curve.hpp"
#include "gradeswap/detail/text.hpp"
#include "gradeswap/errors.hpp"
#include "gradeswap/grades.hpp"
#include "gradeswap/order_book.hpp"
#include "gradeswap/valuation.hpp"

namespace gradeswap {

/// The random-score recipe the simulator implements. Draws come from a
/// mt19937_64 stream mapped through an explicit Box-Muller transform, so the
/// identifier pins the byte-exact behaviour, not just the seed.
inline constexpr std::string_view kRngAlgorithm = "mt19937_64-boxmuller-v1";

/// One simulated student.
struct StudentSpec {
    std::string id;
    std::optional<double> scholarship;  ///< amount at stake; absent means none
    double gpa_threshold = 0.0;         ///< scholarship survives at or above this
    double ability_mean = 0.0;          ///< centre of the score draws
    double ability_stddev = 0.0;        ///< spread of the score draws
    int need_expiry = 0;                ///< semester index at which the need lapses
    bool fixed_components_met = true;   ///< attendance, assignments, participation
};

/// One simulated course, re-offered every semester.
struct CourseSpec {
    std::string id;
    GradeQuota quota;
    bool tough = false;  ///< tough courses grant the fixed-component floor
};

/// A full simulation configuration.
struct Scenario {
    int schema_version = 1;
    std::uint64_t seed = 0;
    int semesters = 1;
    double semester_length_years = 0.5;
    FeePolicy fee_policy = FeePolicy::Midpoint;
    double bid_fee_fraction = 0.005;   ///< of the scholarship, capped below 1%
    double ask_min_fee = 10.0;         ///< sellers' limit fee
    LetterGrade ask_min_grade = LetterGrade::AMinus;  ///< weakest grade worth offering
    double trade_grade_value = 40.0;       ///< grade value at inception, for NPV
    double trade_friendship_value = 10.0;  ///< friendship value at inception, for NPV
    TimeValueParams params;
    std::string rng_algorithm{kRngAlgorithm};
    std::vector<StudentSpec> students;
    std::vector<CourseSpec> courses;

    void validate() const {
        if (schema_version != 1) throw parse_error("scenario: unsupported schema_version");
        if (semesters < 1) throw parse_error("scenario: semesters must be at least 1");
        if (!(semester_length_years > 0.0))
            throw parse_error("scenario: semester_length_years must be positive");
        if (!(bid_fee_fraction >= 0.0)) throw parse_error("scenario: bid_fee_fraction must be non-negative");
        if (!(ask_min_fee >= 0.0)) throw parse_error("scenario: ask_min_fee must be non-negative");
        if (!(trade_grade_value >= 0.0) || !(trade_friendship_value >= 0.0))
            throw parse_error("scenario: trade values must be non-negative");
        if (rng_algorithm != kRngAlgorithm)
            throw parse_error("scenario: unsupported rng '" + rng_algorithm + "'");
        try {
            params.validate();
        } catch (const std::invalid_argument& e) {
            throw parse_error(std::string("scenario: ") + e.what());
        }
        if (students.empty()) throw parse_error("scenario: no students");
        if (courses.empty()) throw parse_error("scenario: no courses");
        std::set<std::string> ids;
        for (const auto& s : students) {
            if (!ids.insert(s.id).second) throw parse_error("scenario: duplicate student '" + s.id + "'");
            if (s.scholarship && !(*s.scholarship > 0.0))
                throw parse_error("scenario: scholarship must be positive for " + s.id);
            if (!(s.gpa_threshold >= 0.0 && s.gpa_threshold <= 4.3))
                throw parse_error("scenario: gpa_threshold out of [0, 4.3] for " + s.id);
            if (!(s.ability_stddev >= 0.0))
                throw parse_error("scenario: ability_stddev must be non-negative for " + s.id);
            if (s.need_expiry < 0) throw parse_error("scenario: need_expiry must be non-negative for " + s.id);
        }
        std::set<std::string> course_ids;
        for (const auto& c : courses)
            if (!course_ids.insert(c.id).second)
                throw parse_error("scenario: duplicate course '" + c.id + "'");
    }
};

namespace detail {

inline StudentSpec parse_student(std::string_view text, std::size_t lineno) {
    StudentSpec s;
    bool saw_id = false;
    for (auto token : split(text, ' ')) {
        auto t = trim(token);
        if (t.empty()) continue;
        auto kv = split(t, '=');
        if (kv.size() != 2)
            throw parse_error("scenario: line " + std::to_string(lineno) +
                              ": student tokens must be key=value");
        auto key = trim(kv[0]);
        auto value = trim(kv[1]);
        if (key == "id") {
            s.id = std::string(value);
            saw_id = true;
        } else if (key == "scholarship") {
            if (value != "none") s.scholarship = parse_double(value, "scholarship");
        } else if (key == "gpa_threshold") {
            s.gpa_threshold = parse_double(value, "gpa_threshold");
        } else if (key == "ability_mean") {
            s.ability_mean = parse_double(value, "ability_mean");
        } else if (key == "ability_stddev") {
            s.ability_stddev = parse_double(value, "ability_stddev");
        } else if (key == "need_expiry") {
            s.need_expiry = static_cast<int>(parse_int(value, "need_expiry"));
        } else if (key == "fixed_met") {
            s.fixed_components_met = parse_bool(value, "fixed_met");
        } else {
            throw parse_error("scenario: line " + std::to_string(lineno) +
                              ": unknown student key '" + std::string(key) + "'");
        }
    }
    if (!saw_id || s.id.empty())
        throw parse_error("scenario: line " + std::to_string(lineno) + ": student needs an id");
    return s;
}

inline CourseSpec parse_course(std::string_view text, std::size_t lineno) {
    std::string id;
    bool tough = false;
    std::optional<GradeQuota> quota;
    for (auto token : split(text, ' ')) {
        auto t = trim(token);
        if (t.empty()) continue;
        auto eq = t.find('=');
        if (eq == std::string_view::npos)
            throw parse_error("scenario: line " + std::to_string(lineno) +
                              ": course tokens must be key=value");
        auto key = trim(t.substr(0, eq));
        auto value = trim(t.substr(eq + 1));
        if (key == "id") {
            id = std::string(value);
        } else if (key == "tough") {
            tough = parse_bool(value, "tough");
        } else if (key == "quota") {
            quota = parse_quota(value);
        } else {
            throw parse_error("scenario: line " + std::to_string(lineno) +
                              ": unknown course key '" + std::string(key) + "'");
        }
    }
    if (id.empty())
        throw parse_error("scenario: line " + std::to_string(lineno) + ": course needs an id");
    if (!quota)
        throw parse_error("scenario: line " + std::to_string(lineno) + ": course needs a quota");
    return CourseSpec{std::move(id), std::move(*quota), tough};
}

}  // namespace detail

/// Parses the line-oriented scenario format: one `key = value` pair per line,
/// `#` comments, and repeatable `student` / `course` lines whose values are
/// space-separated key=value tokens. The seed is mandatory so every run is
/// reproducible on purpose, never by accident.
inline Scenario parse_scenario(std::istream& in) {
    Scenario sc;
    std::optional<std::uint64_t> seed;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto text = detail::trim(line);
        if (text.empty() || text.front() == '#') continue;
        auto eq = text.find('=');
        if (eq == std::string_view::npos)
            throw parse_error("scenario: line " + std::to_string(lineno) + ": expected key = value");
        auto key = detail::trim(text.substr(0, eq));
        auto value = detail::trim(text.substr(eq + 1));

        if (key == "schema_version") sc.schema_version = static_cast<int>(detail::parse_int(value, key));
        else if (key == "seed") seed = detail::parse_u64(value, key);
        else if (key == "semesters") sc.semesters = static_cast<int>(detail::parse_int(value, key));
        else if (key == "semester_length_years") sc.semester_length_years = detail::parse_double(value, key);
        else if (key == "fee_policy") sc.fee_policy = fee_policy_from_string(value);
        else if (key == "bid_fee_fraction") sc.bid_fee_fraction = detail::parse_double(value, key);
        else if (key == "ask_min_fee") sc.ask_min_fee = detail::parse_double(value, key);
        else if (key == "ask_min_grade") {
            auto g = parse_grade(value);
            if (!g) throw parse_error("scenario: line " + std::to_string(lineno) + ": unknown grade");
            sc.ask_min_grade = *g;
        }
        else if (key == "trade_grade_value") sc.trade_grade_value = detail::parse_double(value, key);
        else if (key == "trade_friendship_value") sc.trade_friendship_value = detail::parse_double(value, key);
        else if (key == "grade_decay") sc.params.grade_decay = detail::parse_double(value, key);
        else if (key == "friendship_growth") sc.params.friendship_growth = detail::parse_double(value, key);
        else if (key == "money_growth") sc.params.money_growth = detail::parse_double(value, key);
        else if (key == "discount_rate") sc.params.discount_rate = detail::parse_double(value, key);
        else if (key == "utilization") sc.params.utilization = detail::parse_double(value, key);
        else if (key == "rng") sc.rng_algorithm = std::string(value);
        else if (key == "student") sc.students.push_back(detail::parse_student(value, lineno));
        else if (key == "course") sc.courses.push_back(detail::parse_course(value, lineno));
        else throw parse_error("scenario: line " + std::to_string(lineno) + ": unknown key '" +
                               std::string(key) + "'");
    }
    if (!seed) throw parse_error("scenario: seed is mandatory");
    sc.seed = *seed;
    sc.validate();
    return sc;
}

inline Scenario parse_scenario_text(const std::string& text) {
    std::istringstream in(text);
    return parse_scenario(in);
}

}  // namespace gradeswap
