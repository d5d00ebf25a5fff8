#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>

#include "gradeswap/detail/text.hpp"
#include "gradeswap/errors.hpp"
#include "gradeswap/grades.hpp"

namespace gradeswap {

/// The registrar's book: one letter grade per (student, course) record, plus
/// a version counter that advances by one for every mutating call. The
/// counter lets the trading venue detect that a record moved under it.
class Gradebook {
public:
    using Key = std::pair<std::string, std::string>;  // (student, course)

    void set(const std::string& student, const std::string& course, LetterGrade grade) {
        if (student.empty() || course.empty())
            throw std::invalid_argument("gradebook: empty student or course id");
        records_[Key(student, course)] = grade;
        ++version_;
    }

    std::optional<LetterGrade> find(const std::string& student, const std::string& course) const {
        auto it = records_.find(Key(student, course));
        if (it == records_.end()) return std::nullopt;
        return it->second;
    }

    bool has(const std::string& student, const std::string& course) const {
        return records_.count(Key(student, course)) > 0;
    }

    bool has_course(const std::string& course) const {
        for (const auto& [key, grade] : records_)
            if (key.second == course) return true;
        return false;
    }

    /// Exchanges the grades of two students in one course as a single
    /// mutation. Both records must exist.
    void exchange(const std::string& student_a, const std::string& student_b,
                  const std::string& course) {
        auto a = records_.find(Key(student_a, course));
        auto b = records_.find(Key(student_b, course));
        if (a == records_.end() || b == records_.end())
            throw std::invalid_argument("gradebook: exchange needs two existing records");
        std::swap(a->second, b->second);
        ++version_;
    }

    /// Writes two records of one course back in a single mutation; used when
    /// a swap unwinds.
    void set_pair(const std::string& student_a, LetterGrade grade_a, const std::string& student_b,
                  LetterGrade grade_b, const std::string& course) {
        auto a = records_.find(Key(student_a, course));
        auto b = records_.find(Key(student_b, course));
        if (a == records_.end() || b == records_.end())
            throw std::invalid_argument("gradebook: set_pair needs two existing records");
        a->second = grade_a;
        b->second = grade_b;
        ++version_;
    }

    const std::map<Key, LetterGrade>& records() const noexcept { return records_; }
    std::uint64_t version() const noexcept { return version_; }

    /// Count of each grade within one course: the course's grade multiset.
    std::map<LetterGrade, int> course_distribution(const std::string& course) const {
        std::map<LetterGrade, int> counts;
        for (const auto& [key, grade] : records_)
            if (key.second == course) ++counts[grade];
        return counts;
    }

    bool operator==(const Gradebook&) const = default;

    /// Reads `student_id,course_id,grade` rows. The header row is required.
    static Gradebook from_csv(std::istream& in) {
        Gradebook book;
        std::string line;
        if (!std::getline(in, line))
            throw parse_error("gradebook csv: empty input");
        if (detail::trim(line) != "student_id,course_id,grade")
            throw parse_error("gradebook csv: expected header 'student_id,course_id,grade'");
        std::size_t lineno = 1;
        while (std::getline(in, line)) {
            ++lineno;
            auto row = detail::trim(line);
            if (row.empty()) continue;
            auto cells = detail::split(row, ',');
            if (cells.size() != 3)
                throw parse_error("gradebook csv: line " + std::to_string(lineno) + ": expected 3 cells");
            auto grade = parse_grade(detail::trim(cells[2]));
            if (!grade)
                throw parse_error("gradebook csv: line " + std::to_string(lineno) + ": unknown grade '" +
                                  std::string(detail::trim(cells[2])) + "'");
            book.set(std::string(detail::trim(cells[0])), std::string(detail::trim(cells[1])), *grade);
        }
        return book;
    }

    void to_csv(std::ostream& out) const {
        out << "student_id,course_id,grade\n";
        for (const auto& [key, grade] : records_)
            out << key.first << ',' << key.second << ',' << to_string(grade) << '\n';
    }

private:
    std::map<Key, LetterGrade> records_;
    std::uint64_t version_ = 0;
};

}  // namespace gradeswap
