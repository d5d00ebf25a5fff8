#pragma once

#include <cmath>
#include <istream>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>

#include "gradeswap/detail/text.hpp"
#include "gradeswap/errors.hpp"

namespace gradeswap {

/// Raw scores for one assessed component of a course, keyed by student id.
/// Scores live on the [0, 100] scale; ids are unique within a sheet.
class ScoreSheet {
public:
    ScoreSheet() = default;
    explicit ScoreSheet(std::string component_id) : component_id_(std::move(component_id)) {}

    void add(std::string student_id, double score) {
        if (student_id.empty())
            throw std::invalid_argument("score sheet: empty student id");
        if (!(score >= 0.0 && score <= 100.0))
            throw std::invalid_argument("score sheet: score out of [0, 100] for " + student_id);
        auto [it, inserted] = entries_.emplace(std::move(student_id), score);
        if (!inserted)
            throw std::invalid_argument("score sheet: duplicate student id " + it->first);
    }

    const std::map<std::string, double>& entries() const noexcept { return entries_; }
    std::size_t size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }
    const std::string& component_id() const noexcept { return component_id_; }

    /// Reads `student_id,score` rows. The header row is required.
    static ScoreSheet from_csv(std::istream& in, std::string component_id = "scores") {
        ScoreSheet sheet(std::move(component_id));
        std::string line;
        if (!std::getline(in, line))
            throw parse_error("score csv: empty input");
        if (detail::trim(line) != "student_id,score")
            throw parse_error("score csv: expected header 'student_id,score'");
        std::size_t lineno = 1;
        while (std::getline(in, line)) {
            ++lineno;
            auto row = detail::trim(line);
            if (row.empty()) continue;
            auto cells = detail::split(row, ',');
            if (cells.size() != 2)
                throw parse_error("score csv: line " + std::to_string(lineno) + ": expected 2 cells");
            try {
                sheet.add(std::string(detail::trim(cells[0])),
                          detail::parse_double(cells[1], "score"));
            } catch (const std::invalid_argument& e) {
                throw parse_error("score csv: line " + std::to_string(lineno) + ": " + e.what());
            }
        }
        return sheet;
    }

private:
    std::string component_id_;
    std::map<std::string, double> entries_;
};

}  // namespace gradeswap
