#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace gradeswap {

/// Letter grades on the 4.3 scale, declared best-first.
enum class LetterGrade : std::uint8_t {
    APlus,
    A,
    AMinus,
    BPlus,
    B,
    BMinus,
    CPlus,
    C,
    CMinus,
    D,
    F,
};

/// All grades, best-first.
inline constexpr std::array<LetterGrade, 11> grade_ladder = {
    LetterGrade::APlus, LetterGrade::A, LetterGrade::AMinus,
    LetterGrade::BPlus, LetterGrade::B, LetterGrade::BMinus,
    LetterGrade::CPlus, LetterGrade::C, LetterGrade::CMinus,
    LetterGrade::D,     LetterGrade::F,
};

/// Ordering rank: F = 0 up to A+ = 10. A higher rank is the better grade.
constexpr int rank(LetterGrade g) noexcept { return 10 - static_cast<int>(g); }

/// Grade points on the 4.3 scale (A+ = 4.3 down to D = 1.0, F = 0.0).
constexpr double gpa_points(LetterGrade g) noexcept {
    constexpr std::array<double, 11> points = {4.3, 4.0, 3.7, 3.3, 3.0, 2.7,
                                               2.3, 2.0, 1.7, 1.0, 0.0};
    return points[static_cast<std::size_t>(g)];
}

constexpr std::string_view to_string(LetterGrade g) noexcept {
    constexpr std::array<std::string_view, 11> names = {
        "A+", "A", "A-", "B+", "B", "B-", "C+", "C", "C-", "D", "F"};
    return names[static_cast<std::size_t>(g)];
}

constexpr std::optional<LetterGrade> parse_grade(std::string_view text) noexcept {
    for (LetterGrade g : grade_ladder)
        if (to_string(g) == text) return g;
    return std::nullopt;
}

inline LetterGrade grade_from_string(std::string_view text) {
    if (auto g = parse_grade(text)) return *g;
    throw std::invalid_argument("unknown letter grade: " + std::string(text));
}

constexpr LetterGrade better_of(LetterGrade a, LetterGrade b) noexcept {
    return rank(a) >= rank(b) ? a : b;
}

}  // namespace gradeswap
