#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "gradeswap/detail/text.hpp"
#include "gradeswap/grades.hpp"
#include "gradeswap/score_sheet.hpp"

namespace gradeswap {

/// Parameters of a normal score distribution.
struct NormalSpec {
    double mean = 0.0;
    double stddev = 1.0;
};

/// Normal probability density at `x`.
inline double normal_pdf(double x, const NormalSpec& spec) {
    if (!(spec.stddev > 0.0))
        throw std::invalid_argument("normal_pdf: stddev must be positive");
    const double z = (x - spec.mean) / spec.stddev;
    return std::exp(-0.5 * z * z) / (spec.stddev * std::sqrt(2.0 * std::numbers::pi));
}

struct QuotaBucket {
    LetterGrade grade;
    double fraction = 0.0;
};

/// Target shares of a cohort per grade, best grade first. Fractions must be
/// non-negative and sum to one; a small tolerance absorbs quotas derived from
/// numerical integration.
class GradeQuota {
public:
    explicit GradeQuota(std::vector<QuotaBucket> buckets) : buckets_(std::move(buckets)) {
        if (buckets_.empty())
            throw std::invalid_argument("grade quota: no buckets");
        double sum = 0.0;
        for (std::size_t i = 0; i < buckets_.size(); ++i) {
            const auto& b = buckets_[i];
            if (!(b.fraction >= 0.0) || !std::isfinite(b.fraction))
                throw std::invalid_argument("grade quota: fraction must be a finite non-negative number");
            if (i > 0 && rank(b.grade) >= rank(buckets_[i - 1].grade))
                throw std::invalid_argument("grade quota: grades must be listed best-first without repeats");
            sum += b.fraction;
        }
        if (std::abs(sum - 1.0) > 1e-9)
            throw std::invalid_argument("grade quota: fractions must sum to one");
    }

    const std::vector<QuotaBucket>& buckets() const noexcept { return buckets_; }

private:
    std::vector<QuotaBucket> buckets_;
};

/// Equal shares across the given grades.
inline GradeQuota uniform_quota(std::span<const LetterGrade> grades) {
    std::vector<QuotaBucket> buckets;
    buckets.reserve(grades.size());
    const double share = 1.0 / static_cast<double>(grades.size());
    for (LetterGrade g : grades) buckets.push_back({g, share});
    // Nudge the last share so the sum is exact regardless of the division.
    double sum = share * static_cast<double>(grades.size() - 1);
    if (!buckets.empty()) buckets.back().fraction = 1.0 - sum;
    return GradeQuota(std::move(buckets));
}

/// Quota shares from standard-normal cut points. `boundaries` holds the k - 1
/// strictly increasing z-values separating k grades; each share is the normal
/// mass of its band, integrated to within 1e-9.
inline GradeQuota quotas_from_boundaries(std::span<const LetterGrade> grades,
                                         std::span<const double> boundaries) {
    if (grades.size() != boundaries.size() + 1)
        throw std::invalid_argument("quotas_from_boundaries: need one more grade than boundary");
    for (std::size_t i = 0; i < boundaries.size(); ++i) {
        if (!std::isfinite(boundaries[i]))
            throw std::invalid_argument("quotas_from_boundaries: boundaries must be finite");
        if (i > 0 && !(boundaries[i] > boundaries[i - 1]))
            throw std::invalid_argument("quotas_from_boundaries: boundaries must be strictly increasing");
    }

    // Mass in the extreme tails beyond +-9 sigma is far below the quota
    // tolerance, so a clipped integration range is safe.
    constexpr double kOuter = 9.0;
    const NormalSpec standard{0.0, 1.0};
    auto pdf = [&](double x) { return normal_pdf(x, standard); };
    using quad = boost::math::quadrature::gauss_kronrod<double, 31>;

    std::vector<QuotaBucket> buckets;
    buckets.reserve(grades.size());
    double low = -kOuter;
    for (std::size_t i = 0; i < grades.size(); ++i) {
        // Grades are listed best-first, so the first band is the rightmost.
        double hi = (i == 0) ? kOuter : boundaries[boundaries.size() - i];
        double lo = (i == grades.size() - 1) ? low : boundaries[boundaries.size() - 1 - i];
        buckets.push_back({grades[i], quad::integrate(pdf, lo, hi, 10, 1e-10)});
    }
    // Normalise away the clipped tail mass so the fractions sum to one.
    double sum = 0.0;
    for (const auto& b : buckets) sum += b.fraction;
    for (auto& b : buckets) b.fraction /= sum;
    return GradeQuota(std::move(buckets));
}

namespace detail {

/// Integer seats per bucket by largest remainder. Ties in the remainder go to
/// the better grade (the earlier bucket).
inline std::vector<std::size_t> quota_counts(const GradeQuota& quota, std::size_t n) {
    const auto& buckets = quota.buckets();
    std::vector<std::size_t> counts(buckets.size(), 0);
    std::vector<std::pair<double, std::size_t>> remainders;
    remainders.reserve(buckets.size());
    std::size_t assigned = 0;
    for (std::size_t i = 0; i < buckets.size(); ++i) {
        const double ideal = buckets[i].fraction * static_cast<double>(n);
        counts[i] = static_cast<std::size_t>(std::floor(ideal));
        assigned += counts[i];
        remainders.emplace_back(ideal - std::floor(ideal), i);
    }
    std::stable_sort(remainders.begin(), remainders.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    std::size_t leftover = n - assigned;
    for (std::size_t k = 0; k < leftover && k < remainders.size(); ++k)
        ++counts[remainders[k].second];
    return counts;
}

}  // namespace detail

/// Curve a score sheet onto a grade quota.
///
/// Students are ranked by score, best first, and equal scores are treated as
/// one indivisible group. Seats per grade come from the quota by largest
/// remainder. When a tie group straddles a bucket boundary the whole group is
/// promoted into the open bucket and the overflow is deducted from the
/// remaining lower buckets, top-down, so lower grades shrink first.
inline std::map<std::string, LetterGrade> allocate_curve(const ScoreSheet& scores,
                                                         const GradeQuota& quota) {
    if (scores.empty())
        throw std::invalid_argument("allocate_curve: empty score sheet");

    std::vector<std::pair<double, std::string>> ranked;
    ranked.reserve(scores.size());
    for (const auto& [id, score] : scores.entries()) ranked.emplace_back(score, id);
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });

    const auto& buckets = quota.buckets();
    std::vector<std::size_t> remaining = detail::quota_counts(quota, ranked.size());

    std::map<std::string, LetterGrade> out;
    std::size_t i = 0;
    std::size_t bucket = 0;
    while (i < ranked.size()) {
        std::size_t j = i;
        while (j < ranked.size() && ranked[j].first == ranked[i].first) ++j;
        const std::size_t group = j - i;

        while (bucket < remaining.size() && remaining[bucket] == 0) ++bucket;
        // Seats left always cover the unassigned students, so this holds.
        if (bucket >= remaining.size())
            throw std::logic_error("allocate_curve: ran out of quota seats");

        for (std::size_t k = i; k < j; ++k) out.emplace(ranked[k].second, buckets[bucket].grade);

        // Deduct the group, spilling any overflow into the buckets below.
        std::size_t need = group;
        for (std::size_t b = bucket; need > 0 && b < remaining.size(); ++b) {
            const std::size_t cut = std::min(remaining[b], need);
            remaining[b] -= cut;
            need -= cut;
        }
        i = j;
    }
    return out;
}

/// Floor applied to students who completed every fixed component of a tough
/// course: nobody who did the work walks away with less than a C+.
inline LetterGrade apply_floor(LetterGrade base, bool fixed_components_met) {
    if (!fixed_components_met) return base;
    return better_of(base, LetterGrade::CPlus);
}

/// Parses quota text of the form "A:0.2,B:0.3,C:0.3,F:0.2".
inline GradeQuota parse_quota(std::string_view text) {
    std::vector<QuotaBucket> buckets;
    for (auto part : gradeswap::detail::split(text, ',')) {
        auto kv = gradeswap::detail::split(gradeswap::detail::trim(part), ':');
        if (kv.size() != 2)
            throw parse_error("quota: expected GRADE:FRACTION, got '" + std::string(part) + "'");
        auto grade = parse_grade(gradeswap::detail::trim(kv[0]));
        if (!grade)
            throw parse_error("quota: unknown grade '" + std::string(kv[0]) + "'");
        buckets.push_back({*grade, gradeswap::detail::parse_double(kv[1], "quota fraction")});
    }
    // Domain violations (bad sums, misordered grades) surface as
    // invalid_argument from the constructor, distinct from lexical errors.
    return GradeQuota(std::move(buckets));
}

}  // namespace gradeswap
