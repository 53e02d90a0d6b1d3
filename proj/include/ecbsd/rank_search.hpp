#ifndef ECBSD_RANK_SEARCH_HPP
#define ECBSD_RANK_SEARCH_HPP

// Algebraic side: torsion subgroup via Nagell-Lutz (orders capped at 12 by
// the classification of rational torsion), bounded-height point search, and
// a rank lower bound from exhaustive small-relation checks.

#include <string>
#include <vector>

#include "ecbsd/curve.hpp"

namespace ecbsd {

inline constexpr int kTorsionOrderCap = 12;
inline constexpr u64 kSearchMaxH = 1'000'000;
inline constexpr u64 kSearchNumeratorBudget = 1'000'000;
inline constexpr u64 kIndependenceOpBudget = 500'000;

/// Torsion subgroup with structure tag "Z/mZ" or "Z/2Z x Z/2mZ".
/// elements lists every torsion point including the identity.
struct TorsionGroup {
    std::string structure;
    std::vector<RationalPoint> elements;
    int order() const { return static_cast<int>(elements.size()); }
};

/// Integer candidates with y = 0 or y^2 | disc, kept when some n <= 12
/// annihilates them; the group structure is classified from orders.
/// Any structure outside the allowed list is an internal error.
TorsionGroup torsion_subgroup(const CurveQ& c);

/// true iff n*P = O for some 1 <= n <= 12 (exact arithmetic); false means
/// infinite order.
bool is_torsion(const CurveQ& c, const RationalPoint& P);

struct SearchResult {
    std::vector<RationalPoint> points;  // v >= 0 representatives, (d, |u|, u) order
    bool truncated = false;             // some |u| range hit the numerator budget
};

/// All x = u/d^2 with d <= floor(sqrt(H)), |u| <= H d^2 (clamped to the
/// numerator budget) whose y^2 value is a perfect square.
SearchResult search_points(const CurveQ& c, u64 H);

struct IndependenceResult {
    int lower_bound = 0;
    bool truncated = false;
};

/// Size of the largest subset of pts with no relation
/// sum m_i P_i in torsion for 0 < max|m_i| <= M (exhaustive, exact).
IndependenceResult independence_lower_bound(const CurveQ& c,
                                            const std::vector<RationalPoint>& pts,
                                            int M);

struct RankReport {
    TorsionGroup torsion;
    std::vector<RationalPoint> generators;  // non-torsion search hits
    int rank_lower_bound = 0;
    u64 search_height = 0;
    bool truncated = false;
};

RankReport rank_search(const CurveQ& c, u64 H, int relation_bound);

} // namespace ecbsd

#endif
