#ifndef ECBSD_POINT_COUNT_HPP
#define ECBSD_POINT_COUNT_HPP

// Point counts N_p and N_{p^m}, Frobenius traces a_p, and the extension-field
// brute-force count used to cross-check the trace recurrence.

#include <optional>
#include <vector>

#include "ecbsd/curve.hpp"

namespace ecbsd {

// Budgets and thresholds.
inline constexpr u64 kNaiveMaxP = 1'000'000;       // enumeration budget
inline constexpr u64 kResidueTableCap = u64(1) << 24;
inline constexpr u64 kBsgsMinP = 230;              // BSGS needs p > 229
inline constexpr u64 kBsgsThreshold = u64(1) << 16; // naive below, BSGS above
inline constexpr u64 kExtMaxQ = 1'000'000;         // p^m budget

/// Per-prime record. For bad p: good = false, a_p = 0 by convention, n_p = 0.
struct LocalData {
    u64 p = 0;
    bool good = false;
    u64 n_p = 0;
    i64 a_p = 0;
    std::vector<i64> traces;   // t_m = pi^m + conj(pi)^m for m = 1..M
};

enum class NaiveMethod { Auto, ResidueTable, LegendreSymbol };

/// N_p = 1 + sum_x (1 + chi(x^3 - a x - b)), chi the quadratic character.
u64 count_points_naive(const CurveFp& c, NaiveMethod method = NaiveMethod::Auto);

/// Group order via baby-step/giant-step inside the Hasse interval,
/// combining random point orders until a unique multiple remains.
/// nullopt = ambiguous after the retry budget (caller may fall back to naive).
std::optional<u64> count_points_bsgs(const CurveFp& c);

/// a_p = p + 1 - N_p, with the Hasse bound enforced as a postcondition.
i64 trace_ap(const CurveFp& c);

/// Reduce and count; fills traces t_1..t_M via t_m = a_p t_{m-1} - p t_{m-2}.
LocalData local_data(const CurveQ& c, u64 p, int M = 3);

/// N_{p^m} = p^m + 1 - t_m from the trace recurrence.
i64 npm_from_ap(const LocalData& d, int m);

/// F_{p^m} as F_p[t] modulo the lexicographically smallest monic irreducible.
struct ExtField {
    u64 p = 0;
    int m = 1;
    std::vector<u64> modulus;  // c_0..c_{m-1} of t^m + c_{m-1} t^{m-1} + ... + c_0
};

ExtField make_ext_field(u64 p, int m);

/// Exhaustive count over F_{p^m} (includes the point at infinity).
u64 count_points_ext(const CurveFp& c, int m);

/// a_p for many primes at once (parallel over primes, deterministic result).
/// Bad primes get LocalData{good=false, a_p=0}.
std::vector<LocalData> local_data_batch(const CurveQ& c, const std::vector<u64>& primes, int M = 1);

} // namespace ecbsd

#endif
