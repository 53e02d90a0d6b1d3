#ifndef ECBSD_LOCAL_ZETA_HPP
#define ECBSD_LOCAL_ZETA_HPP

// The local zeta function of E_p as a rational function, its power-series
// side, and the exact-arithmetic rationality check between the two.

#include <vector>

#include "ecbsd/point_count.hpp"

namespace ecbsd {

inline constexpr double kPoleEps = 1e-12;
inline constexpr int kRationalityMaxM = 6;

/// Numerator 1 - a_p u + p u^2 (good) or 1 (bad) over (1-u)(1-pu).
struct LocalZeta {
    u64 p = 0;
    bool good = false;
    i64 a_p = 0;
};

LocalZeta local_zeta_factor(const LocalData& d);

/// [N_p, N_{p^2}, ..., N_{p^M}], the exponent data of the series side.
std::vector<i64> zeta_series_coeffs(const LocalData& d, int M);

/// Expands log[(1 - a_p u + p u^2)/((1-u)(1-pu))] as a formal power series
/// with exact rationals and checks the u^m coefficient equals N_{p^m}/m for
/// m = 1..M. The series log is computed generically (integrate P'/P), so the
/// route is independent of the trace recurrence it is checked against.
bool verify_rationality(const LocalData& d, int M);

/// Good: (1 - a_p p^-s + p^(1-2s)) / ((1 - p^-s)(1 - p^(1-s))).
/// Bad:  1 / ((1 - p^-s)(1 - p^(1-s))).
/// Refuses within kPoleEps of the denominator zeros (s near 0 or 1).
double zeta_local_eval(const LocalData& d, double s);

} // namespace ecbsd

#endif
