#ifndef ECBSD_LFUNCTION_HPP
#define ECBSD_LFUNCTION_HPP

// Global L-function machinery: multiplicative Dirichlet coefficients, the
// truncated standard-form series used for rank estimation, the verbatim
// product forms recorded as experiments, the Mertens/k1 sums, and the Taylor
// coefficient extraction at s = 1.

#include <functional>
#include <vector>

#include "ecbsd/point_count.hpp"

namespace ecbsd {

inline constexpr u64 kDirichletMaxT = 1'000'000;
inline constexpr u64 kPaperMaxP = 100'000;
inline constexpr u64 kMertensMaxN = 10'000'000;

/// Multiplicative coefficients a_1..a_T. Good primes follow the recurrence
/// a_{p^k} = a_p a_{p^{k-1}} - p a_{p^{k-2}}; bad primes contribute the
/// trivial local factor, so a_{p^k} = 0 for k >= 1.
struct DirichletCoeffs {
    u64 T = 0;
    std::vector<i64> a;        // a[n] for n = 1..T; a[0] unused

    i64 operator[](u64 n) const { return a[n]; }
};

DirichletCoeffs dirichlet_coeffs(const CurveQ& c, u64 T);

/// The same fill from precomputed per-prime data covering all primes <= T
/// (as produced by local_data_batch or the a_p cache).
DirichletCoeffs dirichlet_coeffs_from(u64 T, const std::vector<LocalData>& rows);

/// Partial sum  sum_{n<=T} a_n n^{-s},  s > 1/2.
double l_truncated(const DirichletCoeffs& coeffs, double s);

/// -0.5 * k1 * prod_{good p <= P} (1 - p^-s)(1 - p^(1-s)) / (1 - a_p p^-s + p^(1-2s)).
/// Same pole guard as zeta_local_eval.
double l_paper_form(const CurveQ& c, double s, u64 P, double k1);
double l_paper_form(const std::vector<LocalData>& rows, double s, u64 P, double k1);

/// -0.5 * prod_{good p <= P} (p p^eps - 1)(p^eps - 1) / (p p^eps - a_p p^eps + 1).
/// Recorded experiment output; asserts nothing about any limit.
double thm1_partial_product(const CurveQ& c, double eps, u64 P);
double thm1_partial_product(const std::vector<LocalData>& rows, double eps, u64 P);

/// One good-prime factor of the product above (1.0 for bad rows).
double thm1_factor(const LocalData& row, double eps);

/// Mertens function values M(1)..M(N) from an exact Moebius sieve.
struct MertensTable {
    std::vector<std::int32_t> values;   // values[n-1] = M(n)

    i64 operator()(u64 n) const { return values[n - 1]; }
    u64 size() const { return values.size(); }
};

MertensTable mertens(u64 N);

struct K1Config {
    double c = 1.1;            // must be > 1
    u64 N = 100'000;
};

enum class K1Mode { ExactMertens, PaperSubstitution };

/// ExactMertens:      sum_{n<=N} M(n) (1/(n+1) - 1/n).
/// PaperSubstitution: same sum with M(n) replaced by (c/(c-1))(0.5 sqrt(n) + 1).
/// Both are recorded measurements; -2c/(c-1) is available separately for
/// side-by-side display and is never asserted against them.
double k1_partial(const K1Config& cfg, K1Mode mode);
double k1_closed_form(double c);

/// sum_{n<=N} n^-s + N^(1-s)/(s-1) - N^-s/2  (first-order Euler-Maclaurin).
/// Accepts s >= 0, s != 1, N >= 10; at s = 0 the value is exactly -1/2.
double zeta_riemann_approx(double s, u64 N);

struct GridConfig {
    double h = 0.05;           // grid step; nodes s = 1 + j h, j = 1..K+1
    int K = 3;                 // highest Taylor coefficient extracted
    double tau = 0.2;          // rank threshold on |c_n|
    u64 T = 100'000;           // series truncation
    double cond_cap = 1e12;    // Vandermonde condition refusal cap
};

struct TaylorEstimate {
    double h = 0;
    double tau = 0;
    std::vector<double> c;        // c_0..c_K, Richardson-extrapolated
    std::vector<double> c_err;    // |c(h) - c(h/2)| per coefficient
    int analytic_rank = 0;        // smallest n with |c_n| > tau; K+1 if none
    double leading = 0;           // c_{analytic_rank}, or 0 when saturated
};

/// Divided-difference extraction of c_0..c_K from values of L on the grids
/// 1 + j h and 1 + j h/2 (j = 1..K+1), Richardson-combined per coefficient.
TaylorEstimate taylor_from_evaluator(const std::function<double(double)>& L,
                                     const GridConfig& g);

/// The same extraction applied to l_truncated of this curve's coefficients.
TaylorEstimate taylor_estimate(const CurveQ& curve, const GridConfig& g);

} // namespace ecbsd

#endif
