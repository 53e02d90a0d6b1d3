#include "ecbsd/local_zeta.hpp"

#include <cmath>

namespace ecbsd {

LocalZeta local_zeta_factor(const LocalData& d) {
    if (d.good) {
        // conjugate-root invariant of the numerator 1 - a_p u + p u^2
        if (i128(d.a_p) * d.a_p > i128(4) * d.p)
            throw internal_error("local zeta numerator discriminant positive (Hasse breach)");
        return LocalZeta{d.p, true, d.a_p};
    }
    return LocalZeta{d.p, false, 0};
}

std::vector<i64> zeta_series_coeffs(const LocalData& d, int M) {
    if (!d.good) throw usage_error("zeta_series_coeffs requires good reduction");
    std::vector<i64> out;
    out.reserve(M);
    for (int m = 1; m <= M; ++m) out.push_back(npm_from_ap(d, m));
    return out;
}

namespace {

using RatSeries = std::vector<mpq_class>;   // coefficients of u^0..u^M

// reciprocal of a polynomial with constant term 1, to order M
RatSeries inverse_series(const std::vector<mpq_class>& poly, int M) {
    RatSeries inv(M + 1, 0);
    inv[0] = 1;
    for (int m = 1; m <= M; ++m) {
        mpq_class s = 0;
        for (size_t k = 1; k < poly.size() && static_cast<int>(k) <= m; ++k)
            s += poly[k] * inv[m - k];
        inv[m] = -s;
    }
    return inv;
}

// log of a polynomial with constant term 1, to order M: integrate P'/P
RatSeries log_series(const std::vector<mpq_class>& poly, int M) {
    RatSeries inv = inverse_series(poly, M);
    RatSeries logc(M + 1, 0);
    for (int m = 1; m <= M; ++m) {
        mpq_class s = 0;   // coefficient of u^{m-1} in P' * P^{-1}
        for (size_t k = 1; k < poly.size() && static_cast<int>(k) <= m; ++k)
            s += static_cast<int>(k) * poly[k] * inv[m - k];
        logc[m] = s / m;
    }
    return logc;
}

} // namespace

bool verify_rationality(const LocalData& d, int M) {
    if (!d.good) throw usage_error("verify_rationality requires good reduction");
    if (M > kRationalityMaxM) throw usage_error("verify_rationality order cap is 6");
    if (M <= 0) return true;

    mpq_class p(static_cast<unsigned long>(d.p));
    std::vector<mpq_class> numer = {1, mpq_class(-d.a_p), p};
    std::vector<mpq_class> den1 = {1, -1};            // 1 - u
    std::vector<mpq_class> den2 = {1, -p};            // 1 - p u

    RatSeries ln = log_series(numer, M);
    RatSeries l1 = log_series(den1, M);
    RatSeries l2 = log_series(den2, M);

    for (int m = 1; m <= M; ++m) {
        mpq_class lhs = ln[m] - l1[m] - l2[m];
        mpq_class rhs(npm_from_ap(d, m), m);
        rhs.canonicalize();
        if (lhs != rhs) return false;
    }
    return true;
}

double zeta_local_eval(const LocalData& d, double s) {
    const double p = static_cast<double>(d.p);
    const double ps = std::pow(p, -s);
    const double p1s = std::pow(p, 1.0 - s);
    if (std::abs(1.0 - p1s) < kPoleEps || std::abs(1.0 - ps) < kPoleEps)
        throw refusal_error("zeta_local_eval: s too close to a pole of the local factor");
    const double den = (1.0 - ps) * (1.0 - p1s);
    if (!d.good) return 1.0 / den;
    const double num = 1.0 - static_cast<double>(d.a_p) * ps + std::pow(p, 1.0 - 2.0 * s);
    return num / den;
}

} // namespace ecbsd
