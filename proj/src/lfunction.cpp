#include "ecbsd/lfunction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ecbsd/point_count.hpp"

namespace ecbsd {

DirichletCoeffs dirichlet_coeffs(const CurveQ& c, u64 T) {
    if (T < 1) throw usage_error("dirichlet_coeffs: T must be >= 1");
    if (T > kDirichletMaxT)
        throw refusal_error("dirichlet_coeffs: T exceeds the coefficient budget");
    if (T == 1) return dirichlet_coeffs_from(T, {});
    return dirichlet_coeffs_from(T, local_data_batch(c, primes_up_to(T), 1));
}

DirichletCoeffs dirichlet_coeffs_from(u64 T, const std::vector<LocalData>& rows) {
    if (T < 1) throw usage_error("dirichlet_coeffs: T must be >= 1");
    if (T > kDirichletMaxT)
        throw refusal_error("dirichlet_coeffs: T exceeds the coefficient budget");

    DirichletCoeffs out;
    out.T = T;
    out.a.assign(T + 1, 0);
    out.a[1] = 1;
    if (T == 1) return out;

    std::vector<u64> primes = primes_up_to(T);
    std::vector<i64> ap_of(T + 1, 0);
    std::vector<std::uint8_t> good(T + 1, 0);
    std::vector<std::uint8_t> seen(T + 1, 0);
    for (const auto& row : rows) {
        if (row.p > T) continue;
        ap_of[row.p] = row.a_p;
        good[row.p] = row.good ? 1 : 0;
        seen[row.p] = 1;
    }
    for (u64 p : primes)
        if (!seen[p])
            throw usage_error("dirichlet coefficient rows do not cover prime " + std::to_string(p));

    // smallest-prime-factor sieve drives the multiplicative fill
    std::vector<std::uint32_t> spf(T + 1, 0);
    for (u64 p : primes)
        for (u64 j = p; j <= T; j += p)
            if (!spf[j]) spf[j] = static_cast<std::uint32_t>(p);

    for (u64 n = 2; n <= T; ++n) {
        u64 p = spf[n];
        u64 m = n / p;
        u64 pk = p;
        while (m % p == 0) { pk *= p; m /= p; }
        if (m == 1) {
            // n = p^k: recurrence at good p, trivial local factor at bad p
            if (!good[p]) {
                out.a[n] = 0;
            } else if (n == p) {
                out.a[n] = ap_of[p];
            } else {
                out.a[n] = ap_of[p] * out.a[n / p] - static_cast<i64>(p) * out.a[n / (p * p)];
            }
        } else {
            out.a[n] = out.a[pk] * out.a[m];
        }
    }
    return out;
}

double l_truncated(const DirichletCoeffs& coeffs, double s) {
    if (coeffs.T < 1 || coeffs.a.size() < 2)
        throw usage_error("l_truncated: empty coefficient list");
    if (!(s > 0.5)) throw usage_error("l_truncated requires s > 1/2");
    double sum = 0.0;
    for (u64 n = coeffs.T; n >= 1; --n) {       // small terms first
        if (coeffs.a[n] != 0)
            sum += static_cast<double>(coeffs.a[n]) * std::pow(static_cast<double>(n), -s);
    }
    return sum;
}

namespace {

void check_pole(u64 p, double s) {
    double ps = std::pow(static_cast<double>(p), -s);
    double p1s = std::pow(static_cast<double>(p), 1.0 - s);
    if (std::abs(1.0 - ps) < kPoleEps || std::abs(1.0 - p1s) < kPoleEps)
        throw refusal_error("product form: s too close to a pole of a local factor");
}

} // namespace

double l_paper_form(const std::vector<LocalData>& rows, double s, u64 P, double k1) {
    if (P > kPaperMaxP) throw refusal_error("l_paper_form: prime bound exceeds budget");
    double value = -0.5 * k1;
    for (const auto& row : rows) {
        if (!row.good || row.p > P) continue;
        check_pole(row.p, s);
        double p = static_cast<double>(row.p);
        double ps = std::pow(p, -s);
        double num = (1.0 - ps) * (1.0 - std::pow(p, 1.0 - s));
        double den = 1.0 - static_cast<double>(row.a_p) * ps + std::pow(p, 1.0 - 2.0 * s);
        value *= num / den;
    }
    return value;
}

double l_paper_form(const CurveQ& c, double s, u64 P, double k1) {
    if (P > kPaperMaxP) throw refusal_error("l_paper_form: prime bound exceeds budget");
    if (P < 2) return -0.5 * k1;
    return l_paper_form(local_data_batch(c, primes_up_to(P), 1), s, P, k1);
}

double thm1_factor(const LocalData& row, double eps) {
    if (!row.good) return 1.0;
    double p = static_cast<double>(row.p);
    double pe = std::pow(p, eps);
    return (p * pe - 1.0) * (pe - 1.0) / (p * pe - static_cast<double>(row.a_p) * pe + 1.0);
}

double thm1_partial_product(const std::vector<LocalData>& rows, double eps, u64 P) {
    if (!(eps > 0.0) || eps > 1.0) throw usage_error("thm1 eps must lie in (0, 1]");
    if (P > kPaperMaxP) throw refusal_error("thm1_partial_product: prime bound exceeds budget");
    double value = -0.5;
    for (const auto& row : rows)
        if (row.p <= P) value *= thm1_factor(row, eps);
    return value;
}

double thm1_partial_product(const CurveQ& c, double eps, u64 P) {
    if (!(eps > 0.0) || eps > 1.0) throw usage_error("thm1 eps must lie in (0, 1]");
    if (P > kPaperMaxP) throw refusal_error("thm1_partial_product: prime bound exceeds budget");
    if (P < 2) return -0.5;
    return thm1_partial_product(local_data_batch(c, primes_up_to(P), 1), eps, P);
}

MertensTable mertens(u64 N) {
    if (N < 1) throw usage_error("mertens: N must be >= 1");
    if (N > kMertensMaxN) throw refusal_error("mertens: N exceeds the sieve budget");
    auto mu = mobius_up_to(N);
    MertensTable t;
    t.values.resize(N);
    std::int32_t acc = 0;
    for (u64 n = 1; n <= N; ++n) {
        acc += mu[n];
        t.values[n - 1] = acc;
    }
    return t;
}

double k1_partial(const K1Config& cfg, K1Mode mode) {
    if (!(cfg.c > 1.0)) throw usage_error("k1 config requires c > 1");
    if (cfg.N < 1) throw usage_error("k1 config requires N >= 1");
    if (mode == K1Mode::ExactMertens) {
        MertensTable M = mertens(cfg.N);
        double sum = 0.0;
        for (u64 n = 1; n <= cfg.N; ++n) {
            double nd = static_cast<double>(n);
            sum += static_cast<double>(M(n)) * (1.0 / (nd + 1.0) - 1.0 / nd);
        }
        return sum;
    }
    double factor = cfg.c / (cfg.c - 1.0);
    double sum = 0.0;
    for (u64 n = 1; n <= cfg.N; ++n) {
        double nd = static_cast<double>(n);
        sum += factor * (0.5 * std::sqrt(nd) + 1.0) * (1.0 / (nd + 1.0) - 1.0 / nd);
    }
    return sum;
}

double k1_closed_form(double c) { return -2.0 * c / (c - 1.0); }

double zeta_riemann_approx(double s, u64 N) {
    if (s < 0.0) throw usage_error("zeta_riemann_approx requires s >= 0");
    if (N < 10) throw usage_error("zeta_riemann_approx requires N >= 10");
    if (std::abs(s - 1.0) < 1e-9) throw refusal_error("zeta_riemann_approx: pole at s = 1");
    double sum = 0.0;
    for (u64 n = N; n >= 1; --n) sum += std::pow(static_cast<double>(n), -s);
    double Nd = static_cast<double>(N);
    return sum + std::pow(Nd, 1.0 - s) / (s - 1.0) - 0.5 * std::pow(Nd, -s);
}

// --- Taylor extraction --------------------------------------------------------

namespace {

// Newton divided differences on nodes xs, expanded to monomial coefficients.
std::vector<double> divided_difference_coeffs(const std::vector<double>& xs,
                                              const std::vector<double>& ys) {
    const size_t k = xs.size();
    std::vector<double> dd(ys);
    for (size_t j = 1; j < k; ++j)
        for (size_t i = k - 1; i >= j; --i)
            dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - j]);

    std::vector<double> poly(k, 0.0);
    for (size_t jj = k; jj-- > 0;) {
        std::vector<double> next(k, 0.0);
        for (size_t i = 0; i + 1 < k; ++i) {
            next[i + 1] += poly[i];
            next[i] -= xs[jj] * poly[i];
        }
        next[0] += dd[jj];
        poly = next;
    }
    return poly;
}

// infinity-norm condition number of the Vandermonde on the given nodes
double vandermonde_condition(const std::vector<double>& xs) {
    const size_t n = xs.size();
    std::vector<std::vector<double>> m(n, std::vector<double>(2 * n, 0.0));
    double norm_a = 0.0;
    for (size_t i = 0; i < n; ++i) {
        double pw = 1.0, row = 0.0;
        for (size_t j = 0; j < n; ++j) {
            m[i][j] = pw;
            row += std::abs(pw);
            pw *= xs[i];
        }
        m[i][n + i] = 1.0;
        norm_a = std::max(norm_a, row);
    }
    // Gauss-Jordan with partial pivoting
    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        for (size_t r = col + 1; r < n; ++r)
            if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
        if (m[piv][col] == 0.0) return std::numeric_limits<double>::infinity();
        std::swap(m[piv], m[col]);
        double d = m[col][col];
        for (auto& v : m[col]) v /= d;
        for (size_t r = 0; r < n; ++r) {
            if (r == col || m[r][col] == 0.0) continue;
            double f = m[r][col];
            for (size_t j = 0; j < 2 * n; ++j) m[r][j] -= f * m[col][j];
        }
    }
    double norm_inv = 0.0;
    for (size_t i = 0; i < n; ++i) {
        double row = 0.0;
        for (size_t j = 0; j < n; ++j) row += std::abs(m[i][n + j]);
        norm_inv = std::max(norm_inv, row);
    }
    return norm_a * norm_inv;
}

std::vector<double> coeffs_on_grid(const std::function<double(double)>& L,
                                   double h, int K) {
    std::vector<double> xs(K + 1), ys(K + 1);
    for (int j = 0; j <= K; ++j) {
        xs[j] = (j + 1) * h;
        ys[j] = L(1.0 + xs[j]);
    }
    return divided_difference_coeffs(xs, ys);
}

} // namespace

TaylorEstimate taylor_from_evaluator(const std::function<double(double)>& L,
                                     const GridConfig& g) {
    if (!(g.h > 0.0)) throw usage_error("grid step must be positive");
    if (g.K < 0 || g.K > 16) throw usage_error("grid order K must lie in [0, 16]");
    if (!(g.tau > 0.0)) throw usage_error("rank threshold tau must be positive");

    // conditioning is worst on the fine grid; refuse before evaluating
    std::vector<double> fine_nodes(g.K + 1);
    for (int j = 0; j <= g.K; ++j) fine_nodes[j] = (j + 1) * g.h / 2.0;
    double cond = vandermonde_condition(fine_nodes);
    if (cond > g.cond_cap)
        throw refusal_error("taylor fit ill-conditioned (cond=" + std::to_string(cond) +
                            "); shrink K or grow T");

    std::vector<double> coarse = coeffs_on_grid(L, g.h, g.K);
    std::vector<double> fine = coeffs_on_grid(L, g.h / 2.0, g.K);

    TaylorEstimate est;
    est.h = g.h;
    est.tau = g.tau;
    est.c.resize(g.K + 1);
    est.c_err.resize(g.K + 1);
    for (int k = 0; k <= g.K; ++k) {
        // leading interpolation error of c_k is O(h^{K+1-k})
        double scale = std::pow(2.0, g.K + 1 - k);
        est.c[k] = (scale * fine[k] - coarse[k]) / (scale - 1.0);
        est.c_err[k] = std::abs(fine[k] - coarse[k]);
    }

    est.analytic_rank = g.K + 1;
    est.leading = 0.0;
    for (int k = 0; k <= g.K; ++k) {
        if (std::abs(est.c[k]) > g.tau) {
            est.analytic_rank = k;
            est.leading = est.c[k];
            break;
        }
    }
    return est;
}

TaylorEstimate taylor_estimate(const CurveQ& curve, const GridConfig& g) {
    DirichletCoeffs coeffs = dirichlet_coeffs(curve, g.T);
    auto L = [&coeffs](double s) { return l_truncated(coeffs, s); };
    return taylor_from_evaluator(L, g);
}

} // namespace ecbsd
