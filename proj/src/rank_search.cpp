#include "ecbsd/rank_search.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <thread>

namespace ecbsd {

namespace {

// f(x) = x^3 - A x - C
BigInt cubic(const BigInt& A, const BigInt& C, const BigInt& x) {
    return x * x * x - A * x - C;
}

// exact integer roots of x^3 - A x - C. The derivative vanishes at
// +-sqrt(A/3); bisection runs only on pieces that are certainly monotone
// over the integers, and the ~2-integer slivers around the critical points
// are checked directly.
std::vector<BigInt> integer_cubic_roots(const BigInt& A, const BigInt& C) {
    BigInt bound = 2 + (abs(A) > abs(C) ? abs(A) : abs(C));   // Cauchy-style root bound
    std::vector<BigInt> roots;
    auto check = [&](const BigInt& x) {
        if (cubic(A, C, x) == 0) roots.push_back(x);
    };
    // monotone bisection; direction +1 increasing, -1 decreasing
    auto bisect = [&](BigInt lo, BigInt hi, int dir) {
        if (lo > hi) return;
        BigInt flo = cubic(A, C, lo), fhi = cubic(A, C, hi);
        if (flo == 0) roots.push_back(lo);
        if (fhi == 0) roots.push_back(hi);
        if (sgn(flo) * dir >= 0 || sgn(fhi) * dir <= 0) return;
        while (hi - lo > 1) {
            BigInt mid = (lo + hi) / 2;
            BigInt fm = cubic(A, C, mid);
            if (fm == 0) { roots.push_back(mid); return; }
            if (sgn(fm) * dir < 0) lo = mid;
            else hi = mid;
        }
    };

    if (A <= 0) {
        bisect(-bound, bound, +1);   // f' = 3x^2 - A >= 0
    } else {
        BigInt m = sqrt(A / 3);      // floor of the critical point
        BigInt inner = m + 2;        // strictly past the hump on both sides
        if (inner > bound) inner = bound;
        bisect(-bound, -inner, +1);
        for (BigInt x = -inner; x <= -m + 1; ++x) check(x);
        if (m >= 1) bisect(-m + 1, m - 1, -1);
        for (BigInt x = m - 1; x <= inner; ++x) check(x);
        bisect(inner, bound, +1);
    }
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
    return roots;
}

// square divisors of |n|: all y >= 1 with y^2 | n
std::vector<BigInt> square_divisor_roots(BigInt n) {
    n = abs(n);
    std::map<BigInt, int> fac;
    // trial part
    for (u64 p = 2; p <= 100000 && n > 1; p = (p == 2 ? 3 : p + 2)) {
        while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
            ++fac[BigInt(static_cast<unsigned long>(p))];
            n /= static_cast<unsigned long>(p);
        }
        BigInt pp = BigInt(static_cast<unsigned long>(p));
        if (pp * pp > n) break;
    }
    if (n > 1) {
        // leftover: prime, or a square, or needs rho
        if (mpz_probab_prime_p(n.get_mpz_t(), 30)) {
            ++fac[n];
        } else {
            BigInt r = sqrt(n);
            if (r * r == n && mpz_probab_prime_p(r.get_mpz_t(), 30)) {
                fac[r] += 2;
            } else {
                // Pollard rho on mpz; desk-scale discriminants keep this short
                BigInt m = n;
                std::vector<BigInt> stack = {m};
                while (!stack.empty()) {
                    BigInt v = stack.back();
                    stack.pop_back();
                    if (v == 1) continue;
                    if (mpz_probab_prime_p(v.get_mpz_t(), 30)) { ++fac[v]; continue; }
                    BigInt x = 2, y = 2, d = 1, cadd = 1;
                    while (d == 1 || d == v) {
                        d = 1; x = 2; y = 2;
                        while (d == 1) {
                            x = (x * x + cadd) % v;
                            y = (y * y + cadd) % v;
                            y = (y * y + cadd) % v;
                            d = gcd(abs(x - y), v);
                        }
                        if (d == v) ++cadd;
                    }
                    stack.push_back(d);
                    stack.push_back(v / d);
                }
            }
        }
    }
    std::vector<BigInt> ys = {1};
    for (const auto& [p, e] : fac) {
        size_t cur = ys.size();
        BigInt pk = 1;
        for (int k = 1; 2 * k <= e; ++k) {
            pk *= p;
            for (size_t i = 0; i < cur; ++i) ys.push_back(ys[i] * pk);
        }
    }
    std::sort(ys.begin(), ys.end());
    ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
    return ys;
}

int order_up_to_cap(const CurveQ& c, const RationalPoint& P) {
    RationalPoint Q = P;
    for (int n = 1; n <= kTorsionOrderCap; ++n) {
        if (Q.is_infinity()) return n;
        Q = rat_add(c, Q, P);
    }
    return 0;   // no order <= 12: infinite by the torsion classification
}

} // namespace

bool is_torsion(const CurveQ& c, const RationalPoint& P) {
    if (!on_curve(c, P)) throw usage_error("is_torsion: point not on the curve");
    if (P.is_infinity()) return true;
    RationalPoint Q = P;
    for (int n = 1; n <= kTorsionOrderCap; ++n) {
        if (Q.is_infinity()) return true;
        Q = rat_add(c, Q, P);
    }
    return false;
}

TorsionGroup torsion_subgroup(const CurveQ& c) {
    std::vector<RationalPoint> pts = {RationalPoint::infinity()};

    auto consider = [&](const BigInt& x, const BigInt& y) {
        RationalPoint P = RationalPoint::from_uvd(c, x, y, 1);
        if (is_torsion(c, P)) {
            if (std::find(pts.begin(), pts.end(), P) == pts.end()) pts.push_back(P);
        }
    };

    for (const BigInt& x : integer_cubic_roots(c.A(), c.B()))
        consider(x, 0);
    for (const BigInt& y : square_divisor_roots(c.discriminant())) {
        for (const BigInt& x : integer_cubic_roots(c.A(), c.B() + y * y)) {
            consider(x, y);
            consider(x, -y);
        }
    }

    // classify from the element orders
    int g = static_cast<int>(pts.size());
    int exponent = 1;
    int two_torsion = 0;    // elements with 2P = O, identity included
    for (const auto& P : pts) {
        int ord = P.is_infinity() ? 1 : order_up_to_cap(c, P);
        if (ord == 0) throw internal_error("non-torsion point classified as torsion");
        exponent = std::max(exponent, ord);
        if (ord <= 2) ++two_torsion;
    }

    std::sort(pts.begin(), pts.end(), [](const RationalPoint& a, const RationalPoint& b) {
        if (a.is_infinity() != b.is_infinity()) return a.is_infinity();
        if (a.is_infinity()) return false;
        if (a.x() != b.x()) return a.x() < b.x();
        return a.y() < b.y();
    });

    TorsionGroup t;
    t.elements = std::move(pts);
    if (exponent == g) {
        bool allowed = (g <= 10) || g == 12;
        if (!allowed) throw internal_error("torsion structure Z/" + std::to_string(g) +
                                           "Z outside the rational classification");
        t.structure = "Z/" + std::to_string(g) + "Z";
    } else {
        // non-cyclic: must be Z/2 x Z/2m with full 2-torsion
        int m = exponent / 2;
        bool allowed = g == 2 * exponent && exponent % 2 == 0 && two_torsion == 4 && m <= 4;
        if (!allowed) throw internal_error("torsion structure of order " + std::to_string(g) +
                                           " outside the rational classification");
        t.structure = "Z/2Z x Z/" + std::to_string(exponent) + "Z";
    }
    return t;
}

SearchResult search_points(const CurveQ& c, u64 H) {
    if (H > kSearchMaxH) throw refusal_error("search_points: height bound exceeds budget");
    SearchResult res;
    const u64 D = isqrt_u64(H);
    if (D == 0) return res;

    const bool small_model = mpz_sizeinbase(c.A().get_mpz_t(), 2) <= 30 &&
                             mpz_sizeinbase(c.B().get_mpz_t(), 2) <= 30;
    const i64 A_small = small_model ? static_cast<i64>(c.A().get_si()) : 0;
    const i64 B_small = small_model ? static_cast<i64>(c.B().get_si()) : 0;

    // squares mod 64/63/65/11 quick rejection masks
    auto build_mask = [](u64 mod) {
        std::vector<std::uint8_t> mask(mod, 0);
        for (u64 i = 0; i < mod; ++i) mask[i * i % mod] = 1;
        return mask;
    };
    static const std::vector<std::uint8_t> m64 = build_mask(64);
    static const std::vector<std::uint8_t> m63 = build_mask(63);
    static const std::vector<std::uint8_t> m65 = build_mask(65);
    static const std::vector<std::uint8_t> m11 = build_mask(11);

    auto i128_mod = [](i128 v, u64 m) { return static_cast<u64>((v % m + m) % m); };
    auto isqrt_i128 = [](i128 v) {
        if (v < 0) return i128(-1);
        long double approx = sqrtl(static_cast<long double>(v));
        i128 r = static_cast<i128>(approx);
        while (r > 0 && r * r > v) --r;
        while ((r + 1) * (r + 1) <= v) ++r;
        return r;
    };

    std::atomic<bool> truncated{false};
    std::vector<std::vector<RationalPoint>> per_d(D + 1);

    auto scan_denominator = [&](u64 d) {
        std::vector<u64> dfac = d > 1 ? prime_factors(d) : std::vector<u64>{};
        i128 u_limit_128 = i128(H) * d * d;
        u64 u_limit;
        if (u_limit_128 > i128(kSearchNumeratorBudget)) {
            u_limit = kSearchNumeratorBudget;
            truncated.store(true, std::memory_order_relaxed);
        } else {
            u_limit = static_cast<u64>(u_limit_128);
        }

        std::vector<RationalPoint>& found = per_d[d];
        const i128 d2 = i128(d) * d;
        const i128 d4 = d2 * d2;
        const i128 d6 = d4 * d2;

        auto try_u_small = [&](i64 u) {
            i128 rhs = i128(u) * u * u - i128(A_small) * u * d4 - i128(B_small) * d6;
            if (rhs < 0) return;
            if (!m64[static_cast<u64>(rhs & 63)]) return;
            if (!m63[i128_mod(rhs, 63)] || !m65[i128_mod(rhs, 65)] || !m11[i128_mod(rhs, 11)]) return;
            i128 v = isqrt_i128(rhs);
            if (v * v != rhs) return;
            found.push_back(RationalPoint::from_uvd(c, BigInt(static_cast<long>(u)),
                                                    BigInt(static_cast<long>(static_cast<i64>(v))),
                                                    BigInt(static_cast<long>(d))));
        };
        auto try_u_big = [&](i64 u) {
            BigInt ub(static_cast<long>(u)), db(static_cast<long>(d));
            BigInt d2b = db * db, d4b = d2b * d2b;
            BigInt rhs = ub * ub * ub - c.A() * ub * d4b - c.B() * d4b * d2b;
            if (rhs < 0) return;
            BigInt v = sqrt(rhs);
            if (v * v != rhs) return;
            found.push_back(RationalPoint::from_uvd(c, ub, v, db));
        };

        for (u64 au = 0; au <= u_limit; ++au) {
            if (d > 1) {
                bool coprime = true;
                for (u64 q : dfac)
                    if (au % q == 0) { coprime = false; break; }
                if (!coprime) continue;
            }
            for (int sign = 0; sign < (au == 0 ? 1 : 2); ++sign) {
                i64 u = sign ? -static_cast<i64>(au) : static_cast<i64>(au);
                if (small_model) try_u_small(u);
                else try_u_big(u);
            }
        }
    };

    unsigned workers = std::min<unsigned>(std::thread::hardware_concurrency(), 8);
    if (workers <= 1 || D < 4) {
        for (u64 d = 1; d <= D; ++d) scan_denominator(d);
    } else {
        std::atomic<u64> next{1};
        auto work = [&] {
            for (u64 d = next.fetch_add(1); d <= D; d = next.fetch_add(1)) scan_denominator(d);
        };
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < workers; ++t) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }

    for (u64 d = 1; d <= D; ++d) {
        auto& v = per_d[d];
        // square roots are taken nonnegative, so v >= 0 already dedups +-P
        std::sort(v.begin(), v.end(), [](const RationalPoint& a, const RationalPoint& b) {
            BigInt au = abs(a.u()), bu = abs(b.u());
            if (au != bu) return au < bu;
            return a.u() < b.u();
        });
        res.points.insert(res.points.end(), v.begin(), v.end());
    }
    res.truncated = truncated.load();
    return res;
}

IndependenceResult independence_lower_bound(const CurveQ& c,
                                            const std::vector<RationalPoint>& pts,
                                            int M) {
    if (M < 1) throw usage_error("relation bound must be >= 1");
    for (const auto& P : pts)
        if (is_torsion(c, P)) throw usage_error("independence_lower_bound expects non-torsion points");

    const int n = static_cast<int>(pts.size());
    if (n == 0) return {0, false};

    u64 ops = 0;
    bool budget_hit = false;

    // true when some 0 < max|m_i| <= M gives sum m_i P_i in torsion;
    // vectors whose first nonzero entry is negative are covered by symmetry
    auto has_relation = [&](const std::vector<int>& subset) {
        const int k = static_cast<int>(subset.size());
        std::vector<int> m(k, -M);
        while (!budget_hit) {
            int lead = 0;
            for (int i = 0; i < k; ++i)
                if (m[i] != 0) { lead = m[i]; break; }
            if (lead > 0) {
                RationalPoint acc = RationalPoint::infinity();
                for (int i = 0; i < k; ++i) {
                    if (m[i] == 0) continue;
                    acc = rat_add(c, acc, rat_mul(c, m[i], pts[subset[i]]));
                    ops += static_cast<u64>(std::abs(m[i])) + 1;
                }
                if (is_torsion(c, acc)) return true;
                ops += kTorsionOrderCap;
                if (ops > kIndependenceOpBudget) budget_hit = true;
            }
            int i = k - 1;
            while (i >= 0 && m[i] == M) { m[i] = -M; --i; }
            if (i < 0) break;
            ++m[i];
        }
        return false;
    };

    // independence is monotone under subsets: scan sizes downward, first
    // fully verified relation-free subset wins
    for (int size = n; size >= 1; --size) {
        std::vector<int> idx(size);
        for (int i = 0; i < size; ++i) idx[i] = i;
        while (true) {
            bool rel = has_relation(idx);
            if (budget_hit)
                return {1, true};   // a single non-torsion point is always independent
            if (!rel) return {size, false};
            int i = size - 1;
            while (i >= 0 && idx[i] == n - size + i) --i;
            if (i < 0) break;
            ++idx[i];
            for (int j = i + 1; j < size; ++j) idx[j] = idx[j - 1] + 1;
        }
    }
    return {0, false};
}

RankReport rank_search(const CurveQ& c, u64 H, int relation_bound) {
    RankReport r;
    r.torsion = torsion_subgroup(c);
    r.search_height = H;
    SearchResult found = search_points(c, H);
    r.truncated = found.truncated;
    for (const auto& P : found.points)
        if (!is_torsion(c, P)) r.generators.push_back(P);
    auto ind = independence_lower_bound(c, r.generators, relation_bound);
    r.rank_lower_bound = ind.lower_bound;
    r.truncated = r.truncated || ind.truncated;
    return r;
}

} // namespace ecbsd
